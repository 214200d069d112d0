#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "spinsq/dynamics.hpp"
#include "spinsq/states.hpp"
#include "support.hpp"

using namespace spinsq;
using testing_support::Rng;

namespace {

CVector basis_vec(int i, int j) { return CoupledState::basis(i, j).vector(); }

/// Largest amplitude outside the given flattened indices.
double leakage(const CoupledState& s, const std::vector<int>& support) {
    const CVector v = s.vector();
    double m = 0.0;
    for (int k = 0; k < 9; ++k)
        if (std::find(support.begin(), support.end(), k) == support.end()) m = std::max(m, std::abs(v[k]));
    return m;
}

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> v;
    for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
    return v;
}

} // namespace

TEST(PairExchange, ActionOnBasisStates) {
    const Generator g = pair_exchange_generator();
    EXPECT_EQ(g.kind, Symmetry::AntiHermitian);
    EXPECT_LE(anti_hermitian_defect(g.matrix), 1e-15);
    EXPECT_LE((g.matrix * basis_vec(2, 2) - 2.0 * basis_vec(1, 1)).norm(), 1e-14);
    EXPECT_LE((g.matrix * basis_vec(0, 0) + 2.0 * basis_vec(1, 1)).norm(), 1e-14);
}

TEST(PairExchange, LeavesDiagonalSpanInvariant) {
    const Generator g = pair_exchange_generator();
    for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {2, 2}}) {
        const CVector out = g.matrix * basis_vec(i, j);
        for (int k = 0; k < 9; ++k)
            if (k != 0 && k != 4 && k != 8) {
                EXPECT_EQ(std::abs(out[k]), 0.0);
            }
    }
}

TEST(CrossQuadratic, HermitianNonNegativeAndUnitary) {
    const Generator h = cross_quadratic_generator();
    EXPECT_EQ(h.kind, Symmetry::Hermitian);
    EXPECT_LE(hermitian_defect(h.matrix), 1e-15);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<CMatrix>(h.matrix).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-14);
    EXPECT_LE(unitarity_defect(Propagator(h).unitary(1.0)), 1e-12);
}

TEST(CrossQuadratic, PopulatesCornerAmplitudesAfterPairExchange) {
    const CoupledState launch = evolve(CoupledState::basis(0, 0), pair_exchange_generator(), 0.8);
    EXPECT_LE(leakage(launch, {0, 4, 8}), 1e-12);
    const CoupledState out = evolve(launch, cross_quadratic_generator(), 1.0);
    EXPECT_GT(std::abs(out(0, 2)), 1e-3);
    EXPECT_GT(std::abs(out(2, 0)), 1e-3);
    EXPECT_LE(leakage(out, {0, 2, 4, 6, 8}), 1e-12);
}

TEST(Generator, ValidatesShapeAndTag) {
    EXPECT_THROW(Generator(identity(3), Symmetry::Hermitian, "small"), DimensionError);
    EXPECT_THROW(Generator(identity(9), Symmetry::AntiHermitian, "wrong tag"), TagError);
}

TEST(Evolve, ZeroTimeSemigroupAndTaylor) {
    const Generator g = pair_exchange_generator();
    Rng rng(307);
    const CoupledState s = testing_support::random_state(rng);
    EXPECT_LE((evolve(s, g, 0.0).vector() - s.vector()).norm(), 1e-14);
    EXPECT_LE((evolve(evolve(s, g, 0.35), g, 0.35).vector() - evolve(s, g, 0.7).vector()).norm(), 1e-11);
    const Generator h = cross_quadratic_generator();
    EXPECT_LE((evolve(evolve(s, h, 0.5), h, 0.5).vector() - evolve(s, h, 1.0).vector()).norm(), 1e-11);

    CVector predicted = basis_vec(0, 0) - 0.02 * basis_vec(1, 1);
    predicted.normalize();
    EXPECT_GE(fidelity(evolve(CoupledState::basis(0, 0), g, 0.01).vector(), predicted), 1.0 - 1e-3);
}

TEST(Evolve, ForwardBackwardAndNorm) {
    Rng rng(311);
    for (const Generator& g : {pair_exchange_generator(), cross_quadratic_generator()}) {
        const Propagator p(g);
        for (int k = 0; k < 50; ++k) {
            const CVector psi = testing_support::random_state(rng).vector();
            const double tau = 0.1 * k;
            EXPECT_NEAR((p.unitary(tau) * psi).norm(), 1.0, 1e-12);
            EXPECT_LE((p.unitary(-tau) * (p.unitary(tau) * psi) - psi).norm(), 1e-11);
        }
    }
}

TEST(Trajectory, CoherentStartSqueezesBelowPointFour) {
    const Trajectory t = trajectory(CoupledState::basis(0, 0), pair_exchange_generator(), grid(0.0, 3.0, 301),
                                    Optimized{});
    EXPECT_NEAR(t.reports.front().xi, 1.0, 1e-12);
    EXPECT_LT(t.min_xi(), 0.4);
    for (const CoupledState& s : t.states) EXPECT_LE(leakage(s, {0, 4, 8}), 1e-12);
}

TEST(Trajectory, MixedStartNeverSqueezes) {
    const Trajectory t = trajectory(CoupledState::basis(0, 1), pair_exchange_generator(), grid(0.0, 3.0, 301),
                                    Optimized{});
    for (const SqueezingReport& r : t.reports) {
        ASSERT_TRUE(r.valid);
        EXPECT_GE(r.xi, 1.0 - 1e-9);
    }
    for (const CoupledState& s : t.states) EXPECT_LE(leakage(s, {1, 5}), 1e-12);
}

TEST(Trajectory, ConfigOneFamilyIsReachable) {
    // pair exchange from |1,1> stays inside the config-1 amplitude family with real amplitudes
    const Trajectory t =
        trajectory(CoupledState::basis(0, 0), pair_exchange_generator(), grid(0.0, 2.0, 21), MeanSpinAligned{});
    for (const CoupledState& s : t.states) {
        const CVector v = s.vector();
        for (int k : {0, 4, 8}) EXPECT_LE(std::abs(v[k].imag()), 1e-12);
    }
}

TEST(Trajectory, TimeReversalSymmetry) {
    // exp(-tau A) |1,1> differs from exp(tau A) |1,1> only by the sign of c22
    const Generator g = pair_exchange_generator();
    for (double tau : {0.3, 1.1, 2.4}) {
        const CoupledState f = evolve(CoupledState::basis(0, 0), g, tau);
        const CoupledState b = evolve(CoupledState::basis(0, 0), g, -tau);
        EXPECT_NEAR(std::abs(f(1, 1) + b(1, 1)), 0.0, 1e-12);
        EXPECT_NEAR(squeezing_parameter(f, Optimized{}), squeezing_parameter(b, Optimized{}), 1e-10);
    }
}

TEST(Trajectory, GridValidation) {
    const Generator g = pair_exchange_generator();
    const CoupledState s = CoupledState::basis(0, 0);
    EXPECT_THROW(trajectory(s, g, {}, MeanSpinAligned{}), DomainError);
    EXPECT_THROW(trajectory(s, g, {0.0, 0.5, 0.5}, MeanSpinAligned{}), DomainError);
    EXPECT_THROW(trajectory(s, g, {-0.1, 0.5}, MeanSpinAligned{}), DomainError);
}

TEST(TwoStage, SearchIncludesTheOneStageCurve) {
    const CoupledState s = CoupledState::basis(0, 0);
    const auto tau1 = grid(0.0, 3.0, 16), tau2 = grid(0.0, 3.0, 16);
    const TwoStageSearch search =
        two_stage_search(s, pair_exchange_generator(), tau1, cross_quadratic_generator(), tau2, Optimized{});
    ASSERT_EQ(search.xi.size(), 256u);
    const Trajectory one = trajectory(s, pair_exchange_generator(), tau1, Optimized{});
    for (std::size_t i = 0; i < tau1.size(); ++i) EXPECT_NEAR(search.xi[i * tau2.size()], one.reports[i].xi, 1e-12);
    EXPECT_LE(search.min_xi, one.min_xi());

    const Trajectory at =
        two_stage_trajectory(s, pair_exchange_generator(), search.argmin_tau1, cross_quadratic_generator(),
                             {search.argmin_tau2}, Optimized{});
    EXPECT_NEAR(at.reports.front().xi, search.min_xi, 1e-12);
}
