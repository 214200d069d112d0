#pragma once

// Squeezing generated by unitary evolution. Time enters only through the
// dimensionless product tau = eta * t.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "spinsq/squeezing.hpp"

namespace spinsq {

/// Hermitian generators evolve as exp(-i tau H); anti-Hermitian ones as exp(tau A).
struct Generator {
    CMatrix matrix;
    Symmetry kind;
    std::string label;

    Generator(CMatrix m, Symmetry k, std::string l) : matrix(std::move(m)), kind(k), label(std::move(l)) {
        if (matrix.rows() != 9 || matrix.cols() != 9) throw DimensionError("Generator: expected a 9x9 matrix");
        require_tag(matrix, kind);
    }
};

/// S1+ S2+ - S1- S2-, anti-Hermitian. exp(tau A) raises and lowers both spins in pairs.
inline Generator pair_exchange_generator() {
    const CMatrix up = embed(raising(), Subsystem::First) * embed(raising(), Subsystem::Second);
    const CMatrix down = embed(lowering(), Subsystem::First) * embed(lowering(), Subsystem::Second);
    return {up - down, Symmetry::AntiHermitian, "pair-exchange"};
}

/// S1x^2 S2y^2, Hermitian with non-negative spectrum.
inline Generator cross_quadratic_generator() {
    const auto& s = spin1_matrices();
    const CMatrix h = embed(s.x * s.x, Subsystem::First) * embed(s.y * s.y, Subsystem::Second);
    return {0.5 * (h + h.adjoint()), Symmetry::Hermitian, "cross-quadratic"};
}

/// Cached spectral propagator for one generator.
class Propagator {
public:
    explicit Propagator(const Generator& g)
        : exp_(g.kind == Symmetry::AntiHermitian ? SpectralExponential(g.matrix, Symmetry::AntiHermitian)
                                                 : SpectralExponential(CMatrix(-kI * g.matrix), Symmetry::AntiHermitian)) {}

    CoupledState operator()(const CoupledState& state, double tau) const {
        return CoupledState::from_vector(exp_.apply(tau, state.vector()), true);
    }

    CMatrix unitary(double tau) const { return exp_(tau); }

private:
    SpectralExponential exp_;
};

inline CoupledState evolve(const CoupledState& state, const Generator& g, double tau) {
    return Propagator(g)(state, tau);
}

struct Trajectory {
    std::vector<double> tau_grid;
    std::vector<CoupledState> states;
    std::vector<SqueezingReport> reports;
    FramePolicy policy;

    double min_xi() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& r : reports)
            if (r.valid) m = std::min(m, r.xi);
        return m;
    }
};

inline void require_ascending(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("trajectory: empty tau grid");
    if (grid.front() < 0.0) throw DomainError("trajectory: tau grid must start at or after 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("trajectory: tau grid must be strictly ascending");
}

/// States and reports along one evolution stage.
inline Trajectory trajectory(const CoupledState& state0, const Generator& g, const std::vector<double>& tau_grid,
                             const FramePolicy& policy) {
    require_ascending(tau_grid);
    const Propagator prop(g);
    Trajectory t{tau_grid, {}, {}, policy};
    t.states.reserve(tau_grid.size());
    t.reports.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        t.states.push_back(prop(state0, tau));
        t.reports.push_back(squeezing_report(t.states.back(), policy));
    }
    return t;
}

/// Stage 1 runs to `launch_tau`, then stage 2 sweeps its own grid from there.
inline Trajectory two_stage_trajectory(const CoupledState& state0, const Generator& stage1, double launch_tau,
                                       const Generator& stage2, const std::vector<double>& tau2_grid,
                                       const FramePolicy& policy) {
    return trajectory(evolve(state0, stage1, launch_tau), stage2, tau2_grid, policy);
}

struct TwoStageSearch {
    std::vector<double> tau1_grid;
    std::vector<double> tau2_grid;
    /// xi[i * tau2_grid.size() + j] for (tau1_grid[i], tau2_grid[j]); NaN when undefined.
    std::vector<double> xi;
    double min_xi = std::numeric_limits<double>::infinity();
    double argmin_tau1 = 0.0;
    double argmin_tau2 = 0.0;
};

/// Exhaustive search over the stage-1 launch time and the stage-2 time.
inline TwoStageSearch two_stage_search(const CoupledState& state0, const Generator& stage1,
                                       const std::vector<double>& tau1_grid, const Generator& stage2,
                                       const std::vector<double>& tau2_grid, const FramePolicy& policy) {
    require_ascending(tau1_grid);
    require_ascending(tau2_grid);
    const Propagator p1(stage1), p2(stage2);
    TwoStageSearch out{tau1_grid, tau2_grid, {}};
    out.xi.reserve(tau1_grid.size() * tau2_grid.size());
    for (double t1 : tau1_grid) {
        const CoupledState launch = p1(state0, t1);
        for (double t2 : tau2_grid) {
            const SqueezingReport r = squeezing_report(p2(launch, t2), policy);
            const double v = r.valid ? r.xi : std::numeric_limits<double>::quiet_NaN();
            out.xi.push_back(v);
            if (r.valid && v < out.min_xi) {
                out.min_xi = v;
                out.argmin_tau1 = t1;
                out.argmin_tau2 = t2;
            }
        }
    }
    return out;
}

} // namespace spinsq
