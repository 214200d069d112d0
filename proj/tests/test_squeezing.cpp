#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "spinsq/check.hpp"
#include "spinsq/closed_forms.hpp"
#include "spinsq/oracle.hpp"
#include "spinsq/squeezing.hpp"
#include "support.hpp"

using namespace spinsq;
using testing_support::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

const FramePolicy kAligned = MeanSpinAligned{};
const FramePolicy kOptimized = Optimized{};

/// Random frame whose axis is the mean-spin direction of the subsystem.
Frame random_in_plane_frame(const MeanSpin& ms, Rng& rng) {
    const Direction n = Direction::normalized(ms.vector);
    const Vec3 perp = testing_support::random_direction(rng).vec();
    return make_frame(n, Direction::normalized(perp - perp.dot(n.vec()) * n.vec()));
}

CoupledState rotate_both(const CoupledState& s, const Direction& axis, double angle) {
    return rotate(rotate(s, Subsystem::First, axis, angle), Subsystem::Second, axis, angle);
}

Frame rotate_frame(const Frame& f, const Direction& axis, double angle) {
    auto r = [&](const Direction& d) { return Direction::normalized(rotate_vector(d.vec(), axis, angle)); };
    return {r(f.n), r(f.n_perp), r(f.n_perp2)};
}

} // namespace

TEST(SqueezingReport, CoherentPairIsTheBoundaryForEveryPolicy) {
    const CoupledState s = CoupledState::basis(0, 0);
    for (const FramePolicy& p : {FramePolicy(FixedFrames{Frame::lab(), Frame::lab()}), kAligned, kOptimized}) {
        const SqueezingReport r = squeezing_report(s, p);
        ASSERT_TRUE(r.valid);
        EXPECT_NEAR(r.xi, 1.0, 1e-12);
        EXPECT_NEAR(r.var1, 0.5, 1e-15);
        EXPECT_NEAR(r.var2, 0.5, 1e-15);
        EXPECT_NEAR(r.cross, 0.0, 1e-15);
        EXPECT_NEAR(r.denominator(), 2.0, 1e-15);
        EXPECT_FALSE(r.squeezed());
    }
    EXPECT_NEAR(xi_oracle(s, Frame::lab(), Frame::lab()), 1.0, 1e-15);
}

TEST(SqueezingReport, ProductDiagonalFollowsCosHalfAngle) {
    for (double th = 0.05; th < 3.1; th += 0.05) {
        const CoupledState s = product(canonical_squeezed(th), canonical_squeezed(th));
        const SqueezingReport r = squeezing_report(s, kAligned);
        EXPECT_NEAR(r.xi, std::cos(th / 2.0), 1e-10) << th;
        EXPECT_NEAR(xi_oracle(s, r.frame1, r.frame2), r.xi, 1e-12);
        EXPECT_NEAR(r.cross, 0.0, 1e-12);
    }
    EXPECT_NEAR(squeezing_parameter(product(canonical_squeezed(kPi / 2), canonical_squeezed(kPi / 2)), kAligned),
                0.70710678118654752, 1e-12);
}

TEST(SqueezingReport, BothSubsystemsDegenerateIsInvalid) {
    const CoupledState s = CoupledState::basis(1, 1);
    for (const FramePolicy& p : {FramePolicy(FixedFrames{Frame::lab(), Frame::lab()}), kAligned, kOptimized}) {
        const SqueezingReport r = squeezing_report(s, p);
        EXPECT_FALSE(r.valid);
        EXPECT_TRUE(std::isnan(r.xi));
        EXPECT_TRUE(r.degenerate[0] && r.degenerate[1]);
    }
    EXPECT_TRUE(std::isnan(xi_oracle(s, Frame::lab(), Frame::lab())));
}

TEST(Oracle, MatchesEngineOnRandomStatesAndFrames) {
    Rng rng(211);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const CoupledState s = testing_support::random_state(rng);
        const Frame f1 = testing_support::random_frame(rng), f2 = testing_support::random_frame(rng);
        const SqueezingReport r = squeezing_report(s, FixedFrames{f1, f2});
        const double o = xi_oracle(s, f1, f2);
        if (!r.valid) {
            EXPECT_TRUE(std::isnan(o));
            continue;
        }
        worst = std::max(worst, std::abs(r.xi - o));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Oracle, MatchesEngineOnConfigState) {
    const CoupledState s = config(ConfigKind::One, 0.9, 0.7);
    for (const FramePolicy& p : {kAligned, kOptimized}) {
        const SqueezingReport r = squeezing_report(s, p);
        EXPECT_NEAR(xi_oracle(s, r.frame1, r.frame2), r.xi, 1e-10);
    }
}

TEST(SqueezingReport, InvariantsUnderEveryPolicy) {
    Rng rng(223);
    for (int k = 0; k < 200; ++k) {
        const CoupledState s = testing_support::random_state(rng);
        for (const FramePolicy& p : {kAligned, kOptimized}) {
            const SqueezingReport r = squeezing_report(s, p);
            ASSERT_TRUE(r.valid);
            EXPECT_LE(frame_defect(r.frame1), 1e-12);
            EXPECT_LE(frame_defect(r.frame2), 1e-12);
            EXPECT_GE(r.var1, 0.0);
            EXPECT_GE(r.var2, 0.0);
            EXPECT_NEAR(r.proj1, r.ms1.magnitude, 1e-15);
            EXPECT_NEAR(r.proj2, r.ms2.magnitude, 1e-15);
            EXPECT_NEAR(r.xi, r.numerator() / r.denominator(), 1e-12 * std::max(1.0, r.xi));
            EXPECT_LE(std::abs(r.frame1.n_perp.vec().dot(r.ms1.vector)), 1e-10);
            EXPECT_LE(std::abs(r.frame2.n_perp.vec().dot(r.ms2.vector)), 1e-10);
        }
    }
}

TEST(SqueezingReport, ScaleInvariance) {
    Rng rng(227);
    for (int k = 0; k < 100; ++k) {
        const CoupledState s = testing_support::random_state(rng);
        const CoupledState scaled = CoupledState::normalized(3.7 * s.amplitudes());
        EXPECT_NEAR(squeezing_parameter(scaled, kAligned), squeezing_parameter(s, kAligned), 1e-12);
    }
    for (double lam : {0.01, 2.0, 1e4})
        EXPECT_NEAR(closed_form_xi(Config1Amps{0.3 * lam, 0.5 * lam, 0.9 * lam}), closed_form_xi(Config1Amps{0.3, 0.5, 0.9}),
                    1e-12);
}

TEST(SqueezingReport, RotationCovariance) {
    Rng rng(229);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int k = 0; k < 200; ++k) {
        const CoupledState s = testing_support::random_state(rng);
        const Frame f1 = testing_support::random_frame(rng), f2 = testing_support::random_frame(rng);
        const Direction axis = testing_support::random_direction(rng);
        const double phi = ang(rng);
        const double before = squeezing_parameter(s, FixedFrames{f1, f2});
        const double after = squeezing_parameter(rotate_both(s, axis, phi),
                                                 FixedFrames{rotate_frame(f1, axis, phi), rotate_frame(f2, axis, phi)});
        EXPECT_NEAR(after, before, 1e-10 * std::max(1.0, std::abs(before)));
    }
}

TEST(SqueezingReport, MinimizationDominance) {
    Rng rng(233);
    for (int k = 0; k < 200; ++k) {
        const CoupledState s = testing_support::random_state(rng);
        const SqueezingReport al = squeezing_report(s, kAligned);
        // aligned is itself one in-plane choice, so only the optimized value bounds the rest
        const double opt = squeezing_parameter(s, kOptimized);
        EXPECT_LE(opt, al.xi + 1e-12);
        for (int j = 0; j < 5; ++j) {
            const FixedFrames ff{random_in_plane_frame(al.ms1, rng), random_in_plane_frame(al.ms2, rng)};
            EXPECT_LE(opt, squeezing_parameter(s, ff) + 1e-12);
        }
    }
}

TEST(SqueezingReport, OptimizedSearchIsDeterministic) {
    Rng rng(239);
    for (int k = 0; k < 20; ++k) {
        const CoupledState s = testing_support::random_state(rng);
        const SqueezingReport a = squeezing_report(s, kOptimized), b = squeezing_report(s, kOptimized);
        EXPECT_EQ(a.xi, b.xi);
        EXPECT_EQ(a.frame1.n_perp.vec(), b.frame1.n_perp.vec());
    }
    EXPECT_THROW(squeezing_report(testing_support::random_state(rng), Optimized{4, 40}), DomainError);
    EXPECT_THROW(squeezing_report(testing_support::random_state(rng), Optimized{64, 0}), DomainError);
}

TEST(SqueezingReport, OrientedBasisStatesAreNotSqueezed) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const SqueezingReport r = squeezing_report(CoupledState::basis(i, j), kOptimized);
            if (i == 1 && j == 1) {
                EXPECT_FALSE(r.valid);
                continue;
            }
            ASSERT_TRUE(r.valid) << i << j;
            EXPECT_GE(r.xi, 1.0 - 1e-9) << i << j;
        }
}

TEST(SqueezingReport, ProductStatesHaveNoCrossTerm) {
    Rng rng(241);
    for (int k = 0; k < 300; ++k) {
        const CoupledState s = product(testing_support::random_spin1(rng), testing_support::random_spin1(rng));
        const SqueezingReport r = squeezing_report(s, kAligned);
        EXPECT_NEAR(r.cross, 0.0, 1e-12);
    }
}

TEST(SingleSpin, KitagawaUedaAndPuriValues) {
    EXPECT_NEAR(ku_parameter(Spin1State::basis(0)), 1.0, 1e-14);
    EXPECT_NEAR(puri_parameter(Spin1State::basis(0)), 1.0, 1e-14);
    EXPECT_NEAR(ku_parameter(canonical_squeezed(kPi / 2)), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(puri_parameter(canonical_squeezed(kPi / 2)), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_THROW(puri_parameter(Spin1State::basis(1)), DomainError);
}

TEST(SingleSpin, PuriIsNeverBelowKitagawaUeda) {
    Rng rng(251);
    for (int k = 0; k < 1000; ++k) {
        const Spin1State s = testing_support::random_spin1(rng);
        if (mean_spin(s).degenerate()) continue;
        EXPECT_GE(puri_parameter(s), ku_parameter(s) - 1e-12);
    }
}

TEST(ClosedForms, Examples) {
    EXPECT_NEAR(closed_form_xi(ProductPair{0.0, 0.0}), 1.0, 1e-15);
    for (double th : {0.2, 1.0, 2.5}) EXPECT_NEAR(closed_form_xi(ProductPair{th, th}), std::cos(th / 2.0), 1e-14);
    EXPECT_NEAR(closed_form_xi(Config1Amps{0.8, 0.0, 0.6}), 1.0 / 0.28, 1e-13);
    EXPECT_THROW(closed_form_xi(Config1Amps{0.6, 0.2, 0.6}), ZeroDenominator);
}

TEST(ClosedForms, Config1WithoutMiddleAmplitudeMatchesEngine) {
    const CoupledState s = family_state(Config1Amps{0.8, 0.0, 0.6});
    EXPECT_NEAR(squeezing_parameter(s, kAligned), 1.0 / 0.28, 1e-12);
    EXPECT_NEAR(squeezing_parameter(s, kOptimized), 1.0 / 0.28, 1e-12);
}

TEST(ClosedForms, ProductPairMatchesEngineOffDiagonal) {
    for (double a = 0.1; a < 3.05; a += 0.3)
        for (double b = 0.1; b < 3.05; b += 0.2) {
            const DiscrepancyRecord rec = compare_closed_forms(ProductPair{a, b}, kAligned);
            EXPECT_EQ(rec.flag, Verdict::Match) << a << ' ' << b;
            EXPECT_LE(rec.abs_diff, 1e-10);
        }
}

TEST(ClosedForms, CoherentTimesSqueezedMinimumAndMismatch) {
    double best = INFINITY, arg = 0.0;
    for (int k = 0; k <= 20000; ++k) {
        const double th = kPi * k / 20000.0;
        const double v = squeezing_parameter(family_state(CoherentTimesSqueezed{th}), kAligned);
        if (v < best) best = v, arg = th;
    }
    EXPECT_NEAR(best, 0.75, 1e-6);
    EXPECT_NEAR(std::cos(arg / 2.0), 1.0 / 3.0, 1e-3);
    // exact minimum from (1 + 3u^2) / (1 + u)^2 at u = 1/3
    const double th_star = 2.0 * std::acos(1.0 / 3.0);
    EXPECT_NEAR(squeezing_parameter(family_state(CoherentTimesSqueezed{th_star}), kAligned), 0.75, 1e-12);
    EXPECT_EQ(compare_closed_forms(CoherentTimesSqueezed{th_star}, kAligned).flag, Verdict::Mismatch);
}

TEST(ClosedForms, Config3PrintedFormIsTheYYFrameValue) {
    const Frame yy = make_frame(Direction::z_axis(), Direction::y_axis());
    for (double a = 0.1; a < 3.05; a += 0.2)
        for (double b = 0.1; b < 3.05; b += 0.2) {
            const Config3Amps amps{std::cos(a), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b)};
            double printed;
            try {
                printed = closed_form_xi(amps);
            } catch (const ZeroDenominator&) {
                continue;
            }
            const CoupledState s = family_state(amps);
            EXPECT_NEAR(squeezing_parameter(s, FixedFrames{yy, yy}), printed, 1e-10 * std::max(1.0, printed));
        }
}

TEST(ClosedForms, Config3IsSqueezedInTheXXFrame) {
    // frozen finding: the x-x frame pair beats the printed y-y value and goes below 1
    const Config3Amps amps{0.777, -0.266, -0.570};
    const CoupledState s = family_state(amps);
    const Frame xx = make_frame(Direction::z_axis(), Direction::x_axis());
    const double v = squeezing_parameter(s, FixedFrames{xx, xx});
    EXPECT_LT(v, 0.83);
    EXPECT_GT(v, 0.81);
    EXPECT_LE(squeezing_parameter(s, kOptimized), v + 1e-12);
    EXPECT_GT(closed_form_xi(amps), 1.0);
}

TEST(Check, FamilyVerdicts) {
    const CheckReport rep = run_check(kAligned, "aligned");
    EXPECT_EQ(rep.summary("ProductPair").verdict, Verdict::Match);
    EXPECT_LE(rep.summary("ProductPair").max_abs_diff, 1e-10);
    EXPECT_EQ(rep.summary("CoherentTimesSqueezed").verdict, Verdict::Mismatch);
    EXPECT_GT(rep.summary("CoherentTimesSqueezed").max_abs_diff, 0.05);
    EXPECT_NE(rep.summary("CoherentTimesSqueezed").note.find("engine_min=0.75"), std::string::npos);
    EXPECT_EQ(rep.summary("Config1[c22=0]").verdict, Verdict::Match);
    EXPECT_EQ(rep.zalign.size(), 100u);
    EXPECT_THROW(rep.summary("nope"), Error);
}
