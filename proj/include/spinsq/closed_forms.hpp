#pragma once

// Literal transcriptions of the published squeezing-parameter expressions
// for five state families, and a comparison against the engine. Printed
// forms are kept verbatim even where they disagree with the engine; the
// comparison is where disagreement shows up.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <variant>

#include "spinsq/squeezing.hpp"
#include "spinsq/states.hpp"

namespace spinsq {

/// Product of two canonical squeezed states.
struct ProductPair {
    double theta1;
    double theta2;
};

/// |m=+1> (coherent) times canonical_squeezed(theta).
struct CoherentTimesSqueezed {
    double theta;
};

struct Config1Amps {
    double c11, c22, c33;
};

struct Config2Amps {
    double c11, c13, c22;
};

struct Config3Amps {
    double c12, c21, c23;
};

using ClosedFormFamily = std::variant<ProductPair, CoherentTimesSqueezed, Config1Amps, Config2Amps, Config3Amps>;

namespace detail {

inline double checked_ratio(double num, double den) {
    if (!(std::abs(den) > 1e-12)) throw ZeroDenominator("closed form: denominator vanishes");
    return num / den;
}

inline std::string format_params(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    return buf;
}

struct ClosedFormEval {
    double operator()(const ProductPair& p) const {
        auto t = [](double th) { return (1.0 + std::cos(th)) / (3.0 + std::cos(th)); };
        auto d = [](double th) { return std::sqrt(2.0 * (1.0 + std::cos(th))) / (3.0 + std::cos(th)); };
        return checked_ratio(t(p.theta1) + t(p.theta2), std::abs(d(p.theta1)) + std::abs(d(p.theta2)));
    }
    double operator()(const CoherentTimesSqueezed& p) const {
        const double c = std::cos(p.theta);
        return checked_ratio(1.0 + (1.0 + c) / (3.0 + c), 1.0 + std::abs(std::sqrt(2.0 * (1.0 + c)) / (3.0 + c)));
    }
    double operator()(const Config1Amps& a) const {
        const double num = a.c11 * a.c11 + 2.0 * a.c22 * a.c22 + a.c33 * a.c33 - 2.0 * (a.c11 * a.c22 - a.c22 * a.c33);
        return checked_ratio(num, std::abs(a.c11 * a.c11 - a.c33 * a.c33));
    }
    double operator()(const Config2Amps& a) const {
        const double num = a.c11 * a.c11 + a.c13 * a.c13 + 2.0 * a.c22 * a.c22 - a.c11 * a.c13 + 2.0 * a.c13 * a.c22 -
                           2.0 * a.c22 * a.c11;
        return checked_ratio(num, std::abs(a.c11 * a.c11 + a.c13 * a.c13) + std::abs(a.c11 * a.c11 - a.c13 * a.c13));
    }
    double operator()(const Config3Amps& a) const {
        const double num = 3.0 * a.c12 * a.c12 + 3.0 * a.c21 * a.c21 + 3.0 * a.c23 * a.c23 - 2.0 * a.c21 * a.c23 +
                           4.0 * a.c12 * a.c21 - 4.0 * a.c12 * a.c23;
        return checked_ratio(num, a.c12 * a.c12 + std::abs(a.c21 * a.c21 - a.c23 * a.c23));
    }
};

struct FamilyState {
    CoupledState operator()(const ProductPair& p) const {
        return product(canonical_squeezed(p.theta1), canonical_squeezed(p.theta2));
    }
    CoupledState operator()(const CoherentTimesSqueezed& p) const {
        return product(Spin1State::basis(0), canonical_squeezed(p.theta));
    }
    CoupledState operator()(const Config1Amps& a) const {
        AmpMatrix c = AmpMatrix::Zero();
        c(0, 0) = a.c11;
        c(1, 1) = a.c22;
        c(2, 2) = a.c33;
        return CoupledState::normalized(c);
    }
    CoupledState operator()(const Config2Amps& a) const {
        AmpMatrix c = AmpMatrix::Zero();
        c(0, 0) = a.c11;
        c(0, 2) = a.c13;
        c(1, 1) = a.c22;
        return CoupledState::normalized(c);
    }
    CoupledState operator()(const Config3Amps& a) const {
        AmpMatrix c = AmpMatrix::Zero();
        c(0, 1) = a.c12;
        c(1, 0) = a.c21;
        c(1, 2) = a.c23;
        return CoupledState::normalized(c);
    }
};

struct FamilyName {
    std::string operator()(const ProductPair&) const { return "ProductPair"; }
    std::string operator()(const CoherentTimesSqueezed&) const { return "CoherentTimesSqueezed"; }
    std::string operator()(const Config1Amps&) const { return "Config1"; }
    std::string operator()(const Config2Amps&) const { return "Config2"; }
    std::string operator()(const Config3Amps&) const { return "Config3"; }
};

struct FamilyParams {
    std::string operator()(const ProductPair& p) const {
        return format_params("theta1=%.6g;theta2=%.6g", p.theta1, p.theta2);
    }
    std::string operator()(const CoherentTimesSqueezed& p) const { return format_params("theta=%.6g", p.theta); }
    std::string operator()(const Config1Amps& a) const {
        return format_params("c11=%.6g;c22=%.6g;c33=%.6g", a.c11, a.c22, a.c33);
    }
    std::string operator()(const Config2Amps& a) const {
        return format_params("c11=%.6g;c13=%.6g;c22=%.6g", a.c11, a.c13, a.c22);
    }
    std::string operator()(const Config3Amps& a) const {
        return format_params("c12=%.6g;c21=%.6g;c23=%.6g", a.c12, a.c21, a.c23);
    }
};

} // namespace detail

/// The printed expression for the family. Throws ZeroDenominator.
inline double closed_form_xi(const ClosedFormFamily& f) { return std::visit(detail::ClosedFormEval{}, f); }

/// The normalized coupled state the family parameters describe.
inline CoupledState family_state(const ClosedFormFamily& f) { return std::visit(detail::FamilyState{}, f); }

inline std::string family_name(const ClosedFormFamily& f) { return std::visit(detail::FamilyName{}, f); }
inline std::string family_params(const ClosedFormFamily& f) { return std::visit(detail::FamilyParams{}, f); }

enum class Verdict { Match, Mismatch, Undefined };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Match: return "MATCH";
    case Verdict::Mismatch: return "MISMATCH";
    default: return "UNDEFINED";
    }
}

struct DiscrepancyRecord {
    std::string family;
    std::string params;
    double closed_form_value;
    double engine_value;
    double abs_diff;
    double rel_diff;
    Verdict flag;
    Frame frame1;
    Frame frame2;
};

/// Absolute below |xi| = 1, relative above it.
inline constexpr double kMatchTol = 1e-10;

/// Closed form against the engine under `policy`. A vanishing denominator on
/// either side is recorded as UNDEFINED, never thrown.
inline DiscrepancyRecord compare_closed_forms(const ClosedFormFamily& f, const FramePolicy& policy) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double closed = nan;
    try {
        closed = closed_form_xi(f);
    } catch (const ZeroDenominator&) {
    }
    const SqueezingReport rep = squeezing_report(family_state(f), policy);
    const double engine = rep.valid ? rep.xi : nan;
    DiscrepancyRecord rec{family_name(f), family_params(f), closed, engine, nan, nan, Verdict::Undefined,
                          rep.frame1, rep.frame2};
    if (std::isfinite(closed) && std::isfinite(engine)) {
        rec.abs_diff = std::abs(closed - engine);
        rec.rel_diff = rec.abs_diff / std::max(std::abs(engine), 1e-300);
        rec.flag = rec.abs_diff <= kMatchTol * std::max(1.0, std::abs(engine)) ? Verdict::Match : Verdict::Mismatch;
    }
    return rec;
}

} // namespace spinsq
