#pragma once

// Construction and classification of coupled two-spin-1 states.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "spinsq/spin.hpp"

namespace spinsq {

/// A point on the Bloch sphere; amplitudes (cos(theta/2), e^{i phi} sin(theta/2)).
struct Spinor {
    double theta = 0.0;
    double phi = 0.0;

    cplx up() const { return std::cos(theta / 2.0); }
    cplx down() const { return std::polar(std::sin(theta / 2.0), phi); }
};

/// Symmetrized product of two spinors in the triplet basis (m=+1, 0, -1).
inline Spin1State schwinger(const Spinor& u1, const Spinor& u2) {
    const cplx a1 = u1.up(), b1 = u1.down(), a2 = u2.up(), b2 = u2.down();
    const double r2 = std::numbers::sqrt2;
    return Spin1State::normalized(Eigen::Vector3cd(r2 * a1 * a2, a1 * b2 + b1 * a2, r2 * b1 * b2));
}

/// The product-state building block with one spinor on +z and the other at
/// polar angle theta in the x-z plane:
/// (2 cos(theta/2), sqrt(2) sin(theta/2), 0) / sqrt(3 + cos theta).
inline Spin1State canonical_squeezed(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw DomainError("canonical_squeezed: theta must lie in [0, pi]");
    const double norm = std::sqrt(3.0 + std::cos(theta));
    return Spin1State(Eigen::Vector3cd(2.0 * std::cos(theta / 2.0) / norm,
                                       std::numbers::sqrt2 * std::sin(theta / 2.0) / norm, 0.0));
}

namespace detail {

struct ProjectiveRoot {
    cplx value;
    bool infinite = false;
};

/// Roots of A x^2 + B x + C assuming |A| >= |C|. When A = C = 0 the roots are 0 and infinity.
inline std::array<ProjectiveRoot, 2> quadratic_roots(cplx A, cplx B, cplx C) {
    if (A == cplx(0.0)) return {{{cplx(0.0), false}, {cplx(0.0), true}}};
    cplx sq = std::sqrt(B * B - 4.0 * A * C);
    if ((std::conj(B) * sq).real() < 0.0) sq = -sq;
    const cplx q = -0.5 * (B + sq);
    if (q == cplx(0.0)) return {{{cplx(0.0), false}, {cplx(0.0), false}}};
    return {{{q / A, false}, {C / q, false}}};
}

inline double wrap_angle(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return phi;
}

/// Stereographic back-map of z = e^{i phi} tan(theta/2), or of w = 1/z when `inverted`.
inline Spinor spinor_from_root(const ProjectiveRoot& r, bool inverted) {
    const double pi = std::numbers::pi;
    if (r.infinite) return {inverted ? 0.0 : pi, 0.0};
    const double m = std::abs(r.value);
    if (m == 0.0) return {inverted ? pi : 0.0, 0.0};
    if (!inverted) return {2.0 * std::atan(m), wrap_angle(std::arg(r.value))};
    return {2.0 * std::atan2(1.0, m), wrap_angle(-std::arg(r.value))};
}

} // namespace detail

/// The unordered spinor pair whose symmetrized product reproduces `s` up to a
/// global phase. Roots of a z^2 - sqrt(2) b z + c = 0 for amplitudes (a, b, c);
/// the reversed polynomial in w = 1/z is used when |c| > |a|, and a root at
/// infinity maps to theta = pi.
inline std::pair<Spinor, Spinor> majorana(const Spin1State& s) {
    const cplx a = s[0], b = s[1], c = s[2];
    const cplx mb = -std::numbers::sqrt2 * b;
    const bool inverted = std::abs(c) > std::abs(a);
    const auto roots = inverted ? detail::quadratic_roots(c, mb, a) : detail::quadratic_roots(a, mb, c);
    return {detail::spinor_from_root(roots[0], inverted), detail::spinor_from_root(roots[1], inverted)};
}

/// c[i][j] = s1[i] * s2[j]
inline CoupledState product(const Spin1State& s1, const Spin1State& s2) {
    return CoupledState::normalized(s1.amps() * s2.amps().transpose());
}

struct SchmidtInfo {
    std::array<double, 3> singular_values;
    bool product_flag;
    double tolerance_used;
};

inline SchmidtInfo schmidt(const CoupledState& state, double tol = 1e-10) {
    Eigen::JacobiSVD<AmpMatrix> svd(state.amplitudes());
    const auto& sv = svd.singularValues();
    return {{sv[0], sv[1], sv[2]}, sv[1] <= tol, tol};
}

/// max |c_ij c_kl - c_il c_kj| over all index choices; zero iff the state is a product.
inline double max_minor(const CoupledState& state) {
    const auto& c = state.amplitudes();
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) m = std::max(m, std::abs(c(i, j) * c(k, l) - c(i, l) * c(k, j)));
    return m;
}

/// Simultaneous eigenstate test for S1.q1 and S2.q2 with eigenvalues in {-1, 0, 1}.
inline bool is_oriented(const CoupledState& state, const Direction& q1, const Direction& q2, double tol = 1e-10) {
    const CVector psi = state.vector();
    auto eigen_residual = [&](const CMatrix& op) {
        const CVector a = op * psi;
        double best = INFINITY;
        for (int m = -1; m <= 1; ++m) best = std::min(best, (a - double(m) * psi).norm());
        return best;
    };
    return eigen_residual(embed(spin_component(q1), Subsystem::First)) <= tol &&
           eigen_residual(embed(spin_component(q2), Subsystem::Second)) <= tol;
}

enum class ConfigKind { One = 1, Two = 2, Three = 3 };

/// The three amplitude families with a few nonzero components, renormalized:
///  One:   (c11, c22, c33) = (sin a cos b, sin a sin b, cos b)
///  Two:   (c11, c13, c22) = (sin a cos b, sin a sin b, cos b)
///  Three: (c12, c21, c23) = (cos a, sin a cos b e^{i phi1}, sin a sin b e^{i phi2})
inline CoupledState config(ConfigKind kind, double alpha, double beta, double phi1 = 0.0, double phi2 = 0.0) {
    AmpMatrix c = AmpMatrix::Zero();
    const double sa = std::sin(alpha), ca = std::cos(alpha), sb = std::sin(beta), cb = std::cos(beta);
    switch (kind) {
    case ConfigKind::One:
        c(0, 0) = sa * cb;
        c(1, 1) = sa * sb;
        c(2, 2) = cb;
        break;
    case ConfigKind::Two:
        c(0, 0) = sa * cb;
        c(0, 2) = sa * sb;
        c(1, 1) = cb;
        break;
    case ConfigKind::Three:
        c(0, 1) = ca;
        c(1, 0) = std::polar(sa * cb, phi1);
        c(1, 2) = std::polar(sa * sb, phi2);
        break;
    }
    if (c.norm() < 1e-300) throw DomainError("config: all amplitudes vanish for these parameters");
    return CoupledState::normalized(c);
}

struct ZAlignment {
    cplx c23;
    cplx c21;
};

/// The printed closed forms for c23 and c21 that are supposed to put both
/// mean-spin directions on z. Entries (1,0) and (1,2) of `partial` are ignored.
inline ZAlignment solve_z_alignment(const AmpMatrix& partial) {
    const cplx c11 = partial(0, 0), c12 = partial(0, 1), c13 = partial(0, 2), c22 = partial(1, 1);
    const cplx c31 = partial(2, 0), c32 = partial(2, 1), c33 = partial(2, 2);
    const cplx d1 = c11 + std::conj(c31) - c13 - std::conj(c33);
    const cplx d2 = c11 + c31;
    if (std::abs(d1) <= 1e-12 || std::abs(d2) <= 1e-12)
        throw DegenerateDenominator("solve_z_alignment: vanishing denominator");
    const double n22 = std::norm(c22);
    const cplx c23 = ((n22 - (c11 + c13) * (c11 + std::conj(c31))) * std::conj(c12) +
                      (n22 - (c11 + std::conj(c31)) * (c31 + c33)) * std::conj(c32)) /
                     d1;
    const cplx c21 = (-(std::conj(c13) + std::conj(c33)) * c23 - (std::conj(c12) + c32) * c22) / d2;
    return {c23, c21};
}

inline AmpMatrix with_middle_row_ends(AmpMatrix c, const ZAlignment& z) {
    c(1, 2) = z.c23;
    c(1, 0) = z.c21;
    return c;
}

/// max over both subsystems of |<S_x>|, |<S_y>| evaluated on the renormalized state.
inline double transverse_residual(const CoupledState& state) {
    const MeanSpin a = mean_spin(state, Subsystem::First);
    const MeanSpin b = mean_spin(state, Subsystem::Second);
    return std::max({std::abs(a.vector.x()), std::abs(a.vector.y()), std::abs(b.vector.x()),
                     std::abs(b.vector.y())});
}

/// Exact solution of <S1+> = <S2+> = 0 for c21 and c23. Both conditions are
/// real-affine in (Re c21, Im c21, Re c23, Im c23), so this is a 4x4 real
/// linear solve.
inline ZAlignment solve_z_alignment_linear(const AmpMatrix& partial) {
    const CMatrix p1 = embed(raising(), Subsystem::First);
    const CMatrix p2 = embed(raising(), Subsystem::Second);
    auto residual = [&](const Eigen::Vector4d& x) {
        AmpMatrix c = partial;
        c(1, 0) = cplx(x[0], x[1]);
        c(1, 2) = cplx(x[2], x[3]);
        CVector v(9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v[3 * i + j] = c(i, j);
        const cplx e1 = v.dot(p1 * v), e2 = v.dot(p2 * v);
        return Eigen::Vector4d(e1.real(), e1.imag(), e2.real(), e2.imag());
    };
    const Eigen::Vector4d f0 = residual(Eigen::Vector4d::Zero());
    Eigen::Matrix4d jac;
    for (int k = 0; k < 4; ++k) jac.col(k) = residual(Eigen::Vector4d::Unit(k)) - f0;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(jac);
    lu.setThreshold(1e-12);
    if (lu.rank() < 4) throw DegenerateDenominator("solve_z_alignment_linear: singular system");
    const Eigen::Vector4d x = lu.solve(-f0);
    return {cplx(x[2], x[3]), cplx(x[0], x[1])};
}

} // namespace spinsq
