#pragma once

// Independent evaluation of xi by explicit summation over amplitude indices.
// Shares no linear-algebra code with the engine in squeezing.hpp: spin
// component entries are written out by hand and every expectation value is
// an index sum over the 3x3 amplitude array.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "spinsq/coupled_state.hpp"
#include "spinsq/spin.hpp"

namespace spinsq::oracle {

using C = std::complex<double>;
using Op3 = std::array<std::array<C, 3>, 3>;
using Amps = std::array<std::array<C, 3>, 3>;

/// Entries of S.d in the (m=+1, 0, -1) basis.
inline Op3 component(double dx, double dy, double dz) {
    const double r = 1.0 / std::sqrt(2.0);
    const C minus(dx * r, -dy * r), plus(dx * r, dy * r);
    Op3 m{};
    m[0][0] = dz;
    m[2][2] = -dz;
    m[0][1] = minus;
    m[1][2] = minus;
    m[1][0] = plus;
    m[2][1] = plus;
    return m;
}

inline Amps amplitudes(const CoupledState& s) {
    Amps c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = s(i, j);
    return c;
}

/// <A (x) I> = sum_{i,k,j} conj(c_ij) A_ik c_kj
inline C first(const Amps& c, const Op3& a) {
    C s = 0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) s += std::conj(c[i][j]) * a[i][k] * c[k][j];
    return s;
}

/// <I (x) B> = sum_{i,j,l} conj(c_ij) B_jl c_il
inline C second(const Amps& c, const Op3& b) {
    C s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) s += std::conj(c[i][j]) * b[j][l] * c[i][l];
    return s;
}

/// <A^2 (x) I> as a double sum over the intermediate index
inline C first_squared(const Amps& c, const Op3& a) {
    C s = 0;
    for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 3; ++m)
            for (int k = 0; k < 3; ++k)
                for (int j = 0; j < 3; ++j) s += std::conj(c[i][j]) * a[i][m] * a[m][k] * c[k][j];
    return s;
}

inline C second_squared(const Amps& c, const Op3& b) {
    C s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int m = 0; m < 3; ++m)
                for (int l = 0; l < 3; ++l) s += std::conj(c[i][j]) * b[j][m] * b[m][l] * c[i][l];
    return s;
}

/// <A (x) B> = sum conj(c_ij) A_ik B_jl c_kl
inline C joint(const Amps& c, const Op3& a, const Op3& b) {
    C s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) s += std::conj(c[i][j]) * a[i][k] * b[j][l] * c[k][l];
    return s;
}

inline Op3 component(const Direction& d) { return component(d.x(), d.y(), d.z()); }

} // namespace spinsq::oracle

namespace spinsq {

/// xi for fixed frames computed by explicit index sums. Subsystems whose mean
/// spin magnitude is below 1e-9 contribute nothing to the denominator, the
/// same rule the engine applies.
inline double xi_oracle(const CoupledState& state, const Frame& frame1, const Frame& frame2) {
    using namespace oracle;
    const Amps c = amplitudes(state);
    auto mean_vec = [&](bool first_sub) {
        std::array<double, 3> v{};
        for (int k = 0; k < 3; ++k) {
            const Op3 op = component(k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0);
            v[k] = (first_sub ? first(c, op) : second(c, op)).real();
        }
        return v;
    };
    const auto m1 = mean_vec(true), m2 = mean_vec(false);
    auto mag = [](const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };

    const Op3 a = component(frame1.n_perp), b = component(frame2.n_perp);
    const double ea = first(c, a).real(), eb = second(c, b).real();
    const double var1 = first_squared(c, a).real() - ea * ea;
    const double var2 = second_squared(c, b).real() - eb * eb;
    const double cross = joint(c, a, b).real();
    const double p1 = mag(m1) < 1e-9 ? 0.0 : first(c, component(frame1.n)).real();
    const double p2 = mag(m2) < 1e-9 ? 0.0 : second(c, component(frame2.n)).real();
    const double d = std::abs(p1) + std::abs(p2);
    if (d < 1e-9) return std::numeric_limits<double>::quiet_NaN();
    return (2.0 * var1 + 2.0 * var2 + 4.0 * cross) / d;
}

} // namespace spinsq
