#pragma once

// Value types for single spin-1 states and coupled two-spin-1 states.
// Amplitude order is (m=+1, m=0, m=-1) for each subsystem; the coupled
// amplitude c(i, j) pairs m1 index i with m2 index j and flattens row-major,
// which is the same ordering kron(A, B) uses for A acting on subsystem 1.

#include <array>
#include <cmath>

#include "spinsq/tensor.hpp"

namespace spinsq {

inline constexpr double kNormTol = 1e-12;

using AmpMatrix = Eigen::Matrix3cd;

class Spin1State {
public:
    /// Takes amplitudes that already satisfy |norm^2 - 1| <= 1e-12.
    explicit Spin1State(const Eigen::Vector3cd& amps) : amps_(amps) {
        if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol)
            throw DomainError("Spin1State: amplitudes are not normalized");
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    static Spin1State normalized(const Eigen::Vector3cd& amps) {
        const double n = amps.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("Spin1State: zero or non-finite amplitudes");
        return Spin1State(amps / n);
    }

    static Spin1State basis(int index) {
        Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
        v[index] = 1.0;
        return Spin1State(v);
    }

    const Eigen::Vector3cd& amps() const { return amps_; }
    cplx operator[](int i) const { return amps_[i]; }
    CVector vector() const { return amps_; }

private:
    Eigen::Vector3cd amps_;
};

class CoupledState {
public:
    explicit CoupledState(const AmpMatrix& c) : c_(c) {
        if (std::abs(c_.squaredNorm() - 1.0) > kNormTol)
            throw DomainError("CoupledState: amplitudes are not normalized");
    }

    static CoupledState normalized(const AmpMatrix& c) {
        const double n = c.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("CoupledState: zero or non-finite amplitudes");
        return CoupledState(c / n);
    }

    /// From the flattened (c11, c12, ..., c33) vector.
    static CoupledState from_vector(const CVector& v, bool renormalize = false) {
        if (v.size() != 9) throw DimensionError("CoupledState: expected 9 amplitudes");
        AmpMatrix c;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c(i, j) = v[3 * i + j];
        return renormalize ? normalized(c) : CoupledState(c);
    }

    /// |m1, m2> with m in {+1, 0, -1} given as indices 0, 1, 2.
    static CoupledState basis(int i, int j) {
        AmpMatrix c = AmpMatrix::Zero();
        c(i, j) = 1.0;
        return CoupledState(c);
    }

    const AmpMatrix& amplitudes() const { return c_; }
    cplx operator()(int i, int j) const { return c_(i, j); }

    CVector vector() const {
        CVector v(9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v[3 * i + j] = c_(i, j);
        return v;
    }

private:
    AmpMatrix c_;
};

/// |<a|b>|, the phase-insensitive overlap of two unit vectors.
inline double fidelity(const CVector& a, const CVector& b) { return std::abs(a.dot(b)); }
inline double fidelity(const CoupledState& a, const CoupledState& b) {
    return fidelity(a.vector(), b.vector());
}
inline double fidelity(const Spin1State& a, const Spin1State& b) {
    return std::abs(a.amps().dot(b.amps()));
}

} // namespace spinsq
