#pragma once

// Spin-1 operator algebra, embeddings into the coupled 9-dimensional space,
// mean-spin vectors and perpendicular frames.

#include <cmath>
#include <string>

#include "spinsq/coupled_state.hpp"

namespace spinsq {

using Vec3 = Eigen::Vector3d;

inline constexpr double kUnitTol = 1e-12;
/// Below this mean-spin magnitude a subsystem has no mean-spin direction.
inline constexpr double kDegenerateSpin = 1e-9;

/// A unit vector in R^3.
class Direction {
public:
    Direction(double x, double y, double z) : Direction(Vec3(x, y, z)) {}

    explicit Direction(const Vec3& v) : v_(v) {
        if (!(std::abs(v_.squaredNorm() - 1.0) <= kUnitTol))
            throw DomainError("Direction: vector is not unit length");
    }

    static Direction normalized(const Vec3& v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("Direction: cannot normalize zero vector");
        return Direction(Vec3(v / n));
    }

    static Direction x_axis() { return {1.0, 0.0, 0.0}; }
    static Direction y_axis() { return {0.0, 1.0, 0.0}; }
    static Direction z_axis() { return {0.0, 0.0, 1.0}; }

    double x() const { return v_.x(); }
    double y() const { return v_.y(); }
    double z() const { return v_.z(); }
    const Vec3& vec() const { return v_; }

    Direction operator-() const { return Direction(Vec3(-v_)); }

private:
    Vec3 v_;
};

/// Right-handed orthonormal triple: n is the mean-spin axis and
/// n_perp x n_perp2 = n.
struct Frame {
    Direction n;
    Direction n_perp;
    Direction n_perp2;

    static Frame lab() { return {Direction::z_axis(), Direction::x_axis(), Direction::y_axis()}; }
};

/// Largest violation of orthonormality or right-handedness.
inline double frame_defect(const Frame& f) {
    const Vec3 &a = f.n.vec(), &b = f.n_perp.vec(), &c = f.n_perp2.vec();
    double d = std::max({std::abs(a.dot(b)), std::abs(a.dot(c)), std::abs(b.dot(c))});
    return std::max(d, (b.cross(c) - a).cwiseAbs().maxCoeff());
}

/// Builds a frame from an axis and one perpendicular; n_perp2 = n x n_perp.
inline Frame make_frame(const Direction& n, const Direction& n_perp) {
    Frame f{n, n_perp, Direction::normalized(n.vec().cross(n_perp.vec()))};
    if (frame_defect(f) > kUnitTol) throw DomainError("make_frame: n_perp is not perpendicular to n");
    return f;
}

enum class Subsystem { First = 1, Second = 2 };

inline Subsystem subsystem_from_index(int i) {
    if (i == 1) return Subsystem::First;
    if (i == 2) return Subsystem::Second;
    throw DomainError("subsystem index must be 1 or 2, got " + std::to_string(i));
}

inline int index_of(Subsystem s) { return static_cast<int>(s); }

struct SpinMatrices {
    CMatrix x, y, z;
};

inline const SpinMatrices& spin1_matrices() {
    static const SpinMatrices m = [] {
        const double r = 1.0 / std::sqrt(2.0);
        CMatrix sx = CMatrix::Zero(3, 3), sy = CMatrix::Zero(3, 3), sz = CMatrix::Zero(3, 3);
        sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = r;
        sy(0, 1) = sy(1, 2) = cplx(0.0, -r);
        sy(1, 0) = sy(2, 1) = cplx(0.0, r);
        sz(0, 0) = 1.0;
        sz(2, 2) = -1.0;
        return SpinMatrices{sx, sy, sz};
    }();
    return m;
}

/// S+ = Sx + i Sy
inline CMatrix raising() {
    const auto& s = spin1_matrices();
    return s.x + kI * s.y;
}

/// S- = Sx - i Sy
inline CMatrix lowering() {
    const auto& s = spin1_matrices();
    return s.x - kI * s.y;
}

/// d.x Sx + d.y Sy + d.z Sz
inline CMatrix spin_component(const Direction& d) {
    const auto& s = spin1_matrices();
    return d.x() * s.x + d.y() * s.y + d.z() * s.z;
}

/// Spin component along an arbitrary (not necessarily unit) vector.
inline CMatrix spin_along(const Vec3& v) {
    const auto& s = spin1_matrices();
    return v.x() * s.x + v.y() * s.y + v.z() * s.z;
}

inline CMatrix embed(const CMatrix& op, Subsystem which) {
    if (op.rows() != 3 || op.cols() != 3) throw DimensionError("embed: operator must be 3x3");
    return which == Subsystem::First ? kron(op, identity(3)) : kron(identity(3), op);
}

struct MeanSpin {
    Vec3 vector;
    double magnitude;

    bool degenerate() const { return magnitude < kDegenerateSpin; }
};

/// (<S_ix>, <S_iy>, <S_iz>) for subsystem i and its Euclidean norm.
inline MeanSpin mean_spin(const CoupledState& state, Subsystem which) {
    const auto& s = spin1_matrices();
    const CVector psi = state.vector();
    Vec3 v(expectation(psi, embed(s.x, which)).real(), expectation(psi, embed(s.y, which)).real(),
           expectation(psi, embed(s.z, which)).real());
    return {v, v.norm()};
}

/// Mean spin of a single spin-1 state.
inline MeanSpin mean_spin(const Spin1State& state) {
    const auto& s = spin1_matrices();
    const CVector psi = state.vector();
    Vec3 v(expectation(psi, s.x).real(), expectation(psi, s.y).real(), expectation(psi, s.z).real());
    return {v, v.norm()};
}

/// Rule fixing the in-plane reference direction of a frame.
///  Pole: n_perp = normalize(z x n), falling back to x projected into the plane near the poles.
///  XZ:   n_perp = normalize(y x n), falling back to z projected into the plane near +-y.
///        For n in the x-z plane this is the in-plane perpendicular with n_perp2 = y.
enum class Gauge { Pole, XZ };

inline const char* to_string(Gauge g) { return g == Gauge::Pole ? "pole" : "xz"; }

namespace detail {

inline Frame frame_with_reference(const Direction& n, const Vec3& reference, const Vec3& fallback) {
    const Vec3& nv = n.vec();
    Vec3 perp;
    if (std::abs(nv.dot(reference)) > 1.0 - 1e-9)
        perp = fallback - fallback.dot(nv) * nv;
    else
        perp = reference.cross(nv);
    const Direction p = Direction::normalized(perp);
    // re-orthogonalize once so the frame is orthonormal to round-off
    const Direction p2 = Direction::normalized(nv.cross(p.vec()));
    const Direction p1 = Direction::normalized(p2.vec().cross(nv));
    return {n, p1, p2};
}

} // namespace detail

inline Frame build_frame(const Direction& n, Gauge gauge = Gauge::Pole) {
    if (gauge == Gauge::Pole) return detail::frame_with_reference(n, Vec3::UnitZ(), Vec3::UnitX());
    return detail::frame_with_reference(n, Vec3::UnitY(), Vec3::UnitZ());
}

/// The perpendicular pair used for product states whose mean spin lies in the
/// x-z plane: n_perp in the x-z plane, n_perp2 = y.
inline Frame build_frame_xz(const Direction& n) { return build_frame(n, Gauge::XZ); }

/// exp(-i angle (S . axis)) acting on one subsystem of a coupled state.
inline CoupledState rotate(const CoupledState& state, Subsystem which, const Direction& axis, double angle) {
    const CMatrix gen = -kI * embed(spin_component(axis), which);
    const CVector out = SpectralExponential(gen, Symmetry::AntiHermitian).apply(angle, state.vector());
    return CoupledState::from_vector(out, true);
}

/// Rodrigues rotation of a vector by angle about a unit axis.
inline Vec3 rotate_vector(const Vec3& v, const Direction& axis, double angle) {
    return Eigen::AngleAxisd(angle, axis.vec()) * v;
}

} // namespace spinsq
