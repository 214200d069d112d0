#pragma once

// Seeded random draws shared by the test binaries.

#include <cstdint>
#include <random>

#include <Eigen/Geometry>

#include "spinsq/coupled_state.hpp"
#include "spinsq/spin.hpp"

namespace testing_support {

using Rng = std::mt19937_64;

inline spinsq::cplx gaussian_cplx(Rng& rng) {
    std::normal_distribution<double> g;
    const double re = g(rng);
    return {re, g(rng)};
}

inline spinsq::CoupledState random_state(Rng& rng) {
    spinsq::AmpMatrix c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c(i, j) = gaussian_cplx(rng);
    return spinsq::CoupledState::normalized(c);
}

inline spinsq::Spin1State random_spin1(Rng& rng) {
    Eigen::Vector3cd v;
    for (int i = 0; i < 3; ++i) v[i] = gaussian_cplx(rng);
    return spinsq::Spin1State::normalized(v);
}

inline spinsq::Direction random_direction(Rng& rng) {
    std::normal_distribution<double> g;
    const double x = g(rng), y = g(rng);
    return spinsq::Direction::normalized(spinsq::Vec3(x, y, g(rng)));
}

/// Uniform rotation from a normalized Gaussian quaternion.
inline Eigen::Matrix3d random_rotation(Rng& rng) {
    std::normal_distribution<double> g;
    double q[4];
    for (double& v : q) v = g(rng);
    return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).normalized().toRotationMatrix();
}

/// Columns of a rotation as (n_perp, n_perp2, n).
inline spinsq::Frame frame_from_rotation(const Eigen::Matrix3d& r) {
    return {spinsq::Direction::normalized(r.col(2)), spinsq::Direction::normalized(r.col(0)),
            spinsq::Direction::normalized(r.col(1))};
}

inline spinsq::Frame random_frame(Rng& rng) { return frame_from_rotation(random_rotation(rng)); }

} // namespace testing_support
