#pragma once

// The coupled squeezing parameter
//
//   xi = (2 Var(S1.n1perp) + 2 Var(S2.n2perp) + 4 <S1.n1perp (x) S2.n2perp>)
//        / (|<S1.n1>| + |<S2.n2>|)
//
// evaluated under an explicit frame policy, plus the single-system
// Kitagawa-Ueda and Puri parameters. xi < 1 means squeezed.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include "spinsq/spin.hpp"

namespace spinsq {

/// Both frames given explicitly.
struct FixedFrames {
    Frame frame1;
    Frame frame2;
};

/// Frames built on the normalized mean-spin vectors; xi uses each frame's n_perp.
struct MeanSpinAligned {
    Gauge gauge = Gauge::XZ;
};

/// xi minimized over the in-plane angle of each perpendicular direction.
struct Optimized {
    int grid_points = 64;
    int refine_iters = 40;
    Gauge gauge = Gauge::XZ;
};

using FramePolicy = std::variant<FixedFrames, MeanSpinAligned, Optimized>;

inline constexpr double kSqueezeMargin = 1e-12;

struct SqueezingReport {
    double xi = std::numeric_limits<double>::quiet_NaN();
    Frame frame1 = Frame::lab();
    Frame frame2 = Frame::lab();
    double var1 = 0.0;
    double var2 = 0.0;
    double cross = 0.0;
    MeanSpin ms1{Vec3::Zero(), 0.0};
    MeanSpin ms2{Vec3::Zero(), 0.0};
    /// <S_i . n_i> along each frame axis; zero for a degenerate subsystem.
    double proj1 = 0.0;
    double proj2 = 0.0;
    bool valid = false;
    std::array<bool, 2> degenerate{false, false};

    double numerator() const { return 2.0 * var1 + 2.0 * var2 + 4.0 * cross; }
    double denominator() const { return std::abs(proj1) + std::abs(proj2); }
    /// xi < 1, with round-off at the coherent boundary not counted as squeezing.
    bool squeezed() const { return valid && xi < 1.0 - kSqueezeMargin; }
};

namespace detail {

inline constexpr double kVarianceClamp = 1e-12;

inline double clamp_variance(double v) { return (v < 0.0 && v >= -kVarianceClamp) ? 0.0 : v; }

/// Fills the numerator pieces and xi for the perpendiculars of the given frames.
inline void evaluate_frames(const CVector& psi, SqueezingReport& r) {
    const CMatrix a = embed(spin_component(r.frame1.n_perp), Subsystem::First);
    const CMatrix b = embed(spin_component(r.frame2.n_perp), Subsystem::Second);
    const CVector apsi = a * psi, bpsi = b * psi;
    const double ma = psi.dot(apsi).real(), mb = psi.dot(bpsi).real();
    r.var1 = clamp_variance(apsi.squaredNorm() - ma * ma);
    r.var2 = clamp_variance(bpsi.squaredNorm() - mb * mb);
    r.cross = apsi.dot(bpsi).real();
    const double d = r.denominator();
    r.valid = d >= kDegenerateSpin;
    r.xi = r.valid ? r.numerator() / d : std::numeric_limits<double>::quiet_NaN();
}

/// xi as a quadratic form in the direction weights of the two subsystems.
/// Each subsystem contributes a basis (two in-plane vectors, or three lab
/// axes when its mean spin vanishes) and the perpendicular is a unit
/// combination of that basis.
class XiModel {
public:
    XiModel(const CVector& psi, std::vector<Vec3> basis1, std::vector<Vec3> basis2, double denom)
        : basis_{std::move(basis1), std::move(basis2)}, denom_(denom) {
        std::array<std::vector<CVector>, 2> images;
        std::array<std::vector<double>, 2> means;
        for (int s = 0; s < 2; ++s) {
            const Subsystem which = s == 0 ? Subsystem::First : Subsystem::Second;
            for (const Vec3& v : basis_[s]) {
                images[s].push_back(embed(spin_along(v), which) * psi);
                means[s].push_back(psi.dot(images[s].back()).real());
            }
            const auto k = basis_[s].size();
            cov_[s] = Eigen::MatrixXd(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    cov_[s](i, j) = images[s][i].dot(images[s][j]).real() - means[s][i] * means[s][j];
        }
        corr_ = Eigen::MatrixXd(basis_[0].size(), basis_[1].size());
        for (std::size_t i = 0; i < basis_[0].size(); ++i)
            for (std::size_t j = 0; j < basis_[1].size(); ++j) corr_(i, j) = images[0][i].dot(images[1][j]).real();
    }

    bool on_sphere(int s) const { return basis_[s].size() == 3; }

    /// Weight vector of subsystem s from its angle coordinates.
    Eigen::VectorXd weights(int s, const double* coords) const {
        if (!on_sphere(s)) return Eigen::Vector2d(std::cos(coords[0]), std::sin(coords[0]));
        return Eigen::Vector3d(std::sin(coords[0]) * std::cos(coords[1]), std::sin(coords[0]) * std::sin(coords[1]),
                               std::cos(coords[0]));
    }

    double value(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2) const {
        return (2.0 * w1.dot(cov_[0] * w1) + 2.0 * w2.dot(cov_[1] * w2) + 4.0 * w1.dot(corr_ * w2)) / denom_;
    }

    Vec3 direction(int s, const Eigen::VectorXd& w) const {
        Vec3 d = Vec3::Zero();
        for (std::size_t i = 0; i < basis_[s].size(); ++i) d += w[i] * basis_[s][i];
        return d;
    }

private:
    std::array<std::vector<Vec3>, 2> basis_;
    double denom_;
    std::array<Eigen::MatrixXd, 2> cov_;
    Eigen::MatrixXd corr_;
};

/// Coordinates are laid out as [subsystem-1 angles..., subsystem-2 angles...].
class XiMinimizer {
public:
    XiMinimizer(const XiModel& model, int grid_points, int refine_iters)
        : model_(model), grid_(grid_points), iters_(refine_iters), n1_(model.on_sphere(0) ? 2 : 1),
          n2_(model.on_sphere(1) ? 2 : 1) {}

    double objective(const std::vector<double>& x) const {
        return model_.value(model_.weights(0, x.data()), model_.weights(1, x.data() + n1_));
    }

    /// Returns the minimizing coordinates.
    std::vector<double> run() const {
        std::vector<double> x = grid_search();
        double fx = objective(x);
        const std::vector<double> h = steps();
        for (int it = 0; it < iters_; ++it) {
            const double before = fx;
            for (std::size_t k = 0; k < x.size(); ++k) line_search(x, fx, k, h[k]);
            if (before - fx <= 1e-16) break;
        }
        newton_polish(x, fx);
        return x;
    }

    Eigen::VectorXd weights(int s, const std::vector<double>& x) const {
        return model_.weights(s, x.data() + (s == 0 ? 0 : n1_));
    }

private:
    std::vector<double> axis_values(bool sphere, int which) const {
        // circle: grid_ angles over [0, 2pi); sphere: polar angle (pole to pole) then azimuth
        std::vector<double> v;
        const double pi = std::numbers::pi;
        if (!sphere || which == 1)
            for (int k = 0; k < grid_; ++k) v.push_back(2.0 * pi * k / grid_);
        else
            for (int k = 0; k <= grid_ / 2; ++k) v.push_back(pi * k / (grid_ / 2));
        return v;
    }

    std::vector<std::vector<double>> axes() const {
        std::vector<std::vector<double>> ax;
        for (int s = 0; s < 2; ++s) {
            const bool sphere = model_.on_sphere(s);
            ax.push_back(axis_values(sphere, 0));
            if (sphere) ax.push_back(axis_values(sphere, 1));
        }
        return ax;
    }

    std::vector<double> steps() const {
        std::vector<double> h;
        for (const auto& a : axes()) h.push_back(a[1] - a[0]);
        return h;
    }

    std::vector<double> grid_search() const {
        const auto ax = axes();
        // precompute per-subsystem weight vectors over that subsystem's sub-grid
        std::array<std::vector<std::vector<double>>, 2> coords;
        std::array<std::vector<Eigen::VectorXd>, 2> w;
        std::size_t a = 0;
        for (int s = 0; s < 2; ++s) {
            if (!model_.on_sphere(s)) {
                for (double t : ax[a]) coords[s].push_back({t});
                a += 1;
            } else {
                for (double t : ax[a])
                    for (double p : ax[a + 1]) coords[s].push_back({t, p});
                a += 2;
            }
            for (const auto& c : coords[s]) w[s].push_back(model_.weights(s, c.data()));
        }
        double best = INFINITY;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < w[0].size(); ++i)
            for (std::size_t j = 0; j < w[1].size(); ++j) {
                const double v = model_.value(w[0][i], w[1][j]);
                // lexicographically first minimum wins ties within 1e-14
                if (v < best - 1e-14) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        std::vector<double> x = coords[0][bi];
        x.insert(x.end(), coords[1][bj].begin(), coords[1][bj].end());
        return x;
    }

    void line_search(std::vector<double>& x, double& fx, std::size_t k, double h) const {
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        auto f = [&](double t) {
            std::vector<double> y = x;
            y[k] = t;
            return objective(y);
        };
        double lo = x[k] - h, hi = x[k] + h;
        double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
        double fc = f(c), fd = f(d);
        for (int i = 0; i < 80 && hi - lo > 1e-13; ++i) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = f(d);
            }
        }
        const double t = 0.5 * (lo + hi);
        const double ft = f(t);
        if (ft < fx) {
            x[k] = t;
            fx = ft;
        }
    }

    void newton_polish(std::vector<double>& x, double& fx) const {
        const std::size_t n = x.size();
        const double h = 1e-4;
        for (int it = 0; it < 8; ++it) {
            Eigen::VectorXd grad(n);
            Eigen::MatrixXd hess(n, n);
            auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
                std::vector<double> y = x;
                y[i] += di;
                y[j] += dj;
                return objective(y);
            };
            for (std::size_t i = 0; i < n; ++i) {
                grad[i] = (at(i, h, i, 0.0) - at(i, -h, i, 0.0)) / (2.0 * h);
                for (std::size_t j = 0; j < n; ++j)
                    hess(i, j) = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4.0 * h * h);
            }
            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return;
            const Eigen::VectorXd step = ldlt.solve(grad);
            std::vector<double> y = x;
            for (std::size_t i = 0; i < n; ++i) y[i] -= step[i];
            const double fy = objective(y);
            if (!(fy < fx)) return;
            x = y;
            fx = fy;
        }
    }

    const XiModel& model_;
    int grid_;
    int iters_;
    std::size_t n1_, n2_;
};

/// Frame whose n_perp is `d` (unit), used for a degenerate subsystem.
inline Frame frame_with_perp(const Direction& d) {
    const Frame f = build_frame(d);
    return {f.n_perp, d, -f.n_perp2};
}

} // namespace detail

inline void validate(const Optimized& o) {
    if (o.grid_points < 8) throw DomainError("Optimized: grid_points must be >= 8");
    if (o.refine_iters < 1) throw DomainError("Optimized: refine_iters must be >= 1");
}

inline SqueezingReport squeezing_report(const CoupledState& state, const FramePolicy& policy) {
    SqueezingReport r;
    const CVector psi = state.vector();
    r.ms1 = mean_spin(state, Subsystem::First);
    r.ms2 = mean_spin(state, Subsystem::Second);
    r.degenerate = {r.ms1.degenerate(), r.ms2.degenerate()};

    if (const auto* fixed = std::get_if<FixedFrames>(&policy)) {
        r.frame1 = fixed->frame1;
        r.frame2 = fixed->frame2;
        r.proj1 = r.degenerate[0] ? 0.0 : r.ms1.vector.dot(r.frame1.n.vec());
        r.proj2 = r.degenerate[1] ? 0.0 : r.ms2.vector.dot(r.frame2.n.vec());
        detail::evaluate_frames(psi, r);
        return r;
    }

    const auto gauge = std::visit(
        [](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, FixedFrames>)
                return Gauge::XZ;
            else
                return p.gauge;
        },
        policy);
    const std::array<const MeanSpin*, 2> ms{&r.ms1, &r.ms2};
    std::array<Frame, 2> frames{Frame::lab(), Frame::lab()};
    for (int s = 0; s < 2; ++s)
        if (!r.degenerate[s]) frames[s] = build_frame(Direction::normalized(ms[s]->vector), gauge);
    r.proj1 = r.degenerate[0] ? 0.0 : r.ms1.magnitude;
    r.proj2 = r.degenerate[1] ? 0.0 : r.ms2.magnitude;

    if (r.degenerate[0] && r.degenerate[1]) {
        r.valid = false;
        return r;
    }

    if (std::holds_alternative<MeanSpinAligned>(policy)) {
        r.frame1 = frames[0];
        r.frame2 = frames[1];
        detail::evaluate_frames(psi, r);
        return r;
    }

    const auto& opt = std::get<Optimized>(policy);
    validate(opt);
    auto basis_of = [&](int s) -> std::vector<Vec3> {
        if (r.degenerate[s]) return {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        return {frames[s].n_perp.vec(), frames[s].n_perp2.vec()};
    };
    const detail::XiModel model(psi, basis_of(0), basis_of(1), r.denominator());
    const detail::XiMinimizer minimizer(model, opt.grid_points, opt.refine_iters);
    const auto x = minimizer.run();
    std::array<Frame, 2> chosen{Frame::lab(), Frame::lab()};
    for (int s = 0; s < 2; ++s) {
        const Direction d = Direction::normalized(model.direction(s, minimizer.weights(s, x)));
        chosen[s] = r.degenerate[s] ? detail::frame_with_perp(d) : make_frame(frames[s].n, d);
    }
    r.frame1 = chosen[0];
    r.frame2 = chosen[1];
    detail::evaluate_frames(psi, r);
    return r;
}

inline double squeezing_parameter(const CoupledState& state, const FramePolicy& policy) {
    return squeezing_report(state, policy).xi;
}

namespace detail {

/// Smallest variance of S.d over unit d perpendicular to the mean spin
/// (over the whole sphere when the mean spin vanishes).
inline double min_transverse_variance(const Spin1State& s, const MeanSpin& ms) {
    std::vector<Vec3> basis;
    if (ms.degenerate()) {
        basis = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    } else {
        const Frame f = build_frame(Direction::normalized(ms.vector));
        basis = {f.n_perp.vec(), f.n_perp2.vec()};
    }
    const CVector psi = s.vector();
    const auto k = static_cast<Eigen::Index>(basis.size());
    std::vector<CVector> img;
    std::vector<double> mean;
    for (const Vec3& b : basis) {
        img.push_back(spin_along(b) * psi);
        mean.push_back(psi.dot(img.back()).real());
    }
    Eigen::MatrixXd cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) cov(i, j) = img[i].dot(img[j]).real() - mean[i] * mean[j];
    cov = 0.5 * (cov + cov.transpose()).eval();
    return clamp_variance(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues()[0]);
}

} // namespace detail

/// Kitagawa-Ueda: min in-plane variance over the coherent value s/2 (s = 1).
inline double ku_parameter(const Spin1State& s) {
    return detail::min_transverse_variance(s, mean_spin(s)) / 0.5;
}

/// Puri: min in-plane variance over |<S.n>|/2.
inline double puri_parameter(const Spin1State& s) {
    const MeanSpin ms = mean_spin(s);
    if (ms.degenerate()) throw DomainError("puri_parameter: mean spin vanishes");
    return detail::min_transverse_variance(s, ms) / (0.5 * ms.magnitude);
}

} // namespace spinsq
