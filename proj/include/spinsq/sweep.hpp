#pragma once

// Grid sweeps over the state families and evolution times, producing CSV
// tables. Row order is row-major over the axes, first axis outermost.

#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spinsq/closed_forms.hpp"
#include "spinsq/dynamics.hpp"
#include "spinsq/io.hpp"

namespace spinsq {

/// Inclusive linear grid.
struct Axis {
    double start;
    double stop;
    int count;

    void validate() const {
        if (count < 2) throw FormatError("grid axis needs at least 2 points");
        if (!(start < stop)) throw FormatError("grid axis needs start < stop");
    }

    std::vector<double> values() const {
        validate();
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) v[k] = start + (stop - start) * k / (count - 1);
        v.back() = stop;
        return v;
    }
};

/// Parses "a:b:n".
inline Axis parse_axis(const std::string& text) {
    const auto p1 = text.find(':');
    const auto p2 = p1 == std::string::npos ? std::string::npos : text.find(':', p1 + 1);
    if (p2 == std::string::npos || text.find(':', p2 + 1) != std::string::npos)
        throw FormatError("grid must look like start:stop:count, got '" + text + "'");
    auto number = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0' || !std::isfinite(v)) throw FormatError("bad number '" + s + "' in grid");
        return v;
    };
    const std::string cs = text.substr(p2 + 1);
    char* end = nullptr;
    const long n = std::strtol(cs.c_str(), &end, 10);
    if (cs.empty() || *end != '\0' || n > 100000) throw FormatError("bad count '" + cs + "' in grid");
    Axis a{number(text.substr(0, p1)), number(text.substr(p1 + 1, p2 - p1 - 1)), static_cast<int>(n)};
    a.validate();
    return a;
}

enum class SweepKind { Product, Mixed, Config1, Config2, Config3, Evolve, Evolve2 };

inline SweepKind parse_sweep_kind(const std::string& s) {
    if (s == "product") return SweepKind::Product;
    if (s == "mixed") return SweepKind::Mixed;
    if (s == "config1") return SweepKind::Config1;
    if (s == "config2") return SweepKind::Config2;
    if (s == "config3") return SweepKind::Config3;
    if (s == "evolve") return SweepKind::Evolve;
    if (s == "evolve2") return SweepKind::Evolve2;
    throw FormatError("unknown sweep kind '" + s + "'");
}

/// Grid used when the caller gives none. Angle ranges stop short of the
/// theta = pi edge where the product family loses its mean spin.
inline std::vector<Axis> default_axes(SweepKind k) {
    switch (k) {
    case SweepKind::Product: return {{0.05, 3.10, 50}, {0.05, 3.10, 50}};
    case SweepKind::Mixed: return {{0.05, 3.10, 400}};
    case SweepKind::Config1:
    case SweepKind::Config2:
    case SweepKind::Config3: return {{0.05, 3.10, 50}, {0.05, 3.10, 50}};
    case SweepKind::Evolve: return {{0.0, 3.0, 301}};
    case SweepKind::Evolve2: return {{0.0, 3.0, 60}, {0.0, 3.0, 60}};
    }
    return {};
}

inline bool axis_count_ok(SweepKind k, std::size_t n) {
    switch (k) {
    case SweepKind::Mixed:
    case SweepKind::Evolve: return n == 1;
    case SweepKind::Config3: return n == 2 || n == 4;
    default: return n == 2;
    }
}

struct SweepSpec {
    SweepKind kind;
    std::vector<Axis> axes;
    FramePolicy policy;
    /// Starting state for evolve / evolve2; |1,1> when empty.
    std::optional<CoupledState> initial;
};

namespace detail {

inline double engine_xi(const CoupledState& s, const FramePolicy& policy) {
    const SqueezingReport r = squeezing_report(s, policy);
    return r.valid ? r.xi : std::numeric_limits<double>::quiet_NaN();
}

inline double closed_or_nan(const ClosedFormFamily& f) {
    try {
        return closed_form_xi(f);
    } catch (const ZeroDenominator&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

inline double config_engine(ConfigKind kind, double a, double b, double p1, double p2, const FramePolicy& policy) {
    try {
        return engine_xi(config(kind, a, b, p1, p2), policy);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace detail

inline CsvTable run_sweep(const SweepSpec& spec) {
    const std::vector<Axis> axes = spec.axes.empty() ? default_axes(spec.kind) : spec.axes;
    if (!axis_count_ok(spec.kind, axes.size())) throw FormatError("wrong number of grid axes for this sweep kind");
    std::vector<std::vector<double>> g;
    for (const auto& a : axes) g.push_back(a.values());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const CoupledState start = spec.initial.value_or(CoupledState::basis(0, 0));
    CsvTable t;

    switch (spec.kind) {
    case SweepKind::Product:
        t.header = {"theta1", "theta2", "xi_engine", "xi_closed"};
        for (double t1 : g[0])
            for (double t2 : g[1])
                t.rows.push_back({t1, t2, detail::engine_xi(family_state(ProductPair{t1, t2}), spec.policy),
                                  detail::closed_or_nan(ProductPair{t1, t2})});
        break;
    case SweepKind::Mixed:
        t.header = {"theta", "xi_engine", "xi_closed"};
        for (double th : g[0])
            t.rows.push_back({th, detail::engine_xi(family_state(CoherentTimesSqueezed{th}), spec.policy),
                              detail::closed_or_nan(CoherentTimesSqueezed{th})});
        break;
    case SweepKind::Config1:
    case SweepKind::Config2: {
        const bool one = spec.kind == SweepKind::Config1;
        t.header = {"alpha", "beta", "xi_engine", "xi_closed"};
        for (double a : g[0])
            for (double b : g[1]) {
                const double x = std::sin(a) * std::cos(b), y = std::sin(a) * std::sin(b), z = std::cos(b);
                const double closed = one ? detail::closed_or_nan(Config1Amps{x, y, z})
                                          : detail::closed_or_nan(Config2Amps{x, y, z});
                t.rows.push_back({a, b, detail::config_engine(one ? ConfigKind::One : ConfigKind::Two, a, b, 0, 0,
                                                              spec.policy),
                                  closed});
            }
        break;
    }
    case SweepKind::Config3: {
        const bool phases = g.size() == 4;
        t.header = phases ? std::vector<std::string>{"alpha", "beta", "phi1", "phi2", "xi_engine", "xi_closed"}
                           : std::vector<std::string>{"alpha", "beta", "xi_engine", "xi_closed"};
        const std::vector<double> zero{0.0};
        for (double a : g[0])
            for (double b : g[1])
                for (double p1 : phases ? g[2] : zero)
                    for (double p2 : phases ? g[3] : zero) {
                        const double engine = detail::config_engine(ConfigKind::Three, a, b, p1, p2, spec.policy);
                        // the printed form is for real amplitudes only
                        const double closed =
                            (p1 == 0.0 && p2 == 0.0)
                                ? detail::closed_or_nan(Config3Amps{std::cos(a), std::sin(a) * std::cos(b),
                                                                    std::sin(a) * std::sin(b)})
                                : nan;
                        if (phases)
                            t.rows.push_back({a, b, p1, p2, engine, closed});
                        else
                            t.rows.push_back({a, b, engine, closed});
                    }
        break;
    }
    case SweepKind::Evolve: {
        t.header = {"tau", "xi"};
        const Trajectory tr = trajectory(start, pair_exchange_generator(), g[0], spec.policy);
        for (std::size_t i = 0; i < g[0].size(); ++i)
            t.rows.push_back({g[0][i], tr.reports[i].valid ? tr.reports[i].xi : nan});
        break;
    }
    case SweepKind::Evolve2: {
        t.header = {"tau1", "tau2", "xi"};
        const TwoStageSearch s =
            two_stage_search(start, pair_exchange_generator(), g[0], cross_quadratic_generator(), g[1], spec.policy);
        for (std::size_t i = 0; i < g[0].size(); ++i)
            for (std::size_t j = 0; j < g[1].size(); ++j)
                t.rows.push_back({g[0][i], g[1][j], s.xi[i * g[1].size() + j]});
        break;
    }
    }
    return t;
}

/// Column minimum ignoring NaN; +inf when every entry is NaN.
inline double column_min(const CsvTable& t, const std::string& name) {
    const std::size_t c = t.column(name);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : t.rows)
        if (std::isfinite(r[c])) m = std::min(m, r[c]);
    return m;
}

} // namespace spinsq
