// spinsq: squeezing parameters of coupled spin-1 pairs from the command line.
//
//   spinsq xi     --state FILE [--policy fixed|aligned|optimized]
//   spinsq sweep  --kind product|mixed|config1|config2|config3|evolve|evolve2 [--grid a:b:n]... --out FILE
//   spinsq check  [--out FILE]
//   spinsq evolve --initial coherent-11|mixed-10|FILE [--stages 1|2] [--tau1 X] [--grid a:b:n]... --out FILE
//
// Exit codes: 0 ok, 1 bad flags, 2 invalid input, 3 xi undefined.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinsq/check.hpp"
#include "spinsq/sweep.hpp"

namespace {

using namespace spinsq;

constexpr int kExitFlags = 1;
constexpr int kExitInput = 2;
constexpr int kExitUndefined = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolicyOptions {
    std::string policy;
    std::string gauge = "xz";
    int grid_points = 64;
    int refine_iters = 40;
    std::string axis1 = "0,0,1", perp1 = "1,0,0", axis2 = "0,0,1", perp2 = "1,0,0";

    void add_to(CLI::App& app, const std::string& default_policy) {
        policy = default_policy;
        app.add_option("--policy", policy, "frame policy")
            ->check(CLI::IsMember({"fixed", "aligned", "optimized"}))
            ->capture_default_str();
        app.add_option("--gauge", gauge, "in-plane reference for aligned/optimized frames")
            ->check(CLI::IsMember({"pole", "xz"}))
            ->capture_default_str();
        app.add_option("--grid-points", grid_points, "optimized policy: grid points per angle")
            ->check(CLI::Range(8, 4096))
            ->capture_default_str();
        app.add_option("--refine-iters", refine_iters, "optimized policy: refinement sweeps")
            ->check(CLI::Range(1, 10000))
            ->capture_default_str();
        app.add_option("--axis1", axis1, "fixed policy: subsystem-1 axis x,y,z")->capture_default_str();
        app.add_option("--perp1", perp1, "fixed policy: subsystem-1 perpendicular x,y,z")->capture_default_str();
        app.add_option("--axis2", axis2, "fixed policy: subsystem-2 axis x,y,z")->capture_default_str();
        app.add_option("--perp2", perp2, "fixed policy: subsystem-2 perpendicular x,y,z")->capture_default_str();
    }

    std::string label() const {
        if (policy == "fixed") return "fixed";
        if (policy == "aligned") return "aligned gauge=" + gauge;
        return "optimized gauge=" + gauge + " grid_points=" + std::to_string(grid_points) +
               " refine_iters=" + std::to_string(refine_iters);
    }

    FramePolicy build() const {
        const Gauge g = gauge == "pole" ? Gauge::Pole : Gauge::XZ;
        if (policy == "aligned") return MeanSpinAligned{g};
        if (policy == "optimized") return Optimized{grid_points, refine_iters, g};
        try {
            return FixedFrames{make_frame(Direction::normalized(vec(axis1)), Direction::normalized(vec(perp1))),
                               make_frame(Direction::normalized(vec(axis2)), Direction::normalized(vec(perp2)))};
        } catch (const DomainError& e) {
            throw CLI::ValidationError("--axis/--perp", e.what());
        }
    }

    static Vec3 vec(const std::string& s) {
        std::stringstream ss(s);
        Vec3 v;
        char sep;
        if (!(ss >> v.x() >> sep >> v.y() >> sep >> v.z()) || !ss.eof())
            throw CLI::ValidationError("direction", "expected x,y,z, got '" + s + "'");
        return v;
    }
};

CoupledState load_state(const std::string& path) {
    try {
        return read_state_file(path);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

CoupledState initial_state(const std::string& name) {
    if (name == "coherent-11") return CoupledState::basis(0, 0);
    if (name == "mixed-10") return CoupledState::basis(0, 1);
    return load_state(name);
}

std::vector<Axis> parse_axes(const std::vector<std::string>& grids) {
    std::vector<Axis> axes;
    for (const auto& g : grids) {
        try {
            axes.push_back(parse_axis(g));
        } catch (const FormatError& e) {
            throw CLI::ValidationError("--grid", e.what());
        }
    }
    return axes;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write " + out_path);
}

std::string vec_str(const Vec3& v) { return format_real(v.x()) + "," + format_real(v.y()) + "," + format_real(v.z()); }

int run_xi(const std::string& state_path, const PolicyOptions& po) {
    const CoupledState s = load_state(state_path);
    const SqueezingReport r = squeezing_report(s, po.build());
    std::ostream& o = std::cout;
    o << "xi=" << format_real(r.xi) << '\n';
    o << "valid=" << (r.valid ? "true" : "false") << '\n';
    o << "policy=" << po.label() << '\n';
    o << "var1=" << format_real(r.var1) << '\n';
    o << "var2=" << format_real(r.var2) << '\n';
    o << "cross=" << format_real(r.cross) << '\n';
    o << "ms1=" << vec_str(r.ms1.vector) << '\n';
    o << "ms1_magnitude=" << format_real(r.ms1.magnitude) << '\n';
    o << "ms2=" << vec_str(r.ms2.vector) << '\n';
    o << "ms2_magnitude=" << format_real(r.ms2.magnitude) << '\n';
    o << "proj1=" << format_real(r.proj1) << '\n';
    o << "proj2=" << format_real(r.proj2) << '\n';
    o << "frame1_n=" << vec_str(r.frame1.n.vec()) << '\n';
    o << "frame1_perp=" << vec_str(r.frame1.n_perp.vec()) << '\n';
    o << "frame1_perp2=" << vec_str(r.frame1.n_perp2.vec()) << '\n';
    o << "frame2_n=" << vec_str(r.frame2.n.vec()) << '\n';
    o << "frame2_perp=" << vec_str(r.frame2.n_perp.vec()) << '\n';
    o << "frame2_perp2=" << vec_str(r.frame2.n_perp2.vec()) << '\n';
    std::string deg;
    if (r.degenerate[0]) deg = "1";
    if (r.degenerate[1]) deg += deg.empty() ? "2" : ",2";
    o << "degenerate=" << (deg.empty() ? "none" : deg) << '\n';
    o << "SQUEEZED=" << (r.squeezed() ? "true" : "false") << '\n';
    return r.valid ? 0 : kExitUndefined;
}

std::string default_policy_for(SweepKind k) {
    return (k == SweepKind::Product || k == SweepKind::Mixed) ? "aligned" : "optimized";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin squeezing of coupled spin-1 pairs"};
    app.require_subcommand(1);

    auto* xi = app.add_subcommand("xi", "squeezing report for a state file");
    std::string state_path;
    PolicyOptions xi_policy;
    xi->add_option("--state", state_path, "state file (JSON)")->required();
    xi_policy.add_to(*xi, "optimized");

    auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
    std::string kind_name, sweep_out, sweep_initial = "coherent-11";
    std::vector<std::string> sweep_grids;
    PolicyOptions sweep_policy;
    sweep->add_option("--kind", kind_name, "sweep kind")
        ->required()
        ->check(CLI::IsMember({"product", "mixed", "config1", "config2", "config3", "evolve", "evolve2"}));
    sweep->add_option("--grid", sweep_grids, "axis grid start:stop:count, once per axis");
    sweep->add_option("--out", sweep_out, "output CSV path (stdout when omitted)");
    sweep->add_option("--initial", sweep_initial, "evolve kinds: coherent-11, mixed-10 or a state file")
        ->capture_default_str();
    sweep_policy.add_to(*sweep, "");

    auto* check = app.add_subcommand("check", "compare printed closed forms with the engine");
    std::string check_out;
    PolicyOptions check_policy;
    check->add_option("--out", check_out, "report path (stdout when omitted)");
    check_policy.add_to(*check, "aligned");

    auto* evolve = app.add_subcommand("evolve", "squeezing along unitary evolution");
    std::string evolve_initial = "coherent-11", evolve_out;
    int stages = 1;
    std::optional<double> tau1;
    std::vector<std::string> evolve_grids;
    PolicyOptions evolve_policy;
    evolve->add_option("--initial", evolve_initial, "coherent-11, mixed-10 or a state file")->capture_default_str();
    evolve->add_option("--stages", stages, "1: pair exchange; 2: then cross-quadratic")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();
    evolve->add_option("--tau1", tau1, "stage-1 time for a fixed two-stage launch")->check(CLI::NonNegativeNumber);
    evolve->add_option("--grid", evolve_grids, "tau grid start:stop:count (two grids to search tau1 x tau2)");
    evolve->add_option("--out", evolve_out, "output CSV path (stdout when omitted)");
    evolve_policy.add_to(*evolve, "optimized");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFlags;
    }

    try {
        if (*xi) return run_xi(state_path, xi_policy);

        if (*sweep) {
            const SweepKind kind = parse_sweep_kind(kind_name);
            if (sweep_policy.policy.empty()) sweep_policy.policy = default_policy_for(kind);
            SweepSpec spec{kind, parse_axes(sweep_grids), sweep_policy.build(), std::nullopt};
            if (kind == SweepKind::Evolve || kind == SweepKind::Evolve2) spec.initial = initial_state(sweep_initial);
            if (!spec.axes.empty() && !axis_count_ok(kind, spec.axes.size()))
                throw CLI::ValidationError("--grid", "wrong number of --grid axes for kind " + kind_name);
            emit(sweep_out, csv_string(run_sweep(spec)));
            return 0;
        }

        if (*check) {
            std::ostringstream ss;
            write_check_report(run_check(check_policy.build(), check_policy.label()), ss);
            emit(check_out, ss.str());
            return 0;
        }

        if (*evolve) {
            const CoupledState start = initial_state(evolve_initial);
            const FramePolicy policy = evolve_policy.build();
            const std::vector<Axis> axes = parse_axes(evolve_grids);
            const double nan = std::numeric_limits<double>::quiet_NaN();
            CsvTable table;
            if (stages == 1 || tau1) {
                if (axes.size() > 1) throw CLI::ValidationError("--grid", "expected one tau grid");
                const auto grid = (axes.empty() ? Axis{0.0, 3.0, 301} : axes[0]).values();
                const Trajectory tr = stages == 1 ? trajectory(start, pair_exchange_generator(), grid, policy)
                                                  : two_stage_trajectory(start, pair_exchange_generator(), *tau1,
                                                                         cross_quadratic_generator(), grid, policy);
                table.header = stages == 1 ? std::vector<std::string>{"tau", "xi"}
                                           : std::vector<std::string>{"tau1", "tau2", "xi"};
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double v = tr.reports[i].valid ? tr.reports[i].xi : nan;
                    if (stages == 1)
                        table.rows.push_back({grid[i], v});
                    else
                        table.rows.push_back({*tau1, grid[i], v});
                }
                std::cerr << "min_xi=" << format_real(tr.min_xi()) << '\n';
            } else {
                if (axes.size() == 1 || axes.size() > 2)
                    throw CLI::ValidationError("--grid", "two-stage search takes zero or two grids");
                const Axis a1 = axes.empty() ? Axis{0.0, 3.0, 60} : axes[0];
                const Axis a2 = axes.empty() ? Axis{0.0, 3.0, 60} : axes[1];
                SweepSpec spec{SweepKind::Evolve2, {a1, a2}, policy, start};
                table = run_sweep(spec);
                double best = INFINITY, b1 = nan, b2 = nan;
                for (const auto& r : table.rows)
                    if (std::isfinite(r[2]) && r[2] < best) best = r[2], b1 = r[0], b2 = r[1];
                std::cerr << "min_xi=" << format_real(best) << " tau1=" << format_real(b1)
                          << " tau2=" << format_real(b2) << '\n';
            }
            emit(evolve_out, csv_string(table));
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFlags;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const spinsq::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitFlags;
}
