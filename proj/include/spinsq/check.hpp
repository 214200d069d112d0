#pragma once

// The discrepancy report: every printed closed form compared with the engine
// over a canonical grid, plus the z-alignment amplitude formulas checked
// against the transverse-expectation conditions they are meant to satisfy.

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "spinsq/closed_forms.hpp"
#include "spinsq/io.hpp"
#include "spinsq/states.hpp"

namespace spinsq {

struct FamilySummary {
    std::string family;
    Verdict verdict = Verdict::Undefined;
    std::size_t rows = 0, matches = 0, mismatches = 0, undefined = 0;
    double max_abs_diff = 0.0;
    std::string note;
};

struct ZAlignmentRecord {
    AmpMatrix partial;
    bool degenerate = false;
    /// max transverse expectation after completing with the printed formulas
    double printed_residual = std::numeric_limits<double>::quiet_NaN();
    /// same, after completing with the exact linear solve
    double linear_residual = std::numeric_limits<double>::quiet_NaN();

    bool printed_ok() const { return std::isfinite(printed_residual) && printed_residual <= kCompareTol; }
};

struct CheckReport {
    std::string policy_label;
    std::vector<DiscrepancyRecord> records;
    std::vector<FamilySummary> summaries;
    std::vector<ZAlignmentRecord> zalign;

    const FamilySummary& summary(const std::string& family) const {
        for (const auto& s : summaries)
            if (s.family == family) return s;
        throw Error("CheckReport: no family " + family);
    }
};

/// 0.1, 0.2, ..., 3.0
inline std::vector<double> check_angles() {
    std::vector<double> v;
    for (int k = 1; k <= 30; ++k) v.push_back(0.1 * k);
    return v;
}

inline ZAlignmentRecord check_z_alignment(const AmpMatrix& partial) {
    ZAlignmentRecord rec;
    rec.partial = partial;
    auto residual_of = [&](const ZAlignment& z) {
        try {
            return transverse_residual(CoupledState::normalized(with_middle_row_ends(partial, z)));
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    try {
        rec.printed_residual = residual_of(solve_z_alignment(partial));
    } catch (const DegenerateDenominator&) {
        rec.degenerate = true;
    }
    try {
        rec.linear_residual = residual_of(solve_z_alignment_linear(partial));
    } catch (const DegenerateDenominator&) {
    }
    return rec;
}

/// Random real partial amplitude sets (c11, c12, c13, c22, c31, c32, c33) from a fixed seed.
inline std::vector<AmpMatrix> z_alignment_inputs(std::size_t n, std::uint64_t seed = 20240611) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<AmpMatrix> out;
    while (out.size() < n) {
        AmpMatrix c = AmpMatrix::Zero();
        for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 0}, {2, 1}, {2, 2}}) c(i, j) = gauss(rng);
        const cplx d1 = c(0, 0) + std::conj(c(2, 0)) - c(0, 2) - std::conj(c(2, 2));
        const cplx d2 = c(0, 0) + c(2, 0);
        if (std::abs(d1) > 1e-6 && std::abs(d2) > 1e-6) out.push_back(c);
    }
    return out;
}

inline CheckReport run_check(const FramePolicy& policy, const std::string& policy_label) {
    CheckReport rep;
    rep.policy_label = policy_label;
    const auto angles = check_angles();

    auto run_family = [&](const std::string& name, const std::vector<ClosedFormFamily>& members,
                          const std::string& note = {}) {
        FamilySummary s;
        s.family = name;
        s.note = note;
        for (const auto& f : members) {
            DiscrepancyRecord r = compare_closed_forms(f, policy);
            r.family = name;
            ++s.rows;
            switch (r.flag) {
            case Verdict::Match: ++s.matches; break;
            case Verdict::Mismatch: ++s.mismatches; break;
            case Verdict::Undefined: ++s.undefined; break;
            }
            if (std::isfinite(r.abs_diff)) s.max_abs_diff = std::max(s.max_abs_diff, r.abs_diff);
            rep.records.push_back(std::move(r));
        }
        s.verdict = s.mismatches ? Verdict::Mismatch : (s.matches ? Verdict::Match : Verdict::Undefined);
        rep.summaries.push_back(s);
    };

    std::vector<ClosedFormFamily> fam;
    for (double a : angles)
        for (double b : angles) fam.emplace_back(ProductPair{a, b});
    run_family("ProductPair", fam);

    fam.clear();
    for (double a : angles) fam.emplace_back(CoherentTimesSqueezed{a});
    {
        // engine minimum on a fine grid, for the annotation
        double best = INFINITY, arg = 0.0;
        for (int k = 0; k <= 20000; ++k) {
            const double th = std::numbers::pi * k / 20000.0;
            const SqueezingReport r = squeezing_report(family_state(CoherentTimesSqueezed{th}), policy);
            if (r.valid && r.xi < best) best = r.xi, arg = th;
        }
        char note[160];
        std::snprintf(note, sizeof note, "engine_min=%.6f at theta=%.6f cos(theta/2)=%.6f", best, arg,
                      std::cos(arg / 2.0));
        run_family("CoherentTimesSqueezed", fam, note);
    }

    auto config_members = [&](int kind) {
        std::vector<ClosedFormFamily> m;
        for (double a : angles)
            for (double b : angles) {
                const double x = std::sin(a) * std::cos(b), y = std::sin(a) * std::sin(b), z = std::cos(b);
                if (kind == 1) m.emplace_back(Config1Amps{x, y, z});
                if (kind == 2) m.emplace_back(Config2Amps{x, y, z});
                if (kind == 3) m.emplace_back(Config3Amps{std::cos(a), x, y});
            }
        return m;
    };
    run_family("Config1", config_members(1));
    fam.clear();
    for (double a : angles) fam.emplace_back(Config1Amps{std::sin(a), 0.0, 1.0});
    run_family("Config1[c22=0]", fam);
    run_family("Config2", config_members(2));
    run_family("Config3", config_members(3));

    for (const auto& p : z_alignment_inputs(100)) rep.zalign.push_back(check_z_alignment(p));
    return rep;
}

inline void write_check_report(const CheckReport& rep, std::ostream& out) {
    out << "# closed-form check, engine policy: " << rep.policy_label << '\n';
    out << "family,params,closed_form,engine,abs_diff,flag\n";
    for (const auto& r : rep.records)
        out << r.family << ',' << r.params << ',' << format_real(r.closed_form_value) << ','
            << format_real(r.engine_value) << ',' << format_real(r.abs_diff) << ',' << to_string(r.flag) << '\n';
    out << "# summary\n";
    for (const auto& s : rep.summaries) {
        out << "# family=" << s.family << " verdict=" << to_string(s.verdict) << " rows=" << s.rows
            << " match=" << s.matches << " mismatch=" << s.mismatches << " undefined=" << s.undefined
            << " max_abs_diff=" << format_real(s.max_abs_diff);
        if (!s.note.empty()) out << ' ' << s.note;
        out << '\n';
    }
    std::size_t failures = 0;
    for (const auto& z : rep.zalign) failures += !z.printed_ok();
    out << "# z-alignment: printed c23/c21 formulas fail the transverse conditions on " << failures << " of "
        << rep.zalign.size() << " inputs (tolerance " << format_real(kCompareTol) << ")\n";
    out << "zalign,c11,c12,c13,c22,c31,c32,c33,printed_residual,linear_residual,flag\n";
    std::size_t idx = 0;
    for (const auto& z : rep.zalign) {
        out << idx++;
        for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 0}, {2, 1}, {2, 2}})
            out << ',' << format_real(z.partial(i, j).real());
        out << ',' << format_real(z.printed_residual) << ',' << format_real(z.linear_residual) << ','
            << (z.degenerate ? "UNDEFINED" : (z.printed_ok() ? "MATCH" : "MISMATCH")) << '\n';
    }
}

} // namespace spinsq
