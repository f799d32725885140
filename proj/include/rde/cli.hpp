#pragma once

// Subcommand bodies for the `rde` tool. Each writes to the given stream and
// returns the process exit code: 0 success/agreement, 1 mismatch or analysis
// failure, 2 usage/config error.

#include "rde/analysis.hpp"
#include "rde/closed_form.hpp"
#include "rde/config.hpp"
#include "rde/invariants.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace rde::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2 };

// "n,exact,decimal" rows for n = 0 .. steps, then "# forbidden at n=..." when
// the orbit hits a zero denominator.
inline int cmd_simulate(const SystemSpec& spec, std::int64_t steps, std::ostream& out) {
    if (steps < 1) throw ValidationError("--steps must be at least 1");
    const Orbit orbit = iterate(spec, std::max(steps, spec.order() - 1));
    out << "n,exact,decimal\n";
    for (std::int64_t n = 0; n <= std::min(steps, orbit.last_index()); ++n) {
        const Rational& q = orbit.terms[static_cast<std::size_t>(n)];
        out << n << ',' << q.str() << ',' << to_decimal(q, 17) << '\n';
    }
    if (orbit.forbidden_at && *orbit.forbidden_at <= steps) out << "# forbidden at n=" << *orbit.forbidden_at << '\n';
    return ok;
}

inline std::int64_t default_figure_steps(std::string_view preset) { return preset == "fig2" ? 160 : 40; }

inline int cmd_figure(std::string_view preset, std::optional<std::int64_t> steps, std::ostream& out) {
    const SystemSpec spec = preset_spec(preset);
    return cmd_simulate(spec, steps.value_or(default_figure_steps(preset)), out);
}

inline int cmd_compare(const SystemSpec& spec, std::int64_t horizon, std::ostream& out,
                       const CustomEvaluator& custom = {}) {
    const ComparisonReport report = compare(spec, horizon, custom);
    out << "evaluator: " << evaluator_name(report.evaluator) << "\n";
    out << "horizon: " << report.horizon << "\n";
    if (report.oracle_forbidden_at)
        out << "oracle: forbidden at n=" << *report.oracle_forbidden_at << ", comparison stops there\n";
    else
        out << "oracle: complete\n";
    const std::int64_t order = spec.order();
    for (std::int64_t t = 0; t < report.checked; ++t) {
        const bool bad = std::any_of(report.mismatches.begin(), report.mismatches.end(),
                                     [&](const Mismatch& m) { return m.index == t; });
        out << "  index " << t << " (n=" << t / order << ", i=" << t % order << ") "
            << evaluator_name(report.evaluator) << (bad ? " MISMATCH" : " ok") << "\n";
    }
    out << "checked " << report.checked << " indices, " << report.mismatches.size() << " mismatches\n";
    if (!report.agrees()) {
        const Mismatch& first = report.mismatches.front();
        out << "first mismatch at index " << first.index << ": closed form "
            << (first.closed_form ? first.closed_form->str() : std::string("<zero denominator>"))
            << ", oracle " << first.oracle.str() << "\n";
        return failure;
    }
    return ok;
}

namespace detail {

inline void print_roots(const RootSet& set, std::ostream& out) {
    char buf[160];
    for (const Root& r : set.roots) {
        const char* src = r.source == Root::Source::unit_circle_exponent ? "unit-circle m="
                          : r.source == Root::Source::fourth_root_of_A   ? "4th-root-of-A r="
                                                                         : "m=";
        std::snprintf(buf, sizeof buf, "    %s%lld  %+.12f%+.12fi  |lambda|=%.15f\n", src,
                      static_cast<long long>(r.index), r.value.real(), r.value.imag(), r.modulus);
        out << buf;
    }
}

inline void print_period(const SystemSpec& spec, std::optional<std::int64_t> horizon,
                         std::int64_t max_period, std::ostream& out) {
    const PeriodPrediction pred = predict_period(spec);
    out << "predicted period ";
    if (pred.period)
        out << *pred.period << " (" << period_tag_name(pred.tag) << ")";
    else
        out << "none";
    if (horizon) {
        const Orbit orbit = iterate(spec, *horizon);
        if (!orbit.complete()) out << "; orbit forbidden at n=" << *orbit.forbidden_at;
        try {
            const auto det = detect_period(orbit, max_period);
            out << "; detected " << (det ? std::to_string(*det) : std::string("none"));
            if (det && pred.period && *pred.period % *det != 0) out << " (does not divide prediction)";
        } catch (const InsufficientHorizon& e) {
            out << "; detection skipped: " << e.what();
        }
    }
    out << "\n";
}

}  // namespace detail

inline int cmd_analyze(const SystemSpec& spec, std::optional<std::int64_t> horizon, std::int64_t max_period,
                       std::ostream& out) {
    StabilityReport report;
    try {
        report = classify(spec);
    } catch (const DegenerateB& e) {
        out << "analysis failed: " << e.what() << "\n";
        return failure;
    } catch (const ValidationError& e) {
        out << "analysis failed: " << e.what() << "\n";
        return failure;
    }
    out << "equation: u[n+" << spec.order() << "] = u[n] / (" << spec.A.term(0) << " + " << spec.B.term(0)
        << " * prod), k=" << spec.k << "\n";
    out << "equilibria:";
    for (const auto& e : report.equilibria) out << " " << e.equilibrium.describe();
    out << "\n";
    for (const auto& e : report.equilibria) {
        const bool zero = e.equilibrium.kind == Equilibrium::Kind::zero;
        out << (zero ? "zero equilibrium " : "nonzero equilibrium " + e.equilibrium.describe() + " ")
            << stability_name(e.classification) << " (" << e.reason << ")\n";
        out << "  characteristic roots:\n";
        detail::print_roots(e.roots, out);
    }
    if (report.nonzero_roots && report.equilibria.size() == 1) {
        out << "no real nonzero equilibrium; linearization about a nonzero equilibrium is "
            << (report.nonzero_roots->has_unit_modulus() ? "non-hyperbolic" : "hyperbolic") << ":\n";
        detail::print_roots(*report.nonzero_roots, out);
    }
    detail::print_period(spec, horizon, max_period, out);
    return ok;
}

inline int cmd_period(const SystemSpec& spec, std::int64_t horizon, std::int64_t max_period, std::ostream& out) {
    const PeriodPrediction pred = predict_period(spec);
    const Orbit orbit = iterate(spec, horizon);
    std::optional<std::int64_t> detected;
    try {
        detected = detect_period(orbit, max_period);
    } catch (const InsufficientHorizon& e) {
        out << "detection failed: " << e.what() << "\n";
        return failure;
    }
    out << "predicted: " << (pred.period ? std::to_string(*pred.period) : std::string("none")) << " ("
        << period_tag_name(pred.tag) << ")\n";
    out << "detected: " << (detected ? std::to_string(*detected) : std::string("none")) << " (max period "
        << max_period << ", horizon " << horizon << (orbit.complete() ? "" : ", orbit truncated") << ")\n";
    if (pred.period && detected && *pred.period % *detected != 0) {
        out << "inconsistent: detected period does not divide the prediction\n";
        return failure;
    }
    return ok;
}

inline int cmd_symmetry(std::int64_t k, std::ostream& out) {
    const SymmetryCertificate cert = symmetry_roots(k);
    out << "k=" << k << ": " << cert.checks.size() << " exponents (expected " << 4 * (k - 1) << ")\n";
    out << "m,exact,residual\n";
    char buf[96];
    for (const auto& c : cert.checks) {
        std::snprintf(buf, sizeof buf, "%lld,%s,%.3e\n", static_cast<long long>(c.exponent),
                      c.exact ? "pass" : "FAIL", c.residual);
        out << buf;
    }
    const bool pass = cert.all_pass() && static_cast<std::int64_t>(cert.checks.size()) == 4 * (k - 1);
    out << (pass ? "all checks pass\n" : "check failed\n");
    return pass ? ok : failure;
}

}  // namespace rde::cli
