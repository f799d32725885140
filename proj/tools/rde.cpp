// rde: simulate, solve and analyze u[n+4k] = u[n] / (A[n] + B[n] u[n] u[n+4] ... u[n+4k-4]).

#include "rde/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

rde::SystemSpec load_system(const std::string& config_path, const std::string& preset) {
    if (!preset.empty()) return rde::preset_spec(preset);
    if (config_path.empty()) throw rde::ValidationError("one of --config or --preset is required");
    std::ifstream in(config_path);
    if (!in) throw rde::ValidationError("cannot open config " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return rde::parse_config(buf.str()).system;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulation, closed forms and analysis of order-4k rational difference equations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_path;
    std::int64_t steps = 0;
    std::int64_t horizon = 0;
    std::int64_t max_period = 0;
    std::int64_t k = 0;

    auto add_system = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON system config");
        sub->add_option("--preset", preset, "built-in system (fig1, fig2)");
    };

    auto* simulate = app.add_subcommand("simulate", "iterate and emit n,exact,decimal CSV");
    add_system(simulate);
    simulate->add_option("--steps", steps, "last index to emit")->default_val(40);
    simulate->add_option("--out", out_path, "output file (default stdout)");

    auto* compare = app.add_subcommand("compare", "certify the closed form against iteration");
    add_system(compare);
    compare->add_option("--horizon", horizon, "last index compared")->default_val(80);

    auto* analyze = app.add_subcommand("analyze", "equilibria, roots, stability, periodicity");
    add_system(analyze);
    auto* analyze_horizon = analyze->add_option("--horizon", horizon, "iterate this far to detect a period");
    analyze->add_option("--max-period", max_period, "largest period searched")->default_val(16);

    auto* period = app.add_subcommand("period", "predicted vs detected period");
    add_system(period);
    period->add_option("--horizon", horizon, "last index iterated")->default_val(96);
    period->add_option("--max-period", max_period, "largest period searched")->default_val(32);

    auto* symmetry = app.add_subcommand("symmetry", "certify the symmetry exponents for k");
    symmetry->add_option("--k", k, "order parameter");
    symmetry->add_option("--config", config_path, "take k from a config");

    auto* figure = app.add_subcommand("figure", "CSV for a built-in figure preset");
    figure->add_option("--preset", preset, "fig1 or fig2")->required();
    auto* figure_steps = figure->add_option("--steps", steps, "last index to emit");
    figure->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : rde::cli::usage;
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return rde::cli::usage;
        }
        out = &file;
    }

    try {
        if (*simulate) return rde::cli::cmd_simulate(load_system(config_path, preset), steps, *out);
        if (*compare) return rde::cli::cmd_compare(load_system(config_path, preset), horizon, *out);
        if (*analyze) {
            std::optional<std::int64_t> h;
            if (analyze_horizon->count() > 0) h = horizon;
            return rde::cli::cmd_analyze(load_system(config_path, preset), h, max_period, *out);
        }
        if (*period) return rde::cli::cmd_period(load_system(config_path, preset), horizon, max_period, *out);
        if (*symmetry) {
            if (k == 0 && !config_path.empty()) k = load_system(config_path, "").k;
            if (k < 1) throw rde::ValidationError("--k must be at least 1");
            return rde::cli::cmd_symmetry(k, *out);
        }
        if (*figure) {
            std::optional<std::int64_t> s;
            if (figure_steps->count() > 0) s = steps;
            return rde::cli::cmd_figure(preset, s, *out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rde::cli::usage;
    }
    return rde::cli::usage;
}
