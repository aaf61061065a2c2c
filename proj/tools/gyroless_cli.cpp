// Command-line harness: simulate, certificate, sweep, verify.
// Exit codes: 0 success, 1 configuration error, 2 invariant or numerical failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gyroless/errors.hpp"
#include "gyroless/report.hpp"
#include "gyroless/scenario.hpp"
#include "gyroless/verify.hpp"

namespace {

using namespace gyroless;

constexpr int kConfigError = 1;
constexpr int kInvariantFailure = 2;

ScenarioConfig load_with_seed(const std::string& path, std::optional<std::uint64_t> cli_seed) {
    ScenarioConfig cfg = load_scenario(path);
    cfg.sensor.seed = resolve_seed(cfg.sensor.seed, std::getenv("GYROLESS_SEED"), cli_seed);
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

int simulate(const std::string& config, std::optional<std::uint64_t> seed, const std::string& output,
             const std::string& gnuplot, const std::string& summary) {
    const RunResult run = run_scenario(load_with_seed(config, seed));
    if (output.empty()) {
        write_csv(std::cout, run);
    } else {
        std::ofstream out = open_output(output);
        write_csv(out, run);
    }
    if (!gnuplot.empty()) {
        std::ofstream out = open_output(gnuplot);
        write_gnuplot_script(out, output.empty() ? "run.csv" : output);
    }
    if (!summary.empty()) {
        std::ofstream out = open_output(summary);
        out << run_summary_json(run) << '\n';
    }
    return 0;
}

int certificate(const std::string& config, bool json) {
    const ResolvedScenario res = resolve_scenario(load_scenario(config));
    std::cout << (json ? certificate_json(res.certificate) + "\n" : certificate_report(res.certificate));
    return 0;
}

int sweep_cmd(const std::string& config, std::optional<std::uint64_t> seed, const std::string& axis,
              const std::vector<double>& values, int ensemble) {
    if (values.empty()) throw ConfigError("--values needs at least one value");
    const SweepAxis a = parse_sweep_axis(axis);
    const std::vector<SweepRow> rows = sweep(load_with_seed(config, seed), a, values, SweepOptions{ensemble});
    write_sweep_table(std::cout, rows);
    return 0;
}

int verify() {
    bool ok = true;
    for (const CheckResult& c : run_invariant_suite()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gyroless angular-velocity observer harness"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::uint64_t> seed;

    auto* sim = app.add_subcommand("simulate", "Run one scenario and write the CSV time series");
    std::string output, gnuplot, summary;
    sim->add_option("config", config, "Scenario JSON file")->required();
    sim->add_option("--seed", seed, "Noise seed (overrides GYROLESS_SEED and the config)");
    sim->add_option("-o,--output", output, "CSV file (default: stdout)");
    sim->add_option("--gnuplot", gnuplot, "Also write a gnuplot script to this file");
    sim->add_option("--summary", summary, "Also write a JSON run summary to this file");

    auto* cert = app.add_subcommand("certificate", "Print the gain certificate of a scenario");
    bool json = false;
    cert->add_option("config", config, "Scenario JSON file")->required();
    cert->add_flag("--json", json, "JSON instead of key: value lines");

    auto* sw = app.add_subcommand("sweep", "Run a scenario over one parameter axis");
    std::string axis;
    std::vector<double> values;
    int ensemble = SweepOptions{}.ensemble;
    sw->add_option("config", config, "Scenario JSON file")->required();
    sw->add_option("--axis", axis, "p, omega-max or k")->required()->check(CLI::IsMember({"p", "omega-max", "k"}));
    sw->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    sw->add_option("--seed", seed, "Noise seed (overrides GYROLESS_SEED and the config)");
    sw->add_option("--ensemble", ensemble, "Runs averaged for the decay fit when noise is on")
        ->check(CLI::PositiveNumber);

    auto* ver = app.add_subcommand("verify", "Run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sim) return simulate(config, seed, output, gnuplot, summary);
        if (*cert) return certificate(config, json);
        if (*sw) return sweep_cmd(config, seed, axis, values, ensemble);
        if (*ver) return verify();
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kInvariantFailure;
    }
    return kConfigError;
}
