#include "gyroless/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace gyroless {

namespace {

void put(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

void put3(std::ostream& os, const Vector3& v) {
    for (std::size_t i = 0; i < 3; ++i) {
        os << ',';
        put(os, v[i]);
    }
}

nlohmann::ordered_json certificate_object(const GainCertificate& c) {
    return {{"alpha", c.alpha},
            {"p", c.p},
            {"omega_max", c.omega_max},
            {"k", c.k},
            {"A_m", c.A_m},
            {"L", c.L},
            {"K", c.K},
            {"gamma_k", c.gamma_k},
            {"gamma_threshold", c.gamma_threshold},
            {"k_star", c.k_star},
            {"r_k", c.r_k},
            {"r_limit", c.r_limit},
            {"certified_basin", c.has_basin()}};
}

}  // namespace

void write_csv(std::ostream& os, const RunResult& run) {
    os << kCsvHeader << '\n';
    for (std::size_t i = 0; i < run.t.size(); ++i) {
        put(os, run.t[i]);
        put3(os, run.truth[i].omega);
        put3(os, run.estimates[i].omega_hat);
        os << ',';
        put(os, run.errors[i].omega_tilde.norm());
        put3(os, run.measurements[i].a.vec());
        put3(os, run.measurements[i].b.vec());
        put3(os, run.estimates[i].a_hat);
        put3(os, run.estimates[i].b_hat);
        os << '\n';
    }
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_path) {
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set multiplot layout 2,1\n"
       << "set xlabel 't [s]'\n"
       << "set ylabel 'omega [rad/s]'\n"
       << "plot '" << csv_path << "' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines, \\\n"
       << "     '' using 1:5 with lines dt 2, '' using 1:6 with lines dt 2, '' using 1:7 with lines dt 2\n"
       << "set logscale y\n"
       << "set ylabel '|omega error| [rad/s]'\n"
       << "plot '" << csv_path << "' using 1:8 with lines\n"
       << "unset multiplot\n";
}

std::string certificate_json(const GainCertificate& cert) { return certificate_object(cert).dump(2); }

std::string run_summary_json(const RunResult& run) {
    nlohmann::ordered_json j;
    j["certificate"] = certificate_object(run.certificate);
    j["alpha"] = run.gains.alpha();
    j["k"] = run.gains.k();
    j["substeps"] = run.substeps;
    j["samples"] = run.t.size();
    j["decay_rate"] = run.decay.rate;
    j["fit_window"] = {run.decay.window.t_begin, run.decay.window.t_end};
    j["fit_points"] = run.decay.points;
    j["floor_limited"] = run.decay.floor_limited;
    j["terminal_error"] = run.terminal_error;
    j["steady_state_variance"] = run.steady_state_variance;
    if (run.inside_basin) {
        j["inside_basin"] = *run.inside_basin;
    } else {
        j["inside_basin"] = nullptr;
    }
    return j.dump(2);
}

void write_sweep_table(std::ostream& os, std::span<const SweepRow> rows) {
    os << "value,k,k_star,decay_rate,terminal_error,steady_state_variance,ensemble\n";
    for (const SweepRow& r : rows) {
        put(os, r.value);
        for (double v : {r.k, r.k_star, r.decay_rate, r.terminal_error, r.steady_state_variance}) {
            os << ',';
            put(os, v);
        }
        os << ',' << r.ensemble << '\n';
    }
}

}  // namespace gyroless
