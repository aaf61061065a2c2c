// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "gyroless/gain_analysis.hpp"
#include "gyroless/scenario.hpp"
#include "oracles.hpp"

using namespace gyroless;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// |later| <= |earlier| allowing 5% of the larger magnitude.
bool non_increasing(double earlier, double later) {
    return std::abs(later) <= std::abs(earlier) + 0.05 * std::max(std::abs(earlier), std::abs(later));
}

bool non_decreasing(double earlier, double later) { return non_increasing(later, earlier); }

Outcome certificate_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double p = 0.95 * u(rng);
        const double alpha = 2.0 * std::sqrt(1.0 - p) * (0.02 + 0.96 * u(rng));
        const double w = std::exp(-3.0 + 6.0 * u(rng));
        const double k = compute_certificate(alpha, p, w, 1.0).k_star * std::exp(-1.5 + 5.0 * u(rng));
        const GainCertificate c = compute_certificate(alpha, p, w, k);
        const oracle::Certificate o = oracle::certificate(alpha, p, w, k);
        for (double e : {oracle::rel_err(c.K, o.K), oracle::rel_err(c.L, o.L), oracle::rel_err(c.gamma_k, o.gamma),
                         oracle::rel_err(c.k_star, o.k_star), oracle::rel_err(c.r_k, o.r),
                         oracle::rel_err(c.r_limit, o.r_limit)}) {
            worst = std::max(worst, e);
        }
    }
    return {worst <= 1e-12, fmt("max relative error %.3g over 20 tuples", worst)};
}

Outcome spectral_certificate() {
    const Matrix9 A = build_A({{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}}, 1.0);
    const double s7 = std::sqrt(7.0) / 2.0, s3 = std::sqrt(3.0) / 2.0;
    const std::vector<std::complex<double>> want{{-1, 0},      {-1, 0},      {-1, 0},      {-0.5, s7}, {-0.5, -s7},
                                                 {-0.5, s3},   {-0.5, -s3},  {-0.5, s3},   {-0.5, -s3}};
    const double eig_gap = multiset_distance(eigenvalues(A), want);
    const PtpReport r = verify_ptp_eigenvalues(1.0, 0.0);
    const double q = std::sqrt(2.0) / 4.0;
    std::vector<std::complex<double>> ptp_want;
    for (double x : {1.0, 1.0, 1.0, 1.0 + q, 1.0 - q, 1.5, 0.5, 1.5, 0.5}) ptp_want.emplace_back(x, 0.0);
    std::vector<std::complex<double>> ptp_got(r.eigenvalues.begin(), r.eigenvalues.end());
    const double ptp_gap = multiset_distance(ptp_got, ptp_want);
    const double cond_gap = std::abs(r.condition_number - compute_certificate(1.0, 0.0, 1.0, 1.0).K);
    return {eig_gap <= 1e-6 && ptp_gap <= 1e-6 && cond_gap <= 1e-8,
            fmt("eig(A) gap %.3g, eig(PtP) gap %.3g, |cond(P) - K| %.3g", eig_gap, ptp_gap, cond_gap)};
}

Outcome exp_bound_sweep() {
    std::mt19937_64 rng(3);
    const std::vector<double> s = default_s_samples();
    const double p = 0.3;
    double worst = -1e300;
    for (double alpha : {0.4, std::sqrt(1.0 - p), 1.5}) {
        const double K = overshoot_constant(alpha, p);
        for (int i = 0; i < 20; ++i) {
            const RotationMatrix R = oracle::random_rotation(rng);
            const Vector3 a = R * Vector3{{1.0, 0.0, 0.0}};
            const Vector3 b = R * Vector3{{p, std::sqrt(1.0 - p * p), 0.0}};
            worst = std::max(worst, verify_exp_bound(a, b, alpha, K, s));
        }
    }
    return {worst <= 1e-8, fmt("max of ||exp(As)|| - K exp(-alpha s/2) = %.3g", worst)};
}

Outcome disturbance_bound() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long violations = 0;
    double worst = -1e300;
    for (int i = 0; i < 100000; ++i) {
        const double j1 = 0.2 + u(rng), j2 = 0.2 + u(rng);
        const double lo = std::abs(j1 - j2), hi = j1 + j2;
        const InertiaDiag J(j1, j2, std::max(lo + u(rng) * (hi - lo), 1e-3));
        const double wmax = std::exp(-2.0 + 4.0 * u(rng));
        const Vector3 w = oracle::random_unit(rng) * (wmax * u(rng));
        const Vector3 wh = oracle::random_unit(rng) * (3.0 * wmax * u(rng));
        const double e = (w - wh).norm();
        const double margin = (euler_free(J, w) - euler_free(J, wh)).norm() - (std::sqrt(2.0) * wmax * e + e * e);
        worst = std::max(worst, margin);
        if (margin > 1e-12) ++violations;
    }
    return {violations == 0, fmt("%.0f violations in 1e5 samples, max lhs - rhs %.3g", violations, worst)};
}

Outcome conservation() {
    const InertiaDiag J = cubesat_inertia();
    TruthState s{RotationMatrix{}, default_omega0()};
    const InvariantsReport r0 = invariants_report(s, J);
    double drift = 0.0, orth = 0.0;
    for (int i = 0; i < 10000; ++i) {
        s = truth_step(s, J, TorqueProfile::zero(), i * 0.01, 0.01);
        const InvariantsReport r = invariants_report(s, J);
        drift = std::max({drift, std::abs(r.energy / r0.energy - 1.0), std::abs(r.momentum_norm / r0.momentum_norm - 1.0)});
        orth = std::max(orth, orthogonality_error(s.R.matrix()));
    }
    return {drift <= 1e-6 && orth <= 1e-8, fmt("relative drift %.3g, max ||R^T R - I|| %.3g", drift, orth)};
}

Outcome convergence() {
    ScenarioConfig cfg;
    cfg.sensor.noise_sigma = 0.0;
    // The free-rotation bound sqrt(2T/J_min) is too tight for zero initial
    // estimate to lie in the basin at 1.5 k*; a looser bound enlarges k* and r.
    cfg.omega_max = 5.0 * cfg.omega0.norm();
    const RunResult r = run_scenario(cfg);
    double late = 0.0;
    for (std::size_t i = 0; i < r.fine_t.size(); ++i)
        if (r.fine_t[i] >= 60.0) late = std::max(late, r.fine_omega_error[i]);
    const bool inside = r.inside_basin.value_or(false);
    const bool ok = inside && std::abs(r.gains.k() / r.certificate.k_star - 1.5) <= 1e-12 &&
                    r.gains.alpha() == 1.0 && late < 1e-3 && r.decay.rate < 0.0;
    return {ok, fmt("inside basin %.0f, max |omega~| for t >= 60 s %.3g rad/s, decay rate %.4g 1/s, k/k* %.3g", inside,
                    late, r.decay.rate, r.gains.k() / r.certificate.k_star)};
}

Outcome trends() {
    ScenarioConfig base;
    base.sensor.noise_sigma = 0.0;
    const double k_fixed = resolve_scenario(base).gains.k();
    base.gains.k = k_fixed;

    const std::vector<double> ps{0.0, 0.5, 0.9};
    const auto p_rows = sweep(base, SweepAxis::P, ps);
    const double w0 = resolve_scenario(base).omega_max;
    const std::vector<double> ws{w0, 2.0 * w0, 4.0 * w0};
    const auto w_rows = sweep(base, SweepAxis::OmegaMax, ws);

    ScenarioConfig noisy;
    noisy.sensor.noise_sigma = 0.01;
    const double ks = resolve_scenario(noisy).certificate.k_star;
    const std::vector<double> kv{1.2 * ks, 2.0 * ks, 4.0 * ks};
    const auto k_rows = sweep(noisy, SweepAxis::K, kv);

    bool a = true, b = true, c = true;
    for (std::size_t i = 0; i + 1 < 3; ++i) {
        a = a && non_increasing(p_rows[i].decay_rate, p_rows[i + 1].decay_rate);
        b = b && non_increasing(w_rows[i].decay_rate, w_rows[i + 1].decay_rate);
        c = c && non_decreasing(k_rows[i].decay_rate, k_rows[i + 1].decay_rate) &&
            non_decreasing(k_rows[i].steady_state_variance, k_rows[i + 1].steady_state_variance);
    }
    for (const auto* rows : {&p_rows, &w_rows, &k_rows})
        for (const SweepRow& r : *rows) {
            // A positive fitted slope is not a decay; the magnitude trend would be meaningless.
            a = a && (rows != &p_rows || r.decay_rate < 0.0);
            b = b && (rows != &w_rows || r.decay_rate < 0.0);
            c = c && (rows != &k_rows || r.decay_rate < 0.0);
        }
    std::ostringstream d;
    d << "(a) p rates";
    for (const auto& r : p_rows) d << ' ' << fmt("%.4g", r.decay_rate);
    d << (a ? " ok" : " FAIL") << "; (b) omega_max rates";
    for (const auto& r : w_rows) d << ' ' << fmt("%.4g", r.decay_rate);
    d << (b ? " ok" : " FAIL") << "; (c) k rates";
    for (const auto& r : k_rows) d << ' ' << fmt("%.4g", r.decay_rate);
    d << ", variances";
    for (const auto& r : k_rows) d << ' ' << fmt("%.4g", r.steady_state_variance);
    d << (c ? " ok" : " FAIL");
    return {a && b && c, d.str()};
}

Outcome thresholds() {
    long mismatches = 0;
    long points = 0;
    for (const auto& [alpha, p, w] : {std::tuple{1.0, 0.0, 1.0}, std::tuple{0.7, 0.5, 2.5}, std::tuple{0.3, 0.9, 0.2}}) {
        const GainCertificate c = compute_certificate(alpha, p, w, 1.0);
        const double ks = c.k_star;
        const double kt = c.gamma_threshold;
        // Grid spacing 1e-6 k* over [0.5 k*, 2 k*], offset so no node sits on a threshold.
        for (long i = 0; i <= 1500000; ++i) {
            const double k = ks * (0.5 + (static_cast<double>(i) + 0.5) * 1e-6);
            ++points;
            if ((basin_radius(c, k) > 0.0) != (k > ks)) ++mismatches;
            if ((certified_rate(c, k) > 0.0) != (k > kt)) ++mismatches;
        }
    }
    return {mismatches == 0, fmt("%.0f mismatches on %.0f grid points", mismatches, points)};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("gyroless_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path cfg = dir / "scenario.json";
    std::ofstream(cfg) << R"({"sensor": {"noise_sigma": 0.01, "seed": 9}, "t_end": 20})";
    const auto run = [&](const std::string& name) {
        const fs::path out = dir / name;
        const std::string cmd = std::string("\"") + GYROLESS_CLI_PATH + "\" simulate \"" + cfg.string() +
                                "\" --seed 1234 -o \"" + out.string() + "\"";
        const int rc = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return std::pair{rc, buf.str()};
    };
    const auto [rc1, first] = run("first.csv");
    const auto [rc2, second] = run("second.csv");
    fs::remove_all(dir);
    const bool ok = rc1 == 0 && rc2 == 0 && !first.empty() && first == second;
    return {ok, fmt("exit codes %.0f/%.0f, %.0f bytes, identical %.0f", rc1, rc2, static_cast<double>(first.size()),
                    first == second)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "certificate oracle equivalence", 1.0, certificate_oracle},
        {2, "spectral certificate", 1.0, spectral_certificate},
        {3, "exponential bound sweep", 10.0, exp_bound_sweep},
        {4, "disturbance bound", 5.0, disturbance_bound},
        {5, "conservation", 5.0, conservation},
        {6, "convergence", 10.0, convergence},
        {7, "trend reproduction", 60.0, trends},
        {8, "threshold characterizations", 1.0, thresholds},
        {9, "determinism", 0.0, determinism},
    };
    bool all = true;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_s <= 0.0 || secs < c.limit_s;
        const bool pass = o.passed && in_time;
        all = all && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -- " << o.detail
                  << fmt(" [%.2f s", secs) << (c.limit_s > 0.0 ? fmt(", limit %.0f s]", c.limit_s) : std::string("]"))
                  << (in_time ? "" : " TIME LIMIT EXCEEDED") << std::endl;
    }
    return all ? 0 : 1;
}
