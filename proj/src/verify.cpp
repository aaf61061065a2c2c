#include "gyroless/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "gyroless/gain_analysis.hpp"
#include "gyroless/scenario.hpp"

namespace gyroless {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

RotationMatrix random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 3.14159265358979323846);
    const Vector3 axis{{n(rng), n(rng), n(rng)}};
    return RotationMatrix::about_axis(axis, u(rng));
}

CheckResult conservation() {
    const InertiaDiag J = cubesat_inertia();
    TruthState s{RotationMatrix{}, default_omega0()};
    const InvariantsReport inv0 = invariants_report(s, J);
    double drift = 0.0;
    double orth = 0.0;
    for (int i = 0; i < 10000; ++i) {
        s = truth_step(s, J, TorqueProfile::zero(), i * 0.01, 0.01);
        const InvariantsReport inv = invariants_report(s, J);
        drift = std::max({drift, std::abs(inv.energy / inv0.energy - 1.0),
                          std::abs(inv.momentum_norm / inv0.momentum_norm - 1.0)});
        orth = std::max(orth, orthogonality_error(s.R.matrix()));
    }
    return {"free rotation conserves energy and |J omega|, R stays orthogonal", drift <= 1e-6 && orth <= 1e-8,
            fmt("relative drift %.3g, orthogonality error %.3g", drift, orth)};
}

CheckResult certificate_consistency() {
    double worst = 0.0;
    bool ok = true;
    for (double p : {0.0, 0.3, 0.7}) {
        const double alpha = std::sqrt(1.0 - p);
        const GainCertificate ref = compute_certificate(alpha, p, 1.0, 1.0);
        const double ks = ref.k_star;
        ok = ok && ref.K > 1.0 && ks > ref.gamma_threshold;
        ok = ok && basin_radius(ref, ks * (1.0 - 1e-6)) <= 0.0 && basin_radius(ref, ks * (1.0 + 1e-6)) > 0.0;
        ok = ok && certified_rate(ref, ref.gamma_threshold * (1.0 - 1e-6)) <= 0.0 &&
             certified_rate(ref, ref.gamma_threshold * (1.0 + 1e-6)) > 0.0;
        const double r_big = basin_radius(ref, 1e12 * ks);
        worst = std::max(worst, std::abs(r_big / ref.r_limit - 1.0));
        ok = ok && r_big <= ref.r_limit;
        // k* scales linearly with omega_max.
        const double ks3 = compute_certificate(alpha, p, 3.0, 1.0).k_star;
        worst = std::max(worst, std::abs(ks3 / (3.0 * ks) - 1.0));
    }
    return {"certificate thresholds, basin limit and omega_max scaling", ok && worst <= 1e-5,
            fmt("worst relative deviation %.3g", worst)};
}

CheckResult spectrum() {
    const FrozenSpectrum fs = frozen_spectrum(1.0, 0.0);
    const Matrix9 A = build_A({{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}}, 1.0);
    const double d = multiset_distance(eigenvalues(A), fs.eigenvalues);
    const PtpReport ptp = verify_ptp_eigenvalues(1.0, 0.0);
    const bool ok = d <= 1e-6 && ptp.max_eigenvalue_error <= 1e-6 && std::abs(ptp.condition_number - ptp.K) <= 1e-8 &&
                    ptp.off_block_residual <= 1e-9;
    return {"frozen spectrum and block diagonalization", ok,
            fmt("eigenvalue distance %.3g, cond(P) - K = %.3g", d, ptp.condition_number - ptp.K)};
}

CheckResult exp_bound() {
    std::mt19937_64 rng(7);
    const std::vector<double> s = default_s_samples();
    double worst = -1e300;
    for (double alpha : {0.5, 1.0, 1.5}) {
        const double K = overshoot_constant(alpha, 0.0);
        for (int i = 0; i < 5; ++i) {
            const RotationMatrix R = random_rotation(rng);
            const Vector3 a = R.transpose().matrix() * Vector3{{1.0, 0.0, 0.0}};
            const Vector3 b = R.transpose().matrix() * Vector3{{0.0, 1.0, 0.0}};
            worst = std::max(worst, verify_exp_bound(a, b, alpha, K, s));
        }
    }
    return {"exponential bound on the frozen error matrix", worst <= 1e-8, fmt("max violation %.3g", worst)};
}

CheckResult sensor_conventions() {
    std::mt19937_64 rng(11);
    SensorConfig cfg{random_rotation(rng), random_rotation(rng), 0.0, 1};
    const ReferencePair refs = with_inner_product(
        canonicalize(UnitVector3::from_unit({{1.0, 0.0, 0.0}}), UnitVector3::from_unit({{0.0, 1.0, 0.0}})), 0.4);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const MeasurementPair m = measure(random_rotation(rng), refs, cfg, 0.0, 0);
        worst = std::max({worst, std::abs(m.a.vec().norm() - 1.0), std::abs(m.a.vec().dot(m.b.vec()) - refs.p)});
    }
    return {"noiseless measurements are unit and keep the reference inner product", worst <= 1e-9,
            fmt("worst deviation %.3g", worst)};
}

CheckResult exact_init() {
    ScenarioConfig cfg;
    cfg.sensor.noise_sigma = 0.0;
    cfg.omega_hat0 = cfg.omega0;
    const RunResult r = run_scenario(cfg);
    double worst = 0.0;
    for (double e : r.fine_omega_error) worst = std::max(worst, e);
    return {"exact initial estimate stays exact without noise", worst <= 1e-6, fmt("max |omega error| %.3g", worst)};
}

CheckResult convergence() {
    ScenarioConfig cfg;
    cfg.sensor.noise_sigma = 0.0;
    cfg.omega_max = 5.0 * cfg.omega0.norm();
    const RunResult r = run_scenario(cfg);
    double late = 0.0;
    for (std::size_t i = 0; i < r.fine_t.size(); ++i) {
        if (r.fine_t[i] >= 60.0) late = std::max(late, r.fine_omega_error[i]);
    }
    const bool ok = r.inside_basin.value_or(false) && late < 1e-3 && r.decay.rate < 0.0;
    return {"observer converges from inside the certified basin", ok,
            fmt("max |omega error| after 60 s %.3g, decay rate %.4g", late, r.decay.rate)};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    std::vector<CheckResult> out;
    for (auto check : {conservation, certificate_consistency, spectrum, exp_bound, sensor_conventions, exact_init,
                       convergence}) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({"check raised an exception", false, e.what()});
        }
    }
    return out;
}

}  // namespace gyroless
