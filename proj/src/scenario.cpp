#include "gyroless/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "gyroless/errors.hpp"

namespace gyroless {

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.dt_sensor > 0.0)) throw ConfigError("dt_sensor must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
    const double p = cfg.refs.p;
    const double alpha = cfg.gains.alpha.value_or(std::sqrt(1.0 - p));

    double omega_max = 0.0;
    if (cfg.omega_max) {
        omega_max = *cfg.omega_max;
    } else {
        try {
            omega_max = omega_max_bound(cfg.inertia, TruthState{cfg.attitude0, cfg.omega0}, cfg.torque);
        } catch (const UnsupportedError&) {
            throw ConfigError("omega_max must be configured explicitly when a torque is applied");
        }
    }
    if (!(omega_max > 0.0)) throw ConfigError("omega_max must be positive (configure it when omega0 = 0)");

    // Validates alpha against p before k* is needed.
    (void)ObserverGains(alpha, 1.0, p);
    const double k_star = compute_certificate(alpha, p, omega_max, 1.0).k_star;
    const double k = cfg.gains.k.value_or(cfg.gains.k_factor * k_star);
    const ObserverGains gains(alpha, k, p);
    const GainCertificate cert = compute_certificate(alpha, p, omega_max, k);

    int substeps = 0;
    if (cfg.truth_substeps) {
        substeps = *cfg.truth_substeps;
        if (substeps < 1) throw ConfigError("truth_substeps must be positive");
    } else {
        // Keeps |lambda h| <= 1 for every eigenvalue of k A(t), since ||k A|| <= k A_m.
        substeps = std::max(10, static_cast<int>(std::ceil(k * cert.A_m * cfg.dt_sensor)));
    }
    return {gains, omega_max, substeps, cert};
}

DecayFit decay_rate(std::span<const double> t, std::span<const double> err, DecayWindow window, double floor) {
    if (t.size() != err.size()) throw ConfigError("decay_rate: time and error series differ in length");
    DecayFit fit;
    fit.window = window;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    double last_t = window.t_begin;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window.t_begin) continue;
        if (t[i] > window.t_end) break;
        if (!(err[i] > floor)) {
            fit.floor_limited = true;
            break;
        }
        const double y = std::log(err[i]);
        sx += t[i];
        sy += y;
        sxx += t[i] * t[i];
        sxy += t[i] * y;
        ++fit.points;
        last_t = t[i];
    }
    if (fit.points < 2) {
        // Already at the floor: nothing left to fit.
        if (fit.floor_limited) {
            fit.window.t_end = last_t;
            fit.rate = 0.0;
            return fit;
        }
        throw NumericalError("decay_rate: fewer than two samples in the fit window");
    }
    if (fit.floor_limited) fit.window.t_end = last_t;
    const double n = static_cast<double>(fit.points);
    const double denom = n * sxx - sx * sx;
    if (!(denom > 0.0)) throw NumericalError("decay_rate: degenerate time samples");
    fit.rate = (n * sxy - sx * sy) / denom;
    return fit;
}

namespace {

struct CoupledState {
    Matrix3 R;
    Vector3 omega;
    ObserverState est;
};

struct CoupledDerivative {
    Matrix3 dR;
    Vector3 domega;
    ObserverState dest;
};

CoupledState advance(const CoupledState& s, const CoupledDerivative& d, double h) {
    return {s.R + h * d.dR, s.omega + h * d.domega, s.est + h * d.dest};
}

class CoupledSystem {
public:
    CoupledSystem(const ScenarioConfig& cfg, const ObserverGains& gains) : cfg_(cfg), gains_(gains) {}

    [[nodiscard]] CoupledDerivative rhs(double t, const CoupledState& s, const SensorNoise& noise) const {
        const Vector3 tau = cfg_.torque(t);
        const MeasurementPair m = ingest(sense(s.R, cfg_.refs, cfg_.sensor, t, noise), cfg_.sensor);
        return {s.R * cross_matrix(s.omega), euler_rhs(cfg_.inertia, s.omega, tau),
                observer_rhs(s.est, m.a.vec(), m.b.vec(), tau, cfg_.inertia, gains_)};
    }

    [[nodiscard]] CoupledState step(double t, const CoupledState& s, double h, const SensorNoise& noise) const {
        const CoupledDerivative k1 = rhs(t, s, noise);
        const CoupledDerivative k2 = rhs(t + 0.5 * h, advance(s, k1, 0.5 * h), noise);
        const CoupledDerivative k3 = rhs(t + 0.5 * h, advance(s, k2, 0.5 * h), noise);
        const CoupledDerivative k4 = rhs(t + h, advance(s, k3, h), noise);
        CoupledState out{s.R + (h / 6.0) * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR),
                         s.omega + (h / 6.0) * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega),
                         s.est + (h / 6.0) * (k1.dest + 2.0 * k2.dest + 2.0 * k3.dest + k4.dest)};
        out.R = reorthonormalize(out.R).matrix();
        return out;
    }

private:
    const ScenarioConfig& cfg_;
    ObserverGains gains_;
};

ExtendedState truth_extended(const TruthState& s, const ReferencePair& refs) {
    return {body_direction(s.R, refs.a_ref), body_direction(s.R, refs.b_ref), s.omega};
}

}  // namespace

namespace {

// Trace of the sample covariance of v over t >= t_begin.
double tail_variance(std::span<const double> t, std::span<const Vector3> v, double t_begin) {
    Vector3 mean{};
    std::size_t count = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_begin) continue;
        mean += v[i];
        ++count;
    }
    if (count == 0) return 0.0;
    mean = mean / static_cast<double>(count);
    double var = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_begin) var += (v[i] - mean).squared_norm();
    }
    return var / static_cast<double>(count);
}

// Explicit window if configured; otherwise from t = 0 until the error first
// reaches its floor: three times the RMS over the last quarter of the run,
// and never below 1e-9 rad/s.
DecayFit fit_decay(const ScenarioConfig& cfg, std::span<const double> t, std::span<const double> err) {
    if (cfg.fit_window) return decay_rate(t, err, {cfg.fit_window->first, cfg.fit_window->second});
    double tail = 0.0;
    std::size_t tail_n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.75 * cfg.t_end) continue;
        tail += err[i] * err[i];
        ++tail_n;
    }
    const double floor = std::max(1e-9, 3.0 * std::sqrt(tail / static_cast<double>(std::max<std::size_t>(tail_n, 1))));
    return decay_rate(t, err, {0.0, cfg.t_end}, floor);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    const ResolvedScenario res = resolve_scenario(cfg);
    const long long samples = std::llround(cfg.t_end / cfg.dt_sensor);
    if (samples < 1) throw ConfigError("t_end must cover at least one sensor period");
    const double h = cfg.dt_sensor / res.substeps;
    const double k = res.gains.k();

    RunResult out;
    out.certificate = res.certificate;
    out.gains = res.gains;
    out.substeps = res.substeps;
    const auto n_samples = static_cast<std::size_t>(samples) + 1;
    out.t.reserve(n_samples);
    out.truth.reserve(n_samples);
    out.measurements.reserve(n_samples);
    out.estimates.reserve(n_samples);
    out.errors.reserve(n_samples);

    const CoupledSystem system(cfg, res.gains);
    TruthState truth{cfg.attitude0, cfg.omega0};
    SensorNoise noise = draw_noise(cfg.sensor, 0);
    MeasurementPair meas = ingest(sense(truth.R.matrix(), cfg.refs, cfg.sensor, 0.0, noise), cfg.sensor);
    ObserverState est = init_observer(meas);
    if (cfg.omega_hat0) est.omega_hat = *cfg.omega_hat0;

    const auto record = [&](double t) {
        out.t.push_back(t);
        out.truth.push_back(truth);
        out.measurements.push_back(meas);
        out.estimates.push_back(est);
        out.errors.push_back(error_state(truth_extended(truth, cfg.refs), est, k));
    };
    record(0.0);
    out.fine_t.push_back(0.0);
    out.fine_omega_tilde.push_back(out.errors.back().omega_tilde);
    out.fine_omega_error.push_back(out.errors.back().omega_tilde.norm());

    CoupledState state{truth.R.matrix(), truth.omega, est};
    for (long long n = 0; n < samples; ++n) {
        const double t_n = static_cast<double>(n) * cfg.dt_sensor;
        for (int j = 0; j < res.substeps; ++j) {
            const double t = t_n + j * h;
            state = system.step(t, state, h, noise);
            out.fine_t.push_back(t + h);
            out.fine_omega_tilde.push_back(state.omega - state.est.omega_hat);
            out.fine_omega_error.push_back(out.fine_omega_tilde.back().norm());
        }
        const double t_next = static_cast<double>(n + 1) * cfg.dt_sensor;
        truth = TruthState{reorthonormalize(state.R), state.omega};
        est = state.est;
        noise = draw_noise(cfg.sensor, static_cast<std::uint64_t>(n + 1));
        meas = ingest(sense(state.R, cfg.refs, cfg.sensor, t_next, noise), cfg.sensor);
        record(t_next);
    }

    out.terminal_error = out.errors.back().omega_tilde.norm();
    out.steady_state_variance = tail_variance(out.fine_t, out.fine_omega_tilde, 0.5 * cfg.t_end);
    out.decay = fit_decay(cfg, out.fine_t, out.fine_omega_error);

    if (out.certificate.has_basin()) out.inside_basin = basin_test(out.errors.front(), out.certificate);
    return out;
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "p") return SweepAxis::P;
    if (name == "omega-max") return SweepAxis::OmegaMax;
    if (name == "k") return SweepAxis::K;
    throw ConfigError("unknown sweep axis '" + name + "' (expected p, omega-max or k)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::P:
            return "p";
        case SweepAxis::OmegaMax:
            return "omega-max";
        case SweepAxis::K:
            return "k";
    }
    return "?";
}

ScenarioConfig derive_config(const ScenarioConfig& base, SweepAxis axis, double value) {
    ScenarioConfig cfg = base;
    switch (axis) {
        case SweepAxis::P:
            cfg.refs = with_inner_product(base.refs, value);
            break;
        case SweepAxis::OmegaMax: {
            if (!(value > 0.0)) throw ConfigError("omega_max must be positive");
            const double base_max = resolve_scenario(base).omega_max;
            cfg.omega0 = base.omega0 * (value / base_max);
            if (base.omega_max) cfg.omega_max = value;
            break;
        }
        case SweepAxis::K:
            if (!(value > 0.0)) throw ConfigError("k must be positive");
            cfg.gains.k = value;
            break;
    }
    return cfg;
}

namespace {

SweepRow sweep_row(const ScenarioConfig& cfg, double value, int ensemble) {
    const RunResult first = run_scenario(cfg);
    SweepRow row{value, first.gains.k(), first.certificate.k_star, first.decay.rate, first.terminal_error,
                 first.steady_state_variance, 1};
    if (cfg.sensor.noise_sigma == 0.0 || ensemble <= 1) return row;

    std::vector<Vector3> mean = first.fine_omega_tilde;
    ScenarioConfig member = cfg;
    for (int i = 1; i < ensemble; ++i) {
        member.sensor.seed = cfg.sensor.seed + static_cast<std::uint64_t>(i);
        const RunResult r = run_scenario(member);
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += r.fine_omega_tilde[j];
    }
    std::vector<double> err(mean.size());
    for (std::size_t j = 0; j < mean.size(); ++j) err[j] = (mean[j] / static_cast<double>(ensemble)).norm();
    row.decay_rate = fit_decay(cfg, first.fine_t, err).rate;
    row.ensemble = ensemble;
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis, std::span<const double> values,
                            const SweepOptions& options) {
    if (options.ensemble < 1) throw ConfigError("sweep ensemble size must be at least 1");
    std::vector<ScenarioConfig> configs;
    configs.reserve(values.size());
    for (double v : values) {
        try {
            configs.push_back(derive_config(base, axis, v));
            (void)resolve_scenario(configs.back());
        } catch (const ConfigError& e) {
            std::ostringstream msg;
            msg << "sweep " << to_string(axis) << "=" << v << ": " << e.what();
            throw ConfigError(msg.str());
        }
    }

    std::vector<std::future<SweepRow>> runs;
    runs.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        runs.push_back(std::async(std::launch::async,
                                  [&, i] { return sweep_row(configs[i], values[i], options.ensemble); }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (auto& r : runs) rows.push_back(r.get());
    return rows;
}

}  // namespace gyroless
