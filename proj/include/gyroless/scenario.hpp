#pragma once

// Scenario configuration, orchestration of a truth + observer run, decay-rate
// fits and parameter sweeps.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gyroless/gain_analysis.hpp"
#include "gyroless/observer.hpp"
#include "gyroless/rigid_body.hpp"
#include "gyroless/sensors.hpp"

namespace gyroless {

/// Homogeneous 0.2 m x 0.1 m x 0.1 m box of 2 kg: diag(1/300, 1/120, 1/120) kg m^2.
[[nodiscard]] InertiaDiag cubesat_inertia();

/// (30, 10, 50) deg/s in rad/s; not aligned with a principal axis.
[[nodiscard]] Vector3 default_omega0();

struct GainSpec {
    std::optional<double> alpha;  // unset: sqrt(1 - p)
    std::optional<double> k;      // unset: k_factor * k*
    double k_factor = 1.5;
};

struct ScenarioConfig {
    InertiaDiag inertia = cubesat_inertia();
    Vector3 omega0 = default_omega0();
    RotationMatrix attitude0;
    ReferencePair refs = canonicalize(UnitVector3::from_unit({{1.0, 0.0, 0.0}}),
                                      UnitVector3::from_unit({{0.0, 1.0, 0.0}}));
    SensorConfig sensor{RotationMatrix{}, RotationMatrix{}, 0.01, 1};
    GainSpec gains;
    double dt_sensor = 0.1;
    double t_end = 100.0;
    TorqueProfile torque = TorqueProfile::zero();
    std::optional<double> omega_max;      // unset: a priori free-rotation bound
    std::optional<int> truth_substeps;    // unset: max(10, ceil(k A_m dt_sensor))
    std::optional<Vector3> omega_hat0;    // unset: zero
    std::optional<std::pair<double, double>> fit_window;  // unset: automatic
};

/// Parses a JSON scenario document. Every key is optional; unknown keys,
/// wrong types and invalid values throw ConfigError.
[[nodiscard]] ScenarioConfig parse_scenario(const std::string& json_text);
[[nodiscard]] ScenarioConfig load_scenario(const std::string& path);

/// Seed precedence: command-line flag, then GYROLESS_SEED, then the config.
/// Throws ConfigError for a malformed environment value.
[[nodiscard]] std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value,
                                         std::optional<std::uint64_t> cli_value);

/// Gains, omega_max and integration sub-steps after resolving every "auto".
struct ResolvedScenario {
    ObserverGains gains;
    double omega_max;
    int substeps;
    GainCertificate certificate;
};

/// Throws ConfigError before any simulation when the configuration is invalid.
[[nodiscard]] ResolvedScenario resolve_scenario(const ScenarioConfig& cfg);

struct DecayWindow {
    double t_begin = 0.0;
    double t_end = 0.0;
};

struct DecayFit {
    double rate = 0.0;  // least-squares slope of log|omega~|, 1/s
    DecayWindow window; // window actually used
    std::size_t points = 0;
    bool floor_limited = false;  // window shortened at the error floor
};

/// Least-squares slope of log(err) over samples with t in `window`. The window
/// is cut before the first sample with err <= floor (flagging floor_limited);
/// a series already at the floor yields rate 0 with the flag set. Throws
/// NumericalError when the window itself holds fewer than two samples.
[[nodiscard]] DecayFit decay_rate(std::span<const double> t, std::span<const double> err, DecayWindow window,
                                  double floor = 0.0);

struct RunResult {
    // Sensor-rate samples, aligned.
    std::vector<double> t;
    std::vector<TruthState> truth;
    std::vector<MeasurementPair> measurements;
    std::vector<ObserverState> estimates;
    std::vector<ErrorState> errors;
    // omega~ at every integration sub-step, used for the decay fit.
    std::vector<double> fine_t;
    std::vector<Vector3> fine_omega_tilde;
    std::vector<double> fine_omega_error;

    GainCertificate certificate;
    ObserverGains gains{1.0, 1.0, 0.0};
    int substeps = 0;
    DecayFit decay;
    double terminal_error = 0.0;         // |omega~(t_end)|
    double steady_state_variance = 0.0;  // trace of the omega~ covariance over [t_end/2, t_end], all sub-steps
    std::optional<bool> inside_basin;    // unset when k <= k*
};

/// Simulates truth and observer together with RK4 at dt_sensor / substeps;
/// measurements at every stage come from the truth stage, with sensor noise
/// drawn once per sensor sample and held over the sample period. The decay fit
/// uses fit_window if set, else [0, first time |omega~| <= 3 x tail RMS].
[[nodiscard]] RunResult run_scenario(const ScenarioConfig& cfg);

enum class SweepAxis { P, OmegaMax, K };

/// "p", "omega-max" or "k"; throws ConfigError otherwise.
[[nodiscard]] SweepAxis parse_sweep_axis(const std::string& name);
[[nodiscard]] std::string to_string(SweepAxis axis);

/// Configuration with one axis set to `value`:
///   p         reference inner product; b_ref rotated in the (a_ref, b_ref) plane
///   omega-max target omega_max in rad/s; omega0 scaled by value / omega_max(base)
///   k         observer gain
[[nodiscard]] ScenarioConfig derive_config(const ScenarioConfig& base, SweepAxis axis, double value);

struct SweepRow {
    double value = 0.0;
    double k = 0.0;
    double k_star = 0.0;
    double decay_rate = 0.0;
    double terminal_error = 0.0;
    double steady_state_variance = 0.0;
    int ensemble = 1;  // runs averaged for decay_rate
};

struct SweepOptions {
    // With noise, decay_rate is fitted to |mean omega~| over this many runs
    // with consecutive seeds; a single noisy run rarely clears its own floor.
    int ensemble = 64;
};

/// One row per value, in the given order. Terminal error and variance come from
/// the configured seed. Values run concurrently. Any invalid derived
/// configuration throws ConfigError naming the value.
[[nodiscard]] std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepAxis axis, std::span<const double> values,
                                          const SweepOptions& options = {});

}  // namespace gyroless
