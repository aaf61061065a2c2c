#pragma once

// Nonlinear angular-velocity observer driven by two body-frame vector
// measurements. The extended state is (a, b, omega); the estimate follows
//
//   a_hat'     = a x omega_hat - alpha k (a_hat - a)
//   b_hat'     = b x omega_hat - alpha k (b_hat - b)
//   omega_hat' = E(omega_hat) + J^{-1} tau + k^2 a x (a_hat - a) + k^2 b x (b_hat - b)
//
// with the measured a, b (never the estimates) inside every cross product.

#include <functional>
#include <span>
#include <vector>

#include "gyroless/rigid_body.hpp"
#include "gyroless/sensors.hpp"

namespace gyroless {

/// Tuning (alpha, k) with 0 < alpha < 2 sqrt(1 - p) and k > 0.
class ObserverGains {
public:
    /// Throws ConfigError when alpha is outside (0, 2 sqrt(1 - p)) or k <= 0.
    ObserverGains(double alpha, double k, double p);

    /// alpha = sqrt(1 - p).
    [[nodiscard]] static ObserverGains with_default_alpha(double k, double p);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double k() const { return k_; }

private:
    double alpha_;
    double k_;
};

/// Estimate (a_hat, b_hat, omega_hat). a_hat and b_hat are not kept unit norm.
struct ObserverState {
    Vector3 a_hat;
    Vector3 b_hat;
    Vector3 omega_hat;

    friend ObserverState operator+(const ObserverState& x, const ObserverState& y) {
        return {x.a_hat + y.a_hat, x.b_hat + y.b_hat, x.omega_hat + y.omega_hat};
    }
    friend ObserverState operator*(double s, const ObserverState& x) {
        return {s * x.a_hat, s * x.b_hat, s * x.omega_hat};
    }
};

/// True extended state X = (a, b, omega).
struct ExtendedState {
    Vector3 a;
    Vector3 b;
    Vector3 omega;
};

/// X - X_hat, and |Z| = sqrt(|a~|^2 + |b~|^2 + |omega~|^2 / k^2).
struct ErrorState {
    Vector3 a_tilde;
    Vector3 b_tilde;
    Vector3 omega_tilde;
    double z_norm = 0.0;
};

[[nodiscard]] ObserverState observer_rhs(const ObserverState& xhat, const Vector3& a, const Vector3& b,
                                         const Vector3& tau, const InertiaDiag& J, const ObserverGains& gains);

[[nodiscard]] inline ObserverState observer_rhs(const ObserverState& xhat, const MeasurementPair& meas,
                                                const Vector3& tau, const InertiaDiag& J,
                                                const ObserverGains& gains) {
    return observer_rhs(xhat, meas.a.vec(), meas.b.vec(), tau, J, gains);
}

/// One RK4 step with the measurement and torque held at their sample values
/// across all four stages.
[[nodiscard]] ObserverState observer_step(const ObserverState& xhat, const MeasurementPair& meas,
                                          const Vector3& tau, const InertiaDiag& J, const ObserverGains& gains,
                                          double dt);

/// Measurement available at any time, e.g. from a finer truth trajectory.
using MeasurementSource = std::function<MeasurementPair(double)>;

/// One RK4 step from t with the measurement and torque evaluated at the stage
/// times t, t + dt/2 and t + dt.
[[nodiscard]] ObserverState observer_step(const ObserverState& xhat, const MeasurementSource& meas,
                                          const TorqueProfile& tau, const InertiaDiag& J,
                                          const ObserverGains& gains, double t, double dt);

/// a_hat = a(0), b_hat = b(0), omega_hat = 0.
[[nodiscard]] ObserverState init_observer(const MeasurementPair& meas0);

[[nodiscard]] ErrorState error_state(const ExtendedState& truth, const ObserverState& estimate, double k);

/// Per-sample errors. Throws ConfigError when the sequences differ in length.
[[nodiscard]] std::vector<ErrorState> error_trace(std::span<const ExtendedState> truth,
                                                  std::span<const ObserverState> estimate, double k);

}  // namespace gyroless
