#include "gyroless/observer.hpp"

#include <string>

#include "gyroless/errors.hpp"

namespace gyroless {

ObserverGains::ObserverGains(double alpha, double k, double p) : alpha_(alpha), k_(k) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("observer gains: p must lie in [0, 1)");
    const double upper = 2.0 * std::sqrt(1.0 - p);
    if (!(alpha > 0.0 && alpha < upper)) {
        throw ConfigError("observer gains: alpha=" + std::to_string(alpha) + " outside (0, 2 sqrt(1-p)) = (0, " +
                          std::to_string(upper) + ")");
    }
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("observer gains: k must be positive");
}

ObserverGains ObserverGains::with_default_alpha(double k, double p) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("observer gains: p must lie in [0, 1)");
    return {std::sqrt(1.0 - p), k, p};
}

ObserverState observer_rhs(const ObserverState& xhat, const Vector3& a, const Vector3& b, const Vector3& tau,
                           const InertiaDiag& J, const ObserverGains& gains) {
    const double ak = gains.alpha() * gains.k();
    const double k2 = gains.k() * gains.k();
    const Vector3 ea = xhat.a_hat - a;
    const Vector3 eb = xhat.b_hat - b;
    return {cross(a, xhat.omega_hat) - ak * ea, cross(b, xhat.omega_hat) - ak * eb,
            euler_rhs(J, xhat.omega_hat, tau) + k2 * cross(a, ea) + k2 * cross(b, eb)};
}

ObserverState observer_step(const ObserverState& xhat, const MeasurementPair& meas, const Vector3& tau,
                            const InertiaDiag& J, const ObserverGains& gains, double dt) {
    if (!(dt > 0.0)) throw ConfigError("observer_step: dt must be positive");
    const Vector3& a = meas.a.vec();
    const Vector3& b = meas.b.vec();
    const ObserverState k1 = observer_rhs(xhat, a, b, tau, J, gains);
    const ObserverState k2 = observer_rhs(xhat + (0.5 * dt) * k1, a, b, tau, J, gains);
    const ObserverState k3 = observer_rhs(xhat + (0.5 * dt) * k2, a, b, tau, J, gains);
    const ObserverState k4 = observer_rhs(xhat + dt * k3, a, b, tau, J, gains);
    return xhat + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ObserverState observer_step(const ObserverState& xhat, const MeasurementSource& meas, const TorqueProfile& tau,
                            const InertiaDiag& J, const ObserverGains& gains, double t, double dt) {
    if (!(dt > 0.0)) throw ConfigError("observer_step: dt must be positive");
    const MeasurementPair m0 = meas(t);
    const MeasurementPair mh = meas(t + 0.5 * dt);
    const MeasurementPair m1 = meas(t + dt);
    const Vector3 tau0 = tau(t);
    const Vector3 tauh = tau(t + 0.5 * dt);
    const Vector3 tau1 = tau(t + dt);
    const ObserverState k1 = observer_rhs(xhat, m0, tau0, J, gains);
    const ObserverState k2 = observer_rhs(xhat + (0.5 * dt) * k1, mh, tauh, J, gains);
    const ObserverState k3 = observer_rhs(xhat + (0.5 * dt) * k2, mh, tauh, J, gains);
    const ObserverState k4 = observer_rhs(xhat + dt * k3, m1, tau1, J, gains);
    return xhat + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ObserverState init_observer(const MeasurementPair& meas0) { return {meas0.a.vec(), meas0.b.vec(), Vector3{}}; }

ErrorState error_state(const ExtendedState& truth, const ObserverState& estimate, double k) {
    ErrorState e;
    e.a_tilde = truth.a - estimate.a_hat;
    e.b_tilde = truth.b - estimate.b_hat;
    e.omega_tilde = truth.omega - estimate.omega_hat;
    e.z_norm = std::sqrt(e.a_tilde.squared_norm() + e.b_tilde.squared_norm() + e.omega_tilde.squared_norm() / (k * k));
    return e;
}

std::vector<ErrorState> error_trace(std::span<const ExtendedState> truth, std::span<const ObserverState> estimate,
                                    double k) {
    if (truth.size() != estimate.size()) {
        throw ConfigError("error_trace: truth has " + std::to_string(truth.size()) + " samples, estimate has " +
                          std::to_string(estimate.size()));
    }
    std::vector<ErrorState> out;
    out.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) out.push_back(error_state(truth[i], estimate[i], k));
    return out;
}

}  // namespace gyroless
