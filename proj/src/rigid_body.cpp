#include "gyroless/rigid_body.hpp"

#include <algorithm>

#include "gyroless/errors.hpp"

namespace gyroless {

InertiaDiag::InertiaDiag(double j1, double j2, double j3) : j_{{j1, j2, j3}} {
    for (double j : j_.v) {
        if (!(j > 0.0) || !std::isfinite(j)) throw ConfigError("inertia moments must be positive and finite");
    }
    // Small relative slack so that exactly degenerate bodies (thin plates) pass.
    const double slack = 1e-12 * (j1 + j2 + j3);
    if (j1 > j2 + j3 + slack || j2 > j1 + j3 + slack || j3 > j1 + j2 + slack) {
        throw ConfigError("inertia moments violate the triangle inequality J_i <= J_j + J_k");
    }
}

double InertiaDiag::min_moment() const { return std::min({j_[0], j_[1], j_[2]}); }

TorqueProfile TorqueProfile::sinusoidal(const Vector3& amplitude, double angular_frequency, double phase,
                                        const Vector3& offset) {
    return TorqueProfile(Kind::Sinusoidal, amplitude, offset, angular_frequency, phase);
}

Vector3 TorqueProfile::operator()(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return {};
        case Kind::Constant:
            return a_;
        case Kind::Sinusoidal:
            return b_ + a_ * std::sin(w_ * t + phase_);
    }
    return {};
}

bool TorqueProfile::is_zero() const {
    switch (kind_) {
        case Kind::Zero:
            return true;
        case Kind::Constant:
            return a_ == Vector3{};
        case Kind::Sinusoidal:
            return a_ == Vector3{} && b_ == Vector3{};
    }
    return false;
}

Vector3 euler_free(const InertiaDiag& J, const Vector3& omega) { return J.solve(cross(J.apply(omega), omega)); }

Vector3 euler_rhs(const InertiaDiag& J, const Vector3& omega, const Vector3& tau) {
    return J.solve(cross(J.apply(omega), omega) + tau);
}

namespace {

struct Derivative {
    Matrix3 dR;
    Vector3 domega;
};

Derivative rigid_rhs(const Matrix3& R, const Vector3& omega, const InertiaDiag& J, const Vector3& tau) {
    return {R * cross_matrix(omega), euler_rhs(J, omega, tau)};
}

}  // namespace

TruthState truth_step(const TruthState& state, const InertiaDiag& J, const TorqueProfile& tau, double t,
                      double dt) {
    if (!(dt > 0.0)) throw ConfigError("truth_step: dt must be positive");
    const Matrix3& R0 = state.R.matrix();
    const Vector3& w0 = state.omega;

    const Derivative k1 = rigid_rhs(R0, w0, J, tau(t));
    const Derivative k2 = rigid_rhs(R0 + (0.5 * dt) * k1.dR, w0 + (0.5 * dt) * k1.domega, J, tau(t + 0.5 * dt));
    const Derivative k3 = rigid_rhs(R0 + (0.5 * dt) * k2.dR, w0 + (0.5 * dt) * k2.domega, J, tau(t + 0.5 * dt));
    const Derivative k4 = rigid_rhs(R0 + dt * k3.dR, w0 + dt * k3.domega, J, tau(t + dt));

    const Matrix3 R1 = R0 + (dt / 6.0) * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
    const Vector3 w1 = w0 + (dt / 6.0) * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
    return {reorthonormalize(R1), w1};
}

InvariantsReport invariants_report(const TruthState& state, const InertiaDiag& J) {
    const Vector3 h = J.apply(state.omega);
    return {0.5 * state.omega.dot(h), h.norm()};
}

double omega_max_bound(const InertiaDiag& J, const TruthState& state0, const TorqueProfile& tau) {
    if (!tau.is_zero()) {
        throw UnsupportedError("omega_max_bound: only free rotation is supported; configure omega_max explicitly");
    }
    const double energy = invariants_report(state0, J).energy;
    return std::sqrt(2.0 * energy / J.min_moment());
}

}  // namespace gyroless
