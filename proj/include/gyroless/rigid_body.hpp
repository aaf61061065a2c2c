#pragma once

#include <functional>
#include <string>

#include "gyroless/so3_math.hpp"

namespace gyroless {

/// Principal moments of inertia J = diag(J1, J2, J3), kg m^2.
/// All positive and each at most the sum of the other two.
class InertiaDiag {
public:
    InertiaDiag(double j1, double j2, double j3);

    [[nodiscard]] double operator[](std::size_t i) const { return j_[i]; }
    [[nodiscard]] const Vector3& moments() const { return j_; }
    [[nodiscard]] double min_moment() const;

    [[nodiscard]] Vector3 apply(const Vector3& w) const { return {{j_[0] * w[0], j_[1] * w[1], j_[2] * w[2]}}; }
    [[nodiscard]] Vector3 solve(const Vector3& x) const { return {{x[0] / j_[0], x[1] / j_[1], x[2] / j_[2]}}; }

private:
    Vector3 j_;
};

/// Attitude R (convention: a body-frame measurement is R^T times
/// the inertial reference) and body-frame angular velocity omega in rad/s.
struct TruthState {
    RotationMatrix R;
    Vector3 omega;
};

/// Body-frame torque tau(t) in N m.
class TorqueProfile {
public:
    enum class Kind { Zero, Constant, Sinusoidal };

    static TorqueProfile zero() { return TorqueProfile(Kind::Zero, {}, {}, 0.0, 0.0); }
    static TorqueProfile constant(const Vector3& value) { return TorqueProfile(Kind::Constant, value, {}, 0.0, 0.0); }
    /// tau(t) = offset + amplitude * sin(angular_frequency * t + phase).
    static TorqueProfile sinusoidal(const Vector3& amplitude, double angular_frequency, double phase = 0.0,
                                    const Vector3& offset = {});

    [[nodiscard]] Vector3 operator()(double t) const;
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_zero() const;

private:
    TorqueProfile(Kind kind, const Vector3& a, const Vector3& b, double w, double phase)
        : kind_(kind), a_(a), b_(b), w_(w), phase_(phase) {}

    Kind kind_;
    Vector3 a_;  // constant value, or sinusoid amplitude
    Vector3 b_;  // sinusoid offset
    double w_;
    double phase_;
};

/// Free-rotation part E(omega) = J^{-1}(J omega x omega).
[[nodiscard]] Vector3 euler_free(const InertiaDiag& J, const Vector3& omega);

/// Euler equations: E(omega) + J^{-1} tau.
[[nodiscard]] Vector3 euler_rhs(const InertiaDiag& J, const Vector3& omega, const Vector3& tau);

/// One RK4 step of (R' = R[omega], omega' = euler_rhs) followed by projection
/// of R back onto the rotation group. Stages use the unprojected R.
[[nodiscard]] TruthState truth_step(const TruthState& state, const InertiaDiag& J, const TorqueProfile& tau,
                                    double t, double dt);

struct InvariantsReport {
    double energy;          // 0.5 omega^T J omega
    double momentum_norm;   // |J omega|
};

[[nodiscard]] InvariantsReport invariants_report(const TruthState& state, const InertiaDiag& J);

/// A priori bound sqrt(2T / min J_i) on |omega(t)| for free rotation, T the
/// initial kinetic energy. Throws UnsupportedError for a non-zero torque.
[[nodiscard]] double omega_max_bound(const InertiaDiag& J, const TruthState& state0, const TorqueProfile& tau);

}  // namespace gyroless
