#pragma once

#include <cstdint>
#include <span>

#include "gyroless/so3_math.hpp"

namespace gyroless {

/// Constant inertial reference directions with p = a_ref . b_ref in [0, 1).
struct ReferencePair {
    UnitVector3 a_ref;
    UnitVector3 b_ref;
    double p = 0.0;
};

/// Flips a_ref when a_ref . b_ref < 0 so that p >= 0. Throws ConfigError when
/// |a_ref x b_ref| <= 1e-6 (the references must be linearly independent).
[[nodiscard]] ReferencePair canonicalize(const UnitVector3& a_ref, const UnitVector3& b_ref);

/// Builds a canonical pair with a_ref fixed and b_ref rotated in the plane of
/// (a_ref, b_ref) so that a_ref . b_ref == p. Throws ConfigError for p outside [0, 1).
[[nodiscard]] ReferencePair with_inner_product(const ReferencePair& refs, double p);

/// Sensor mounting and noise. A body-frame direction v appears in a sensor
/// frame as R_xb * v; ingestion applies the transpose.
struct SensorConfig {
    RotationMatrix R_mb;        // magnetometer mounting, used for b
    RotationMatrix R_sb;        // Sun sensor mounting, used for a
    double noise_sigma = 0.0;   // per-axis standard deviation, before renormalization
    std::uint64_t seed = 0;
};

enum class SensorId : std::uint64_t { Sun = 0, Magnetometer = 1 };

/// Raw sensor-frame unit directions.
struct SensorReading {
    UnitVector3 y_a;
    UnitVector3 y_b;
    double t = 0.0;
};

/// Body-frame unit directions consumed by the observer.
struct MeasurementPair {
    UnitVector3 a;
    UnitVector3 b;
    double t = 0.0;
};

/// Standard normal deviate that depends only on its key. Stateless, so any
/// subset of samples can be generated in any order or concurrently.
[[nodiscard]] double counter_gaussian(std::uint64_t seed, SensorId sensor, std::uint64_t index, std::uint32_t axis);

/// Sensor-frame noise vectors for one sample.
struct SensorNoise {
    Vector3 a;
    Vector3 b;
};

/// Noise of sample `index`: sigma times counter_gaussian per axis.
[[nodiscard]] SensorNoise draw_noise(const SensorConfig& cfg, std::uint64_t index);

/// Sensor-frame outputs: y = normalize(R_xb R^T ref + noise). R need only be
/// close to orthogonal (e.g. an intermediate integrator stage).
[[nodiscard]] SensorReading sense(const Matrix3& R, const ReferencePair& refs, const SensorConfig& cfg, double t,
                                  const SensorNoise& noise);

/// Sensor-frame outputs at sample `index`.
[[nodiscard]] SensorReading sense(const RotationMatrix& R, const ReferencePair& refs, const SensorConfig& cfg,
                                  double t, std::uint64_t index);

/// Maps sensor-frame readings back to the body frame.
[[nodiscard]] MeasurementPair ingest(const SensorReading& reading, const SensorConfig& cfg);

/// ingest(sense(...)): body-frame a ~ R^T a_ref, b ~ R^T b_ref.
[[nodiscard]] MeasurementPair measure(const RotationMatrix& R, const ReferencePair& refs, const SensorConfig& cfg,
                                      double t, std::uint64_t index);

/// Noise-free body-frame direction of reference `ref` at attitude R.
[[nodiscard]] inline Vector3 body_direction(const RotationMatrix& R, const UnitVector3& ref) {
    return R.transpose() * ref.vec();
}

struct MeasurementSample {
    double t = 0.0;
    Vector3 a;
    Vector3 b;
    Vector3 omega;
};

/// Test utility: max over interior samples of |central-difference a' - a x omega|
/// (and the same for b). Assumes uniform sampling.
[[nodiscard]] double measurement_derivative_check(std::span<const MeasurementSample> traj);

}  // namespace gyroless
