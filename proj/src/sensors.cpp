#include "gyroless/sensors.hpp"

#include <algorithm>
#include <numbers>

#include "gyroless/errors.hpp"

namespace gyroless {

ReferencePair canonicalize(const UnitVector3& a_ref, const UnitVector3& b_ref) {
    if (cross(a_ref.vec(), b_ref.vec()).norm() <= 1e-6) {
        throw ConfigError("reference vectors are (nearly) linearly dependent");
    }
    ReferencePair out{a_ref, b_ref, a_ref.vec().dot(b_ref.vec())};
    if (out.p < 0.0) {
        out.a_ref = -a_ref;
        out.p = -out.p;
    }
    return out;
}

ReferencePair with_inner_product(const ReferencePair& refs, double p) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("inner product p must lie in [0, 1)");
    const Vector3& a = refs.a_ref.vec();
    const Vector3 u = UnitVector3::normalized(refs.b_ref.vec() - refs.p * a).vec();
    const Vector3 b = p * a + std::sqrt(1.0 - p * p) * u;
    return canonicalize(refs.a_ref, UnitVector3::normalized(b));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in (0, 1]: 53 random bits, offset so log() never sees zero.
double to_unit_interval(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double counter_gaussian(std::uint64_t seed, SensorId sensor, std::uint64_t index, std::uint32_t axis) {
    std::uint64_t key = splitmix64(seed);
    key = splitmix64(key ^ static_cast<std::uint64_t>(sensor));
    key = splitmix64(key ^ index);
    key = splitmix64(key ^ axis);
    const double u1 = to_unit_interval(splitmix64(key ^ 0x5851f42d4c957f2dULL));
    const double u2 = to_unit_interval(splitmix64(key ^ 0x14057b7ef767814fULL));
    // Box-Muller, cosine branch.
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SensorNoise draw_noise(const SensorConfig& cfg, std::uint64_t index) {
    if (cfg.noise_sigma < 0.0) throw ConfigError("noise_sigma must be non-negative");
    SensorNoise n;
    if (cfg.noise_sigma == 0.0) return n;
    for (std::uint32_t axis = 0; axis < 3; ++axis) {
        n.a[axis] = cfg.noise_sigma * counter_gaussian(cfg.seed, SensorId::Sun, index, axis);
        n.b[axis] = cfg.noise_sigma * counter_gaussian(cfg.seed, SensorId::Magnetometer, index, axis);
    }
    return n;
}

SensorReading sense(const Matrix3& R, const ReferencePair& refs, const SensorConfig& cfg, double t,
                    const SensorNoise& noise) {
    const Matrix3 Rt = R.transpose();
    const Vector3 a = Rt * refs.a_ref.vec();
    const Vector3 b = Rt * refs.b_ref.vec();
    return {UnitVector3::normalized(cfg.R_sb * a + noise.a), UnitVector3::normalized(cfg.R_mb * b + noise.b), t};
}

SensorReading sense(const RotationMatrix& R, const ReferencePair& refs, const SensorConfig& cfg, double t,
                    std::uint64_t index) {
    return sense(R.matrix(), refs, cfg, t, draw_noise(cfg, index));
}

MeasurementPair ingest(const SensorReading& reading, const SensorConfig& cfg) {
    return {UnitVector3::normalized(cfg.R_sb.transpose() * reading.y_a.vec()),
            UnitVector3::normalized(cfg.R_mb.transpose() * reading.y_b.vec()), reading.t};
}

MeasurementPair measure(const RotationMatrix& R, const ReferencePair& refs, const SensorConfig& cfg, double t,
                        std::uint64_t index) {
    return ingest(sense(R, refs, cfg, t, index), cfg);
}

double measurement_derivative_check(std::span<const MeasurementSample> traj) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double span = traj[i + 1].t - traj[i - 1].t;
        const Vector3 da = (traj[i + 1].a - traj[i - 1].a) / span;
        const Vector3 db = (traj[i + 1].b - traj[i - 1].b) / span;
        worst = std::max(worst, (da - cross(traj[i].a, traj[i].omega)).norm());
        worst = std::max(worst, (db - cross(traj[i].b, traj[i].omega)).norm());
    }
    return worst;
}

}  // namespace gyroless
