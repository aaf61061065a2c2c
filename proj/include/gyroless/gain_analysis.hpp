#pragma once

// Closed-form convergence certificate of the observer and numerical checks of
// every ingredient: the frozen-time matrix A(t), its bound A_m, the similarity
// transform P that block-diagonalizes A(t), the exponential bound
// ||e^{A s}|| <= K e^{-alpha s / 2}, the Lipschitz constant of k A(.), the gain
// threshold k* and the basin radius r(k).

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "gyroless/observer.hpp"
#include "gyroless/so3_math.hpp"

namespace gyroless {

/// Frozen-time error matrix
///   [ -alpha I     0       [a] ]
///   [    0     -alpha I    [b] ]
///   [   [a]       [b]       0  ]
[[nodiscard]] Matrix9 build_A(const Vector3& a, const Vector3& b, double alpha);

/// max(sqrt(2 + 2 alpha^2), sqrt(3 + alpha^2)), an upper bound on ||A(t)||.
[[nodiscard]] double compute_A_m(double alpha);

struct GainCertificate {
    // Inputs.
    double alpha = 0.0;
    double p = 0.0;
    double omega_max = 0.0;
    double k = 0.0;
    // Outputs.
    double A_m = 0.0;
    double L = 0.0;                // sqrt(2) omega_max
    double K = 0.0;                // overshoot constant, >= 1
    double gamma_k = 0.0;          // certified decay rate of Z' = k A(t) Z
    double gamma_threshold = 0.0;  // gamma(k) > 0 iff k > gamma_threshold
    double k_star = 0.0;           // r(k) > 0 iff k > k_star
    double r_k = 0.0;              // basin radius; negative for gamma_threshold < k < k*, 0 when gamma(k) <= 0
    double r_limit = 0.0;          // lim r(k) as k -> infinity

    [[nodiscard]] bool has_basin() const { return r_k > 0.0; }
};

/// Overshoot constant sqrt((1 + x) / (1 - x)) with x = alpha / (2 sqrt(1 - p)).
[[nodiscard]] double overshoot_constant(double alpha, double p);

/// Throws ConfigError unless 0 < alpha < 2 sqrt(1 - p), 0 <= p < 1,
/// omega_max > 0 and k > 0.
[[nodiscard]] GainCertificate compute_certificate(double alpha, double p, double omega_max, double k);

/// gamma(k) = k alpha / 2 - sqrt(K k L ln K).
[[nodiscard]] double certified_rate(const GainCertificate& cert, double k);

/// r(k) for the certificate's (alpha, p, omega_max) at another gain.
[[nodiscard]] double basin_radius(const GainCertificate& cert, double k);

/// `key: value` lines, full precision.
[[nodiscard]] std::string certificate_report(const GainCertificate& cert);

struct FrozenSpectrum {
    double a2 = 0.0;  // 2 sqrt(2)
    double a3 = 0.0;  // 2 sqrt(1 + p)
    double a4 = 0.0;  // 2 sqrt(1 - p)
    std::vector<std::complex<double>> eigenvalues;
};

/// Closed-form spectrum of A(t): -alpha (x3) and (-alpha +- i sqrt(a_i^2 - alpha^2)) / 2.
[[nodiscard]] FrozenSpectrum frozen_spectrum(double alpha, double p);

/// 50 log-spaced values in [1e-3, 20].
[[nodiscard]] std::vector<double> default_s_samples();

/// max over s of ||e^{k A s}|| - K e^{-k alpha s / 2}; non-positive when the bound holds.
[[nodiscard]] double verify_exp_bound(const Vector3& a, const Vector3& b, double alpha, double K,
                                      std::span<const double> s_samples, double k = 1.0);

/// Similarity transform P = (P1 | P2 | P3 | P4) built from body-frame unit
/// vectors with a . b = p. Requires p < 1.
[[nodiscard]] Matrix9 build_P(const Vector3& a, const Vector3& b, double alpha);

struct PtpReport {
    Matrix9 P;
    std::array<double, 9> eigenvalues{};   // eig(P^T P), ascending
    std::array<double, 9> closed_form{};   // {1 (x3), 1 +- alpha / a_i}, ascending
    double max_eigenvalue_error = 0.0;
    double condition_number = 0.0;         // sqrt(lambda_max / lambda_min)
    double K = 0.0;                        // closed form
    double off_block_residual = 0.0;       // max |entry| of P^{-1} A P outside the diagonal blocks
    double block_residual = 0.0;           // max |entry| of diagonal blocks minus M_1..M_4
    double q_block_residual = 0.0;         // P^T P 2x2 blocks vs the Q_i form with off-diagonal
                                           //   -(alpha/a_i) sqrt(1 - alpha^2 / a_i^2)
    double printed_q_residual = 0.0;       // vs the Q_i form with off-diagonal
                                           //   (alpha/a_i) sqrt(1 - alpha / a_i)
    [[nodiscard]] bool printed_q_matches(double tol = 1e-9) const { return printed_q_residual <= tol; }
};

/// Builds P for the canonical pair a = e1, b = (p, sqrt(1 - p^2), 0).
/// Throws NumericalError if P is numerically singular.
[[nodiscard]] PtpReport verify_ptp_eigenvalues(double alpha, double p);

/// Same, for a given unit pair; p is taken as a . b.
[[nodiscard]] PtpReport verify_ptp_eigenvalues(const Vector3& a, const Vector3& b, double alpha);

struct FrameSample {
    double t = 0.0;
    Vector3 a;
    Vector3 b;
};

/// max over sample pairs up to `max_lag` apart of ||k A(s) - k A(t)|| / |s - t|.
[[nodiscard]] double lipschitz_check(std::span<const FrameSample> traj, double k, std::size_t max_lag = 10);

/// |a~|^2 + |b~|^2 + |omega~|^2 / k^2 < r(k)^2. Throws CertificateError when r(k) <= 0.
[[nodiscard]] bool basin_test(const ErrorState& error0, const GainCertificate& cert);

}  // namespace gyroless
