#include "gyroless/gain_analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>

#include "gyroless/errors.hpp"

namespace gyroless {

namespace {

void set_block(Matrix9& m, std::size_t row, std::size_t col, const Matrix3& block) {
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(3 * row + r, 3 * col + c) = block(r, c);
}

void set_column(Matrix9& m, std::size_t col, const Vector3& top, const Vector3& mid, const Vector3& bottom) {
    for (std::size_t r = 0; r < 3; ++r) {
        m(r, col) = top[r];
        m(3 + r, col) = mid[r];
        m(6 + r, col) = bottom[r];
    }
}

}  // namespace

Matrix9 build_A(const Vector3& a, const Vector3& b, double alpha) {
    Matrix9 m;
    set_block(m, 0, 0, -alpha * Matrix3::identity());
    set_block(m, 1, 1, -alpha * Matrix3::identity());
    set_block(m, 0, 2, cross_matrix(a));
    set_block(m, 1, 2, cross_matrix(b));
    set_block(m, 2, 0, cross_matrix(a));
    set_block(m, 2, 1, cross_matrix(b));
    return m;
}

double compute_A_m(double alpha) {
    return std::max(std::sqrt(2.0 + 2.0 * alpha * alpha), std::sqrt(3.0 + alpha * alpha));
}

double overshoot_constant(double alpha, double p) {
    const double x = alpha / (2.0 * std::sqrt(1.0 - p));
    return std::sqrt((1.0 + x) / (1.0 - x));
}

namespace {

// ln K = atanh(alpha / (2 sqrt(1 - p))), free of the cancellation in log(K) near K = 1.
double log_overshoot(double alpha, double p) { return std::atanh(alpha / (2.0 * std::sqrt(1.0 - p))); }

}  // namespace

double certified_rate(const GainCertificate& cert, double k) {
    const double log_k = log_overshoot(cert.alpha, cert.p);
    return 0.5 * k * cert.alpha - std::sqrt(cert.K * k * cert.L * log_k);
}

double basin_radius(const GainCertificate& cert, double k) {
    const double gamma = certified_rate(cert, k);
    if (!(gamma > 0.0)) return 0.0;
    // gamma(k) - K^2 L is a quadratic in u = sqrt(k) with roots sqrt(k*) and
    // u_minus = -2 K^2 L / (alpha sqrt(k*)); the factored form stays accurate near k*.
    const double u = std::sqrt(k);
    const double u_plus = std::sqrt(cert.k_star);
    const double u_minus = -2.0 * cert.K * cert.K * cert.L / (cert.alpha * u_plus);
    const double margin = 0.5 * cert.alpha * (u - u_plus) * (u - u_minus);
    const double prefactor = 1.0 / (std::sqrt(cert.A_m) * cert.K * cert.K * cert.K);
    return prefactor * (margin / gamma) * std::pow(gamma / k, 1.5);
}

GainCertificate compute_certificate(double alpha, double p, double omega_max, double k) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("certificate: p must lie in [0, 1)");
    const double upper = 2.0 * std::sqrt(1.0 - p);
    if (!(alpha > 0.0 && alpha < upper)) {
        throw ConfigError("certificate: alpha must lie in (0, 2 sqrt(1 - p)) = (0, " + std::to_string(upper) + ")");
    }
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw ConfigError("certificate: omega_max must be positive");
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("certificate: k must be positive");

    GainCertificate c;
    c.alpha = alpha;
    c.p = p;
    c.omega_max = omega_max;
    c.k = k;
    c.A_m = compute_A_m(alpha);
    c.L = std::numbers::sqrt2 * omega_max;
    c.K = overshoot_constant(alpha, p);
    const double log_k = log_overshoot(alpha, p);
    c.gamma_threshold = 4.0 * c.K * log_k * c.L / (alpha * alpha);
    const double root = std::sqrt(log_k) + std::sqrt(log_k + 2.0 * alpha * c.K);
    c.k_star = root * root / (alpha * alpha) * std::numbers::sqrt2 * c.K * omega_max;
    c.gamma_k = certified_rate(c, k);
    c.r_k = basin_radius(c, k);
    c.r_limit = std::pow(0.5 * alpha, 1.5) / (std::sqrt(c.A_m) * c.K * c.K * c.K);
    return c;
}

std::string certificate_report(const GainCertificate& cert) {
    std::string out;
    char line[96];
    const auto add = [&](const char* key, double value) {
        std::snprintf(line, sizeof line, "%s: %.17g\n", key, value);
        out += line;
    };
    add("alpha", cert.alpha);
    add("p", cert.p);
    add("omega_max", cert.omega_max);
    add("k", cert.k);
    add("A_m", cert.A_m);
    add("L", cert.L);
    add("K", cert.K);
    add("gamma_k", cert.gamma_k);
    add("gamma_threshold", cert.gamma_threshold);
    add("k_star", cert.k_star);
    add("r_k", cert.r_k);
    add("r_limit", cert.r_limit);
    out += std::string("certified_basin: ") + (cert.has_basin() ? "yes" : "no") + "\n";
    return out;
}

FrozenSpectrum frozen_spectrum(double alpha, double p) {
    FrozenSpectrum fs;
    fs.a2 = 2.0 * std::numbers::sqrt2;
    fs.a3 = 2.0 * std::sqrt(1.0 + p);
    fs.a4 = 2.0 * std::sqrt(1.0 - p);
    for (int i = 0; i < 3; ++i) fs.eigenvalues.emplace_back(-alpha, 0.0);
    for (double ai : {fs.a2, fs.a3, fs.a4}) {
        const double im = 0.5 * std::sqrt(ai * ai - alpha * alpha);
        fs.eigenvalues.emplace_back(-0.5 * alpha, im);
        fs.eigenvalues.emplace_back(-0.5 * alpha, -im);
    }
    return fs;
}

std::vector<double> default_s_samples() {
    constexpr int n = 50;
    const double lo = std::log(1e-3);
    const double hi = std::log(20.0);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = std::exp(lo + (hi - lo) * i / (n - 1));
    s.back() = 20.0;
    return s;
}

double verify_exp_bound(const Vector3& a, const Vector3& b, double alpha, double K, std::span<const double> s_samples,
                        double k) {
    const Matrix9 kA = k * build_A(a, b, alpha);
    double worst = -std::numeric_limits<double>::infinity();
    for (double s : s_samples) {
        const double lhs = spectral_norm(matrix_exp(kA, s));
        const double rhs = K * std::exp(-0.5 * k * alpha * s);
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

Matrix9 build_P(const Vector3& a, const Vector3& b, double alpha) {
    const double p = a.dot(b);
    if (!(p < 1.0 && p > -1.0)) throw NumericalError("build_P: reference vectors are dependent");
    const double mu = std::sqrt(8.0 * (1.0 - p * p));
    const double s = std::sqrt(2.0 * (1.0 - p * p));
    const Vector3 z{};
    const Vector3 c = cross(a, b);

    Matrix9 P;
    set_column(P, 0, a, z, z);
    set_column(P, 1, z, b, z);
    set_column(P, 2, (b - p * a) / s, (a - p * b) / s, z);

    set_column(P, 3, 2.0 * (p * a - b) / mu, 2.0 * (a - p * b) / mu, alpha * c / mu);
    set_column(P, 4, z, z, -std::sqrt(8.0 - alpha * alpha) * c / mu);

    set_column(P, 5, 2.0 * c / mu, 2.0 * c / mu, alpha * (b - a) / mu);
    set_column(P, 6, z, z, std::sqrt(4.0 * (1.0 + p) - alpha * alpha) * (a - b) / mu);

    set_column(P, 7, 2.0 * c / mu, -2.0 * c / mu, alpha * (a + b) / mu);
    set_column(P, 8, z, z, -std::sqrt(4.0 * (1.0 - p) - alpha * alpha) * (a + b) / mu);
    return P;
}

PtpReport verify_ptp_eigenvalues(double alpha, double p) {
    const Vector3 a{{1.0, 0.0, 0.0}};
    const Vector3 b{{p, std::sqrt(1.0 - p * p), 0.0}};
    return verify_ptp_eigenvalues(a, b, alpha);
}

PtpReport verify_ptp_eigenvalues(const Vector3& a, const Vector3& b, double alpha) {
    const double p = a.dot(b);
    PtpReport rep;
    rep.P = build_P(a, b, alpha);
    const Matrix9 ptp = rep.P.transpose() * rep.P;
    rep.eigenvalues = symmetric_eigenvalues(ptp);
    if (!(rep.eigenvalues.front() > 1e-12 * rep.eigenvalues.back())) {
        throw NumericalError("verify_ptp_eigenvalues: P is numerically singular");
    }

    const FrozenSpectrum fs = frozen_spectrum(alpha, p);
    const std::array<double, 3> a_i{fs.a2, fs.a3, fs.a4};
    std::size_t n = 0;
    for (int i = 0; i < 3; ++i) rep.closed_form[n++] = 1.0;
    for (double ai : a_i) {
        rep.closed_form[n++] = 1.0 + alpha / ai;
        rep.closed_form[n++] = 1.0 - alpha / ai;
    }
    std::sort(rep.closed_form.begin(), rep.closed_form.end());
    for (std::size_t i = 0; i < 9; ++i) {
        rep.max_eigenvalue_error = std::max(rep.max_eigenvalue_error, std::abs(rep.eigenvalues[i] - rep.closed_form[i]));
    }
    rep.condition_number = std::sqrt(rep.eigenvalues.back() / rep.eigenvalues.front());
    rep.K = overshoot_constant(alpha, std::max(p, 0.0));

    // Block structure of P^{-1} A P: M_1 = -alpha I on [0,3), then 2x2 blocks.
    const Matrix9 D = solve(rep.P, build_A(a, b, alpha) * rep.P);
    const std::array<std::size_t, 9> block_of{0, 0, 0, 1, 1, 2, 2, 3, 3};
    Matrix9 expected;
    for (std::size_t i = 0; i < 3; ++i) expected(i, i) = -alpha;
    for (std::size_t j = 0; j < 3; ++j) {
        const std::size_t o = 3 + 2 * j;
        const double w = 0.5 * std::sqrt(a_i[j] * a_i[j] - alpha * alpha);
        expected(o, o) = -0.5 * alpha;
        expected(o + 1, o + 1) = -0.5 * alpha;
        expected(o, o + 1) = -w;
        expected(o + 1, o) = w;
    }
    for (std::size_t r = 0; r < 9; ++r)
        for (std::size_t c = 0; c < 9; ++c) {
            const double dev = std::abs(D(r, c) - expected(r, c));
            if (block_of[r] == block_of[c]) {
                rep.block_residual = std::max(rep.block_residual, dev);
            } else {
                rep.off_block_residual = std::max(rep.off_block_residual, dev);
            }
        }

    // 2x2 blocks of P^T P against both forms of Q_i.
    for (std::size_t j = 0; j < 3; ++j) {
        const std::size_t o = 3 + 2 * j;
        const double x = alpha / a_i[j];
        const double diag_dev =
            std::max(std::abs(ptp(o, o) - (1.0 + x * x)), std::abs(ptp(o + 1, o + 1) - (1.0 - x * x)));
        const double off = 0.5 * (ptp(o, o + 1) + ptp(o + 1, o));
        const double corrected = -x * std::sqrt(1.0 - x * x);
        const double printed = x * std::sqrt(1.0 - x);
        rep.q_block_residual = std::max({rep.q_block_residual, diag_dev, std::abs(off - corrected)});
        rep.printed_q_residual = std::max({rep.printed_q_residual, diag_dev, std::abs(off - printed)});
    }
    return rep;
}

double lipschitz_check(std::span<const FrameSample> traj, double k, std::size_t max_lag) {
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        for (std::size_t lag = 1; lag <= max_lag && i + lag < traj.size(); ++lag) {
            const FrameSample& s0 = traj[i];
            const FrameSample& s1 = traj[i + lag];
            const double dt = std::abs(s1.t - s0.t);
            if (dt == 0.0) continue;
            // alpha cancels in the difference.
            const Matrix9 diff = k * (build_A(s1.a, s1.b, 0.0) - build_A(s0.a, s0.b, 0.0));
            worst = std::max(worst, spectral_norm(diff) / dt);
        }
    }
    return worst;
}

bool basin_test(const ErrorState& error0, const GainCertificate& cert) {
    if (!(cert.r_k > 0.0)) {
        throw CertificateError("no certified basin: k=" + std::to_string(cert.k) +
                               " does not exceed k*=" + std::to_string(cert.k_star));
    }
    const double z2 = error0.a_tilde.squared_norm() + error0.b_tilde.squared_norm() +
                      error0.omega_tilde.squared_norm() / (cert.k * cert.k);
    return z2 < cert.r_k * cert.r_k;
}

}  // namespace gyroless
