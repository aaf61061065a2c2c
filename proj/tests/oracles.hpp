#pragma once

// Independent reference implementations used only by the tests: Eigen for
// dense linear algebra, Boost.Multiprecision for closed-form certificate
// values and for characteristic-polynomial roots.

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "gyroless/so3_math.hpp"

namespace oracle {

template <std::size_t N>
Eigen::Matrix<double, N, N> to_eigen(const gyroless::SquareMatrix<N>& m) {
    Eigen::Matrix<double, N, N> out;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) out(r, c) = m(r, c);
    return out;
}

template <std::size_t N>
gyroless::SquareMatrix<N> from_eigen(const Eigen::Matrix<double, N, N>& m) {
    gyroless::SquareMatrix<N> out;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) out(r, c) = m(r, c);
    return out;
}

template <std::size_t N>
double max_singular_value(const gyroless::SquareMatrix<N>& m) {
    Eigen::JacobiSVD<Eigen::Matrix<double, N, N>> svd(to_eigen(m));
    return svd.singularValues()(0);
}

inline gyroless::Matrix3 polar_factor(const gyroless::Matrix3& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(to_eigen(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
    return from_eigen<3>(svd.matrixU() * svd.matrixV().transpose());
}

template <std::size_t N>
gyroless::SquareMatrix<N> expm(const gyroless::SquareMatrix<N>& m, double s) {
    const Eigen::Matrix<double, N, N> e = (to_eigen(m) * s).exp();
    return from_eigen<N>(e);
}

using mp_real = boost::multiprecision::cpp_bin_float_50;
using mp_complex = boost::multiprecision::cpp_complex_50;

/// Eigenvalues as roots of the characteristic polynomial: Faddeev-LeVerrier
/// coefficients and Durand-Kerner iteration, both in 50-digit arithmetic.
template <std::size_t N>
std::vector<std::complex<double>> charpoly_roots(const gyroless::SquareMatrix<N>& a) {
    using Mat = std::vector<std::vector<mp_real>>;
    Mat A(N, std::vector<mp_real>(N));
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) A[r][c] = a(r, c);
    const auto mul = [](const Mat& x, const Mat& y) {
        Mat z(N, std::vector<mp_real>(N, mp_real(0)));
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t c = 0; c < N; ++c) z[r][c] += x[r][k] * y[k][c];
        return z;
    };
    // Monic: lambda^N + c[1] lambda^{N-1} + ... + c[N].
    std::vector<mp_real> coef(N + 1, mp_real(0));
    coef[0] = 1;
    Mat M(N, std::vector<mp_real>(N, mp_real(0)));
    for (std::size_t k = 1; k <= N; ++k) {
        Mat AM = mul(A, M);
        for (std::size_t i = 0; i < N; ++i) AM[i][i] += coef[k - 1];
        M = AM;
        const Mat AMk = mul(A, M);
        mp_real tr = 0;
        for (std::size_t i = 0; i < N; ++i) tr += AMk[i][i];
        coef[k] = -tr / static_cast<int>(k);
    }
    const auto poly = [&](const mp_complex& z) {
        mp_complex v = coef[0];
        for (std::size_t k = 1; k <= N; ++k) v = v * z + mp_complex(coef[k]);
        return v;
    };
    std::vector<mp_complex> z(N);
    const mp_complex seed(mp_real("0.4"), mp_real("0.9"));
    z[0] = 1;
    for (std::size_t i = 1; i < N; ++i) z[i] = z[i - 1] * seed;
    for (int iter = 0; iter < 5000; ++iter) {
        mp_real change = 0;
        for (std::size_t i = 0; i < N; ++i) {
            mp_complex den = 1;
            for (std::size_t j = 0; j < N; ++j)
                if (j != i) den *= (z[i] - z[j]);
            const mp_complex step = poly(z[i]) / den;
            z[i] -= step;
            change = std::max(change, static_cast<mp_real>(abs(step)));
        }
        if (change < mp_real("1e-40")) break;
    }
    std::vector<std::complex<double>> out;
    for (const auto& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    return out;
}

using mp_dec = boost::multiprecision::cpp_dec_float_50;

/// Closed-form certificate values in 50 significant digits, evaluated
/// directly from the defining formulas (no factoring).
struct Certificate {
    mp_dec A_m, L, K, gamma, gamma_threshold, k_star, r, r_limit;
};

inline Certificate certificate(double alpha_d, double p_d, double omega_max_d, double k_d) {
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    const mp_dec alpha = alpha_d, p = p_d, w = omega_max_d, k = k_d;
    Certificate c;
    c.A_m = std::max<mp_dec>(sqrt(2 + 2 * alpha * alpha), sqrt(3 + alpha * alpha));
    c.L = sqrt(mp_dec(2)) * w;
    const mp_dec x = alpha / (2 * sqrt(1 - p));
    c.K = sqrt((1 + x) / (1 - x));
    const mp_dec lnK = log(c.K);
    c.gamma = k * alpha / 2 - sqrt(c.K * k * c.L * lnK);
    c.gamma_threshold = 4 * c.K * lnK * c.L / (alpha * alpha);
    const mp_dec root = sqrt(lnK) + sqrt(lnK + 2 * alpha * c.K);
    c.k_star = root * root / (alpha * alpha) * sqrt(mp_dec(2)) * c.K * w;
    if (c.gamma > 0) {
        c.r = (1 / (sqrt(c.A_m) * pow(c.K, 3))) * (1 - c.K * c.K * c.L / c.gamma) * pow(c.gamma / k, mp_dec(1.5));
    } else {
        c.r = 0;
    }
    c.r_limit = pow(alpha / 2, mp_dec(1.5)) / (sqrt(c.A_m) * pow(c.K, 3));
    return c;
}

inline double rel_err(double got, const mp_dec& want) {
    const mp_dec diff = abs(mp_dec(got) - want);
    const mp_dec scale = abs(want);
    return static_cast<double>(scale > 0 ? diff / scale : diff);
}

inline gyroless::Vector3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    gyroless::Vector3 v{{n(rng), n(rng), n(rng)}};
    return v / v.norm();
}

inline gyroless::RotationMatrix random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 3.14159265358979323846);
    return gyroless::RotationMatrix::about_axis(random_unit(rng), u(rng));
}

template <std::size_t N>
gyroless::SquareMatrix<N> random_matrix(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    gyroless::SquareMatrix<N> m;
    for (auto& x : m.m) x = n(rng);
    return m;
}

}  // namespace oracle
