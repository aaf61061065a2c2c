#pragma once

// Fixed-size linear algebra for the 3-dimensional rotation problem and the
// 9-dimensional extended error system: vectors, square matrices, cross-product
// matrices, rotations, spectral norm, matrix exponential and eigenvalues.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gyroless {

template <std::size_t N>
struct Vec {
    std::array<double, N> v{};

    constexpr double& operator[](std::size_t i) { return v[i]; }
    constexpr double operator[](std::size_t i) const { return v[i]; }

    constexpr Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr Vec& operator*=(double s) {
        for (auto& x : v) x *= s;
        return *this;
    }

    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
    friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
    friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
    friend constexpr Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;

    [[nodiscard]] constexpr double dot(const Vec& o) const {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += v[i] * o.v[i];
        return s;
    }
    [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }
    [[nodiscard]] double squared_norm() const { return dot(*this); }
};

using Vector3 = Vec<3>;
using Vector9 = Vec<9>;

[[nodiscard]] constexpr Vector3 cross(const Vector3& a, const Vector3& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

template <std::size_t N>
struct SquareMatrix {
    // Row-major storage.
    std::array<double, N * N> m{};

    static constexpr std::size_t size = N;

    constexpr double& operator()(std::size_t r, std::size_t c) { return m[r * N + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const { return m[r * N + c]; }

    [[nodiscard]] static constexpr SquareMatrix zero() { return {}; }
    [[nodiscard]] static constexpr SquareMatrix identity() {
        SquareMatrix out;
        for (std::size_t i = 0; i < N; ++i) out(i, i) = 1.0;
        return out;
    }
    [[nodiscard]] static constexpr SquareMatrix diagonal(const Vec<N>& d) {
        SquareMatrix out;
        for (std::size_t i = 0; i < N; ++i) out(i, i) = d[i];
        return out;
    }

    [[nodiscard]] constexpr SquareMatrix transpose() const {
        SquareMatrix out;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) out(c, r) = (*this)(r, c);
        return out;
    }

    [[nodiscard]] constexpr double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    [[nodiscard]] double frobenius_norm() const {
        double s = 0.0;
        for (double x : m) s += x * x;
        return std::sqrt(s);
    }

    // Max-abs entry.
    [[nodiscard]] double max_abs() const {
        double s = 0.0;
        for (double x : m) s = std::max(s, std::abs(x));
        return s;
    }

    constexpr SquareMatrix& operator+=(const SquareMatrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) m[i] += o.m[i];
        return *this;
    }
    constexpr SquareMatrix& operator-=(const SquareMatrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) m[i] -= o.m[i];
        return *this;
    }
    constexpr SquareMatrix& operator*=(double s) {
        for (auto& x : m) x *= s;
        return *this;
    }

    friend constexpr SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
    friend constexpr SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
    friend constexpr SquareMatrix operator-(SquareMatrix a) { return a *= -1.0; }
    friend constexpr SquareMatrix operator*(SquareMatrix a, double s) { return a *= s; }
    friend constexpr SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }
    friend constexpr bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

    friend constexpr SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix out;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t k = 0; k < N; ++k) {
                const double ark = a(r, k);
                if (ark == 0.0) continue;
                for (std::size_t c = 0; c < N; ++c) out(r, c) += ark * b(k, c);
            }
        return out;
    }

    friend constexpr Vec<N> operator*(const SquareMatrix& a, const Vec<N>& x) {
        Vec<N> out;
        for (std::size_t r = 0; r < N; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < N; ++c) s += a(r, c) * x[c];
            out[r] = s;
        }
        return out;
    }
};

using Matrix3 = SquareMatrix<3>;
using Matrix9 = SquareMatrix<9>;

/// Unit-norm 3-vector. The norm is within 1e-9 of one by construction.
class UnitVector3 {
public:
    UnitVector3() = default;

    /// Normalizes `v`; throws ConfigError for a zero or non-finite vector.
    [[nodiscard]] static UnitVector3 normalized(const Vector3& v);

    /// Wraps `v` whose norm must already be within 1e-9 of one.
    [[nodiscard]] static UnitVector3 from_unit(const Vector3& v);

    [[nodiscard]] const Vector3& vec() const { return v_; }
    [[nodiscard]] double operator[](std::size_t i) const { return v_[i]; }
    operator const Vector3&() const { return v_; }  // NOLINT(google-explicit-constructor)

    [[nodiscard]] UnitVector3 operator-() const {
        UnitVector3 out;
        out.v_ = -v_;
        return out;
    }

private:
    Vector3 v_{{1.0, 0.0, 0.0}};
};

/// Proper orthogonal 3x3 matrix: ||m^T m - I|| <= 1e-8 and det(m) > 0.
class RotationMatrix {
public:
    RotationMatrix() : m_(Matrix3::identity()) {}

    /// Validates `m` against the rotation invariants; throws ConfigError otherwise.
    [[nodiscard]] static RotationMatrix from_matrix(const Matrix3& m);

    /// Rodrigues rotation by `angle` (rad) about `axis` (normalized internally).
    [[nodiscard]] static RotationMatrix about_axis(const Vector3& axis, double angle);

    [[nodiscard]] const Matrix3& matrix() const { return m_; }
    [[nodiscard]] RotationMatrix transpose() const { return RotationMatrix(m_.transpose()); }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    friend Vector3 operator*(const RotationMatrix& r, const Vector3& x) { return r.m_ * x; }
    friend RotationMatrix operator*(const RotationMatrix& a, const RotationMatrix& b) {
        return RotationMatrix(a.m_ * b.m_);
    }

private:
    explicit RotationMatrix(const Matrix3& m) : m_(m) {}
    friend RotationMatrix reorthonormalize(const Matrix3& r);

    Matrix3 m_;
};

/// Skew-symmetric matrix [x] with [x] y = x × y.
[[nodiscard]] constexpr Matrix3 cross_matrix(const Vector3& x) {
    Matrix3 out;
    out(0, 1) = -x[2];
    out(0, 2) = x[1];
    out(1, 0) = x[2];
    out(1, 2) = -x[0];
    out(2, 0) = -x[1];
    out(2, 1) = x[0];
    return out;
}

[[nodiscard]] double determinant(const Matrix3& m);

/// Frobenius norm of m^T m - I.
[[nodiscard]] double orthogonality_error(const Matrix3& m);

/// Nearest rotation (orthogonal polar factor). Requires ||R^T R - I|| <= 0.1
/// and det(R) > 0; throws NumericalError otherwise.
[[nodiscard]] RotationMatrix reorthonormalize(const Matrix3& r);

/// Largest singular value. Throws NumericalError if the symmetric
/// eigensolver on M^T M does not converge.
template <std::size_t N>
[[nodiscard]] double spectral_norm(const SquareMatrix<N>& m);

/// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
template <std::size_t N>
[[nodiscard]] std::array<double, N> symmetric_eigenvalues(const SquareMatrix<N>& m);

/// e^{M s} by scaling and squaring of a truncated Taylor series. Requires s >= 0.
template <std::size_t N>
[[nodiscard]] SquareMatrix<N> matrix_exp(const SquareMatrix<N>& m, double s);

/// All eigenvalues with multiplicity, unspecified order. Balancing, Hessenberg
/// reduction and Francis double-shift QR. Throws NumericalError on non-convergence.
template <std::size_t N>
[[nodiscard]] std::vector<std::complex<double>> eigenvalues(const SquareMatrix<N>& m);

/// Solves A X = B by Gaussian elimination with partial pivoting.
/// Throws NumericalError when A is numerically singular.
template <std::size_t N>
[[nodiscard]] SquareMatrix<N> solve(const SquareMatrix<N>& a, const SquareMatrix<N>& b);

/// Greedy nearest pairing of two multisets of complex numbers. Returns the
/// largest pairing distance, or +inf when the sizes differ.
[[nodiscard]] double multiset_distance(std::span<const std::complex<double>> lhs,
                                       std::span<const std::complex<double>> rhs);

/// True when every element pairs within `tol`.
[[nodiscard]] inline bool multiset_match(std::span<const std::complex<double>> lhs,
                                         std::span<const std::complex<double>> rhs,
                                         double tol = 1e-7) {
    return multiset_distance(lhs, rhs) <= tol;
}

}  // namespace gyroless
