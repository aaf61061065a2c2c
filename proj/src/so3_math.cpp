#include "gyroless/so3_math.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gyroless/errors.hpp"

namespace gyroless {

UnitVector3 UnitVector3::normalized(const Vector3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ConfigError("cannot normalize a zero or non-finite vector");
    }
    UnitVector3 out;
    out.v_ = v / n;
    return out;
}

UnitVector3 UnitVector3::from_unit(const Vector3& v) {
    if (std::abs(v.norm() - 1.0) > 1e-9) {
        throw ConfigError("vector is not unit norm");
    }
    UnitVector3 out;
    out.v_ = v;
    return out;
}

RotationMatrix RotationMatrix::from_matrix(const Matrix3& m) {
    for (double x : m.m) {
        if (!std::isfinite(x)) throw ConfigError("rotation matrix has non-finite entries");
    }
    if (orthogonality_error(m) > 1e-8) throw ConfigError("matrix is not orthogonal");
    if (determinant(m) <= 0.0) throw ConfigError("matrix is not a proper rotation (det <= 0)");
    return RotationMatrix(m);
}

RotationMatrix RotationMatrix::about_axis(const Vector3& axis, double angle) {
    const Vector3 u = UnitVector3::normalized(axis).vec();
    const Matrix3 k = cross_matrix(u);
    Matrix3 r = Matrix3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
    return reorthonormalize(r);
}

double determinant(const Matrix3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double orthogonality_error(const Matrix3& m) {
    return (m.transpose() * m - Matrix3::identity()).frobenius_norm();
}

namespace {

Matrix3 inverse_transpose(const Matrix3& m) {
    // Cofactor matrix divided by the determinant is (m^{-1})^T.
    const double det = determinant(m);
    Matrix3 cof;
    cof(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    cof(0, 1) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    cof(0, 2) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    cof(1, 0) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    cof(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    cof(1, 2) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    cof(2, 0) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    cof(2, 1) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    cof(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return cof * (1.0 / det);
}

}  // namespace

RotationMatrix reorthonormalize(const Matrix3& r) {
    if (orthogonality_error(r) > 0.1) {
        throw NumericalError("reorthonormalize: input too far from orthogonal");
    }
    if (determinant(r) <= 0.0) {
        throw NumericalError("reorthonormalize: input has non-positive determinant");
    }
    // Newton iteration for the orthogonal polar factor; quadratic convergence
    // from this close to the orthogonal group.
    Matrix3 x = r;
    for (int it = 0; it < 20; ++it) {
        const Matrix3 next = 0.5 * (x + inverse_transpose(x));
        const double change = (next - x).max_abs();
        x = next;
        if (change <= 1e-16) break;
    }
    return RotationMatrix(x);
}

template <std::size_t N>
std::array<double, N> symmetric_eigenvalues(const SquareMatrix<N>& m) {
    SquareMatrix<N> a = m;
    // Symmetrize to remove rounding asymmetry of products like M^T M.
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }

    const double scale = a.frobenius_norm();
    constexpr int kMaxSweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) off = std::max(off, std::abs(a(i, j)));
        if (off <= 1e-17 * scale) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-19 * scale) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    if (!converged) throw NumericalError("symmetric eigensolver did not converge");

    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = a(i, i);
    std::sort(out.begin(), out.end());
    return out;
}

template <std::size_t N>
double spectral_norm(const SquareMatrix<N>& m) {
    for (double x : m.m) {
        if (!std::isfinite(x)) throw NumericalError("spectral_norm: non-finite entry");
    }
    const double scale = m.max_abs();
    if (scale == 0.0) return 0.0;
    // Scaling keeps M^T M well inside the double range.
    const SquareMatrix<N> s = m * (1.0 / scale);
    const auto eig = symmetric_eigenvalues(s.transpose() * s);
    return scale * std::sqrt(std::max(eig.back(), 0.0));
}

template <std::size_t N>
SquareMatrix<N> matrix_exp(const SquareMatrix<N>& m, double s) {
    // Frobenius norm bounds the induced 2-norm from above.
    SquareMatrix<N> a = m * s;
    const double norm = a.frobenius_norm();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        a *= std::ldexp(1.0, -squarings);
    }

    SquareMatrix<N> result = SquareMatrix<N>::identity();
    SquareMatrix<N> term = SquareMatrix<N>::identity();
    for (int j = 1; j < 40; ++j) {
        term = term * a;
        term *= 1.0 / j;
        result += term;
        if (term.frobenius_norm() < 1e-16) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

namespace {

// Work matrix with 1-based indexing, sized (n+1)^2, for the EISPACK-style loops.
template <std::size_t N>
struct OneBased {
    std::array<double, (N + 1) * (N + 1)> d{};
    double& operator()(std::size_t i, std::size_t j) { return d[i * (N + 1) + j]; }
};

template <std::size_t N>
void balance(OneBased<N>& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 1; i <= N; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 1; j <= N; ++j) {
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix;
                double f = 1.0;
                const double s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    g = 1.0 / f;
                    for (std::size_t j = 1; j <= N; ++j) a(i, j) *= g;
                    for (std::size_t j = 1; j <= N; ++j) a(j, i) *= f;
                }
            }
        }
    }
}

// Reduction to upper Hessenberg form by stabilized elementary similarity transforms.
template <std::size_t N>
void to_hessenberg(OneBased<N>& a) {
    for (std::size_t m = 2; m < N; ++m) {
        double x = 0.0;
        std::size_t i = m;
        for (std::size_t j = m; j <= N; ++j) {
            if (std::abs(a(j, m - 1)) > std::abs(x)) {
                x = a(j, m - 1);
                i = j;
            }
        }
        if (i != m) {
            for (std::size_t j = m - 1; j <= N; ++j) std::swap(a(i, j), a(m, j));
            for (std::size_t j = 1; j <= N; ++j) std::swap(a(j, i), a(j, m));
        }
        if (x != 0.0) {
            for (i = m + 1; i <= N; ++i) {
                double y = a(i, m - 1);
                if (y != 0.0) {
                    y /= x;
                    a(i, m - 1) = y;
                    for (std::size_t j = m; j <= N; ++j) a(i, j) -= y * a(m, j);
                    for (std::size_t j = 1; j <= N; ++j) a(j, m) += y * a(j, i);
                }
            }
        }
    }
    // Clear the multipliers stored below the subdiagonal.
    for (std::size_t i = 3; i <= N; ++i)
        for (std::size_t j = 1; j + 1 < i; ++j) a(i, j) = 0.0;
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix.
template <std::size_t N>
std::vector<std::complex<double>> hessenberg_qr(OneBased<N>& a) {
    constexpr int kMaxIterationsPerRoot = 60;
    std::array<double, N + 1> wr{};
    std::array<double, N + 1> wi{};

    double anorm = 0.0;
    for (std::size_t i = 1; i <= N; ++i)
        for (std::size_t j = std::max<std::size_t>(i - 1, 1); j <= N; ++j) anorm += std::abs(a(i, j));

    int nn = static_cast<int>(N);
    double t = 0.0;
    while (nn >= 1) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 2; --l) {
                double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) + s == s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                --nn;
            } else {
                double y = a(nn - 1, nn - 1);
                double w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    const double p = 0.5 * (y - x);
                    const double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                        wi[nn - 1] = wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if (its == kMaxIterationsPerRoot) {
                        throw NumericalError("eigenvalues: QR iteration did not converge");
                    }
                    if (its % 10 == 0 && its > 0) {
                        // Exceptional shift.
                        t += x;
                        for (int i = 1; i <= nn; ++i) a(i, i) -= x;
                        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    double p = 0.0;
                    double q = 0.0;
                    double r = 0.0;
                    double z = 0.0;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        double s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
                        if (u + v == v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k != nn - 1) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }

    std::vector<std::complex<double>> out;
    out.reserve(N);
    for (std::size_t i = 1; i <= N; ++i) out.emplace_back(wr[i], wi[i]);
    return out;
}

}  // namespace

template <std::size_t N>
std::vector<std::complex<double>> eigenvalues(const SquareMatrix<N>& m) {
    OneBased<N> a;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            if (!std::isfinite(m(r, c))) throw NumericalError("eigenvalues: non-finite entry");
            a(r + 1, c + 1) = m(r, c);
        }
    balance(a);
    to_hessenberg(a);
    return hessenberg_qr(a);
}

template <std::size_t N>
SquareMatrix<N> solve(const SquareMatrix<N>& a_in, const SquareMatrix<N>& b_in) {
    SquareMatrix<N> a = a_in;
    SquareMatrix<N> b = b_in;
    const double scale = a.max_abs();
    if (scale == 0.0) throw NumericalError("solve: zero matrix");
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= 1e-13 * scale) throw NumericalError("solve: matrix is numerically singular");
        if (piv != col) {
            for (std::size_t c = 0; c < N; ++c) {
                std::swap(a(piv, c), a(col, c));
                std::swap(b(piv, c), b(col, c));
            }
        }
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t c = col; c < N; ++c) a(r, c) -= f * a(col, c);
            for (std::size_t c = 0; c < N; ++c) b(r, c) -= f * b(col, c);
        }
    }
    SquareMatrix<N> x;
    for (std::size_t c = 0; c < N; ++c) {
        for (std::size_t ri = N; ri-- > 0;) {
            double s = b(ri, c);
            for (std::size_t k = ri + 1; k < N; ++k) s -= a(ri, k) * x(k, c);
            x(ri, c) = s / a(ri, ri);
        }
    }
    return x;
}

double multiset_distance(std::span<const std::complex<double>> lhs, std::span<const std::complex<double>> rhs) {
    if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(rhs.size(), false);
    double worst = 0.0;
    for (const auto& z : lhs) {
        std::size_t best = rhs.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(z - rhs[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_d);
    }
    return worst;
}

template std::array<double, 3> symmetric_eigenvalues(const SquareMatrix<3>&);
template std::array<double, 9> symmetric_eigenvalues(const SquareMatrix<9>&);
template double spectral_norm(const SquareMatrix<3>&);
template double spectral_norm(const SquareMatrix<9>&);
template SquareMatrix<3> matrix_exp(const SquareMatrix<3>&, double);
template SquareMatrix<9> matrix_exp(const SquareMatrix<9>&, double);
template std::vector<std::complex<double>> eigenvalues(const SquareMatrix<3>&);
template std::vector<std::complex<double>> eigenvalues(const SquareMatrix<9>&);
template SquareMatrix<3> solve(const SquareMatrix<3>&, const SquareMatrix<3>&);
template SquareMatrix<9> solve(const SquareMatrix<9>&, const SquareMatrix<9>&);

}  // namespace gyroless
