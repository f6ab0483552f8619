#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "lapcon/error.hpp"
#include "lapcon/matrix.hpp"

namespace lapcon {

namespace detail {

/// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg(Matrix<double>& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    std::vector<double> v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm2 += a(i, k) * a(i, k);
        double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        double alpha = a(k + 1, k) >= 0.0 ? -norm : norm;
        double vtv = norm2 - 2.0 * alpha * a(k + 1, k) + alpha * alpha;
        if (vtv == 0.0) continue;
        for (std::size_t i = 0; i <= k; ++i) v[i] = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        const double beta = 2.0 / vtv;
        // A <- (I - beta v v^T) A
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        // A <- A (I - beta v v^T)
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroys it).
/// Classic EISPACK hqr scheme with exceptional shifts.
inline std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix<double>& a,
                                                                std::size_t iteration_cap) {
    const int n = static_cast<int>(a.rows());
    std::vector<std::complex<double>> roots;
    roots.reserve(static_cast<std::size_t>(n));
    const double eps = std::numeric_limits<double>::epsilon();

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(a(i, j));
    if (anorm == 0.0) {
        roots.assign(static_cast<std::size_t>(n), {0.0, 0.0});
        return roots;
    }

    int nn = n - 1;
    double t = 0.0;  // accumulated exceptional shifts
    std::size_t total_its = 0;
    while (nn >= 0) {
        int its = 0;
        while (true) {
            int l = 0;
            for (l = nn; l >= 1; --l) {
                double s = std::fabs(a(l - 1, l - 1)) + std::fabs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {  // one real root deflated
                roots.emplace_back(x + t, 0.0);
                --nn;
                break;
            }
            double y = a(nn - 1, nn - 1);
            double w = a(nn, nn - 1) * a(nn - 1, nn);
            if (l == nn - 1) {  // 2x2 block deflated
                double p = 0.5 * (y - x);
                double q = p * p + w;
                double z = std::sqrt(std::fabs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + (p >= 0.0 ? z : -z);
                    roots.emplace_back(x + z, 0.0);
                    roots.emplace_back(z != 0.0 ? x - w / z : x + z, 0.0);
                } else {
                    roots.emplace_back(x + p, z);
                    roots.emplace_back(x + p, -z);
                }
                nn -= 2;
                break;
            }
            if (total_its++ >= iteration_cap)
                throw NotConverged("eigenvalue QR iteration cap exceeded");
            if (its == 10 || its == 20) {
                t += x;
                for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                double s = std::fabs(a(nn, nn - 1)) + std::fabs(a(nn - 1, nn - 2));
                y = x = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++its;

            double p = 0.0, q = 0.0, r = 0.0, z = 0.0, s = 0.0;
            int m = 0;
            for (m = nn - 2; m >= l; --m) {
                z = a(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                q = a(m + 1, m + 1) - z - r - s;
                r = a(m + 2, m + 1);
                s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                double u = std::fabs(a(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                double v = std::fabs(p) *
                           (std::fabs(a(m - 1, m - 1)) + std::fabs(z) + std::fabs(a(m + 1, m + 1)));
                if (u <= eps * v) break;
            }
            for (int i = m + 2; i <= nn; ++i) {
                a(i, i - 2) = 0.0;
                if (i != m + 2) a(i, i - 3) = 0.0;
            }
            for (int k = m; k <= nn - 1; ++k) {  // bulge chase
                if (k != m) {
                    p = a(k, k - 1);
                    q = a(k + 1, k - 1);
                    r = (k + 2 <= nn) ? a(k + 2, k - 1) : 0.0;
                    x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                double mag = std::sqrt(p * p + q * q + r * r);
                s = (p >= 0.0 ? mag : -mag);
                if (s == 0.0) continue;
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
                    if (k + 2 <= nn) {
                        p += r * a(k + 2, j);
                        a(k + 2, j) -= p * z;
                    }
                    a(k + 1, j) -= p * y;
                    a(k, j) -= p * x;
                }
                int mmin = nn < k + 3 ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {
                    p = x * a(i, k) + y * a(i, k + 1);
                    if (k + 2 <= nn) {
                        p += z * a(i, k + 2);
                        a(i, k + 2) -= p * r;
                    }
                    a(i, k + 1) -= p * q;
                    a(i, k) -= p;
                }
            }
        }
    }
    return roots;
}

}  // namespace detail

/// All eigenvalues with algebraic multiplicity, sorted by (real, imag).
/// Throws NotConverged past the iteration cap.
inline std::vector<std::complex<double>> eigenvalues(const Matrix<double>& a,
                                                     std::size_t iteration_cap = 10000) {
    if (!a.is_square()) throw DimensionMismatch("eigenvalues of non-square matrix");
    Matrix<double> h = a;
    detail::hessenberg(h);
    auto roots = detail::hessenberg_eigenvalues(h, iteration_cap);
    std::sort(roots.begin(), roots.end(), [](const auto& lhs, const auto& rhs) {
        if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
        return lhs.imag() < rhs.imag();
    });
    return roots;
}

/// Singular values via the eigenvalues of A A^T, descending. Roundoff
/// negatives are clamped to zero before the square root.
inline std::vector<double> singular_values(const Matrix<double>& a,
                                           std::size_t iteration_cap = 10000) {
    if (!a.is_square()) throw DimensionMismatch("singular values of non-square matrix");
    Matrix<double> gram = a * a.transpose();
    auto eigs = eigenvalues(gram, iteration_cap);
    std::vector<double> sv;
    sv.reserve(eigs.size());
    for (const auto& ev : eigs) sv.push_back(std::sqrt(std::max(ev.real(), 0.0)));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

/// exp(tA) by scaling and squaring: scale so ||tA/2^s||_inf <= 0.5,
/// run a 20-term Taylor series, then square s times.
inline Matrix<double> matrix_exponential(const Matrix<double>& a, double t = 1.0) {
    if (!a.is_square()) throw DimensionMismatch("exponential of non-square matrix");
    const std::size_t n = a.rows();
    Matrix<double> b = t * a;
    double norm = inf_norm(b);
    int s = 0;
    while (norm > 0.5) {
        norm /= 2.0;
        ++s;
    }
    const double scale = std::ldexp(1.0, -s);
    b = scale * b;
    Matrix<double> result = Matrix<double>::identity(n);
    Matrix<double> term = Matrix<double>::identity(n);
    for (int k = 1; k <= 20; ++k) {
        term = (1.0 / k) * (term * b);
        result = result + term;
    }
    for (int i = 0; i < s; ++i) result = result * result;
    return result;
}

}  // namespace lapcon
