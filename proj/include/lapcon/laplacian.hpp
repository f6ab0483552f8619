#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "lapcon/digraph.hpp"
#include "lapcon/error.hpp"
#include "lapcon/matrix.hpp"

namespace lapcon {

/// Exact eigenprojection at eigenvalue 0 for an index-1 matrix: the projection
/// onto N(M) along R(M), computed as X (Y^T X)^{-1} Y^T from null-space bases
/// X of M and Y of M^T. Throws InvalidInput when ind M != 1.
template <MatrixScalar T>
Matrix<T> eigenprojection_nullspace(const Matrix<T>& m) {
    if (!m.is_square()) throw DimensionMismatch("eigenprojection of non-square matrix");
    if (matrix_index(m) != 1)
        throw InvalidInput("null-space eigenprojection requires a matrix of index 1");
    Matrix<T> x = nullspace(m);
    Matrix<T> y = nullspace(m.transpose());
    Matrix<T> yt = y.transpose();
    return x * invert(yt * x) * yt;
}

/// Float eigenprojection of a Laplacian via the resolvent limit
/// J = lim (I + tau L)^{-1}. The base resolvent at tau0 = 1/||L||_inf is
/// repeatedly squared -- (I + tau0 L)^{-2^k} has the same limit and stays
/// well-conditioned, unlike evaluating the resolvent at huge tau directly --
/// until successive iterates agree entrywise below 1e-12 (cap 60 squarings).
inline Matrix<double> eigenprojection_resolvent(const Matrix<double>& laplacian,
                                                double entry_tolerance = 1e-12,
                                                int max_doublings = 60) {
    if (!laplacian.is_square())
        throw DimensionMismatch("eigenprojection of non-square matrix");
    const std::size_t n = laplacian.rows();
    const double norm = inf_norm(laplacian);
    const double tau0 = norm > 0.0 ? 1.0 / norm : 1.0;
    Matrix<double> base = Matrix<double>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) base(i, j) += tau0 * laplacian(i, j);
    Matrix<double> r = invert(base);
    for (int k = 0; k < max_doublings; ++k) {
        Matrix<double> next = r * r;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                diff = std::max(diff, std::fabs(next(i, j) - r(i, j)));
        r = std::move(next);
        if (diff < entry_tolerance) return r;
    }
    throw NotConverged("resolvent eigenprojection did not converge");
}

/// Dependency matrix A, its Laplacian L = diag(A 1) - A, and the component
/// structure of the dependency digraph. Immutable after construction; the
/// eigenprojection is computed lazily, once.
template <MatrixScalar T>
class LaplacianSystem {
public:
    LaplacianSystem(Matrix<T> dependency, Matrix<T> laplacian, ComponentStructure structure,
                    T max_row_sum)
        : dependency_(std::move(dependency)),
          laplacian_(std::move(laplacian)),
          structure_(std::move(structure)),
          max_row_sum_(std::move(max_row_sum)),
          cache_(std::make_shared<Cache>()) {}

    [[nodiscard]] std::size_t size() const { return laplacian_.rows(); }
    [[nodiscard]] const Matrix<T>& dependency() const { return dependency_; }
    [[nodiscard]] const Matrix<T>& laplacian() const { return laplacian_; }
    [[nodiscard]] const ComponentStructure& structure() const { return structure_; }

    /// Number of final classes = multiplicity of the zero eigenvalue of L.
    [[nodiscard]] int degeneracy() const { return structure_.final_class_count; }

    /// The DeGroot stochasticity bound is (max_i sum_{j != i} a_ij)^{-1};
    /// it is unbounded when A has no positive entry.
    [[nodiscard]] bool tau_bounded() const { return max_row_sum_ > scalar_traits<T>::zero(); }

    [[nodiscard]] T tau_max() const {
        if (!tau_bounded()) throw InvalidInput("tau is unbounded for a zero dependency matrix");
        return scalar_traits<T>::one() / max_row_sum_;
    }

    [[nodiscard]] bool tau_in_range(const T& tau) const {
        if (!(tau > scalar_traits<T>::zero())) return false;
        if (!tau_bounded()) return true;
        if constexpr (scalar_traits<T>::is_exact) {
            return !(tau * max_row_sum_ > scalar_traits<T>::one());
        } else {
            // 1.0/rowsum * rowsum may land one ulp above 1 in float
            return tau * max_row_sum_ <= 1.0 + 16.0 * 1e-16;
        }
    }

    /// Eigenprojection of L at 0: exact null-space route for the rational
    /// backend, resolvent squaring for float. Computed once per system.
    [[nodiscard]] const Matrix<T>& eigenprojection() const {
        std::call_once(cache_->flag, [this] {
            if constexpr (scalar_traits<T>::is_exact) {
                cache_->value = eigenprojection_nullspace(laplacian_);
            } else {
                cache_->value = eigenprojection_resolvent(laplacian_);
            }
        });
        return *cache_->value;
    }

private:
    struct Cache {
        std::once_flag flag;
        std::optional<Matrix<T>> value;
    };

    Matrix<T> dependency_;
    Matrix<T> laplacian_;
    ComponentStructure structure_;
    T max_row_sum_;
    std::shared_ptr<Cache> cache_;
};

namespace detail {

// Component structure needs arc presence only; weights are irrelevant here.
template <MatrixScalar T>
ComponentStructure dependency_structure(const Matrix<T>& a) {
    WeightedDigraph g(static_cast<int>(a.rows()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i == j) continue;
            bool positive;
            if constexpr (scalar_traits<T>::is_exact) {
                positive = a(i, j).sign() > 0;
            } else {
                positive = a(i, j) > 0.0;
            }
            if (positive) g.add_arc(static_cast<int>(i), static_cast<int>(j), Rational(1));
        }
    }
    return strongly_connected_components(g);
}

}  // namespace detail

/// Builds the Laplacian system from a dependency matrix (square, entries
/// nonnegative, zero diagonal).
template <MatrixScalar T>
LaplacianSystem<T> build_laplacian(const Matrix<T>& a) {
    if (!a.is_square()) throw InvalidInput("dependency matrix must be square");
    if (a.rows() == 0) throw InvalidInput("dependency matrix must be nonempty");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            bool negative, diag_nonzero;
            if constexpr (scalar_traits<T>::is_exact) {
                negative = a(i, j).sign() < 0;
                diag_nonzero = i == j && !a(i, j).is_zero();
            } else {
                negative = a(i, j) < 0.0;
                diag_nonzero = i == j && a(i, j) != 0.0;
            }
            if (negative) throw InvalidInput("dependency matrix entries must be nonnegative");
            if (diag_nonzero) throw InvalidInput("dependency matrix must have a zero diagonal");
        }
    }
    Matrix<T> lap(n, n);
    T max_row_sum = scalar_traits<T>::zero();
    for (std::size_t i = 0; i < n; ++i) {
        T row_sum = scalar_traits<T>::zero();
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            row_sum += a(i, j);
            lap(i, j) = scalar_traits<T>::zero() - a(i, j);
        }
        lap(i, i) = row_sum;
        if (row_sum > max_row_sum) max_row_sum = row_sum;
    }
    return LaplacianSystem<T>(a, std::move(lap), detail::dependency_structure(a),
                              std::move(max_row_sum));
}

/// DeGroot matrix P = I - tau L, row-stochastic exactly when
/// 0 < tau <= tau_max. Throws TauOutOfRange otherwise.
template <MatrixScalar T>
Matrix<T> degroot_matrix(const LaplacianSystem<T>& sys, const T& tau) {
    if (!sys.tau_in_range(tau))
        throw TauOutOfRange("tau must satisfy 0 < tau <= 1/max_i sum_j a_ij");
    const std::size_t n = sys.size();
    Matrix<T> p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            p(i, j) = scalar_traits<T>::zero() - tau * sys.laplacian()(i, j);
            if (i == j) p(i, j) += scalar_traits<T>::one();
        }
    return p;
}

/// Convenience overload of the exact eigenprojection for a system.
inline Matrix<Rational> eigenprojection_nullspace(const LaplacianSystem<Rational>& sys) {
    return eigenprojection_nullspace(sys.laplacian());
}

inline Matrix<double> eigenprojection_resolvent(const LaplacianSystem<double>& sys) {
    return eigenprojection_resolvent(sys.laplacian());
}

/// Cesaro limit lim (1/k) sum_{i<=k} P^i of a matrix with unit row sums.
///
/// The peripheral eigenvalues of a stochastic matrix are roots of unity, so
/// the power orbit becomes numerically periodic once the transient dies: for
/// some period s, ||P^k - P^{k-s}|| -> 0 geometrically. The Cesaro limit is
/// then the average of one late period (period 1 is plain power convergence).
/// A plain running average only approaches the limit at O(1/k), which cannot
/// reach entrywise 1e-10 within any practical term cap for periodic inputs;
/// it remains as the fallback when no period is detected. Landau(12) = 60,
/// so a 64-power window covers every stochastic matrix at desk scale.
inline Matrix<double> cesaro_limit(const Matrix<double>& p, std::size_t max_terms = 1000000) {
    if (!p.is_square()) throw DimensionMismatch("Cesaro limit of non-square matrix");
    const std::size_t n = p.rows();
    const double row_tol = 1e-9 * std::max(1.0, inf_norm(p));
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += p(i, j);
        if (std::fabs(s - 1.0) > row_tol)
            throw InvalidInput("Cesaro limit requires unit row sums");
    }

    constexpr std::size_t kWindow = 64;
    std::vector<Matrix<double>> window;  // last kWindow powers, oldest first
    window.reserve(kWindow + 1);
    Matrix<double> power = p;
    Matrix<double> sum(n, n);
    Matrix<double> comp(n, n);  // Kahan compensation for the fallback average
    Matrix<double> prev_avg(n, n);
    for (std::size_t k = 1; k <= max_terms; ++k) {
        // period scan against the stored window (smallest period wins)
        for (std::size_t s = 1; s <= window.size(); ++s) {
            const Matrix<double>& old = window[window.size() - s];
            double diff = 0.0;
            for (std::size_t i = 0; i < n && diff < 1e-11; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    diff = std::max(diff, std::fabs(power(i, j) - old(i, j)));
            if (diff < 1e-11) {
                Matrix<double> block = power;  // average P^{k-s+1} .. P^k
                for (std::size_t back = 1; back < s; ++back)
                    block = block + window[window.size() - back];
                return (1.0 / static_cast<double>(s)) * block;
            }
        }

        // fallback running average (Kahan-compensated)
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double y = power(i, j) - comp(i, j);
                double t = sum(i, j) + y;
                comp(i, j) = (t - sum(i, j)) - y;
                sum(i, j) = t;
            }
        }
        Matrix<double> avg = (1.0 / static_cast<double>(k)) * sum;
        if (k > 1 && inf_norm(avg - prev_avg) < 1e-10) return avg;
        prev_avg = std::move(avg);

        window.push_back(power);
        if (window.size() > kWindow) window.erase(window.begin());
        power = power * p;
    }
    throw NotConverged("Cesaro averaging hit the term cap");
}

}  // namespace lapcon
