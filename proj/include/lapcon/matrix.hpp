#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "lapcon/error.hpp"
#include "lapcon/scalar.hpp"

namespace lapcon {

template <MatrixScalar T>
class Vector;

/// Dense row-major matrix over an exact or floating scalar backend.
template <MatrixScalar T>
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, scalar_traits<T>::zero()) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged initializer rows");
            for (const auto& x : row) data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::one();
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if constexpr (scalar_traits<T>::is_exact) {
                    if (aik.is_zero()) continue;
                } else {
                    if (aik == 0.0) continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = s * a.data_[i];
        return r;
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    [[nodiscard]] T trace() const {
        T t = scalar_traits<T>::zero();
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    [[nodiscard]] Vector<T> column(std::size_t j) const;
    [[nodiscard]] Vector<T> row_vector(std::size_t i) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;

    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionMismatch("matrix shape mismatch");
    }
};

template <MatrixScalar T>
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n) : data_(n, scalar_traits<T>::zero()) {}
    Vector(std::initializer_list<T> init) : data_(init) {}
    explicit Vector(std::vector<T> entries) : data_(std::move(entries)) {}

    static Vector ones(std::size_t n) {
        Vector v(n);
        for (auto& x : v.data_) x = scalar_traits<T>::one();
        return v;
    }

    static Vector unit(std::size_t n, std::size_t i) {
        Vector v(n);
        v[i] = scalar_traits<T>::one();
        return v;
    }

    [[nodiscard]] std::size_t size() const { return data_.size(); }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }
    [[nodiscard]] const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Vector& a, const Vector& b) { return a.data_ == b.data_; }

    friend Vector operator+(const Vector& a, const Vector& b) {
        check_same_size(a, b);
        Vector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    }

    friend Vector operator-(const Vector& a, const Vector& b) {
        check_same_size(a, b);
        Vector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
        return r;
    }

    friend Vector operator*(const T& s, const Vector& a) {
        Vector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
        return r;
    }

private:
    std::vector<T> data_;

    static void check_same_size(const Vector& a, const Vector& b) {
        if (a.size() != b.size()) throw DimensionMismatch("vector length mismatch");
    }
};

template <MatrixScalar T>
Vector<T> Matrix<T>::column(std::size_t j) const {
    Vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

template <MatrixScalar T>
Vector<T> Matrix<T>::row_vector(std::size_t i) const {
    Vector<T> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

template <MatrixScalar T>
Vector<T> operator*(const Matrix<T>& m, const Vector<T>& v) {
    if (m.cols() != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
    Vector<T> r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        T acc = scalar_traits<T>::zero();
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

/// Induced infinity norm: max absolute row sum.
template <MatrixScalar T>
double inf_norm(const Matrix<T>& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += scalar_traits<T>::to_double(scalar_traits<T>::abs(a(i, j)));
        best = std::max(best, s);
    }
    return best;
}

template <MatrixScalar T>
double inf_norm(const Vector<T>& v) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        best = std::max(best, scalar_traits<T>::to_double(scalar_traits<T>::abs(v[i])));
    return best;
}

template <MatrixScalar T>
double frobenius_norm(const Matrix<T>& a) {
    T acc = scalar_traits<T>::zero();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
    return std::sqrt(scalar_traits<T>::to_double(acc));
}

namespace detail {

// Pivot scan for one elimination column. Exact backend takes the first
// nonzero entry; float takes the largest magnitude above the threshold.
template <MatrixScalar T>
std::ptrdiff_t find_pivot(const Matrix<T>& m, std::size_t from_row, std::size_t col,
                          double float_threshold) {
    if constexpr (scalar_traits<T>::is_exact) {
        for (std::size_t i = from_row; i < m.rows(); ++i)
            if (!m(i, col).is_zero()) return static_cast<std::ptrdiff_t>(i);
        return -1;
    } else {
        std::ptrdiff_t best = -1;
        double best_mag = float_threshold;
        for (std::size_t i = from_row; i < m.rows(); ++i) {
            double mag = std::fabs(m(i, col));
            if (mag > best_mag) {
                best_mag = mag;
                best = static_cast<std::ptrdiff_t>(i);
            }
        }
        return best;
    }
}

template <MatrixScalar T>
void swap_rows(Matrix<T>& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// Reduced row echelon form in place. Returns the pivot columns.
// `scale` is the infinity norm of the original matrix (float thresholds).
template <MatrixScalar T>
std::vector<std::size_t> rref(Matrix<T>& m, double pivot_rel_tol, double scale) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    const double threshold = scalar_traits<T>::is_exact ? 0.0 : pivot_rel_tol * scale;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::ptrdiff_t p = find_pivot(m, r, c, threshold);
        if (p < 0) continue;
        swap_rows(m, r, static_cast<std::size_t>(p));
        T inv_pivot = scalar_traits<T>::one() / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = inv_pivot * m(r, j);
        m(r, c) = scalar_traits<T>::one();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            T f = m(i, c);
            if constexpr (scalar_traits<T>::is_exact) {
                if (f.is_zero()) continue;
            } else {
                if (f == 0.0) continue;
            }
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(r, j);
            m(i, c) = scalar_traits<T>::zero();
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Matrix inverse by Gauss-Jordan elimination. Exact backend: exact result,
/// SingularMatrix when no nonzero pivot exists. Float: partial pivoting,
/// SingularMatrix when the best pivot falls below 1e-12 * ||A||_inf.
template <MatrixScalar T>
Matrix<T> invert(const Matrix<T>& a) {
    if (!a.is_square()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = a.rows();
    const double scale = scalar_traits<T>::is_exact ? 0.0 : std::max(inf_norm(a), 1e-300);
    Matrix<T> work(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) work(i, j) = a(i, j);
        work(i, n + i) = scalar_traits<T>::one();
    }
    auto pivots = detail::rref(work, 1e-12, scale);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw SingularMatrix("matrix is singular");
    Matrix<T> inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = work(i, n + j);
    return inv;
}

/// Rank by elimination. Float backend: a row counts as null when its largest
/// entry after elimination is below 1e-9 * ||A||_inf.
template <MatrixScalar T>
std::size_t rank(const Matrix<T>& a) {
    const double scale = scalar_traits<T>::is_exact ? 0.0 : std::max(inf_norm(a), 1e-300);
    Matrix<T> work = a;
    return detail::rref(work, 1e-9, scale).size();
}

/// Basis of the null space, returned as the columns of an n x nullity matrix.
template <MatrixScalar T>
Matrix<T> nullspace(const Matrix<T>& a) {
    const double scale = scalar_traits<T>::is_exact ? 0.0 : std::max(inf_norm(a), 1e-300);
    Matrix<T> work = a;
    auto pivots = detail::rref(work, 1e-9, scale);
    std::vector<std::size_t> free_cols;
    {
        std::size_t pi = 0;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (pi < pivots.size() && pivots[pi] == c) {
                ++pi;
            } else {
                free_cols.push_back(c);
            }
        }
    }
    Matrix<T> basis(a.cols(), free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        basis(fc, k) = scalar_traits<T>::one();
        for (std::size_t pi = 0; pi < pivots.size(); ++pi)
            basis(pivots[pi], k) = scalar_traits<T>::zero() - work(pi, fc);
    }
    return basis;
}

/// Index of a square matrix: the smallest k with rank(A^{k+1}) = rank(A^k).
/// Zero for nonsingular matrices; at most n.
template <MatrixScalar T>
std::size_t matrix_index(const Matrix<T>& a) {
    if (!a.is_square()) throw DimensionMismatch("matrix index of non-square matrix");
    const std::size_t n = a.rows();
    std::size_t prev_rank = n;  // rank of A^0 = I
    Matrix<T> power = Matrix<T>::identity(n);
    for (std::size_t k = 0; k <= n; ++k) {
        power = power * a;
        std::size_t r = rank(power);
        if (r == prev_rank) return k;
        prev_rank = r;
    }
    return n;  // rank must stabilize by k = n
}

/// Characteristic polynomial coefficients, leading first:
/// det(xI - A) = c[0] x^n + c[1] x^{n-1} + ... + c[n], c[0] = 1.
/// Faddeev-LeVerrier recursion; exact in the rational backend, which exposes
/// this instead of eigenvalue extraction.
template <MatrixScalar T>
std::vector<T> characteristic_polynomial(const Matrix<T>& a) {
    if (!a.is_square()) throw DimensionMismatch("characteristic polynomial of non-square matrix");
    const std::size_t n = a.rows();
    std::vector<T> coeffs{scalar_traits<T>::one()};
    Matrix<T> m = Matrix<T>::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<T> am = a * m;
        T c = (scalar_traits<T>::zero() - am.trace()) /
              scalar_traits<T>::from_int(static_cast<std::int64_t>(k));
        coeffs.push_back(c);
        m = am;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c;
    }
    return coeffs;
}

inline Matrix<double> to_float(const Matrix<Rational>& a) {
    Matrix<double> r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).to_double();
    return r;
}

inline Vector<double> to_float(const Vector<Rational>& v) {
    Vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].to_double();
    return r;
}

}  // namespace lapcon
