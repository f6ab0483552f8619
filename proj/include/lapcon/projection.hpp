#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "lapcon/error.hpp"
#include "lapcon/laplacian.hpp"
#include "lapcon/matrix.hpp"

namespace lapcon {

/// Default representative selection: the smallest vertex of each final
/// class. The projector is invariant under the choice, so this is cosmetic.
template <MatrixScalar T>
std::vector<int> default_final_class_representatives(const LaplacianSystem<T>& sys) {
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(sys.degeneracy()));
    for (int ci : sys.structure().final_classes)
        chosen.push_back(sys.structure().components[static_cast<std::size_t>(ci)].front());
    return chosen;
}

/// Basis matrix of the consensus domain R(L) + span(1): the all-ones column
/// followed by the columns of L except one representative column per final
/// class, in ascending column order. Shape n x (n - d + 1), full column rank.
template <MatrixScalar T>
Matrix<T> consensus_basis(const LaplacianSystem<T>& sys, const std::vector<int>& chosen) {
    const std::size_t n = sys.size();
    const auto& st = sys.structure();
    if (chosen.size() != static_cast<std::size_t>(sys.degeneracy()))
        throw InvalidInput("need exactly one representative per final class");
    std::vector<bool> class_seen(st.components.size(), false);
    std::vector<bool> drop(n, false);
    for (int v : chosen) {
        if (v < 0 || static_cast<std::size_t>(v) >= n)
            throw InvalidInput("representative vertex out of range");
        int ci = st.component_of[static_cast<std::size_t>(v)];
        if (!st.is_final(ci))
            throw InvalidInput("representative vertex is not in a final class");
        if (class_seen[static_cast<std::size_t>(ci)])
            throw InvalidInput("two representatives from the same final class");
        class_seen[static_cast<std::size_t>(ci)] = true;
        drop[static_cast<std::size_t>(v)] = true;
    }
    Matrix<T> u(n, n - chosen.size() + 1);
    for (std::size_t i = 0; i < n; ++i) u(i, 0) = scalar_traits<T>::one();
    std::size_t out_col = 1;
    for (std::size_t c = 0; c < n; ++c) {
        if (drop[c]) continue;
        for (std::size_t i = 0; i < n; ++i) u(i, out_col) = sys.laplacian()(i, c);
        ++out_col;
    }
    return u;
}

template <MatrixScalar T>
Matrix<T> consensus_basis(const LaplacianSystem<T>& sys) {
    return consensus_basis(sys, default_final_class_representatives(sys));
}

/// Orthogonal projector onto the column space of U: S = U (U^T U)^{-1} U^T.
/// Symmetric and idempotent; exact in the rational backend.
template <MatrixScalar T>
Matrix<T> orthogonal_projector(const Matrix<T>& u) {
    Matrix<T> ut = u.transpose();
    Matrix<T> gram = ut * u;
    Matrix<T> gram_inv;
    try {
        gram_inv = invert(gram);
    } catch (const SingularMatrix&) {
        throw SingularMatrix("projector basis is rank deficient");
    }
    return u * gram_inv * ut;
}

/// Projector onto the consensus domain of the system, with the default
/// representative choice.
template <MatrixScalar T>
Matrix<T> consensus_projector(const LaplacianSystem<T>& sys) {
    return orthogonal_projector(consensus_basis(sys));
}

/// Membership test for the consensus domain: x is kept fixed by S.
/// Exact backend compares exactly (tol ignored); float uses
/// ||Sx - x||_inf <= tol * ||x||_inf.
template <MatrixScalar T>
bool in_consensus_domain(const LaplacianSystem<T>& sys, const Vector<T>& x, double tol = 1e-9) {
    if (x.size() != sys.size()) throw DimensionMismatch("vector length mismatch");
    Matrix<T> s = consensus_projector(sys);
    Vector<T> sx = s * x;
    if constexpr (scalar_traits<T>::is_exact) {
        (void)tol;
        return sx == x;
    } else {
        return inf_norm(sx - x) <= tol * inf_norm(x);
    }
}

/// Projected initial state: the one-shot correction Sx0.
template <MatrixScalar T>
Vector<T> project_initial(const Matrix<T>& s, const Vector<T>& x0) {
    return s * x0;
}

/// Projected pooling matrix PS: unit row sums, not necessarily stochastic
/// (entries may be negative).
template <MatrixScalar T>
Matrix<T> projected_degroot_matrix(const Matrix<T>& p, const Matrix<T>& s) {
    return p * s;
}

/// Protocol matrix of the one-system form of the projection method:
/// tau^{-1} (I - S) + L S. Zero row sums; generally not a Laplacian.
template <MatrixScalar T>
Matrix<T> projected_laplacian(const LaplacianSystem<T>& sys, const Matrix<T>& s, const T& tau) {
    if (!sys.tau_in_range(tau))
        throw TauOutOfRange("tau must satisfy 0 < tau <= 1/max_i sum_j a_ij");
    const std::size_t n = sys.size();
    if (s.rows() != n || s.cols() != n) throw DimensionMismatch("projector shape mismatch");
    T inv_tau = scalar_traits<T>::one() / tau;
    Matrix<T> ls = sys.laplacian() * s;
    Matrix<T> result(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T identity_part = i == j ? scalar_traits<T>::one() : scalar_traits<T>::zero();
            result(i, j) = inv_tau * (identity_part - s(i, j)) + ls(i, j);
        }
    return result;
}

/// The quasi-consensus map: eigenprojection times projector. Rank one; every
/// initial state is sent to a consensus vector.
template <MatrixScalar T>
Matrix<T> quasi_consensus_map(const Matrix<T>& eigenprojection, const Matrix<T>& s) {
    return eigenprojection * s;
}

/// How far the projected protocol matrix sits from L, with the closed-form
/// split ||M(tau) - L||_E^2 = tau^{-2} trace(I-S) + trace((LS-L)(S L^T - L^T)).
struct ApproximationError {
    double norm = 0.0;            // ||M(tau) - L||_E, computed directly
    double projector_term = 0.0;  // tau^{-2} trace(I - S)
    double constant_term = 0.0;   // trace((LS - L)(S L^T - L^T))
};

template <MatrixScalar T>
ApproximationError approximation_error(const LaplacianSystem<T>& sys, const Matrix<T>& s,
                                       const T& tau) {
    if (!(tau > scalar_traits<T>::zero())) throw TauOutOfRange("tau must be positive");
    const std::size_t n = sys.size();
    T inv_tau = scalar_traits<T>::one() / tau;
    Matrix<T> ls = sys.laplacian() * s;
    Matrix<T> diff(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T identity_part = i == j ? scalar_traits<T>::one() : scalar_traits<T>::zero();
            diff(i, j) = inv_tau * (identity_part - s(i, j)) + ls(i, j) - sys.laplacian()(i, j);
        }
    ApproximationError e;
    e.norm = frobenius_norm(diff);
    T trace_complement = scalar_traits<T>::from_int(static_cast<std::int64_t>(n)) - s.trace();
    e.projector_term = scalar_traits<T>::to_double(inv_tau * inv_tau * trace_complement);
    Matrix<T> residual = ls - sys.laplacian();  // LS - L
    e.constant_term = scalar_traits<T>::to_double((residual * residual.transpose()).trace());
    return e;
}

/// Everything the projection method needs for one (system, tau) pair.
template <MatrixScalar T>
struct ProjectionBundle {
    Matrix<T> basis;            // U
    Matrix<T> projector;        // S
    T tau;
    Matrix<T> pooling;          // PS
    Matrix<T> protocol_matrix;  // tau^{-1}(I-S) + LS
    Matrix<T> quasi_map;        // (eigenprojection of L) * S
};

template <MatrixScalar T>
ProjectionBundle<T> make_projection_bundle(const LaplacianSystem<T>& sys, const T& tau,
                                           const std::vector<int>& chosen) {
    ProjectionBundle<T> b;
    b.basis = consensus_basis(sys, chosen);
    b.projector = orthogonal_projector(b.basis);
    b.tau = tau;
    b.pooling = projected_degroot_matrix(degroot_matrix(sys, tau), b.projector);
    b.protocol_matrix = projected_laplacian(sys, b.projector, tau);
    b.quasi_map = quasi_consensus_map(sys.eigenprojection(), b.projector);
    return b;
}

template <MatrixScalar T>
ProjectionBundle<T> make_projection_bundle(const LaplacianSystem<T>& sys, const T& tau) {
    return make_projection_bundle(sys, tau, default_final_class_representatives(sys));
}

}  // namespace lapcon
