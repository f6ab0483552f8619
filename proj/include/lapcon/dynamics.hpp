#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lapcon/eigen.hpp"
#include "lapcon/error.hpp"
#include "lapcon/matrix.hpp"

namespace lapcon {

/// The five protocol variants the simulator runs.
enum class ProtocolKind {
    BasicContinuous,      // xdot = -L x
    ProjectedContinuous,  // xdot = -L x from the projected initial state S x0
    LTildeContinuous,     // xdot = -(tau^{-1}(I-S) + LS) x
    DeGroot,              // y(k+1) = P y(k)
    DeGrootProjected,     // x(k) = P^k S x0, iterated as (PS)^k x0
};

inline const char* to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::BasicContinuous: return "basic";
        case ProtocolKind::ProjectedContinuous: return "projected";
        case ProtocolKind::LTildeContinuous: return "ltilde";
        case ProtocolKind::DeGroot: return "degroot";
        case ProtocolKind::DeGrootProjected: return "degroot-proj";
    }
    return "unknown";
}

inline ProtocolKind protocol_from_string(const std::string& name) {
    if (name == "basic") return ProtocolKind::BasicContinuous;
    if (name == "projected") return ProtocolKind::ProjectedContinuous;
    if (name == "ltilde") return ProtocolKind::LTildeContinuous;
    if (name == "degroot") return ProtocolKind::DeGroot;
    if (name == "degroot-proj") return ProtocolKind::DeGrootProjected;
    throw InvalidInput("unknown protocol: " + name);
}

/// One protocol run: checkpointed states, the final state, and convergence /
/// consensus verdicts. Discrete protocols also carry the running Cesaro
/// averages of the trajectory.
template <MatrixScalar T>
struct SimulationTrace {
    ProtocolKind kind = ProtocolKind::BasicContinuous;
    std::vector<double> times;  // checkpoint times; step indices when discrete
    std::vector<Vector<T>> states;
    bool converged = false;
    Vector<T> limit;  // last recorded state
    bool consensus = false;
    double consensus_tolerance = 1e-8;
    std::vector<Vector<T>> cesaro_states;  // discrete protocols only
    bool cesaro_converged = false;
};

/// max(x) - min(x) <= tol.
template <MatrixScalar T>
bool consensus_check(const Vector<T>& x, double tol) {
    if (x.size() == 0) return true;
    T lo = x[0], hi = x[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    return scalar_traits<T>::to_double(hi - lo) <= tol;
}

/// Geometric checkpoint grid tau * {1, 2, 4, ...} up to 2^16 tau.
inline std::vector<double> default_time_grid(double tau, int doublings = 16) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(doublings) + 1);
    double t = tau;
    for (int i = 0; i <= doublings; ++i) {
        times.push_back(t);
        t *= 2.0;
    }
    return times;
}

namespace detail {

inline void require_zero_row_sums(const Matrix<double>& m) {
    const double tol = 1e-9 * std::max(1.0, inf_norm(m));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
        if (std::fabs(s) > tol)
            throw InvalidInput("protocol matrix must have zero row sums");
    }
}

}  // namespace detail

/// Continuous protocol xdot = -M x evaluated at the given checkpoints via
/// the matrix exponential: x(t) = exp(-M t) x0. Convergence is declared when
/// the last two checkpoints agree within 1e-10 entrywise.
inline SimulationTrace<double> simulate_continuous(const Matrix<double>& m,
                                                   const Vector<double>& x0,
                                                   const std::vector<double>& times,
                                                   double consensus_tol = 1e-8,
                                                   double convergence_tol = 1e-10) {
    if (!m.is_square() || m.rows() != x0.size())
        throw DimensionMismatch("protocol matrix / state shape mismatch");
    if (times.empty()) throw InvalidInput("need at least one checkpoint");
    detail::require_zero_row_sums(m);
    double prev = -1.0;
    for (double t : times) {
        if (t < 0.0 || t <= prev) throw InvalidInput("checkpoints must be increasing and >= 0");
        prev = t;
    }
    SimulationTrace<double> trace;
    trace.kind = ProtocolKind::BasicContinuous;
    trace.times = times;
    trace.consensus_tolerance = consensus_tol;
    for (double t : times) trace.states.push_back(matrix_exponential(m, -t) * x0);
    trace.limit = trace.states.back();
    if (trace.states.size() >= 2) {
        const auto& last = trace.states[trace.states.size() - 1];
        const auto& prev_state = trace.states[trace.states.size() - 2];
        trace.converged = inf_norm(last - prev_state) < convergence_tol;
    }
    trace.consensus = consensus_check(trace.limit, consensus_tol);
    return trace;
}

/// Classical fixed-step 4th order integration of xdot = -M x. Exists as an
/// independent cross-check of the matrix-exponential path.
inline SimulationTrace<double> simulate_ode(const Matrix<double>& m, const Vector<double>& x0,
                                            double t_max, double dt,
                                            double consensus_tol = 1e-8) {
    if (!m.is_square() || m.rows() != x0.size())
        throw DimensionMismatch("protocol matrix / state shape mismatch");
    if (dt <= 0.0 || t_max < dt) throw InvalidInput("need dt > 0 and t_max >= dt");
    detail::require_zero_row_sums(m);
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt));
    if (steps > 10000000) throw SizeLimit("step count cap (1e7) exceeded");

    auto rhs = [&](const Vector<double>& x) {
        Vector<double> v = m * x;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = -v[i];
        return v;
    };

    SimulationTrace<double> trace;
    trace.kind = ProtocolKind::BasicContinuous;
    trace.consensus_tolerance = consensus_tol;
    const std::size_t stride = std::max<std::size_t>(1, steps / 1000);
    Vector<double> x = x0;
    double t = 0.0;
    trace.times.push_back(0.0);
    trace.states.push_back(x);
    for (std::size_t step = 1; step <= steps; ++step) {
        double h = std::min(dt, t_max - t);
        Vector<double> k1 = rhs(x);
        Vector<double> k2 = rhs(x + (h / 2.0) * k1);
        Vector<double> k3 = rhs(x + (h / 2.0) * k2);
        Vector<double> k4 = rhs(x + h * k3);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
        if (step % stride == 0 || step == steps) {
            trace.times.push_back(t);
            trace.states.push_back(x);
        }
    }
    trace.limit = x;
    if (trace.states.size() >= 2)
        trace.converged =
            inf_norm(trace.states.back() - trace.states[trace.states.size() - 2]) < 1e-10;
    trace.consensus = consensus_check(trace.limit, consensus_tol);
    return trace;
}

/// DeGroot iteration y(k) = P^k y(0) with the running Cesaro averages of the
/// trajectory. P needs unit row sums (the projected pooling matrix PS also
/// qualifies; it may have negative entries). Convergence of either sequence
/// is declared after 10 consecutive steps changing less than 1e-10.
template <MatrixScalar T>
SimulationTrace<T> degroot_iterate(const Matrix<T>& p, const Vector<T>& y0, std::size_t k_max,
                                   double consensus_tol = 1e-8, double convergence_tol = 1e-10) {
    if (!p.is_square() || p.rows() != y0.size())
        throw DimensionMismatch("pooling matrix / state shape mismatch");
    if (k_max < 1) throw InvalidInput("k_max must be at least 1");
    if (k_max > 1000000) throw SizeLimit("step cap (1e6) exceeded: the trace stores every step");
    const std::size_t n = y0.size();
    for (std::size_t i = 0; i < n; ++i) {
        T s = scalar_traits<T>::zero();
        for (std::size_t j = 0; j < n; ++j) s += p(i, j);
        if constexpr (scalar_traits<T>::is_exact) {
            if (!(s == scalar_traits<T>::one()))
                throw InvalidInput("pooling matrix must have unit row sums");
        } else {
            if (std::fabs(s - 1.0) > 1e-9 * std::max(1.0, inf_norm(p)))
                throw InvalidInput("pooling matrix must have unit row sums");
        }
    }

    SimulationTrace<T> trace;
    trace.kind = ProtocolKind::DeGroot;
    trace.consensus_tolerance = consensus_tol;
    Vector<T> y = y0;
    Vector<T> sum(n);
    std::vector<double> comp(n, 0.0);  // Kahan compensation (float backend)
    int state_run = 0, cesaro_run = 0;
    trace.times.push_back(0.0);
    trace.states.push_back(y);
    for (std::size_t k = 1; k <= k_max; ++k) {
        Vector<T> next = p * y;
        if constexpr (scalar_traits<T>::is_exact) {
            for (std::size_t i = 0; i < n; ++i) sum[i] += next[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double add = next[i] - comp[i];
                double t = sum[i] + add;
                comp[i] = (t - sum[i]) - add;
                sum[i] = t;
            }
        }
        Vector<T> avg = (scalar_traits<T>::one() / scalar_traits<T>::from_int(
                             static_cast<std::int64_t>(k))) * sum;
        double state_diff = inf_norm(next - y);
        state_run = state_diff < convergence_tol ? state_run + 1 : 0;
        if (!trace.cesaro_states.empty()) {
            double cesaro_diff = inf_norm(avg - trace.cesaro_states.back());
            cesaro_run = cesaro_diff < convergence_tol ? cesaro_run + 1 : 0;
        }
        y = std::move(next);
        trace.times.push_back(static_cast<double>(k));
        trace.states.push_back(y);
        trace.cesaro_states.push_back(std::move(avg));
        if (state_run >= 10) trace.converged = true;
        if (cesaro_run >= 10) trace.cesaro_converged = true;
        if (trace.converged && trace.cesaro_converged) break;
    }
    trace.limit = trace.states.back();
    trace.consensus = consensus_check(trace.limit, consensus_tol);
    return trace;
}

/// The quasi-consensus state (eigenprojection * S) x0. Its components are
/// equal by construction (the map has rank one); the common value is
/// replicated into the result. Throws InvalidInput when the components
/// disagree, which signals an inconsistent eigenprojection / projector pair.
template <MatrixScalar T>
Vector<T> quasi_consensus_limit(const Matrix<T>& eigenprojection, const Matrix<T>& s,
                                const Vector<T>& x0) {
    if (eigenprojection.cols() != s.rows() || s.cols() != x0.size())
        throw DimensionMismatch("quasi-consensus shape mismatch");
    Vector<T> v = eigenprojection * (s * x0);
    const std::size_t n = v.size();
    if constexpr (scalar_traits<T>::is_exact) {
        for (std::size_t i = 1; i < n; ++i)
            if (!(v[i] == v[0]))
                throw InvalidInput("quasi-consensus components differ: inconsistent pair");
        Vector<T> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = v[0];
        return out;
    } else {
        double lo = v[0], hi = v[0], mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
            mean += v[i];
        }
        mean /= static_cast<double>(n);
        if (hi - lo > 1e-10 * std::max(1.0, inf_norm(x0)))
            throw InvalidInput("quasi-consensus components differ: inconsistent pair");
        Vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = mean;
        return out;
    }
}

}  // namespace lapcon
