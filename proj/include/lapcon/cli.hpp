#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lapcon/dynamics.hpp"
#include "lapcon/eigen.hpp"
#include "lapcon/error.hpp"
#include "lapcon/graph_io.hpp"
#include "lapcon/laplacian.hpp"
#include "lapcon/projection.hpp"

namespace lapcon::cli {

using nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

/// One loaded graph with both scalar backends. Exact mode is automatic for
/// n <= 10 (all file weights parse as rationals); larger instances fall back
/// to float with a warning, `force_float` skips exact mode entirely.
struct Instance {
    WeightedDigraph graph;
    bool exact = false;
    std::optional<LaplacianSystem<Rational>> exact_system;
    LaplacianSystem<double> float_system;
    std::string warning;
};

inline Instance make_instance(WeightedDigraph graph, bool force_float) {
    Matrix<Rational> a = graph.dependency_matrix();
    bool exact = !force_float && graph.vertex_count() <= kForestEnumerationLimit;
    std::string warning;
    if (!force_float && !exact)
        warning = "exact mode is limited to 10 vertices; falling back to float";
    std::optional<LaplacianSystem<Rational>> exact_system;
    if (exact) exact_system = build_laplacian(a);
    LaplacianSystem<double> float_system = build_laplacian(to_float(a));
    return Instance{std::move(graph), exact, std::move(exact_system), std::move(float_system),
                    std::move(warning)};
}

inline Instance load_instance(const std::string& path, bool force_float) {
    return make_instance(load_graph_file(path), force_float);
}

struct TauChoice {
    Rational exact{1};       // exact value in exact mode; display value otherwise
    double value = 1.0;      // what float-backed computations use
    bool is_default = false;
};

/// Resolves --tau: "max" picks the stochasticity bound, a number is
/// validated against it, absent means tau_max/2 (or 1 when unbounded).
inline TauChoice resolve_tau(const Instance& inst, const std::optional<std::string>& text) {
    const bool bounded = inst.float_system.tau_bounded();
    // the exact bound when available; float instances keep the exact rational
    // of the row sums, so no string round-trip can push tau past the bound
    Rational tau_max_exact(1);
    if (bounded) {
        if (inst.exact) {
            tau_max_exact = inst.exact_system->tau_max();
        } else {
            Rational max_row(0);
            const auto& a = inst.graph.dependency_matrix();
            for (std::size_t i = 0; i < a.rows(); ++i) {
                Rational row(0);
                for (std::size_t j = 0; j < a.cols(); ++j)
                    if (i != j) row += a(i, j);
                if (row > max_row) max_row = row;
            }
            tau_max_exact = Rational(1) / max_row;
        }
    }
    TauChoice choice;
    if (!text) {
        choice.exact = bounded ? tau_max_exact / Rational(2) : Rational(1);
        choice.is_default = true;
    } else if (*text == "max") {
        if (!bounded) throw TauOutOfRange("tau is unbounded: the dependency matrix is zero");
        choice.exact = tau_max_exact;
    } else {
        choice.exact = Rational::from_string(*text);
        if (!(choice.exact.sign() > 0)) throw TauOutOfRange("tau must be positive");
        if (bounded && choice.exact > tau_max_exact)
            throw TauOutOfRange("tau exceeds the stochasticity bound " +
                                tau_max_exact.to_string());
    }
    choice.value = choice.exact.to_double();
    return choice;
}

inline ordered_json complex_to_json(const std::complex<double>& z) {
    ordered_json j;
    j["re"] = std::stod(format_double(z.real()));
    j["im"] = std::stod(format_double(z.imag()));
    return j;
}

inline ordered_json vector_to_json(const Vector<Rational>& v) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < v.size(); ++i) arr.push_back(v[i].to_string());
    return arr;
}

inline ordered_json vector_to_json(const Vector<double>& v) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < v.size(); ++i) arr.push_back(std::stod(format_double(v[i])));
    return arr;
}

inline ordered_json components_to_json(const ComponentStructure& st) {
    ordered_json arr = ordered_json::array();
    for (const auto& comp : st.components) {
        ordered_json c = ordered_json::array();
        for (int v : comp) c.push_back(v + 1);  // 1-based in all I/O
        arr.push_back(std::move(c));
    }
    return arr;
}

inline ordered_json final_classes_to_json(const ComponentStructure& st) {
    ordered_json arr = ordered_json::array();
    for (int ci : st.final_classes) {
        ordered_json c = ordered_json::array();
        for (int v : st.components[static_cast<std::size_t>(ci)]) c.push_back(v + 1);
        arr.push_back(std::move(c));
    }
    return arr;
}

namespace detail {

inline void render_json_as_text(const ordered_json& doc, std::ostream& out, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& [key, value] : doc.items()) {
        if (value.is_object() && value.contains("entries")) {  // matrix block
            out << pad << key << " (" << value["backend"].get<std::string>() << "):\n";
            for (const auto& row : value["entries"]) {
                out << pad << " ";
                for (const auto& cell : row)
                    out << " " << (cell.is_string() ? cell.get<std::string>() : cell.dump());
                out << "\n";
            }
        } else if (value.is_object()) {
            out << pad << key << ":\n";
            render_json_as_text(value, out, indent + 1);
        } else if (value.is_array()) {
            out << pad << key << ":";
            for (const auto& item : value) out << " " << item.dump();
            out << "\n";
        } else if (value.is_string()) {
            out << pad << key << ": " << value.get<std::string>() << "\n";
        } else {
            out << pad << key << ": " << value.dump() << "\n";
        }
    }
}

inline void emit(const ordered_json& doc, bool as_json, std::ostream& out) {
    if (as_json) {
        out << doc.dump(2) << "\n";
    } else {
        render_json_as_text(doc, out);
    }
}

inline ordered_json eigenvalues_json(const Matrix<double>& m) {
    ordered_json arr = ordered_json::array();
    for (const auto& z : eigenvalues(m)) arr.push_back(complex_to_json(z));
    return arr;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string graph_path;
    bool force_float = false;
    bool json = false;
    std::optional<std::string> tau;
    std::vector<std::string> matrices;  // subset of L,J,S,P_tilde,L_tilde,JS or "all"
};

inline ordered_json analyze_report(const Instance& inst, const TauChoice& tau,
                                   const std::vector<std::string>& which) {
    ordered_json doc;
    const auto& st = inst.float_system.structure();
    doc["n"] = inst.graph.vertex_count();
    doc["backend"] = inst.exact ? "exact" : "float";
    if (!inst.warning.empty()) doc["warning"] = inst.warning;
    doc["components"] = components_to_json(st);
    doc["final_classes"] = final_classes_to_json(st);
    doc["d"] = st.final_class_count;
    doc["has_spanning_in_tree"] = st.final_class_count == 1;
    if (inst.float_system.tau_bounded()) {
        doc["tau_max"] = inst.exact ? inst.exact_system->tau_max().to_string()
                                    : format_double(inst.float_system.tau_max());
    } else {
        doc["tau_max"] = "unbounded";
    }
    doc["tau"] = tau.exact.to_string();
    doc["eigenvalues"] = detail::eigenvalues_json(inst.float_system.laplacian());

    std::vector<std::string> names = which;
    if (names.empty()) names = {"J"};
    if (std::find(names.begin(), names.end(), "all") != names.end())
        names = {"L", "J", "S", "P_tilde", "L_tilde", "JS"};

    ordered_json matrices;
    auto add = [&](const std::string& name, auto&& compute_exact, auto&& compute_float) {
        if (std::find(names.begin(), names.end(), name) == names.end()) return;
        if (inst.exact) {
            matrices[name] = matrix_to_json(compute_exact());
        } else {
            matrices[name] = matrix_to_json(compute_float());
        }
    };
    add(
        "L", [&] { return inst.exact_system->laplacian(); },
        [&] { return inst.float_system.laplacian(); });
    add(
        "J", [&] { return inst.exact_system->eigenprojection(); },
        [&] { return inst.float_system.eigenprojection(); });
    add(
        "S", [&] { return consensus_projector(*inst.exact_system); },
        [&] { return consensus_projector(inst.float_system); });
    add(
        "P_tilde",
        [&] {
            return projected_degroot_matrix(degroot_matrix(*inst.exact_system, tau.exact),
                                            consensus_projector(*inst.exact_system));
        },
        [&] {
            return projected_degroot_matrix(degroot_matrix(inst.float_system, tau.value),
                                            consensus_projector(inst.float_system));
        });
    add(
        "L_tilde",
        [&] {
            return projected_laplacian(*inst.exact_system,
                                       consensus_projector(*inst.exact_system), tau.exact);
        },
        [&] {
            return projected_laplacian(inst.float_system, consensus_projector(inst.float_system),
                                       tau.value);
        });
    add(
        "JS",
        [&] {
            return quasi_consensus_map(inst.exact_system->eigenprojection(),
                                       consensus_projector(*inst.exact_system));
        },
        [&] {
            return quasi_consensus_map(inst.float_system.eigenprojection(),
                                       consensus_projector(inst.float_system));
        });
    if (!matrices.is_null()) doc["matrices"] = std::move(matrices);
    return doc;
}

inline int run_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst = load_instance(opt.graph_path, opt.force_float);
        TauChoice tau = resolve_tau(inst, opt.tau);
        detail::emit(analyze_report(inst, tau, opt.matrices), opt.json, out);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------
// project
// ---------------------------------------------------------------------------

struct ProjectOptions {
    std::string graph_path;
    std::string x0;
    bool force_float = false;
    bool json = false;
};

inline int run_project(const ProjectOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst = load_instance(opt.graph_path, opt.force_float);
        Vector<Rational> x0 = parse_vector(opt.x0);
        if (x0.size() != static_cast<std::size_t>(inst.graph.vertex_count()))
            throw InvalidInput("x0 has length " + std::to_string(x0.size()) + ", expected " +
                               std::to_string(inst.graph.vertex_count()));
        ordered_json doc;
        doc["n"] = inst.graph.vertex_count();
        doc["backend"] = inst.exact ? "exact" : "float";
        if (!inst.warning.empty()) doc["warning"] = inst.warning;
        doc["x0"] = vector_to_json(x0);
        if (inst.exact) {
            const auto& sys = *inst.exact_system;
            Matrix<Rational> s = consensus_projector(sys);
            Vector<Rational> projected = project_initial(s, x0);
            Vector<Rational> quasi =
                quasi_consensus_limit(sys.eigenprojection(), s, x0);
            doc["in_consensus_domain"] = in_consensus_domain(sys, x0);
            doc["projected_x0"] = vector_to_json(projected);
            doc["quasi_consensus"] = quasi[0].to_string();
            doc["quasi_consensus_float"] = std::stod(format_double(quasi[0].to_double()));
            doc["matrices"]["S"] = matrix_to_json(s);
        } else {
            const auto& sys = inst.float_system;
            Vector<double> xf = to_float(x0);
            Matrix<double> s = consensus_projector(sys);
            Vector<double> projected = project_initial(s, xf);
            Vector<double> quasi = quasi_consensus_limit(sys.eigenprojection(), s, xf);
            doc["in_consensus_domain"] = in_consensus_domain(sys, xf);
            doc["projected_x0"] = vector_to_json(projected);
            doc["quasi_consensus"] = std::stod(format_double(quasi[0]));
            doc["matrices"]["S"] = matrix_to_json(s);
        }
        detail::emit(doc, opt.json, out);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string graph_path;
    std::string protocol = "basic";
    std::string x0;
    std::optional<std::string> tau;
    std::optional<double> t_max;
    std::optional<std::size_t> k_max;
    std::string out_path = "trace.csv";
    double tolerance = 1e-8;       // consensus verdict
    double conv_tolerance = 1e-10; // convergence window
    bool force_float = false;
    bool json = false;
};

inline std::vector<double> simulation_grid(double tau, std::optional<double> t_max) {
    if (!t_max) return default_time_grid(tau);
    std::vector<double> times;
    double t = std::min(tau, *t_max);
    while (true) {
        times.push_back(t);
        if (t >= *t_max) break;
        t = std::min(t * 2.0, *t_max);
    }
    return times;
}

inline void write_trace_csv(const SimulationTrace<double>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open output file: " + path);
    const std::size_t n = trace.limit.size();
    const bool with_cesaro = !trace.cesaro_states.empty();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
    if (with_cesaro)
        for (std::size_t i = 1; i <= n; ++i) out << ",cesaro_x" << i;
    out << "\n";
    for (std::size_t row = 0; row < trace.times.size(); ++row) {
        out << format_double(trace.times[row]);
        for (std::size_t i = 0; i < n; ++i) out << "," << format_double(trace.states[row][i]);
        if (with_cesaro) {
            // the Cesaro sequence starts at k = 1; pad the k = 0 row with x0
            const auto& c = row == 0 ? trace.states[0] : trace.cesaro_states[row - 1];
            for (std::size_t i = 0; i < n; ++i) out << "," << format_double(c[i]);
        }
        out << "\n";
    }
}

inline int run_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst = load_instance(opt.graph_path, opt.force_float);
        ProtocolKind kind = protocol_from_string(opt.protocol);
        TauChoice tau = resolve_tau(inst, opt.tau);
        Vector<Rational> x0_exact = parse_vector(opt.x0);
        if (x0_exact.size() != static_cast<std::size_t>(inst.graph.vertex_count()))
            throw InvalidInput("x0 has length " + std::to_string(x0_exact.size()) +
                               ", expected " + std::to_string(inst.graph.vertex_count()));
        Vector<double> x0 = to_float(x0_exact);
        const auto& fsys = inst.float_system;

        // exact-mode projector, converted on demand; float otherwise
        auto projector_float = [&]() -> Matrix<double> {
            if (inst.exact) return to_float(consensus_projector(*inst.exact_system));
            return consensus_projector(fsys);
        };

        SimulationTrace<double> trace;
        switch (kind) {
            case ProtocolKind::BasicContinuous:
                trace = simulate_continuous(fsys.laplacian(), x0,
                                            simulation_grid(tau.value, opt.t_max), opt.tolerance,
                                            opt.conv_tolerance);
                break;
            case ProtocolKind::ProjectedContinuous: {
                Vector<double> projected = project_initial(projector_float(), x0);
                trace = simulate_continuous(fsys.laplacian(), projected,
                                            simulation_grid(tau.value, opt.t_max), opt.tolerance,
                                            opt.conv_tolerance);
                break;
            }
            case ProtocolKind::LTildeContinuous: {
                Matrix<double> lt = projected_laplacian(fsys, projector_float(), tau.value);
                trace = simulate_continuous(lt, x0, simulation_grid(tau.value, opt.t_max),
                                            opt.tolerance, opt.conv_tolerance);
                break;
            }
            case ProtocolKind::DeGroot:
                trace = degroot_iterate(degroot_matrix(fsys, tau.value), x0,
                                        opt.k_max.value_or(1000), opt.tolerance,
                                        opt.conv_tolerance);
                break;
            case ProtocolKind::DeGrootProjected: {
                Matrix<double> pooling =
                    projected_degroot_matrix(degroot_matrix(fsys, tau.value), projector_float());
                trace = degroot_iterate(pooling, x0, opt.k_max.value_or(1000), opt.tolerance,
                                        opt.conv_tolerance);
                break;
            }
        }
        trace.kind = kind;
        write_trace_csv(trace, opt.out_path);

        ordered_json doc;
        doc["protocol"] = to_string(kind);
        doc["backend"] = inst.exact ? "exact" : "float";
        doc["tau"] = tau.exact.to_string();
        doc["trace_file"] = opt.out_path;
        doc["steps"] = trace.times.size();
        doc["converged"] = trace.converged;
        doc["limit"] = vector_to_json(trace.limit);
        if (!trace.cesaro_states.empty()) {
            doc["cesaro_limit"] = vector_to_json(trace.cesaro_states.back());
            doc["cesaro_converged"] = trace.cesaro_converged;
        }
        doc["consensus"] = trace.consensus;
        doc["consensus_tolerance"] = trace.consensus_tolerance;
        detail::emit(doc, opt.json, out);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string graph_path;
    std::optional<std::string> tau;
    bool force_float = false;
    bool json = false;
};

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0;
};

namespace detail {

inline double max_abs(const Matrix<double>& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) best = std::max(best, std::fabs(m(i, j)));
    return best;
}

inline double exact_residual(const Matrix<Rational>& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            best = std::max(best, std::fabs(m(i, j).to_double()));
    return best;
}

/// Greedy complex multiset match; returns the worst pair distance.
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        double best = 1e300;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double dist = std::abs(x - b[j]);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace detail

/// Runs the instance-level invariant battery. Exact checks need n <= 10.
inline std::vector<VerifyCheck> verify_instance(const Instance& inst, const TauChoice& tau);

inline int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        Instance inst = load_instance(opt.graph_path, opt.force_float);
        TauChoice tau = resolve_tau(inst, opt.tau);
        auto checks = verify_instance(inst, tau);
        bool all_passed = true;
        if (opt.json) {
            ordered_json doc;
            doc["backend"] = inst.exact ? "exact" : "float";
            doc["tau"] = tau.exact.to_string();
            ordered_json arr = ordered_json::array();
            for (const auto& c : checks) {
                ordered_json item;
                item["name"] = c.name;
                item["passed"] = c.passed;
                item["residual"] = std::stod(format_double(c.residual));
                arr.push_back(std::move(item));
                all_passed = all_passed && c.passed;
            }
            doc["checks"] = std::move(arr);
            doc["all_passed"] = all_passed;
            out << doc.dump(2) << "\n";
        } else {
            for (const auto& c : checks) {
                out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
                    << " (residual=" << format_double(c.residual) << ")\n";
                all_passed = all_passed && c.passed;
            }
            out << (all_passed ? "all checks passed\n" : "some checks FAILED\n");
        }
        return all_passed ? kExitOk : kExitVerifyFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

inline std::vector<VerifyCheck> verify_instance(const Instance& inst, const TauChoice& tau) {
    std::vector<VerifyCheck> checks;
    auto push = [&](std::string name, bool ok, double residual) {
        checks.push_back({std::move(name), ok, residual});
    };
    // iterative routines that can hit their caps still count as failed
    // checks, not usage errors
    auto guarded = [&](const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const Error& e) {
            push(name + " (" + e.what() + ")", false, 0.0);
        }
    };
    const auto& fsys = inst.float_system;
    const std::size_t n = fsys.size();
    const int d = fsys.degeneracy();

    {  // zero row sums of L
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += fsys.laplacian()(i, j);
            worst = std::max(worst, std::fabs(s));
        }
        push("laplacian has zero row sums", worst <= 1e-12 * std::max(1.0, inf_norm(fsys.laplacian())),
             worst);
    }
    {  // zero eigenvalue multiplicity = d, others in the right half plane
        auto eigs = eigenvalues(fsys.laplacian());
        const double tol = 1e-8 * std::max(1.0, inf_norm(fsys.laplacian()));
        int zeros = 0;
        double worst_negative = 0.0;
        for (const auto& z : eigs) {
            if (std::abs(z) <= tol) {
                ++zeros;
            } else {
                worst_negative = std::min(worst_negative, z.real());
            }
        }
        push("zero eigenvalue multiplicity equals the final class count", zeros == d,
             static_cast<double>(zeros - d));
        push("nonzero eigenvalues have positive real part", worst_negative >= 0.0,
             worst_negative >= 0.0 ? 0.0 : -worst_negative);
    }

    Matrix<double> j_float = fsys.eigenprojection();
    Matrix<double> s_float =
        inst.exact ? to_float(consensus_projector(*inst.exact_system)) : consensus_projector(fsys);

    if (inst.exact) {
        const auto& xsys = *inst.exact_system;
        const Matrix<Rational>& j = xsys.eigenprojection();
        Matrix<Rational> s = consensus_projector(xsys);
        Matrix<Rational> forest = forest_matrix(inst.graph);
        push("forest matrix equals the null-space eigenprojection", forest == j,
             detail::exact_residual(forest - j));
        push("resolvent eigenprojection agrees with the exact one",
             detail::max_abs(j_float - to_float(j)) <= 1e-8,
             detail::max_abs(j_float - to_float(j)));
        {
            Matrix<Rational> idem = j * j - j;
            Matrix<Rational> lj = xsys.laplacian() * j;
            Matrix<Rational> jl = j * xsys.laplacian();
            bool row_stochastic = true;
            for (std::size_t i = 0; i < n && row_stochastic; ++i) {
                Rational row(0);
                for (std::size_t c = 0; c < n; ++c) {
                    if (j(i, c).sign() < 0) row_stochastic = false;
                    row += j(i, c);
                }
                if (!(row == Rational(1))) row_stochastic = false;
            }
            bool ok = row_stochastic && detail::exact_residual(idem) == 0.0 &&
                      detail::exact_residual(lj) == 0.0 && detail::exact_residual(jl) == 0.0;
            push("eigenprojection is a row-stochastic idempotent annihilating L", ok,
                 std::max({detail::exact_residual(idem), detail::exact_residual(lj),
                           detail::exact_residual(jl)}));
        }
        {
            Matrix<Rational> st = s.transpose();
            Matrix<Rational> idem = s * s - s;
            Matrix<Rational> sl = s * xsys.laplacian() - xsys.laplacian();
            Vector<Rational> ones = Vector<Rational>::ones(n);
            bool fixes_ones = (s * ones) == ones;
            bool ok = st == s && detail::exact_residual(idem) == 0.0 &&
                      detail::exact_residual(sl) == 0.0 && fixes_ones &&
                      rank(s) == n - static_cast<std::size_t>(d) + 1;
            push("projector is the symmetric idempotent fixing ones and R(L)", ok,
                 std::max(detail::exact_residual(idem), detail::exact_residual(sl)));
        }
        {  // choice invariance over all representative selections
            std::vector<std::vector<int>> selections{{}};
            for (int ci : xsys.structure().final_classes) {
                std::vector<std::vector<int>> grown;
                for (const auto& partial : selections)
                    for (int v : xsys.structure().components[static_cast<std::size_t>(ci)]) {
                        auto next = partial;
                        next.push_back(v);
                        grown.push_back(std::move(next));
                    }
                selections = std::move(grown);
            }
            bool ok = true;
            for (const auto& chosen : selections)
                ok = ok && orthogonal_projector(consensus_basis(xsys, chosen)) == s;
            push("projector is independent of the representative choice", ok, ok ? 0.0 : 1.0);
        }
        Matrix<Rational> quasi = quasi_consensus_map(j, s);
        {
            bool ok = rank(quasi) == 1 && (s * quasi) == quasi;
            push("quasi-consensus map has rank one and is fixed by the projector", ok,
                 ok ? 0.0 : 1.0);
        }
        Matrix<Rational> p = degroot_matrix(xsys, tau.exact);
        Matrix<Rational> pooling = projected_degroot_matrix(p, s);
        {
            Matrix<Rational> lhs = pooling;
            Matrix<Rational> pk = p;
            bool ok = true;
            for (int k = 1; k <= 10 && ok; ++k) {
                ok = lhs == projected_degroot_matrix(pk, s);
                lhs = lhs * pooling;
                pk = pk * p;
            }
            push("projected pooling satisfies (PS)^k = P^k S for k <= 10", ok, ok ? 0.0 : 1.0);
        }
        Matrix<Rational> protocol = projected_laplacian(xsys, s, tau.exact);
        {
            Matrix<Rational> left = protocol * quasi;
            Matrix<Rational> right = quasi * protocol;
            bool ok = detail::exact_residual(left) == 0.0 &&
                      detail::exact_residual(right) == 0.0 && matrix_index(protocol) == 1;
            push("projected protocol matrix annihilates the quasi-consensus map", ok,
                 std::max(detail::exact_residual(left), detail::exact_residual(right)));
        }
    }

    // spectrum of the projected protocol matrix (float route)
    {
        Matrix<double> protocol = projected_laplacian(fsys, s_float, tau.value);
        guarded("projected protocol spectrum is the shifted spectrum of L", [&] {
            auto eig_l = eigenvalues(fsys.laplacian());
            std::vector<std::complex<double>> expected{{0.0, 0.0}};
            for (int k = 1; k < d; ++k) expected.emplace_back(1.0 / tau.value, 0.0);
            std::sort(eig_l.begin(), eig_l.end(),
                      [](auto a, auto b) { return std::abs(a) < std::abs(b); });
            for (std::size_t i = static_cast<std::size_t>(d); i < eig_l.size(); ++i)
                expected.push_back(eig_l[i]);
            double dist = detail::multiset_distance(expected, eigenvalues(protocol));
            push("projected protocol spectrum is the shifted spectrum of L", dist <= 1e-6,
                 dist);

            auto sv = singular_values(protocol);
            int hits = 0;
            for (double v : sv)
                if (std::fabs(v - 1.0 / tau.value) <= 1e-6) ++hits;
            push("1/tau is a singular value with multiplicity d-1", hits >= d - 1,
                 static_cast<double>(hits - (d - 1)));
        });

        // approximation error monotonicity and decomposition
        if (fsys.tau_bounded()) {
            double tmax = fsys.tau_max();
            std::vector<double> grid{tmax / 8.0, tmax / 4.0, tmax / 2.0, tmax};
            double floor_norm = frobenius_norm(fsys.laplacian() * s_float - fsys.laplacian());
            bool monotone = true, above_floor = true, split_ok = true;
            double prev = 1e300, worst_split = 0.0;
            for (double t : grid) {
                auto e = approximation_error(fsys, s_float, t);
                double recomposed = std::sqrt(e.projector_term + e.constant_term);
                worst_split = std::max(worst_split, std::fabs(recomposed - e.norm));
                split_ok = split_ok && worst_split <= 1e-10;
                if (d >= 2) {
                    monotone = monotone && e.norm < prev;
                    above_floor = above_floor && e.norm > floor_norm;
                } else {
                    monotone = monotone && e.norm <= 1e-9;
                }
                prev = e.norm;
            }
            push("approximation error decreases in tau and stays above its infimum",
                 monotone && above_floor && split_ok, worst_split);
        }

        // closed-form exponential identities
        {
            double worst = 0.0;
            Matrix<double> eye = Matrix<double>::identity(n);
            for (double mult : {1.0, 10.0, 100.0}) {
                double t = mult * tau.value;
                Matrix<double> lhs1 = matrix_exponential(eye - s_float, -t / tau.value);
                Matrix<double> rhs1 = s_float + std::exp(-t / tau.value) * (eye - s_float);
                worst = std::max(worst, detail::max_abs(lhs1 - rhs1));
                Matrix<double> ls = fsys.laplacian() * s_float;
                Matrix<double> lhs2 = matrix_exponential(ls, -t);
                Matrix<double> rhs2 =
                    eye - s_float + matrix_exponential(fsys.laplacian(), -t) * s_float;
                worst = std::max(worst, detail::max_abs(lhs2 - rhs2));
            }
            push("projector exponential identities hold", worst <= 1e-9, worst);
        }

        // Cesaro limit of the pooling matrix
        guarded("Cesaro limit of the pooling matrix is the eigenprojection", [&] {
            Matrix<double> p = degroot_matrix(fsys, tau.value);
            double dist = detail::max_abs(cesaro_limit(p) - j_float);
            push("Cesaro limit of the pooling matrix is the eigenprojection", dist <= 1e-6, dist);
        });

        // protocol limits
        {
            double horizon = tau.value * 65536.0;
            Matrix<double> e_basic = matrix_exponential(fsys.laplacian(), -horizon);
            double dist_basic = detail::max_abs(e_basic - j_float);
            push("continuous protocol reaches the eigenprojection", dist_basic <= 1e-8,
                 dist_basic);
            Matrix<double> quasi_f = j_float * s_float;
            Matrix<double> e_proj = matrix_exponential(protocol, -horizon);
            double dist_proj = detail::max_abs(e_proj - quasi_f);
            push("projected protocol reaches the quasi-consensus map", dist_proj <= 1e-8,
                 dist_proj);
        }
    }
    return checks;
}

}  // namespace lapcon::cli
