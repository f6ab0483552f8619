#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "lapcon/error.hpp"
#include "lapcon/matrix.hpp"
#include "lapcon/rational.hpp"

namespace lapcon {

struct Arc {
    int tail = 0;  // dependent vertex
    int head = 0;  // influencing vertex
    Rational weight;
};

/// Weighted dependency digraph on vertices 0..n-1. Arc (i,j) means i depends
/// on j. No self-loops, no duplicate arcs, strictly positive weights.
class WeightedDigraph {
public:
    explicit WeightedDigraph(int n) : n_(n) {
        if (n < 1) throw InvalidInput("digraph needs at least one vertex");
        out_.resize(static_cast<std::size_t>(n));
    }

    void add_arc(int tail, int head, Rational weight) {
        if (tail < 0 || tail >= n_ || head < 0 || head >= n_)
            throw InvalidInput("arc endpoint out of range");
        if (tail == head) throw InvalidInput("self-loops are not allowed");
        if (!(weight.sign() > 0)) throw InvalidInput("arc weights must be positive");
        for (std::size_t idx : out_[static_cast<std::size_t>(tail)])
            if (arcs_[idx].head == head) throw InvalidInput("duplicate arc");
        out_[static_cast<std::size_t>(tail)].push_back(arcs_.size());
        arcs_.push_back(Arc{tail, head, std::move(weight)});
    }

    /// Arcs are exactly the positive entries of a dependency matrix.
    static WeightedDigraph from_dependency_matrix(const Matrix<Rational>& a) {
        if (!a.is_square()) throw InvalidInput("dependency matrix must be square");
        WeightedDigraph g(static_cast<int>(a.rows()));
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                if (i == j) continue;
                if (a(i, j).sign() > 0)
                    g.add_arc(static_cast<int>(i), static_cast<int>(j), a(i, j));
            }
        }
        return g;
    }

    [[nodiscard]] int vertex_count() const { return n_; }
    [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
    [[nodiscard]] const std::vector<std::size_t>& out_arcs(int v) const {
        return out_[static_cast<std::size_t>(v)];
    }

    [[nodiscard]] Matrix<Rational> dependency_matrix() const {
        Matrix<Rational> a(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
        for (const Arc& arc : arcs_)
            a(static_cast<std::size_t>(arc.tail), static_cast<std::size_t>(arc.head)) = arc.weight;
        return a;
    }

private:
    int n_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<std::size_t>> out_;
};

/// Strongly connected components, their acyclic condensation, and the final
/// classes (components without outgoing condensation arcs).
struct ComponentStructure {
    std::vector<std::vector<int>> components;  // each sorted; ordered by smallest vertex
    std::vector<int> component_of;             // vertex -> index into components
    std::vector<std::pair<int, int>> condensation_arcs;  // deduplicated, sorted
    std::vector<int> final_classes;                      // indices into components
    int final_class_count = 0;                           // d

    [[nodiscard]] bool is_final(int component) const {
        return std::find(final_classes.begin(), final_classes.end(), component) !=
               final_classes.end();
    }
};

/// Tarjan's algorithm, iterative. Component order is deterministic
/// (ascending smallest vertex).
inline ComponentStructure strongly_connected_components(const WeightedDigraph& g) {
    const int n = g.vertex_count();
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    std::vector<std::vector<int>> raw_components;
    int counter = 0;

    struct Frame {
        int v;
        std::size_t next_arc;
    };
    for (int start = 0; start < n; ++start) {
        if (index[static_cast<std::size_t>(start)] != -1) continue;
        std::vector<Frame> call_stack{{start, 0}};
        index[static_cast<std::size_t>(start)] = lowlink[static_cast<std::size_t>(start)] =
            counter++;
        stack.push_back(start);
        on_stack[static_cast<std::size_t>(start)] = true;
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            const auto v = static_cast<std::size_t>(frame.v);
            if (frame.next_arc < g.out_arcs(frame.v).size()) {
                const Arc& arc = g.arcs()[g.out_arcs(frame.v)[frame.next_arc++]];
                const auto w = static_cast<std::size_t>(arc.head);
                if (index[w] == -1) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(arc.head);
                    on_stack[w] = true;
                    call_stack.push_back({arc.head, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    std::vector<int> comp;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = false;
                        comp.push_back(w);
                        if (w == frame.v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    raw_components.push_back(std::move(comp));
                }
                int done = frame.v;
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    const auto parent = static_cast<std::size_t>(call_stack.back().v);
                    lowlink[parent] =
                        std::min(lowlink[parent], lowlink[static_cast<std::size_t>(done)]);
                }
            }
        }
    }

    std::sort(raw_components.begin(), raw_components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    ComponentStructure cs;
    cs.components = std::move(raw_components);
    cs.component_of.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t ci = 0; ci < cs.components.size(); ++ci)
        for (int v : cs.components[ci]) cs.component_of[static_cast<std::size_t>(v)] = static_cast<int>(ci);

    std::set<std::pair<int, int>> cond;
    for (const Arc& arc : g.arcs()) {
        int ct = cs.component_of[static_cast<std::size_t>(arc.tail)];
        int ch = cs.component_of[static_cast<std::size_t>(arc.head)];
        if (ct != ch) cond.insert({ct, ch});
    }
    cs.condensation_arcs.assign(cond.begin(), cond.end());

    std::vector<bool> has_out(cs.components.size(), false);
    for (const auto& [from, to] : cs.condensation_arcs) has_out[static_cast<std::size_t>(from)] = true;
    for (std::size_t ci = 0; ci < cs.components.size(); ++ci)
        if (!has_out[ci]) cs.final_classes.push_back(static_cast<int>(ci));
    cs.final_class_count = static_cast<int>(cs.final_classes.size());
    return cs;
}

/// True iff the digraph has a spanning in-tree, i.e. exactly one final class.
inline bool has_spanning_in_tree(const WeightedDigraph& g) {
    return strongly_connected_components(g).final_class_count == 1;
}

/// Spanning in-forest: every vertex keeps at most one out-arc, no cycles.
/// Roots are the vertices with no out-arc in the subset.
struct InForest {
    std::vector<std::size_t> arc_indices;  // into WeightedDigraph::arcs()
    std::vector<int> root_of;              // tree root per vertex
    Rational weight;                       // product of arc weights
};

inline constexpr int kForestEnumerationLimit = 10;

/// Exhaustive enumeration of all maximum in-forests (those with n - d arcs).
/// Exponential by design; guarded to n <= 10. Deterministic order: vertices
/// choose out-arcs in ascending order, "no arc" first.
inline std::vector<InForest> enumerate_max_in_forests(const WeightedDigraph& g) {
    const int n = g.vertex_count();
    if (n > kForestEnumerationLimit)
        throw SizeLimit("in-forest enumeration is limited to 10 vertices");
    const int d = strongly_connected_components(g).final_class_count;
    const int target = n - d;

    std::vector<InForest> forests;
    std::vector<int> next(static_cast<std::size_t>(n), -2);  // -2 undecided, -1 root
    std::vector<std::size_t> chosen;

    auto creates_cycle = [&](int tail, int head) {
        int u = head;
        while (u >= 0 && u < tail) u = next[static_cast<std::size_t>(u)];
        // vertices >= tail (other than tail itself) are still undecided
        return u == tail;
    };

    auto emit = [&]() {
        InForest f;
        f.arc_indices = chosen;
        f.root_of.assign(static_cast<std::size_t>(n), -1);
        f.weight = Rational(1);
        for (std::size_t idx : chosen) f.weight *= g.arcs()[idx].weight;
        for (int v = 0; v < n; ++v) {
            int u = v;
            while (next[static_cast<std::size_t>(u)] >= 0) u = next[static_cast<std::size_t>(u)];
            f.root_of[static_cast<std::size_t>(v)] = u;
        }
        forests.push_back(std::move(f));
    };

    // Depth-first over per-vertex out-arc choices with capacity pruning.
    auto rec = [&](auto&& self, int v, int count) -> void {
        if (count + (n - v) < target) return;  // cannot reach the maximum any more
        if (v == n) {
            if (count == target) emit();
            return;
        }
        next[static_cast<std::size_t>(v)] = -1;
        self(self, v + 1, count);
        for (std::size_t idx : g.out_arcs(v)) {
            const Arc& arc = g.arcs()[idx];
            if (creates_cycle(v, arc.head)) continue;
            next[static_cast<std::size_t>(v)] = arc.head;
            chosen.push_back(idx);
            self(self, v + 1, count + 1);
            chosen.pop_back();
        }
        next[static_cast<std::size_t>(v)] = -2;
    };
    rec(rec, 0, 0);
    return forests;
}

/// Normalized matrix of maximum in-forests: entry (k,s) is the weight share
/// of maximum in-forests that put k in a tree rooted at s. Row-stochastic,
/// exact; this is the combinatorial ground truth for the eigenprojection.
inline Matrix<Rational> forest_matrix(const WeightedDigraph& g) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    auto forests = enumerate_max_in_forests(g);
    Matrix<Rational> shares(n, n);
    Rational total(0);
    for (const InForest& f : forests) {
        total += f.weight;
        for (std::size_t k = 0; k < n; ++k)
            shares(k, static_cast<std::size_t>(f.root_of[k])) += f.weight;
    }
    // total weight is positive: the empty-extension argument guarantees at
    // least one maximum in-forest exists
    Rational inv_total = Rational(1) / total;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) shares(i, j) *= inv_total;
    return shares;
}

}  // namespace lapcon
