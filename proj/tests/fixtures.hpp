#pragma once

// Shared instances: the 7-agent two-final-class system used across the
// suites, the 2-cycle, and seeded random digraph generation.

#include <random>
#include <string>
#include <vector>

#include "lapcon/digraph.hpp"
#include "lapcon/laplacian.hpp"
#include "lapcon/matrix.hpp"
#include "lapcon/rational.hpp"

namespace fixtures {

using lapcon::Matrix;
using lapcon::Rational;
using lapcon::Vector;
using lapcon::WeightedDigraph;

inline Matrix<Rational> rational_matrix(const std::vector<std::vector<long long>>& rows) {
    Matrix<Rational> m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Rational(rows[i][j]);
    return m;
}

inline Matrix<Rational> rational_matrix_text(const std::vector<std::vector<std::string>>& rows) {
    Matrix<Rational> m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = Rational::from_string(rows[i][j]);
    return m;
}

/// Seven agents, three components {1,2,3} {4,5} {6,7}, two final classes.
inline Matrix<Rational> seven_agent_dependency() {
    return rational_matrix({{0, 0, 3, 0, 0, 0, 0},
                            {1, 0, 0, 0, 0, 0, 0},
                            {4, 2, 0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 3, 0, 0},
                            {0, 0, 0, 2, 0, 0, 0},
                            {0, 1, 3, 0, 0, 0, 3},
                            {0, 0, 0, 2, 0, 2, 0}});
}

inline Matrix<Rational> seven_agent_laplacian() {
    return rational_matrix({{3, 0, -3, 0, 0, 0, 0},
                            {-1, 1, 0, 0, 0, 0, 0},
                            {-4, -2, 6, 0, 0, 0, 0},
                            {0, 0, 0, 3, -3, 0, 0},
                            {0, 0, 0, -2, 2, 0, 0},
                            {0, -1, -3, 0, 0, 7, -3},
                            {0, 0, 0, -2, 0, -2, 4}});
}

inline Matrix<Rational> seven_agent_basis() {  // representatives {1, 4}
    return rational_matrix({{1, 0, -3, 0, 0, 0},
                            {1, 1, 0, 0, 0, 0},
                            {1, -2, 6, 0, 0, 0},
                            {1, 0, 0, -3, 0, 0},
                            {1, 0, 0, 2, 0, 0},
                            {1, -1, -3, 0, 7, -3},
                            {1, 0, 0, 0, -2, 4}});
}

/// 22 * S, integer entries.
inline Matrix<Rational> seven_agent_projector_times_22() {
    return rational_matrix({{18, -4, -2, 4, 6, 0, 0},
                            {-4, 18, -2, 4, 6, 0, 0},
                            {-2, -2, 21, 2, 3, 0, 0},
                            {4, 4, 2, 18, -6, 0, 0},
                            {6, 6, 3, -6, 13, 0, 0},
                            {0, 0, 0, 0, 0, 22, 0},
                            {0, 0, 0, 0, 0, 0, 22}});
}

inline Matrix<Rational> seven_agent_projector() {
    Matrix<Rational> s = seven_agent_projector_times_22();
    return Rational(1, 22) * s;
}

/// Exact eigenprojection, cross-checked by the forest enumeration and the
/// null-space route (they agree bit-exactly).
inline Matrix<Rational> seven_agent_eigenprojection() {
    return rational_matrix_text({{"2/5", "2/5", "1/5", "0", "0", "0", "0"},
                                 {"2/5", "2/5", "1/5", "0", "0", "0", "0"},
                                 {"2/5", "2/5", "1/5", "0", "0", "0", "0"},
                                 {"0", "0", "0", "2/5", "3/5", "0", "0"},
                                 {"0", "0", "0", "2/5", "3/5", "0", "0"},
                                 {"16/55", "16/55", "8/55", "6/55", "9/55", "0", "0"},
                                 {"8/55", "8/55", "4/55", "14/55", "21/55", "0", "0"}});
}

/// Row shared by every row of the quasi-consensus map (eigenprojection * S).
inline std::vector<Rational> seven_agent_quasi_row() {
    return {Rational(26, 110), Rational(26, 110), Rational(13, 110), Rational(18, 110),
            Rational(27, 110), Rational(0),       Rational(0)};
}

inline WeightedDigraph seven_agent_digraph() {
    return WeightedDigraph::from_dependency_matrix(seven_agent_dependency());
}

inline WeightedDigraph two_cycle() {
    WeightedDigraph g(2);
    g.add_arc(0, 1, Rational(1));
    g.add_arc(1, 0, Rational(1));
    return g;
}

/// Random digraph per the shared corpus recipe: n in {2..7}, arc probability
/// 0.3, integer weights 1..3, redrawn until at least one arc exists.
inline WeightedDigraph random_digraph(std::mt19937& rng) {
    std::uniform_int_distribution<int> size_dist(2, 7);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> weight_dist(1, 3);
    while (true) {
        int n = size_dist(rng);
        std::vector<std::tuple<int, int, int>> arcs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && coin(rng) < 0.3) arcs.emplace_back(i, j, weight_dist(rng));
        if (arcs.empty()) continue;
        WeightedDigraph g(n);
        for (auto& [i, j, w] : arcs) g.add_arc(i, j, Rational(w));
        return g;
    }
}

inline lapcon::LaplacianSystem<Rational> random_system(std::mt19937& rng) {
    return lapcon::build_laplacian(random_digraph(rng).dependency_matrix());
}

}  // namespace fixtures
