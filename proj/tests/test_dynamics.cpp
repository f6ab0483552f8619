#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "lapcon/dynamics.hpp"
#include "lapcon/projection.hpp"

using lapcon::Matrix;
using lapcon::ProtocolKind;
using lapcon::Rational;
using lapcon::Vector;
using lapcon::build_laplacian;
using lapcon::consensus_check;
using lapcon::consensus_projector;
using lapcon::default_time_grid;
using lapcon::degroot_iterate;
using lapcon::degroot_matrix;
using lapcon::matrix_exponential;
using lapcon::projected_degroot_matrix;
using lapcon::projected_laplacian;
using lapcon::quasi_consensus_limit;
using lapcon::simulate_continuous;
using lapcon::simulate_ode;

namespace {

const auto kSystem = build_laplacian(fixtures::seven_agent_dependency());

Matrix<double> float_laplacian() { return to_float(kSystem.laplacian()); }

Vector<double> random_state(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("protocol names round trip") {
    for (auto kind :
         {ProtocolKind::BasicContinuous, ProtocolKind::ProjectedContinuous,
          ProtocolKind::LTildeContinuous, ProtocolKind::DeGroot, ProtocolKind::DeGrootProjected})
        CHECK(lapcon::protocol_from_string(lapcon::to_string(kind)) == kind);
    CHECK_THROWS_AS(lapcon::protocol_from_string("odd"), lapcon::InvalidInput);
}

TEST_CASE("consensus check") {
    CHECK(consensus_check(Vector<double>::ones(4), 1e-12));
    CHECK_FALSE(consensus_check(Vector<double>{1.0, 0.0}, 1e-9));
    CHECK(consensus_check(Vector<Rational>::ones(3), 0.0));
}

TEST_CASE("ones is a fixed point of every zero-row-sum protocol") {
    auto trace = simulate_continuous(float_laplacian(), Vector<double>::ones(7),
                                     default_time_grid(1.0 / 14.0));
    for (const auto& state : trace.states)
        for (std::size_t i = 0; i < 7; ++i) CHECK(state[i] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(trace.consensus);
}

TEST_CASE("basic protocol limit is the eigenprojection action") {
    auto j = to_float(fixtures::seven_agent_eigenprojection());
    auto x0 = Vector<double>::unit(7, 0);
    auto trace = simulate_continuous(float_laplacian(), x0, default_time_grid(1.0 / 14.0));
    CHECK(trace.converged);
    CHECK(inf_norm(trace.limit - j * x0) < 1e-8);
    // the fixture has two final classes, so e1 does not reach consensus
    CHECK_FALSE(trace.consensus);
}

TEST_CASE("ltilde protocol reaches the quasi-consensus value") {
    auto s = to_float(fixtures::seven_agent_projector());
    auto fsys = build_laplacian(to_float(fixtures::seven_agent_dependency()));
    auto lt = projected_laplacian(fsys, s, 1.0 / 7.0);
    auto x0 = Vector<double>::unit(7, 0);
    auto trace = simulate_continuous(lt, x0, default_time_grid(1.0 / 7.0));
    CHECK(trace.converged);
    CHECK(trace.consensus);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(trace.limit[i] == doctest::Approx(26.0 / 110.0).epsilon(1e-7));
}

TEST_CASE("continuous simulation validates its inputs") {
    Matrix<double> not_zero_rows{{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(simulate_continuous(not_zero_rows, Vector<double>::ones(2), {1.0}),
                    lapcon::InvalidInput);
    CHECK_THROWS_AS(
        simulate_continuous(float_laplacian(), Vector<double>::ones(7), {2.0, 1.0}),
        lapcon::InvalidInput);
    CHECK_THROWS_AS(simulate_continuous(float_laplacian(), Vector<double>::ones(3), {1.0}),
                    lapcon::DimensionMismatch);
}

TEST_CASE("ode integrator matches the exponential path") {
    // zero matrix keeps the state constant
    auto constant = simulate_ode(Matrix<double>(3, 3), Vector<double>{1.0, 2.0, 3.0}, 1.0, 0.01);
    CHECK(constant.limit[0] == doctest::Approx(1.0));
    CHECK(constant.limit[2] == doctest::Approx(3.0));

    // 2-cycle splits the difference
    auto cyc = to_float(build_laplacian(fixtures::two_cycle().dependency_matrix()).laplacian());
    auto cyc_trace = simulate_ode(cyc, Vector<double>{1.0, 0.0}, 20.0, 0.01);
    CHECK(cyc_trace.limit[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(cyc_trace.limit[1] == doctest::Approx(0.5).epsilon(1e-9));

    // cross-method agreement on the seven agent system at t = 50
    auto x0 = Vector<double>::unit(7, 5);
    auto rk = simulate_ode(float_laplacian(), x0, 50.0, 1.0 / 140.0);
    auto expm_state = matrix_exponential(float_laplacian(), -50.0) * x0;
    CHECK(inf_norm(rk.limit - expm_state) < 1e-6);
}

TEST_CASE("ode integrator rejects bad steps and wild caps") {
    CHECK_THROWS_AS(simulate_ode(Matrix<double>(2, 2), Vector<double>::ones(2), 1.0, 0.0),
                    lapcon::InvalidInput);
    CHECK_THROWS_AS(simulate_ode(Matrix<double>(2, 2), Vector<double>::ones(2), 1.0, 1e-9),
                    lapcon::SizeLimit);
}

TEST_CASE("degroot iteration on the identity is constant") {
    auto trace = degroot_iterate(Matrix<double>::identity(3), Vector<double>{1.0, 2.0, 3.0}, 50);
    CHECK(trace.converged);
    CHECK(trace.limit == trace.states.front());
}

TEST_CASE("degroot iteration on the swap oscillates but Cesaro-converges") {
    Matrix<double> swap{{0.0, 1.0}, {1.0, 0.0}};
    auto trace = degroot_iterate(swap, Vector<double>{1.0, 0.0}, 20000);
    CHECK_FALSE(trace.converged);
    // running averages approach (1/2, 1/2) at O(1/k)
    const auto& cesaro = trace.cesaro_states.back();
    CHECK(std::fabs(cesaro[0] - 0.5) < 1e-4);
    CHECK(std::fabs(cesaro[1] - 0.5) < 1e-4);
}

TEST_CASE("degroot iteration converges to the eigenprojection action under strict tau") {
    auto p = to_float(degroot_matrix(kSystem, Rational(1, 14)));
    auto y0 = Vector<double>::unit(7, 0);
    auto trace = degroot_iterate(p, y0, 2000);
    CHECK(trace.converged);
    auto expected = to_float(fixtures::seven_agent_eigenprojection()) * y0;
    CHECK(inf_norm(trace.limit - expected) < 1e-8);
}

TEST_CASE("degroot iteration validates row sums and the step cap") {
    Matrix<double> bad{{0.9, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(degroot_iterate(bad, Vector<double>::ones(2), 10), lapcon::InvalidInput);
    CHECK_THROWS_AS(degroot_iterate(Matrix<double>::identity(2), Vector<double>::ones(2), 0),
                    lapcon::InvalidInput);
    CHECK_THROWS_AS(
        degroot_iterate(Matrix<double>::identity(2), Vector<double>::ones(2), 2000001),
        lapcon::SizeLimit);
}

TEST_CASE("projected degroot trace equals the pooled iteration exactly") {
    auto s = fixtures::seven_agent_projector();
    auto p = degroot_matrix(kSystem, Rational(1, 7));
    auto pooling = projected_degroot_matrix(p, s);
    Vector<Rational> x0 = Vector<Rational>::unit(7, 2);
    auto trace = degroot_iterate(pooling, x0, 12);
    REQUIRE(trace.states.size() == 13);
    CHECK(trace.states[0] == x0);
    // from step one on, (PS)^k x0 = P^k S x0 exactly
    Matrix<Rational> pk = p;
    for (std::size_t k = 1; k < trace.states.size(); ++k) {
        CHECK(trace.states[k] == pk * (s * x0));
        pk = pk * p;
    }
}

TEST_CASE("quasi-consensus limit replicates the common value") {
    auto s = fixtures::seven_agent_projector();
    const auto& j = kSystem.eigenprojection();

    auto ones = Vector<Rational>::ones(7);
    CHECK(quasi_consensus_limit(j, s, ones) == ones);

    auto v = quasi_consensus_limit(j, s, Vector<Rational>::unit(7, 0));
    for (std::size_t i = 0; i < 7; ++i) CHECK(v[i] == Rational(26, 110));

    // first five entries of the quasi row sum to 1
    Vector<Rational> first_five(7);
    for (std::size_t i = 0; i < 5; ++i) first_five[i] = Rational(1);
    CHECK(quasi_consensus_limit(j, s, first_five) == ones);

    // float backend agrees
    auto vf = quasi_consensus_limit(to_float(j), to_float(s), Vector<double>::unit(7, 0));
    for (std::size_t i = 0; i < 7; ++i) CHECK(vf[i] == doctest::Approx(26.0 / 110.0));
}

TEST_CASE("quasi-consensus limit rejects inconsistent pairs") {
    // J alone (no projector) has non-constant columns on a two-class system
    CHECK_THROWS_AS(quasi_consensus_limit(kSystem.eigenprojection(),
                                          Matrix<Rational>::identity(7),
                                          Vector<Rational>::unit(7, 0)),
                    lapcon::InvalidInput);
}

TEST_CASE("forest consensus property on random systems") {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 12; ++trial) {
        auto sys = fixtures::random_system(rng);
        const auto n = sys.size();
        auto lf = to_float(sys.laplacian());
        auto jf = to_float(sys.eigenprojection());
        double tau = sys.tau_max().to_double() / 2.0;
        for (std::size_t basis = 0; basis < n; ++basis) {
            auto x0 = Vector<double>::unit(n, basis);
            auto trace = simulate_continuous(lf, x0, default_time_grid(tau));
            CHECK(inf_norm(trace.limit - jf * x0) < 1e-8);
        }
    }
}

TEST_CASE("projected and ltilde protocols share the quasi-consensus limit") {
    std::mt19937 rng(73);
    for (int trial = 0; trial < 12; ++trial) {
        auto sys = fixtures::random_system(rng);
        const auto n = sys.size();
        auto lf = to_float(sys.laplacian());
        auto jf = to_float(sys.eigenprojection());
        auto sf = to_float(consensus_projector(sys));
        auto fsys = build_laplacian(to_float(sys.dependency()));
        double tau = sys.tau_max().to_double() / 2.0;
        auto quasi = jf * sf;
        auto x0 = random_state(rng, n);

        auto projected =
            simulate_continuous(lf, lapcon::project_initial(sf, x0), default_time_grid(tau));
        CHECK(inf_norm(projected.limit - quasi * x0) < 1e-8);
        CHECK(projected.consensus);

        auto lt = projected_laplacian(fsys, sf, tau);
        auto alt = simulate_continuous(lt, x0, default_time_grid(tau));
        CHECK(inf_norm(alt.limit - quasi * x0) < 1e-8);
        CHECK(inf_norm(alt.limit - projected.limit) < 1e-8);
    }
}

TEST_CASE("basic protocol reaches consensus exactly on the consensus domain") {
    std::mt19937 rng(79);
    int degenerate_seen = 0;
    for (int trial = 0; trial < 12; ++trial) {
        auto sys = fixtures::random_system(rng);
        const auto n = sys.size();
        auto lf = to_float(sys.laplacian());
        double tau = sys.tau_max().to_double() / 2.0;

        // x0 = L y + beta 1 always converges to consensus
        auto y = random_state(rng, n);
        std::uniform_real_distribution<double> beta_dist(-1.0, 1.0);
        double beta = beta_dist(rng);
        Vector<double> x0 = lf * y;
        for (std::size_t i = 0; i < n; ++i) x0[i] += beta;
        auto trace = simulate_continuous(lf, x0, default_time_grid(tau));
        CHECK(consensus_check(trace.limit, 1e-8));

        // with a spanning in-tree every initial state reaches consensus
        if (sys.degeneracy() == 1) {
            auto anywhere = simulate_continuous(lf, random_state(rng, n), default_time_grid(tau));
            CHECK(consensus_check(anywhere.limit, 1e-8));
        }

        // any column of the exact eigenprojection with unequal entries
        // witnesses a non-consensus limit
        if (sys.degeneracy() >= 2) {
            ++degenerate_seen;
            const auto& j = sys.eigenprojection();
            for (std::size_t c = 0; c < n; ++c) {
                bool constant = true;
                for (std::size_t r = 1; r < n; ++r) constant = constant && j(r, c) == j(0, c);
                if (constant) continue;
                auto bad = simulate_continuous(lf, Vector<double>::unit(n, c),
                                               default_time_grid(tau));
                CHECK_FALSE(consensus_check(bad.limit, 1e-8));
                break;
            }
        }
    }
    CHECK(degenerate_seen > 0);
}

TEST_CASE("closed-form exponential identities") {
    std::mt19937 rng(83);
    for (int trial = 0; trial < 12; ++trial) {
        auto sys = fixtures::random_system(rng);
        const auto n = sys.size();
        auto lf = to_float(sys.laplacian());
        auto sf = to_float(consensus_projector(sys));
        double tau = sys.tau_max().to_double() / 2.0;
        Matrix<double> eye = Matrix<double>::identity(n);
        for (double mult : {1.0, 10.0, 100.0}) {
            double t = mult * tau;
            auto lhs1 = matrix_exponential(eye - sf, -t / tau);
            auto rhs1 = sf + std::exp(-t / tau) * (eye - sf);
            CHECK(inf_norm(lhs1 - rhs1) < 1e-9);
            auto lhs2 = matrix_exponential(lf * sf, -t);
            auto rhs2 = eye - sf + matrix_exponential(lf, -t) * sf;
            CHECK(inf_norm(lhs2 - rhs2) < 1e-9);
        }
    }
}

TEST_CASE("pooled dynamics alone cannot replace the projected protocol") {
    // lim exp(-LSt) = I - S + (lim exp(-Lt))S, whose rank exceeds one on a
    // degenerate instance, so running LS instead of the projected protocol
    // matrix would not force consensus
    const auto& j = kSystem.eigenprojection();
    auto s = fixtures::seven_agent_projector();
    auto eye = Matrix<Rational>::identity(7);
    Matrix<Rational> pooled_limit = eye - s + j * s;
    CHECK(rank(pooled_limit) == 2);  // d = 2, strictly above rank one

    // float route agrees with the exact limit at a long horizon
    auto fsys = build_laplacian(to_float(fixtures::seven_agent_dependency()));
    auto ls = fsys.laplacian() * to_float(s);
    auto e = matrix_exponential(ls, -2000.0);
    CHECK(inf_norm(e - to_float(pooled_limit)) < 1e-8);
}

TEST_CASE("ltilde exponential reaches the quasi-consensus map at long horizons") {
    // horizon chosen past the mixing time of the slowest mode
    auto sf = to_float(fixtures::seven_agent_projector());
    auto jf = to_float(fixtures::seven_agent_eigenprojection());
    auto fsys = build_laplacian(to_float(fixtures::seven_agent_dependency()));
    double tau = 1.0 / 14.0;
    auto lt = projected_laplacian(fsys, sf, tau);
    auto e = matrix_exponential(lt, -1000.0 * tau);
    CHECK(inf_norm(e - jf * sf) < 1e-8);
}
