#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "lapcon/cli.hpp"
#include "lapcon/graph_io.hpp"

using lapcon::Matrix;
using lapcon::ParseError;
using lapcon::Rational;
using lapcon::WeightedDigraph;
using lapcon::parse_graph_json;
using lapcon::parse_graph_text;
using lapcon::parse_vector;

TEST_CASE("edge list parsing") {
    auto g = parse_graph_text("# a comment\n1 2 3\n2 1 1/2  # inline comment\n\n3 1 0.25\n");
    CHECK(g.vertex_count() == 3);
    REQUIRE(g.arcs().size() == 3);
    CHECK(g.arcs()[0].tail == 0);
    CHECK(g.arcs()[0].head == 1);
    CHECK(g.arcs()[0].weight == Rational(3));
    CHECK(g.arcs()[1].weight == Rational(1, 2));
    CHECK(g.arcs()[2].weight == Rational(1, 4));
}

TEST_CASE("edge list with a declared vertex count") {
    auto g = parse_graph_text("n 3\n1 2 1\n");
    CHECK(g.vertex_count() == 3);
    auto isolated = parse_graph_text("n 4\n");
    CHECK(isolated.vertex_count() == 4);
    CHECK(isolated.arcs().empty());
}

TEST_CASE("edge list parse errors carry line numbers") {
    try {
        parse_graph_text("1 2 1\n2 2 5\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    try {
        parse_graph_text("1 2 1\n1 3 -2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_graph_text("1 2\n"), ParseError);          // missing weight
    CHECK_THROWS_AS(parse_graph_text("1 2 1 9\n"), ParseError);      // trailing field
    CHECK_THROWS_AS(parse_graph_text("x 2 1\n"), ParseError);        // bad vertex
    CHECK_THROWS_AS(parse_graph_text("n 2\n1 3 1\n"), ParseError);   // out of range
    CHECK_THROWS_AS(parse_graph_text("1 2 1\n1 2 2\n"), ParseError); // duplicate
    CHECK_THROWS_AS(parse_graph_text("# only comments\n"), ParseError);
}

TEST_CASE("json graph parsing") {
    auto g = parse_graph_json(R"({"n": 3, "edges": [[1, 2, 3], [2, 1, "1/2"], [3, 1, 0.3]]})");
    CHECK(g.vertex_count() == 3);
    CHECK(g.arcs()[0].weight == Rational(3));
    CHECK(g.arcs()[1].weight == Rational(1, 2));
    CHECK(g.arcs()[2].weight == Rational(3, 10));  // decimal text converts exactly

    auto empty = parse_graph_json(R"({"n": 3, "edges": []})");
    CHECK(empty.vertex_count() == 3);

    CHECK_THROWS_AS(parse_graph_json("{"), ParseError);
    CHECK_THROWS_AS(parse_graph_json(R"({"edges": []})"), ParseError);
    CHECK_THROWS_AS(parse_graph_json(R"({"n": 2, "edges": [[1, 1, 2]]})"), ParseError);
    CHECK_THROWS_AS(parse_graph_json(R"({"n": 2, "edges": [[1, 2, 0]]})"), ParseError);
}

TEST_CASE("file loading dispatches on the leading character") {
    namespace fs = std::filesystem;
    auto edges = fs::temp_directory_path() / "io_dispatch.edges";
    {
        std::ofstream out(edges);
        out << "  # leading comment\n1 2 1\n";
    }
    CHECK(lapcon::load_graph_file(edges.string()).vertex_count() == 2);

    auto json = fs::temp_directory_path() / "io_dispatch.json";
    {
        std::ofstream out(json);
        out << "  {\"n\": 4, \"edges\": [[1, 2, 1]]}";
    }
    CHECK(lapcon::load_graph_file(json.string()).vertex_count() == 4);

    auto empty = fs::temp_directory_path() / "io_dispatch_empty.edges";
    { std::ofstream out(empty); }
    CHECK_THROWS_AS(lapcon::load_graph_file(empty.string()), ParseError);
    CHECK_THROWS_AS(lapcon::load_graph_file("/definitely/not/here"), ParseError);
}

TEST_CASE("vector parsing") {
    auto v = parse_vector("1, 0, 1/2, 0.25");
    REQUIRE(v.size() == 4);
    CHECK(v[2] == Rational(1, 2));
    CHECK(v[3] == Rational(1, 4));
    CHECK_THROWS_AS(parse_vector(""), ParseError);
    CHECK_THROWS_AS(parse_vector("1,,2"), ParseError);
    CHECK_THROWS_AS(parse_vector("1,zz"), ParseError);
}

TEST_CASE("exact matrix serialization round trips bit-exactly") {
    auto s = fixtures::seven_agent_projector();
    auto doc = lapcon::matrix_to_json(s);
    auto back = lapcon::matrix_from_json(doc);
    CHECK(back == s);

    // through a full dump/parse cycle too
    auto text = doc.dump();
    auto reparsed = lapcon::matrix_from_json(nlohmann::json::parse(text));
    CHECK(reparsed == s);
}

TEST_CASE("float formatting uses 12 significant digits") {
    CHECK(lapcon::format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(lapcon::format_double(26.0 / 110.0) == "0.236363636364");
    CHECK(lapcon::format_double(0.0) == "0");
}

TEST_CASE("analyze report is deterministic") {
    auto g = fixtures::seven_agent_digraph();
    auto inst1 = lapcon::cli::make_instance(g, false);
    auto inst2 = lapcon::cli::make_instance(g, false);
    auto tau1 = lapcon::cli::resolve_tau(inst1, std::nullopt);
    auto tau2 = lapcon::cli::resolve_tau(inst2, std::nullopt);
    auto r1 = lapcon::cli::analyze_report(inst1, tau1, {"all"});
    auto r2 = lapcon::cli::analyze_report(inst2, tau2, {"all"});
    CHECK(r1.dump() == r2.dump());
}

TEST_CASE("analyze report content for the seven agent system") {
    auto inst = lapcon::cli::make_instance(fixtures::seven_agent_digraph(), false);
    auto tau = lapcon::cli::resolve_tau(inst, std::nullopt);
    auto doc = lapcon::cli::analyze_report(inst, tau, {"all"});
    CHECK(doc["n"] == 7);
    CHECK(doc["backend"] == "exact");
    CHECK(doc["d"] == 2);
    CHECK(doc["has_spanning_in_tree"] == false);
    CHECK(doc["tau_max"] == "1/7");
    CHECK(doc["tau"] == "1/14");
    CHECK(doc["matrices"]["J"]["entries"][0][0] == "2/5");
    CHECK(doc["matrices"]["J"]["entries"][5][3] == "6/55");
    CHECK(doc["matrices"]["S"]["entries"][0][0] == "9/11");  // 18/22 reduced
    CHECK(doc["matrices"]["JS"]["entries"][6][4] == "27/110");

    // the float view drops exact entries but keeps the same structure
    auto fin = lapcon::cli::make_instance(fixtures::seven_agent_digraph(), true);
    auto ftau = lapcon::cli::resolve_tau(fin, std::nullopt);
    auto fdoc = lapcon::cli::analyze_report(fin, ftau, {"J"});
    CHECK(fdoc["backend"] == "float");
    CHECK(fdoc["matrices"]["J"]["backend"] == "float");
    double j00 = fdoc["matrices"]["J"]["entries"][0][0].get<double>();
    CHECK(j00 == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("tau resolution") {
    auto inst = lapcon::cli::make_instance(fixtures::seven_agent_digraph(), false);
    CHECK(lapcon::cli::resolve_tau(inst, std::nullopt).exact == Rational(1, 14));
    CHECK(lapcon::cli::resolve_tau(inst, std::string("max")).exact == Rational(1, 7));
    CHECK(lapcon::cli::resolve_tau(inst, std::string("1/10")).exact == Rational(1, 10));
    CHECK_THROWS_AS(lapcon::cli::resolve_tau(inst, std::string("1/2")),
                    lapcon::TauOutOfRange);
    CHECK_THROWS_AS(lapcon::cli::resolve_tau(inst, std::string("0")),
                    lapcon::TauOutOfRange);

    // unbounded tau on the arcless graph
    WeightedDigraph isolated(3);
    auto arcless = lapcon::cli::make_instance(isolated, false);
    CHECK(lapcon::cli::resolve_tau(arcless, std::nullopt).exact == Rational(1));
    CHECK_THROWS_AS(lapcon::cli::resolve_tau(arcless, std::string("max")),
                    lapcon::TauOutOfRange);
}
