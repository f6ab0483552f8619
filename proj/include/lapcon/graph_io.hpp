#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lapcon/digraph.hpp"
#include "lapcon/error.hpp"
#include "lapcon/rational.hpp"

namespace lapcon {

/// Double rendered with 12 significant digits.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Edge-list format: optional "n <count>" line, then one arc per line as
/// "i j w" with 1-based vertices; weights are integers, decimals, or "p/q"
/// fractions, all read exactly. '#' starts a comment.
inline WeightedDigraph parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int declared_n = -1;
    struct RawArc {
        int tail, head, line;
        Rational weight;
    };
    std::vector<RawArc> raw;
    int max_vertex = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) continue;
        if (first == "n") {
            std::string count;
            if (!(fields >> count)) throw ParseError("expected a vertex count after 'n'", line_no);
            try {
                declared_n = static_cast<int>(std::stol(count));
            } catch (const std::exception&) {
                throw ParseError("invalid vertex count", line_no);
            }
            if (declared_n < 1) throw ParseError("vertex count must be at least 1", line_no);
            continue;
        }
        std::string head_text, weight_text;
        if (!(fields >> head_text >> weight_text))
            throw ParseError("expected 'i j w'", line_no);
        std::string extra;
        if (fields >> extra) throw ParseError("unexpected trailing field", line_no);
        int tail, head;
        Rational w;
        try {
            tail = static_cast<int>(std::stol(first));
            head = static_cast<int>(std::stol(head_text));
        } catch (const std::exception&) {
            throw ParseError("invalid vertex id", line_no);
        }
        try {
            w = Rational::from_string(weight_text);
        } catch (const std::exception&) {
            throw ParseError("invalid weight '" + weight_text + "'", line_no);
        }
        if (tail < 1 || head < 1) throw ParseError("vertices are 1-based", line_no);
        if (tail == head) throw ParseError("self-loops are not allowed", line_no);
        if (!(w.sign() > 0)) throw ParseError("weights must be positive", line_no);
        max_vertex = std::max({max_vertex, tail, head});
        raw.push_back({tail, head, line_no, std::move(w)});
    }
    int n = declared_n > 0 ? declared_n : max_vertex;
    if (n < 1) throw ParseError("graph file declares no vertices");
    if (declared_n > 0 && max_vertex > declared_n)
        throw ParseError("arc endpoint exceeds the declared vertex count");
    WeightedDigraph g(n);
    for (auto& arc : raw) {
        try {
            g.add_arc(arc.tail - 1, arc.head - 1, std::move(arc.weight));
        } catch (const InvalidInput& e) {
            throw ParseError(e.what(), arc.line);
        }
    }
    return g;
}

/// JSON format: {"n": <count>, "edges": [[i, j, w], ...]} with 1-based
/// vertices; weights may be numbers or strings, decimals convert exactly
/// from their printed representation.
inline WeightedDigraph parse_graph_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer())
        throw ParseError("JSON graph needs an integer field 'n'");
    int n = doc["n"].get<int>();
    if (n < 1) throw ParseError("vertex count must be at least 1");
    WeightedDigraph g(n);
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw ParseError("'edges' must be an array");
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 3)
                throw ParseError("each edge must be [i, j, w]");
            if (!e[0].is_number_integer() || !e[1].is_number_integer())
                throw ParseError("edge endpoints must be integers");
            int tail = e[0].get<int>();
            int head = e[1].get<int>();
            Rational w;
            try {
                // dump() of a JSON number is its shortest round-trip decimal,
                // so the rational conversion is exact for what was written
                w = Rational::from_string(e[2].is_string()
                                              ? e[2].get<std::string>()
                                              : e[2].dump());
            } catch (const std::exception&) {
                throw ParseError("invalid edge weight " + e[2].dump());
            }
            if (tail < 1 || head < 1 || tail > n || head > n)
                throw ParseError("edge endpoint out of range");
            if (!(w.sign() > 0)) throw ParseError("weights must be positive");
            try {
                g.add_arc(tail - 1, head - 1, std::move(w));
            } catch (const InvalidInput& err) {
                throw ParseError(err.what());
            }
        }
    }
    return g;
}

/// Reads a graph file, dispatching on the leading character ('{' = JSON).
inline WeightedDigraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? parse_graph_json(text) : parse_graph_text(text);
    }
    throw ParseError("empty graph file: " + path);
}

/// Comma-separated rational/decimal values, e.g. "1,0,0" or "1/2,3.5".
inline Vector<Rational> parse_vector(const std::string& text) {
    std::vector<Rational> entries;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        // trim
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ParseError("empty vector entry");
        try {
            entries.push_back(Rational::from_string(item.substr(b, e - b + 1)));
        } catch (const std::exception&) {
            throw ParseError("invalid vector entry '" + item + "'");
        }
    }
    if (entries.empty()) throw ParseError("empty vector");
    return Vector<Rational>(std::move(entries));
}

/// Exact matrix as rows of "p/q" strings.
inline nlohmann::ordered_json matrix_to_json(const Matrix<Rational>& m) {
    nlohmann::ordered_json out;
    out["backend"] = "exact";
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
        rows.push_back(std::move(row));
    }
    out["entries"] = std::move(rows);
    return out;
}

/// Float matrix, entries rounded to 12 significant digits.
inline nlohmann::ordered_json matrix_to_json(const Matrix<double>& m) {
    nlohmann::ordered_json out;
    out["backend"] = "float";
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(std::stod(format_double(m(i, j))));
        rows.push_back(std::move(row));
    }
    out["entries"] = std::move(rows);
    return out;
}

/// Parses a serialized exact matrix back; entries must be bit-identical
/// rationals after a round trip.
inline Matrix<Rational> matrix_from_json(const nlohmann::json& doc) {
    if (!doc.contains("rows") || !doc.contains("cols") || !doc.contains("entries"))
        throw ParseError("matrix document needs rows/cols/entries");
    Matrix<Rational> m(doc["rows"].get<std::size_t>(), doc["cols"].get<std::size_t>());
    const auto& rows = doc["entries"];
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = Rational::from_string(rows[i][j].get<std::string>());
    return m;
}

}  // namespace lapcon
