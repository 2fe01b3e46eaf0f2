#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "etk/egot/graph.hpp"

namespace etk::egot {

class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& expected)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": expected " + expected),
          line(line),
          col(col),
          expected(expected) {}
    int line;
    int col;
    std::string expected;
};

class SemanticError : public Error {
public:
    explicit SemanticError(std::vector<Violation> violations)
        : Error("semantic error: " + describe(violations)), violations(std::move(violations)) {}
    std::vector<Violation> violations;
};

// Line-oriented task graph DSL, `#` comments:
//   robot <id> "<label>"
//   node <id> <grasp|release|waiting|end> <robot-id> ["<description>"] [after <id> ...]
//   node <id> complete after <id> ...
// The parsed graph is fully validated; invalid structure raises
// SemanticError with every violation.
TaskGraph parse_graph(std::string_view text);

// Canonical DSL form; parse(serialize(parse(t))) == parse(t).
std::string serialize_graph(const TaskGraph& graph);

TaskGraph load_graph(const std::filesystem::path& path);
void save_graph(const TaskGraph& graph, const std::filesystem::path& path);

// Graphviz rendering: one node line per vertex (shape keyed by task type),
// one edge line per dependency; cross-robot edges are styled as barriers.
std::string render_dot(const TaskGraph& graph);

} // namespace etk::egot
