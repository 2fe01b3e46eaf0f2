#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "etk/errors.hpp"

namespace etk::egot {

// The five task types. Grasp and Release act on the world; Waiting is a
// synchronization point on the other robot; End marks a robot's last node;
// Complete is the graph's single terminal.
enum class TaskType { grasp, release, waiting, end, complete };

std::string_view to_string(TaskType type);
std::optional<TaskType> task_type_from(std::string_view word);

struct TaskNode {
    std::string id;
    TaskType type = TaskType::grasp;
    std::string robot;       // empty only for complete nodes
    std::string description; // required for grasp/release
    std::string target;      // optional reference into a simulator world

    bool operator==(const TaskNode&) const = default;
};

struct DependencyEdge {
    std::string from;
    std::string to;

    bool operator==(const DependencyEdge&) const = default;
};

struct RobotDecl {
    std::string id;
    std::string label;

    bool operator==(const RobotDecl&) const = default;
};

struct TaskGraph {
    std::vector<RobotDecl> robots;
    std::vector<TaskNode> nodes;
    std::vector<DependencyEdge> edges;

    const TaskNode* find(std::string_view id) const;
    bool operator==(const TaskGraph&) const = default;
};

// Adjacency built once per graph; node references are indices into
// graph.nodes.
struct GraphIndex {
    explicit GraphIndex(const TaskGraph& graph);

    const TaskGraph& graph;
    std::unordered_map<std::string, std::size_t> by_id;
    std::vector<std::vector<std::size_t>> predecessors;
    std::vector<std::vector<std::size_t>> successors;

    std::optional<std::size_t> index_of(std::string_view id) const;
};

struct Violation {
    std::string rule;             // stable slug, e.g. "acyclicity"
    std::vector<std::string> ids; // witnessing node/edge ids
    std::string message;
};

// Returns every violated structural invariant with its witnesses. An empty
// result means the graph is valid.
std::vector<Violation> validate(const TaskGraph& graph);

std::string describe(const std::vector<Violation>& violations);

// True iff `order` contains every node exactly once and respects every edge.
bool is_linearization(const TaskGraph& graph, const std::vector<std::string>& order);

class NotValidated : public Error {
public:
    explicit NotValidated(std::vector<Violation> violations)
        : Error("graph does not validate: " + describe(violations)),
          violations(std::move(violations)) {}
    std::vector<Violation> violations;
};

} // namespace etk::egot
