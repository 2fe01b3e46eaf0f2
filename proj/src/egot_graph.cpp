#include "etk/egot/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace etk::egot {

std::string_view to_string(TaskType type) {
    switch (type) {
    case TaskType::grasp: return "grasp";
    case TaskType::release: return "release";
    case TaskType::waiting: return "waiting";
    case TaskType::end: return "end";
    case TaskType::complete: return "complete";
    }
    return "?";
}

std::optional<TaskType> task_type_from(std::string_view word) {
    if (word == "grasp") return TaskType::grasp;
    if (word == "release") return TaskType::release;
    if (word == "waiting") return TaskType::waiting;
    if (word == "end") return TaskType::end;
    if (word == "complete") return TaskType::complete;
    return std::nullopt;
}

const TaskNode* TaskGraph::find(std::string_view id) const {
    for (const TaskNode& node : nodes) {
        if (node.id == id) {
            return &node;
        }
    }
    return nullptr;
}

GraphIndex::GraphIndex(const TaskGraph& g) : graph(g) {
    by_id.reserve(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        by_id.emplace(g.nodes[i].id, i);
    }
    predecessors.resize(g.nodes.size());
    successors.resize(g.nodes.size());
    for (const DependencyEdge& edge : g.edges) {
        const auto from = index_of(edge.from);
        const auto to = index_of(edge.to);
        if (from && to) {
            successors[*from].push_back(*to);
            predecessors[*to].push_back(*from);
        }
    }
}

std::optional<std::size_t> GraphIndex::index_of(std::string_view id) const {
    const auto it = by_id.find(std::string(id));
    if (it == by_id.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

void check_nodes(const TaskGraph& graph, std::vector<Violation>& out) {
    std::set<std::string> ids;
    std::set<std::string> robot_ids;
    for (const RobotDecl& robot : graph.robots) {
        robot_ids.insert(robot.id);
    }
    for (const TaskNode& node : graph.nodes) {
        if (!ids.insert(node.id).second) {
            out.push_back({"duplicate-id", {node.id}, "node id declared twice"});
        }
        if (node.type == TaskType::complete) {
            if (!node.robot.empty()) {
                out.push_back({"node-robot", {node.id}, "complete nodes carry no robot"});
            }
        } else {
            if (node.robot.empty()) {
                out.push_back({"node-robot", {node.id}, "node needs a robot"});
            } else if (!robot_ids.count(node.robot)) {
                out.push_back({"robot-unknown", {node.id, node.robot}, "robot not declared"});
            }
        }
        if ((node.type == TaskType::grasp || node.type == TaskType::release) &&
            node.description.empty()) {
            out.push_back(
                {"description-required", {node.id}, "grasp/release needs a description"});
        }
    }
}

void check_edges(const TaskGraph& graph, std::vector<Violation>& out) {
    for (const DependencyEdge& edge : graph.edges) {
        if (edge.from == edge.to) {
            out.push_back({"self-edge", {edge.from}, "node depends on itself"});
            continue;
        }
        if (!graph.find(edge.from)) {
            out.push_back({"edge-endpoints", {edge.from, edge.to}, "unknown node '" + edge.from + "'"});
        }
        if (!graph.find(edge.to)) {
            out.push_back({"edge-endpoints", {edge.from, edge.to}, "unknown node '" + edge.to + "'"});
        }
    }
}

// Kahn's algorithm; returns ids on a cycle (empty when acyclic).
std::vector<std::string> find_cycle_witness(const GraphIndex& index) {
    std::vector<std::size_t> indegree(index.graph.nodes.size(), 0);
    for (std::size_t i = 0; i < index.graph.nodes.size(); ++i) {
        indegree[i] = index.predecessors[i].size();
    }
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < indegree.size(); ++i) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    std::size_t emitted = 0;
    while (!ready.empty()) {
        const std::size_t i = ready.front();
        ready.pop_front();
        ++emitted;
        for (std::size_t s : index.successors[i]) {
            if (--indegree[s] == 0) {
                ready.push_back(s);
            }
        }
    }
    std::vector<std::string> witness;
    if (emitted != index.graph.nodes.size()) {
        for (std::size_t i = 0; i < indegree.size(); ++i) {
            if (indegree[i] > 0) {
                witness.push_back(index.graph.nodes[i].id);
            }
        }
    }
    return witness;
}

void check_shape(const TaskGraph& graph, const GraphIndex& index, std::vector<Violation>& out) {
    std::vector<std::size_t> completes;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].type == TaskType::complete) {
            completes.push_back(i);
        }
    }
    if (completes.size() != 1) {
        std::vector<std::string> ids;
        for (std::size_t i : completes) {
            ids.push_back(graph.nodes[i].id);
        }
        out.push_back({"complete-unique", ids,
                       "graph needs exactly one complete node, found " +
                           std::to_string(completes.size())});
        return;
    }
    const std::size_t complete = completes.front();
    if (!index.successors[complete].empty()) {
        out.push_back({"complete-sink", {graph.nodes[complete].id},
                       "complete node must have no outgoing edges"});
    }
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (i != complete && index.successors[i].empty()) {
            out.push_back({"other-sinks", {graph.nodes[i].id},
                           "only the complete node may be a sink"});
        }
    }

    // Per-robot end bookkeeping.
    for (const RobotDecl& robot : graph.robots) {
        std::vector<std::size_t> assigned;
        std::vector<std::size_t> ends;
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            if (graph.nodes[i].robot == robot.id) {
                assigned.push_back(i);
                if (graph.nodes[i].type == TaskType::end) {
                    ends.push_back(i);
                }
            }
        }
        if (assigned.empty()) {
            continue;
        }
        if (ends.size() != 1) {
            out.push_back({"end-per-robot", {robot.id},
                           "robot needs exactly one end node, found " +
                               std::to_string(ends.size())});
            continue;
        }
        const auto& succ = index.successors[ends.front()];
        if (std::find(succ.begin(), succ.end(), complete) == succ.end()) {
            out.push_back({"end-to-complete",
                           {graph.nodes[ends.front()].id, graph.nodes[complete].id},
                           "end node must feed the complete node"});
        }
    }

    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].type != TaskType::waiting) {
            continue;
        }
        bool cross = false;
        for (std::size_t p : index.predecessors[i]) {
            const TaskNode& pred = graph.nodes[p];
            if (!pred.robot.empty() && pred.robot != graph.nodes[i].robot) {
                cross = true;
            }
        }
        if (!cross) {
            out.push_back({"waiting-cross-robot", {graph.nodes[i].id},
                           "waiting node needs an incoming edge from another robot"});
        }
    }
}

// Gripper discipline: on every source-to-sink path, the subsequence of one
// robot's grasp/release nodes must alternate starting with grasp. Checked via
// the projection graph: for gripper nodes u, v of robot r, u -> v iff some
// path connects them with no intermediate gripper node of r; v is a start iff
// some path from a graph source reaches it without crossing another gripper
// node of r. The rule holds iff all starts are grasps and every projection
// edge alternates.
void check_gripper_discipline(const TaskGraph& graph, const GraphIndex& index,
                              std::vector<Violation>& out) {
    const std::size_t n = graph.nodes.size();
    for (const RobotDecl& robot : graph.robots) {
        auto is_gripper = [&](std::size_t i) {
            return graph.nodes[i].robot == robot.id &&
                   (graph.nodes[i].type == TaskType::grasp ||
                    graph.nodes[i].type == TaskType::release);
        };
        // Projection edges.
        for (std::size_t u = 0; u < n; ++u) {
            if (!is_gripper(u)) {
                continue;
            }
            std::vector<bool> seen(n, false);
            std::deque<std::size_t> frontier(index.successors[u].begin(),
                                             index.successors[u].end());
            while (!frontier.empty()) {
                const std::size_t v = frontier.front();
                frontier.pop_front();
                if (seen[v]) {
                    continue;
                }
                seen[v] = true;
                if (is_gripper(v)) {
                    if (graph.nodes[v].type == graph.nodes[u].type) {
                        out.push_back({"gripper-discipline",
                                       {graph.nodes[u].id, graph.nodes[v].id},
                                       robot.id + ": consecutive " +
                                           std::string(to_string(graph.nodes[u].type)) +
                                           " without alternation"});
                    }
                    continue; // stop at the first gripper node on this branch
                }
                for (std::size_t s : index.successors[v]) {
                    frontier.push_back(s);
                }
            }
        }
        // Starts: gripper nodes reachable from a source without crossing
        // another of this robot's gripper nodes.
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> frontier;
        for (std::size_t i = 0; i < n; ++i) {
            if (index.predecessors[i].empty()) {
                frontier.push_back(i);
            }
        }
        while (!frontier.empty()) {
            const std::size_t v = frontier.front();
            frontier.pop_front();
            if (seen[v]) {
                continue;
            }
            seen[v] = true;
            if (is_gripper(v)) {
                if (graph.nodes[v].type == TaskType::release) {
                    out.push_back({"gripper-discipline", {graph.nodes[v].id},
                                   robot.id + ": release reachable before any grasp"});
                }
                continue;
            }
            for (std::size_t s : index.successors[v]) {
                frontier.push_back(s);
            }
        }
    }
}

} // namespace

std::vector<Violation> validate(const TaskGraph& graph) {
    std::vector<Violation> out;
    check_nodes(graph, out);
    check_edges(graph, out);
    if (!out.empty()) {
        // Structural rules below assume ids resolve; report what we have.
        return out;
    }
    const GraphIndex index(graph);
    const auto cycle = find_cycle_witness(index);
    if (!cycle.empty()) {
        out.push_back({"acyclicity", cycle, "dependency cycle"});
        return out;
    }
    check_shape(graph, index, out);
    check_gripper_discipline(graph, index, out);
    return out;
}

std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) {
            out << "; ";
        }
        out << violations[i].rule << " [";
        for (std::size_t k = 0; k < violations[i].ids.size(); ++k) {
            out << (k ? " " : "") << violations[i].ids[k];
        }
        out << "] " << violations[i].message;
    }
    return out.str();
}

bool is_linearization(const TaskGraph& graph, const std::vector<std::string>& order) {
    if (order.size() != graph.nodes.size()) {
        return false;
    }
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!graph.find(order[i]) || position.count(order[i])) {
            return false;
        }
        position[order[i]] = i;
    }
    for (const DependencyEdge& edge : graph.edges) {
        if (position.at(edge.from) >= position.at(edge.to)) {
            return false;
        }
    }
    return true;
}

} // namespace etk::egot
