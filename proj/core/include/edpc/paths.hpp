#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edpc/grid.hpp"

namespace edpc {

struct PathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PathRole : uint8_t {
    Cnot,       // data control -> data target
    RotationZ,  // data qubit -> boundary ancilla, Z-basis fan-out
    RotationX,  // data qubit -> boundary ancilla, X-basis fan-out
};

/// A simple grid path. For CNOT roles the first edge is vertical and the
/// last horizontal; rotation paths relax the requirement at the boundary end.
struct OperatorPath {
    std::vector<Patch> vertices;
    PathRole role = PathRole::Cnot;
    GateKind rotation = GateKind::S;  // rotation roles only
    int gate_index = -1;              // originating gate in the circuit, if any

    Patch front() const { return vertices.front(); }
    Patch back() const { return vertices.back(); }
    int edge_count() const { return static_cast<int>(vertices.size()) - 1; }
};

struct EDPSet {
    std::vector<OperatorPath> paths;

    /// Throws PathError if paths are malformed, share an edge, or share ends.
    void check_valid(const GridGraph& g) const;
    bool vertex_disjoint() const;
};

/// Two-stage split of an edge-disjoint set into vertex-disjoint segment sets.
struct Fragmentation {
    struct Segment {
        int parent = 0;  // index into the source EDPSet
        int first = 0;   // vertex range [first, last] within the parent path
        int last = 0;
        int label = 1;
    };
    std::vector<Segment> segments;               // parent-major, in path order
    std::vector<std::vector<int>> edge_labels;   // per path, per edge, 1 or 2

    bool two_phase() const {
        for (const auto& s : segments)
            if (s.label == 2) return true;
        return false;
    }
    /// Structural validation against the source set: per-phase vertex
    /// disjointness, label partition, and reassembly.
    void check_valid(const EDPSet& p) const;
};

/// Connected components of the subgraph induced by crossing vertices.
struct CrossingComponent {
    enum class Kind { Isolated, HorizontalPath, VerticalPath };
    Kind kind;
    std::vector<Patch> vertices;
};

std::vector<CrossingComponent> crossing_components(const GridGraph& g,
                                                   const EDPSet& p);

Fragmentation fragment_edp(const GridGraph& g, const EDPSet& p);

/// Greedy maximum edge-disjoint routing: repeatedly routes the terminal pair
/// with the currently shortest path, removing used edges. Unroutable pairs
/// are skipped. Returns (set, indices of connected pairs).
std::pair<EDPSet, std::vector<int>> greedy_max_edp(
    const OperatorGraph& og, const std::vector<TerminalPair>& terminals);

/// Covers all terminal pairs by iterating greedy_max_edp on the remainder.
std::vector<EDPSet> greedy_t_operator_set(
    const GridGraph& g, const std::vector<TerminalPair>& terminals,
    const std::vector<uint8_t>& edge_mask = {});

/// Explicit construction for a perfect pairing of all data qubits: one
/// rectilinear detour path per pair, conflict-graph coloring into
/// edge-disjoint classes. At most 2*sqrt(n) - 1 classes.
std::vector<EDPSet> dense_cnot_paths(const GridGraph& g,
                                     const std::vector<TerminalPair>& terminals);

/// Unit-capacity directed flow network with virtual source and sink.
struct FlowNetwork {
    struct Arc {
        int from = 0;
        int to = 0;
        int flow = 0;  // 0 or 1; the reverse residual is implied
    };
    int vertex_count = 0;
    int source = 0;
    int sink = 0;
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out;  // vertex -> arc indices (fixed order)

    int add_vertex() {
        out.emplace_back();
        return vertex_count++;
    }
    void add_arc(int from, int to) {
        out[from].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({from, to, 0});
    }
};

/// Breadth-first augmenting paths; integral unit flow. Returns |f|.
int max_flow(FlowNetwork& net);

/// Decomposes a unit flow into source-to-sink vertex sequences; flow cycles
/// are discarded. Virtual endpoints are kept (callers strip them).
std::vector<std::vector<int>> extract_flow_paths(const FlowNetwork& net);

/// Splits every vertex into an in/out pair joined by a unit arc, so that a
/// flow on the result yields vertex-disjoint paths in the original.
/// Vertex v maps to in-vertex 2v and out-vertex 2v+1.
FlowNetwork vertex_split(const FlowNetwork& net);

}  // namespace edpc
