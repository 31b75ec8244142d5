#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "edpc/circuit.hpp"

namespace edpc {

struct LayoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Patch coordinate, 1-based (row, column).
struct Patch {
    int i = 0;
    int j = 0;
    friend auto operator<=>(const Patch&, const Patch&) = default;
};

inline bool adjacent(Patch a, Patch b) {
    return (a.i == b.i && (a.j == b.j + 1 || a.j + 1 == b.j)) ||
           (a.j == b.j && (a.i == b.i + 1 || a.i + 1 == b.i));
}
inline bool horizontal_pair(Patch a, Patch b) {
    return a.i == b.i && (a.j == b.j + 1 || a.j + 1 == b.j);
}
inline bool vertical_pair(Patch a, Patch b) {
    return a.j == b.j && (a.i == b.i + 1 || a.i + 1 == b.i);
}

enum class Color : uint8_t { Black, Grey, White };

/// L x L patch grid. Joint XX measurements are available along horizontal
/// edges, joint ZZ along vertical edges.
struct GridGraph {
    int L = 0;

    bool in_bounds(Patch p) const {
        return p.i >= 1 && p.i <= L && p.j >= 1 && p.j <= L;
    }
    int vid(Patch p) const { return (p.i - 1) * L + (p.j - 1); }
    Patch patch(int id) const { return {id / L + 1, id % L + 1}; }
    int vertex_count() const { return L * L; }
    int edge_count() const { return 2 * L * (L - 1); }

    /// Undirected edge id; horizontal edges first, then vertical.
    int eid(Patch a, Patch b) const;
    std::pair<Patch, Patch> edge(int eid) const;

    /// Neighbors in fixed order: up, down, left, right (in-bounds only).
    std::vector<Patch> neighbors(Patch p) const;

    Color color(Patch p) const {
        bool ei = p.i % 2 == 0, ej = p.j % 2 == 0;
        if (ei && ej) return Color::Black;
        if (!ei && !ej) return Color::White;
        return Color::Grey;
    }
    bool is_data(Patch p) const { return color(p) == Color::Black; }

    std::vector<Patch> black_vertices() const;  // (row, col) lexicographic
    std::vector<Patch> perimeter() const;       // boundary ring, lexicographic
};

GridGraph build_grid(int L, bool allow_even = false);

/// Assignment of circuit qubits to data patches plus the boundary set B
/// where rotations may consume magic states.
struct Embedding {
    std::vector<Patch> qubit_patch;  // index = logical qubit
    std::vector<Patch> boundary;     // B

    int qubit_at(Patch p) const {
        for (size_t q = 0; q < qubit_patch.size(); ++q)
            if (qubit_patch[q] == p) return static_cast<int>(q);
        return -1;
    }
};

Embedding embed_qubits(const LogicalCircuit& c, const GridGraph& g);

/// Control/target pair of data patches for one long-range CNOT.
struct TerminalPair {
    Patch control;
    Patch target;
};

/// Directed routing graph for a terminal set: control vertices keep only
/// outgoing vertical arcs, target vertices only incoming horizontal arcs,
/// all other data vertices are removed. Ancilla arcs are bidirectional.
struct OperatorGraph {
    const GridGraph* grid = nullptr;
    std::vector<uint8_t> vertex_present;           // by vid
    std::vector<std::vector<int>> out_arcs;        // vid -> neighbor vids, fixed order
    std::vector<uint8_t> edge_enabled;             // by undirected eid

    bool arc_allowed(Patch from, Patch to) const;
};

/// `edge_mask` optionally disables grid edges (already consumed by other
/// paths); empty means all enabled.
OperatorGraph build_operator_graph(const GridGraph& g,
                                   const std::vector<TerminalPair>& terminals,
                                   const std::vector<uint8_t>& edge_mask = {});

/// Data-site layout for the swap-based compiler: an L1 x L2 arrangement of
/// data qubits with diagonal adjacency, interleaved 1:1 with ancilla patches.
struct SwapLayout {
    int rows = 0;  // L1
    int cols = 0;  // L2
    int side = 0;  // bounding square side of the underlying patch grid

    Patch site_patch(int r, int c) const {  // r in [1..rows], c in [1..cols]
        return {r + c - 1, rows - r + c};
    }
    bool site_in_bounds(int r, int c) const {
        return r >= 1 && r <= rows && c >= 1 && c <= cols;
    }
    bool is_boundary_site(int r, int c) const {
        return r == 1 || r == rows || c == 1 || c == cols;
    }

    std::vector<std::pair<int, int>> boundary_sites() const;
    /// Diagonal neighbor sites of (r, c) in fixed order.
    std::vector<std::pair<int, int>> site_neighbors(int r, int c) const;

    std::vector<std::pair<int, int>> qubit_site;  // index = logical qubit
};

SwapLayout build_swap_layout(const LogicalCircuit& c, int rows, int cols);

std::string layout_to_json(const GridGraph& g, const Embedding& e);

}  // namespace edpc
