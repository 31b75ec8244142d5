#include "edpc/grid.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace edpc {

int GridGraph::eid(Patch a, Patch b) const {
    if (a > b) std::swap(a, b);
    if (horizontal_pair(a, b)) {
        // a = (i, j), b = (i, j+1)
        return (a.i - 1) * (L - 1) + (a.j - 1);
    }
    if (vertical_pair(a, b)) {
        // a = (i, j), b = (i+1, j)
        return L * (L - 1) + (a.i - 1) * L + (a.j - 1);
    }
    throw LayoutError("eid of non-adjacent patches");
}

std::pair<Patch, Patch> GridGraph::edge(int id) const {
    int h = L * (L - 1);
    if (id < h) {
        Patch a{id / (L - 1) + 1, id % (L - 1) + 1};
        return {a, {a.i, a.j + 1}};
    }
    id -= h;
    Patch a{id / L + 1, id % L + 1};
    return {a, {a.i + 1, a.j}};
}

std::vector<Patch> GridGraph::neighbors(Patch p) const {
    std::vector<Patch> out;
    const std::array<Patch, 4> cand = {Patch{p.i - 1, p.j}, Patch{p.i + 1, p.j},
                                       Patch{p.i, p.j - 1}, Patch{p.i, p.j + 1}};
    for (Patch q : cand)
        if (in_bounds(q)) out.push_back(q);
    return out;
}

std::vector<Patch> GridGraph::black_vertices() const {
    std::vector<Patch> out;
    for (int i = 2; i <= L; i += 2)
        for (int j = 2; j <= L; j += 2) out.push_back({i, j});
    return out;
}

std::vector<Patch> GridGraph::perimeter() const {
    std::vector<Patch> out;
    for (int i = 1; i <= L; ++i)
        for (int j = 1; j <= L; ++j)
            if (i == 1 || i == L || j == 1 || j == L) out.push_back({i, j});
    return out;
}

GridGraph build_grid(int L, bool allow_even) {
    if (L < 3) throw LayoutError("grid side must be at least 3");
    if (L % 2 == 0 && !allow_even)
        throw LayoutError("grid side must be odd so data patches keep a full "
                          "ancilla border (pass allow_even to override)");
    GridGraph g;
    g.L = L;
    return g;
}

Embedding embed_qubits(const LogicalCircuit& c, const GridGraph& g) {
    auto blacks = g.black_vertices();
    if (static_cast<size_t>(c.n_logical) > blacks.size())
        throw LayoutError("grid too small: " + std::to_string(blacks.size()) +
                          " data patches for " + std::to_string(c.n_logical) +
                          " qubits");
    Embedding e;
    e.qubit_patch.assign(blacks.begin(), blacks.begin() + c.n_logical);
    e.boundary = g.perimeter();
    return e;
}

bool OperatorGraph::arc_allowed(Patch from, Patch to) const {
    if (!grid->in_bounds(from) || !grid->in_bounds(to)) return false;
    if (!vertex_present[grid->vid(from)] || !vertex_present[grid->vid(to)])
        return false;
    if (!edge_enabled[grid->eid(from, to)]) return false;
    const auto& arcs = out_arcs[grid->vid(from)];
    return std::find(arcs.begin(), arcs.end(), grid->vid(to)) != arcs.end();
}

OperatorGraph build_operator_graph(const GridGraph& g,
                                   const std::vector<TerminalPair>& terminals,
                                   const std::vector<uint8_t>& edge_mask) {
    std::set<int> controls, targets;
    for (const auto& t : terminals) {
        if (!g.in_bounds(t.control) || !g.in_bounds(t.target))
            throw LayoutError("terminal out of bounds");
        if (!g.is_data(t.control) || !g.is_data(t.target))
            throw LayoutError("terminal is not a data patch");
        if (!controls.insert(g.vid(t.control)).second)
            throw LayoutError("repeated control terminal");
        if (!targets.insert(g.vid(t.target)).second)
            throw LayoutError("repeated target terminal");
        if (controls.count(g.vid(t.target)) || targets.count(g.vid(t.control)))
            throw LayoutError("terminal vertex used in two pairs");
    }

    OperatorGraph og;
    og.grid = &g;
    og.vertex_present.assign(g.vertex_count(), 1);
    og.out_arcs.assign(g.vertex_count(), {});
    og.edge_enabled = edge_mask.empty()
                          ? std::vector<uint8_t>(g.edge_count(), 1)
                          : edge_mask;

    for (int id = 0; id < g.vertex_count(); ++id) {
        Patch p = g.patch(id);
        if (g.is_data(p) && !controls.count(id) && !targets.count(id)) {
            og.vertex_present[id] = 0;
            continue;
        }
    }
    for (int id = 0; id < g.vertex_count(); ++id) {
        if (!og.vertex_present[id]) continue;
        Patch p = g.patch(id);
        bool is_ctrl = controls.count(id) != 0;
        bool is_targ = targets.count(id) != 0;
        if (is_targ) continue;  // only incoming horizontal arcs
        for (Patch q : g.neighbors(p)) {
            int qid = g.vid(q);
            if (!og.vertex_present[qid]) continue;
            bool vert = vertical_pair(p, q);
            if (is_ctrl && !vert) continue;           // controls leave vertically
            if (targets.count(qid) && vert) continue; // targets entered horizontally
            if (controls.count(qid)) continue;        // controls have no incoming
            og.out_arcs[id].push_back(qid);
        }
    }
    return og;
}

std::vector<std::pair<int, int>> SwapLayout::boundary_sites() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 1; r <= rows; ++r)
        for (int c = 1; c <= cols; ++c)
            if (is_boundary_site(r, c)) out.emplace_back(r, c);
    return out;
}

std::vector<std::pair<int, int>> SwapLayout::site_neighbors(int r, int c) const {
    std::vector<std::pair<int, int>> out;
    const std::array<std::pair<int, int>, 4> cand = {
        std::pair{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
    for (auto [rr, cc] : cand)
        if (site_in_bounds(rr, cc)) out.emplace_back(rr, cc);
    return out;
}

SwapLayout build_swap_layout(const LogicalCircuit& c, int rows, int cols) {
    if (rows < 1 || cols < 1) throw LayoutError("bad swap layout dimensions");
    if (static_cast<long>(rows) * cols < c.n_logical)
        throw LayoutError("swap layout too small: " +
                          std::to_string(rows * cols) + " sites for " +
                          std::to_string(c.n_logical) + " qubits");
    SwapLayout lay;
    lay.rows = rows;
    lay.cols = cols;
    lay.side = rows + cols - 1;
    for (int q = 0; q < c.n_logical; ++q)
        lay.qubit_site.emplace_back(q / cols + 1, q % cols + 1);
    return lay;
}

std::string layout_to_json(const GridGraph& g, const Embedding& e) {
    nlohmann::ordered_json j;
    j["L"] = g.L;
    auto& verts = j["vertices"] = nlohmann::ordered_json::array();
    for (int id = 0; id < g.vertex_count(); ++id) {
        Patch p = g.patch(id);
        const char* col = g.color(p) == Color::Black   ? "black"
                          : g.color(p) == Color::White ? "white"
                                                       : "grey";
        verts.push_back({{"i", p.i}, {"j", p.j}, {"color", col}});
    }
    auto& emb = j["embedding"] = nlohmann::ordered_json::array();
    for (size_t q = 0; q < e.qubit_patch.size(); ++q)
        emb.push_back({{"qubit", q},
                       {"patch", {e.qubit_patch[q].i, e.qubit_patch[q].j}}});
    auto& bnd = j["boundary"] = nlohmann::ordered_json::array();
    for (Patch p : e.boundary) bnd.push_back({p.i, p.j});
    return j.dump(2);
}

}  // namespace edpc
