#include "edpc/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace edpc {

namespace {

std::string patch_str(Patch p) {
    return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
}

}  // namespace

void EDPSet::check_valid(const GridGraph& g) const {
    std::set<int> used_edges;
    std::set<int> used_ends;
    for (const auto& p : paths) {
        if (p.vertices.size() < 2) throw PathError("path with fewer than 2 vertices");
        std::set<int> seen;
        for (size_t k = 0; k < p.vertices.size(); ++k) {
            Patch v = p.vertices[k];
            if (!g.in_bounds(v)) throw PathError("path leaves the grid");
            if (!seen.insert(g.vid(v)).second)
                throw PathError("path revisits " + patch_str(v));
            if (k + 1 < p.vertices.size() && !adjacent(v, p.vertices[k + 1]))
                throw PathError("non-adjacent step at " + patch_str(v));
            bool interior = k > 0 && k + 1 < p.vertices.size();
            if (interior && g.is_data(v))
                throw PathError("path interior crosses data patch " + patch_str(v));
        }
        if (!g.is_data(p.front()))
            throw PathError("path does not start at a data patch");
        bool first_vertical = vertical_pair(p.vertices[0], p.vertices[1]);
        bool last_horizontal = horizontal_pair(p.vertices[p.vertices.size() - 2],
                                               p.vertices.back());
        switch (p.role) {
            case PathRole::Cnot:
                if (!g.is_data(p.back()))
                    throw PathError("cnot path must end at a data patch");
                if (!first_vertical) throw PathError("first edge must be vertical");
                if (!last_horizontal) throw PathError("last edge must be horizontal");
                break;
            case PathRole::RotationZ:
                if (g.is_data(p.back()))
                    throw PathError("rotation path must end at an ancilla");
                if (!first_vertical)
                    throw PathError("Z-rotation path must leave vertically");
                break;
            case PathRole::RotationX:
                if (g.is_data(p.back()))
                    throw PathError("rotation path must end at an ancilla");
                if (first_vertical)
                    throw PathError("X-rotation path must leave horizontally");
                break;
        }
        for (size_t k = 0; k + 1 < p.vertices.size(); ++k) {
            int e = g.eid(p.vertices[k], p.vertices[k + 1]);
            if (!used_edges.insert(e).second)
                throw PathError("paths share an edge at " + patch_str(p.vertices[k]));
        }
        if (!used_ends.insert(g.vid(p.front())).second)
            throw PathError("paths share endpoint " + patch_str(p.front()));
        if (!used_ends.insert(g.vid(p.back())).second)
            throw PathError("paths share endpoint " + patch_str(p.back()));
    }
    // Endpoints may not appear in any other path's interior.
    std::set<int> interiors;
    for (const auto& p : paths)
        for (size_t k = 1; k + 1 < p.vertices.size(); ++k)
            interiors.insert(g.vid(p.vertices[k]));
    for (int end : used_ends)
        if (interiors.count(end))
            throw PathError("path endpoint lies on another path's interior");
}

bool EDPSet::vertex_disjoint() const {
    std::set<std::pair<int, int>> seen;
    for (const auto& p : paths)
        for (Patch v : p.vertices)
            if (!seen.insert({v.i, v.j}).second) return false;
    return true;
}

void Fragmentation::check_valid(const EDPSet& p) const {
    if (edge_labels.size() != p.paths.size())
        throw PathError("fragmentation does not match path set");
    for (size_t k = 0; k < p.paths.size(); ++k) {
        if (edge_labels[k].size() != static_cast<size_t>(p.paths[k].edge_count()))
            throw PathError("edge label count mismatch");
        for (int l : edge_labels[k])
            if (l != 1 && l != 2) throw PathError("bad edge label");
    }
    // Per-phase vertex disjointness over segments.
    for (int phase = 1; phase <= 2; ++phase) {
        std::set<std::pair<int, int>> seen;
        for (const auto& s : segments) {
            if (s.label != phase) continue;
            const auto& verts = p.paths[s.parent].vertices;
            for (int k = s.first; k <= s.last; ++k)
                if (!seen.insert({verts[k].i, verts[k].j}).second)
                    throw PathError("phase " + std::to_string(phase) +
                                    " segments share vertex " +
                                    patch_str(verts[k]));
        }
    }
    // Reassembly: per parent, segments tile [0, len] in order and carry the
    // labels of their edges.
    std::vector<std::vector<const Segment*>> by_parent(p.paths.size());
    for (const auto& s : segments) by_parent[s.parent].push_back(&s);
    for (size_t k = 0; k < p.paths.size(); ++k) {
        int expect = 0;
        for (const Segment* s : by_parent[k]) {
            if (s->first != expect) throw PathError("segment gap in reassembly");
            if (s->last <= s->first) throw PathError("empty segment");
            for (int e = s->first; e < s->last; ++e)
                if (edge_labels[k][e] != s->label)
                    throw PathError("segment label disagrees with edge label");
            expect = s->last;
        }
        if (expect != static_cast<int>(p.paths[k].vertices.size()) - 1)
            throw PathError("segments do not cover the parent path");
    }
}

std::vector<CrossingComponent> crossing_components(const GridGraph& g,
                                                   const EDPSet& p) {
    std::map<int, int> count;
    for (const auto& path : p.paths)
        for (Patch v : path.vertices) ++count[g.vid(v)];
    std::set<int> crossing;
    for (auto [vid, c] : count)
        if (c > 1) crossing.insert(vid);

    std::vector<CrossingComponent> out;
    std::set<int> done;
    for (int start : crossing) {
        if (done.count(start)) continue;
        std::vector<int> comp;
        std::deque<int> queue{start};
        done.insert(start);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            comp.push_back(v);
            for (Patch nb : g.neighbors(g.patch(v))) {
                int nv = g.vid(nb);
                if (crossing.count(nv) && !done.count(nv)) {
                    done.insert(nv);
                    queue.push_back(nv);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        CrossingComponent cc;
        for (int v : comp) cc.vertices.push_back(g.patch(v));
        if (cc.vertices.size() == 1) {
            cc.kind = CrossingComponent::Kind::Isolated;
        } else {
            bool same_row = true, same_col = true;
            for (const Patch& v : cc.vertices) {
                same_row &= v.i == cc.vertices[0].i;
                same_col &= v.j == cc.vertices[0].j;
            }
            bool consecutive = true;
            for (size_t k = 0; k + 1 < cc.vertices.size(); ++k)
                consecutive &= adjacent(cc.vertices[k], cc.vertices[k + 1]);
            if (same_row && consecutive)
                cc.kind = CrossingComponent::Kind::HorizontalPath;
            else if (same_col && consecutive)
                cc.kind = CrossingComponent::Kind::VerticalPath;
            else
                throw PathError(
                    "crossing component is neither isolated nor a straight "
                    "path; input is not a valid operator EDP set");
        }
        out.push_back(std::move(cc));
    }
    return out;
}

namespace {

/// Union-find over path edges with a parity bit relative to the root:
/// parity 0 = same label as root, 1 = opposite.
struct ParityUF {
    std::vector<int> parent;
    std::vector<uint8_t> parity;

    explicit ParityUF(int n) : parent(n), parity(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::pair<int, uint8_t> find(int v) {
        if (parent[v] == v) return {v, 0};
        auto [root, par] = find(parent[v]);
        parent[v] = root;
        parity[v] ^= par;
        return {root, parity[v]};
    }
    void merge(int a, int b, uint8_t rel) {  // label(a) xor label(b) == rel
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) {
            if ((pa ^ pb) != rel)
                throw PathError("infeasible label constraints; input is not a "
                                "valid operator EDP set");
            return;
        }
        parent[rb] = ra;
        parity[rb] = pa ^ pb ^ rel;
    }
};

}  // namespace

Fragmentation fragment_edp(const GridGraph& g, const EDPSet& p) {
    // Global index for every edge of every path.
    std::vector<std::pair<int, int>> flat;  // (path, edge offset)
    std::vector<std::vector<int>> path_edge_base(p.paths.size());
    std::map<int, std::pair<int, int>> by_grid_edge;  // eid -> flat index, owner path
    for (size_t k = 0; k < p.paths.size(); ++k) {
        for (int e = 0; e < p.paths[k].edge_count(); ++e) {
            path_edge_base[k].push_back(static_cast<int>(flat.size()));
            int eid = g.eid(p.paths[k].vertices[e], p.paths[k].vertices[e + 1]);
            by_grid_edge[eid] = {static_cast<int>(flat.size()), static_cast<int>(k)};
            flat.emplace_back(static_cast<int>(k), e);
        }
    }

    ParityUF uf(static_cast<int>(flat.size()));

    // Constraints around each crossing vertex: each path's two incident edges
    // carry equal labels; the two paths carry different labels.
    std::map<int, std::vector<std::pair<int, int>>> at_vertex;  // vid -> (path, vertex offset)
    for (size_t k = 0; k < p.paths.size(); ++k)
        for (size_t v = 0; v < p.paths[k].vertices.size(); ++v)
            at_vertex[g.vid(p.paths[k].vertices[v])].emplace_back(
                static_cast<int>(k), static_cast<int>(v));

    for (const auto& [vid, occ] : at_vertex) {
        if (occ.size() < 2) continue;
        if (occ.size() > 2)
            throw PathError("vertex used by more than two paths");
        std::vector<int> first_edges;
        for (auto [k, off] : occ) {
            const auto& path = p.paths[k];
            if (off == 0 || off + 1 == static_cast<int>(path.vertices.size()))
                throw PathError("crossing vertex at a path endpoint");
            int e0 = path_edge_base[k][off - 1];
            int e1 = path_edge_base[k][off];
            uf.merge(e0, e1, 0);
            first_edges.push_back(e0);
        }
        uf.merge(first_edges[0], first_edges[1], 1);
    }

    // Resolve each class: in grid-edge lexicographic order, the least edge of
    // each class takes label 1. Unconstrained singleton classes fall out as 1.
    std::vector<int> label(flat.size(), 0);
    std::vector<int> lex(flat.size());
    std::iota(lex.begin(), lex.end(), 0);
    std::sort(lex.begin(), lex.end(), [&](int a, int b) {
        auto key = [&](int f) {
            auto [k, e] = flat[f];
            return g.eid(p.paths[k].vertices[e], p.paths[k].vertices[e + 1]);
        };
        return key(a) < key(b);
    });
    std::map<int, uint8_t> root_label;  // root -> label of parity-0 members
    for (int f : lex) {
        auto [root, par] = uf.find(f);
        auto it = root_label.find(root);
        if (it == root_label.end()) {
            // Least edge of the class gets 1.
            root_label[root] = par ? 2 : 1;
        }
    }
    for (size_t f = 0; f < flat.size(); ++f) {
        auto [root, par] = uf.find(static_cast<int>(f));
        uint8_t base = root_label[root];
        label[f] = par ? (base == 1 ? 2 : 1) : base;
    }

    Fragmentation frag;
    frag.edge_labels.resize(p.paths.size());
    for (size_t k = 0; k < p.paths.size(); ++k) {
        for (int e = 0; e < p.paths[k].edge_count(); ++e)
            frag.edge_labels[k].push_back(label[path_edge_base[k][e]]);
        // Cut into maximal same-label runs.
        int start = 0;
        for (int e = 1; e <= p.paths[k].edge_count(); ++e) {
            if (e == p.paths[k].edge_count() ||
                frag.edge_labels[k][e] != frag.edge_labels[k][start]) {
                frag.segments.push_back({static_cast<int>(k), start, e,
                                         frag.edge_labels[k][start]});
                start = e;
            }
        }
    }
    frag.check_valid(p);
    return frag;
}

namespace {

/// Deterministic shortest path in the routing graph avoiding disabled edges.
/// Neighbor order is the operator graph's fixed arc order.
std::optional<std::vector<Patch>> bfs_path(const OperatorGraph& og, Patch from,
                                           Patch to,
                                           const std::vector<uint8_t>& edge_ok) {
    const GridGraph& g = *og.grid;
    if (!og.vertex_present[g.vid(from)] || !og.vertex_present[g.vid(to)])
        return std::nullopt;
    std::vector<int> prev(g.vertex_count(), -2);
    std::deque<int> queue;
    prev[g.vid(from)] = -1;
    queue.push_back(g.vid(from));
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (v == g.vid(to)) break;
        for (int w : og.out_arcs[v]) {
            if (prev[w] != -2) continue;
            if (!edge_ok[g.eid(g.patch(v), g.patch(w))]) continue;
            prev[w] = v;
            queue.push_back(w);
        }
    }
    if (prev[g.vid(to)] == -2) return std::nullopt;
    std::vector<Patch> path;
    for (int v = g.vid(to); v != -1; v = prev[v]) path.push_back(g.patch(v));
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::pair<EDPSet, std::vector<int>> greedy_max_edp(
    const OperatorGraph& og, const std::vector<TerminalPair>& terminals) {
    const GridGraph& g = *og.grid;
    std::vector<uint8_t> edge_ok = og.edge_enabled;
    std::vector<uint8_t> routed(terminals.size(), 0);
    EDPSet result;
    std::vector<int> connected;

    auto lex_before = [&](int a, int b) {
        return std::tie(terminals[a].control, terminals[a].target) <
               std::tie(terminals[b].control, terminals[b].target);
    };
    while (true) {
        int best = -1;
        std::vector<Patch> best_path;
        for (size_t t = 0; t < terminals.size(); ++t) {
            if (routed[t]) continue;
            auto path = bfs_path(og, terminals[t].control, terminals[t].target,
                                 edge_ok);
            if (!path) continue;
            if (best < 0 || path->size() < best_path.size() ||
                (path->size() == best_path.size() &&
                 lex_before(static_cast<int>(t), best))) {
                best = static_cast<int>(t);
                best_path = std::move(*path);
            }
        }
        if (best < 0) break;
        routed[best] = 1;
        connected.push_back(best);
        for (size_t k = 0; k + 1 < best_path.size(); ++k)
            edge_ok[g.eid(best_path[k], best_path[k + 1])] = 0;
        OperatorPath op;
        op.vertices = std::move(best_path);
        op.role = PathRole::Cnot;
        result.paths.push_back(std::move(op));
    }
    std::sort(connected.begin(), connected.end());
    return {result, connected};
}

std::vector<EDPSet> greedy_t_operator_set(
    const GridGraph& g, const std::vector<TerminalPair>& terminals,
    const std::vector<uint8_t>& edge_mask) {
    std::vector<int> remaining(terminals.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<EDPSet> rounds;
    while (!remaining.empty()) {
        std::vector<TerminalPair> sub;
        for (int t : remaining) sub.push_back(terminals[t]);
        OperatorGraph og = build_operator_graph(g, sub, edge_mask);
        auto [set, connected] = greedy_max_edp(og, sub);
        if (connected.empty()) {
            const TerminalPair& t = terminals[remaining.front()];
            throw PathError("terminal pair " + patch_str(t.control) + "->" +
                            patch_str(t.target) + " is permanently unroutable");
        }
        std::set<int> done(connected.begin(), connected.end());
        std::vector<int> next;
        for (size_t k = 0; k < remaining.size(); ++k)
            if (!done.count(static_cast<int>(k))) next.push_back(remaining[k]);
        remaining = std::move(next);
        rounds.push_back(std::move(set));
    }
    return rounds;
}

std::vector<EDPSet> dense_cnot_paths(const GridGraph& g,
                                     const std::vector<TerminalPair>& terminals) {
    auto blacks = g.black_vertices();
    size_t n = blacks.size();
    if (terminals.size() * 2 != n)
        throw PathError("dense construction needs a perfect pairing of all "
                        "data qubits");
    {
        std::set<int> used;
        for (const auto& t : terminals) {
            used.insert(g.vid(t.control));
            used.insert(g.vid(t.target));
        }
        if (used.size() != n) throw PathError("pairing reuses a data qubit");
    }
    double root = std::sqrt(static_cast<double>(n));
    if (std::round(root) != root || n % 2 != 0)
        throw PathError("dense construction needs an even square qubit count");

    // One detour path per pair: up one row, along the ancilla row above the
    // control, down the ancilla column left of the target, then one step in.
    std::vector<OperatorPath> paths;
    for (const auto& t : terminals) {
        Patch c = t.control, u = t.target;
        OperatorPath p;
        p.role = PathRole::Cnot;
        auto push = [&](Patch v) {
            if (p.vertices.empty() || !(p.vertices.back() == v))
                p.vertices.push_back(v);
        };
        Patch corner_row{c.i - 1, c.j};
        Patch corner{c.i - 1, u.j - 1};
        Patch drop{u.i, u.j - 1};
        push(c);
        push(corner_row);
        int step = corner.j > corner_row.j ? 1 : -1;
        for (int j = corner_row.j; j != corner.j; j += step)
            push({corner.i, j + step});
        step = drop.i > corner.i ? 1 : -1;
        for (int i = corner.i; i != drop.i; i += step) push({i + step, drop.j});
        push(u);
        paths.push_back(std::move(p));
    }

    // Conflict graph: paths sharing any grid edge. First-fit coloring.
    std::vector<std::set<int>> edge_sets(paths.size());
    for (size_t k = 0; k < paths.size(); ++k)
        for (size_t e = 0; e + 1 < paths[k].vertices.size(); ++e)
            edge_sets[k].insert(g.eid(paths[k].vertices[e], paths[k].vertices[e + 1]));
    std::vector<int> color(paths.size(), -1);
    int n_colors = 0;
    for (size_t k = 0; k < paths.size(); ++k) {
        std::set<int> banned;
        for (size_t m = 0; m < k; ++m) {
            bool conflict = false;
            for (int e : edge_sets[m])
                if (edge_sets[k].count(e)) {
                    conflict = true;
                    break;
                }
            if (conflict) banned.insert(color[m]);
        }
        int c = 0;
        while (banned.count(c)) ++c;
        color[k] = c;
        n_colors = std::max(n_colors, c + 1);
    }
    std::vector<EDPSet> out(n_colors);
    for (size_t k = 0; k < paths.size(); ++k)
        out[color[k]].paths.push_back(paths[k]);
    for (auto& set : out) set.check_valid(g);
    return out;
}

int max_flow(FlowNetwork& net) {
    int total = 0;
    while (true) {
        // BFS over residual arcs: forward arcs with flow 0, or backward
        // traversal of arcs with flow 1.
        struct Step {
            int arc;
            bool forward;
        };
        std::vector<std::optional<Step>> how(net.vertex_count);
        std::vector<uint8_t> seen(net.vertex_count, 0);
        std::vector<std::vector<int>> in_arcs(net.vertex_count);
        for (size_t a = 0; a < net.arcs.size(); ++a)
            in_arcs[net.arcs[a].to].push_back(static_cast<int>(a));

        std::deque<int> queue{net.source};
        seen[net.source] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (v == net.sink) break;
            for (int a : net.out[v]) {
                const auto& arc = net.arcs[a];
                if (arc.flow == 0 && !seen[arc.to]) {
                    seen[arc.to] = 1;
                    how[arc.to] = Step{a, true};
                    queue.push_back(arc.to);
                }
            }
            for (int a : in_arcs[v]) {
                const auto& arc = net.arcs[a];
                if (arc.flow == 1 && !seen[arc.from]) {
                    seen[arc.from] = 1;
                    how[arc.from] = Step{a, false};
                    queue.push_back(arc.from);
                }
            }
        }
        if (!seen[net.sink]) break;
        int v = net.sink;
        while (v != net.source) {
            const Step& s = *how[v];
            if (s.forward) {
                net.arcs[s.arc].flow = 1;
                v = net.arcs[s.arc].from;
            } else {
                net.arcs[s.arc].flow = 0;
                v = net.arcs[s.arc].to;
            }
        }
        ++total;
    }
    return total;
}

std::vector<std::vector<int>> extract_flow_paths(const FlowNetwork& net) {
    for (const auto& arc : net.arcs)
        if (arc.flow != 0 && arc.flow != 1)
            throw PathError("non-integral flow");
    std::vector<uint8_t> used(net.arcs.size(), 0);
    std::vector<std::vector<int>> paths;
    while (true) {
        // Start a fresh walk along unconsumed unit-flow arcs from the source.
        int start_arc = -1;
        for (int a : net.out[net.source])
            if (net.arcs[a].flow == 1 && !used[a]) {
                start_arc = a;
                break;
            }
        if (start_arc < 0) break;
        std::vector<int> path{net.source};
        int arc = start_arc;
        while (true) {
            used[arc] = 1;
            int v = net.arcs[arc].to;
            path.push_back(v);
            if (v == net.sink) break;
            int next = -1;
            for (int a : net.out[v])
                if (net.arcs[a].flow == 1 && !used[a]) {
                    next = a;
                    break;
                }
            if (next < 0)
                throw PathError("flow conservation violated during extraction");
            arc = next;
        }
        paths.push_back(std::move(path));
    }
    // Remaining unit arcs belong to cycles and are silently dropped.
    return paths;
}

FlowNetwork vertex_split(const FlowNetwork& net) {
    FlowNetwork out;
    out.vertex_count = 2 * net.vertex_count;
    out.out.resize(out.vertex_count);
    out.source = 2 * net.source + 1;  // leave the source via its out-vertex
    out.sink = 2 * net.sink;          // enter the sink via its in-vertex
    for (int v = 0; v < net.vertex_count; ++v) out.add_arc(2 * v, 2 * v + 1);
    for (const auto& arc : net.arcs) out.add_arc(2 * arc.from + 1, 2 * arc.to);
    return out;
}

}  // namespace edpc
