#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "edpc/compile.hpp"
#include "edpc/emit.hpp"
#include "edpc/paths.hpp"
#include "edpc/verify.hpp"
#include "json.hpp"

namespace edpc {

namespace {

void check_deadline(const CompileOptions& opt) {
    if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
        throw TimeoutError("compilation deadline exceeded");
}

/// Ancilla cell used by the Hadamard gadget: the 2x2 block anchored at the
/// data patch, mirrored when it would leave the grid.
std::vector<Patch> hadamard_cell(const GridGraph& g, Patch p) {
    const std::array<std::pair<int, int>, 4> dirs = {
        std::pair{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    for (auto [di, dj] : dirs) {
        Patch a{p.i, p.j + dj}, b{p.i + di, p.j}, c{p.i + di, p.j + dj};
        if (g.in_bounds(a) && g.in_bounds(b) && g.in_bounds(c))
            return {p, a, b, c};
    }
    throw LayoutError("no ancilla cell for hadamard");
}

}  // namespace

std::vector<OperatorPath> find_rotation_paths(
    const GridGraph& g, const std::vector<Patch>& boundary,
    const std::vector<RotationRequest>& rots) {
    std::set<int> boundary_set;
    for (Patch b : boundary) boundary_set.insert(g.vid(b));
    std::map<int, int> source_of;  // vid -> index into rots
    for (size_t k = 0; k < rots.size(); ++k)
        source_of[g.vid(rots[k].qubit)] = static_cast<int>(k);

    FlowNetwork net;
    // node ids: plain ancilla -> one node; boundary -> (in, out); source -> one
    std::map<int, int> plain, b_in, b_out;
    auto present = [&](Patch p) {
        int v = g.vid(p);
        return !g.is_data(p) || source_of.count(v);
    };
    for (int v = 0; v < g.vertex_count(); ++v) {
        Patch p = g.patch(v);
        if (!present(p)) continue;
        if (boundary_set.count(v)) {
            b_in[v] = net.add_vertex();
            b_out[v] = net.add_vertex();
        } else {
            plain[v] = net.add_vertex();
        }
    }
    net.source = net.add_vertex();
    net.sink = net.add_vertex();

    auto in_node = [&](int v) { return boundary_set.count(v) ? b_in[v] : plain[v]; };
    auto out_node = [&](int v) { return boundary_set.count(v) ? b_out[v] : plain[v]; };

    for (const auto& [v, idx] : source_of) net.add_arc(net.source, plain[v]);
    for (auto& [v, node_in] : b_in) {
        net.add_arc(node_in, b_out[v]);
        net.add_arc(b_out[v], net.sink);
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        Patch p = g.patch(v);
        if (!present(p)) continue;
        bool src = source_of.count(v) != 0;
        for (Patch q : g.neighbors(p)) {
            if (!present(q)) continue;
            if (source_of.count(g.vid(q))) continue;  // nothing enters a source
            if (src) {
                bool want_vertical =
                    is_z_rotation(rots[source_of[v]].kind);
                if (vertical_pair(p, q) != want_vertical) continue;
            }
            net.add_arc(out_node(v), in_node(g.vid(q)));
        }
    }

    max_flow(net);
    // Opposite unit flows along the same grid edge cancel.
    std::map<std::pair<int, int>, int> arc_at;
    for (size_t a = 0; a < net.arcs.size(); ++a)
        arc_at[{net.arcs[a].from, net.arcs[a].to}] = static_cast<int>(a);
    for (auto& arc : net.arcs) {
        if (arc.flow != 1) continue;
        auto rev = arc_at.find({arc.to, arc.from});
        if (rev != arc_at.end() && net.arcs[rev->second].flow == 1) {
            arc.flow = 0;
            net.arcs[rev->second].flow = 0;
        }
    }

    // Map node ids back to grid patches.
    std::map<int, int> node_vid;
    for (auto& [v, n] : plain) node_vid[n] = v;
    for (auto& [v, n] : b_in) node_vid[n] = v;
    for (auto& [v, n] : b_out) node_vid[n] = v;

    std::vector<OperatorPath> out;
    for (const auto& walk : extract_flow_paths(net)) {
        std::vector<Patch> verts;
        for (int node : walk) {
            if (node == net.source || node == net.sink) continue;
            Patch p = g.patch(node_vid.at(node));
            if (!verts.empty() && verts.back() == p) continue;  // in/out pair
            verts.push_back(p);
        }
        // Shortcut any vertex revisits left by the flow decomposition.
        for (size_t k = 0; k < verts.size(); ++k) {
            for (size_t m = verts.size(); m-- > k + 1;) {
                if (verts[m] == verts[k]) {
                    verts.erase(verts.begin() + k + 1, verts.begin() + m + 1);
                    break;
                }
            }
        }
        const RotationRequest& rr = rots[source_of.at(g.vid(verts.front()))];
        OperatorPath p;
        p.vertices = std::move(verts);
        p.role = is_z_rotation(rr.kind) ? PathRole::RotationZ : PathRole::RotationX;
        p.rotation = rr.kind;
        p.gate_index = rr.gate;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<int> remote_rotation_round(SurfaceSchedule& s, const GridGraph& g,
                                       const std::vector<Patch>& boundary,
                                       const std::vector<RotationRequest>& rots) {
    EDPSet batch;
    batch.paths = find_rotation_paths(g, boundary, rots);
    std::vector<int> executed;
    for (const auto& p : batch.paths) executed.push_back(p.gate_index);
    EmitResult er = emit_edp_subroutine(s, g, batch);
    if (er.appended_depth > 4)
        throw std::logic_error("rotation round exceeded depth 4");
    return executed;
}

namespace {

nlohmann::ordered_json path_to_json(const OperatorPath& p) {
    nlohmann::ordered_json pj;
    pj["role"] = p.role == PathRole::Cnot ? "cnot"
                 : p.role == PathRole::RotationZ ? "rotation_z"
                                                 : "rotation_x";
    if (p.gate_index >= 0) pj["gate"] = p.gate_index;
    auto& vs = pj["vertices"] = nlohmann::ordered_json::array();
    for (Patch v : p.vertices) vs.push_back({v.i, v.j});
    return pj;
}

}  // namespace

int auto_grid_side(int n) {
    int L = 3;
    while ((L / 2) * (L / 2) < n) L += 2;
    return L;
}

std::pair<int, int> auto_swap_dims(int n) {
    int rows = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    int cols = (n + rows - 1) / rows;
    return {rows, cols};
}

CompileResult compile_edpc(const LogicalCircuit& c, const CompileOptions& opt) {
    CompileResult res;
    res.normalized = prepare_circuit(c);
    const LogicalCircuit& circ = res.normalized;

    int L = opt.grid_side ? opt.grid_side : auto_grid_side(circ.n_logical);
    GridGraph grid = build_grid(L, opt.grid_side != 0);
    Embedding emb = embed_qubits(circ, grid);

    SurfaceSchedule& sched = res.schedule;
    sched.algorithm = "edpc";
    sched.layout.kind = LayoutInfo::Kind::Square;
    sched.layout.L = L;
    for (int q = 0; q < circ.n_logical; ++q)
        sched.layout.embedding.emplace_back(q, emb.qubit_patch[q]);
    sched.layout.final_embedding = sched.layout.embedding;
    sched.layout.boundary = emb.boundary;

    std::vector<uint8_t> executed(circ.gates.size(), 0);
    size_t n_done = 0;
    nlohmann::ordered_json paths_dump = nlohmann::ordered_json::array();

    while (n_done < circ.gates.size()) {
        check_deadline(opt);
        ++res.stats.outer_iterations;
        size_t done_before = n_done;

        // Preparations, measurements and Hadamards run in place.
        bool drained = false;
        while (!drained) {
            drained = true;
            std::vector<int> avail = available_ops(circ, executed);
            std::vector<SurfaceOp> h_ops;
            for (int gi : avail) {
                const Gate& gate = circ.gates[gi];
                Patch p = emb.qubit_patch[gate.q0];
                if (is_prep(gate.kind)) {
                    SurfaceOp op{gate.kind == GateKind::PrepX ? OpKind::PrepX
                                                              : OpKind::PrepZ,
                                 {p}};
                    op.gate_index = gi;
                    op.logical = gate.q0;
                    sched.attach_prep(std::move(op));
                } else if (is_measurement(gate.kind)) {
                    SurfaceOp op{gate.kind == GateKind::MeasX ? OpKind::MeasX
                                                              : OpKind::MeasZ,
                                 {p}};
                    op.gate_index = gi;
                    op.outcome_vars = {sched.next_outcome_var()};
                    sched.attach_meas(std::move(op));
                } else if (gate.kind == GateKind::H) {
                    SurfaceOp op{OpKind::Hadamard, hadamard_cell(grid, p)};
                    op.gate_index = gi;
                    h_ops.push_back(std::move(op));
                } else {
                    continue;
                }
                executed[gi] = 1;
                ++n_done;
                drained = false;
            }
            // Hadamard cells on this layout never overlap, but grouping keeps
            // the emission safe on override grids.
            while (!h_ops.empty()) {
                std::vector<SurfaceOp> group;
                std::set<std::pair<int, int>> used;
                for (auto it = h_ops.begin(); it != h_ops.end();) {
                    bool clash = false;
                    for (Patch p : it->patches)
                        if (used.count({p.i, p.j})) clash = true;
                    if (clash) {
                        ++it;
                        continue;
                    }
                    for (Patch p : it->patches) used.insert({p.i, p.j});
                    group.push_back(std::move(*it));
                    it = h_ops.erase(it);
                }
                sched.append_layer(std::move(group));
                sched.append_layer({});
                sched.append_layer({});
            }
        }

        // Long-range work: rotations via max-flow to the boundary, CNOTs via
        // the greedy edge-disjoint routing, both through the same emitter.
        std::vector<int> avail = available_ops(circ, executed);
        std::vector<int> rot_gates, cnot_gates;
        for (int gi : avail) {
            if (is_rotation(circ.gates[gi].kind)) rot_gates.push_back(gi);
            else if (circ.gates[gi].is_cnot()) cnot_gates.push_back(gi);
        }

        while (!rot_gates.empty() || !cnot_gates.empty()) {
            check_deadline(opt);
            EDPSet batch;

            std::vector<RotationRequest> rots;
            for (int gi : rot_gates)
                rots.push_back({gi, circ.gates[gi].kind,
                                emb.qubit_patch[circ.gates[gi].q0]});
            std::vector<uint8_t> edge_mask(grid.edge_count(), 1);
            if (!rots.empty()) {
                auto rpaths = find_rotation_paths(grid, emb.boundary, rots);
                for (auto& p : rpaths) {
                    for (size_t k = 0; k + 1 < p.vertices.size(); ++k)
                        edge_mask[grid.eid(p.vertices[k], p.vertices[k + 1])] = 0;
                    // The rotation site must stay clear of this round's
                    // CNOT routing.
                    for (Patch nb : grid.neighbors(p.vertices.back()))
                        edge_mask[grid.eid(p.vertices.back(), nb)] = 0;
                    batch.paths.push_back(std::move(p));
                }
                if (!batch.paths.empty()) ++res.stats.rotation_iterations;
            }

            if (!cnot_gates.empty()) {
                std::vector<TerminalPair> terms;
                for (int gi : cnot_gates)
                    terms.push_back({emb.qubit_patch[circ.gates[gi].q0],
                                     emb.qubit_patch[circ.gates[gi].q1]});
                OperatorGraph og = build_operator_graph(grid, terms, edge_mask);
                auto [cset, connected] = greedy_max_edp(og, terms);
                for (size_t k = 0; k < cset.paths.size(); ++k) {
                    cset.paths[k].gate_index = cnot_gates[connected[k]];
                    batch.paths.push_back(std::move(cset.paths[k]));
                }
            }

            if (batch.paths.empty())
                throw std::logic_error(
                    "long-range scheduling stalled with gates pending");

            if (opt.collect_paths) {
                nlohmann::ordered_json round = nlohmann::ordered_json::array();
                for (const auto& p : batch.paths)
                    round.push_back(path_to_json(p));
                paths_dump.push_back(round);
            }

            EmitResult er = emit_edp_subroutine(sched, grid, batch);
            if (er.appended_depth > 4)
                throw std::logic_error("EDP subroutine exceeded depth 4");
            ++res.stats.edp_subroutine_calls;
            res.stats.max_emit_depth =
                std::max(res.stats.max_emit_depth, er.appended_depth);

            std::set<int> emitted;
            for (const auto& p : batch.paths) emitted.insert(p.gate_index);
            auto purge = [&](std::vector<int>& gates) {
                std::vector<int> left;
                for (int gi : gates) {
                    if (emitted.count(gi)) {
                        executed[gi] = 1;
                        ++n_done;
                    } else {
                        left.push_back(gi);
                    }
                }
                gates = std::move(left);
            };
            purge(rot_gates);
            purge(cnot_gates);
        }

        if (n_done == done_before)
            throw std::logic_error("compilation made no progress");
    }

    sched.flush_pending();
    res.cost = spacetime_cost(sched);
    if (opt.collect_paths) res.paths_json = paths_dump.dump(1);
    return res;
}

}  // namespace edpc
