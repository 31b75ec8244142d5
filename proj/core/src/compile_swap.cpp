#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "edpc/compile.hpp"
#include "edpc/emit.hpp"
#include "edpc/swap_route.hpp"
#include "edpc/verify.hpp"

namespace edpc {

namespace {

// Flat site ids, row-major: id = (r-1)*cols + (c-1).
inline int sid(const SwapLayout& lay, Site s) {
    return (s.first - 1) * lay.cols + (s.second - 1);
}
inline Site site_of(const SwapLayout& lay, int id) {
    return {id / lay.cols + 1, id % lay.cols + 1};
}

/// Completes a partial site mapping to a permutation, sending each unmapped
/// site to the nearest free target (ties lexicographic). Flat form.
std::vector<int> extend_mapping_flat(const SwapLayout& lay,
                                     const std::map<Site, Site>& pi) {
    int n = lay.rows * lay.cols;
    std::vector<int> total(n, -1);
    std::vector<uint8_t> used(n, 0);
    for (const auto& [src, dst] : pi) {
        total[sid(lay, src)] = sid(lay, dst);
        used[sid(lay, dst)] = 1;
    }
    for (int s = 0; s < n; ++s) {
        if (total[s] >= 0) continue;
        if (!used[s]) {  // staying put is always nearest
            total[s] = s;
            used[s] = 1;
            continue;
        }
        auto [r, c] = site_of(lay, s);
        int best = -1, best_d = 1 << 30;
        for (int t = 0; t < n; ++t) {
            if (used[t]) continue;
            auto [rr, cc] = site_of(lay, t);
            int d = std::abs(rr - r) + std::abs(cc - c);
            if (d < best_d) {
                best_d = d;
                best = t;
            }
        }
        total[s] = best;
        used[best] = 1;
    }
    return total;
}

/// Bipartite multigraph edge coloring: repeatedly peel a perfect matching off
/// the regular column-to-column graph. Color classes become stage-1 rows.
std::vector<int> color_rows_flat(const SwapLayout& lay,
                                 const std::vector<int>& total) {
    int n = lay.rows * lay.cols, cols = lay.cols;
    std::vector<int> row_of(n, -1);
    // edges grouped by left column; edge payload = item (site id)
    std::vector<std::vector<int>> remaining(cols);
    for (int s = 0; s < n; ++s) remaining[s % cols].push_back(s);

    std::vector<int> match_right(cols), match_left(cols);
    std::vector<uint8_t> seen(cols);
    for (int color = 0; color < lay.rows; ++color) {
        std::fill(match_right.begin(), match_right.end(), -1);
        std::fill(match_left.begin(), match_left.end(), -1);
        std::function<bool(int)> augment = [&](int left) -> bool {
            for (int item : remaining[left]) {
                if (item < 0) continue;
                int right = total[item] % cols;
                if (seen[right]) continue;
                seen[right] = 1;
                if (match_right[right] < 0 ||
                    augment(match_right[right] % cols)) {
                    // remember which item realizes the match
                    match_left[left] = item;
                    match_right[right] = item;
                    return true;
                }
            }
            return false;
        };
        for (int left = 0; left < cols; ++left) {
            std::fill(seen.begin(), seen.end(), 0);
            if (!augment(left))
                throw std::logic_error("row coloring lost regularity");
        }
        for (int left = 0; left < cols; ++left) {
            int item = match_left[left];
            row_of[item] = color + 1;
            auto& bucket = remaining[left];
            for (auto& e : bucket)
                if (e == item) {
                    e = -1;
                    break;
                }
        }
    }
    return row_of;
}

/// Merged odd-even transposition rounds over parallel lines; line l runs
/// round parity (wall + l) so neighboring lines never contend for ancillas.
template <typename KeyFn>
void sort_stage(const SwapLayout& lay, bool columns, KeyFn key,
                std::vector<int>& item_at, std::vector<SwapRound>& out) {
    int lines = columns ? lay.cols : lay.rows;
    int len = columns ? lay.rows : lay.cols;
    auto at = [&](int line, int k) {
        return columns ? k * lay.cols + line : line * lay.cols + k;
    };
    for (int wall = 0; wall <= len + 1; ++wall) {
        SwapRound round;
        bool sorted = true;
        for (int ln = 0; ln < lines; ++ln) {
            for (int k = (wall + ln) & 1; k + 1 < len; k += 2) {
                int a = at(ln, k), b = at(ln, k + 1);
                if (key(item_at[a]) > key(item_at[b])) {
                    round.swaps.push_back({site_of(lay, a), site_of(lay, b)});
                    std::swap(item_at[a], item_at[b]);
                }
            }
            for (int k = 0; k + 1 < len && sorted; ++k)
                if (key(item_at[at(ln, k)]) > key(item_at[at(ln, k + 1)]))
                    sorted = false;
        }
        if (!round.swaps.empty()) out.push_back(std::move(round));
        if (sorted) return;
    }
    throw std::logic_error("odd-even stage failed to settle");
}

}  // namespace

std::vector<SwapRound> route_permutation(const SwapLayout& lay,
                                         const std::map<Site, Site>& pi) {
    {
        std::set<Site> targets;
        for (const auto& [src, dst] : pi)
            if (!targets.insert(dst).second)
                throw LayoutError("mapping is not injective");
    }
    std::vector<int> total = extend_mapping_flat(lay, pi);
    std::vector<int> color = color_rows_flat(lay, total);

    int n = lay.rows * lay.cols;
    std::vector<int> item_at(n);
    for (int s = 0; s < n; ++s) item_at[s] = s;

    std::vector<SwapRound> rounds;
    sort_stage(lay, true, [&](int item) { return color[item]; }, item_at,
               rounds);
    sort_stage(lay, false, [&](int item) { return total[item] % lay.cols; },
               item_at, rounds);
    sort_stage(lay, true, [&](int item) { return total[item] / lay.cols; },
               item_at, rounds);

    for (int s = 0; s < n; ++s)
        if (total[item_at[s]] != s)
            throw std::logic_error("routing did not realize the permutation");
    if (route_depth(rounds) > route_depth_bound(lay))
        throw std::logic_error("routing exceeded its depth bound");
    return rounds;
}

/// Depth of routing `pi`, skipping round materialization.
static long route_depth_only(const SwapLayout& lay,
                             const std::map<Site, Site>& pi) {
    std::vector<int> total = extend_mapping_flat(lay, pi);
    std::vector<int> color = color_rows_flat(lay, total);
    int n = lay.rows * lay.cols;
    std::vector<int> item_at(n);
    for (int s = 0; s < n; ++s) item_at[s] = s;
    long rounds = 0;
    auto run = [&](bool columns, auto key) {
        int lines = columns ? lay.cols : lay.rows;
        int len = columns ? lay.rows : lay.cols;
        auto at = [&](int line, int k) {
            return columns ? k * lay.cols + line : line * lay.cols + k;
        };
        for (int wall = 0; wall <= len + 1; ++wall) {
            bool swapped = false, sorted = true;
            for (int ln = 0; ln < lines; ++ln) {
                for (int k = (wall + ln) & 1; k + 1 < len; k += 2) {
                    int a = at(ln, k), b = at(ln, k + 1);
                    if (key(item_at[a]) > key(item_at[b])) {
                        std::swap(item_at[a], item_at[b]);
                        swapped = true;
                    }
                }
                for (int k = 0; k + 1 < len && sorted; ++k)
                    if (key(item_at[at(ln, k)]) > key(item_at[at(ln, k + 1)]))
                        sorted = false;
            }
            if (swapped) ++rounds;
            if (sorted) return;
        }
        throw std::logic_error("odd-even stage failed to settle");
    };
    run(true, [&](int item) { return color[item]; });
    run(false, [&](int item) { return total[item] % lay.cols; });
    run(true, [&](int item) { return total[item] / lay.cols; });
    return 2 * rounds;
}

SwapCost swap_cost(const SwapLayout& lay, const std::map<Site, Site>& pi,
                   Site v1, Site v2,
                   const std::vector<std::pair<Site, Site>>& matching) {
    if (matching.empty()) throw LayoutError("empty matching");
    std::set<Site> taken;
    for (const auto& [src, dst] : pi) taken.insert(dst);
    SwapCost best;
    for (const auto& [e1, e2] : matching) {
        if (taken.count(e1) || taken.count(e2)) continue;
        for (int flip = 0; flip < 2; ++flip) {
            Site a = flip ? e2 : e1, b = flip ? e1 : e2;
            if ((pi.count(v1) && pi.at(v1) != a) ||
                (pi.count(v2) && pi.at(v2) != b))
                continue;
            std::map<Site, Site> ext = pi;
            ext[v1] = a;
            ext[v2] = b;
            long d = route_depth_only(lay, ext);
            if (best.depth < 0 || d < best.depth) best = {d, a, b};
        }
    }
    return best;
}

namespace {

void check_deadline(const CompileOptions& opt) {
    if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
        throw TimeoutError("compilation deadline exceeded");
}

/// Emits the swap gadgets for each round, skipping moves of empty sites
/// (one-sided swaps become a two-move relocation). `occupied` reflects which
/// sites hold live qubits and is replayed alongside.
void emit_rounds(SurfaceSchedule& sched, const SwapLayout& lay,
                 const std::vector<SwapRound>& rounds,
                 std::set<Site>& occupied) {
    for (const SwapRound& round : rounds) {
        std::vector<SurfaceOp> layer_a, layer_b;
        std::set<std::pair<int, int>> used;
        auto claim = [&](Patch p) {
            if (!used.insert({p.i, p.j}).second)
                throw std::logic_error("swap round ancilla contention");
        };
        for (const auto& [s1, s2] : round.swaps) {
            bool occ1 = occupied.count(s1), occ2 = occupied.count(s2);
            if (!occ1 && !occ2) continue;
            Patch p1 = lay.site_patch(s1.first, s1.second);
            Patch p2 = lay.site_patch(s2.first, s2.second);
            Patch a1{p1.i, p2.j}, a2{p2.i, p1.j};
            claim(p1);
            claim(p2);
            if (occ1) {
                claim(a1);
                layer_a.push_back(SurfaceOp{OpKind::Move, {p1, a1}});
                layer_b.push_back(SurfaceOp{OpKind::Move, {a1, p2}});
            }
            if (occ2) {
                claim(a2);
                layer_a.push_back(SurfaceOp{OpKind::Move, {p2, a2}});
                layer_b.push_back(SurfaceOp{OpKind::Move, {a2, p1}});
            }
            if (occ1 != occ2) {
                if (occ1) {
                    occupied.erase(s1);
                    occupied.insert(s2);
                } else {
                    occupied.erase(s2);
                    occupied.insert(s1);
                }
            }
        }
        if (layer_a.empty()) continue;
        sched.append_layer(std::move(layer_a));
        sched.append_layer(std::move(layer_b));
    }
}

}  // namespace

CompileResult compile_swap(const LogicalCircuit& c, const CompileOptions& opt) {
    CompileResult res;
    res.normalized = prepare_circuit(c);
    const LogicalCircuit& circ = res.normalized;

    auto [rows, cols] = opt.swap_rows
                            ? std::pair{opt.swap_rows, opt.swap_cols}
                            : auto_swap_dims(circ.n_logical);
    SwapLayout lay = build_swap_layout(circ, rows, cols);

    SurfaceSchedule& sched = res.schedule;
    sched.algorithm = "swap";
    sched.layout.kind = LayoutInfo::Kind::Rotated;
    sched.layout.L = lay.side;
    sched.layout.rows = rows;
    sched.layout.cols = cols;
    for (int q = 0; q < circ.n_logical; ++q) {
        auto [r, cc] = lay.qubit_site[q];
        sched.layout.embedding.emplace_back(q, lay.site_patch(r, cc));
    }
    for (auto [r, cc] : lay.boundary_sites())
        sched.layout.boundary.push_back(lay.site_patch(r, cc));

    std::vector<Site> qubit_site(circ.n_logical);
    for (int q = 0; q < circ.n_logical; ++q) qubit_site[q] = lay.qubit_site[q];
    std::vector<uint8_t> alive(circ.n_logical, 0);

    std::vector<uint8_t> executed(circ.gates.size(), 0);
    size_t n_done = 0;

    while (n_done < circ.gates.size()) {
        check_deadline(opt);
        ++res.stats.outer_iterations;
        size_t done_before = n_done;

        std::vector<int> avail = available_ops(circ, executed);

        std::vector<SurfaceOp> h_ops;
        std::vector<int> rot_gates, cnot_gates;
        for (int gi : avail) {
            const Gate& gate = circ.gates[gi];
            Patch p = lay.site_patch(qubit_site[gate.q0].first,
                                     qubit_site[gate.q0].second);
            if (is_prep(gate.kind)) {
                SurfaceOp op{gate.kind == GateKind::PrepX ? OpKind::PrepX
                                                          : OpKind::PrepZ,
                             {p}};
                op.gate_index = gi;
                op.logical = gate.q0;
                sched.attach_prep(std::move(op));
                alive[gate.q0] = 1;
                executed[gi] = 1;
                ++n_done;
            } else if (is_measurement(gate.kind)) {
                SurfaceOp op{gate.kind == GateKind::MeasX ? OpKind::MeasX
                                                          : OpKind::MeasZ,
                             {p}};
                op.gate_index = gi;
                op.outcome_vars = {sched.next_outcome_var()};
                sched.attach_meas(std::move(op));
                alive[gate.q0] = 0;
                executed[gi] = 1;
                ++n_done;
            } else if (gate.kind == GateKind::H) {
                SurfaceOp op{OpKind::Hadamard, {p}};
                op.gate_index = gi;
                h_ops.push_back(std::move(op));
                executed[gi] = 1;
                ++n_done;
            } else if (is_rotation(gate.kind)) {
                rot_gates.push_back(gi);
            } else if (gate.is_cnot()) {
                cnot_gates.push_back(gi);
            }
        }
        if (!h_ops.empty()) {
            sched.append_layer(std::move(h_ops));
            sched.append_layer({});
            sched.append_layer({});
        }

        if (rot_gates.empty() && cnot_gates.empty()) {
            if (n_done == done_before)
                throw std::logic_error("compilation made no progress");
            continue;
        }

        std::map<Site, Site> pi;
        std::set<Site> taken_targets;

        // Rotations go to the nearest free boundary site.
        std::set<Site> free_boundary;
        for (auto [r, cc] : lay.boundary_sites()) free_boundary.insert({r, cc});
        std::vector<std::pair<int, Site>> rot_dest;  // gate -> boundary site
        for (int gi : rot_gates) {
            Site v = qubit_site[circ.gates[gi].q0];
            Site best{-1, -1};
            int best_d = 1 << 30;
            for (Site u : free_boundary) {
                int d = std::abs(u.first - v.first) +
                        std::abs(u.second - v.second);
                if (d < best_d) {
                    best_d = d;
                    best = u;
                }
            }
            if (best.first < 0) break;  // boundary exhausted; next iteration
            free_boundary.erase(best);
            pi[v] = best;
            taken_targets.insert(best);
            rot_dest.push_back({gi, best});
            executed[gi] = 1;
            ++n_done;
        }

        // Matching of the remaining layout graph hosts this round's CNOTs.
        std::vector<std::pair<Site, Site>> matching;
        {
            std::set<Site> matched = taken_targets;
            for (int r = 1; r <= lay.rows; ++r) {
                for (int cc = 1; cc <= lay.cols; ++cc) {
                    Site s{r, cc};
                    if (matched.count(s)) continue;
                    for (Site t : {Site{r, cc + 1}, Site{r + 1, cc}}) {
                        if (!lay.site_in_bounds(t.first, t.second)) continue;
                        if (matched.count(t)) continue;
                        matching.push_back({s, t});
                        matched.insert(s);
                        matched.insert(t);
                        break;
                    }
                }
            }
        }

        struct Assigned {
            int gate;
            Site c_site, t_site;
        };
        std::vector<Assigned> assigned;
        std::vector<int> pending = cnot_gates;
        while (!pending.empty() && !matching.empty()) {
            check_deadline(opt);
            int best_gate = -1;
            size_t best_pos = 0;
            SwapCost best_cost;
            for (size_t k = 0; k < pending.size(); ++k) {
                const Gate& gate = circ.gates[pending[k]];
                SwapCost sc = swap_cost(lay, pi, qubit_site[gate.q0],
                                        qubit_site[gate.q1], matching);
                if (sc.depth < 0) continue;
                bool better = best_gate < 0 ||
                              (opt.swap_select_max ? sc.depth > best_cost.depth
                                                   : sc.depth < best_cost.depth);
                if (better) {
                    best_gate = pending[k];
                    best_pos = k;
                    best_cost = sc;
                }
            }
            if (best_gate < 0) break;
            const Gate& gate = circ.gates[best_gate];
            pi[qubit_site[gate.q0]] = best_cost.e1;
            pi[qubit_site[gate.q1]] = best_cost.e2;
            assigned.push_back({best_gate, best_cost.e1, best_cost.e2});
            pending.erase(pending.begin() + best_pos);
            std::erase_if(matching, [&](const auto& e) {
                return e.first == best_cost.e1 || e.first == best_cost.e2 ||
                       e.second == best_cost.e1 || e.second == best_cost.e2;
            });
            executed[best_gate] = 1;
            ++n_done;
        }

        if (!pi.empty() || !assigned.empty()) {
            auto rounds = route_permutation(lay, pi);
            res.stats.routing_rounds += static_cast<long>(rounds.size());
            std::set<Site> occupied;
            for (int q = 0; q < circ.n_logical; ++q)
                if (alive[q]) occupied.insert(qubit_site[q]);
            emit_rounds(sched, lay, rounds, occupied);
            // Update qubit positions through the realized permutation.
            std::vector<int> total = extend_mapping_flat(lay, pi);
            for (int q = 0; q < circ.n_logical; ++q)
                qubit_site[q] = site_of(lay, total[sid(lay, qubit_site[q])]);
        }

        // Now-local CNOTs, grouped to keep patch footprints disjoint.
        std::vector<LocalCnot> todo;
        for (const Assigned& a : assigned) {
            Patch cp = lay.site_patch(a.c_site.first, a.c_site.second);
            Patch tp = lay.site_patch(a.t_site.first, a.t_site.second);
            Patch anc{tp.i, cp.j};
            todo.push_back({cp, tp, anc, a.gate});
        }
        while (!todo.empty()) {
            std::vector<LocalCnot> group;
            std::set<std::pair<int, int>> used;
            for (auto it = todo.begin(); it != todo.end();) {
                std::array<Patch, 3> ps{it->control, it->target, it->ancilla};
                bool clash = false;
                for (Patch p : ps)
                    if (used.count({p.i, p.j})) clash = true;
                if (clash) {
                    ++it;
                    continue;
                }
                for (Patch p : ps) used.insert({p.i, p.j});
                group.push_back(*it);
                it = todo.erase(it);
            }
            emit_local_cnots(sched, group);
        }

        for (const auto& [gi, u] : rot_dest) {
            SurfaceOp op{OpKind::Rotation,
                         {lay.site_patch(u.first, u.second)}};
            op.rotation = circ.gates[gi].kind;
            op.gate_index = gi;
            sched.attach_meas(std::move(op));
        }

        if (n_done == done_before)
            throw std::logic_error("compilation made no progress");
    }

    sched.flush_pending();
    for (int q = 0; q < circ.n_logical; ++q) {
        auto [r, cc] = qubit_site[q];
        sched.layout.final_embedding.emplace_back(q, lay.site_patch(r, cc));
    }
    res.cost = spacetime_cost(sched);
    return res;
}

}  // namespace edpc
