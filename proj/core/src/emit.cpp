#include "edpc/emit.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace edpc {

namespace {

char edge_basis(Patch a, Patch b) { return horizontal_pair(a, b) ? 'x' : 'z'; }

/// What a live chain patch currently carries, for byproduct routing.
struct ChainState {
    enum Kind { None, Bell, FanZ, FanX } kind = None;
    int partner = -1;  // Bell: the other half's vertex id
    Patch anchor{};    // FanZ/FanX: the data patch it is identified with
};

enum class EndMode { DataCtrlZ, DataCtrlX, DataTarget, Produce, Consume };

struct Emitter {
    const GridGraph& g;
    SurfaceSchedule& s;
    std::array<std::vector<SurfaceOp>, 4> pre, body, post;
    std::map<int, ChainState> chain;
    int layers_used = -1;
    int path_last_layer = -1;

    Emitter(const GridGraph& gg, SurfaceSchedule& ss) : g(gg), s(ss) {}

    int vid(Patch p) const { return g.vid(p); }

    void to_body(int layer, SurfaceOp op) {
        layers_used = std::max(layers_used, layer);
        path_last_layer = std::max(path_last_layer, layer);
        body[layer].push_back(std::move(op));
    }

    ChainState take(Patch p) {
        auto it = chain.find(vid(p));
        if (it == chain.end() || it->second.kind == ChainState::None)
            throw ScheduleError("emission consumed an empty chain patch");
        ChainState st = it->second;
        it->second = ChainState{};
        return st;
    }
    void put(Patch p, ChainState st) {
        auto& slot = chain[vid(p)];
        if (st.kind != ChainState::None && slot.kind != ChainState::None)
            throw ScheduleError("emission overwrote a live chain patch");
        slot = st;
    }

    void bell_prep(int layer, Patch a, Patch b) {
        SurfaceOp op{OpKind::BellPrep, {a, b}};
        op.basis = edge_basis(a, b);
        put(a, {ChainState::Bell, vid(b), {}});
        put(b, {ChainState::Bell, vid(a), {}});
        to_body(layer, std::move(op));
    }

    void stitch(int layer, Patch x, Patch y) {
        SurfaceOp op{OpKind::BellMeas, {x, y}};
        op.basis = edge_basis(x, y);
        int u = s.next_outcome_var();  // joint XX bit
        int v = s.next_outcome_var();  // joint ZZ bit
        op.outcome_vars = {u, v};
        ChainState sx = take(x), sy = take(y);
        auto teleport_to = [&](Patch r) {
            op.corrections.push_back({{v}, r, 'X'});
            op.corrections.push_back({{u}, r, 'Z'});
        };
        if (sx.kind == ChainState::Bell && sy.kind == ChainState::Bell) {
            Patch l = g.patch(sx.partner), r = g.patch(sy.partner);
            teleport_to(r);
            put(l, {});  // rewire the surviving pair
            put(r, {});
            chain[vid(l)] = {ChainState::Bell, vid(r), {}};
            chain[vid(r)] = {ChainState::Bell, vid(l), {}};
        } else if (sy.kind == ChainState::Bell) {
            Patch r = g.patch(sy.partner);
            teleport_to(r);
            chain[vid(r)] = sx;
        } else if (sx.kind == ChainState::Bell) {
            Patch l = g.patch(sx.partner);
            teleport_to(l);
            chain[vid(l)] = sy;
        } else {
            // Bridging the control fan-out and the target fan-out closes the
            // long-range CNOT.
            const ChainState& fz = sx.kind == ChainState::FanZ ? sx : sy;
            const ChainState& fx = sx.kind == ChainState::FanX ? sx : sy;
            if (fz.kind != ChainState::FanZ || fx.kind != ChainState::FanX)
                throw ScheduleError("chain stitch joined two like fan-outs");
            op.corrections.push_back({{u}, fz.anchor, 'Z'});
            op.corrections.push_back({{v}, fx.anchor, 'X'});
        }
        to_body(layer, std::move(op));
    }

    void move(int layer, Patch src, Patch dst) {
        SurfaceOp op{OpKind::Move, {src, dst}};
        ChainState st = take(src);
        if (st.kind == ChainState::Bell) chain[st.partner].partner = vid(dst);
        put(dst, st);
        to_body(layer, std::move(op));
    }

    /// ZZ attachment of the control data patch; fresh=true preps the ancilla
    /// in |+> first, otherwise the ancilla already carries a chain qubit and
    /// is measured out afterwards.
    void joint_z(int layer, Patch data, Patch x, bool fresh) {
        if (fresh) {
            pre[layer].push_back(SurfaceOp{OpKind::PrepX, {x}});
            layers_used = std::max(layers_used, layer);
        }
        SurfaceOp op{OpKind::JointZZ, {data, x}};
        int m = s.next_outcome_var();
        op.outcome_vars = {m};
        if (fresh) {
            op.corrections.push_back({{m}, x, 'X'});
            put(x, {ChainState::FanZ, -1, data});
            to_body(layer, std::move(op));
            return;
        }
        ChainState st = take(x);
        if (st.kind == ChainState::Bell) {
            Patch r = g.patch(st.partner);
            op.corrections.push_back({{m}, r, 'X'});
            chain[vid(r)] = {ChainState::FanZ, -1, data};
        } else if (st.kind == ChainState::FanX) {
            op.corrections.push_back({{m}, st.anchor, 'X'});
        } else {
            throw ScheduleError("ZZ attachment onto a second control fan-out");
        }
        to_body(layer, std::move(op));
        SurfaceOp mx{OpKind::MeasX, {x}};
        int w = s.next_outcome_var();
        mx.outcome_vars = {w};
        mx.corrections.push_back({{w}, data, 'Z'});
        post[layer].push_back(std::move(mx));
    }

    /// XX attachment of the target data patch (mirror of joint_z).
    void joint_x(int layer, Patch data, Patch x, bool fresh) {
        if (fresh) {
            pre[layer].push_back(SurfaceOp{OpKind::PrepZ, {x}});
            layers_used = std::max(layers_used, layer);
        }
        SurfaceOp op{OpKind::JointXX, {x, data}};
        int m = s.next_outcome_var();
        op.outcome_vars = {m};
        if (fresh) {
            op.corrections.push_back({{m}, x, 'Z'});
            put(x, {ChainState::FanX, -1, data});
            to_body(layer, std::move(op));
            return;
        }
        ChainState st = take(x);
        if (st.kind == ChainState::Bell) {
            Patch r = g.patch(st.partner);
            op.corrections.push_back({{m}, r, 'Z'});
            chain[vid(r)] = {ChainState::FanX, -1, data};
        } else if (st.kind == ChainState::FanZ) {
            op.corrections.push_back({{m}, st.anchor, 'Z'});
        } else {
            throw ScheduleError("XX attachment onto a second target fan-out");
        }
        to_body(layer, std::move(op));
        SurfaceOp mz{OpKind::MeasZ, {x}};
        int w = s.next_outcome_var();
        mz.outcome_vars = {w};
        mz.corrections.push_back({{w}, data, 'X'});
        post[layer].push_back(std::move(mz));
    }

    /// One segment's emission decisions, split into the stage's two layers so
    /// that planning can follow execution order across segments.
    struct SegPlan {
        const OperatorPath* path;
        int first, last, base;
        EndMode lm, rm;
        bool attach_left = false, attach_right = false;
        bool move_left = false, move_right = false, deliver_right = false;
        int plo = 0, phi = -1;
        std::set<int> covered;
        bool a_empty = false;
    };

    SegPlan make_plan(const OperatorPath& path, int first, int last, int base,
                      EndMode lm, EndMode rm, CnotVariant variant) {
        SegPlan sp{&path, first, last, base, lm, rm};
        const int M = last - first;
        const bool left_data = lm == EndMode::DataCtrlZ || lm == EndMode::DataCtrlX;
        const bool right_data = rm == EndMode::DataTarget;

        int lo = (left_data || lm == EndMode::Consume) ? 1 : 0;
        int hi = (right_data || rm == EndMode::Consume) ? M - 1 : M;
        int fresh = hi - lo + 1;

        if (fresh > 0 && fresh % 2 == 1) {
            if (left_data) sp.attach_left = true;
            else if (right_data) sp.attach_right = true;
            else if (lm == EndMode::Consume) sp.move_left = true;
            else if (rm == EndMode::Consume) sp.move_right = true;
            else sp.deliver_right = true;
        }
        if (left_data && right_data) {
            if (variant == CnotVariant::TargetFirst && fresh % 2 == 1) {
                sp.attach_left = false;
                sp.attach_right = true;
            } else if (variant == CnotVariant::AttachFirst && fresh % 2 == 0 &&
                       fresh >= 2) {
                sp.attach_left = sp.attach_right = true;
            }
        }

        sp.plo = lo;
        sp.phi = hi;
        if (sp.attach_left || sp.move_left) {
            sp.covered.insert(0);
            sp.plo = 2;
        }
        if (sp.attach_right || sp.move_right) {
            sp.covered.insert(M - 1);
            sp.phi = std::min(sp.phi, M - 2);
        }
        if (sp.deliver_right) sp.phi = M - 1;

        int npairs = sp.plo <= sp.phi ? (sp.phi - sp.plo + 1) / 2 : 0;
        if (sp.plo <= sp.phi && (sp.phi - sp.plo + 1) % 2 != 0)
            throw ScheduleError("internal: chain pairing parity is off");
        for (int k = sp.plo; k + 1 <= sp.phi; k += 2) sp.covered.insert(k);
        sp.a_empty = npairs == 0 && !sp.attach_left && !sp.attach_right &&
                     !sp.move_left && !sp.move_right;
        return sp;
    }

    void emit_first_layer(const SegPlan& sp) {
        auto W = [&](int k) { return sp.path->vertices[sp.first + k]; };
        const int M = sp.last - sp.first;
        const int A = sp.base;
        if (sp.attach_left) joint_z_or_x_attach(sp.lm, A, W(0), W(1));
        if (sp.attach_right) joint_x(A, W(M), W(M - 1), true);
        if (sp.move_left) move(A, W(0), W(1));
        if (sp.move_right) move(A, W(M), W(M - 1));
        for (int k = sp.plo; k + 1 <= sp.phi; k += 2) bell_prep(A, W(k), W(k + 1));
        // Segments whose first layer is idle run their links a layer early;
        // those links only touch qubits ready at stage start.
        if (sp.a_empty) emit_links(sp, A);
    }

    void emit_second_layer(const SegPlan& sp) {
        if (!sp.a_empty) emit_links(sp, sp.base + 1);
    }

    void emit_links(const SegPlan& sp, int layer) {
        auto W = [&](int k) { return sp.path->vertices[sp.first + k]; };
        const int M = sp.last - sp.first;
        const bool left_data =
            sp.lm == EndMode::DataCtrlZ || sp.lm == EndMode::DataCtrlX;
        for (int k = 0; k < M; ++k) {
            if (sp.covered.count(k)) continue;
            if (k == M - 1 && sp.deliver_right) {
                move(sp.base + 1, W(M - 1), W(M));
                continue;
            }
            if (k == 0 && left_data) {
                joint_z_or_x_consume(sp.lm, layer, W(0), W(1));
            } else if (k == M - 1 && sp.rm == EndMode::DataTarget) {
                joint_x(layer, W(M), W(M - 1), false);
            } else {
                stitch(layer, W(k), W(k + 1));
            }
        }
    }

    void joint_z_or_x_attach(EndMode m, int layer, Patch data, Patch x) {
        if (m == EndMode::DataCtrlZ) joint_z(layer, data, x, true);
        else joint_x(layer, data, x, true);
    }
    void joint_z_or_x_consume(EndMode m, int layer, Patch data, Patch x) {
        if (m == EndMode::DataCtrlZ) joint_z(layer, data, x, false);
        else joint_x(layer, data, x, false);
    }

    /// Boundary rotation plus the collapsing measurement, ordered after the
    /// path's last chain operation.
    void finish_rotation(const OperatorPath& path) {
        Patch b = path.back();
        Patch q = path.front();
        auto it = chain.find(vid(b));
        if (it == chain.end() || (it->second.kind != ChainState::FanZ &&
                                  it->second.kind != ChainState::FanX))
            throw ScheduleError("rotation site did not receive the fan-out");
        ChainState st = take(b);
        if (!(st.anchor == q))
            throw ScheduleError("rotation fan-out anchored to the wrong qubit");
        int layer = path_last_layer;
        SurfaceOp rot{OpKind::Rotation, {b}};
        rot.rotation = path.rotation;
        rot.gate_index = path.gate_index;
        post[layer].push_back(std::move(rot));
        if (st.kind == ChainState::FanZ) {
            SurfaceOp mx{OpKind::MeasX, {b}};
            int w = s.next_outcome_var();
            mx.outcome_vars = {w};
            mx.corrections.push_back({{w}, q, 'Z'});
            post[layer].push_back(std::move(mx));
        } else {
            SurfaceOp mz{OpKind::MeasZ, {b}};
            int w = s.next_outcome_var();
            mz.outcome_vars = {w};
            mz.corrections.push_back({{w}, q, 'X'});
            post[layer].push_back(std::move(mz));
        }
    }

    void flush() {
        for (int t = 0; t <= layers_used; ++t) {
            for (SurfaceOp& op : pre[t]) s.attach_prep(std::move(op));
            s.append_layer(std::move(body[t]));
            for (SurfaceOp& op : post[t]) s.attach_meas(std::move(op));
        }
    }
};

}  // namespace

EmitResult emit_edp_subroutine(SurfaceSchedule& s, const GridGraph& g,
                               const EDPSet& set, CnotVariant variant) {
    EmitResult res;
    if (set.paths.empty()) return res;
    set.check_valid(g);
    Fragmentation frag = fragment_edp(g, set);
    res.two_phase = frag.two_phase();

    std::vector<std::vector<Fragmentation::Segment>> by_parent(set.paths.size());
    for (const auto& seg : frag.segments) by_parent[seg.parent].push_back(seg);

    Emitter em(g, s);
    for (size_t pi = 0; pi < set.paths.size(); ++pi) {
        const OperatorPath& path = set.paths[pi];
        const auto& segs = by_parent[pi];
        em.path_last_layer = -1;
        int K = static_cast<int>(path.vertices.size());
        for (int phase = 1; phase <= 2; ++phase) {
            // Two passes per stage so that bookkeeping follows time order:
            // every segment's first-layer ops land before any second-layer op.
            std::vector<Emitter::SegPlan> plans;
            for (const auto& seg : segs) {
                if (seg.label != phase) continue;
                EndMode lm, rm;
                if (seg.first == 0) {
                    lm = path.role == PathRole::RotationX ? EndMode::DataCtrlX
                                                          : EndMode::DataCtrlZ;
                } else {
                    lm = phase == 1 ? EndMode::Produce : EndMode::Consume;
                }
                if (seg.last == K - 1) {
                    rm = path.role == PathRole::Cnot ? EndMode::DataTarget
                                                     : EndMode::Produce;
                } else {
                    rm = phase == 1 ? EndMode::Produce : EndMode::Consume;
                }
                CnotVariant v = (segs.size() == 1 && path.role == PathRole::Cnot)
                                    ? variant
                                    : CnotVariant::Auto;
                plans.push_back(em.make_plan(path, seg.first, seg.last,
                                             phase == 1 ? 0 : 2, lm, rm, v));
            }
            for (const auto& sp : plans) em.emit_first_layer(sp);
            for (const auto& sp : plans) em.emit_second_layer(sp);
        }
        if (path.role != PathRole::Cnot) em.finish_rotation(path);
    }

    long before = s.depth();
    em.flush();
    res.appended_depth = s.depth() - before;
    return res;
}

void emit_local_cnots(SurfaceSchedule& s, const std::vector<LocalCnot>& group) {
    if (group.empty()) return;
    std::vector<SurfaceOp> layer_a, layer_b;
    std::vector<SurfaceOp> posts;
    for (const LocalCnot& lc : group) {
        if (!vertical_pair(lc.control, lc.ancilla) ||
            !horizontal_pair(lc.ancilla, lc.target))
            throw ScheduleError("local CNOT ancilla misplaced");
        s.attach_prep(SurfaceOp{OpKind::PrepX, {lc.ancilla}});
        SurfaceOp zz{OpKind::JointZZ, {lc.control, lc.ancilla}};
        int m1 = s.next_outcome_var();
        zz.outcome_vars = {m1};
        zz.corrections.push_back({{m1}, lc.ancilla, 'X'});
        layer_a.push_back(std::move(zz));
        SurfaceOp xx{OpKind::JointXX, {lc.ancilla, lc.target}};
        int m2 = s.next_outcome_var();
        xx.outcome_vars = {m2};
        xx.corrections.push_back({{m2}, lc.control, 'Z'});
        layer_b.push_back(std::move(xx));
        SurfaceOp mz{OpKind::MeasZ, {lc.ancilla}};
        int m3 = s.next_outcome_var();
        mz.outcome_vars = {m3};
        mz.corrections.push_back({{m3}, lc.target, 'X'});
        posts.push_back(std::move(mz));
    }
    s.append_layer(std::move(layer_a));
    s.append_layer(std::move(layer_b));
    for (SurfaceOp& op : posts) s.attach_meas(std::move(op));
}

}  // namespace edpc
