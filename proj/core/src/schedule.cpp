#include "edpc/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"

namespace edpc {

const char* op_name(OpKind k) {
    switch (k) {
        case OpKind::PrepX: return "prep_x";
        case OpKind::PrepZ: return "prep_z";
        case OpKind::MeasX: return "meas_x";
        case OpKind::MeasZ: return "meas_z";
        case OpKind::JointXX: return "joint_xx";
        case OpKind::JointZZ: return "joint_zz";
        case OpKind::Move: return "move";
        case OpKind::BellPrep: return "bell_prep";
        case OpKind::BellMeas: return "bell_meas";
        case OpKind::Hadamard: return "hadamard";
        case OpKind::Rotation: return "rotation";
    }
    return "?";
}

int op_duration(OpKind k) {
    switch (k) {
        case OpKind::PrepX:
        case OpKind::PrepZ:
        case OpKind::MeasX:
        case OpKind::MeasZ:
        case OpKind::Rotation:
            return 0;
        case OpKind::Hadamard:
            return 3;
        default:
            return 1;
    }
}

namespace {

void check_body_op(const SurfaceOp& op) {
    switch (op.kind) {
        case OpKind::JointXX:
            if (op.patches.size() != 2 ||
                !horizontal_pair(op.patches[0], op.patches[1]))
                throw ScheduleError("joint XX needs horizontal neighbors");
            break;
        case OpKind::JointZZ:
            if (op.patches.size() != 2 ||
                !vertical_pair(op.patches[0], op.patches[1]))
                throw ScheduleError("joint ZZ needs vertical neighbors");
            break;
        case OpKind::BellPrep:
        case OpKind::BellMeas: {
            if (op.patches.size() != 2 ||
                !adjacent(op.patches[0], op.patches[1]))
                throw ScheduleError("Bell op needs adjacent patches");
            bool horiz = horizontal_pair(op.patches[0], op.patches[1]);
            if (op.basis != (horiz ? 'x' : 'z'))
                throw ScheduleError("Bell op basis does not match orientation");
            break;
        }
        case OpKind::Move:
            if (op.patches.size() != 2 ||
                !adjacent(op.patches[0], op.patches[1]))
                throw ScheduleError("move needs adjacent patches");
            break;
        case OpKind::Hadamard:
            if (op.patches.size() != 4 && op.patches.size() != 1)
                throw ScheduleError("hadamard needs one or four patches");
            break;
        default:
            throw ScheduleError(std::string("zero-duration op '") +
                                op_name(op.kind) + "' in a layer body");
    }
}

}  // namespace

void SurfaceSchedule::append_layer(std::vector<SurfaceOp> ops) {
    for (auto& [key, left] : busy_)
        if (left > 0) --left;
    std::set<std::pair<int, int>> used;
    for (const SurfaceOp& op : ops) {
        check_body_op(op);
        for (Patch p : op.patches) {
            auto key = std::pair{p.i, p.j};
            if (!used.insert(key).second)
                throw ScheduleError("patch collision at (" +
                                    std::to_string(p.i) + "," +
                                    std::to_string(p.j) + ")");
            auto it = busy_.find(key);
            if (it != busy_.end() && it->second > 0)
                throw ScheduleError("patch still occupied by a multi-step op");
            if (op.duration() > 1)
                busy_[key] = std::max(busy_[key], op.duration() - 1);
        }
    }
    Layer layer;
    layer.pre = std::move(pending_pre_);
    pending_pre_.clear();
    layer.body = std::move(ops);
    layers.push_back(std::move(layer));
}

void SurfaceSchedule::attach_prep(SurfaceOp op) {
    pending_pre_.push_back(std::move(op));
}

void SurfaceSchedule::attach_meas(SurfaceOp op) {
    if (op.kind == OpKind::Rotation) {
        if (op.patches.size() != 1 ||
            std::find(layout.boundary.begin(), layout.boundary.end(),
                      op.patches[0]) == layout.boundary.end())
            throw ScheduleError("rotation off the boundary set");
    } else if (op.kind != OpKind::MeasX && op.kind != OpKind::MeasZ) {
        throw ScheduleError("only measurements and rotations attach after a "
                            "layer");
    }
    // Queued preparations precede this measurement in program order; give
    // them a depth-free slot of their own first.
    if (!pending_pre_.empty()) flush_pending();
    if (layers.empty()) layers.push_back(Layer{});
    layers.back().post.push_back(std::move(op));
}

void SurfaceSchedule::flush_pending() {
    if (pending_pre_.empty()) return;
    Layer slot;
    slot.pre = std::move(pending_pre_);
    pending_pre_.clear();
    layers.push_back(std::move(slot));
}

long SurfaceSchedule::depth() const {
    // A layer counts when its body is nonempty or an earlier multi-step op
    // still occupies it.
    long d = 0;
    int carry = 0;
    for (const Layer& layer : layers) {
        int span = carry > 0 ? 1 : 0;
        for (const SurfaceOp& op : layer.body) {
            span = 1;
            carry = std::max(carry, op.duration());
        }
        d += span;
        if (carry > 0) --carry;
    }
    return d;
}

namespace {

bool on_boundary(const LayoutInfo& lay, Patch p) {
    return std::find(lay.boundary.begin(), lay.boundary.end(), p) !=
           lay.boundary.end();
}

}  // namespace

std::vector<std::string> SurfaceSchedule::validate() const {
    std::vector<std::string> bad;
    auto where = [](size_t t) { return "layer " + std::to_string(t) + ": "; };
    auto pstr = [](Patch p) {
        return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
    };

    // occupancy[patch] = layers still reserved by a running multi-step op
    std::map<std::pair<int, int>, int> busy;

    for (size_t t = 0; t < layers.size(); ++t) {
        const Layer& layer = layers[t];
        for (auto& [patch, left] : busy)
            if (left > 0) --left;

        std::set<std::pair<int, int>> pre_used, body_used, post_used;
        for (const SurfaceOp& op : layer.pre) {
            if (op.kind != OpKind::PrepX && op.kind != OpKind::PrepZ)
                bad.push_back(where(t) + "non-preparation in pre slot");
            for (Patch p : op.patches)
                if (!pre_used.insert({p.i, p.j}).second)
                    bad.push_back(where(t) + "two preparations on " + pstr(p));
        }

        for (const SurfaceOp& op : layer.body) {
            if (op.duration() < 1)
                bad.push_back(where(t) + "zero-duration op in body");
            switch (op.kind) {
                case OpKind::JointXX:
                    if (op.patches.size() != 2 ||
                        !horizontal_pair(op.patches[0], op.patches[1]))
                        bad.push_back(where(t) +
                                      "joint XX needs horizontal neighbors");
                    break;
                case OpKind::JointZZ:
                    if (op.patches.size() != 2 ||
                        !vertical_pair(op.patches[0], op.patches[1]))
                        bad.push_back(where(t) +
                                      "joint ZZ needs vertical neighbors");
                    break;
                case OpKind::BellPrep:
                case OpKind::BellMeas: {
                    if (op.patches.size() != 2 ||
                        !adjacent(op.patches[0], op.patches[1])) {
                        bad.push_back(where(t) + "Bell op needs adjacent patches");
                        break;
                    }
                    bool horiz = horizontal_pair(op.patches[0], op.patches[1]);
                    char want = horiz ? 'x' : 'z';
                    if (op.basis != want)
                        bad.push_back(where(t) + "Bell op basis does not match "
                                                 "edge orientation");
                    break;
                }
                case OpKind::Move:
                    if (op.patches.size() != 2 ||
                        !adjacent(op.patches[0], op.patches[1]))
                        bad.push_back(where(t) + "move needs adjacent patches");
                    break;
                case OpKind::Hadamard:
                    if (op.patches.size() != 4 && op.patches.size() != 1)
                        bad.push_back(where(t) +
                                      "hadamard needs its data patch plus three "
                                      "ancilla patches (or one patch in compact "
                                      "layouts)");
                    break;
                default:
                    bad.push_back(where(t) + "unexpected body op " +
                                  op_name(op.kind));
            }
            for (Patch p : op.patches) {
                auto key = std::pair{p.i, p.j};
                if (!body_used.insert(key).second)
                    bad.push_back(where(t) + "patch collision on " + pstr(p));
                if (busy.count(key) && busy[key] > 0)
                    bad.push_back(where(t) + "patch " + pstr(p) +
                                  " still occupied by a multi-step op");
                if (op.duration() > 1)
                    busy[key] = std::max(busy[key], op.duration() - 1);
                if (p.i < 1 || p.j < 1 || p.i > layout.L || p.j > layout.L)
                    bad.push_back(where(t) + "patch " + pstr(p) +
                                  " outside the grid");
            }
        }

        for (const SurfaceOp& op : layer.post) {
            bool meas = op.kind == OpKind::MeasX || op.kind == OpKind::MeasZ;
            bool rot = op.kind == OpKind::Rotation;
            if (!meas && !rot)
                bad.push_back(where(t) + "non-measurement in post slot");
            if (rot) {
                if (op.patches.size() != 1 || !on_boundary(layout, op.patches[0]))
                    bad.push_back(where(t) + "rotation off the boundary set");
                continue;  // rotations may precede the measurement of the
                           // same patch in this slot
            }
            for (Patch p : op.patches)
                if (!post_used.insert({p.i, p.j}).second)
                    bad.push_back(where(t) + "two measurements on " + pstr(p));
        }
    }
    return bad;
}

CostReport spacetime_cost(const SurfaceSchedule& s) {
    CostReport r;
    r.depth = s.depth();
    r.space = s.layout.space();
    r.spacetime = r.depth * r.space;
    return r;
}

std::pair<int, double> physical_cost_estimate(double a_logical, double p,
                                              double p_star) {
    if (!(p > 0.0) || !(p < p_star) || !(p_star < 1.0))
        throw ScheduleError("need 0 < p < p_star < 1");
    if (a_logical < 1.0) throw ScheduleError("logical cost must be at least 1");
    double target = 2.0 * std::log(a_logical) / (std::log(p_star) - std::log(p));
    int d = 1;
    while (d < target) d += 2;
    return {d, a_logical * static_cast<double>(d) * d * d};
}

namespace {

using ojson = nlohmann::ordered_json;

ojson op_to_json(const SurfaceOp& op) {
    ojson j;
    j["kind"] = op_name(op.kind);
    auto& ps = j["patches"] = ojson::array();
    for (Patch p : op.patches) ps.push_back({p.i, p.j});
    if (op.basis) j["basis"] = std::string(1, op.basis);
    if (op.kind == OpKind::Rotation) j["rot"] = gate_name(op.rotation);
    if (op.outcome_vars.size() == 1) j["outcome_var"] = op.outcome_vars[0];
    else if (!op.outcome_vars.empty()) j["outcome_vars"] = op.outcome_vars;
    if (!op.corrections.empty()) {
        auto& cs = j["corrections"] = ojson::array();
        for (const Correction& c : op.corrections)
            cs.push_back({{"vars", c.vars},
                          {"patch", {c.patch.i, c.patch.j}},
                          {"pauli", std::string(1, c.pauli)}});
    }
    if (op.gate_index >= 0) j["gate"] = op.gate_index;
    if (op.logical >= 0) j["logical"] = op.logical;
    return j;
}

SurfaceOp op_from_json(const ojson& j) {
    SurfaceOp op;
    std::string kind = j.at("kind");
    bool found = false;
    for (int k = 0; k <= static_cast<int>(OpKind::Rotation); ++k) {
        if (kind == op_name(static_cast<OpKind>(k))) {
            op.kind = static_cast<OpKind>(k);
            found = true;
            break;
        }
    }
    if (!found) throw ScheduleError("unknown op kind '" + kind + "'");
    for (const auto& p : j.at("patches"))
        op.patches.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    if (j.contains("basis")) op.basis = j["basis"].get<std::string>().at(0);
    if (j.contains("rot")) {
        std::string r = j["rot"];
        for (int k = 0; k <= static_cast<int>(GateKind::Cnot); ++k)
            if (r == gate_name(static_cast<GateKind>(k)))
                op.rotation = static_cast<GateKind>(k);
    }
    if (j.contains("outcome_var"))
        op.outcome_vars.push_back(j["outcome_var"].get<int>());
    else if (j.contains("outcome_vars"))
        op.outcome_vars = j["outcome_vars"].get<std::vector<int>>();
    if (j.contains("corrections")) {
        for (const auto& c : j["corrections"]) {
            Correction corr;
            corr.vars = c.at("vars").get<std::vector<int>>();
            corr.patch = {c.at("patch").at(0).get<int>(),
                          c.at("patch").at(1).get<int>()};
            corr.pauli = c.at("pauli").get<std::string>().at(0);
            op.corrections.push_back(std::move(corr));
        }
    }
    if (j.contains("gate")) op.gate_index = j["gate"].get<int>();
    if (j.contains("logical")) op.logical = j["logical"].get<int>();
    return op;
}

ojson embedding_to_json(const std::vector<std::pair<int, Patch>>& emb) {
    ojson arr = ojson::array();
    for (const auto& [q, p] : emb) arr.push_back({q, {p.i, p.j}});
    return arr;
}

std::vector<std::pair<int, Patch>> embedding_from_json(const ojson& arr) {
    std::vector<std::pair<int, Patch>> out;
    for (const auto& e : arr)
        out.emplace_back(e.at(0).get<int>(),
                         Patch{e.at(1).at(0).get<int>(), e.at(1).at(1).get<int>()});
    return out;
}

}  // namespace

std::string schedule_to_json(const SurfaceSchedule& s) {
    ojson j;
    ojson grid;
    grid["L"] = s.layout.L;
    grid["layout"] =
        s.layout.kind == LayoutInfo::Kind::Square ? "square" : "rotated";
    if (s.layout.kind == LayoutInfo::Kind::Rotated) {
        grid["rows"] = s.layout.rows;
        grid["cols"] = s.layout.cols;
    }
    j["grid"] = grid;
    if (!s.algorithm.empty()) j["algorithm"] = s.algorithm;
    j["embedding"] = embedding_to_json(s.layout.embedding);
    j["final_embedding"] = embedding_to_json(s.layout.final_embedding);
    ojson bnd = ojson::array();
    for (Patch p : s.layout.boundary) bnd.push_back({p.i, p.j});
    j["boundary"] = bnd;
    auto& ls = j["layers"] = ojson::array();
    for (size_t t = 0; t < s.layers.size(); ++t) {
        ojson lj;
        lj["t"] = t;
        auto& ops = lj["ops"] = ojson::array();
        for (const SurfaceOp& op : s.layers[t].pre) {
            ojson oj = op_to_json(op);
            oj["when"] = "pre";
            ops.push_back(oj);
        }
        for (const SurfaceOp& op : s.layers[t].body) ops.push_back(op_to_json(op));
        for (const SurfaceOp& op : s.layers[t].post) {
            ojson oj = op_to_json(op);
            oj["when"] = "post";
            ops.push_back(oj);
        }
        ls.push_back(lj);
    }
    return j.dump(1);
}

SurfaceSchedule schedule_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ScheduleError(std::string("bad schedule JSON: ") + e.what());
    }
    SurfaceSchedule s;
    try {
        const auto& grid = j.at("grid");
        s.layout.L = grid.at("L").get<int>();
        std::string kind = grid.value("layout", "square");
        s.layout.kind = kind == "rotated" ? LayoutInfo::Kind::Rotated
                                          : LayoutInfo::Kind::Square;
        if (s.layout.kind == LayoutInfo::Kind::Rotated) {
            s.layout.rows = grid.at("rows").get<int>();
            s.layout.cols = grid.at("cols").get<int>();
        }
        s.algorithm = j.value("algorithm", "");
        if (j.contains("embedding"))
            s.layout.embedding = embedding_from_json(j["embedding"]);
        if (j.contains("final_embedding"))
            s.layout.final_embedding = embedding_from_json(j["final_embedding"]);
        if (j.contains("boundary"))
            for (const auto& p : j["boundary"])
                s.layout.boundary.push_back(
                    {p.at(0).get<int>(), p.at(1).get<int>()});
        int max_var = -1;
        for (const auto& lj : j.at("layers")) {
            Layer layer;
            for (const auto& oj : lj.at("ops")) {
                SurfaceOp op = op_from_json(oj);
                for (int v : op.outcome_vars) max_var = std::max(max_var, v);
                std::string when = oj.value("when", "body");
                if (when == "pre") layer.pre.push_back(std::move(op));
                else if (when == "post") layer.post.push_back(std::move(op));
                else layer.body.push_back(std::move(op));
            }
            s.layers.push_back(std::move(layer));
        }
        s.outcome_counter_ = max_var + 1;
    } catch (const nlohmann::json::exception& e) {
        throw ScheduleError(std::string("bad schedule JSON: ") + e.what());
    }
    return s;
}

}  // namespace edpc
