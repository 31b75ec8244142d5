#include "edpc/verify.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace edpc {

namespace {

std::string pstr(Patch p) {
    return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
}

}  // namespace

StabilizerState::StabilizerState(const LayoutInfo& layout, uint64_t seed)
    : layout_(layout),
      tab_(layout.L * layout.L),
      active_(layout.L * layout.L, 0),
      rng_(seed) {
    int max_q = -1;
    for (const auto& [q, p] : layout.embedding) max_q = std::max(max_q, q);
    logical_pos_.assign(max_q + 1, -1);
    for (const auto& [q, p] : layout.embedding) logical_pos_[q] = patch_index(p);
}

int StabilizerState::patch_index(Patch p) const {
    if (p.i < 1 || p.j < 1 || p.i > layout_.L || p.j > layout_.L)
        throw VerifyError("patch " + pstr(p) + " outside the grid");
    return (p.i - 1) * layout_.L + (p.j - 1);
}

bool StabilizerState::active(Patch p) const { return active_[patch_index(p)]; }

Patch StabilizerState::logical_patch(int q) const {
    int idx = logical_pos_.at(q);
    if (idx < 0) return {-1, -1};
    return {idx / layout_.L + 1, idx % layout_.L + 1};
}

bool StabilizerState::logical_alive(int q) const {
    return q < static_cast<int>(logical_pos_.size()) && logical_pos_[q] >= 0;
}

int StabilizerState::active_count() const {
    int n = 0;
    for (auto a : active_) n += a;
    return n;
}

int StabilizerState::coin() { return static_cast<int>(rng_() & 1); }

void StabilizerState::require_active(Patch p, bool want, const char* what) {
    if (static_cast<bool>(active_[patch_index(p)]) != want) {
        throw VerifyError(std::string(what) + ": patch " + pstr(p) +
                          (want ? " is not active" : " is already active"));
    }
}

void StabilizerState::record(const SurfaceOp& op, const std::vector<int>& bits) {
    if (op.outcome_vars.size() != bits.size())
        throw VerifyError("outcome variable count mismatch on " +
                          std::string(op_name(op.kind)));
    for (size_t k = 0; k < bits.size(); ++k)
        outcome_bits_[op.outcome_vars[k]] = bits[k];
    if (op.gate_index >= 0 && bits.size() == 1)
        gate_outcomes_[op.gate_index] = bits[0];
}

void StabilizerState::apply_corrections(const SurfaceOp& op) {
    for (const Correction& c : op.corrections) {
        int parity = 0;
        for (int v : c.vars) {
            auto it = outcome_bits_.find(v);
            if (it == outcome_bits_.end())
                throw VerifyError("correction references unknown outcome var " +
                                  std::to_string(v));
            parity ^= it->second;
        }
        if (parity) tab_.apply_pauli(patch_index(c.patch), c.pauli);
    }
}

void StabilizerState::step(const SurfaceOp& op) {
    auto coin_fn = [this] { return coin(); };
    switch (op.kind) {
        case OpKind::PrepZ:
        case OpKind::PrepX: {
            Patch p = op.patches.at(0);
            require_active(p, false, "prep");
            if (op.kind == OpKind::PrepZ) tab_.reset_z(patch_index(p), coin_fn);
            else tab_.reset_x(patch_index(p), coin_fn);
            active_[patch_index(p)] = 1;
            if (op.logical >= 0) {
                if (op.logical >= static_cast<int>(logical_pos_.size()))
                    logical_pos_.resize(op.logical + 1, -1);
                logical_pos_[op.logical] = patch_index(p);
            }
            break;
        }
        case OpKind::MeasZ:
        case OpKind::MeasX: {
            Patch p = op.patches.at(0);
            require_active(p, true, "measurement");
            char basis = op.kind == OpKind::MeasZ ? 'Z' : 'X';
            auto m = tab_.measure({{patch_index(p), basis}}, coin_fn);
            record(op, {m.bit});
            apply_corrections(op);
            active_[patch_index(p)] = 0;
            for (auto& pos : logical_pos_)
                if (pos == patch_index(p)) pos = -1;
            break;
        }
        case OpKind::JointXX:
        case OpKind::JointZZ: {
            Patch a = op.patches.at(0), b = op.patches.at(1);
            require_active(a, true, "joint measurement");
            require_active(b, true, "joint measurement");
            char basis = op.kind == OpKind::JointXX ? 'X' : 'Z';
            auto m = tab_.measure(
                {{patch_index(a), basis}, {patch_index(b), basis}}, coin_fn);
            record(op, {m.bit});
            apply_corrections(op);
            break;
        }
        case OpKind::BellPrep: {
            Patch a = op.patches.at(0), b = op.patches.at(1);
            require_active(a, false, "Bell preparation");
            require_active(b, false, "Bell preparation");
            int ia = patch_index(a), ib = patch_index(b);
            if (op.basis == 'x') {
                tab_.reset_z(ia, coin_fn);
                tab_.reset_z(ib, coin_fn);
                auto m = tab_.measure({{ia, 'X'}, {ib, 'X'}}, coin_fn);
                if (m.bit) tab_.z(ib);
            } else {
                tab_.reset_x(ia, coin_fn);
                tab_.reset_x(ib, coin_fn);
                auto m = tab_.measure({{ia, 'Z'}, {ib, 'Z'}}, coin_fn);
                if (m.bit) tab_.x(ib);
            }
            active_[ia] = active_[ib] = 1;
            break;
        }
        case OpKind::BellMeas: {
            Patch a = op.patches.at(0), b = op.patches.at(1);
            require_active(a, true, "Bell measurement");
            require_active(b, true, "Bell measurement");
            int ia = patch_index(a), ib = patch_index(b);
            int xx_bit, zz_bit;
            if (op.basis == 'x') {
                xx_bit = tab_.measure({{ia, 'X'}, {ib, 'X'}}, coin_fn).bit;
                int z1 = tab_.measure({{ia, 'Z'}}, coin_fn).bit;
                int z2 = tab_.measure({{ib, 'Z'}}, coin_fn).bit;
                zz_bit = z1 ^ z2;
            } else {
                zz_bit = tab_.measure({{ia, 'Z'}, {ib, 'Z'}}, coin_fn).bit;
                int x1 = tab_.measure({{ia, 'X'}}, coin_fn).bit;
                int x2 = tab_.measure({{ib, 'X'}}, coin_fn).bit;
                xx_bit = x1 ^ x2;
            }
            record(op, {xx_bit, zz_bit});
            apply_corrections(op);
            active_[ia] = active_[ib] = 0;
            for (auto& pos : logical_pos_)
                if (pos == ia || pos == ib) pos = -1;
            break;
        }
        case OpKind::Move: {
            Patch src = op.patches.at(0), dst = op.patches.at(1);
            require_active(src, true, "move");
            require_active(dst, false, "move");
            int is = patch_index(src), id = patch_index(dst);
            if (horizontal_pair(src, dst)) {
                tab_.reset_z(id, coin_fn);
                int m1 = tab_.measure({{is, 'X'}, {id, 'X'}}, coin_fn).bit;
                int m2 = tab_.measure({{is, 'Z'}}, coin_fn).bit;
                if (m1) tab_.z(id);
                if (m2) tab_.x(id);
            } else {
                tab_.reset_x(id, coin_fn);
                int m1 = tab_.measure({{is, 'Z'}, {id, 'Z'}}, coin_fn).bit;
                int m2 = tab_.measure({{is, 'X'}}, coin_fn).bit;
                if (m1) tab_.x(id);
                if (m2) tab_.z(id);
            }
            active_[is] = 0;
            active_[id] = 1;
            for (auto& pos : logical_pos_)
                if (pos == is) pos = id;
            break;
        }
        case OpKind::Hadamard: {
            Patch p = op.patches.at(0);
            require_active(p, true, "hadamard");
            tab_.h(patch_index(p));
            break;
        }
        case OpKind::Rotation: {
            Patch p = op.patches.at(0);
            require_active(p, true, "rotation");
            int idx = patch_index(p);
            switch (op.rotation) {
                case GateKind::S: tab_.s(idx); break;
                case GateKind::Sdg: tab_.sdg(idx); break;
                case GateKind::Sx: tab_.sx(idx); break;
                case GateKind::Sxdg: tab_.sxdg(idx); break;
                case GateKind::T:
                case GateKind::Tdg:
                case GateKind::Tx:
                case GateKind::Txdg:
                    if (strict_)
                        throw NonCliffordError(
                            "T-family rotation cannot be simulated");
                    skipped_non_clifford_ = true;
                    break;
                default:
                    throw VerifyError("unexpected rotation kind");
            }
            break;
        }
    }
}

void StabilizerState::run(const SurfaceSchedule& s) {
    for (const Layer& layer : s.layers) {
        for (const SurfaceOp& op : layer.pre) step(op);
        for (const SurfaceOp& op : layer.body) step(op);
        for (const SurfaceOp& op : layer.post) step(op);
    }
}

LogicalCircuit prepare_circuit(const LogicalCircuit& c) {
    // Propagating through T (with the S-type byproduct rewrite) leaves no
    // bare Pauli gates at all, and the elementary op set has none.
    auto [normalized, frame] =
        commute_paulis(c, PauliThroughT::Propagate);
    (void)frame;  // residual end-of-circuit frame, irrelevant for equivalence
    return normalize_preps(normalized);
}

EquivalenceReport check_equivalence(const LogicalCircuit& c,
                                    const SurfaceSchedule& s, int samples,
                                    uint64_t seed) {
    EquivalenceReport rep;
    for (const Gate& g : c.gates)
        if (!is_clifford(g.kind))
            throw NonCliffordError("equivalence checking needs a Clifford "
                                   "circuit; use structural_check for T");

    for (int sample = 0; sample < samples; ++sample) {
        uint64_t sample_seed = seed + 0x9E3779B97F4A7C15ull * (sample + 1);
        StabilizerState st(s.layout, sample_seed);
        try {
            st.run(s);
        } catch (const std::exception& e) {
            rep.message = "sample " + std::to_string(sample) +
                          ": schedule execution failed: " + e.what();
            return rep;
        }

        // Reference simulation, forcing logical outcomes to the sampled run.
        Tableau ref(c.n_logical);
        std::vector<uint8_t> alive(c.n_logical, 0);
        std::mt19937_64 unused_rng(sample_seed);
        bool fail = false;
        std::string why;
        for (size_t gi = 0; gi < c.gates.size() && !fail; ++gi) {
            const Gate& g = c.gates[gi];
            switch (g.kind) {
                case GateKind::PrepZ:
                    ref.reset_z(g.q0, [&] { return 0; });
                    alive[g.q0] = 1;
                    break;
                case GateKind::PrepX:
                    ref.reset_x(g.q0, [&] { return 0; });
                    alive[g.q0] = 1;
                    break;
                case GateKind::H: ref.h(g.q0); break;
                case GateKind::S: ref.s(g.q0); break;
                case GateKind::Sdg: ref.sdg(g.q0); break;
                case GateKind::Sx: ref.sx(g.q0); break;
                case GateKind::Sxdg: ref.sxdg(g.q0); break;
                case GateKind::X: ref.x(g.q0); break;
                case GateKind::Y: ref.y(g.q0); break;
                case GateKind::Z: ref.z(g.q0); break;
                case GateKind::Cnot: ref.cnot(g.q0, g.q1); break;
                case GateKind::MeasZ:
                case GateKind::MeasX: {
                    auto it = st.gate_outcomes().find(static_cast<int>(gi));
                    if (it == st.gate_outcomes().end()) {
                        fail = true;
                        why = "measurement gate " + std::to_string(gi) +
                              " missing from the schedule";
                        break;
                    }
                    int want = it->second;
                    char basis = g.kind == GateKind::MeasZ ? 'Z' : 'X';
                    auto m = ref.measure({{g.q0, basis}}, [&] { return want; });
                    if (m.bit != want) {
                        fail = true;
                        why = "gate " + std::to_string(gi) +
                              ": deterministic outcome mismatch";
                    }
                    alive[g.q0] = 0;
                    break;
                }
                default:
                    fail = true;
                    why = "non-Clifford gate in reference";
            }
        }
        if (fail) {
            rep.message = "sample " + std::to_string(sample) + ": " + why;
            return rep;
        }

        // The schedule must leave exactly the live data patches active.
        std::vector<int> keep_sched, keep_ref;
        for (int q = 0; q < c.n_logical; ++q) {
            if (!alive[q]) continue;
            if (!st.logical_alive(q)) {
                rep.message = "sample " + std::to_string(sample) + ": qubit " +
                              std::to_string(q) + " lost by the schedule";
                return rep;
            }
            keep_sched.push_back(st.patch_index(st.logical_patch(q)));
            keep_ref.push_back(q);
        }
        if (st.active_count() != static_cast<int>(keep_sched.size())) {
            rep.message = "sample " + std::to_string(sample) +
                          ": stray active patches at end of schedule";
            return rep;
        }

        auto lhs = st.tableau().canonical_restriction(keep_sched);
        auto rhs = ref.canonical_restriction(keep_ref);
        if (keep_sched.empty()) {
            // Nothing left to compare; outcomes already matched.
        } else if (lhs.empty() || rhs.empty() || lhs != rhs) {
            rep.message = "sample " + std::to_string(sample) +
                          ": final states differ";
            return rep;
        }
        ++rep.samples_run;
    }
    rep.equivalent = true;
    return rep;
}

std::vector<std::string> structural_check(const LogicalCircuit& c,
                                          const SurfaceSchedule& s) {
    std::vector<std::string> bad = s.validate();

    std::map<int, int> rot_seen, meas_seen, prep_seen, h_seen;
    for (const Layer& layer : s.layers) {
        auto scan = [&](const std::vector<SurfaceOp>& ops) {
            for (const SurfaceOp& op : ops) {
                if (op.gate_index < 0) continue;
                if (op.kind == OpKind::Rotation) ++rot_seen[op.gate_index];
                else if (op.kind == OpKind::MeasX || op.kind == OpKind::MeasZ)
                    ++meas_seen[op.gate_index];
                else if (op.kind == OpKind::PrepX || op.kind == OpKind::PrepZ)
                    ++prep_seen[op.gate_index];
                else if (op.kind == OpKind::Hadamard) ++h_seen[op.gate_index];
            }
        };
        scan(layer.pre);
        scan(layer.body);
        scan(layer.post);
    }
    for (size_t gi = 0; gi < c.gates.size(); ++gi) {
        const Gate& g = c.gates[gi];
        auto expect_once = [&](std::map<int, int>& seen, const char* what) {
            if (seen[static_cast<int>(gi)] != 1)
                bad.push_back("gate " + std::to_string(gi) + " (" +
                              gate_name(g.kind) + "): expected exactly one " +
                              what + " op, found " +
                              std::to_string(seen[static_cast<int>(gi)]));
        };
        if (is_rotation(g.kind)) expect_once(rot_seen, "rotation");
        else if (is_measurement(g.kind)) expect_once(meas_seen, "measurement");
        else if (is_prep(g.kind)) expect_once(prep_seen, "preparation");
        else if (g.kind == GateKind::H) expect_once(h_seen, "hadamard");
    }
    return bad;
}

}  // namespace edpc
