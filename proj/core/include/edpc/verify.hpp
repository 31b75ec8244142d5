#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "edpc/circuit.hpp"
#include "edpc/schedule.hpp"
#include "edpc/tableau.hpp"

namespace edpc {

struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonCliffordError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Executes surface operations on a stabilizer tableau over all grid patches.
/// Byproduct corrections attached to measurements are applied as soon as
/// their outcome bits exist, which keeps every gadget in its canonical form.
class StabilizerState {
  public:
    StabilizerState(const LayoutInfo& layout, uint64_t seed);

    void step(const SurfaceOp& op);
    void run(const SurfaceSchedule& s);

    const std::map<int, int>& outcome_bits() const { return outcome_bits_; }
    /// Outcomes of measurements tagged with a circuit gate index.
    const std::map<int, int>& gate_outcomes() const { return gate_outcomes_; }

    int patch_index(Patch p) const;
    bool active(Patch p) const;
    /// Current patch of a logical qubit (moves tracked), -1 row if dead.
    Patch logical_patch(int q) const;
    bool logical_alive(int q) const;
    int active_count() const;

    const Tableau& tableau() const { return tab_; }
    bool skipped_non_clifford() const { return skipped_non_clifford_; }
    /// When false, T-family rotations are skipped instead of throwing.
    void set_strict(bool strict) { strict_ = strict; }

  private:
    LayoutInfo layout_;
    Tableau tab_;
    std::vector<uint8_t> active_;
    std::vector<int> logical_pos_;  // logical qubit -> patch index or -1
    std::mt19937_64 rng_;
    std::map<int, int> outcome_bits_;
    std::map<int, int> gate_outcomes_;
    bool strict_ = true;
    bool skipped_non_clifford_ = false;

    int coin();
    void record(const SurfaceOp& op, const std::vector<int>& bits);
    void apply_corrections(const SurfaceOp& op);
    void require_active(Patch p, bool want, const char* what);
};

struct EquivalenceReport {
    bool equivalent = false;
    int samples_run = 0;
    std::string message;
};

/// Samples the schedule with fresh randomness and checks, per sample, that
/// the final stabilizer state on the surviving data patches and every logical
/// measurement outcome agree with a direct simulation of the circuit.
/// The circuit must be the same normalized form the compiler consumed.
EquivalenceReport check_equivalence(const LogicalCircuit& c,
                                    const SurfaceSchedule& s, int samples,
                                    uint64_t seed);

/// Static checks for schedules that cannot be simulated (T gates): every
/// circuit gate accounted for, rotations on the boundary set, geometry valid.
std::vector<std::string> structural_check(const LogicalCircuit& c,
                                          const SurfaceSchedule& s);

/// commute_paulis followed by normalize_preps; the canonical compiler input.
LogicalCircuit prepare_circuit(const LogicalCircuit& c);

}  // namespace edpc
