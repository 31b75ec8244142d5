#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edpc/circuit.hpp"
#include "edpc/grid.hpp"

namespace edpc {

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OpKind : uint8_t {
    PrepX,
    PrepZ,
    MeasX,
    MeasZ,
    JointXX,
    JointZZ,
    Move,
    BellPrep,
    BellMeas,
    Hadamard,
    Rotation,  // S/T-family applied at the boundary set B
};

const char* op_name(OpKind k);
int op_duration(OpKind k);  // logical time steps; rotations count 0

/// Pauli applied to `patch` when the parity of the listed outcome variables
/// is odd. Byproduct bookkeeping, consumed by the simulator; never a
/// scheduled operation.
struct Correction {
    std::vector<int> vars;
    Patch patch;
    char pauli = 'X';  // 'X', 'Y' or 'Z'
};

struct SurfaceOp {
    OpKind kind;
    std::vector<Patch> patches;
    char basis = 0;            // 'x' or 'z' for Bell ops (joint-measurement form)
    GateKind rotation = GateKind::S;  // Rotation ops only
    std::vector<int> outcome_vars;    // one var for single-bit measurements,
                                      // (xx, zz) pair for Bell measurements
    std::vector<Correction> corrections;
    int gate_index = -1;  // originating circuit gate, if any
    int logical = -1;     // logical qubit a preparation (re)activates

    int duration() const { return op_duration(kind); }
};

/// One unit time step: zero-duration preps attach before the step, body ops
/// span it (multi-step ops occupy following layers too), measurements attach
/// after. A layer whose body is empty and that is not spanned by an earlier
/// multi-step op contributes no depth.
struct Layer {
    std::vector<SurfaceOp> pre;
    std::vector<SurfaceOp> body;
    std::vector<SurfaceOp> post;
};

struct LayoutInfo {
    enum class Kind { Square, Rotated } kind = Kind::Square;
    int L = 0;        // square side, or bounding side for rotated layouts
    int rows = 0;     // rotated only
    int cols = 0;
    std::vector<std::pair<int, Patch>> embedding;        // qubit -> patch
    std::vector<std::pair<int, Patch>> final_embedding;  // after any moves
    std::vector<Patch> boundary;                         // rotation set B

    int space() const { return L * L; }
};

struct CostReport {
    long depth = 0;
    long space = 0;
    long spacetime = 0;

    std::optional<int> code_distance;
    std::optional<double> physical_spacetime;
};

class SurfaceSchedule {
  public:
    LayoutInfo layout;
    std::string algorithm;
    std::vector<Layer> layers;

    /// Appends one unit layer of body operations; throws ScheduleError on a
    /// patch collision, orientation mismatch, or occupancy conflict with a
    /// running multi-step op. Pending attached preps join the new layer.
    void append_layer(std::vector<SurfaceOp> ops);
    /// Queues a zero-duration preparation for the start of the next layer.
    void attach_prep(SurfaceOp op);
    /// Appends a zero-duration op after the last layer (measurement, or a
    /// boundary rotation, which must sit on the layout's boundary set).
    void attach_meas(SurfaceOp op);
    /// Flushes queued preps into a depth-zero trailing slot (for schedules
    /// that end with bare preparations).
    void flush_pending();

    long depth() const;
    int next_outcome_var() { return outcome_counter_++; }
    int outcome_var_count() const { return outcome_counter_; }

    /// Static geometry checks: occupancy, orientation, boundary placement.
    /// Returns human-readable violations instead of throwing.
    std::vector<std::string> validate() const;

  private:
    std::vector<SurfaceOp> pending_pre_;
    std::map<std::pair<int, int>, int> busy_;  // multi-step occupancy
    int outcome_counter_ = 0;

    friend SurfaceSchedule schedule_from_json(const std::string&);
};

CostReport spacetime_cost(const SurfaceSchedule& s);

/// Smallest odd code distance meeting the target logical failure budget,
/// and the physical footprint it implies.
std::pair<int, double> physical_cost_estimate(double a_logical, double p,
                                              double p_star);

std::string schedule_to_json(const SurfaceSchedule& s);
SurfaceSchedule schedule_from_json(const std::string& text);

}  // namespace edpc
