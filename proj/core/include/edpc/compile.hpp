#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "edpc/circuit.hpp"
#include "edpc/grid.hpp"
#include "edpc/paths.hpp"
#include "edpc/schedule.hpp"

namespace edpc {

struct TimeoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CompileOptions {
    int grid_side = 0;   // 0 = smallest odd side that fits
    int swap_rows = 0;   // 0 = near-square layout that fits
    int swap_cols = 0;
    bool swap_select_max = false;  // gate selection: max instead of min cost
    std::optional<std::chrono::steady_clock::time_point> deadline;
    bool collect_paths = false;
};

struct CompileStats {
    long outer_iterations = 0;
    long edp_subroutine_calls = 0;
    long rotation_iterations = 0;  // remote-rotation rounds
    long max_emit_depth = 0;
    long routing_rounds = 0;  // swap compiler only
};

struct CompileResult {
    SurfaceSchedule schedule;
    CostReport cost;
    LogicalCircuit normalized;  // the circuit the schedule implements
    CompileStats stats;
    std::string paths_json;  // filled when collect_paths is set
};

CompileResult compile_edpc(const LogicalCircuit& c,
                           const CompileOptions& opt = {});
CompileResult compile_swap(const LogicalCircuit& c,
                           const CompileOptions& opt = {});

struct RotationRequest {
    int gate = -1;
    GateKind kind = GateKind::S;
    Patch qubit;
};

/// Max-flow routing of rotation sites to the boundary ring: data vertices
/// other than the sources are absent, sources leave in their fan-out
/// orientation only, and each boundary vertex carries at most one path.
std::vector<OperatorPath> find_rotation_paths(
    const GridGraph& g, const std::vector<Patch>& boundary,
    const std::vector<RotationRequest>& rots);

/// One remote-rotation round: routes as many of the requested rotations as
/// the flow allows and emits their gadgets (depth at most 4). Returns the
/// gate ids that executed; callers iterate until none are left.
std::vector<int> remote_rotation_round(SurfaceSchedule& s, const GridGraph& g,
                                       const std::vector<Patch>& boundary,
                                       const std::vector<RotationRequest>& rots);

/// Smallest odd grid side whose data sublattice holds n qubits.
int auto_grid_side(int n);
/// Near-square rows x cols with rows*cols >= n.
std::pair<int, int> auto_swap_dims(int n);

}  // namespace edpc
