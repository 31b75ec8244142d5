#pragma once

#include "edpc/paths.hpp"
#include "edpc/schedule.hpp"

namespace edpc {

/// Arrangement of a full-path long-range CNOT. Auto picks by interior parity:
/// even interiors pair up fully (PrepFirst), odd interiors attach one end in
/// the first step (ControlFirst). The explicit values exist for the
/// alternative constructions with the same depth.
enum class CnotVariant { Auto, PrepFirst, AttachFirst, ControlFirst, TargetFirst };

struct EmitResult {
    long appended_depth = 0;
    bool two_phase = false;
};

/// Lays down the two-stage protocol for a fragmented operator EDP set:
/// stage-1 segments prepare Bell pairs or attach data qubits, stage-2
/// segments stitch them with Bell measurements. Each stage is depth 2, so a
/// call appends at most 4 time steps, exactly 2 when the set is
/// vertex-disjoint. Rotation paths get their boundary rotation and collapse
/// measurement attached once their chain is complete.
EmitResult emit_edp_subroutine(SurfaceSchedule& s, const GridGraph& g,
                               const EDPSet& set,
                               CnotVariant variant = CnotVariant::Auto);

struct LocalCnot {
    Patch control;  // vertically adjacent to the ancilla
    Patch target;   // horizontally adjacent to the ancilla
    Patch ancilla;
    int gate_index = -1;
};

/// Depth-2 nearest-neighbor CNOTs through one ancilla each; the group shares
/// the two layers and must be patch-disjoint.
void emit_local_cnots(SurfaceSchedule& s, const std::vector<LocalCnot>& group);

}  // namespace edpc
