#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace edpc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GateKind : uint8_t {
    PrepZ,
    PrepX,
    MeasZ,
    MeasX,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Sx,
    Sxdg,
    Tx,
    Txdg,
    Cnot,
};

const char* gate_name(GateKind k);
bool is_rotation(GateKind k);      // S/T family, needs a magic state at the boundary
bool is_z_rotation(GateKind k);    // diagonal in Z (S, Sdg, T, Tdg)
bool is_pauli(GateKind k);
bool is_clifford(GateKind k);      // everything except T/Tdg/Tx/Txdg
bool is_measurement(GateKind k);
bool is_prep(GateKind k);

/// One instruction. CNOT stores (control, target); everything else one qubit.
struct Gate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;  // CNOT target, -1 otherwise

    bool is_cnot() const { return kind == GateKind::Cnot; }
    bool touches(int q) const { return q == q0 || q == q1; }
    bool overlaps(const Gate& other) const;
};

/// Ordered list of gates over qubit indices [0, n_logical).
struct LogicalCircuit {
    int n_logical = 0;
    std::vector<Gate> gates;
    std::string name;

    /// Outcome-flip flags produced by Pauli commutation, one entry per gate
    /// (meaningful only for measurement gates). Empty until commute_paulis runs.
    std::vector<uint8_t> outcome_flip;

    void check_valid() const;  // throws SemanticError on bad operands
};

/// Classically tracked Pauli byproducts, one X bit and one Z bit per qubit.
struct PauliFrame {
    std::vector<uint8_t> x_bits;
    std::vector<uint8_t> z_bits;

    explicit PauliFrame(int n = 0) : x_bits(n, 0), z_bits(n, 0) {}
    bool identity() const;
};

LogicalCircuit parse_circuit(const std::string& text);
std::string serialize_circuit(const LogicalCircuit& c);

enum class PauliThroughT {
    StopAtT,    // leave the accumulated Pauli as a gate right before T/Tx
    Propagate,  // commute through, appending the S-type byproduct after the T
};

/// Sweeps X/Y/Z gates to the end of the circuit, absorbing them into
/// measurement flip flags and a residual end-of-circuit frame.
std::pair<LogicalCircuit, PauliFrame> commute_paulis(
    const LogicalCircuit& c, PauliThroughT policy = PauliThroughT::StopAtT);

/// Indices of gates that are executable now: not yet executed, and every
/// earlier gate with overlapping support already executed. Ascending order.
std::vector<int> available_ops(const LogicalCircuit& c,
                               const std::vector<uint8_t>& executed);

/// Inserts a PrepZ in front of the first use of any qubit that is not
/// explicitly prepared, and rejects preps applied to live qubits.
LogicalCircuit normalize_preps(const LogicalCircuit& c);

}  // namespace edpc
