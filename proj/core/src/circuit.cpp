#include "edpc/circuit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace edpc {

namespace {

const std::map<std::string, GateKind>& token_table() {
    static const std::map<std::string, GateKind> table = {
        {"prep_z", GateKind::PrepZ}, {"prep_x", GateKind::PrepX},
        {"meas_z", GateKind::MeasZ}, {"meas_x", GateKind::MeasX},
        {"x", GateKind::X},          {"y", GateKind::Y},
        {"z", GateKind::Z},          {"h", GateKind::H},
        {"s", GateKind::S},          {"sdg", GateKind::Sdg},
        {"t", GateKind::T},          {"tdg", GateKind::Tdg},
        {"sx", GateKind::Sx},        {"sxdg", GateKind::Sxdg},
        {"tx", GateKind::Tx},        {"txdg", GateKind::Txdg},
        {"cnot", GateKind::Cnot},
    };
    return table;
}

}  // namespace

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::PrepZ: return "prep_z";
        case GateKind::PrepX: return "prep_x";
        case GateKind::MeasZ: return "meas_z";
        case GateKind::MeasX: return "meas_x";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::T: return "t";
        case GateKind::Tdg: return "tdg";
        case GateKind::Sx: return "sx";
        case GateKind::Sxdg: return "sxdg";
        case GateKind::Tx: return "tx";
        case GateKind::Txdg: return "txdg";
        case GateKind::Cnot: return "cnot";
    }
    return "?";
}

bool is_rotation(GateKind k) {
    switch (k) {
        case GateKind::S: case GateKind::Sdg:
        case GateKind::T: case GateKind::Tdg:
        case GateKind::Sx: case GateKind::Sxdg:
        case GateKind::Tx: case GateKind::Txdg:
            return true;
        default:
            return false;
    }
}

bool is_z_rotation(GateKind k) {
    return k == GateKind::S || k == GateKind::Sdg || k == GateKind::T ||
           k == GateKind::Tdg;
}

bool is_pauli(GateKind k) {
    return k == GateKind::X || k == GateKind::Y || k == GateKind::Z;
}

bool is_clifford(GateKind k) {
    return !(k == GateKind::T || k == GateKind::Tdg || k == GateKind::Tx ||
             k == GateKind::Txdg);
}

bool is_measurement(GateKind k) {
    return k == GateKind::MeasZ || k == GateKind::MeasX;
}

bool is_prep(GateKind k) {
    return k == GateKind::PrepZ || k == GateKind::PrepX;
}

bool Gate::overlaps(const Gate& other) const {
    return touches(other.q0) || (other.q1 >= 0 && touches(other.q1));
}

void LogicalCircuit::check_valid() const {
    for (size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        if (g.q0 < 0 || g.q0 >= n_logical)
            throw SemanticError("gate " + std::to_string(i) + ": operand " +
                                std::to_string(g.q0) + " out of range");
        if (g.is_cnot()) {
            if (g.q1 < 0 || g.q1 >= n_logical)
                throw SemanticError("gate " + std::to_string(i) + ": operand " +
                                    std::to_string(g.q1) + " out of range");
            if (g.q0 == g.q1)
                throw SemanticError("gate " + std::to_string(i) +
                                    ": cnot with duplicate operand");
        } else if (g.q1 >= 0) {
            throw SemanticError("gate " + std::to_string(i) +
                                ": single-qubit gate with two operands");
        }
    }
}

bool PauliFrame::identity() const {
    for (auto b : x_bits)
        if (b) return false;
    for (auto b : z_bits)
        if (b) return false;
    return true;
}

LogicalCircuit parse_circuit(const std::string& text) {
    LogicalCircuit c;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;

    auto fail = [&](const std::string& msg) {
        throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;

        if (!have_header) {
            if (tok != "qubits") fail("expected 'qubits <n>' header");
            long n = -1;
            if (!(ls >> n) || n < 0) fail("bad qubit count");
            c.n_logical = static_cast<int>(n);
            have_header = true;
            continue;
        }

        auto it = token_table().find(tok);
        if (it == token_table().end()) fail("unknown instruction '" + tok + "'");
        Gate g{it->second};
        auto read_idx = [&](int& dst) {
            long v;
            if (!(ls >> v)) fail("missing qubit index");
            if (v < 0 || v >= c.n_logical) fail("qubit index out of range");
            dst = static_cast<int>(v);
        };
        read_idx(g.q0);
        if (g.is_cnot()) {
            read_idx(g.q1);
            if (g.q0 == g.q1) fail("cnot with duplicate operand");
        }
        std::string extra;
        if (ls >> extra) fail("trailing token '" + extra + "'");
        c.gates.push_back(g);
    }
    if (!have_header) throw ParseError("missing 'qubits <n>' header");
    return c;
}

std::string serialize_circuit(const LogicalCircuit& c) {
    std::ostringstream out;
    out << "qubits " << c.n_logical << "\n";
    for (const Gate& g : c.gates) {
        out << gate_name(g.kind) << " " << g.q0;
        if (g.is_cnot()) out << " " << g.q1;
        out << "\n";
    }
    return out.str();
}

std::pair<LogicalCircuit, PauliFrame> commute_paulis(const LogicalCircuit& c,
                                                     PauliThroughT policy) {
    c.check_valid();
    LogicalCircuit out;
    out.n_logical = c.n_logical;
    out.name = c.name;
    PauliFrame frame(c.n_logical);
    std::vector<uint8_t> flips;

    auto emit = [&](Gate g, bool flip = false) {
        out.gates.push_back(g);
        flips.push_back(flip ? 1 : 0);
    };
    // Emits the pending Pauli on q as an explicit gate and clears it.
    auto flush = [&](int q) {
        uint8_t x = frame.x_bits[q], z = frame.z_bits[q];
        if (x && z)
            emit(Gate{GateKind::Y, q});
        else if (x)
            emit(Gate{GateKind::X, q});
        else if (z)
            emit(Gate{GateKind::Z, q});
        frame.x_bits[q] = frame.z_bits[q] = 0;
    };

    for (const Gate& g : c.gates) {
        int q = g.q0;
        switch (g.kind) {
            case GateKind::X:
                frame.x_bits[q] ^= 1;
                break;
            case GateKind::Z:
                frame.z_bits[q] ^= 1;
                break;
            case GateKind::Y:
                frame.x_bits[q] ^= 1;
                frame.z_bits[q] ^= 1;
                break;
            case GateKind::H:
                std::swap(frame.x_bits[q], frame.z_bits[q]);
                emit(g);
                break;
            case GateKind::S:
            case GateKind::Sdg:
                frame.z_bits[q] ^= frame.x_bits[q];
                emit(g);
                break;
            case GateKind::Sx:
            case GateKind::Sxdg:
                frame.x_bits[q] ^= frame.z_bits[q];
                emit(g);
                break;
            case GateKind::T:
            case GateKind::Tdg:
                // Z components commute with a Z-diagonal rotation; an X
                // component does not and is handled per policy.
                if (frame.x_bits[q]) {
                    if (policy == PauliThroughT::StopAtT) {
                        flush(q);
                        emit(g);
                    } else {
                        emit(g);
                        Gate corr{g.kind == GateKind::T ? GateKind::Sdg
                                                        : GateKind::S,
                                  q};
                        frame.z_bits[q] ^= frame.x_bits[q];
                        emit(corr);
                    }
                } else {
                    emit(g);
                }
                break;
            case GateKind::Tx:
            case GateKind::Txdg:
                if (frame.z_bits[q]) {
                    if (policy == PauliThroughT::StopAtT) {
                        flush(q);
                        emit(g);
                    } else {
                        emit(g);
                        Gate corr{g.kind == GateKind::Tx ? GateKind::Sxdg
                                                         : GateKind::Sx,
                                  q};
                        frame.x_bits[q] ^= frame.z_bits[q];
                        emit(corr);
                    }
                } else {
                    emit(g);
                }
                break;
            case GateKind::Cnot: {
                int t = g.q1;
                frame.x_bits[t] ^= frame.x_bits[q];
                frame.z_bits[q] ^= frame.z_bits[t];
                emit(g);
                break;
            }
            case GateKind::MeasZ:
                emit(g, frame.x_bits[q] != 0);
                frame.x_bits[q] = frame.z_bits[q] = 0;
                break;
            case GateKind::MeasX:
                emit(g, frame.z_bits[q] != 0);
                frame.x_bits[q] = frame.z_bits[q] = 0;
                break;
            case GateKind::PrepZ:
            case GateKind::PrepX:
                frame.x_bits[q] = frame.z_bits[q] = 0;
                emit(g);
                break;
        }
    }
    out.outcome_flip = std::move(flips);
    return {out, frame};
}

std::vector<int> available_ops(const LogicalCircuit& c,
                               const std::vector<uint8_t>& executed) {
    if (executed.size() != c.gates.size())
        throw SemanticError("executed mask size mismatch");
    // Consistency: an executed gate must not have an unexecuted overlapping
    // predecessor.
    for (size_t i = 0; i < c.gates.size(); ++i) {
        if (!executed[i]) continue;
        for (size_t j = 0; j < i; ++j) {
            if (!executed[j] && c.gates[i].overlaps(c.gates[j]))
                throw SemanticError("executed set is not downward-consistent");
        }
    }
    std::vector<int> avail;
    for (size_t i = 0; i < c.gates.size(); ++i) {
        if (executed[i]) continue;
        bool ok = true;
        for (size_t j = 0; j < i && ok; ++j) {
            if (!executed[j] && c.gates[i].overlaps(c.gates[j])) ok = false;
        }
        if (ok) avail.push_back(static_cast<int>(i));
    }
    return avail;
}

LogicalCircuit normalize_preps(const LogicalCircuit& c) {
    c.check_valid();
    LogicalCircuit out;
    out.n_logical = c.n_logical;
    out.name = c.name;

    enum class St { Untouched, Live, Dead };
    std::vector<St> st(c.n_logical, St::Untouched);

    auto use = [&](int q) {
        if (st[q] == St::Untouched) {
            out.gates.push_back(Gate{GateKind::PrepZ, q});
            if (!c.outcome_flip.empty()) out.outcome_flip.push_back(0);
            st[q] = St::Live;
        } else if (st[q] == St::Dead) {
            throw SemanticError("gate on qubit " + std::to_string(q) +
                                " after its measurement");
        }
    };

    for (size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        if (is_prep(g.kind)) {
            if (st[g.q0] == St::Live)
                throw SemanticError("preparation of live qubit " +
                                    std::to_string(g.q0));
            st[g.q0] = St::Live;
        } else if (is_measurement(g.kind)) {
            use(g.q0);
            st[g.q0] = St::Dead;
        } else {
            use(g.q0);
            if (g.is_cnot()) use(g.q1);
        }
        out.gates.push_back(g);
        if (!c.outcome_flip.empty()) out.outcome_flip.push_back(c.outcome_flip[i]);
    }
    return out;
}

}  // namespace edpc
