#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace edpc {

/// One Pauli operator over n qubits, +1 sign implied unless stated.
struct PauliTerm {
    int qubit;
    char op;  // 'X', 'Y', 'Z'
};

/// Stabilizer/destabilizer tableau with generalized Pauli measurement.
class Tableau {
  public:
    explicit Tableau(int n);

    int qubits() const { return n_; }

    void h(int q);
    void s(int q);
    void sdg(int q);
    void sx(int q);
    void sxdg(int q);
    void x(int q);
    void y(int q);
    void z(int q);
    void cnot(int c, int t);
    void apply_pauli(int q, char p);

    struct MeasResult {
        int bit;
        bool random;
    };

    /// Measures the product of the given terms. `coin` supplies the outcome
    /// bit for nondeterministic measurements.
    MeasResult measure(const std::vector<PauliTerm>& terms,
                       const std::function<int()>& coin);

    /// Resets qubit q to |0> or |+>. Intended for disentangled qubits.
    void reset_z(int q, const std::function<int()>& coin);
    void reset_x(int q, const std::function<int()>& coin);

    /// True when measuring the given Pauli would give a deterministic result.
    bool deterministic(const std::vector<PauliTerm>& terms) const;

    /// Generator consistency check: stabilizers commute pairwise and each
    /// destabilizer anticommutes exactly with its partner.
    bool well_formed() const;

    /// Canonical reduced stabilizer matrix restricted to `keep` (in order),
    /// after eliminating all other qubits. Each row is the packed X|Z bits
    /// over the kept qubits; the final byte of each row is the sign bit.
    /// Fails (returns empty) if the state is entangled across the cut.
    std::vector<std::vector<uint64_t>> canonical_restriction(
        const std::vector<int>& keep) const;

  private:
    int n_;
    int words_;
    // Rows 0..n-1 destabilizers, n..2n-1 stabilizers.
    std::vector<uint64_t> xs_, zs_;
    std::vector<uint8_t> rs_;

    uint64_t* xrow(int r) { return &xs_[static_cast<size_t>(r) * words_]; }
    uint64_t* zrow(int r) { return &zs_[static_cast<size_t>(r) * words_]; }
    const uint64_t* xrow(int r) const {
        return &xs_[static_cast<size_t>(r) * words_];
    }
    const uint64_t* zrow(int r) const {
        return &zs_[static_cast<size_t>(r) * words_];
    }

    bool get(const uint64_t* row, int q) const {
        return (row[q >> 6] >> (q & 63)) & 1;
    }
    static void put(uint64_t* row, int q, bool v) {
        if (v) row[q >> 6] |= 1ull << (q & 63);
        else row[q >> 6] &= ~(1ull << (q & 63));
    }

    bool anticommutes(int r, const std::vector<uint64_t>& px,
                      const std::vector<uint64_t>& pz) const;
    void rowsum(int h, int i);  // row h *= row i
    int rowsum_phase(const uint64_t* hx, const uint64_t* hz, int hr,
                     const uint64_t* ix, const uint64_t* iz, int ir) const;
};

}  // namespace edpc
