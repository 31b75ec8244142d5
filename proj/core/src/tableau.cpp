#include "edpc/tableau.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace edpc {

Tableau::Tableau(int n) : n_(n), words_((n + 63) / 64) {
    xs_.assign(static_cast<size_t>(2 * n) * words_, 0);
    zs_.assign(static_cast<size_t>(2 * n) * words_, 0);
    rs_.assign(2 * n, 0);
    for (int q = 0; q < n; ++q) {
        put(xrow(q), q, true);          // destabilizer X_q
        put(zrow(n + q), q, true);      // stabilizer Z_q
    }
}

void Tableau::h(int q) {
    for (int r = 0; r < 2 * n_; ++r) {
        bool xb = get(xrow(r), q), zb = get(zrow(r), q);
        rs_[r] ^= static_cast<uint8_t>(xb && zb);
        put(xrow(r), q, zb);
        put(zrow(r), q, xb);
    }
}

void Tableau::s(int q) {
    for (int r = 0; r < 2 * n_; ++r) {
        bool xb = get(xrow(r), q), zb = get(zrow(r), q);
        rs_[r] ^= static_cast<uint8_t>(xb && zb);
        put(zrow(r), q, zb ^ xb);
    }
}

void Tableau::sdg(int q) {
    s(q);
    z(q);
}

void Tableau::sx(int q) {
    h(q);
    s(q);
    h(q);
}

void Tableau::sxdg(int q) {
    h(q);
    sdg(q);
    h(q);
}

void Tableau::x(int q) {
    for (int r = 0; r < 2 * n_; ++r) rs_[r] ^= static_cast<uint8_t>(get(zrow(r), q));
}

void Tableau::z(int q) {
    for (int r = 0; r < 2 * n_; ++r) rs_[r] ^= static_cast<uint8_t>(get(xrow(r), q));
}

void Tableau::y(int q) {
    for (int r = 0; r < 2 * n_; ++r)
        rs_[r] ^= static_cast<uint8_t>(get(xrow(r), q) ^ get(zrow(r), q));
}

void Tableau::apply_pauli(int q, char p) {
    if (p == 'X') x(q);
    else if (p == 'Y') y(q);
    else if (p == 'Z') z(q);
    else throw std::invalid_argument("bad Pauli");
}

void Tableau::cnot(int c, int t) {
    for (int r = 0; r < 2 * n_; ++r) {
        bool xc = get(xrow(r), c), zc = get(zrow(r), c);
        bool xt = get(xrow(r), t), zt = get(zrow(r), t);
        rs_[r] ^= static_cast<uint8_t>(xc && zt && (xt == zc));
        put(xrow(r), t, xt ^ xc);
        put(zrow(r), c, zc ^ zt);
    }
}

int Tableau::rowsum_phase(const uint64_t* hx, const uint64_t* hz, int hr,
                          const uint64_t* ix, const uint64_t* iz, int ir) const {
    // Phase exponent of (row i) * (row h) accumulated mod 4.
    long total = 2L * hr + 2L * ir;
    for (int w = 0; w < words_; ++w) {
        uint64_t x1 = ix[w], z1 = iz[w], x2 = hx[w], z2 = hz[w];
        // Per-qubit contribution g(x1,z1,x2,z2) in {-1,0,1}.
        uint64_t plus = (x1 & ~z1 & x2 & z2)     // X * Y -> +1
                        | (~x1 & z1 & x2 & ~z2)  // Z * X -> +1
                        | (x1 & z1 & ~x2 & z2);  // Y * Z -> +1
        uint64_t minus = (x1 & ~z1 & ~x2 & z2)   // X * Z -> -1
                         | (~x1 & z1 & x2 & z2)  // Z * Y -> -1
                         | (x1 & z1 & x2 & ~z2); // Y * X -> -1
        total += std::popcount(plus);
        total -= std::popcount(minus);
    }
    total %= 4;
    if (total < 0) total += 4;
    return static_cast<int>(total);  // 0 or 2 for valid products
}

void Tableau::rowsum(int h, int i) {
    int ph = rowsum_phase(xrow(h), zrow(h), rs_[h], xrow(i), zrow(i), rs_[i]);
    rs_[h] = static_cast<uint8_t>(ph / 2);
    for (int w = 0; w < words_; ++w) {
        xrow(h)[w] ^= xrow(i)[w];
        zrow(h)[w] ^= zrow(i)[w];
    }
}

bool Tableau::anticommutes(int r, const std::vector<uint64_t>& px,
                           const std::vector<uint64_t>& pz) const {
    uint64_t acc = 0;
    for (int w = 0; w < words_; ++w)
        acc ^= (xrow(r)[w] & pz[w]) ^ (zrow(r)[w] & px[w]);
    return std::popcount(acc) & 1;
}

Tableau::MeasResult Tableau::measure(const std::vector<PauliTerm>& terms,
                                     const std::function<int()>& coin) {
    std::vector<uint64_t> px(words_, 0), pz(words_, 0);
    int pr = 0;  // phase of the measured operator (0 -> +1)
    for (const auto& t : terms) {
        if (t.op == 'X' || t.op == 'Y') px[t.qubit >> 6] |= 1ull << (t.qubit & 63);
        if (t.op == 'Z' || t.op == 'Y') pz[t.qubit >> 6] |= 1ull << (t.qubit & 63);
    }

    int pivot = -1;
    for (int r = n_; r < 2 * n_; ++r)
        if (anticommutes(r, px, pz)) {
            pivot = r;
            break;
        }

    if (pivot >= 0) {
        int bit = coin() & 1;
        for (int r = 0; r < 2 * n_; ++r)
            if (r != pivot && anticommutes(r, px, pz)) rowsum(r, pivot);
        // Old stabilizer becomes the destabilizer partner; the measured
        // operator (with the sampled sign) replaces the stabilizer.
        int d = pivot - n_;
        std::copy(xrow(pivot), xrow(pivot) + words_, xrow(d));
        std::copy(zrow(pivot), zrow(pivot) + words_, zrow(d));
        rs_[d] = rs_[pivot];
        std::copy(px.begin(), px.end(), xrow(pivot));
        std::copy(pz.begin(), pz.end(), zrow(pivot));
        rs_[pivot] = static_cast<uint8_t>(bit ^ pr);
        return {bit, true};
    }

    // Deterministic: accumulate the stabilizers flagged by anticommuting
    // destabilizers into a scratch row; it equals +-P.
    std::vector<uint64_t> sx(words_, 0), sz(words_, 0);
    int sr2 = 0;  // phase exponent mod 4
    for (int d = 0; d < n_; ++d) {
        if (!anticommutes(d, px, pz)) continue;
        int r = n_ + d;
        long total = sr2 + 2L * rs_[r];
        for (int w = 0; w < words_; ++w) {
            uint64_t x1 = xrow(r)[w], z1 = zrow(r)[w], x2 = sx[w], z2 = sz[w];
            uint64_t plus = (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2) |
                            (x1 & z1 & ~x2 & z2);
            uint64_t minus = (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2) |
                             (x1 & z1 & x2 & ~z2);
            total += std::popcount(plus);
            total -= std::popcount(minus);
            sx[w] ^= x1;
            sz[w] ^= z1;
        }
        total %= 4;
        if (total < 0) total += 4;
        sr2 = static_cast<int>(total);
    }
    if (sx != px || sz != pz)
        throw std::logic_error("deterministic measurement reduction failed");
    int bit = ((sr2 / 2) ^ pr) & 1;
    return {bit, false};
}

void Tableau::reset_z(int q, const std::function<int()>& coin) {
    auto m = measure({{q, 'Z'}}, coin);
    if (m.bit) x(q);
}

void Tableau::reset_x(int q, const std::function<int()>& coin) {
    auto m = measure({{q, 'X'}}, coin);
    if (m.bit) z(q);
}

bool Tableau::deterministic(const std::vector<PauliTerm>& terms) const {
    std::vector<uint64_t> px(words_, 0), pz(words_, 0);
    for (const auto& t : terms) {
        if (t.op == 'X' || t.op == 'Y') px[t.qubit >> 6] |= 1ull << (t.qubit & 63);
        if (t.op == 'Z' || t.op == 'Y') pz[t.qubit >> 6] |= 1ull << (t.qubit & 63);
    }
    for (int r = n_; r < 2 * n_; ++r)
        if (anticommutes(r, px, pz)) return false;
    return true;
}

bool Tableau::well_formed() const {
    auto anti = [&](int a, int b) {
        uint64_t acc = 0;
        for (int w = 0; w < words_; ++w)
            acc ^= (xrow(a)[w] & zrow(b)[w]) ^ (zrow(a)[w] & xrow(b)[w]);
        return (std::popcount(acc) & 1) != 0;
    };
    for (int a = n_; a < 2 * n_; ++a)
        for (int b = a + 1; b < 2 * n_; ++b)
            if (anti(a, b)) return false;
    for (int d = 0; d < n_; ++d) {
        if (!anti(d, n_ + d)) return false;
        for (int r = n_; r < 2 * n_; ++r)
            if (r != n_ + d && anti(d, r)) return false;
    }
    return true;
}

std::vector<std::vector<uint64_t>> Tableau::canonical_restriction(
    const std::vector<int>& keep) const {
    // Work on a copy of the stabilizer half.
    int rows = n_;
    std::vector<std::vector<uint64_t>> rx(rows), rz(rows);
    std::vector<uint8_t> sign(rows);
    for (int r = 0; r < rows; ++r) {
        rx[r].assign(xrow(n_ + r), xrow(n_ + r) + words_);
        rz[r].assign(zrow(n_ + r), zrow(n_ + r) + words_);
        sign[r] = rs_[n_ + r];
    }
    auto getb = [](const std::vector<uint64_t>& row, int q) {
        return (row[q >> 6] >> (q & 63)) & 1;
    };
    auto mult = [&](int h, int i) {
        long total = 2L * sign[h] + 2L * sign[i];
        for (int w = 0; w < words_; ++w) {
            uint64_t x1 = rx[i][w], z1 = rz[i][w], x2 = rx[h][w], z2 = rz[h][w];
            uint64_t plus = (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2) |
                            (x1 & z1 & ~x2 & z2);
            uint64_t minus = (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2) |
                             (x1 & z1 & x2 & ~z2);
            total += std::popcount(plus);
            total -= std::popcount(minus);
            rx[h][w] ^= x1;
            rz[h][w] ^= z1;
        }
        total %= 4;
        if (total < 0) total += 4;
        sign[h] = static_cast<uint8_t>(total / 2);
    };

    // Column order: eliminated qubits first, kept qubits afterwards.
    std::vector<int> order;
    std::vector<uint8_t> kept(n_, 0);
    for (int q : keep) kept[q] = 1;
    for (int q = 0; q < n_; ++q)
        if (!kept[q]) order.push_back(q);
    int junk_cols = static_cast<int>(order.size());
    order.insert(order.end(), keep.begin(), keep.end());

    int pivot_row = 0;
    std::vector<int> pivots;  // rows pivoted on eliminated columns
    int col_rank_junk = 0;
    for (size_t c = 0; c < order.size(); ++c) {
        int q = order[c];
        for (int pass = 0; pass < 2; ++pass) {  // X bits first, then Z bits
            auto& bits = pass == 0 ? rx : rz;
            int found = -1;
            for (int r = pivot_row; r < rows; ++r)
                if (getb(bits[r], q)) {
                    found = r;
                    break;
                }
            if (found < 0) continue;
            std::swap(rx[found], rx[pivot_row]);
            std::swap(rz[found], rz[pivot_row]);
            std::swap(sign[found], sign[pivot_row]);
            for (int r = 0; r < rows; ++r)
                if (r != pivot_row && getb(bits[r], q)) mult(r, pivot_row);
            if (static_cast<int>(c) < junk_cols) ++col_rank_junk;
            ++pivot_row;
        }
    }

    // Rows past the junk pivots must have no support on eliminated qubits;
    // otherwise the kept subsystem is entangled with the rest.
    std::vector<std::vector<uint64_t>> out;
    int kw = (static_cast<int>(keep.size()) + 63) / 64;
    for (int r = col_rank_junk; r < rows; ++r) {
        for (int q = 0; q < n_; ++q)
            if (!kept[q] && (getb(rx[r], q) || getb(rz[r], q))) return {};
        std::vector<uint64_t> packed(2 * kw + 1, 0);
        for (size_t k = 0; k < keep.size(); ++k) {
            if (getb(rx[r], keep[k])) packed[k >> 6] |= 1ull << (k & 63);
            if (getb(rz[r], keep[k])) packed[kw + (k >> 6)] |= 1ull << (k & 63);
        }
        packed[2 * kw] = sign[r];
        out.push_back(std::move(packed));
    }
    if (out.size() != keep.size()) return {};  // entangled across the cut
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace edpc
