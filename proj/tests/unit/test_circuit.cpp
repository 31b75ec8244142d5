#include <doctest.h>

#include <random>

#include "edpc/circuit.hpp"
#include "edpc/tableau.hpp"

using namespace edpc;

TEST_CASE("parse basic circuits") {
    LogicalCircuit c = parse_circuit("qubits 2\ncnot 0 1\n");
    CHECK(c.n_logical == 2);
    REQUIRE(c.gates.size() == 1);
    CHECK(c.gates[0].kind == GateKind::Cnot);
    CHECK(c.gates[0].q0 == 0);
    CHECK(c.gates[0].q1 == 1);

    LogicalCircuit c2 = parse_circuit("qubits 1\nh 0\nt 0\n");
    REQUIRE(c2.gates.size() == 2);
    CHECK(c2.gates[0].kind == GateKind::H);
    CHECK(c2.gates[1].kind == GateKind::T);

    LogicalCircuit c3 = parse_circuit("# comment\nqubits 3\n\nx 2 # trailing\n");
    CHECK(c3.gates.size() == 1);
    CHECK(c3.gates[0].q0 == 2);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_circuit("qubits 2\ncnot 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("qubits 2\ncnot 0 5\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("qubits 1\nbogus 0\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("h 0\n"), ParseError);
    try {
        parse_circuit("qubits 2\nh 0\ncnot 1 1\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("serialize then parse is the identity on gate lists") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        LogicalCircuit c;
        c.n_logical = 2 + static_cast<int>(rng() % 6);
        int len = static_cast<int>(rng() % 30);
        for (int k = 0; k < len; ++k) {
            int kind = static_cast<int>(rng() % 17);
            Gate g{static_cast<GateKind>(kind),
                   static_cast<int>(rng() % c.n_logical)};
            if (g.kind == GateKind::Cnot) {
                g.q1 = static_cast<int>(rng() % c.n_logical);
                if (g.q1 == g.q0) g.q1 = (g.q1 + 1) % c.n_logical;
            }
            c.gates.push_back(g);
        }
        LogicalCircuit back = parse_circuit(serialize_circuit(c));
        REQUIRE(back.gates.size() == c.gates.size());
        for (size_t k = 0; k < c.gates.size(); ++k) {
            CHECK(back.gates[k].kind == c.gates[k].kind);
            CHECK(back.gates[k].q0 == c.gates[k].q0);
            CHECK(back.gates[k].q1 == c.gates[k].q1);
        }
    }
}

TEST_CASE("pauli commutation basics") {
    // X before a CNOT control spreads to the target.
    LogicalCircuit c;
    c.n_logical = 2;
    c.gates = {Gate{GateKind::X, 0}, Gate{GateKind::Cnot, 0, 1}};
    auto [out, frame] = commute_paulis(c);
    REQUIRE(out.gates.size() == 1);
    CHECK(out.gates[0].kind == GateKind::Cnot);
    CHECK(frame.x_bits[0] == 1);
    CHECK(frame.x_bits[1] == 1);
    CHECK(frame.z_bits[0] == 0);

    // Z commutes straight through a Z measurement: no flip.
    LogicalCircuit c2;
    c2.n_logical = 1;
    c2.gates = {Gate{GateKind::Z, 0}, Gate{GateKind::MeasZ, 0}};
    auto [out2, frame2] = commute_paulis(c2);
    REQUIRE(out2.gates.size() == 1);
    CHECK(out2.outcome_flip[0] == 0);
    CHECK(frame2.identity());

    // X through H becomes Z, which a Z measurement absorbs silently.
    LogicalCircuit c3;
    c3.n_logical = 1;
    c3.gates = {Gate{GateKind::X, 0}, Gate{GateKind::H, 0},
                Gate{GateKind::MeasZ, 0}};
    auto [out3, frame3] = commute_paulis(c3);
    REQUIRE(out3.gates.size() == 2);
    CHECK(out3.gates[0].kind == GateKind::H);
    CHECK(out3.outcome_flip[1] == 0);

    // X before a Z measurement flips the recorded outcome.
    LogicalCircuit c4;
    c4.n_logical = 1;
    c4.gates = {Gate{GateKind::X, 0}, Gate{GateKind::MeasZ, 0}};
    auto [out4, frame4] = commute_paulis(c4);
    CHECK(out4.outcome_flip[0] == 1);
}

TEST_CASE("paulis stop in front of T by default and propagate on request") {
    LogicalCircuit c;
    c.n_logical = 1;
    c.gates = {Gate{GateKind::X, 0}, Gate{GateKind::T, 0}};
    auto [stopped, f1] = commute_paulis(c);
    REQUIRE(stopped.gates.size() == 2);
    CHECK(stopped.gates[0].kind == GateKind::X);
    CHECK(stopped.gates[1].kind == GateKind::T);
    CHECK(f1.identity());

    auto [prop, f2] = commute_paulis(c, PauliThroughT::Propagate);
    REQUIRE(prop.gates.size() == 2);
    CHECK(prop.gates[0].kind == GateKind::T);
    CHECK(prop.gates[1].kind == GateKind::Sdg);
    CHECK(f2.x_bits[0] == 1);

    // A pure Z frame commutes through T without rewriting.
    LogicalCircuit c2;
    c2.n_logical = 1;
    c2.gates = {Gate{GateKind::Z, 0}, Gate{GateKind::T, 0}};
    auto [out2, g2] = commute_paulis(c2);
    REQUIRE(out2.gates.size() == 1);
    CHECK(out2.gates[0].kind == GateKind::T);
    CHECK(g2.z_bits[0] == 1);
}

namespace {

/// Direct tableau run of a Clifford circuit. When `force` is given, each
/// measurement is steered to report the listed outcome (accounting for the
/// circuit's flip flags); a nullptr draws fresh randomness. Reported outcomes
/// land in `outcomes`; returns false if a deterministic outcome contradicts
/// the forced value.
bool simulate(const LogicalCircuit& c, const PauliFrame* frame,
              std::mt19937_64& rng, std::vector<int>* outcomes,
              const std::vector<int>* force, Tableau& t) {
    t = Tableau(c.n_logical);
    auto coin = [&] { return static_cast<int>(rng() & 1); };
    size_t meas_idx = 0;
    for (size_t gi = 0; gi < c.gates.size(); ++gi) {
        const Gate& g = c.gates[gi];
        switch (g.kind) {
            case GateKind::PrepZ: t.reset_z(g.q0, coin); break;
            case GateKind::PrepX: t.reset_x(g.q0, coin); break;
            case GateKind::H: t.h(g.q0); break;
            case GateKind::S: t.s(g.q0); break;
            case GateKind::Sdg: t.sdg(g.q0); break;
            case GateKind::Sx: t.sx(g.q0); break;
            case GateKind::Sxdg: t.sxdg(g.q0); break;
            case GateKind::X: t.x(g.q0); break;
            case GateKind::Y: t.y(g.q0); break;
            case GateKind::Z: t.z(g.q0); break;
            case GateKind::Cnot: t.cnot(g.q0, g.q1); break;
            case GateKind::MeasZ:
            case GateKind::MeasX: {
                char basis = g.kind == GateKind::MeasZ ? 'Z' : 'X';
                int flip = !c.outcome_flip.empty() && c.outcome_flip[gi];
                int raw;
                if (force) {
                    int want_reported = (*force)[meas_idx];
                    int want_raw = want_reported ^ flip;
                    auto m = t.measure({{g.q0, basis}},
                                       [&] { return want_raw; });
                    raw = m.bit;
                    if (raw != want_raw) return false;
                } else {
                    raw = t.measure({{g.q0, basis}}, coin).bit;
                }
                if (outcomes) outcomes->push_back(raw ^ flip);
                ++meas_idx;
                break;
            }
            default: REQUIRE(false);
        }
    }
    if (frame) {
        for (int q = 0; q < c.n_logical; ++q) {
            if (frame->x_bits[q]) t.x(q);
            if (frame->z_bits[q]) t.z(q);
        }
    }
    return true;
}

LogicalCircuit random_clifford_with_paulis(int n, int len, uint64_t seed) {
    std::mt19937_64 rng(seed);
    LogicalCircuit c;
    c.n_logical = n;
    for (int q = 0; q < n; ++q)
        c.gates.push_back(Gate{rng() % 2 ? GateKind::PrepX : GateKind::PrepZ, q});
    for (int k = 0; k < len; ++k) {
        int pick = static_cast<int>(rng() % 9);
        int q = static_cast<int>(rng() % n);
        switch (pick) {
            case 0: c.gates.push_back(Gate{GateKind::X, q}); break;
            case 1: c.gates.push_back(Gate{GateKind::Y, q}); break;
            case 2: c.gates.push_back(Gate{GateKind::Z, q}); break;
            case 3: c.gates.push_back(Gate{GateKind::H, q}); break;
            case 4: c.gates.push_back(Gate{GateKind::S, q}); break;
            case 5: c.gates.push_back(Gate{GateKind::Sx, q}); break;
            case 6: {
                int t = static_cast<int>(rng() % n);
                if (t == q) t = (t + 1) % n;
                c.gates.push_back(Gate{GateKind::Cnot, q, t});
                break;
            }
            case 7:
                c.gates.push_back(Gate{GateKind::MeasZ, q});
                c.gates.push_back(Gate{GateKind::PrepZ, q});
                break;
            case 8:
                c.gates.push_back(Gate{GateKind::MeasX, q});
                c.gates.push_back(Gate{GateKind::PrepX, q});
                break;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("pauli commutation preserves circuit semantics exactly") {
    // Sample the original circuit, then steer the normalized circuit (plus
    // its end frame and flip flags) to the same reported outcomes; the
    // conditioned final states must agree exactly.
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        int n = 2 + static_cast<int>(seed % 5);
        LogicalCircuit c = random_clifford_with_paulis(n, 25, seed);
        auto [norm, frame] = commute_paulis(c);
        for (int sample = 0; sample < 8; ++sample) {
            std::mt19937_64 r1(1000 * seed + sample), r2(77);
            std::vector<int> out1, out2;
            Tableau t1(1), t2(1);
            CHECK(simulate(c, nullptr, r1, &out1, nullptr, t1));
            bool consistent = simulate(norm, &frame, r2, &out2, &out1, t2);
            CHECK(consistent);
            CHECK(out1 == out2);
            std::vector<int> all(n);
            for (int q = 0; q < n; ++q) all[q] = q;
            CHECK(t1.canonical_restriction(all) ==
                  t2.canonical_restriction(all));
        }
    }
}

TEST_CASE("available ops follow the overlap rule") {
    LogicalCircuit c;
    c.n_logical = 3;
    c.gates = {Gate{GateKind::Cnot, 0, 1}, Gate{GateKind::H, 2},
               Gate{GateKind::Cnot, 1, 2}};
    std::vector<uint8_t> executed(3, 0);
    CHECK(available_ops(c, executed) == std::vector<int>{0, 1});
    executed = {1, 1, 0};
    CHECK(available_ops(c, executed) == std::vector<int>{2});

    LogicalCircuit c2;
    c2.n_logical = 1;
    c2.gates = {Gate{GateKind::T, 0}, Gate{GateKind::T, 0}};
    CHECK(available_ops(c2, {0, 0}) == std::vector<int>{0});

    // Inconsistent executed set: a gate ran before its predecessor.
    CHECK_THROWS_AS(available_ops(c2, {0, 1}), SemanticError);
}

TEST_CASE("available ops are pairwise support-disjoint") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        LogicalCircuit c = random_clifford_with_paulis(5, 30, rng());
        std::vector<uint8_t> executed(c.gates.size(), 0);
        // executed prefix chosen respecting order
        for (size_t k = 0; k < c.gates.size() && rng() % 3; ++k) executed[k] = 1;
        auto avail = available_ops(c, executed);
        for (size_t a = 0; a < avail.size(); ++a)
            for (size_t b = a + 1; b < avail.size(); ++b)
                CHECK(!c.gates[avail[a]].overlaps(c.gates[avail[b]]));
    }
}

TEST_CASE("normalize_preps inserts missing preparations and rejects resets") {
    LogicalCircuit c;
    c.n_logical = 2;
    c.gates = {Gate{GateKind::H, 0}, Gate{GateKind::Cnot, 0, 1}};
    LogicalCircuit n = normalize_preps(c);
    CHECK(n.gates.size() == 4);
    CHECK(n.gates[0].kind == GateKind::PrepZ);

    LogicalCircuit bad;
    bad.n_logical = 1;
    bad.gates = {Gate{GateKind::H, 0}, Gate{GateKind::PrepZ, 0}};
    CHECK_THROWS_AS(normalize_preps(bad), SemanticError);

    LogicalCircuit remeasure;
    remeasure.n_logical = 1;
    remeasure.gates = {Gate{GateKind::MeasZ, 0}, Gate{GateKind::H, 0}};
    CHECK_THROWS_AS(normalize_preps(remeasure), SemanticError);
}
