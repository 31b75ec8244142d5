#include <doctest.h>

#include <set>

#include "dense_sim.hpp"
#include "edpc/bench.hpp"
#include "edpc/verify.hpp"

using namespace edpc;

TEST_CASE("random parallel cnot generator counts and determinism") {
    LogicalCircuit c = bench::gen_random_parallel_cnots(4, 4, 1, 7);
    REQUIRE(c.gates.size() == 2);
    std::set<int> used;
    for (const Gate& g : c.gates) {
        CHECK(g.kind == GateKind::Cnot);
        CHECK(used.insert(g.q0).second);
        CHECK(used.insert(g.q1).second);
    }
    CHECK(used.size() == 4);

    LogicalCircuit a = bench::gen_random_parallel_cnots(16, 8, 20, 3);
    LogicalCircuit b = bench::gen_random_parallel_cnots(16, 8, 20, 3);
    CHECK(serialize_circuit(a) == serialize_circuit(b));
    CHECK(a.gates.size() == 20 * 4);

    CHECK_THROWS_AS(bench::gen_random_parallel_cnots(4, 3, 1, 1),
                    SemanticError);
    CHECK_THROWS_AS(bench::gen_random_parallel_cnots(4, 6, 1, 1),
                    SemanticError);
}

TEST_CASE("half multi-controlled-x structure") {
    LogicalCircuit k2 = bench::gen_half_ckx(2);
    CHECK(k2.n_logical == 3);
    int toffoli_count = 0;
    for (const Gate& g : k2.gates)
        if (g.kind == GateKind::PrepZ) ++toffoli_count;
    CHECK(toffoli_count == 1);
    int t_like = 0;
    for (const Gate& g : k2.gates)
        if (g.kind == GateKind::T || g.kind == GateKind::Tdg) ++t_like;
    CHECK(t_like == 7);

    LogicalCircuit k8 = bench::gen_half_ckx(8);
    CHECK(k8.n_logical == 15);
    int ancillas = 0;
    for (const Gate& g : k8.gates)
        if (g.kind == GateKind::PrepZ) ++ancillas;
    CHECK(ancillas == 7);

    CHECK_THROWS_AS(bench::gen_half_ckx(3), SemanticError);
    CHECK_THROWS_AS(bench::gen_half_ckx(1), SemanticError);
}

TEST_CASE("toffoli decomposition equals the doubly-controlled not") {
    // dense check on the 3-qubit decomposition used by the generator
    LogicalCircuit c = bench::gen_half_ckx(2);
    // skip the prep, build a schedule-free unitary product instead
    using test::Mat;
    Mat u = test::identity_mat(8);
    auto embed1 = [&](const Mat& g, int q) {
        Mat full = q == 0   ? test::kron(g, test::identity_mat(4))
                   : q == 1 ? test::kron(test::kron(test::identity_mat(2), g),
                                         test::identity_mat(2))
                            : test::kron(test::identity_mat(4), g);
        u = test::matmul(full, u);
    };
    auto embed_cnot = [&](int a, int b) {
        Mat full = test::identity_mat(8);
        for (int row = 0; row < 8; ++row) {
            for (auto& v : full[row]) v = 0;
            int col = row;
            if ((row >> (2 - a)) & 1) col = row ^ (1 << (2 - b));
            full[row][col] = 1;
        }
        u = test::matmul(full, u);
    };
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::PrepZ: break;
            case GateKind::H: embed1(test::hadamard_mat(), g.q0); break;
            case GateKind::T: embed1(test::rotation_mat(GateKind::T), g.q0); break;
            case GateKind::Tdg:
                embed1(test::rotation_mat(GateKind::Tdg), g.q0);
                break;
            case GateKind::Cnot: embed_cnot(g.q0, g.q1); break;
            default: REQUIRE(false);
        }
    }
    // compare to the Toffoli on (0,1 -> 2) up to global phase
    Mat ccx = test::identity_mat(8);
    std::swap(ccx[6], ccx[7]);
    test::cx ratio = 0;
    double worst = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            if (std::abs(ccx[i][j]) > 0.5 && std::abs(ratio) < 0.5)
                ratio = u[i][j] / ccx[i][j];
        }
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            worst = std::max(worst, std::abs(u[i][j] - ratio * ccx[i][j]));
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-9);
    CHECK(worst < 1e-9);
}

TEST_CASE("benchmark runner emits rows and aggregates deterministically") {
    bench::BenchSpec spec;
    spec.sizes = {4};
    spec.density = 1.0;
    spec.layers = 2;
    spec.seeds = 3;
    spec.verify_samples = 2;
    spec.threads = 2;
    bench::BenchReport rep = bench::run_benchmark(spec);
    CHECK(rep.rows.size() == 6);  // 3 seeds x 2 algorithms
    for (const auto& row : rep.rows) CHECK(row.status == "ok");
    CHECK(rep.aggregates.size() == 2);
    for (const auto& agg : rep.aggregates) CHECK(agg.instances == 3);

    bench::BenchReport rep2 = bench::run_benchmark(spec);
    std::string csv1 = bench::rows_to_csv(rep.rows);
    std::string csv2 = bench::rows_to_csv(rep2.rows);
    // identical modulo the wall-clock column
    auto strip_wall = [](std::string text) {
        std::string out;
        size_t pos = 0;
        while (pos < text.size()) {
            size_t eol = text.find('\n', pos);
            std::string line = text.substr(pos, eol - pos);
            // wall_ms is the 8th comma-separated field
            int commas = 0;
            size_t a = 0, b = 0;
            for (size_t k = 0; k < line.size(); ++k) {
                if (line[k] == ',') {
                    ++commas;
                    if (commas == 7) a = k + 1;
                    if (commas == 8) b = k;
                }
            }
            if (b > a) line.erase(a, b - a);
            out += line + "\n";
            pos = eol + 1;
        }
        return out;
    };
    CHECK(strip_wall(csv1) == strip_wall(csv2));
    CHECK(csv1.find("circuit_id,algorithm,n,L,depth,space,spacetime,wall_ms,"
                    "seed,status") == 0);
    CHECK(!bench::aggregates_to_json(rep.aggregates).empty());
}

TEST_CASE("density rounds to an even cnot count") {
    bench::BenchSpec spec;
    spec.sizes = {16};
    spec.density = 0.1;  // 1.6 qubits -> 2
    spec.layers = 1;
    spec.seeds = 1;
    spec.verify_samples = 0;
    spec.algorithms = {"edpc"};
    bench::BenchReport rep = bench::run_benchmark(spec);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].circuit_id.find("_c2_") != std::string::npos);
}

TEST_CASE("half ckx benchmark rows cover both algorithms") {
    bench::BenchSpec spec;
    spec.generator = bench::BenchSpec::Generator::HalfCkx;
    spec.sizes = {2};
    spec.verify_samples = 1;  // structural only; circuits contain T
    bench::BenchReport rep = bench::run_benchmark(spec);
    CHECK(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        CHECK(row.status == "ok");
        CHECK(row.depth > 0);
    }
}
