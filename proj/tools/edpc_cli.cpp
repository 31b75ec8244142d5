// Command-line front end: compile circuits to surface-code schedules, verify
// schedules against circuits, and run the benchmark sweeps.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "edpc/bench.hpp"
#include "edpc/compile.hpp"
#include "edpc/grid.hpp"
#include "edpc/verify.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-code compiler: edge-disjoint path scheduling and a "
                 "swap baseline"};
    app.require_subcommand(1);

    // ---- compile ----
    std::string circuit_file, algo = "edpc", dump_schedule, dump_layout,
                dump_paths, swap_select = "min";
    int grid_side = 0, grid_rows = 0, grid_cols = 0;
    double timeout_s = 600.0;
    auto* cmd_compile =
        app.add_subcommand("compile", "compile a circuit to surface operations");
    cmd_compile->add_option("--circuit", circuit_file, "circuit file")
        ->required();
    cmd_compile->add_option("--algo", algo, "edpc | swap")
        ->check(CLI::IsMember({"edpc", "swap"}));
    cmd_compile->add_option("--grid", grid_side, "grid side (odd; default auto)");
    cmd_compile->add_option("--grid-rows", grid_rows, "swap layout rows");
    cmd_compile->add_option("--grid-cols", grid_cols, "swap layout cols");
    cmd_compile->add_option("--swap-select", swap_select, "gate choice: min | max")
        ->check(CLI::IsMember({"min", "max"}));
    cmd_compile->add_option("--timeout-s", timeout_s, "compile deadline");
    cmd_compile->add_option("--dump-schedule", dump_schedule,
                            "write the schedule JSON here");
    cmd_compile->add_option("--dump-layout", dump_layout,
                            "write the grid layout JSON here");
    cmd_compile->add_option("--dump-paths", dump_paths,
                            "write the routed path sets JSON here");

    // ---- verify ----
    std::string v_circuit, v_schedule;
    int samples = 100;
    uint64_t v_seed = 1;
    auto* cmd_verify = app.add_subcommand(
        "verify", "check a schedule against its source circuit");
    cmd_verify->add_option("--circuit", v_circuit, "circuit file")->required();
    cmd_verify->add_option("--schedule", v_schedule, "schedule JSON")
        ->required();
    cmd_verify->add_option("--samples", samples, "outcome samples");
    cmd_verify->add_option("--seed", v_seed, "randomness seed");

    // ---- bench ----
    std::string gen = "random", out_csv = "results.csv";
    std::vector<int> sizes;
    double density = 1.0;
    int layers = 20, seeds = 10, verify_samples = 2, threads = 0;
    double b_timeout = 600.0;
    std::string b_swap_select = "min";
    std::vector<std::string> algos = {"edpc", "swap"};
    auto* cmd_bench =
        app.add_subcommand("bench", "sweep benchmark circuits and emit CSV");
    cmd_bench->add_option("--gen", gen, "random | half_ckx")
        ->check(CLI::IsMember({"random", "half_ckx"}));
    cmd_bench->add_option("--sizes", sizes, "qubit counts (or k values)")
        ->required();
    cmd_bench->add_option("--density", density,
                          "fraction of qubits in CNOTs per layer");
    cmd_bench->add_option("--layers", layers, "CNOT layers per circuit");
    cmd_bench->add_option("--seeds", seeds, "instances per configuration");
    cmd_bench->add_option("--algo", algos, "algorithms to run");
    cmd_bench->add_option("--out", out_csv, "row CSV path");
    cmd_bench->add_option("--timeout-s", b_timeout, "per-instance deadline");
    cmd_bench->add_option("--verify-samples", verify_samples,
                          "equivalence samples per instance (0 = skip)");
    cmd_bench->add_option("--swap-select", b_swap_select, "min | max")
        ->check(CLI::IsMember({"min", "max"}));
    cmd_bench->add_option("--threads", threads, "worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_compile) {
            edpc::LogicalCircuit c = edpc::parse_circuit(slurp(circuit_file));
            if (grid_side > 0 && grid_side % 2 == 0)
                std::cerr << "warning: even grid side " << grid_side
                          << "; data patches on the last row/column lose part "
                             "of their ancilla border\n";
            edpc::CompileOptions opt;
            opt.grid_side = grid_side;
            opt.swap_rows = grid_rows;
            opt.swap_cols = grid_cols;
            opt.swap_select_max = swap_select == "max";
            opt.collect_paths = !dump_paths.empty();
            if (timeout_s > 0)
                opt.deadline =
                    std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<
                        std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_s));
            edpc::CompileResult res = algo == "edpc"
                                          ? edpc::compile_edpc(c, opt)
                                          : edpc::compile_swap(c, opt);
            auto violations = res.schedule.validate();
            if (!violations.empty()) {
                for (const auto& v : violations)
                    std::cerr << "violation: " << v << "\n";
                return 1;
            }
            std::printf(
                "algorithm=%s qubits=%d grid=%d depth=%ld space=%ld "
                "spacetime=%ld\n",
                algo.c_str(), c.n_logical, res.schedule.layout.L,
                res.cost.depth, res.cost.space, res.cost.spacetime);
            if (!dump_schedule.empty())
                spill(dump_schedule, edpc::schedule_to_json(res.schedule));
            if (!dump_layout.empty() && algo == "edpc") {
                edpc::GridGraph g = edpc::build_grid(res.schedule.layout.L, true);
                edpc::Embedding e = edpc::embed_qubits(res.normalized, g);
                spill(dump_layout, edpc::layout_to_json(g, e));
            }
            if (!dump_paths.empty()) spill(dump_paths, res.paths_json);
            return 0;
        }

        if (*cmd_verify) {
            edpc::LogicalCircuit c = edpc::parse_circuit(slurp(v_circuit));
            edpc::SurfaceSchedule s =
                edpc::schedule_from_json(slurp(v_schedule));
            auto violations = s.validate();
            if (!violations.empty()) {
                for (const auto& v : violations)
                    std::cerr << "violation: " << v << "\n";
                return 1;
            }
            edpc::LogicalCircuit norm = edpc::prepare_circuit(c);
            bool clifford = true;
            for (const auto& g : norm.gates)
                if (!edpc::is_clifford(g.kind)) clifford = false;
            if (!clifford) {
                auto bad = edpc::structural_check(norm, s);
                for (const auto& b : bad) std::cerr << "structural: " << b << "\n";
                std::printf("non-Clifford circuit: structural check %s\n",
                            bad.empty() ? "passed" : "failed");
                return bad.empty() ? 0 : 1;
            }
            auto rep = edpc::check_equivalence(norm, s, samples, v_seed);
            std::printf("%s (%d samples)%s%s\n",
                        rep.equivalent ? "equivalent" : "NOT equivalent",
                        rep.samples_run, rep.message.empty() ? "" : ": ",
                        rep.message.c_str());
            return rep.equivalent ? 0 : 1;
        }

        if (*cmd_bench) {
            edpc::bench::BenchSpec spec;
            spec.generator = gen == "half_ckx"
                                 ? edpc::bench::BenchSpec::Generator::HalfCkx
                                 : edpc::bench::BenchSpec::Generator::
                                       RandomParallelCnot;
            spec.sizes = sizes;
            spec.density = density;
            spec.layers = layers;
            spec.seeds = seeds;
            spec.algorithms = algos;
            spec.timeout_s = b_timeout;
            spec.verify_samples = verify_samples;
            spec.swap_select_max = b_swap_select == "max";
            spec.threads = threads;
            edpc::bench::BenchReport rep = edpc::bench::run_benchmark(spec);
            spill(out_csv, edpc::bench::rows_to_csv(rep.rows));
            std::string base = out_csv;
            if (auto dot = base.rfind(".csv"); dot != std::string::npos)
                base.erase(dot);
            spill(base + ".agg.csv",
                  edpc::bench::aggregates_to_csv(rep.aggregates));
            spill(base + ".agg.json",
                  edpc::bench::aggregates_to_json(rep.aggregates));
            int bad = 0;
            for (const auto& row : rep.rows)
                if (row.status != "ok") ++bad;
            std::printf("%zu rows (%d not ok) -> %s\n", rep.rows.size(), bad,
                        out_csv.c_str());
            return bad ? 2 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
