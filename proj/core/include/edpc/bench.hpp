#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edpc/circuit.hpp"
#include "edpc/compile.hpp"

namespace edpc::bench {

/// Disjoint random CNOT layers: each layer pairs n_cnot distinct qubits.
LogicalCircuit gen_random_parallel_cnots(int n, int n_cnot, int layers,
                                         uint64_t seed);

/// First half of a k-controlled X: a binary tree of Toffolis onto fresh
/// ancillas, each expanded into the standard seven-T decomposition.
LogicalCircuit gen_half_ckx(int k);

/// Random Clifford circuit from CNOT/H/S/Sx plus preparations and
/// measurements; used to exercise end-to-end equivalence checking.
LogicalCircuit gen_random_clifford(int n, int depth, uint64_t seed);

struct BenchSpec {
    enum class Generator { RandomParallelCnot, HalfCkx } generator =
        Generator::RandomParallelCnot;
    std::vector<int> sizes;        // n values, or k values for HalfCkx
    double density = 1.0;          // n_cnot = density * n, rounded even
    int layers = 20;
    int seeds = 10;
    uint64_t seed_base = 1;
    std::vector<std::string> algorithms = {"edpc", "swap"};
    double timeout_s = 600.0;
    int verify_samples = 2;  // Clifford circuits only; 0 disables
    bool swap_select_max = false;
    int threads = 0;  // 0 = hardware concurrency
};

struct BenchRow {
    std::string circuit_id;
    std::string algorithm;
    int n = 0;
    int L = 0;
    long depth = 0;
    long space = 0;
    long spacetime = 0;
    long wall_ms = 0;
    uint64_t seed = 0;
    std::string status = "ok";  // ok | timeout | invalid | mismatch
};

struct BenchAggregate {
    std::string config_id;
    std::string algorithm;
    int n = 0;
    int instances = 0;
    double mean_spacetime = 0.0;
    double sem_spacetime = 0.0;  // standard error of the mean
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchAggregate> aggregates;
};

BenchReport run_benchmark(const BenchSpec& spec);

std::string rows_to_csv(const std::vector<BenchRow>& rows);
std::string aggregates_to_csv(const std::vector<BenchAggregate>& aggs);
std::string aggregates_to_json(const std::vector<BenchAggregate>& aggs);

}  // namespace edpc::bench
