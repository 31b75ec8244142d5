#include "edpc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "edpc/verify.hpp"
#include "json.hpp"

namespace edpc::bench {

LogicalCircuit gen_random_parallel_cnots(int n, int n_cnot, int layers,
                                         uint64_t seed) {
    if (n_cnot < 0 || n_cnot > n || n_cnot % 2 != 0)
        throw SemanticError("n_cnot must be even and at most n");
    LogicalCircuit c;
    c.n_logical = n;
    c.name = "random_parallel_cnots";
    std::mt19937_64 rng(seed);
    std::vector<int> qubits(n);
    std::iota(qubits.begin(), qubits.end(), 0);
    for (int layer = 0; layer < layers; ++layer) {
        // Partial Fisher-Yates: the first n_cnot entries are the sample.
        for (int k = 0; k < n_cnot; ++k) {
            int j = k + static_cast<int>(rng() % (n - k));
            std::swap(qubits[k], qubits[j]);
        }
        for (int k = 0; k + 1 < n_cnot; k += 2)
            c.gates.push_back(Gate{GateKind::Cnot, qubits[k], qubits[k + 1]});
    }
    return c;
}

namespace {

void append_toffoli(LogicalCircuit& c, int a, int b, int t) {
    auto g1 = [&](GateKind k, int q) { c.gates.push_back(Gate{k, q}); };
    auto cx = [&](int x, int y) { c.gates.push_back(Gate{GateKind::Cnot, x, y}); };
    g1(GateKind::H, t);
    cx(b, t);
    g1(GateKind::Tdg, t);
    cx(a, t);
    g1(GateKind::T, t);
    cx(b, t);
    g1(GateKind::Tdg, t);
    cx(a, t);
    g1(GateKind::T, b);
    g1(GateKind::T, t);
    g1(GateKind::H, t);
    cx(a, b);
    g1(GateKind::T, a);
    g1(GateKind::Tdg, b);
    cx(a, b);
}

}  // namespace

LogicalCircuit gen_half_ckx(int k) {
    if (k < 2 || (k & (k - 1)) != 0)
        throw SemanticError("k must be a power of two, at least 2");
    LogicalCircuit c;
    c.n_logical = 2 * k - 1;
    c.name = "half_ckx";
    int next_anc = k;
    std::vector<int> level(k);
    std::iota(level.begin(), level.end(), 0);
    while (level.size() > 1) {
        std::vector<int> next;
        for (size_t i = 0; i + 1 < level.size(); i += 2) {
            int anc = next_anc++;
            c.gates.push_back(Gate{GateKind::PrepZ, anc});
            append_toffoli(c, level[i], level[i + 1], anc);
            next.push_back(anc);
        }
        level = std::move(next);
    }
    return c;
}

LogicalCircuit gen_random_clifford(int n, int depth, uint64_t seed) {
    LogicalCircuit c;
    c.n_logical = n;
    c.name = "random_clifford";
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> alive(n, 0);
    for (int q = 0; q < n; ++q) {
        c.gates.push_back(
            Gate{rng() % 2 ? GateKind::PrepX : GateKind::PrepZ, q});
        alive[q] = 1;
    }
    for (int layer = 0; layer < depth; ++layer) {
        std::vector<int> avail;
        for (int q = 0; q < n; ++q)
            if (alive[q]) avail.push_back(q);
        for (int k = static_cast<int>(avail.size()) - 1; k > 0; --k)
            std::swap(avail[k], avail[rng() % (k + 1)]);
        size_t i = 0;
        while (i < avail.size()) {
            int q = avail[i];
            uint64_t pick = rng() % 10;
            if (pick < 3 && i + 1 < avail.size()) {
                c.gates.push_back(Gate{GateKind::Cnot, q, avail[i + 1]});
                i += 2;
            } else if (pick < 5) {
                c.gates.push_back(Gate{GateKind::H, q});
                ++i;
            } else if (pick < 6) {
                c.gates.push_back(Gate{GateKind::S, q});
                ++i;
            } else if (pick < 7) {
                c.gates.push_back(Gate{GateKind::Sx, q});
                ++i;
            } else if (pick < 8) {
                c.gates.push_back(
                    Gate{rng() % 2 ? GateKind::MeasX : GateKind::MeasZ, q});
                if (rng() % 2) {
                    c.gates.push_back(
                        Gate{rng() % 2 ? GateKind::PrepX : GateKind::PrepZ, q});
                } else {
                    alive[q] = 0;
                }
                ++i;
            } else {
                ++i;  // idle
            }
        }
    }
    return c;
}

namespace {

struct Task {
    std::string config_id;
    std::string algorithm;
    LogicalCircuit circuit;
    int n = 0;
    uint64_t seed = 0;
};

BenchRow run_task(const Task& task, const BenchSpec& spec) {
    BenchRow row;
    row.circuit_id = task.config_id + "_s" + std::to_string(task.seed);
    row.algorithm = task.algorithm;
    row.n = task.n;
    row.seed = task.seed;

    CompileOptions opt;
    opt.swap_select_max = spec.swap_select_max;
    if (spec.timeout_s > 0)
        opt.deadline = std::chrono::steady_clock::now() +
                       std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(spec.timeout_s));
    auto t0 = std::chrono::steady_clock::now();
    try {
        CompileResult res = task.algorithm == "edpc" ? compile_edpc(task.circuit, opt)
                                                     : compile_swap(task.circuit, opt);
        row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        row.L = res.schedule.layout.L;
        row.depth = res.cost.depth;
        row.space = res.cost.space;
        row.spacetime = res.cost.spacetime;
        if (!res.schedule.validate().empty()) {
            row.status = "invalid";
            return row;
        }
        bool clifford = true;
        for (const Gate& g : res.normalized.gates)
            if (!is_clifford(g.kind)) clifford = false;
        if (spec.verify_samples > 0) {
            if (clifford) {
                auto rep = check_equivalence(res.normalized, res.schedule,
                                             spec.verify_samples, task.seed);
                if (!rep.equivalent) row.status = "mismatch";
            } else if (!structural_check(res.normalized, res.schedule).empty()) {
                row.status = "invalid";
            }
        }
    } catch (const TimeoutError&) {
        row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        row.status = "timeout";
    }
    return row;
}

}  // namespace

BenchReport run_benchmark(const BenchSpec& spec) {
    std::vector<Task> tasks;
    for (int size : spec.sizes) {
        if (spec.generator == BenchSpec::Generator::HalfCkx) {
            LogicalCircuit circ = gen_half_ckx(size);
            std::string cfg = "half_ckx_k" + std::to_string(size);
            for (const auto& algo : spec.algorithms)
                tasks.push_back({cfg, algo, circ, circ.n_logical, spec.seed_base});
        } else {
            int n_cnot = static_cast<int>(std::lround(spec.density * size));
            n_cnot -= n_cnot % 2;
            n_cnot = std::max(2, std::min(n_cnot, size - size % 2));
            std::string cfg = "random_n" + std::to_string(size) + "_c" +
                              std::to_string(n_cnot) + "_l" +
                              std::to_string(spec.layers);
            for (int s = 0; s < spec.seeds; ++s) {
                uint64_t seed = spec.seed_base + s;
                LogicalCircuit circ =
                    gen_random_parallel_cnots(size, n_cnot, spec.layers, seed);
                for (const auto& algo : spec.algorithms)
                    tasks.push_back({cfg, algo, circ, size, seed});
            }
        }
    }

    BenchReport report;
    report.rows.resize(tasks.size());
    std::mutex mu;
    size_t next = 0;
    int nthreads = spec.threads > 0
                       ? spec.threads
                       : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<int>(nthreads, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                size_t k;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= tasks.size()) return;
                    k = next++;
                }
                report.rows[k] = run_task(tasks[k], spec);
            }
        });
    }
    for (auto& th : pool) th.join();

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const BenchRow& a, const BenchRow& b) {
                         return std::tie(a.circuit_id, a.algorithm, a.seed) <
                                std::tie(b.circuit_id, b.algorithm, b.seed);
                     });

    // Aggregate per (config, algorithm) over successful rows.
    std::map<std::pair<std::string, std::string>, std::vector<const BenchRow*>>
        groups;
    for (const BenchRow& row : report.rows) {
        if (row.status != "ok") continue;
        std::string cfg = row.circuit_id.substr(0, row.circuit_id.rfind("_s"));
        groups[{cfg, row.algorithm}].push_back(&row);
    }
    for (const auto& [key, rows] : groups) {
        BenchAggregate agg;
        agg.config_id = key.first;
        agg.algorithm = key.second;
        agg.n = rows.front()->n;
        agg.instances = static_cast<int>(rows.size());
        double mean = 0;
        for (const auto* r : rows) mean += static_cast<double>(r->spacetime);
        mean /= rows.size();
        double var = 0;
        for (const auto* r : rows) {
            double d = static_cast<double>(r->spacetime) - mean;
            var += d * d;
        }
        agg.mean_spacetime = mean;
        agg.sem_spacetime =
            rows.size() > 1
                ? std::sqrt(var / (rows.size() - 1)) / std::sqrt(double(rows.size()))
                : 0.0;
        report.aggregates.push_back(agg);
    }
    return report;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "circuit_id,algorithm,n,L,depth,space,spacetime,wall_ms,seed,status\n";
    for (const BenchRow& r : rows) {
        out << r.circuit_id << "," << r.algorithm << "," << r.n << "," << r.L
            << ",";
        if (r.status == "timeout") out << ",,,";
        else out << r.depth << "," << r.space << "," << r.spacetime << ",";
        out << r.wall_ms << "," << r.seed << "," << r.status << "\n";
    }
    return out.str();
}

std::string aggregates_to_csv(const std::vector<BenchAggregate>& aggs) {
    std::ostringstream out;
    out << "config_id,algorithm,n,instances,mean_spacetime,sem_spacetime\n";
    for (const BenchAggregate& a : aggs)
        out << a.config_id << "," << a.algorithm << "," << a.n << ","
            << a.instances << "," << a.mean_spacetime << "," << a.sem_spacetime
            << "\n";
    return out.str();
}

std::string aggregates_to_json(const std::vector<BenchAggregate>& aggs) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const BenchAggregate& a : aggs)
        j.push_back({{"config_id", a.config_id},
                     {"algorithm", a.algorithm},
                     {"n", a.n},
                     {"instances", a.instances},
                     {"mean_spacetime", a.mean_spacetime},
                     {"sem_spacetime", a.sem_spacetime}});
    return j.dump(1);
}

}  // namespace edpc::bench
