#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "usgraph/optimizer.hpp"
#include "usgraph/solver.hpp"

namespace usgraph {

// One TPR/FPR pair; denominators of zero leave the value undefined.
struct RateStats {
    double tpr = 0.0;
    double fpr = 0.0;
    bool tpr_defined = false;
    bool fpr_defined = false;
};

struct AccuracyReport {
    RateStats h_directed;    // estimated H vs true measurement graph
    RateStats h_bidirected;
    RateStats g1_directed;   // solved system graphs vs true system graph
    bool defined = false;    // false when the solution set was empty
};

// Per-solution directed-edge TPR/FPR against the true system graph,
// averaged uniformly over the solutions.
AccuracyReport mean_solution_accuracy(const std::vector<SystemGraph>& solutions,
                                      const SystemGraph& truth);
AccuracyReport mean_solution_accuracy(const SolutionSet& s, const SystemGraph& truth);
AccuracyReport mean_solution_accuracy(const OptimalResult& r, const SystemGraph& truth);

// Edge-presence TPR/FPR of an estimated structure against the true
// measurement graph, per edge kind.
RateStats structure_directed_accuracy(const WeightedMeasurement& h, const MeasurementGraph& truth);
RateStats structure_bidirected_accuracy(const WeightedMeasurement& h, const MeasurementGraph& truth);

struct BenchRecord {
    std::string instance_id;
    int n = 0;
    int u_lo = 0, u_hi = 0;
    double density_or_degree = 0.0;
    int samples = 0;
    std::string scheme;  // "exact", "uniform" or "pb"
    double param = 0.0;
    double wall_seconds = 0.0;
    double min_cost = 0.0;
    std::size_t solution_count = 0;
    bool complete = true;
    bool timed_out = false;
    AccuracyReport accuracy;
};

struct ExperimentSpec {
    // fig2-density | fig2-nodes | fig3-density | fig3-urange | fig4-accuracy | fig5-runtime
    std::string protocol;
    std::uint64_t seed = 1;
    int instances = 20;        // instances per grid point
    int n = 0;                 // 0 keeps the protocol default
    int u = 2;
    std::vector<double> grid;  // protocol-specific axis; empty keeps the default
    double degree = 3.0;
    int samples = 200;
    std::size_t cap = kDefaultSolutionCap;
    double timeout_seconds = 60.0;
    std::string scheme = "pb";
    double param = 0.4;
    int workers = 0;  // 0: hardware concurrency (USGRAPH_WORKERS overrides)
};

std::vector<BenchRecord> run_experiment(const ExperimentSpec& spec);

// Deterministic record CSV; wall-clock times go to the separate timing CSV
// so identical (spec, seed) runs produce byte-identical record files.
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_bench_timings_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace usgraph
