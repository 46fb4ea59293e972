#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "usgraph/solver.hpp"
#include "usgraph/weighted.hpp"

namespace usgraph {

struct OptimalResult {
    double min_cost = 0.0;
    std::int64_t min_cost_milli = 0;
    std::vector<std::tuple<SystemGraph, int, double>> solutions;  // (graph, u, cost)
    bool complete = true;
};

// Weighted conflict objective: sum of weights of h-statements that
// disagree with undersample(g, u), over both edge relations.
double cost(const SystemGraph& g, int u, const WeightedMeasurement& w);

// Same objective in exact integer milli-units (weight x 1000, rounded).
std::int64_t cost_milli(const SystemGraph& g, int u, const WeightedMeasurement& w);

// Task 2: all (g, u) minimizing the objective jointly over u in uspec,
// up to options.cap, in canonical order.
OptimalResult optimize(const WeightedMeasurement& w, const USpec& uspec,
                       const SolverOptions& options = {});

// Weighted ASP encoding: hard integrity constraints replaced by weak
// constraints, weights serialized as rounded milli-units.
std::string emit_weighted_encoding(const WeightedMeasurement& w, const USpec& uspec);

}  // namespace usgraph
