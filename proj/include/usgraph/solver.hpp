#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "usgraph/graph.hpp"

namespace usgraph {

inline constexpr std::size_t kDefaultSolutionCap = 1000;
inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct SolverOptions {
    std::size_t cap = kDefaultSolutionCap;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Enumerated equivalence class of (system graph, u) pairs, in canonical
// order: u ascending, then lexicographic over the row-major edge bits.
struct SolutionSet {
    std::vector<std::pair<SystemGraph, int>> solutions;
    bool complete = true;
    std::size_t cap = kDefaultSolutionCap;
};

// Task 1: all system graphs whose undersampling matches h for some u in
// uspec, up to options.cap. Complete search; an empty result with
// complete=true means no consistent graph exists.
SolutionSet solve(const EstimatedStructure& h, const USpec& uspec, const SolverOptions& options = {});

// Exact equivalence-class size. Guarded to n <= 20.
std::uint64_t count_solutions(const EstimatedStructure& h, const USpec& uspec);

// Answer-set-programming encoding of the consistency problem; solving the
// emitted text with an external ASP solver yields the same solution set.
std::string emit_encoding(const EstimatedStructure& h, const USpec& uspec);

}  // namespace usgraph
