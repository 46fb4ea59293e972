#pragma once

// Test-only oracles, independent of the library's undersampling and search
// paths: explicit unrolling over time slices with BFS reachability, and
// exhaustive enumeration over all 2^(n^2) digraphs.

#include <cstdint>
#include <limits>
#include <vector>

#include "usgraph/graph.hpp"
#include "usgraph/optimizer.hpp"

namespace oracle {

using usgraph::EstimatedStructure;
using usgraph::MeasurementGraph;
using usgraph::SystemGraph;

// Reachable nodes at slice `u` starting from node v at slice `s`, walking the
// unrolled graph one slice at a time.
inline std::vector<bool> slice_reach(const SystemGraph& g, int v, int s, int u) {
    const int n = g.num_nodes();
    std::vector<bool> cur(n, false);
    cur[v] = true;
    for (int t = s; t < u; ++t) {
        std::vector<bool> nxt(n, false);
        for (int a = 0; a < n; ++a)
            if (cur[a])
                for (int b = 0; b < n; ++b)
                    if (g.edge(a, b)) nxt[b] = true;
        cur = nxt;
    }
    return cur;
}

// Undersampling by explicit unrolling over u + 1 slices and marginalizing the
// interior: directed edges are slice-0 to slice-u reachability, bidirected
// pairs share an interior-slice ancestor.
inline MeasurementGraph undersample(const SystemGraph& g, int u) {
    const int n = g.num_nodes();
    MeasurementGraph m(n);
    for (int i = 0; i < n; ++i) {
        const auto reach = slice_reach(g, i, 0, u);
        for (int j = 0; j < n; ++j)
            if (reach[j]) m.set_directed(i, j);
    }
    for (int s = 1; s < u; ++s)
        for (int c = 0; c < n; ++c) {
            const auto reach = slice_reach(g, c, s, u);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (reach[i] && reach[j]) m.set_bidirected(i, j);
        }
    return m;
}

// Graph for a row-major edge mask; bit (i * n + j) set means edge i -> j.
inline SystemGraph graph_from_mask(int n, std::uint64_t mask) {
    SystemGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (mask >> (i * n + j) & 1) g.set_edge(i, j);
    return g;
}

inline bool consistent(const MeasurementGraph& m, const EstimatedStructure& h) {
    const int n = m.num_nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto d = h.directed(i, j);
            if (d == usgraph::EdgeStatus::Present && !m.directed(i, j)) return false;
            if (d == usgraph::EdgeStatus::Absent && m.directed(i, j)) return false;
            if (i < j) {
                const auto b = h.bidirected(i, j);
                if (b == usgraph::EdgeStatus::Present && !m.bidirected(i, j)) return false;
                if (b == usgraph::EdgeStatus::Absent && m.bidirected(i, j)) return false;
            }
        }
    return true;
}

// All consistent graphs for one u, by exhaustive sweep. Usable up to n = 4.
inline std::vector<SystemGraph> all_consistent(const EstimatedStructure& h, int u) {
    const int n = h.num_nodes();
    std::vector<SystemGraph> out;
    const std::uint64_t limit = 1ULL << (n * n);
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        const SystemGraph g = graph_from_mask(n, mask);
        if (consistent(oracle::undersample(g, u), h)) out.push_back(g);
    }
    return out;
}

// Exhaustive minimum of the weighted conflict objective in milli-units.
inline std::int64_t min_cost_milli(const usgraph::WeightedMeasurement& w, int u) {
    const int n = w.num_nodes();
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    const std::uint64_t limit = 1ULL << (n * n);
    for (std::uint64_t mask = 0; mask < limit; ++mask)
        best = std::min(best, usgraph::cost_milli(graph_from_mask(n, mask), u, w));
    return best;
}

// Figure-style three-node example used throughout: self-loop on node 0 plus
// the cycle 0 -> 1 -> 2 -> 0.
inline SystemGraph loop_cycle_graph() {
    SystemGraph g(3);
    g.set_edge(0, 0);
    g.set_edge(0, 1);
    g.set_edge(1, 2);
    g.set_edge(2, 0);
    return g;
}

}  // namespace oracle
