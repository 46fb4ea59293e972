#include "usgraph/graph.hpp"

namespace usgraph {

namespace {

// rows(C) = rows(A) * rows(B) over the or/and semiring.
std::vector<NodeSet> bool_mul(const std::vector<NodeSet>& a, const std::vector<NodeSet>& b) {
    std::vector<NodeSet> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        NodeSet acc;
        for (std::size_t j = a[i]._Find_first(); j < kMaxNodes; j = a[i]._Find_next(j))
            acc |= b[j];
        out[i] = acc;
    }
    return out;
}

std::vector<NodeSet> adjacency_rows(const SystemGraph& g) {
    std::vector<NodeSet> rows(static_cast<std::size_t>(g.num_nodes()));
    for (int i = 0; i < g.num_nodes(); ++i) rows[i] = g.successors(i);
    return rows;
}

}  // namespace

std::vector<NodeSet> exact_length_path_rows(const SystemGraph& g, int length) {
    if (length < 1) throw std::invalid_argument("path length must be >= 1");
    auto acc = adjacency_rows(g);
    const auto adj = acc;
    for (int l = 2; l <= length; ++l) acc = bool_mul(acc, adj);
    return acc;
}

std::vector<std::pair<int, int>> exact_length_paths(const SystemGraph& g, int length) {
    auto rows = exact_length_path_rows(g, length);
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < g.num_nodes(); ++i)
        for (int j = 0; j < g.num_nodes(); ++j)
            if (rows[i][static_cast<std::size_t>(j)]) out.emplace_back(i, j);
    return out;
}

MeasurementGraph undersample(const SystemGraph& g, int u) {
    if (u < 1) throw std::invalid_argument("u must be >= 1");
    const int n = g.num_nodes();
    MeasurementGraph m(n);

    // Length-k walk rows for k = 1..u, computed once and reused.
    auto walk = adjacency_rows(g);
    const auto adj = walk;
    for (int k = 1; k < u; ++k) {
        // Equal-length arms: any two distinct nodes reached from a common
        // node c by length-k walks become a bidirected pair.
        for (int c = 0; c < n; ++c) {
            const NodeSet& reach = walk[c];
            for (std::size_t i = reach._Find_first(); i < kMaxNodes; i = reach._Find_next(i)) {
                NodeSet others = reach;
                others.reset(i);
                m.bidirected_row(static_cast<int>(i)) |= others;
            }
        }
        walk = bool_mul(walk, adj);
    }
    for (int i = 0; i < n; ++i) m.directed_row(i) = walk[i];
    return m;
}

bool is_consistent(const SystemGraph& g, int u, const EstimatedStructure& h) {
    if (g.num_nodes() != h.num_nodes())
        throw std::invalid_argument("is_consistent: node count mismatch");
    const MeasurementGraph m = undersample(g, u);
    const int n = g.num_nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            switch (h.directed(i, j)) {
                case EdgeStatus::Present:
                    if (!m.directed(i, j)) return false;
                    break;
                case EdgeStatus::Absent:
                    if (m.directed(i, j)) return false;
                    break;
                case EdgeStatus::Unknown:
                    break;
            }
            if (i < j) {
                switch (h.bidirected(i, j)) {
                    case EdgeStatus::Present:
                        if (!m.bidirected(i, j)) return false;
                        break;
                    case EdgeStatus::Absent:
                        if (m.bidirected(i, j)) return false;
                        break;
                    case EdgeStatus::Unknown:
                        break;
                }
            }
        }
    return true;
}

}  // namespace usgraph
