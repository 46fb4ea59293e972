#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace usgraph {

// Hard cap on node count; keeps every adjacency row in two machine words.
inline constexpr int kMaxNodes = 128;

using NodeSet = std::bitset<kMaxNodes>;

enum class EdgeStatus : std::uint8_t { Unknown, Present, Absent };

// Rolled system-timescale causal graph: directed edges only, self-loops
// allowed. Stored as one bitset row per source node.
class SystemGraph {
public:
    SystemGraph() = default;
    explicit SystemGraph(int n) : n_(n), rows_(static_cast<std::size_t>(n)) {
        if (n < 1 || n > kMaxNodes)
            throw std::invalid_argument("SystemGraph: node count out of range");
    }

    int num_nodes() const { return n_; }

    bool edge(int i, int j) const { return rows_[i][static_cast<std::size_t>(j)]; }
    void set_edge(int i, int j, bool v = true) { rows_[i][static_cast<std::size_t>(j)] = v; }

    const NodeSet& successors(int i) const { return rows_[i]; }
    NodeSet& row(int i) { return rows_[i]; }

    int edge_count() const {
        int c = 0;
        for (const auto& r : rows_) c += static_cast<int>(r.count());
        return c;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (edge(i, j)) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const SystemGraph& o) const { return n_ == o.n_ && rows_ == o.rows_; }
    bool operator!=(const SystemGraph& o) const { return !(*this == o); }

    // Row-major edge bit-vector comparison; absent sorts before present.
    bool lex_less(const SystemGraph& o) const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                bool a = edge(i, j), b = o.edge(i, j);
                if (a != b) return !a;
            }
        return false;
    }

private:
    int n_ = 0;
    std::vector<NodeSet> rows_;
};

// Rolled measurement-timescale graph: directed plus symmetric bidirected
// edges. Bidirected pairs always have i != j.
class MeasurementGraph {
public:
    MeasurementGraph() = default;
    explicit MeasurementGraph(int n)
        : n_(n), directed_(static_cast<std::size_t>(n)), bidirected_(static_cast<std::size_t>(n)) {
        if (n < 1 || n > kMaxNodes)
            throw std::invalid_argument("MeasurementGraph: node count out of range");
    }

    int num_nodes() const { return n_; }

    bool directed(int i, int j) const { return directed_[i][static_cast<std::size_t>(j)]; }
    void set_directed(int i, int j, bool v = true) { directed_[i][static_cast<std::size_t>(j)] = v; }

    bool bidirected(int i, int j) const { return bidirected_[i][static_cast<std::size_t>(j)]; }
    void set_bidirected(int i, int j, bool v = true) {
        if (i == j) throw std::invalid_argument("bidirected self-pair not allowed");
        bidirected_[i][static_cast<std::size_t>(j)] = v;
        bidirected_[j][static_cast<std::size_t>(i)] = v;
    }

    const NodeSet& directed_row(int i) const { return directed_[i]; }
    NodeSet& directed_row(int i) { return directed_[i]; }
    const NodeSet& bidirected_row(int i) const { return bidirected_[i]; }
    NodeSet& bidirected_row(int i) { return bidirected_[i]; }

    int directed_count() const {
        int c = 0;
        for (const auto& r : directed_) c += static_cast<int>(r.count());
        return c;
    }
    int bidirected_count() const {
        int c = 0;
        for (const auto& r : bidirected_) c += static_cast<int>(r.count());
        return c / 2;
    }

    bool operator==(const MeasurementGraph& o) const {
        return n_ == o.n_ && directed_ == o.directed_ && bidirected_ == o.bidirected_;
    }
    bool operator!=(const MeasurementGraph& o) const { return !(*this == o); }

private:
    int n_ = 0;
    std::vector<NodeSet> directed_;
    std::vector<NodeSet> bidirected_;  // symmetric, diagonal always clear
};

// Three-valued measurement-timescale structure: each directed pair and each
// unordered i != j pair is present, absent, or unconstrained.
class EstimatedStructure {
public:
    EstimatedStructure() = default;
    explicit EstimatedStructure(int n)
        : n_(n),
          directed_(static_cast<std::size_t>(n) * n, EdgeStatus::Unknown),
          bidirected_(static_cast<std::size_t>(n) * n, EdgeStatus::Unknown) {
        if (n < 1 || n > kMaxNodes)
            throw std::invalid_argument("EstimatedStructure: node count out of range");
    }

    int num_nodes() const { return n_; }

    EdgeStatus directed(int i, int j) const { return directed_[idx(i, j)]; }
    void set_directed(int i, int j, EdgeStatus s) { directed_[idx(i, j)] = s; }

    EdgeStatus bidirected(int i, int j) const { return bidirected_[idx(i, j)]; }
    void set_bidirected(int i, int j, EdgeStatus s) {
        if (i == j) throw std::invalid_argument("bidirected self-pair not allowed");
        bidirected_[idx(i, j)] = s;
        bidirected_[idx(j, i)] = s;
    }

    bool all_bidirected_absent() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j && bidirected(i, j) != EdgeStatus::Absent) return false;
        return true;
    }

    // Fully specified structure matching a concrete measurement graph.
    static EstimatedStructure from_measurement(const MeasurementGraph& m) {
        EstimatedStructure h(m.num_nodes());
        for (int i = 0; i < m.num_nodes(); ++i)
            for (int j = 0; j < m.num_nodes(); ++j) {
                h.set_directed(i, j, m.directed(i, j) ? EdgeStatus::Present : EdgeStatus::Absent);
                if (i < j)
                    h.set_bidirected(i, j,
                                     m.bidirected(i, j) ? EdgeStatus::Present : EdgeStatus::Absent);
            }
        return h;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<EdgeStatus> directed_;
    std::vector<EdgeStatus> bidirected_;
};

// Subsampling rate: a single value or a contiguous inclusive range.
struct USpec {
    int lo = 1;
    int hi = 1;

    static USpec fixed(int u) {
        if (u < 1) throw std::invalid_argument("u must be >= 1");
        return {u, u};
    }
    static USpec range(int lo, int hi) {
        if (lo < 1 || lo > hi) throw std::invalid_argument("invalid u range");
        return {lo, hi};
    }
    bool is_fixed() const { return lo == hi; }
};

// Pairs (i, j) connected by a directed walk of length exactly L, as the L-th
// Boolean power of the adjacency relation.
std::vector<NodeSet> exact_length_path_rows(const SystemGraph& g, int length);

std::vector<std::pair<int, int>> exact_length_paths(const SystemGraph& g, int length);

// Measurement-timescale structure induced by subsampling g at rate u:
// directed edges are the length-u walks, bidirected pairs {i, j} have a
// common cause with equal-length arms shorter than u.
MeasurementGraph undersample(const SystemGraph& g, int u);

// True iff undersample(g, u) satisfies every present/absent statement of h.
bool is_consistent(const SystemGraph& g, int u, const EstimatedStructure& h);

}  // namespace usgraph
