#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "usgraph/graph.hpp"

namespace usgraph {

// Binary statement about one edge of H plus a reliability weight.
struct WeightedStatement {
    bool present = false;
    double weight = 1.0;
};

// Estimated measurement structure where every directed pair and every
// unordered i != j pair carries exactly one weighted presence/absence
// statement.
class WeightedMeasurement {
public:
    WeightedMeasurement() = default;
    explicit WeightedMeasurement(int n)
        : n_(n),
          directed_(static_cast<std::size_t>(n) * n),
          bidirected_(static_cast<std::size_t>(n) * n) {
        if (n < 1 || n > kMaxNodes)
            throw std::invalid_argument("WeightedMeasurement: node count out of range");
    }

    int num_nodes() const { return n_; }

    const WeightedStatement& directed(int i, int j) const { return directed_[idx(i, j)]; }
    void set_directed(int i, int j, bool present, double weight) {
        check_weight(weight);
        directed_[idx(i, j)] = {present, weight};
    }

    const WeightedStatement& bidirected(int i, int j) const { return bidirected_[idx(i, j)]; }
    void set_bidirected(int i, int j, bool present, double weight) {
        if (i == j) throw std::invalid_argument("bidirected self-pair not allowed");
        check_weight(weight);
        bidirected_[idx(i, j)] = {present, weight};
        bidirected_[idx(j, i)] = {present, weight};
    }

    // Weights dropped, every statement kept as a hard constraint.
    EstimatedStructure to_structure() const {
        EstimatedStructure h(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                h.set_directed(i, j,
                               directed(i, j).present ? EdgeStatus::Present : EdgeStatus::Absent);
                if (i < j)
                    h.set_bidirected(
                        i, j, bidirected(i, j).present ? EdgeStatus::Present : EdgeStatus::Absent);
            }
        return h;
    }

    // Fully specified weighted view of a concrete measurement graph.
    static WeightedMeasurement from_measurement(const MeasurementGraph& m, double weight = 1.0) {
        WeightedMeasurement w(m.num_nodes());
        for (int i = 0; i < m.num_nodes(); ++i)
            for (int j = 0; j < m.num_nodes(); ++j) {
                w.set_directed(i, j, m.directed(i, j), weight);
                if (i < j) w.set_bidirected(i, j, m.bidirected(i, j), weight);
            }
        return w;
    }

private:
    static void check_weight(double w) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weight must be finite and >= 0");
    }
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<WeightedStatement> directed_;
    std::vector<WeightedStatement> bidirected_;
};

// Integer milli-unit weight used by the optimizer and the encoding export.
inline std::int64_t to_milli(double w) { return static_cast<std::int64_t>(std::llround(w * 1000.0)); }

}  // namespace usgraph
