#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "usgraph/graph.hpp"
#include "usgraph/io.hpp"

namespace usgraph {

struct GenConfig {
    int n = 0;
    std::optional<double> density;     // fraction of the n^2 ordered pairs
    std::optional<double> avg_degree;  // expected out-degree per node
    std::uint64_t seed = 0;
};

// Linear Gaussian VAR(1) model over a system graph. coeff(i, j) is the
// weight of edge i -> j; support matches graph.directed exactly.
struct VarModel {
    SystemGraph graph;
    Eigen::MatrixXd coeff;
    Eigen::VectorXd noise_std;
};

double spectral_radius(const Eigen::MatrixXd& a);

// Hamiltonian cycle over a random node permutation plus uniformly sampled
// extra directed edges (self-loops allowed) up to the target edge count.
SystemGraph random_connected_graph(const GenConfig& cfg);

// Edge coefficients uniform on [-0.8, -0.2] U [0.2, 0.8]; if the spectral
// radius reaches 0.95 all coefficients are rescaled to 0.95 / rho.
VarModel random_var(const SystemGraph& g, double noise_std, std::uint64_t seed);

// Iterates the VAR from a zero state, discards burn_in rows, returns
// n_samples rows at the system timescale.
TimeSeries simulate(const VarModel& m, int n_samples, int burn_in, std::uint64_t seed);

inline constexpr int kDefaultBurnIn = 1000;

// Keeps rows 0, u, 2u, ...
TimeSeries subsample_series(const TimeSeries& ts, int u);

}  // namespace usgraph
