#include "usgraph/simulator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace usgraph {

namespace {

// splitmix64 step; decorrelates the per-purpose RNG streams
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
    return std::mt19937_64(mix(mix(seed) ^ purpose));
}

constexpr std::uint64_t kPurposeGraph = 0x67726170;
constexpr std::uint64_t kPurposeCoeff = 0x636f6566;
constexpr std::uint64_t kPurposeNoise = 0x6e6f6973;

}  // namespace

double spectral_radius(const Eigen::MatrixXd& a) {
    return a.eigenvalues().cwiseAbs().maxCoeff();
}

SystemGraph random_connected_graph(const GenConfig& cfg) {
    const int n = cfg.n;
    if (n < 1 || n > kMaxNodes) throw std::invalid_argument("node count out of range");
    if (cfg.density.has_value() == cfg.avg_degree.has_value())
        throw std::invalid_argument("exactly one of density and avg_degree must be set");
    long target;
    if (cfg.density) {
        if (!(*cfg.density > 0.0 && *cfg.density <= 1.0))
            throw std::invalid_argument("density must lie in (0, 1]");
        target = std::lround(*cfg.density * n * n);
    } else {
        if (!(*cfg.avg_degree > 0.0)) throw std::invalid_argument("avg_degree must be positive");
        target = std::lround(*cfg.avg_degree * n);
    }
    if (target < n || target > static_cast<long>(n) * n)
        throw std::invalid_argument("target edge count " + std::to_string(target) +
                                    " infeasible: need n <= e <= n^2");

    auto rng = stream(cfg.seed, kPurposeGraph);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    SystemGraph g(n);
    for (int k = 0; k < n; ++k) g.set_edge(perm[k], perm[(k + 1) % n]);

    std::vector<std::pair<int, int>> rest;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!g.edge(i, j)) rest.emplace_back(i, j);
    std::shuffle(rest.begin(), rest.end(), rng);
    for (long k = 0; g.edge_count() < target; ++k) g.set_edge(rest[k].first, rest[k].second);
    return g;
}

VarModel random_var(const SystemGraph& g, double noise_std, std::uint64_t seed) {
    if (!(noise_std > 0.0)) throw std::invalid_argument("noise_std must be positive");
    const int n = g.num_nodes();
    auto rng = stream(seed, kPurposeCoeff);
    std::uniform_real_distribution<double> mag(0.2, 0.8);
    std::bernoulli_distribution flip(0.5);

    VarModel m;
    m.graph = g;
    m.coeff = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.edge(i, j)) m.coeff(i, j) = (flip(rng) ? -1.0 : 1.0) * mag(rng);
    if ((m.coeff.array() != 0.0).any()) {
        const double rho = spectral_radius(m.coeff);
        if (rho >= 0.95) m.coeff *= 0.95 / rho;
    }
    m.noise_std = Eigen::VectorXd::Constant(n, noise_std);
    return m;
}

TimeSeries simulate(const VarModel& m, int n_samples, int burn_in, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
    const int n = static_cast<int>(m.coeff.rows());
    auto rng = stream(seed, kPurposeNoise);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const Eigen::MatrixXd update = m.coeff.transpose();  // v_t = coeff^T v_{t-1} + eps
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    TimeSeries out(n_samples, n);
    for (int t = 0; t < burn_in + n_samples; ++t) {
        Eigen::VectorXd eps(n);
        for (int j = 0; j < n; ++j) eps(j) = gauss(rng) * m.noise_std(j);
        v = update * v + eps;
        if (t >= burn_in) out.row(t - burn_in) = v.transpose();
    }
    if (!out.allFinite()) throw std::runtime_error("simulation diverged: nonfinite values");
    return out;
}

TimeSeries subsample_series(const TimeSeries& ts, int u) {
    if (u < 1) throw std::invalid_argument("u must be >= 1");
    if (u == 1) return ts;
    const Eigen::Index kept = (ts.rows() - 1) / u + 1;
    TimeSeries out(kept, ts.cols());
    for (Eigen::Index r = 0; r < kept; ++r) out.row(r) = ts.row(r * u);
    return out;
}

}  // namespace usgraph
