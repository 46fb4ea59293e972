#include "usgraph/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace usgraph {

namespace {

// Lagged pairs over all consecutive rows: column block [0, n) holds the
// previous sample, [n, 2n) the current one. Columns are centered.
struct LaggedData {
    Eigen::MatrixXd stacked;  // m x 2n
    int n = 0;
    Eigen::Index m = 0;

    explicit LaggedData(const TimeSeries& ts) {
        n = static_cast<int>(ts.cols());
        const Eigen::Index rows = ts.rows();
        if (rows < n + 3)
            throw EstimationError("time series too short: need at least n + 3 samples");
        for (int c = 0; c < n; ++c) {
            const double span = ts.col(c).maxCoeff() - ts.col(c).minCoeff();
            if (!(span > 0.0))
                throw EstimationError("variable " + std::to_string(c + 1) +
                                      " is constant; independence tests are undefined");
        }
        m = rows - 1;
        stacked.resize(m, 2 * n);
        stacked.leftCols(n) = ts.topRows(m);
        stacked.rightCols(n) = ts.bottomRows(m);
        stacked.rowwise() -= stacked.colwise().mean();
    }
};

double normal_sf2(double z) {  // two-sided tail of |Z|
    return std::erfc(z / std::sqrt(2.0));
}

// Fisher z-test on the partial correlation of columns a and b given cond.
double partial_corr_pvalue(const LaggedData& d, int a, int b, const std::vector<int>& cond) {
    std::vector<int> idx = {a, b};
    idx.insert(idx.end(), cond.begin(), cond.end());
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd s(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            s(r, c) = d.stacked.col(idx[r]).dot(d.stacked.col(idx[c])) /
                      static_cast<double>(d.m - 1);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff()))
        throw EstimationError("singular conditioning covariance for variables " +
                              std::to_string(a + 1) + ", " + std::to_string(b + 1));
    Eigen::MatrixXd prec = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    double r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    r = std::clamp(r, -1.0, 1.0);
    if (std::abs(r) >= 1.0 - 1e-14) return 0.0;
    const double z = std::atanh(r);
    const double dof = std::max<double>(1.0, static_cast<double>(d.m) - cond.size() - 3.0);
    return normal_sf2(std::abs(z) * std::sqrt(dof));
}

// Log marginal likelihood of a unit-information (g = m) conjugate linear
// regression of y on the given columns, up to model-independent constants.
double log_marginal(const LaggedData& d, int target, const std::vector<int>& regressors) {
    const double g = static_cast<double>(d.m);
    const double shrink = g / (1.0 + g);
    const Eigen::VectorXd y = d.stacked.col(target);
    const double yy = y.squaredNorm();
    double fit = 0.0;
    const int p = static_cast<int>(regressors.size());
    if (p > 0) {
        Eigen::MatrixXd x(d.m, p);
        for (int c = 0; c < p; ++c) x.col(c) = d.stacked.col(regressors[c]);
        Eigen::MatrixXd xtx = x.transpose() * x;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
        if (ldlt.info() != Eigen::Success ||
            ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff()))
            throw EstimationError("singular conditioning covariance for variable " +
                                  std::to_string(target + 1));
        const Eigen::VectorXd xty = x.transpose() * y;
        fit = xty.dot(ldlt.solve(xty));
    }
    const double s = std::max(yy - shrink * fit, 1e-300);
    return -0.5 * p * std::log1p(g) - 0.5 * static_cast<double>(d.m) * std::log(s);
}

TestResult run_test(const LaggedData& d, int a, int b, std::vector<int> cond) {
    TestResult r;
    r.p_value = partial_corr_pvalue(d, a, b, cond);
    std::vector<int> with = cond;
    with.push_back(a);
    r.score_gap = log_marginal(d, b, with) - log_marginal(d, b, cond);
    return r;
}

TestResult directed_test(const LaggedData& d, int x, int y) {
    std::vector<int> cond;
    for (int c = 0; c < d.n; ++c)
        if (c != x) cond.push_back(c);
    return run_test(d, x, d.n + y, cond);
}

TestResult bidirected_test(const LaggedData& d, int x, int y) {
    if (x == y) throw std::invalid_argument("bidirected test needs distinct variables");
    // canonical orientation keeps the statistic symmetric in (x, y)
    const int lo = std::min(x, y), hi = std::max(x, y);
    std::vector<int> cond;
    for (int c = 0; c < d.n; ++c) cond.push_back(c);
    return run_test(d, d.n + lo, d.n + hi, cond);
}

void check_node(int v, int n) {
    if (v < 0 || v >= n) throw std::invalid_argument("node index out of range");
}

}  // namespace

TestResult test_directed(int x, int y, const TimeSeries& ts) {
    const LaggedData d(ts);
    check_node(x, d.n);
    check_node(y, d.n);
    return directed_test(d, x, y);
}

TestResult test_bidirected(int x, int y, const TimeSeries& ts) {
    const LaggedData d(ts);
    check_node(x, d.n);
    check_node(y, d.n);
    return bidirected_test(d, x, y);
}

WeightedMeasurement estimate_structure(const TimeSeries& ts, const TestConfig& cfg) {
    const LaggedData d(ts);
    const int n = d.n;
    WeightedMeasurement w(n);
    const bool uniform = cfg.scheme == TestConfig::Scheme::Uniform;
    const double prior_shift =
        uniform ? 0.0 : std::log((1.0 - cfg.param) / cfg.param);  // logit(1 - prior)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const TestResult t = directed_test(d, i, j);
            if (uniform) {
                w.set_directed(i, j, t.p_value < cfg.param, 1.0);
            } else {
                const double l = t.score_gap + prior_shift;
                w.set_directed(i, j, l > 0.0, std::abs(l));
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const TestResult t = bidirected_test(d, i, j);
            if (uniform) {
                w.set_bidirected(i, j, t.p_value < cfg.param, 1.0);
            } else {
                const double l = t.score_gap + prior_shift;
                w.set_bidirected(i, j, l > 0.0, std::abs(l));
            }
        }
    return w;
}

}  // namespace usgraph
