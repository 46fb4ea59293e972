#pragma once

#include <stdexcept>
#include <string>

#include "usgraph/io.hpp"
#include "usgraph/weighted.hpp"

namespace usgraph {

class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Weighting scheme for turning independence tests into a weighted structure.
struct TestConfig {
    enum class Scheme { Uniform, PseudoBoolean };
    Scheme scheme = Scheme::Uniform;
    double param = 0.05;  // alpha for uniform, prior probability of independence for pb

    static TestConfig uniform(double alpha) {
        check(alpha);
        return {Scheme::Uniform, alpha};
    }
    static TestConfig pseudo_boolean(double prior_independence) {
        check(prior_independence);
        return {Scheme::PseudoBoolean, prior_independence};
    }

private:
    static void check(double p) {
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("test parameter must lie strictly inside (0,1)");
    }
};

struct TestResult {
    double p_value = 1.0;
    double score_gap = 0.0;  // log ML(dependent) - log ML(independent)
};

// Presence test for the directed edge x -> y of H: partial correlation of
// X at the previous sample and Y at the current one, given all other
// variables at the previous sample.
TestResult test_directed(int x, int y, const TimeSeries& ts);

// Presence test for the bidirected edge x <-> y of H: partial correlation
// of X and Y at the current sample given the full previous sample.
TestResult test_bidirected(int x, int y, const TimeSeries& ts);

// Runs both tests over every pair and applies the configured weighting
// scheme. Uniform: present iff p < alpha, all weights 1. Pseudo-Boolean:
// posterior log-odds of dependence as status and absolute weight.
WeightedMeasurement estimate_structure(const TimeSeries& ts, const TestConfig& cfg);

}  // namespace usgraph
