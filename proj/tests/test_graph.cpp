#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "usgraph/graph.hpp"

using namespace usgraph;

namespace {

std::set<std::pair<int, int>> pair_set(const std::vector<std::pair<int, int>>& v) {
    return {v.begin(), v.end()};
}

SystemGraph random_graph(int n, double p, std::mt19937_64& rng) {
    SystemGraph g(n);
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (coin(rng)) g.set_edge(i, j);
    return g;
}

}  // namespace

TEST_CASE("exact_length_paths: loop-cycle graph at L=2") {
    const SystemGraph g = oracle::loop_cycle_graph();
    const auto got = pair_set(exact_length_paths(g, 2));
    const std::set<std::pair<int, int>> want = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {2, 0}, {2, 1}};
    CHECK(got == want);
}

TEST_CASE("exact_length_paths: L=1 is the edge set") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const SystemGraph g = random_graph(5, 0.4, rng);
        CHECK(pair_set(exact_length_paths(g, 1)) == pair_set(g.edges()));
    }
}

TEST_CASE("exact_length_paths: chain too short for L=3") {
    SystemGraph g(3);
    g.set_edge(0, 1);
    g.set_edge(1, 2);
    CHECK(exact_length_paths(g, 3).empty());
}

TEST_CASE("undersample: loop-cycle graph at u=2 gains a bidirected pair") {
    const MeasurementGraph m = undersample(oracle::loop_cycle_graph(), 2);
    CHECK(m.directed(0, 0));
    CHECK(m.directed(0, 1));
    CHECK(m.directed(0, 2));
    CHECK(m.directed(1, 0));
    CHECK(m.directed(2, 0));
    CHECK(m.directed(2, 1));
    CHECK(m.directed_count() == 6);
    CHECK(m.bidirected(0, 1));
    CHECK(m.bidirected_count() == 1);
}

TEST_CASE("undersample: u=1 keeps the edges and produces no bidirected pairs") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const SystemGraph g = random_graph(6, 0.3, rng);
        const MeasurementGraph m = undersample(g, 1);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) CHECK(m.directed(i, j) == g.edge(i, j));
        CHECK(m.bidirected_count() == 0);
    }
}

TEST_CASE("undersample: common cause only, u=2") {
    SystemGraph g(3);
    g.set_edge(0, 1);
    g.set_edge(0, 2);
    const MeasurementGraph m = undersample(g, 2);
    CHECK(m.directed_count() == 0);
    CHECK(m.bidirected(1, 2));
    CHECK(m.bidirected_count() == 1);
}

TEST_CASE("undersample: bidirected pairs never touch the diagonal") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        const SystemGraph g = random_graph(5, 0.5, rng);
        for (int u = 1; u <= 4; ++u) {
            const MeasurementGraph m = undersample(g, u);
            for (int i = 0; i < 5; ++i) CHECK_FALSE(m.bidirected_row(i)[i]);
        }
    }
}

TEST_CASE("undersample: a node with two successors forces bidirected edges for u >= 2") {
    std::mt19937_64 rng(17);
    int covered = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const SystemGraph g = random_graph(5, 0.35, rng);
        bool branching = false;
        for (int i = 0; i < 5 && !branching; ++i) branching = g.successors(i).count() >= 2;
        if (!branching) continue;
        ++covered;
        for (int u = 2; u <= 4; ++u) CHECK(undersample(g, u).bidirected_count() > 0);
    }
    CHECK(covered > 50);
}

TEST_CASE("undersample: no bidirected edges at some u >= 2 implies out-degree <= 1") {
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 300; ++rep) {
        const SystemGraph g = random_graph(4, 0.25, rng);
        for (int u = 2; u <= 3; ++u) {
            if (undersample(g, u).bidirected_count() != 0) continue;
            for (int i = 0; i < 4; ++i) CHECK(g.successors(i).count() <= 1);
        }
    }
}

TEST_CASE("undersample equals the unrolled-marginalization oracle") {
    SUBCASE("exhaustive n=3") {
        for (std::uint64_t mask = 0; mask < 512; ++mask) {
            const SystemGraph g = oracle::graph_from_mask(3, mask);
            for (int u = 1; u <= 3; ++u) CHECK(undersample(g, u) == oracle::undersample(g, u));
        }
    }
    SUBCASE("random n=4, u<=3") {
        std::mt19937_64 rng(23);
        std::uniform_int_distribution<std::uint64_t> mask(0, (1ULL << 16) - 1);
        for (int rep = 0; rep < 300; ++rep) {
            const SystemGraph g = oracle::graph_from_mask(4, mask(rng));
            for (int u = 1; u <= 3; ++u) CHECK(undersample(g, u) == oracle::undersample(g, u));
        }
    }
}

TEST_CASE("is_consistent") {
    const SystemGraph g1 = oracle::loop_cycle_graph();
    const EstimatedStructure full =
        EstimatedStructure::from_measurement(undersample(g1, 2));

    SUBCASE("the generating graph matches its own undersampling") {
        CHECK(is_consistent(g1, 2, full));
    }
    SUBCASE("empty graph fails any present statement") {
        CHECK_FALSE(is_consistent(SystemGraph(3), 2, full));
    }
    SUBCASE("all-unknown structure accepts everything") {
        SystemGraph g(3);
        g.set_edge(0, 1);
        g.set_edge(0, 2);
        CHECK(is_consistent(g, 2, EstimatedStructure(3)));
    }
    SUBCASE("unknown statements impose no constraint") {
        EstimatedStructure h(3);
        h.set_directed(0, 1, EdgeStatus::Present);  // everything else unknown
        SystemGraph g(3);
        g.set_edge(0, 2);
        g.set_edge(2, 1);
        g.set_edge(0, 0);
        CHECK(is_consistent(g, 2, h));
    }
}

TEST_CASE("graph type invariants") {
    CHECK_THROWS_AS(SystemGraph(0), std::invalid_argument);
    CHECK_THROWS_AS(SystemGraph(kMaxNodes + 1), std::invalid_argument);
    MeasurementGraph m(3);
    CHECK_THROWS_AS(m.set_bidirected(1, 1), std::invalid_argument);
    EstimatedStructure h(3);
    CHECK_THROWS_AS(h.set_bidirected(2, 2, EdgeStatus::Present), std::invalid_argument);
    h.set_bidirected(0, 2, EdgeStatus::Present);
    CHECK(h.bidirected(2, 0) == EdgeStatus::Present);
}

TEST_CASE("lexicographic graph order uses row-major bits, absent first") {
    SystemGraph a(2), b(2);
    b.set_edge(0, 0);
    CHECK(a.lex_less(b));
    CHECK_FALSE(b.lex_less(a));
    SystemGraph c(2), d(2);
    c.set_edge(0, 1);
    d.set_edge(1, 0);
    // first differing row-major bit is (0,1): absent in d, present in c
    CHECK(d.lex_less(c));
    CHECK_FALSE(c.lex_less(d));
}
