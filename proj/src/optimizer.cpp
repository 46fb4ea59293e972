#include "usgraph/optimizer.hpp"

#include <algorithm>
#include <sstream>

namespace usgraph {

namespace {

// Milli-unit weight masks split by statement polarity.
struct WeightTables {
    int n;
    std::vector<std::int64_t> dir_w, bid_w;  // row-major, bid uses i<j slots
    std::vector<NodeSet> dir_present, dir_absent, bid_present, bid_absent;

    explicit WeightTables(const WeightedMeasurement& w) : n(w.num_nodes()) {
        dir_w.assign(static_cast<std::size_t>(n) * n, 0);
        bid_w.assign(static_cast<std::size_t>(n) * n, 0);
        dir_present.assign(n, {});
        dir_absent.assign(n, {});
        bid_present.assign(n, {});
        bid_absent.assign(n, {});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto& d = w.directed(i, j);
                dir_w[static_cast<std::size_t>(i) * n + j] = to_milli(d.weight);
                (d.present ? dir_present : dir_absent)[i].set(j);
                if (i != j) {
                    const auto& b = w.bidirected(i, j);
                    bid_w[static_cast<std::size_t>(i) * n + j] = to_milli(b.weight);
                    (b.present ? bid_present : bid_absent)[i].set(j);
                }
            }
    }

    // Admissible bound: weights of statements already irrecoverably violated.
    // Present statements are checked against the edge-maximal undersampling,
    // absent statements against the edge-minimal one.
    std::int64_t lower_bound(const MeasurementGraph& mmax, const MeasurementGraph& mmin) const {
        std::int64_t lb = 0;
        for (int i = 0; i < n; ++i) {
            NodeSet miss = dir_present[i] & ~mmax.directed_row(i);
            for (std::size_t j = miss._Find_first(); j < kMaxNodes; j = miss._Find_next(j))
                lb += dir_w[static_cast<std::size_t>(i) * n + j];
            NodeSet hit = dir_absent[i] & mmin.directed_row(i);
            for (std::size_t j = hit._Find_first(); j < kMaxNodes; j = hit._Find_next(j))
                lb += dir_w[static_cast<std::size_t>(i) * n + j];
            NodeSet bmiss = bid_present[i] & ~mmax.bidirected_row(i);
            for (std::size_t j = bmiss._Find_first(); j < kMaxNodes; j = bmiss._Find_next(j))
                if (static_cast<int>(j) > i) lb += bid_w[static_cast<std::size_t>(i) * n + j];
            NodeSet bhit = bid_absent[i] & mmin.bidirected_row(i);
            for (std::size_t j = bhit._Find_first(); j < kMaxNodes; j = bhit._Find_next(j))
                if (static_cast<int>(j) > i) lb += bid_w[static_cast<std::size_t>(i) * n + j];
        }
        return lb;
    }
};

struct BBNode {
    SystemGraph gmin, gmax;
    std::vector<std::int8_t> status;
    int unassigned = 0;
};

class OptimalSearch {
public:
    OptimalSearch(const WeightTables& tables, int u, const SolverOptions& options,
                  std::int64_t& best, std::vector<std::pair<SystemGraph, int>>& sols,
                  bool& truncated, bool& deadline_hit)
        : t_(tables),
          n_(tables.n),
          u_(u),
          options_(options),
          best_(best),
          sols_(sols),
          truncated_(truncated),
          deadline_hit_(deadline_hit) {}

    void run() {
        BBNode root;
        root.gmin = SystemGraph(n_);
        root.gmax = SystemGraph(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) root.gmax.set_edge(i, j);
        root.status.assign(static_cast<std::size_t>(n_) * n_, -1);
        root.unassigned = n_ * n_;
        dfs(std::move(root));
    }

private:
    void assign(BBNode& nd, int i, int j, bool present) {
        nd.status[static_cast<std::size_t>(i) * n_ + j] = present ? 1 : 0;
        --nd.unassigned;
        if (present)
            nd.gmin.set_edge(i, j);
        else
            nd.gmax.set_edge(i, j, false);
    }

    std::int64_t bound(const BBNode& nd) const {
        return t_.lower_bound(undersample(nd.gmax, u_), undersample(nd.gmin, u_));
    }

    void record(const SystemGraph& g, std::int64_t c) {
        if (c < best_) {
            best_ = c;
            sols_.clear();
            truncated_ = false;
        }
        if (c == best_) {
            if (sols_.size() < options_.cap)
                sols_.emplace_back(g, u_);
            else
                truncated_ = true;
        }
    }

    void dfs(BBNode nd) {
        if (deadline_hit_) return;
        if (options_.deadline && (++tick_ & 0xff) == 0 &&
            std::chrono::steady_clock::now() >= *options_.deadline) {
            deadline_hit_ = true;
            return;
        }
        std::int64_t lb = bound(nd);
        if (lb > best_) return;
        if (nd.unassigned == 0) {
            record(nd.gmin, lb);  // at a leaf the bound is the exact cost
            return;
        }
        // look-ahead: per-edge trial bounds force assignments and pick the
        // branching edge with the largest combined impact
        int pick_i = -1, pick_j = -1;
        bool pick_present_first = true;
        std::int64_t pick_score = -1;
        bool changed = true;
        while (changed && !deadline_hit_) {
            changed = false;
            pick_i = -1;
            pick_score = -1;
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    if (nd.status[static_cast<std::size_t>(i) * n_ + j] != -1) continue;
                    SystemGraph trial_min = nd.gmin;
                    trial_min.set_edge(i, j);
                    const std::int64_t lb_present =
                        t_.lower_bound(undersample(nd.gmax, u_), undersample(trial_min, u_));
                    SystemGraph trial_max = nd.gmax;
                    trial_max.set_edge(i, j, false);
                    const std::int64_t lb_absent =
                        t_.lower_bound(undersample(trial_max, u_), undersample(nd.gmin, u_));
                    if (lb_present > best_ && lb_absent > best_) return;
                    if (lb_present > best_) {
                        assign(nd, i, j, false);
                        changed = true;
                    } else if (lb_absent > best_) {
                        assign(nd, i, j, true);
                        changed = true;
                    } else {
                        const std::int64_t score = lb_present + lb_absent;
                        if (score > pick_score) {
                            pick_score = score;
                            pick_i = i;
                            pick_j = j;
                            pick_present_first = lb_present <= lb_absent;
                        }
                    }
                }
            if (nd.unassigned == 0) {
                lb = bound(nd);
                if (lb <= best_) record(nd.gmin, lb);
                return;
            }
        }
        if (pick_i < 0) return;
        for (int pass = 0; pass < 2 && !deadline_hit_; ++pass) {
            const bool present = (pass == 0) ? pick_present_first : !pick_present_first;
            BBNode child = nd;
            assign(child, pick_i, pick_j, present);
            dfs(std::move(child));
        }
    }

    const WeightTables& t_;
    int n_, u_;
    const SolverOptions& options_;
    std::int64_t& best_;
    std::vector<std::pair<SystemGraph, int>>& sols_;
    bool& truncated_;
    bool& deadline_hit_;
    unsigned tick_ = 0;
};

}  // namespace

std::int64_t cost_milli(const SystemGraph& g, int u, const WeightedMeasurement& w) {
    if (g.num_nodes() != w.num_nodes())
        throw std::invalid_argument("cost: node count mismatch");
    const MeasurementGraph m = undersample(g, u);
    const int n = g.num_nodes();
    std::int64_t c = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& d = w.directed(i, j);
            if (d.present != m.directed(i, j)) c += to_milli(d.weight);
            if (i < j) {
                const auto& b = w.bidirected(i, j);
                if (b.present != m.bidirected(i, j)) c += to_milli(b.weight);
            }
        }
    return c;
}

double cost(const SystemGraph& g, int u, const WeightedMeasurement& w) {
    return static_cast<double>(cost_milli(g, u, w)) / 1000.0;
}

OptimalResult optimize(const WeightedMeasurement& w, const USpec& uspec,
                       const SolverOptions& options) {
    const WeightTables tables(w);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::vector<std::pair<SystemGraph, int>> sols;
    bool truncated = false, deadline_hit = false;

    // seed the incumbent with the empty graph so pruning bites immediately;
    // the search re-discovers it whenever it is optimal
    {
        SystemGraph empty(w.num_nodes());
        for (int u = uspec.lo; u <= uspec.hi; ++u)
            best = std::min(best, cost_milli(empty, u, w));
    }
    for (int u = uspec.lo; u <= uspec.hi && !deadline_hit; ++u) {
        OptimalSearch search(tables, u, options, best, sols, truncated, deadline_hit);
        search.run();
    }

    OptimalResult out;
    out.min_cost_milli = best;
    out.min_cost = static_cast<double>(best) / 1000.0;
    out.complete = !truncated && !deadline_hit;
    std::sort(sols.begin(), sols.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first.lex_less(b.first);
    });
    out.solutions.reserve(sols.size());
    for (auto& [g, u] : sols)
        out.solutions.emplace_back(std::move(g), u, static_cast<double>(best) / 1000.0);
    return out;
}

std::string emit_weighted_encoding(const WeightedMeasurement& w, const USpec& uspec) {
    const int n = w.num_nodes();
    std::ostringstream os;
    for (int i = 1; i <= n; ++i) os << "node(" << i << ").\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& d = w.directed(i, j);
            os << (d.present ? "edgeh(" : "no_edgeh(") << i + 1 << "," << j + 1 << ","
               << to_milli(d.weight) << ").\n";
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& b = w.bidirected(i, j);
            os << (b.present ? "confh(" : "no_confh(") << i + 1 << "," << j + 1 << ","
               << to_milli(b.weight) << ").\n";
        }
    if (uspec.is_fixed()) {
        os << "u(" << uspec.lo << ").\n";
    } else {
        os << "urange(" << uspec.lo << ".." << uspec.hi << ").\n";
        os << "1 { u(U): urange(U) } 1.\n";
    }
    os << "{ edge1(X,Y) } :- node(X), node(Y).\n";
    os << "path(X,Y,1) :- edge1(X,Y).\n";
    os << "path(X,Y,L) :- path(X,Z,L-1), edge1(Z,Y), L <= U, u(U).\n";
    os << "edgeu(X,Y) :- path(X,Y,L), u(L).\n";
    os << "confu(X,Y) :- path(Z,X,L), path(Z,Y,L), node(X;Y;Z), X < Y, L < U, u(U).\n";
    os << ":~ edgeh(X,Y,W), not edgeu(X,Y). [W,X,Y,1]\n";
    os << ":~ no_edgeh(X,Y,W), edgeu(X,Y). [W,X,Y,1]\n";
    os << ":~ confh(X,Y,W), not confu(X,Y). [W,X,Y,2]\n";
    os << ":~ no_confh(X,Y,W), confu(X,Y). [W,X,Y,2]\n";
    return os.str();
}

}  // namespace usgraph
