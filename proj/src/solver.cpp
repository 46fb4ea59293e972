#include "usgraph/solver.hpp"

#include <algorithm>
#include <sstream>

namespace usgraph {

namespace {

// Statement masks extracted from h for fast bound checks.
struct ConstraintMasks {
    std::vector<NodeSet> dir_present, dir_absent, bid_present, bid_absent;

    explicit ConstraintMasks(const EstimatedStructure& h) {
        const int n = h.num_nodes();
        dir_present.assign(n, {});
        dir_absent.assign(n, {});
        bid_present.assign(n, {});
        bid_absent.assign(n, {});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                switch (h.directed(i, j)) {
                    case EdgeStatus::Present: dir_present[i].set(j); break;
                    case EdgeStatus::Absent: dir_absent[i].set(j); break;
                    case EdgeStatus::Unknown: break;
                }
                if (i != j) {
                    switch (h.bidirected(i, j)) {
                        case EdgeStatus::Present: bid_present[i].set(j); break;
                        case EdgeStatus::Absent: bid_absent[i].set(j); break;
                        case EdgeStatus::Unknown: break;
                    }
                }
            }
    }

    // A present statement can no longer be satisfied under the edge-maximal graph.
    bool violates_upper(const MeasurementGraph& m) const {
        for (int i = 0; i < m.num_nodes(); ++i) {
            if ((dir_present[i] & ~m.directed_row(i)).any()) return true;
            if ((bid_present[i] & ~m.bidirected_row(i)).any()) return true;
        }
        return false;
    }

    // An absent statement is already violated under the edge-minimal graph.
    bool violates_lower(const MeasurementGraph& m) const {
        for (int i = 0; i < m.num_nodes(); ++i) {
            if ((dir_absent[i] & m.directed_row(i)).any()) return true;
            if ((bid_absent[i] & m.bidirected_row(i)).any()) return true;
        }
        return false;
    }
};

struct SearchNode {
    SystemGraph gmin, gmax;
    std::vector<std::int8_t> status;  // -1 unassigned, 0 absent, 1 present
    int unassigned = 0;
};

class ConsistentSearch {
public:
    ConsistentSearch(const EstimatedStructure& h, int u, const SolverOptions& options,
                     SolutionSet& out)
        : h_(h),
          n_(h.num_nodes()),
          u_(u),
          masks_(h),
          outdeg_rule_(u >= 2 && h.all_bidirected_absent()),
          options_(options),
          out_(out) {}

    void run() {
        SearchNode root;
        root.gmin = SystemGraph(n_);
        root.gmax = SystemGraph(n_);
        for (int i = 0; i < n_; ++i) root.gmax.row(i) = full_row();
        root.status.assign(static_cast<std::size_t>(n_) * n_, -1);
        root.unassigned = n_ * n_;
        dfs(std::move(root));
    }

    bool stopped() const { return stop_; }

private:
    NodeSet full_row() const {
        NodeSet s;
        for (int j = 0; j < n_; ++j) s.set(j);
        return s;
    }

    void assign(SearchNode& nd, int i, int j, bool present) {
        nd.status[static_cast<std::size_t>(i) * n_ + j] = present ? 1 : 0;
        --nd.unassigned;
        if (present)
            nd.gmin.set_edge(i, j);
        else
            nd.gmax.set_edge(i, j, false);
    }

    // Returns false on conflict. Runs forced assignments to fixpoint.
    bool propagate(SearchNode& nd) {
        bool changed = true;
        while (changed) {
            changed = false;
            if (outdeg_rule_) {
                // No bidirected edges allowed: every node has at most one successor.
                for (int a = 0; a < n_; ++a) {
                    const NodeSet& forced = nd.gmin.successors(a);
                    if (forced.count() >= 2) return false;
                    if (forced.count() == 1) {
                        NodeSet prune = nd.gmax.successors(a) & ~forced;
                        for (std::size_t j = prune._Find_first(); j < kMaxNodes;
                             j = prune._Find_next(j)) {
                            if (nd.status[static_cast<std::size_t>(a) * n_ + j] == -1) {
                                assign(nd, a, static_cast<int>(j), false);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if (masks_.violates_upper(undersample(nd.gmax, u_))) return false;
            if (masks_.violates_lower(undersample(nd.gmin, u_))) return false;
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    if (nd.status[static_cast<std::size_t>(i) * n_ + j] != -1) continue;
                    SystemGraph trial_min = nd.gmin;
                    trial_min.set_edge(i, j);
                    const bool bad_present = masks_.violates_lower(undersample(trial_min, u_));
                    SystemGraph trial_max = nd.gmax;
                    trial_max.set_edge(i, j, false);
                    const bool bad_absent = masks_.violates_upper(undersample(trial_max, u_));
                    if (bad_present && bad_absent) return false;
                    if (bad_present) {
                        assign(nd, i, j, false);
                        changed = true;
                    } else if (bad_absent) {
                        assign(nd, i, j, true);
                        changed = true;
                    }
                }
        }
        return true;
    }

    // Branch on an edge supporting the present-statement with the fewest
    // remaining candidate u-walks; lexicographic fallback.
    std::pair<int, bool> pick_branch(const SearchNode& nd) {
        // walk rows of gmax for lengths 1..u
        std::vector<std::vector<NodeSet>> pow;
        pow.reserve(static_cast<std::size_t>(u_));
        {
            std::vector<NodeSet> cur(static_cast<std::size_t>(n_));
            for (int i = 0; i < n_; ++i) cur[i] = nd.gmax.successors(i);
            pow.push_back(cur);
            for (int l = 2; l <= u_; ++l) {
                std::vector<NodeSet> nxt(static_cast<std::size_t>(n_));
                for (int i = 0; i < n_; ++i) {
                    NodeSet acc;
                    const NodeSet& row = pow.back()[i];
                    for (std::size_t j = row._Find_first(); j < kMaxNodes; j = row._Find_next(j))
                        acc |= nd.gmax.successors(j);
                    nxt[i] = acc;
                }
                pow.push_back(std::move(nxt));
            }
        }
        const MeasurementGraph mmin = undersample(nd.gmin, u_);
        int best_i = -1, best_j = -1;
        double best_count = 0.0;
        for (int i = 0; i < n_; ++i) {
            NodeSet unsat = masks_.dir_present[i] & ~mmin.directed_row(i);
            for (std::size_t j = unsat._Find_first(); j < kMaxNodes; j = unsat._Find_next(j)) {
                // saturating walk count i -> j of length u in gmax
                std::vector<double> cnt(static_cast<std::size_t>(n_), 0.0);
                cnt[i] = 1.0;
                for (int step = 0; step < u_; ++step) {
                    std::vector<double> nxt(static_cast<std::size_t>(n_), 0.0);
                    for (int a = 0; a < n_; ++a) {
                        if (cnt[a] == 0.0) continue;
                        const NodeSet& succ = nd.gmax.successors(a);
                        for (std::size_t b = succ._Find_first(); b < kMaxNodes;
                             b = succ._Find_next(b))
                            nxt[b] = std::min(nxt[b] + cnt[a], 1e18);
                    }
                    cnt.swap(nxt);
                }
                const double walks = cnt[j];
                if (best_i < 0 || walks < best_count) {
                    best_i = i;
                    best_j = static_cast<int>(j);
                    best_count = walks;
                }
            }
        }
        if (best_i >= 0) {
            // first unassigned edge lying on a candidate walk best_i -> best_j
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b) {
                    if (nd.status[static_cast<std::size_t>(a) * n_ + b] != -1) continue;
                    for (int k = 0; k < u_; ++k) {
                        const bool head_ok = (k == 0) ? (a == best_i) : pow[k - 1][best_i][a];
                        if (!head_ok) continue;
                        const bool tail_ok =
                            (k == u_ - 1) ? (b == best_j) : pow[u_ - 2 - k][b][best_j];
                        if (tail_ok && nd.gmax.edge(a, b)) return {a * n_ + b, true};
                    }
                }
        }
        for (int e = 0; e < n_ * n_; ++e)
            if (nd.status[e] == -1) return {e, false};
        return {-1, false};
    }

    void record(const SystemGraph& g) {
        if (!is_consistent(g, u_, h_))
            throw std::logic_error("solver produced an inconsistent graph");
        out_.solutions.emplace_back(g, u_);
        if (out_.solutions.size() > options_.cap) {
            out_.solutions.pop_back();
            out_.complete = false;
            stop_ = true;
        }
    }

    void dfs(SearchNode nd) {
        if (stop_) return;
        if (options_.deadline && (++tick_ & 0xff) == 0 &&
            std::chrono::steady_clock::now() >= *options_.deadline) {
            out_.complete = false;
            stop_ = true;
            return;
        }
        if (!propagate(nd)) return;
        if (nd.unassigned == 0) {
            record(nd.gmin);
            return;
        }
        auto [edge, prefer_present] = pick_branch(nd);
        const int i = edge / n_, j = edge % n_;
        for (int pass = 0; pass < 2 && !stop_; ++pass) {
            const bool present = (pass == 0) ? prefer_present : !prefer_present;
            SearchNode child = nd;
            assign(child, i, j, present);
            dfs(std::move(child));
        }
    }

    const EstimatedStructure& h_;
    int n_, u_;
    ConstraintMasks masks_;
    bool outdeg_rule_;
    const SolverOptions& options_;
    SolutionSet& out_;
    bool stop_ = false;
    unsigned tick_ = 0;
};

}  // namespace

SolutionSet solve(const EstimatedStructure& h, const USpec& uspec, const SolverOptions& options) {
    SolutionSet out;
    out.cap = options.cap;
    for (int u = uspec.lo; u <= uspec.hi; ++u) {
        ConsistentSearch search(h, u, options, out);
        search.run();
        if (!out.complete) break;
    }
    std::sort(out.solutions.begin(), out.solutions.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first.lex_less(b.first);
    });
    return out;
}

std::uint64_t count_solutions(const EstimatedStructure& h, const USpec& uspec) {
    if (h.num_nodes() > 20)
        throw std::invalid_argument("count_solutions: n > 20 refused (size guard)");
    SolverOptions options;
    options.cap = kUnlimited;
    const SolutionSet s = solve(h, uspec, options);
    return s.solutions.size();
}

std::string emit_encoding(const EstimatedStructure& h, const USpec& uspec) {
    const int n = h.num_nodes();
    std::ostringstream os;
    for (int i = 1; i <= n; ++i) os << "node(" << i << ").\n";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (h.directed(i, j) == EdgeStatus::Present)
                os << "edgeh(" << i + 1 << "," << j + 1 << ").\n";
            else if (h.directed(i, j) == EdgeStatus::Absent)
                os << "no_edgeh(" << i + 1 << "," << j + 1 << ").\n";
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (h.bidirected(i, j) == EdgeStatus::Present)
                os << "confh(" << i + 1 << "," << j + 1 << ").\n";
            else if (h.bidirected(i, j) == EdgeStatus::Absent)
                os << "no_confh(" << i + 1 << "," << j + 1 << ").\n";
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
    os << ":- edgeh(X,Y), not edgeu(X,Y).\n";
    os << ":- no_edgeh(X,Y), edgeu(X,Y).\n";
    os << ":- confh(X,Y), not confu(X,Y).\n";
    os << ":- no_confh(X,Y), confu(X,Y).\n";
    return os.str();
}

}  // namespace usgraph
