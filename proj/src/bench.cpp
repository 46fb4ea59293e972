#include "usgraph/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "usgraph/estimator.hpp"
#include "usgraph/simulator.hpp"

namespace usgraph {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RateStats rates(long tp, long fn, long fp, long tn) {
    RateStats r;
    if (tp + fn > 0) {
        r.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
        r.tpr_defined = true;
    }
    if (fp + tn > 0) {
        r.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
        r.fpr_defined = true;
    }
    return r;
}

}  // namespace

AccuracyReport mean_solution_accuracy(const std::vector<SystemGraph>& solutions,
                                      const SystemGraph& truth) {
    AccuracyReport rep;
    if (solutions.empty()) return rep;
    const int n = truth.num_nodes();
    double tpr_sum = 0.0, fpr_sum = 0.0;
    bool tpr_def = true, fpr_def = true;
    for (const SystemGraph& g : solutions) {
        if (g.num_nodes() != n) throw std::invalid_argument("solution/truth size mismatch");
        long tp = 0, fn = 0, fp = 0, tn = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const bool t = truth.edge(i, j), p = g.edge(i, j);
                if (t && p) ++tp;
                else if (t) ++fn;
                else if (p) ++fp;
                else ++tn;
            }
        const RateStats r = rates(tp, fn, fp, tn);
        tpr_def = tpr_def && r.tpr_defined;
        fpr_def = fpr_def && r.fpr_defined;
        tpr_sum += r.tpr;
        fpr_sum += r.fpr;
    }
    rep.defined = true;
    rep.g1_directed.tpr = tpr_sum / static_cast<double>(solutions.size());
    rep.g1_directed.fpr = fpr_sum / static_cast<double>(solutions.size());
    rep.g1_directed.tpr_defined = tpr_def;
    rep.g1_directed.fpr_defined = fpr_def;
    return rep;
}

AccuracyReport mean_solution_accuracy(const SolutionSet& s, const SystemGraph& truth) {
    std::vector<SystemGraph> gs;
    gs.reserve(s.solutions.size());
    for (const auto& [g, u] : s.solutions) gs.push_back(g);
    return mean_solution_accuracy(gs, truth);
}

AccuracyReport mean_solution_accuracy(const OptimalResult& r, const SystemGraph& truth) {
    std::vector<SystemGraph> gs;
    gs.reserve(r.solutions.size());
    for (const auto& [g, u, c] : r.solutions) gs.push_back(g);
    return mean_solution_accuracy(gs, truth);
}

RateStats structure_directed_accuracy(const WeightedMeasurement& h, const MeasurementGraph& truth) {
    long tp = 0, fn = 0, fp = 0, tn = 0;
    const int n = truth.num_nodes();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const bool t = truth.directed(i, j), p = h.directed(i, j).present;
            if (t && p) ++tp;
            else if (t) ++fn;
            else if (p) ++fp;
            else ++tn;
        }
    return rates(tp, fn, fp, tn);
}

RateStats structure_bidirected_accuracy(const WeightedMeasurement& h,
                                        const MeasurementGraph& truth) {
    long tp = 0, fn = 0, fp = 0, tn = 0;
    const int n = truth.num_nodes();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool t = truth.bidirected(i, j), p = h.bidirected(i, j).present;
            if (t && p) ++tp;
            else if (t) ++fn;
            else if (p) ++fp;
            else ++tn;
        }
    return rates(tp, fn, fp, tn);
}

namespace {

struct InstanceTask {
    std::string id;
    int n;
    USpec uspec;
    bool use_density;       // else degree
    double density_or_degree;
    int samples;            // 0: exact-H task
    std::string scheme;     // "exact", "uniform", "pb"
    double param;
    std::size_t cap;
    double timeout_seconds;
    std::uint64_t seed;
    int gen_u = 2;  // rate used to produce the ground-truth measurement graph
};

BenchRecord run_instance(const InstanceTask& t) {
    BenchRecord rec;
    rec.instance_id = t.id;
    rec.n = t.n;
    rec.u_lo = t.uspec.lo;
    rec.u_hi = t.uspec.hi;
    rec.density_or_degree = t.density_or_degree;
    rec.samples = t.samples;
    rec.scheme = t.scheme;
    rec.param = t.param;

    GenConfig gen;
    gen.n = t.n;
    gen.seed = t.seed;
    if (t.use_density)
        gen.density = t.density_or_degree;
    else
        gen.avg_degree = t.density_or_degree;
    const SystemGraph truth = random_connected_graph(gen);
    const int u_true = t.gen_u;
    const MeasurementGraph gu = undersample(truth, u_true);

    SolverOptions options;
    options.cap = t.cap;
    const auto start = Clock::now();
    if (t.timeout_seconds > 0)
        options.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(t.timeout_seconds));

    if (t.scheme == "exact") {
        const EstimatedStructure h = EstimatedStructure::from_measurement(gu);
        const SolutionSet sols = solve(h, t.uspec, options);
        rec.solution_count = sols.solutions.size();
        rec.complete = sols.complete;
        rec.min_cost = 0.0;
        rec.accuracy = mean_solution_accuracy(sols, truth);
    } else {
        const VarModel model = random_var(truth, 1.0, mix(t.seed ^ 0x7661724dULL));
        const int system_samples = (t.samples - 1) * u_true + 1;
        const TimeSeries sys = simulate(model, system_samples, kDefaultBurnIn,
                                        mix(t.seed ^ 0x73696dULL));
        const TimeSeries ts = subsample_series(sys, u_true);
        const TestConfig cfg = t.scheme == "uniform" ? TestConfig::uniform(t.param)
                                                     : TestConfig::pseudo_boolean(t.param);
        const WeightedMeasurement w = estimate_structure(ts, cfg);
        const OptimalResult res = optimize(w, t.uspec, options);
        rec.solution_count = res.solutions.size();
        rec.complete = res.complete;
        rec.min_cost = res.min_cost;
        rec.accuracy = mean_solution_accuracy(res, truth);
        rec.accuracy.h_directed = structure_directed_accuracy(w, gu);
        rec.accuracy.h_bidirected = structure_bidirected_accuracy(w, gu);
    }
    const auto stop = Clock::now();
    rec.wall_seconds = std::chrono::duration<double>(stop - start).count();
    rec.timed_out = !rec.complete && t.timeout_seconds > 0 && rec.wall_seconds >= t.timeout_seconds;
    return rec;
}

int worker_count(const ExperimentSpec& spec) {
    if (const char* env = std::getenv("USGRAPH_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (spec.workers > 0) return spec.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

double default_timeout(const ExperimentSpec& spec) {
    if (const char* env = std::getenv("USGRAPH_TIMEOUT")) {
        const double v = std::atof(env);
        if (v > 0) return v;
    }
    return spec.timeout_seconds;
}

}  // namespace

std::vector<BenchRecord> run_experiment(const ExperimentSpec& spec) {
    std::vector<InstanceTask> tasks;
    const double timeout = default_timeout(spec);

    auto push_tasks = [&](const std::string& tag, int n, USpec uspec, bool use_density,
                          double dd, int samples, const std::string& scheme, double param) {
        for (int k = 0; k < spec.instances; ++k) {
            InstanceTask t;
            std::ostringstream id;
            id << spec.protocol << ":" << tag << ":" << k;
            t.id = id.str();
            t.n = n;
            t.uspec = uspec;
            t.use_density = use_density;
            t.density_or_degree = dd;
            t.samples = samples;
            t.scheme = scheme;
            t.param = param;
            t.cap = spec.cap;
            t.timeout_seconds = timeout;
            t.seed = mix(mix(spec.seed) ^ mix(std::hash<std::string>{}(t.id)));
            t.gen_u = t.uspec.is_fixed() ? t.uspec.lo : spec.u;
            tasks.push_back(std::move(t));
        }
    };

    auto grid_or = [&](std::vector<double> def) {
        return spec.grid.empty() ? def : spec.grid;
    };

    if (spec.protocol == "fig2-density") {
        const int n = spec.n > 0 ? spec.n : 10;
        for (double d : grid_or({0.1, 0.2, 0.3, 0.4, 0.5}))
            push_tasks("d" + std::to_string(d), n, USpec::fixed(spec.u), true, d, 0, "exact", 0.0);
    } else if (spec.protocol == "fig2-nodes") {
        for (double nn : grid_or({5, 6, 7, 8, 9, 10}))
            push_tasks("n" + std::to_string(static_cast<int>(nn)), static_cast<int>(nn),
                       USpec::fixed(spec.u), false, spec.degree, 0, "exact", 0.0);
    } else if (spec.protocol == "fig3-density") {
        const int n = spec.n > 0 ? spec.n : 8;
        for (double d : grid_or({0.1, 0.2, 0.3, 0.4, 0.5}))
            push_tasks("d" + std::to_string(d), n, USpec::fixed(spec.u), true, d, 0, "exact", 0.0);
    } else if (spec.protocol == "fig3-urange") {
        for (double nn : grid_or({4, 5, 6}))
            push_tasks("n" + std::to_string(static_cast<int>(nn)), static_cast<int>(nn),
                       USpec::range(1, 5), false, spec.degree, 0, "exact", 0.0);
    } else if (spec.protocol == "fig4-accuracy") {
        const int n = spec.n > 0 ? spec.n : 6;
        for (double p : grid_or({0.2, 0.3, 0.4, 0.5}))
            push_tasks("p" + std::to_string(p), n, USpec::fixed(spec.u), false, spec.degree,
                       spec.samples, spec.scheme, p);
    } else if (spec.protocol == "fig5-runtime") {
        const int n = spec.n > 0 ? spec.n : 7;
        for (double s : grid_or({200, 500, 1000}))
            push_tasks("N" + std::to_string(static_cast<int>(s)), n, USpec::fixed(spec.u), false,
                       spec.degree, static_cast<int>(s), spec.scheme, spec.param);
    } else {
        throw std::invalid_argument("unknown protocol '" + spec.protocol + "'");
    }

    std::vector<BenchRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const int workers = worker_count(spec);
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                records[i] = run_instance(tasks[i]);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(tasks.size());
                return;
            }
        }
    };
    if (workers <= 1 || tasks.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return records;
}

namespace {

void put_rate(std::ostream& out, const RateStats& r) {
    if (r.tpr_defined)
        out << "," << r.tpr;
    else
        out << ",na";
    if (r.fpr_defined)
        out << "," << r.fpr;
    else
        out << ",na";
}

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << "instance,n,u_lo,u_hi,density_or_degree,samples,scheme,param,min_cost,solutions,"
           "complete,timed_out,h_dir_tpr,h_dir_fpr,h_bid_tpr,h_bid_fpr,g1_tpr,g1_fpr\n";
    for (const BenchRecord& r : records) {
        buf << r.instance_id << "," << r.n << "," << r.u_lo << "," << r.u_hi << ","
            << r.density_or_degree << "," << r.samples << "," << r.scheme << "," << r.param << ","
            << r.min_cost << "," << r.solution_count << "," << (r.complete ? 1 : 0) << ","
            << (r.timed_out ? 1 : 0);
        if (r.accuracy.defined) {
            put_rate(buf, r.accuracy.h_directed);
            put_rate(buf, r.accuracy.h_bidirected);
            put_rate(buf, r.accuracy.g1_directed);
        } else {
            buf << ",na,na,na,na,na,na";
        }
        buf << "\n";
    }
    out << buf.str();
}

void write_bench_timings_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    std::ostringstream buf;
    buf << std::setprecision(6);
    buf << "instance,wall_seconds\n";
    for (const BenchRecord& r : records) buf << r.instance_id << "," << r.wall_seconds << "\n";
    out << buf.str();
}

}  // namespace usgraph
