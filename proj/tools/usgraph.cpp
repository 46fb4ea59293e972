#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "usgraph/bench.hpp"
#include "usgraph/estimator.hpp"
#include "usgraph/io.hpp"
#include "usgraph/optimizer.hpp"
#include "usgraph/simulator.hpp"
#include "usgraph/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTimeout = 3;

usgraph::USpec parse_uspec(int u, const std::string& range) {
    if (u > 0) return usgraph::USpec::fixed(u);
    if (!range.empty()) {
        const auto colon = range.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--u-range", "expected <lo>:<hi>");
        return usgraph::USpec::range(std::stoi(range.substr(0, colon)),
                                     std::stoi(range.substr(colon + 1)));
    }
    return usgraph::USpec::range(1, 5);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        auto out = open_out(path);
        out << text;
    }
}

usgraph::SolverOptions make_options(std::size_t cap, double timeout_seconds) {
    usgraph::SolverOptions options;
    options.cap = cap;
    if (timeout_seconds > 0)
        options.deadline = std::chrono::steady_clock::now() +
                           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(timeout_seconds));
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"System-timescale causal graphs from subsampled measurement structures"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "random graph, VAR model and data");
    int gen_n = 6;
    double gen_density = 0.0, gen_degree = 0.0, gen_noise = 1.0;
    std::uint64_t gen_seed = 1;
    int gen_samples = 0;
    std::string gen_out, gen_data_out;
    gen->add_option("--nodes", gen_n, "node count");
    gen->add_option("--density", gen_density, "edge density in (0,1]");
    gen->add_option("--degree", gen_degree, "average out-degree");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--samples", gen_samples, "also simulate this many system-timescale rows");
    gen->add_option("--noise", gen_noise, "innovation standard deviation");
    gen->add_option("--out", gen_out, "graph output path (default stdout)");
    gen->add_option("--data-out", gen_data_out, "CSV output path for simulated data");

    // subsample
    auto* sub = app.add_subcommand("subsample", "apply the undersampling map to a graph or series");
    std::string sub_graph, sub_data, sub_out;
    int sub_u = 2;
    sub->add_option("--graph", sub_graph, "system graph input");
    sub->add_option("--data", sub_data, "time series CSV input");
    sub->add_option("--u", sub_u, "subsampling rate");
    sub->add_option("--out", sub_out, "output path (default stdout)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "enumerate consistent system graphs (Task 1)");
    std::string solve_h, solve_out, solve_urange;
    int solve_u = 0;
    std::size_t solve_cap = usgraph::kDefaultSolutionCap;
    double solve_timeout = 0.0;
    solve_cmd->add_option("--structure", solve_h, "estimated structure input")->required();
    solve_cmd->add_option("--u", solve_u, "fixed subsampling rate");
    solve_cmd->add_option("--u-range", solve_urange, "subsampling range <lo>:<hi> (default 1:5)");
    solve_cmd->add_option("--max-solutions", solve_cap, "solution cap");
    solve_cmd->add_option("--timeout", solve_timeout, "deadline in seconds");
    solve_cmd->add_option("--out", solve_out, "solutions output path (default stdout)");

    // estimate
    auto* est = app.add_subcommand("estimate", "weighted structure from time series data");
    std::string est_data, est_out, est_scheme = "uniform";
    double est_param = 0.05;
    est->add_option("--data", est_data, "time series CSV input")->required();
    est->add_option("--scheme", est_scheme, "uniform | pb")
        ->check(CLI::IsMember({"uniform", "pb"}));
    est->add_option("--param", est_param, "alpha (uniform) or prior independence (pb)");
    est->add_option("--out", est_out, "weighted structure output path (default stdout)");

    // optimize
    auto* opt = app.add_subcommand("optimize", "minimum-conflict system graphs (Task 2)");
    std::string opt_w, opt_out, opt_urange;
    int opt_u = 0;
    std::size_t opt_cap = usgraph::kDefaultSolutionCap;
    double opt_timeout = 0.0;
    opt->add_option("--weights", opt_w, "weighted structure input")->required();
    opt->add_option("--u", opt_u, "fixed subsampling rate");
    opt->add_option("--u-range", opt_urange, "subsampling range <lo>:<hi> (default 1:5)");
    opt->add_option("--max-solutions", opt_cap, "solution cap");
    opt->add_option("--timeout", opt_timeout, "deadline in seconds");
    opt->add_option("--out", opt_out, "solutions output path (default stdout)");

    // encode
    auto* enc = app.add_subcommand("encode", "export the logic-program encoding");
    std::string enc_h, enc_w, enc_out, enc_urange;
    int enc_u = 0;
    enc->add_option("--structure", enc_h, "estimated structure input (hard constraints)");
    enc->add_option("--weights", enc_w, "weighted structure input (weak constraints)");
    enc->add_option("--u", enc_u, "fixed subsampling rate");
    enc->add_option("--u-range", enc_urange, "subsampling range <lo>:<hi> (default 1:5)");
    enc->add_option("--out", enc_out, "output path (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "canned experiment protocols");
    usgraph::ExperimentSpec spec;
    std::string bench_out = "bench.csv", bench_timings;
    std::string bench_grid;
    bench->add_option("--protocol", spec.protocol,
                      "fig2-density | fig2-nodes | fig3-density | fig3-urange | "
                      "fig4-accuracy | fig5-runtime")
        ->required();
    bench->add_option("--seed", spec.seed, "experiment seed");
    bench->add_option("--instances", spec.instances, "instances per grid point");
    bench->add_option("--n", spec.n, "node count override");
    bench->add_option("--u", spec.u, "subsampling rate");
    bench->add_option("--grid", bench_grid, "comma-separated protocol axis override");
    bench->add_option("--degree", spec.degree, "average degree for data protocols");
    bench->add_option("--samples", spec.samples, "measurement sample count");
    bench->add_option("--max-solutions", spec.cap, "solution cap");
    bench->add_option("--timeout", spec.timeout_seconds, "per-instance timeout seconds");
    bench->add_option("--scheme", spec.scheme, "uniform | pb")
        ->check(CLI::IsMember({"uniform", "pb"}));
    bench->add_option("--param", spec.param, "test parameter");
    bench->add_option("--workers", spec.workers, "worker pool width (0 = cores)");
    bench->add_option("--out", bench_out, "records CSV path");
    bench->add_option("--timings-out", bench_timings, "timings CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            usgraph::GenConfig cfg;
            cfg.n = gen_n;
            cfg.seed = gen_seed;
            if (gen_density > 0) cfg.density = gen_density;
            if (gen_degree > 0) cfg.avg_degree = gen_degree;
            if (!cfg.density && !cfg.avg_degree) cfg.avg_degree = 3.0;
            const usgraph::SystemGraph g = usgraph::random_connected_graph(cfg);
            std::ostringstream gs;
            usgraph::write_system_graph(gs, g);
            write_or_print(gen_out, gs.str());
            if (gen_samples > 0) {
                const auto model = usgraph::random_var(g, gen_noise, cfg.seed);
                const auto ts = usgraph::simulate(model, gen_samples, usgraph::kDefaultBurnIn,
                                                  cfg.seed);
                std::ostringstream ds;
                usgraph::write_csv_matrix(ds, ts);
                write_or_print(gen_data_out, ds.str());
            }
        } else if (*sub) {
            if (sub_graph.empty() == sub_data.empty())
                throw CLI::ValidationError("subsample", "pass exactly one of --graph / --data");
            std::ostringstream os;
            if (!sub_graph.empty()) {
                const auto g = usgraph::read_system_graph_file(sub_graph);
                usgraph::write_measurement_graph(os, usgraph::undersample(g, sub_u));
            } else {
                const auto ts = usgraph::read_csv_matrix_file(sub_data);
                usgraph::write_csv_matrix(os, usgraph::subsample_series(ts, sub_u));
            }
            write_or_print(sub_out, os.str());
        } else if (*solve_cmd) {
            const auto h = usgraph::read_estimated_structure_file(solve_h);
            const auto uspec = parse_uspec(solve_u, solve_urange);
            const auto sols = usgraph::solve(h, uspec, make_options(solve_cap, solve_timeout));
            std::ostringstream os;
            usgraph::write_solutions(os, sols);
            write_or_print(solve_out, os.str());
            std::cerr << "solutions: " << sols.solutions.size()
                      << (sols.complete ? " (complete)" : " (truncated)") << "\n";
            if (!sols.complete && solve_timeout > 0) return kExitTimeout;
        } else if (*est) {
            const auto ts = usgraph::read_csv_matrix_file(est_data);
            const auto cfg = est_scheme == "uniform" ? usgraph::TestConfig::uniform(est_param)
                                                     : usgraph::TestConfig::pseudo_boolean(est_param);
            const auto w = usgraph::estimate_structure(ts, cfg);
            std::ostringstream os;
            usgraph::write_weighted_measurement(os, w);
            write_or_print(est_out, os.str());
        } else if (*opt) {
            const auto w = usgraph::read_weighted_measurement_file(opt_w);
            const auto uspec = parse_uspec(opt_u, opt_urange);
            const auto res = usgraph::optimize(w, uspec, make_options(opt_cap, opt_timeout));
            std::ostringstream os;
            usgraph::write_solutions(os, res);
            write_or_print(opt_out, os.str());
            std::cerr << "min_cost: " << res.min_cost << ", solutions: " << res.solutions.size()
                      << (res.complete ? " (complete)" : " (truncated)") << "\n";
            if (!res.complete && opt_timeout > 0) return kExitTimeout;
        } else if (*enc) {
            if (enc_h.empty() == enc_w.empty())
                throw CLI::ValidationError("encode", "pass exactly one of --structure / --weights");
            const auto uspec = parse_uspec(enc_u, enc_urange);
            std::string text;
            if (!enc_h.empty())
                text = usgraph::emit_encoding(usgraph::read_estimated_structure_file(enc_h), uspec);
            else
                text = usgraph::emit_weighted_encoding(
                    usgraph::read_weighted_measurement_file(enc_w), uspec);
            write_or_print(enc_out, text);
        } else if (*bench) {
            if (!bench_grid.empty()) {
                std::istringstream gs(bench_grid);
                std::string cell;
                while (std::getline(gs, cell, ',')) spec.grid.push_back(std::stod(cell));
            }
            const auto records = usgraph::run_experiment(spec);
            {
                auto out = open_out(bench_out);
                usgraph::write_bench_csv(out, records);
            }
            if (!bench_timings.empty()) {
                auto out = open_out(bench_timings);
                usgraph::write_bench_timings_csv(out, records);
            }
            std::cerr << "records: " << records.size() << "\n";
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
