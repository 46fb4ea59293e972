#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "usgraph/optimizer.hpp"
#include "usgraph/solver.hpp"
#include "usgraph/weighted.hpp"

namespace usgraph {

using TimeSeries = Eigen::MatrixXd;  // rows = consecutive samples, cols = variables

// Text graph format, one statement per line, 1-based node indices:
//   n <count>
//   edge <i> <j>          directed i -> j
//   biedge <i> <j>        bidirected i <-> j
//   noedge <i> <j>        (estimated structures) directed edge absent
//   nobiedge <i> <j>      (estimated structures) bidirected edge absent
// Lines beginning with '#' are comments. Pairs not mentioned are unknown
// for estimated structures and absent for concrete graphs.
SystemGraph read_system_graph(std::istream& in);
MeasurementGraph read_measurement_graph(std::istream& in);
EstimatedStructure read_estimated_structure(std::istream& in);

void write_system_graph(std::ostream& out, const SystemGraph& g);
void write_measurement_graph(std::ostream& out, const MeasurementGraph& m);
void write_estimated_structure(std::ostream& out, const EstimatedStructure& h);

// Weighted structure format: same statements with a trailing decimal weight;
// every ordered pair and every unordered i != j pair must appear exactly once.
WeightedMeasurement read_weighted_measurement(std::istream& in);
void write_weighted_measurement(std::ostream& out, const WeightedMeasurement& w);

// Solution blocks: `u <value>` then a graph block, blocks separated by `---`.
void write_solutions(std::ostream& out, const SolutionSet& s);
void write_solutions(std::ostream& out, const OptimalResult& r);

// Headerless CSV, one row per time point.
TimeSeries read_csv_matrix(std::istream& in);
void write_csv_matrix(std::ostream& out, const TimeSeries& m);

// Convenience file wrappers; throw std::runtime_error on open failure.
SystemGraph read_system_graph_file(const std::string& path);
EstimatedStructure read_estimated_structure_file(const std::string& path);
WeightedMeasurement read_weighted_measurement_file(const std::string& path);
TimeSeries read_csv_matrix_file(const std::string& path);

}  // namespace usgraph
