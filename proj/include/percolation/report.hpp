#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "percolation/exact.hpp"
#include "percolation/graph.hpp"
#include "percolation/progressive.hpp"

namespace percolation {

/// Shortest-exact decimal with 17 significant digits ("%.17g").
std::string format_double(double x);

/// One `original_id \t value` row per vertex, in dense-id order.
void write_centrality_tsv(const Graph& g, std::span<const double> values, std::ostream& out);
std::vector<std::pair<OriginalId, double>> read_centrality_tsv(std::istream& in);

nlohmann::json exact_sidecar(const Graph& g, const ExactResult& result, double elapsed);

nlohmann::json to_json(const RunReport& report, const Graph& g);
/// Inverse of to_json; sample logs are not serialised.
RunReport run_report_from_json(const nlohmann::json& j);

/// States file: either `original_id state` per line, or one state per line
/// in vertex order (dense ids, i.e. first appearance in the edge list).
/// '#' starts a comment line. Throws ParseError.
std::vector<double> load_states(std::istream& in, const Graph& g);

/// "random:SEED" or a path to a states file.
std::vector<double> resolve_states(const std::string& source, const Graph& g);

struct CompareRow {
  std::string algorithm;
  double epsilon = 0.0;
  std::size_t rep = 0;
  std::size_t samples = 0;
  double seconds = 0.0;
  std::optional<double> sd;   ///< max_v |estimate - exact|
  std::optional<double> mad;  ///< mean_v |estimate - exact|
};

inline constexpr const char* kCompareHeader = "algorithm,epsilon,rep,samples,seconds,sd,mad";
inline constexpr const char* kAggregateHeader =
    "algorithm,epsilon,reps,samples_mean,samples_std,seconds_mean,seconds_std,sd_mean,sd_std,"
    "mad_mean,mad_std";

void write_compare_csv(std::span<const CompareRow> rows, std::ostream& out);
/// Mean and population standard deviation per (algorithm, epsilon), in first
/// appearance order. Missing sd/mad stay empty.
void write_aggregate_csv(std::span<const CompareRow> rows, std::ostream& out);

/// max and mean absolute difference.
std::pair<double, double> deviation(std::span<const double> estimate, std::span<const double> exact);

}  // namespace percolation
