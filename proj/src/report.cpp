#include "percolation/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "percolation/errors.hpp"

namespace percolation {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_centrality_tsv(const Graph& g, std::span<const double> values, std::ostream& out) {
  require(values.size() == g.num_vertices(), "one value per vertex required");
  for (Vertex v = 0; v < values.size(); ++v)
    out << g.original_id(v) << '\t' << format_double(values[v]) << '\n';
}

std::vector<std::pair<OriginalId, double>> read_centrality_tsv(std::istream& in) {
  std::vector<std::pair<OriginalId, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected `id<TAB>value`", lineno);
    OriginalId id{};
    double value{};
    auto r1 = std::from_chars(line.data(), line.data() + tab, id);
    auto r2 = std::from_chars(line.data() + tab + 1, line.data() + line.size(), value);
    if (r1.ec != std::errc{} || r2.ec != std::errc{}) throw ParseError("malformed row", lineno);
    rows.emplace_back(id, value);
  }
  return rows;
}

json exact_sidecar(const Graph& g, const ExactResult& result, double elapsed) {
  return json{{"n", g.num_vertices()}, {"m", g.num_edges()},   {"rho", result.rho},
              {"diameter", result.diameter}, {"sum_p", result.sum_p}, {"sum_b", result.sum_b},
              {"elapsed", elapsed}};
}

json to_json(const RunReport& r, const Graph& g) {
  json classes = json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"size", c.size}, {"var_bound", c.var_bound}, {"wimpy", c.wimpy},
                       {"mcera", c.mcera}, {"xi", c.xi}});
  const auto& c = r.config;
  std::vector<OriginalId> ids(g.original_ids().begin(), g.original_ids().end());
  return json{
      {"algorithm", r.algorithm},
      {"samples", r.samples},
      {"bootstrap_samples", r.bootstrap_samples},
      {"iterations", r.iterations},
      {"ceiling", r.ceiling},
      {"max_xi", r.max_xi},
      {"rho_estimate", r.rho_estimate},
      {"rho_substituted", r.rho_substituted},
      {"degenerate_states", r.degenerate_states},
      {"capped_bags", r.capped_bags},
      {"stop", to_string(r.stop)},
      {"seconds_bootstrap", r.seconds_bootstrap},
      {"seconds_estimation", r.seconds_estimation},
      {"seed", r.seed},
      {"config",
       {{"epsilon", c.epsilon}, {"delta", c.delta}, {"mc_trials", c.mc_trials}, {"ratio", c.ratio},
        {"beta", c.beta}, {"bag_cap", c.bag_cap}, {"threads", c.threads}}},
      {"classes", classes},
      {"ids", ids},
      {"estimates", r.estimates},
  };
}

RunReport run_report_from_json(const json& j) {
  RunReport r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.samples = j.at("samples").get<std::size_t>();
  r.bootstrap_samples = j.at("bootstrap_samples").get<std::size_t>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.ceiling = j.at("ceiling").get<std::size_t>();
  r.max_xi = j.at("max_xi").get<double>();
  r.rho_estimate = j.at("rho_estimate").get<double>();
  r.rho_substituted = j.at("rho_substituted").get<bool>();
  r.degenerate_states = j.at("degenerate_states").get<bool>();
  r.capped_bags = j.at("capped_bags").get<std::size_t>();
  r.stop = j.at("stop").get<std::string>() == "eps-met" ? StopReason::kEpsilonMet : StopReason::kCeilingHit;
  r.seconds_bootstrap = j.at("seconds_bootstrap").get<double>();
  r.seconds_estimation = j.at("seconds_estimation").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  const auto& c = j.at("config");
  r.config.epsilon = c.at("epsilon").get<double>();
  r.config.delta = c.at("delta").get<double>();
  r.config.mc_trials = c.at("mc_trials").get<std::size_t>();
  r.config.ratio = c.at("ratio").get<double>();
  r.config.beta = c.at("beta").get<double>();
  r.config.bag_cap = c.at("bag_cap").get<std::size_t>();
  r.config.threads = c.at("threads").get<unsigned>();
  for (const auto& k : j.at("classes"))
    r.classes.push_back({k.at("size").get<std::size_t>(), k.at("var_bound").get<double>(),
                         k.at("wimpy").get<double>(), k.at("mcera").get<double>(), k.at("xi").get<double>()});
  r.estimates = j.at("estimates").get<std::vector<double>>();
  return r;
}

std::vector<double> load_states(std::istream& in, const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::map<OriginalId, Vertex> dense;
  for (Vertex v = 0; v < n; ++v) dense.emplace(g.original_id(v), v);

  std::vector<double> states(n, 0.0);
  std::vector<char> seen(n, 0);
  std::size_t positional = 0, keyed = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::vector<std::string> tok;
    for (std::string t; tokens >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() > 2) throw ParseError("expected `state` or `id state`", lineno);

    auto parse_state = [&](const std::string& s) {
      double x{};
      auto res = std::from_chars(s.data(), s.data() + s.size(), x);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ParseError("invalid state value", lineno);
      if (!(x >= 0.0 && x <= 1.0)) throw ParseError("state outside [0, 1]", lineno);
      return x;
    };
    Vertex v;
    if (tok.size() == 1) {
      if (positional >= n) throw ParseError("more states than vertices", lineno);
      v = static_cast<Vertex>(positional++);
    } else {
      OriginalId id{};
      auto res = std::from_chars(tok[0].data(), tok[0].data() + tok[0].size(), id);
      if (res.ec != std::errc{} || res.ptr != tok[0].data() + tok[0].size())
        throw ParseError("invalid vertex id", lineno);
      auto it = dense.find(id);
      if (it == dense.end()) throw ParseError("vertex id not in graph", lineno);
      v = it->second;
      ++keyed;
    }
    if (positional > 0 && keyed > 0) throw ParseError("mixed positional and keyed states", lineno);
    if (seen[v]) throw ParseError("duplicate state for vertex", lineno);
    seen[v] = 1;
    states[v] = parse_state(tok.back());
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0)
    throw ParseError("missing states for some vertices", lineno);
  return states;
}

std::vector<double> resolve_states(const std::string& source, const Graph& g) {
  constexpr std::string_view prefix = "random:";
  if (source.rfind(prefix, 0) == 0) {
    std::uint64_t seed{};
    const char* b = source.data() + prefix.size();
    const char* e = source.data() + source.size();
    auto res = std::from_chars(b, e, seed);
    if (res.ec != std::errc{} || res.ptr != e) throw std::invalid_argument("invalid seed in " + source);
    return random_states(g.num_vertices(), seed);
  }
  std::ifstream in(source);
  if (!in) throw std::runtime_error("cannot open states file " + source);
  return load_states(in, g);
}

void write_compare_csv(std::span<const CompareRow> rows, std::ostream& out) {
  out << kCompareHeader << '\n';
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  for (const auto& r : rows)
    out << r.algorithm << ',' << format_double(r.epsilon) << ',' << r.rep << ',' << r.samples << ','
        << format_double(r.seconds) << ',' << opt(r.sd) << ',' << opt(r.mad) << '\n';
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

void write_aggregate_csv(std::span<const CompareRow> rows, std::ostream& out) {
  out << kAggregateHeader << '\n';
  std::vector<std::pair<std::string, double>> keys;
  for (const auto& r : rows) {
    std::pair<std::string, double> k{r.algorithm, r.epsilon};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  for (const auto& [alg, eps] : keys) {
    std::vector<double> samples, seconds, sd, mad;
    for (const auto& r : rows) {
      if (r.algorithm != alg || r.epsilon != eps) continue;
      samples.push_back(static_cast<double>(r.samples));
      seconds.push_back(r.seconds);
      if (r.sd) sd.push_back(*r.sd);
      if (r.mad) mad.push_back(*r.mad);
    }
    auto cols = [&](const std::vector<double>& xs) {
      if (xs.empty()) return std::string(",");
      auto [m, s] = mean_std(xs);
      return format_double(m) + ',' + format_double(s);
    };
    out << alg << ',' << format_double(eps) << ',' << samples.size() << ',' << cols(samples) << ','
        << cols(seconds) << ',' << cols(sd) << ',' << cols(mad) << '\n';
  }
}

std::pair<double, double> deviation(std::span<const double> estimate, std::span<const double> exact) {
  require(estimate.size() == exact.size(), "size mismatch");
  double mx = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    double d = std::abs(estimate[i] - exact[i]);
    mx = std::max(mx, d);
    sum += d;
  }
  return {mx, exact.empty() ? 0.0 : sum / static_cast<double>(exact.size())};
}

}  // namespace percolation
