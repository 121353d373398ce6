#include "percolation/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "percolation/errors.hpp"
#include "percolation/rng.hpp"

namespace percolation {

McEraState::McEraState(std::size_t n, std::size_t trials, std::uint64_t lambda_seed)
    : n_(n), c_(trials), seed_(lambda_seed), sum_(n, 0.0), sq_(n, 0.0), signed_(n * trials, 0.0),
      lambda_scratch_(trials) {
  require(trials >= 1, "need at least one Monte-Carlo trial");
}

void McEraState::add_sample(const Contribution& f) {
  for (std::size_t k = 0; k < c_; ++k) lambda_scratch_[k] = rademacher(seed_, k, r_);
  add_sample(f, lambda_scratch_);
}

void McEraState::add_sample(const Contribution& f, std::span<const int> lambda) {
  require(lambda.size() == c_, "one sign per trial required");
  for (const auto& [v, value] : f) {
    sum_[v] += value;
    sq_[v] += value * value;
    double* row = signed_.data() + static_cast<std::size_t>(v) * c_;
    for (std::size_t k = 0; k < c_; ++k) row[k] += lambda[k] * value;
  }
  ++r_;
}

std::vector<ClassStatistics> class_statistics(const McEraState& state, const Partition& partition) {
  require(partition.class_of.size() == state.size(), "partition and state sizes differ");
  require(state.samples() >= 1, "statistics need at least one sample");
  const std::size_t c = state.trials();
  const double r = static_cast<double>(state.samples());
  const double lowest = -std::numeric_limits<double>::infinity();

  std::vector<ClassStatistics> out(partition.t);
  std::vector<double> best(partition.t * c, lowest);
  for (std::size_t v = 0; v < state.size(); ++v) {
    const std::size_t j = partition.class_of[v];
    auto& cs = out[j];
    ++cs.size;
    cs.wimpy = std::max(cs.wimpy, state.sq_sum(static_cast<Vertex>(v)));
    double* b = best.data() + j * c;
    for (std::size_t k = 0; k < c; ++k) b[k] = std::max(b[k], state.signed_sum(static_cast<Vertex>(v), k));
  }
  for (std::size_t j = 0; j < partition.t; ++j) {
    auto& cs = out[j];
    cs.wimpy /= r;
    if (cs.size == 0) continue;
    double total = 0.0;
    for (std::size_t k = 0; k < c; ++k) total += best[j * c + k];
    cs.mcera = total / (static_cast<double>(c) * r);
  }
  return out;
}

double wimpy_variance(const McEraState& state, const Partition& partition, std::size_t j) {
  require(j < partition.t, "class index out of range");
  return class_statistics(state, partition)[j].wimpy;
}

double mcera(const McEraState& state, const Partition& partition, std::size_t j) {
  require(j < partition.t, "class index out of range");
  return class_statistics(state, partition)[j].mcera;
}

double era_upper_bound(double mcera, double wimpy, std::size_t trials, std::size_t samples,
                       double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(trials >= 1 && samples >= 1 && wimpy >= 0.0, "invalid ERA bound arguments");
  return mcera + std::sqrt(4.0 * wimpy * std::log(1.0 / delta) /
                           (static_cast<double>(trials) * static_cast<double>(samples)));
}

double eps_bound(double mcera, double wimpy, double var_bound, std::size_t classes,
                 std::size_t trials, std::size_t samples, double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(classes >= 1 && trials >= 1 && samples >= 1, "invalid bound arguments");
  require(var_bound >= 0.0 && var_bound <= 0.25, "variance bound must lie in [0, 1/4]");
  const double r = static_cast<double>(samples);
  const double log_term = std::log(4.0 * static_cast<double>(classes) / delta);
  const double lr = log_term / r;

  double era = mcera + std::sqrt(4.0 * wimpy * log_term / (static_cast<double>(trials) * r));
  era = std::max(0.0, era);
  const double ra = era + lr + std::sqrt(lr * lr + 2.0 * lr * era);
  return 2.0 * ra + std::sqrt(2.0 * lr * (var_bound + 4.0 * ra)) + lr / 3.0;
}

double bernstein_upper(double empirical_mean, std::size_t samples, double delta) {
  require(samples >= 1 && delta > 0.0 && delta < 1.0, "invalid Bernstein arguments");
  const double lr = std::log(1.0 / delta) / static_cast<double>(samples);
  const double m = std::max(0.0, empirical_mean);
  return m + lr + std::sqrt(lr * lr + 2.0 * lr * m);
}

namespace {

double g_fn(double x) { return x * (1.0 - x); }
double h_fn(double x) { return (1.0 + x) * std::log1p(x) - x; }

void check_size_args(double var_bound, double psi, double eps, double delta) {
  require(eps > 0.0 && eps < 1.0, "epsilon must lie in (0,1)");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(var_bound > 0.0 && var_bound <= 0.25, "variance bound must lie in (0, 1/4]");
  require(psi > 0.0, "centrality-sum bound must be positive");
}

}  // namespace

double sample_size_closed_form(double var_bound, double psi, double eps, double delta) {
  check_size_args(var_bound, psi, eps, delta);
  const double lead = (2.0 * var_bound + 2.0 * eps / 3.0) / (eps * eps);
  return lead * (std::max(0.0, std::log(2.0 * psi / var_bound)) + std::log(1.0 / delta));
}

double sample_size_numeric(double var_bound, double psi, double eps, double delta) {
  check_size_args(var_bound, psi, eps, delta);

  // Smallest x near 1/2 with g(x) h(eps/g(x)) <= 2 eps^2; the left side
  // decreases towards x = 1/2, where the condition always holds.
  auto lhs = [&](double x) { return g_fn(x) * h_fn(eps / g_fn(x)); };
  double lo = 0.5 - std::sqrt(eps / 3.0 - eps * eps / 9.0), hi = 0.5;
  if (lhs(lo) <= 2.0 * eps * eps) {
    hi = lo;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      double mid = 0.5 * (lo + hi);
      (lhs(mid) <= 2.0 * eps * eps ? hi : lo) = mid;
    }
  }
  const double x_hat1 = hi;
  const double x_hat2 = 0.5 - std::sqrt(std::max(0.0, 0.25 - var_bound));
  const double x_hat = std::min(x_hat1, x_hat2);

  auto objective = [&](double x) {
    const double num = std::max(0.0, std::log(2.0 * psi * x_hat / (x * delta)));
    return num / lhs(x);
  };

  // Log-spaced scan, then golden-section refinement around the best point.
  constexpr int kGrid = 4000;
  const double log_lo = std::log(x_hat * 1e-9), log_hi = std::log(x_hat);
  std::vector<double> xs(kGrid + 1);
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    xs[i] = i == kGrid ? x_hat : std::exp(log_lo + (log_hi - log_lo) * i / kGrid);
    double val = objective(xs[i]);
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  double a = xs[std::max(0, best - 1)], b = xs[std::min(kGrid, best + 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 100 && b - a > 1e-14 * b; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  return std::max({best_val, fc, fd});
}

std::size_t sufficient_sample_size(double var_bound, double psi, double eps, double delta) {
  const double r = std::max(sample_size_closed_form(var_bound, psi, eps, delta),
                            sample_size_numeric(var_bound, psi, eps, delta));
  return static_cast<std::size_t>(std::ceil(r));
}

Partition empirical_peeling(std::span<const double> sq_sums, std::size_t samples, double delta,
                            std::span<const double> kappa_max) {
  require(samples >= 1, "peeling needs at least one sample");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(kappa_max.empty() || kappa_max.size() == sq_sums.size(), "kappa bound size mismatch");
  const std::size_t n = sq_sums.size();
  const double r = static_cast<double>(samples);

  Partition p;
  p.t = static_cast<std::size_t>(std::ceil(std::log(r) / std::log(4.0) - 1e-12)) + 2;
  p.class_of.assign(n, 0);
  p.class_size.assign(p.t, 0);
  std::vector<double> max_w(p.t, 0.0), max_range(p.t, 0.0);

  const std::size_t catch_all = p.t - 1;
  const double catch_edge = std::pow(4.0, -static_cast<double>(p.t));
  for (std::size_t v = 0; v < n; ++v) {
    const double w = sq_sums[v] / r;
    std::size_t j;
    if (w <= catch_edge) {
      j = catch_all;
    } else {
      // 1-based bucket b with 4^-(b+1) < w <= 4^-b, clamped to [1, t-1].
      double b = std::floor(-std::log(w) / std::log(4.0));
      auto bucket = static_cast<long>(std::max(1.0, b));
      while (bucket > 1 && w > std::pow(4.0, -static_cast<double>(bucket))) --bucket;
      while (w <= std::pow(4.0, -static_cast<double>(bucket + 1))) ++bucket;
      j = std::min<std::size_t>(static_cast<std::size_t>(bucket) - 1, catch_all);
    }
    p.class_of[v] = static_cast<std::uint32_t>(j);
    ++p.class_size[j];
    max_w[j] = std::max(max_w[j], w);
    if (!kappa_max.empty()) max_range[j] = std::max(max_range[j], kappa_max[v]);
  }

  const double class_delta = delta / (2.0 * static_cast<double>(p.t));
  p.var_bound.assign(p.t, 0.25);
  for (std::size_t j = 0; j < p.t; ++j) {
    if (p.class_size[j] == 0) {
      p.var_bound[j] = 0.0;
      continue;
    }
    const double edge = j == catch_all ? max_w[j] : std::pow(4.0, -static_cast<double>(j + 1));
    double bound = std::min(0.25, bernstein_upper(edge, samples, class_delta));
    if (!kappa_max.empty())
      bound = std::min(bound, max_range[j] * max_range[j] / 4.0);
    p.var_bound[j] = bound;
  }
  for (std::size_t j = p.t - 1; j-- > 0;) p.var_bound[j] = std::max(p.var_bound[j], p.var_bound[j + 1]);
  return p;
}

double vd_baseline_bound(std::size_t vertex_diameter, double eps, double delta) {
  require(vertex_diameter >= 2, "vertex diameter must be at least 2");
  require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0, "epsilon and delta must lie in (0,1)");
  double dim = 0.0;
  if (vertex_diameter > 2) dim = std::floor(std::log2(static_cast<double>(vertex_diameter - 2))) + 1.0;
  return 0.5 / (eps * eps) * (dim + std::log(1.0 / delta));
}

std::size_t vd_baseline_sample_size(std::size_t vertex_diameter, double eps, double delta) {
  return static_cast<std::size_t>(std::ceil(vd_baseline_bound(vertex_diameter, eps, delta)));
}

}  // namespace percolation
