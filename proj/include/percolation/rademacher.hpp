#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "percolation/path_sampler.hpp"

namespace percolation {

/// Variance-homogeneous classes of the per-vertex functions. Classes are
/// 0-based here; class 0 holds the largest empirical second moments and
/// class t-1 is the catch-all (including vertices never hit).
struct Partition {
  std::size_t t = 0;
  std::vector<std::uint32_t> class_of;  ///< per vertex
  std::vector<std::size_t> class_size;  ///< per class
  std::vector<double> var_bound;        ///< per class, in [0, 1/4], nonincreasing
};

/// Running sums for the Monte-Carlo Rademacher average over c trials:
/// signed_sum(v, k) = sum_i lambda_{k,i} f_v(s_i), plus sum_i f_v(s_i)^2.
class McEraState {
 public:
  McEraState(std::size_t n, std::size_t trials, std::uint64_t lambda_seed);

  /// Appends one sample; lambda_{k,r} comes from the counter-based stream.
  void add_sample(const Contribution& f);
  /// Appends one sample with explicit signs (one per trial).
  void add_sample(const Contribution& f, std::span<const int> lambda);

  std::size_t size() const noexcept { return n_; }
  std::size_t trials() const noexcept { return c_; }
  std::size_t samples() const noexcept { return r_; }

  double sum(Vertex v) const { return sum_[v]; }
  double sq_sum(Vertex v) const { return sq_[v]; }
  double signed_sum(Vertex v, std::size_t k) const { return signed_[v * c_ + k]; }
  std::span<const double> sums() const noexcept { return sum_; }
  std::span<const double> sq_sums() const noexcept { return sq_; }

 private:
  std::size_t n_, c_, r_ = 0;
  std::uint64_t seed_;
  std::vector<double> sum_, sq_, signed_;
  std::vector<int> lambda_scratch_;
};

/// Empirical wimpy variance of a class: max over members of sq_sum / r.
/// Empty class gives 0.
double wimpy_variance(const McEraState& state, const Partition& partition, std::size_t j);

/// c-MCERA of a class: mean over trials of the max member signed_sum / r.
/// The per-trial sup is not clamped and can be negative.
double mcera(const McEraState& state, const Partition& partition, std::size_t j);

struct ClassStatistics {
  double wimpy = 0.0;
  double mcera = 0.0;
  std::size_t size = 0;
};

/// wimpy_variance and mcera for every class in one O(n c) pass.
std::vector<ClassStatistics> class_statistics(const McEraState& state, const Partition& partition);

/// Upper bound on the ERA: Rc + sqrt(4 W ln(1/delta) / (c r)).
double era_upper_bound(double mcera, double wimpy, std::size_t trials, std::size_t samples,
                       double delta);

/// Supremum-deviation bound for one class of a t-class partition, holding
/// for all classes at once with probability 1 - delta; every log term is
/// ln(4t / delta). Negative Rc + slack is floored at 0.
double eps_bound(double mcera, double wimpy, double var_bound, std::size_t classes,
                 std::size_t trials, std::size_t samples, double delta);

/// One-sided Bernstein upper bound on E[X] for X in [0,1] from an empirical
/// mean over `samples` draws, at confidence 1 - delta. Not clamped.
double bernstein_upper(double empirical_mean, std::size_t samples, double delta);

/// Closed-form sufficient sample size (real-valued, before rounding).
double sample_size_closed_form(double var_bound, double psi, double eps, double delta);

/// Supremum over (0, x_hat) of ln(2 psi x_hat / (x delta)) / (g(x) h(eps/g(x))),
/// with g(x) = x(1-x) and h(x) = (1+x)ln(1+x) - x.
double sample_size_numeric(double var_bound, double psi, double eps, double delta);

/// Sample size r such that the supremum deviation is at most eps with
/// probability 1 - delta: ceil(max(closed form, numeric supremum)).
std::size_t sufficient_sample_size(double var_bound, double psi, double eps, double delta);

/// Empirical peeling. `sq_sums` come from `samples` bootstrap draws.
/// Buckets are (4^-(j+1), 4^-j] for j = 1..t-1 (j = 1 also takes everything
/// above 1/4) plus a catch-all, with t = ceil(log4 samples) + 2. Each class's
/// variance bound is the Bernstein-inflated bucket edge at confidence
/// delta/(2t), capped at 1/4 and, when `kappa_max` is given, at the range
/// bound max kappa_max(v)^2 / 4 over its members.
Partition empirical_peeling(std::span<const double> sq_sums, std::size_t samples, double delta,
                            std::span<const double> kappa_max = {});

/// Fixed-size bound driven by the vertex diameter (real-valued):
/// (0.5/eps^2)(floor(log2(VD - 2)) + 1 + ln(1/delta)); the log term is 0 at VD = 2.
double vd_baseline_bound(std::size_t vertex_diameter, double eps, double delta);
std::size_t vd_baseline_sample_size(std::size_t vertex_diameter, double eps, double delta);

}  // namespace percolation
