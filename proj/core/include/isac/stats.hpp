#pragma once

#include <cstddef>
#include <span>

namespace isac::stats {

double mean(std::span<const double> x);
// Unbiased sample variance.
double variance(std::span<const double> x);
// Excess kurtosis (0 for a Gaussian), moment estimator.
double excess_kurtosis(std::span<const double> x);
double standard_error(std::span<const double> x);

// Streaming first four central moments (Welford / Terriberry), mergeable.
class Moments {
 public:
  void add(double x) noexcept;
  void merge(const Moments& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased
  double excess_kurtosis() const noexcept;
  double standard_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

}  // namespace isac::stats
