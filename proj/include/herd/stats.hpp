// include/herd/stats.hpp
//
// Moment summaries and histograms of equilibrium outcomes.
//
// All moments are population estimators, mu_j = (1/n) sum (x_i - mean)^j,
// computed in two passes with compensated summation. Normalized kurtosis is
// mu4 / mu2^2 (3 for a Normal), normalized skew is mu3 / mu2^(3/2).

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace herd {

inline constexpr std::size_t kDefaultBinCount = 100;

/// Raised when a normalized ratio is requested for a zero-variance sample.
class ZeroVarianceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CentralMoments {
  double mean = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
};

/// Mean and central moments up to max_order (1..4); orders above max_order
/// are NaN. Throws std::invalid_argument on empty input or a bad order.
CentralMoments central_moments(std::span<const double> samples, int max_order = 4);

/// mu4 / mu2^2. Throws ZeroVarianceError when mu2 == 0.
double normalized_kurtosis(std::span<const double> samples);
/// mu3 / mu2^(3/2). Throws ZeroVarianceError when mu2 == 0.
double normalized_skew(std::span<const double> samples);

struct MomentSummary {
  std::size_t n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;  // mu2
  double mu3 = 0.0;
  double mu4 = 0.0;
  double skew_normalized = 0.0;      // NaN when degenerate
  double kurtosis_normalized = 0.0;  // NaN when degenerate
  bool degenerate = false;           // all samples equal
};

MomentSummary summarize(std::span<const double> samples);

/// Normalized kurtosis of a two-point distribution with mass r on one point:
/// 1 / (r - r^2) - 3. Throws std::domain_error unless 0 < r < 1.
double two_point_kurtosis(double r);

struct Histogram {
  std::size_t bin_count = 0;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::uint64_t> counts;
  std::vector<double> fractions;  // counts / number of samples
  std::uint64_t total = 0;

  double bin_lo(std::size_t i) const noexcept;
  double bin_hi(std::size_t i) const noexcept;
  double bin_center(std::size_t i) const noexcept;
};

/// Uniform bins over [0, 1]: bin i covers [i/B, (i+1)/B), the last bin is
/// closed at 1. Throws std::invalid_argument for bin_count == 0 and
/// std::out_of_range for samples outside [0, 1].
Histogram build_histogram(std::span<const double> samples, std::size_t bin_count = kDefaultBinCount);

/// Local maxima of the 3-bin moving average of counts (edge bins average the
/// neighbours that exist). A flat run of equal smoothed values counts as one
/// maximum located at its middle bin. Maxima must exceed 1% of the total
/// mass; of two maxima closer than min_separation_bins the taller is kept.
/// Returns bin centers in ascending order.
std::vector<double> find_modes(const Histogram& hist, std::size_t min_separation_bins);

}  // namespace herd
