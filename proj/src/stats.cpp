#include "herd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace herd {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

CentralMoments central_moments(std::span<const double> samples, int max_order) {
  if (samples.empty()) {
    throw std::invalid_argument("central_moments: no samples");
  }
  if (max_order < 1 || max_order > 4) {
    throw std::invalid_argument("central_moments: max_order must be in 1..4");
  }
  const double n = static_cast<double>(samples.size());

  CompensatedSum sum;
  for (double x : samples) sum.add(x);
  double mean = sum.value() / n;

  CompensatedSum d1, d2, d3, d4;
  for (double x : samples) d1.add(x - mean);
  // Fold the first-pass rounding residue back into the mean.
  mean += d1.value() / n;
  for (double x : samples) {
    const double d = x - mean;
    const double d_sq = d * d;
    d2.add(d_sq);
    d3.add(d_sq * d);
    d4.add(d_sq * d_sq);
  }

  CentralMoments m;
  m.mean = mean;
  m.mu2 = max_order >= 2 ? d2.value() / n : kNaN;
  m.mu3 = max_order >= 3 ? d3.value() / n : kNaN;
  m.mu4 = max_order >= 4 ? d4.value() / n : kNaN;
  return m;
}

double normalized_kurtosis(std::span<const double> samples) {
  const auto m = central_moments(samples, 4);
  if (m.mu2 == 0.0) {
    throw ZeroVarianceError("normalized_kurtosis: zero variance");
  }
  return m.mu4 / (m.mu2 * m.mu2);
}

double normalized_skew(std::span<const double> samples) {
  const auto m = central_moments(samples, 3);
  if (m.mu2 == 0.0) {
    throw ZeroVarianceError("normalized_skew: zero variance");
  }
  return m.mu3 / std::pow(m.mu2, 1.5);
}

MomentSummary summarize(std::span<const double> samples) {
  const auto m = central_moments(samples, 4);
  MomentSummary s;
  s.n_samples = samples.size();
  s.mean = m.mean;
  s.variance = m.mu2;
  s.mu3 = m.mu3;
  s.mu4 = m.mu4;
  s.degenerate = m.mu2 == 0.0;
  if (s.degenerate) {
    s.skew_normalized = kNaN;
    s.kurtosis_normalized = kNaN;
  } else {
    s.skew_normalized = m.mu3 / std::pow(m.mu2, 1.5);
    s.kurtosis_normalized = m.mu4 / (m.mu2 * m.mu2);
  }
  return s;
}

double two_point_kurtosis(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::domain_error("two_point_kurtosis: r must lie in (0, 1), got " + std::to_string(r));
  }
  return 1.0 / (r - r * r) - 3.0;
}

double Histogram::bin_lo(std::size_t i) const noexcept {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bin_count);
}

double Histogram::bin_hi(std::size_t i) const noexcept {
  return lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(bin_count);
}

double Histogram::bin_center(std::size_t i) const noexcept {
  return lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(bin_count);
}

Histogram build_histogram(std::span<const double> samples, std::size_t bin_count) {
  if (bin_count == 0) {
    throw std::invalid_argument("build_histogram: bin_count must be positive");
  }
  Histogram h;
  h.bin_count = bin_count;
  h.counts.assign(bin_count, 0);
  const double b = static_cast<double>(bin_count);
  for (double x : samples) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::out_of_range("build_histogram: sample " + std::to_string(x) +
                              " outside [0, 1]");
    }
    const auto idx = std::min(static_cast<std::size_t>(x * b), bin_count - 1);
    ++h.counts[idx];
  }
  h.total = samples.size();
  h.fractions.resize(bin_count);
  for (std::size_t i = 0; i < bin_count; ++i) {
    h.fractions[i] =
        h.total == 0 ? 0.0 : static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
  }
  return h;
}

std::vector<double> find_modes(const Histogram& hist, std::size_t min_separation_bins) {
  const std::size_t nb = hist.counts.size();
  if (nb == 0 || hist.total == 0) {
    return {};
  }

  std::vector<double> smooth(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t first = i == 0 ? 0 : i - 1;
    const std::size_t last = std::min(i + 1, nb - 1);
    std::uint64_t sum = 0;
    for (std::size_t j = first; j <= last; ++j) sum += hist.counts[j];
    smooth[i] = static_cast<double>(sum) / static_cast<double>(last - first + 1);
  }

  struct Peak {
    std::size_t bin;
    double height;
  };
  std::vector<Peak> peaks;
  const double floor = 0.01 * static_cast<double>(hist.total);
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nb;) {
    std::size_t b = a;
    while (b + 1 < nb && smooth[b + 1] == smooth[a]) ++b;
    const double left = a == 0 ? kNone : smooth[a - 1];
    const double right = b + 1 == nb ? kNone : smooth[b + 1];
    if (smooth[a] > left && smooth[a] > right && smooth[a] > floor) {
      peaks.push_back({(a + b) / 2, smooth[a]});
    }
    a = b + 1;
  }

  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& x, const Peak& y) { return x.height > y.height; });
  std::vector<std::size_t> kept;
  for (const Peak& p : peaks) {
    const bool far = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      const std::size_t gap = k > p.bin ? k - p.bin : p.bin - k;
      return gap >= min_separation_bins;
    });
    if (far) kept.push_back(p.bin);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<double> modes;
  modes.reserve(kept.size());
  for (std::size_t bin : kept) modes.push_back(hist.bin_center(bin));
  return modes;
}

}  // namespace herd
