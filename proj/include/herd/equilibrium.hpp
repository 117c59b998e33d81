// include/herd/equilibrium.hpp
//
// Cutoff equilibria of a single taste population.
//
// With m of N agents consuming (k = m/N) the cutoff is alpha * (1 - 2k); the
// population is in equilibrium iff exactly m tastes lie strictly above that
// cutoff. The best-response map m -> #{t > alpha(1 - 2m/N)} is nondecreasing
// in m, so synchronous best-response iteration (tatonnement) from k = 1/2 is
// monotone and stops within N + 1 evaluations.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "herd/model.hpp"

namespace herd {

enum class Stability { stable, unstable, boundary };

std::string_view to_string(Stability s) noexcept;
std::optional<Stability> parse_stability(std::string_view text) noexcept;

struct EquilibriumOutcome {
  double k_hat = 0.0;          // fraction acting, consumers / N
  std::size_t consumers = 0;   // k_hat * N
  double t_hat = 0.0;          // consumption_cutoff(alpha, k_hat)
  std::size_t iterations = 0;  // best-response evaluations (0 when enumerated)
  Stability stability = Stability::boundary;

  friend bool operator==(const EquilibriumOutcome&, const EquilibriumOutcome&) = default;
};

/// All equilibria of one population, ordered by k_hat ascending.
struct EquilibriumSet {
  std::vector<EquilibriumOutcome> outcomes;

  bool contains_consumers(std::size_t consumers) const noexcept;
};

/// Thrown when tatonnement exceeds N + 2 evaluations or loses monotonicity.
/// Both are impossible for a correct solver.
class NonConvergenceError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One synchronous best-response step: share of agents with
/// taste > alpha * (1 - 2k).
double response_fraction(const TastePopulation& pop, double alpha, double k);

/// Sorted copy of a population's tastes supporting O(log N) best responses.
class SortedTastes {
 public:
  explicit SortedTastes(const TastePopulation& pop);

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& values() const noexcept { return sorted_; }

  /// Number of tastes strictly above the threshold.
  std::size_t count_above(double threshold) const noexcept;

  /// Consumers when `consumers` agents act: #{t > alpha(1 - 2 consumers/N)}.
  std::size_t best_response(double alpha, std::size_t consumers) const noexcept;

 private:
  std::vector<double> sorted_;
};

/// Consumer counts visited by tatonnement: element i is the count after
/// i + 1 best-response evaluations starting from k = 1/2. The last element
/// is the fixed point.
std::vector<std::size_t> tatonnement_path(const SortedTastes& tastes, double alpha);

EquilibriumOutcome tatonnement(const TastePopulation& pop, double alpha);
EquilibriumOutcome tatonnement(const SortedTastes& tastes, double alpha);

/// Every m in 0..N whose cutoff separates exactly m tastes, found from the
/// order statistics in O(N log N).
EquilibriumSet enumerate_equilibria(const TastePopulation& pop, double alpha);

/// True iff exactly k * N agents consume given k. Throws std::invalid_argument
/// when k is outside [0, 1] or k * N is not an integer.
bool verify_equilibrium(const TastePopulation& pop, double alpha, double k);

/// One-agent perturbation test. With m = kN consumers, evaluates the best
/// response at m - 1 and m + 1; the equilibrium is unstable if either
/// perturbation runs further away (response < m - 1, or response > m + 1),
/// stable otherwise. k in {0, 1} is reported as boundary. Throws
/// std::invalid_argument if k is not an equilibrium.
Stability classify_stability(const TastePopulation& pop, double alpha, double k);
Stability classify_stability(const SortedTastes& tastes, double alpha, std::size_t consumers);

}  // namespace herd
