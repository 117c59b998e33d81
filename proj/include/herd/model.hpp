// include/herd/model.hpp
//
// Primitive types of the peer-emulation model and the individual decision
// rule. An agent with private taste t, facing a fraction k of the population
// that consumes, gets
//
//   U_consume     = t + alpha * k
//   U_not_consume = alpha * (1 - k)
//
// and consumes iff U_consume > U_not_consume, i.e. iff t > alpha * (1 - 2k).
// The cutoff form is the one used everywhere in this library; the two utility
// functions are exposed for reporting and for cross-checking.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "herd/random.hpp"

namespace herd {

struct ModelParams {
  double alpha = 0.0;      // emulation weight, utils per unit fraction acting
  double epsilon = 0.0;    // mean of the taste distribution
  std::size_t n_agents = 1;

  /// Throws std::invalid_argument unless alpha >= 0, alpha and epsilon are
  /// finite, and n_agents >= 1.
  void validate() const;
};

/// One run's private tastes, drawn i.i.d. from Normal(epsilon, 1).
class TastePopulation {
 public:
  /// Throws std::invalid_argument on an empty vector or non-finite tastes.
  explicit TastePopulation(std::vector<double> tastes);

  std::span<const double> tastes() const noexcept { return tastes_; }
  std::size_t size() const noexcept { return tastes_.size(); }

 private:
  std::vector<double> tastes_;
};

double utility_consume(double taste, double alpha, double k) noexcept;
double utility_not_consume(double alpha, double k) noexcept;

/// Taste above which an agent consumes when a fraction k acts.
inline double consumption_cutoff(double alpha, double k) noexcept {
  return alpha * (1.0 - 2.0 * k);
}

/// Strict rule: consume iff taste > alpha * (1 - 2k).
inline bool consume_decision(double taste, double alpha, double k) noexcept {
  return taste > consumption_cutoff(alpha, k);
}

/// Fraction k = consumers / n as the library computes it everywhere.
inline double fraction_acting(std::size_t consumers, std::size_t n) noexcept {
  return static_cast<double>(consumers) / static_cast<double>(n);
}

/// Draws params.n_agents tastes from Normal(params.epsilon, 1). alpha is not
/// consulted.
TastePopulation draw_population(const ModelParams& params, RandomStream& stream);

}  // namespace herd
