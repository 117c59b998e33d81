#include "herd/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace herd {

namespace {

void require_valid_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("alpha must be finite and nonnegative");
  }
}

// k must be an exact multiple of 1/N inside [0, 1].
std::size_t consumers_from_fraction(double k, std::size_t n) {
  if (!(k >= 0.0 && k <= 1.0)) {
    throw std::invalid_argument("fraction acting must lie in [0, 1]");
  }
  const double scaled = k * static_cast<double>(n);
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-6) {
    throw std::invalid_argument("fraction acting " + std::to_string(k) +
                                " is not a multiple of 1/" + std::to_string(n));
  }
  return static_cast<std::size_t>(rounded);
}

EquilibriumOutcome make_outcome(double alpha, std::size_t consumers, std::size_t n) {
  EquilibriumOutcome out;
  out.consumers = consumers;
  out.k_hat = fraction_acting(consumers, n);
  out.t_hat = consumption_cutoff(alpha, out.k_hat);
  return out;
}

}  // namespace

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::unstable:
      return "unstable";
    case Stability::boundary:
      return "boundary";
  }
  return "boundary";
}

std::optional<Stability> parse_stability(std::string_view text) noexcept {
  if (text == "stable") return Stability::stable;
  if (text == "unstable") return Stability::unstable;
  if (text == "boundary") return Stability::boundary;
  return std::nullopt;
}

bool EquilibriumSet::contains_consumers(std::size_t consumers) const noexcept {
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [&](const EquilibriumOutcome& o) { return o.consumers == consumers; });
}

double response_fraction(const TastePopulation& pop, double alpha, double k) {
  const double cutoff = consumption_cutoff(alpha, k);
  const auto tastes = pop.tastes();
  const auto consumers = std::count_if(tastes.begin(), tastes.end(),
                                       [cutoff](double t) { return t > cutoff; });
  return fraction_acting(static_cast<std::size_t>(consumers), pop.size());
}

SortedTastes::SortedTastes(const TastePopulation& pop)
    : sorted_(pop.tastes().begin(), pop.tastes().end()) {
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t SortedTastes::count_above(double threshold) const noexcept {
  const auto first_above = std::upper_bound(sorted_.begin(), sorted_.end(), threshold);
  return static_cast<std::size_t>(sorted_.end() - first_above);
}

std::size_t SortedTastes::best_response(double alpha, std::size_t consumers) const noexcept {
  return count_above(consumption_cutoff(alpha, fraction_acting(consumers, sorted_.size())));
}

std::vector<std::size_t> tatonnement_path(const SortedTastes& tastes, double alpha) {
  require_valid_alpha(alpha);
  const std::size_t n = tastes.size();
  std::vector<std::size_t> path;
  path.push_back(tastes.count_above(consumption_cutoff(alpha, 0.5)));
  if (2 * path.front() == n) {
    return path;
  }
  const bool rising = 2 * path.front() > n;
  for (;;) {
    const std::size_t prev = path.back();
    const std::size_t next = tastes.best_response(alpha, prev);
    path.push_back(next);
    if (next == prev) {
      return path;
    }
    if (rising != (next > prev)) {
      throw NonConvergenceError("tatonnement lost monotonicity at step " +
                                std::to_string(path.size()));
    }
    if (path.size() > n + 2) {
      throw NonConvergenceError("tatonnement exceeded " + std::to_string(n + 2) +
                                " iterations");
    }
  }
}

EquilibriumOutcome tatonnement(const SortedTastes& tastes, double alpha) {
  const auto path = tatonnement_path(tastes, alpha);
  EquilibriumOutcome out = make_outcome(alpha, path.back(), tastes.size());
  out.iterations = path.size();
  out.stability = classify_stability(tastes, alpha, out.consumers);
  return out;
}

EquilibriumOutcome tatonnement(const TastePopulation& pop, double alpha) {
  return tatonnement(SortedTastes(pop), alpha);
}

EquilibriumSet enumerate_equilibria(const TastePopulation& pop, double alpha) {
  require_valid_alpha(alpha);
  const SortedTastes sorted(pop);
  const auto& t = sorted.values();
  const std::size_t n = t.size();
  EquilibriumSet set;
  for (std::size_t m = 0; m <= n; ++m) {
    const double cutoff = consumption_cutoff(alpha, fraction_acting(m, n));
    // Exactly m tastes above the cutoff: the (N-m)th order statistic is at or
    // below it and the (N-m+1)th is above it.
    const bool rest_below = m == n || t[n - m - 1] <= cutoff;
    const bool actors_above = m == 0 || t[n - m] > cutoff;
    if (rest_below && actors_above) {
      EquilibriumOutcome out = make_outcome(alpha, m, n);
      out.stability = classify_stability(sorted, alpha, m);
      set.outcomes.push_back(out);
    }
  }
  return set;
}

bool verify_equilibrium(const TastePopulation& pop, double alpha, double k) {
  const std::size_t consumers = consumers_from_fraction(k, pop.size());
  const double kk = fraction_acting(consumers, pop.size());
  const auto tastes = pop.tastes();
  const auto acting = std::count_if(tastes.begin(), tastes.end(),
                                    [&](double t) { return consume_decision(t, alpha, kk); });
  return static_cast<std::size_t>(acting) == consumers;
}

Stability classify_stability(const SortedTastes& tastes, double alpha, std::size_t consumers) {
  const std::size_t n = tastes.size();
  if (consumers > n || tastes.best_response(alpha, consumers) != consumers) {
    throw std::invalid_argument("classify_stability: " + std::to_string(consumers) + "/" +
                                std::to_string(n) + " is not an equilibrium");
  }
  if (consumers == 0 || consumers == n) {
    return Stability::boundary;
  }
  const std::size_t below = tastes.best_response(alpha, consumers - 1);
  const std::size_t above = tastes.best_response(alpha, consumers + 1);
  if (below < consumers - 1 || above > consumers + 1) {
    return Stability::unstable;
  }
  return Stability::stable;
}

Stability classify_stability(const TastePopulation& pop, double alpha, double k) {
  return classify_stability(SortedTastes(pop), alpha, consumers_from_fraction(k, pop.size()));
}

}  // namespace herd
