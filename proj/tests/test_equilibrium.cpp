#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "herd/equilibrium.hpp"

using namespace herd;

namespace {

const TastePopulation kFour({-2.0, -0.5, 0.5, 2.0});

// Literal best-response loop with linear scans, independent of SortedTastes.
struct BruteResult {
  std::size_t consumers;
  std::size_t iterations;
};

BruteResult brute_tatonnement(const TastePopulation& pop, double alpha) {
  const auto tastes = pop.tastes();
  const std::size_t n = tastes.size();
  double k_last = 0.5;
  std::size_t iterations = 0;
  for (;;) {
    std::size_t acting = 0;
    for (double t : tastes) {
      if (utility_consume(t, alpha, k_last) > utility_not_consume(alpha, k_last)) ++acting;
    }
    ++iterations;
    const double k = fraction_acting(acting, n);
    if (k == k_last) return {acting, iterations};
    k_last = k;
  }
}

// O(N^2): every m checked with verify_equilibrium.
std::vector<std::size_t> naive_equilibria(const TastePopulation& pop, double alpha) {
  std::vector<std::size_t> found;
  for (std::size_t m = 0; m <= pop.size(); ++m) {
    if (verify_equilibrium(pop, alpha, fraction_acting(m, pop.size()))) found.push_back(m);
  }
  return found;
}

TastePopulation random_population(std::mt19937_64& gen, std::size_t n, double eps, bool ties) {
  std::normal_distribution<double> normal(eps, 1.0);
  std::vector<double> t(n);
  for (double& x : t) {
    x = normal(gen);
    if (ties) x = std::round(x * 4.0) / 4.0;
  }
  return TastePopulation(std::move(t));
}

}  // namespace

TEST_CASE("response_fraction on the four-agent population") {
  CHECK(response_fraction(kFour, 1.0, 0.5) == 0.5);
  CHECK(response_fraction(kFour, 10.0, 1.0) == 1.0);
  CHECK(response_fraction(kFour, 10.0, 0.0) == 0.0);
  for (double k : {0.0, 0.3, 0.5, 1.0}) {
    CHECK(response_fraction(kFour, 0.0, k) == 0.5);
  }
}

TEST_CASE("tatonnement on the four-agent population") {
  const auto a1 = tatonnement(kFour, 1.0);
  CHECK(a1.k_hat == 0.5);
  CHECK(a1.consumers == 2);
  CHECK(a1.iterations == 1);
  CHECK(a1.t_hat == 0.0);

  const auto a10 = tatonnement(kFour, 10.0);
  CHECK(a10.k_hat == 0.5);
  CHECK(a10.iterations == 1);
  CHECK(enumerate_equilibria(kFour, 10.0).contains_consumers(a10.consumers));

  const TastePopulation skewed({-1.0, 0.2, 0.3, 0.4, 0.9});
  const auto a0 = tatonnement(skewed, 0.0);
  CHECK(a0.consumers == 4);
  CHECK(a0.iterations <= 2);
}

TEST_CASE("enumerate_equilibria on the four-agent population") {
  const auto set10 = enumerate_equilibria(kFour, 10.0);
  std::vector<double> ks;
  for (const auto& o : set10.outcomes) ks.push_back(o.k_hat);
  CHECK(ks == std::vector<double>{0.0, 0.5, 1.0});

  CHECK(enumerate_equilibria(kFour, 1.0).contains_consumers(2));

  const auto set0 = enumerate_equilibria(kFour, 0.0);
  REQUIRE(set0.outcomes.size() == 1);
  CHECK(set0.outcomes[0].k_hat == 0.5);
}

TEST_CASE("verify_equilibrium on the four-agent population") {
  CHECK(verify_equilibrium(kFour, 10.0, 0.5));
  // Cutoff 5 at k = 1/4: nobody consumes, so 1 != 0.
  CHECK_FALSE(verify_equilibrium(kFour, 10.0, 0.25));
  CHECK(verify_equilibrium(kFour, 10.0, 0.0));
  CHECK(verify_equilibrium(kFour, 10.0, 1.0));
  CHECK_THROWS_AS(verify_equilibrium(kFour, 10.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(verify_equilibrium(kFour, 10.0, 1.5), std::invalid_argument);
}

TEST_CASE("classify_stability") {
  CHECK(classify_stability(kFour, 10.0, 0.0) == Stability::boundary);
  CHECK(classify_stability(kFour, 10.0, 1.0) == Stability::boundary);
  // Hand evaluation: at k = 1/4 the cutoff is 5 (0 consumers < 1) and at
  // k = 3/4 it is -5 (4 consumers > 3); both perturbations run away.
  CHECK(response_fraction(kFour, 10.0, 0.25) == 0.0);
  CHECK(response_fraction(kFour, 10.0, 0.75) == 1.0);
  CHECK(classify_stability(kFour, 10.0, 0.5) == Stability::unstable);
  // alpha = 0: flat response.
  CHECK(classify_stability(kFour, 0.0, 0.5) == Stability::stable);
  // alpha = 1: cutoffs 0.5 and -0.5 give 1 and 2 consumers; nothing escapes.
  CHECK(classify_stability(kFour, 1.0, 0.5) == Stability::stable);
  CHECK_THROWS_AS(classify_stability(kFour, 10.0, 0.25), std::invalid_argument);

  std::mt19937_64 gen(5);
  for (int i = 0; i < 50; ++i) {
    const auto pop = random_population(gen, 40, 0.0, false);
    for (const auto& o : enumerate_equilibria(pop, 0.0).outcomes) {
      if (o.consumers != 0 && o.consumers != pop.size()) CHECK(o.stability == Stability::stable);
    }
  }
}

TEST_CASE("stability strings round-trip") {
  for (auto s : {Stability::stable, Stability::unstable, Stability::boundary}) {
    CHECK(parse_stability(to_string(s)) == s);
  }
  CHECK_FALSE(parse_stability("wobbly").has_value());
}

TEST_CASE("tatonnement agrees with the oracles on random small populations") {
  std::mt19937_64 gen(20240611);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  std::uniform_real_distribution<double> alpha(0.0, 5.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = size(gen);
    const double a = alpha(gen);
    const auto pop = random_population(gen, n, trial % 2 == 0 ? 0.0 : 0.05, trial % 5 == 0);
    CAPTURE(trial);
    CAPTURE(n);
    CAPTURE(a);

    const auto set = enumerate_equilibria(pop, a);
    REQUIRE_FALSE(set.outcomes.empty());

    std::vector<std::size_t> enumerated;
    for (const auto& o : set.outcomes) {
      enumerated.push_back(o.consumers);
      REQUIRE(o.t_hat == consumption_cutoff(a, o.k_hat));
    }
    REQUIRE(std::is_sorted(enumerated.begin(), enumerated.end()));
    REQUIRE(std::adjacent_find(enumerated.begin(), enumerated.end()) == enumerated.end());
    REQUIRE(enumerated == naive_equilibria(pop, a));

    const auto out = tatonnement(pop, a);
    REQUIRE(set.contains_consumers(out.consumers));
    REQUIRE(verify_equilibrium(pop, a, out.k_hat));
    REQUIRE(out.t_hat == consumption_cutoff(a, out.k_hat));

    const auto brute = brute_tatonnement(pop, a);
    REQUIRE(brute.consumers == out.consumers);
    REQUIRE(brute.iterations == out.iterations);
    REQUIRE(out.iterations <= n + 1);

    // Cutoff-type: actors strictly above t_hat, everyone else at or below.
    if (out.consumers != 0 && out.consumers != n) {
      std::size_t above = 0;
      for (double t : pop.tastes()) above += t > out.t_hat ? 1 : 0;
      REQUIRE(above == out.consumers);
    }
  }
}

TEST_CASE("tatonnement path is monotone and bounded") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> alpha(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pop = random_population(gen, 500, 0.05, false);
    const SortedTastes sorted(pop);
    const auto path = tatonnement_path(sorted, alpha(gen));
    REQUIRE(path.size() <= pop.size() + 1);
    const bool rising = 2 * path.front() > pop.size();
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (rising) {
        REQUIRE(path[i] >= path[i - 1]);
      } else {
        REQUIRE(path[i] <= path[i - 1]);
      }
    }
    if (path.size() > 1) REQUIRE(path[path.size() - 1] == path[path.size() - 2]);
  }
}

TEST_CASE("single-agent populations") {
  const TastePopulation one({0.3});
  const auto out = tatonnement(one, 2.0);
  CHECK(out.iterations <= 2);
  CHECK(verify_equilibrium(one, 2.0, out.k_hat));
  CHECK(out.stability == Stability::boundary);
}

TEST_CASE("invalid alpha is rejected") {
  CHECK_THROWS_AS(tatonnement(kFour, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_equilibria(kFour, NAN), std::invalid_argument);
}
