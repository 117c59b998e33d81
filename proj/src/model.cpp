#include "herd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace herd {

void ModelParams::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("alpha must be finite and nonnegative, got " +
                                std::to_string(alpha));
  }
  if (!std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite");
  }
  if (n_agents < 1) {
    throw std::invalid_argument("n_agents must be at least 1");
  }
}

TastePopulation::TastePopulation(std::vector<double> tastes) : tastes_(std::move(tastes)) {
  if (tastes_.empty()) {
    throw std::invalid_argument("taste population must be nonempty");
  }
  if (!std::all_of(tastes_.begin(), tastes_.end(), [](double t) { return std::isfinite(t); })) {
    throw std::invalid_argument("taste population contains a non-finite value");
  }
}

double utility_consume(double taste, double alpha, double k) noexcept {
  return taste + alpha * k;
}

double utility_not_consume(double alpha, double k) noexcept {
  return alpha * (1.0 - k);
}

TastePopulation draw_population(const ModelParams& params, RandomStream& stream) {
  if (params.n_agents < 1) {
    throw std::invalid_argument("n_agents must be at least 1");
  }
  std::vector<double> tastes(params.n_agents);
  for (double& t : tastes) {
    t = stream.normal(params.epsilon, 1.0);
  }
  return TastePopulation(std::move(tastes));
}

}  // namespace herd
