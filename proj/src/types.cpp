#include "powdiv/types.hpp"

#include <cmath>

#include "powdiv/detail/sum.hpp"

namespace powdiv {

ProbVec::ProbVec(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("ProbVec: k must be >= 1");
  }
  detail::CompensatedSum acc;
  for (std::size_t j = 0; j < probs_.size(); ++j) {
    const double p = probs_[j];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("ProbVec: entry " + std::to_string(j) + " = " +
                                  std::to_string(p) + " must be finite and >= 0");
    }
    acc.add(p);
  }
  const double tol = 1e-12 * static_cast<double>(probs_.size());
  if (std::abs(acc.value() - 1.0) > tol) {
    throw std::invalid_argument("ProbVec: entries sum to " + std::to_string(acc.value()) +
                                ", not 1 within " + std::to_string(tol));
  }
}

ProbVec ProbVec::uniform(std::int64_t k) {
  if (k < 1) {
    throw std::invalid_argument("ProbVec::uniform: k must be >= 1");
  }
  return ProbVec(std::vector<double>(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k)));
}

Counts::Counts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw std::invalid_argument("Counts: k must be >= 1");
  }
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    if (counts_[j] < 0) {
      throw std::invalid_argument("Counts: entry " + std::to_string(j) + " is negative");
    }
    n_ += counts_[j];
  }
}

}  // namespace powdiv
