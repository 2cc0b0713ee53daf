#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace powdiv {

/// Thrown when a requested computation exceeds a configured size budget
/// (type-class enumeration, sample-size search, ...).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a constraint level cannot be met by any admissible input.
/// Carries the achievable range so callers can adjust.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double low, double high)
      : std::runtime_error(what), achievable_low(low), achievable_high(high) {}
  double achievable_low;
  double achievable_high;
};

/// Divergence order alpha > 0. Orders within kUnitWindow of 1 are treated as
/// the logarithmic limit case everywhere (the generic closed forms are
/// numerically catastrophic as alpha -> 1).
class Order {
 public:
  static constexpr double kUnitWindow = 1e-9;

  explicit Order(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0)) {
      throw std::domain_error("Order: alpha must be > 0, got " + std::to_string(alpha));
    }
  }

  double alpha() const { return alpha_; }
  bool is_unit() const { return alpha_ > 1.0 - kUnitWindow && alpha_ < 1.0 + kUnitWindow; }

 private:
  double alpha_;
};

/// A finite probability distribution: entries >= 0 summing to 1 within
/// 1e-12 * k absolute tolerance.
class ProbVec {
 public:
  explicit ProbVec(std::vector<double> probs);

  static ProbVec uniform(std::int64_t k);

  std::int64_t k() const { return static_cast<std::int64_t>(probs_.size()); }
  double operator[](std::int64_t j) const { return probs_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& data() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Nonnegative integer cell frequencies; n is their total.
class Counts {
 public:
  explicit Counts(std::vector<std::int64_t> counts);

  std::int64_t k() const { return static_cast<std::int64_t>(counts_.size()); }
  std::int64_t n() const { return n_; }
  std::int64_t operator[](std::int64_t j) const { return counts_[static_cast<std::size_t>(j)]; }
  const std::vector<std::int64_t>& data() const { return counts_; }

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

/// RNG seed. (value, stream) select independent deterministic streams;
/// replicate substreams are derived with substream().
struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream = 0;
};

enum class DivergenceKind { power, renyi };

struct DivergenceValue {
  double value;
  Order order;
  DivergenceKind kind;
};

/// Extended nonnegative real: finite value, +infinity, or indeterminate
/// (0 * inf). Never a silent NaN.
struct ExtReal {
  enum class Kind { finite, infinite, indeterminate };

  Kind kind = Kind::finite;
  double value = 0.0;  // meaningful only when kind == finite

  static ExtReal finite(double v) { return {Kind::finite, v}; }
  static ExtReal infinity() { return {Kind::infinite, 0.0}; }
  static ExtReal indeterminate() { return {Kind::indeterminate, 0.0}; }

  bool is_finite() const { return kind == Kind::finite; }
  bool is_infinite() const { return kind == Kind::infinite; }
  bool is_indeterminate() const { return kind == Kind::indeterminate; }
};

}  // namespace powdiv
