#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "powdiv/bahadur.hpp"
#include "powdiv/types.hpp"

namespace powdiv {

/// Invalid or unresolvable experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ExperimentKind {
  stat,
  tail,
  slope,
  efficiency,
  projection,
  assumptions,
  contiguity,
  asymptotics
};

enum class OutputFormat { csv, json_lines };

/// Named distribution family: "uniform", "half_support", "truncated_geometric"
/// (the latter takes the rate parameter x and spans k+1 cells).
struct FamilySpec {
  std::string name = "uniform";
  double x = 1.0;
};

/// Cell-count rule k(n): either fixed or floor(coeff * n^exponent), clamped
/// below at min_k.
struct KRule {
  enum class Type { fixed, power };
  Type type = Type::power;
  std::int64_t fixed_k = 2;
  double coeff = 1.0;
  double exponent = 0.3;
  std::int64_t min_k = 2;

  std::int64_t eval(std::int64_t n) const;
  double eval_real(double n) const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::stat;
  FamilySpec p_family;
  FamilySpec q_family;
  std::vector<double> alphas;
  std::vector<std::int64_t> n_grid;
  KRule k_rule;
  std::vector<double> deltas;
  std::int64_t reps = 1000;
  Seed seed;
  std::string method = "auto";  // auto | exact | mc
  double exact_budget = 1e7;
  double confidence = 0.95;
  // efficiency
  std::vector<std::pair<double, double>> alpha_pairs;
  std::string c_limit = "one";  // one | inf | zero | <number>
  // asymptotics
  SequenceSpec seq1;
  SequenceSpec seq2;
  std::pair<double, double> seq_deltas{1.0, 1.0};

  std::string out_path;
  OutputFormat format = OutputFormat::csv;
};

/// One flat output record. Fields that do not apply to a kind serialize as
/// "na"; values can be +infinity or explicitly indeterminate. runtime_ms is
/// in-memory diagnostics only and is never written to output files, so equal
/// configs and seeds produce byte-identical files.
struct ResultRow {
  std::string kind;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::int64_t n = -1;
  std::int64_t k = -1;
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed_value = 0;
  std::uint64_t seed_stream = 0;
  std::string method;
  double value = std::numeric_limits<double>::quiet_NaN();
  bool value_indeterminate = false;
  double ci_low = std::numeric_limits<double>::quiet_NaN();
  double ci_high = std::numeric_limits<double>::quiet_NaN();
  std::optional<RateConditionReport> conditions;
  std::string detail;
  double runtime_ms = 0.0;
};

/// Parse a JSON config document (the CLI layers flag overrides on top).
ExperimentConfig config_from_json_text(const std::string& text);

/// Execute the configured experiment. Rows come out in deterministic
/// config-grid order. Throws ConfigError / CapacityError for exit codes 2/3.
std::vector<ResultRow> run(const ExperimentConfig& config);

/// Serialize rows. CSV has a fixed documented column order; JSON lines carry
/// one object per row with stable keys. Floating values use 17 significant
/// digits.
void emit(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& os);

const char* kind_name(ExperimentKind kind);

}  // namespace powdiv
