#include "powdiv/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "powdiv/alternatives.hpp"
#include "powdiv/divergence.hpp"
#include "powdiv/projection.hpp"
#include "powdiv/sampling.hpp"
#include "powdiv/tail.hpp"

namespace powdiv {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  if (std::isnan(v)) {
    return "na";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_value(const ResultRow& row) {
  if (row.value_indeterminate) {
    return "indeterminate";
  }
  return fmt17(row.value);
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

// ---------------------------------------------------------------------------
// config parsing

ExperimentKind parse_kind(const std::string& s) {
  if (s == "stat") return ExperimentKind::stat;
  if (s == "tail") return ExperimentKind::tail;
  if (s == "slope") return ExperimentKind::slope;
  if (s == "efficiency") return ExperimentKind::efficiency;
  if (s == "projection") return ExperimentKind::projection;
  if (s == "assumptions") return ExperimentKind::assumptions;
  if (s == "contiguity") return ExperimentKind::contiguity;
  if (s == "asymptotics") return ExperimentKind::asymptotics;
  throw ConfigError("kind: unknown experiment kind '" + s + "'");
}

FamilySpec parse_family(const json& j, const std::string& field) {
  FamilySpec f;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw ConfigError(field + ".name: missing family name");
  }
  f.name = j["name"].get<std::string>();
  if (f.name != "uniform" && f.name != "half_support" && f.name != "truncated_geometric") {
    throw ConfigError(field + ".name: unknown family '" + f.name + "'");
  }
  if (j.contains("x")) {
    f.x = j["x"].get<double>();
  }
  return f;
}

KRule parse_k_rule(const json& j) {
  KRule r;
  const std::string type = j.value("type", std::string("power"));
  if (type == "fixed") {
    r.type = KRule::Type::fixed;
    if (!j.contains("value")) {
      throw ConfigError("k.value: fixed k rule needs a value");
    }
    r.fixed_k = j["value"].get<std::int64_t>();
    if (r.fixed_k < 1) {
      throw ConfigError("k.value: must be >= 1");
    }
  } else if (type == "power") {
    r.type = KRule::Type::power;
    r.coeff = j.value("coeff", 1.0);
    r.exponent = j.value("exponent", 0.3);
    r.min_k = j.value("min", static_cast<std::int64_t>(2));
    if (!(r.coeff > 0.0) || !(r.exponent >= 0.0)) {
      throw ConfigError("k: power rule needs coeff > 0 and exponent >= 0");
    }
  } else {
    throw ConfigError("k.type: unknown rule '" + type + "'");
  }
  return r;
}

SequenceSpec parse_sequence(const json& j, const std::string& field) {
  SequenceSpec s;
  const std::string form = j.value("form", std::string("constant_one"));
  if (form == "constant_one") {
    s.form = SequenceForm::constant_one;
  } else if (form == "power_of_n_plain") {
    s.form = SequenceForm::power_of_n_plain;
  } else if (form == "power_of_n_over_log") {
    s.form = SequenceForm::power_of_n_over_log;
  } else if (form == "power_of_k_over_log") {
    s.form = SequenceForm::power_of_k_over_log;
  } else {
    throw ConfigError(field + ".form: unknown sequence form '" + form + "'");
  }
  s.b = j.value("b", 0.0);
  s.d = j.value("d", 1.0);
  s.alpha = j.value("alpha", 1.0);
  return s;
}

// ---------------------------------------------------------------------------
// family resolution

ProbVec build_family(const FamilySpec& f, std::int64_t k) {
  if (f.name == "uniform") {
    return ProbVec::uniform(k);
  }
  if (f.name == "half_support") {
    return half_support_alternative(std::max<std::int64_t>(2, k));
  }
  // truncated_geometric spans k+1 cells by construction
  return truncated_geometric(std::max<std::int64_t>(2, k), f.x);
}

std::pair<ProbVec, ProbVec> resolve_pair(const ExperimentConfig& cfg, std::int64_t n) {
  const std::int64_t k = cfg.k_rule.eval(n);
  auto build_or_fail = [&](const FamilySpec& f, const char* field) {
    try {
      return build_family(f, k);
    } catch (const std::exception& e) {
      throw ConfigError(std::string(field) + ": family '" + f.name +
                        "' rejects k(n=" + std::to_string(n) + ")=" + std::to_string(k) +
                        ": " + e.what());
    }
  };
  ProbVec p = build_or_fail(cfg.p_family, "p");
  ProbVec q = build_or_fail(cfg.q_family, "q");
  if (p.k() != q.k()) {
    if (cfg.q_family.name == "uniform") {
      q = ProbVec::uniform(p.k());
    } else if (cfg.p_family.name == "uniform") {
      p = ProbVec::uniform(q.k());
    } else {
      throw ConfigError("p/q: families span different cell counts (" +
                        std::to_string(p.k()) + " vs " + std::to_string(q.k()) + ")");
    }
  }
  return {std::move(p), std::move(q)};
}

double family_limit(const FamilySpec& f, double alpha) {
  if (f.name == "half_support") {
    return half_support_limit(alpha);
  }
  if (f.name == "truncated_geometric") {
    return truncated_geometric_limit(alpha, f.x);
  }
  throw ConfigError("p.name: no closed-form divergence limit for family '" + f.name + "'");
}

std::string flag_detail(bool converged, std::int64_t iterations, double constraint) {
  std::ostringstream os;
  os << "converged=" << (converged ? "true" : "false") << ";iterations=" << iterations
     << ";constraint=" << fmt17(constraint);
  return os.str();
}

ResultRow base_row(const ExperimentConfig& cfg) {
  ResultRow row;
  row.kind = kind_name(cfg.kind);
  row.seed_value = cfg.seed.value;
  row.seed_stream = cfg.seed.stream;
  return row;
}

void attach_conditions(ResultRow& row, double alpha) {
  if (row.n > 0 && row.k > 0 && alpha > 0.0) {
    row.conditions = check_rate_conditions(row.n, row.k, alpha);
  }
}

// ---------------------------------------------------------------------------
// per-kind runners

void run_stat(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  for (const double alpha : cfg.alphas) {
    for (const std::int64_t n : cfg.n_grid) {
      Timer timer;
      auto [p, q] = resolve_pair(cfg, n);
      const auto sims = simulate_statistics(p, q, Order(alpha), n, cfg.reps, cfg.seed);
      double mean = 0.0;
      for (double s : sims) {
        mean += s;
      }
      mean /= static_cast<double>(sims.size());
      double var = 0.0;
      for (double s : sims) {
        var += (s - mean) * (s - mean);
      }
      var /= std::max<double>(1.0, static_cast<double>(sims.size() - 1));
      const double se = std::sqrt(var / static_cast<double>(sims.size()));

      ResultRow row = base_row(cfg);
      row.alpha = alpha;
      row.n = n;
      row.k = p.k();
      row.method = "monte_carlo";
      row.value = mean;
      row.ci_low = mean - 1.959963984540054 * se;
      row.ci_high = mean + 1.959963984540054 * se;
      row.detail = "reps=" + std::to_string(cfg.reps);
      attach_conditions(row, alpha);
      row.runtime_ms = timer.ms();
      rows.push_back(std::move(row));
    }
  }
}

void run_tail_like(const ExperimentConfig& cfg, std::vector<ResultRow>& rows,
                   bool slope_kind) {
  for (const double alpha : cfg.alphas) {
    for (const std::int64_t n : cfg.n_grid) {
      for (const double delta : cfg.deltas) {
        Timer timer;
        auto [p, q] = resolve_pair(cfg, n);
        const double type_count = composition_count(q.k(), n);
        const bool exact = cfg.method == "exact" ||
                           (cfg.method == "auto" && type_count <= cfg.exact_budget);
        std::string warn;
        if (cfg.method == "auto" && !exact) {
          warn = ";fallback=mc;type_count=" + fmt17(type_count);
        }
        TailEstimate est;
        if (exact) {
          est = exact_tail(q, p, Order(alpha), n, delta, cfg.exact_budget);
        } else {
          if (cfg.reps < 100) {
            throw ConfigError("reps: monte carlo tails need reps >= 100");
          }
          est = mc_tail(q, p, Order(alpha), n, delta, cfg.reps, cfg.seed, cfg.confidence);
        }

        ResultRow row = base_row(cfg);
        row.alpha = alpha;
        row.n = n;
        row.k = q.k();
        row.delta = delta;
        row.method = est.method == TailMethod::exact ? "exact" : "monte_carlo";
        if (slope_kind) {
          row.detail = "tail=" + fmt17(est.value);
          if (est.value > 0.0) {
            const BahadurContext ctx(alpha, delta, n, q.k());
            row.value = empirical_slope(ctx, est);
          } else {
            row.detail += ";error=tail underflow: increase n budget or use exact method";
          }
          try {
            const auto [lo, hi] = sanov_sandwich(q, Order(alpha), delta, n);
            row.ci_low = lo;
            row.ci_high = hi;
            row.detail += ";bracket=types";
          } catch (const std::exception& e) {
            row.detail += std::string(";bracket_error=") + e.what();
          }
        } else {
          row.value = est.value;
          row.ci_low = est.ci_low;
          row.ci_high = est.ci_high;
          row.detail = "reps=" + std::to_string(est.reps);
        }
        row.detail += warn;
        attach_conditions(row, alpha);
        row.runtime_ms = timer.ms();
        rows.push_back(std::move(row));
      }
    }
  }
}

ExtReal parse_c_limit(const std::string& s) {
  if (s == "one") return ExtReal::finite(1.0);
  if (s == "zero") return ExtReal::finite(0.0);
  if (s == "inf") return ExtReal::infinity();
  try {
    return ExtReal::finite(std::stod(s));
  } catch (...) {
    throw ConfigError("c_limit: expected one|zero|inf or a number, got '" + s + "'");
  }
}

void run_efficiency(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  if (cfg.alpha_pairs.empty()) {
    throw ConfigError("alpha_pairs: efficiency runs need at least one (alpha1, alpha2) pair");
  }
  const ExtReal c_limit = parse_c_limit(cfg.c_limit);
  for (const auto& [a1, a2] : cfg.alpha_pairs) {
    Timer timer;
    double d1, d2;
    if (cfg.deltas.size() >= 2) {
      d1 = cfg.deltas[0];
      d2 = cfg.deltas[1];
    } else {
      d1 = family_limit(cfg.p_family, a1);
      d2 = family_limit(cfg.p_family, a2);
    }
    ResultRow row = base_row(cfg);
    row.alpha = a1;
    row.delta = d1;
    row.detail = "alpha2=" + fmt17(a2) + ";delta2=" + fmt17(d2) + ";c_limit=" + cfg.c_limit;
    if (a1 < a2 && a2 <= 1.0 + Order::kUnitWindow && c_limit.is_finite() &&
        c_limit.value == 1.0) {
      row.method = "closed_form_ratio";
      row.value = efficiency_ratio_closed_form(a1, d1, a2, d2);
    } else {
      row.method = "bahadur_efficiency";
      const ExtReal be = bahadur_efficiency(a1, d1, a2, d2, c_limit);
      if (be.is_indeterminate()) {
        row.value_indeterminate = true;
      } else if (be.is_infinite()) {
        row.value = std::numeric_limits<double>::infinity();
      } else {
        row.value = be.value;
      }
    }
    row.runtime_ms = timer.ms();
    rows.push_back(std::move(row));
  }
}

void run_projection(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  for (const double alpha : cfg.alphas) {
    for (const std::int64_t n : cfg.n_grid) {
      for (const double delta : cfg.deltas) {
        auto [p, q] = resolve_pair(cfg, n);
        (void)p;  // projections only use the null
        const Order order(alpha);

        if (alpha <= 1.0 + Order::kUnitWindow) {
          Timer timer;
          ResultRow row = base_row(cfg);
          row.alpha = alpha;
          row.n = n;
          row.k = q.k();
          row.delta = delta;
          row.method = "mixture";
          try {
            const ProjectionResult mix = mixture_construction(q, order, delta);
            row.value = mix.kl_value;
            row.ci_low = delta;
            row.ci_high = delta + mix.upper_gap;
            row.detail = flag_detail(mix.converged, mix.iterations, mix.constraint_value) +
                         ";a_plus=" + std::to_string(mix.a_plus_size) +
                         ";a_minus=" + std::to_string(mix.a_minus_size);
          } catch (const InfeasibleError& e) {
            row.detail = std::string("infeasible=") + e.what();
          }
          attach_conditions(row, alpha);
          row.runtime_ms = timer.ms();
          rows.push_back(std::move(row));
        }

        Timer timer;
        ResultRow row = base_row(cfg);
        row.alpha = alpha;
        row.n = n;
        row.k = q.k();
        row.delta = delta;
        row.method = "numeric";
        const ProjectionResult num = numeric_projection(q, order, delta);
        row.value = num.kl_value;
        row.ci_low = delta;
        row.detail = flag_detail(num.converged, num.iterations, num.constraint_value);
        attach_conditions(row, alpha);
        row.runtime_ms = timer.ms();
        rows.push_back(std::move(row));
      }
    }
  }
}

Schedule make_schedule(const ExperimentConfig& cfg, bool null_side) {
  return [cfg, null_side](std::int64_t n) {
    auto [p, q] = resolve_pair(cfg, n);
    return null_side ? q : p;
  };
}

void run_assumptions(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  for (const double alpha : cfg.alphas) {
    Timer timer;
    const AssumptionReport rep = check_assumptions(make_schedule(cfg, true),
                                                   make_schedule(cfg, false), alpha,
                                                   cfg.n_grid);
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
      ResultRow row = base_row(cfg);
      row.alpha = alpha;
      row.n = cfg.n_grid[i];
      row.k = resolve_pair(cfg, row.n).second.k();
      row.method = "analytic";
      row.value = rep.delta_seq[i];
      row.detail = "rho=" + fmt17(rep.rho_seq[i]) + ";qmax=" + fmt17(rep.qmax_seq[i]);
      if (i + 1 == cfg.n_grid.size()) {
        row.detail += ";delta_hat=" + fmt17(rep.delta_hat) +
                      ";a1_ok=" + (rep.a1_ok ? std::string("true") : std::string("false")) +
                      ";a2_ok=" + (rep.a2_ok ? std::string("true") : std::string("false")) +
                      ";rho_hat=" + fmt17(rep.rho_hat) +
                      ";converged=" + (rep.converged ? std::string("true") : std::string("false"));
      }
      attach_conditions(row, alpha);
      row.runtime_ms = timer.ms();
      rows.push_back(std::move(row));
    }
  }
}

void run_contiguity(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  Timer timer;
  const ContiguityReport rep = contiguity_diagnostic(make_schedule(cfg, true),
                                                     make_schedule(cfg, false), cfg.n_grid);
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    ResultRow row = base_row(cfg);
    row.alpha = 1.0;
    row.n = cfg.n_grid[i];
    row.k = resolve_pair(cfg, row.n).second.k();
    row.method = "analytic";
    row.value = rep.d1_seq[i];
    const auto& w = rep.witnesses[i];
    row.detail = "witness_q=" + fmt17(w.q_mass) + ";witness_p=" + fmt17(w.p_mass) +
                 ";witness_cells=" + std::to_string(w.cells.size());
    if (i + 1 == cfg.n_grid.size()) {
      row.detail += ";bounded=" + (rep.bounded_flag ? std::string("true") : std::string("false"));
    }
    attach_conditions(row, 1.0);
    row.runtime_ms = timer.ms();
    rows.push_back(std::move(row));
  }
}

void run_asymptotics(const ExperimentConfig& cfg, std::vector<ResultRow>& rows) {
  Timer timer;
  const KRule rule = cfg.k_rule;
  const auto ratios = ratio_limit_probe(
      cfg.seq1, cfg.seq2, cfg.seq_deltas, cfg.n_grid,
      [rule](double n) { return rule.eval_real(n); });
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    ResultRow row = base_row(cfg);
    row.alpha = cfg.seq1.alpha;
    row.n = cfg.n_grid[i];
    row.method = "analytic";
    row.value = ratios[i];
    row.detail = "alpha2=" + fmt17(cfg.seq2.alpha);
    row.runtime_ms = timer.ms();
    rows.push_back(std::move(row));
  }
}

}  // namespace

std::int64_t KRule::eval(std::int64_t n) const {
  if (type == Type::fixed) {
    return fixed_k;
  }
  const auto k = static_cast<std::int64_t>(
      std::floor(coeff * std::pow(static_cast<double>(n), exponent)));
  return std::max(min_k, k);
}

double KRule::eval_real(double n) const {
  if (type == Type::fixed) {
    return static_cast<double>(fixed_k);
  }
  return std::max(static_cast<double>(min_k), coeff * std::pow(n, exponent));
}

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::stat: return "stat";
    case ExperimentKind::tail: return "tail";
    case ExperimentKind::slope: return "slope";
    case ExperimentKind::efficiency: return "efficiency";
    case ExperimentKind::projection: return "projection";
    case ExperimentKind::assumptions: return "assumptions";
    case ExperimentKind::contiguity: return "contiguity";
    case ExperimentKind::asymptotics: return "asymptotics";
  }
  return "unknown";
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (!j.contains("kind")) {
    throw ConfigError("kind: missing");
  }
  cfg.kind = parse_kind(j["kind"].get<std::string>());
  if (j.contains("p")) cfg.p_family = parse_family(j["p"], "p");
  if (j.contains("q")) cfg.q_family = parse_family(j["q"], "q");
  if (j.contains("alphas")) cfg.alphas = j["alphas"].get<std::vector<double>>();
  if (j.contains("n")) cfg.n_grid = j["n"].get<std::vector<std::int64_t>>();
  if (j.contains("k")) cfg.k_rule = parse_k_rule(j["k"]);
  if (j.contains("deltas")) cfg.deltas = j["deltas"].get<std::vector<double>>();
  if (j.contains("reps")) cfg.reps = j["reps"].get<std::int64_t>();
  if (j.contains("seed")) {
    cfg.seed.value = j["seed"].value("value", 0ULL);
    cfg.seed.stream = j["seed"].value("stream", 0ULL);
  }
  if (j.contains("method")) cfg.method = j["method"].get<std::string>();
  if (j.contains("exact_budget")) cfg.exact_budget = j["exact_budget"].get<double>();
  if (j.contains("confidence")) cfg.confidence = j["confidence"].get<double>();
  if (j.contains("alpha_pairs")) {
    for (const auto& pair : j["alpha_pairs"]) {
      cfg.alpha_pairs.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  }
  if (j.contains("c_limit")) {
    cfg.c_limit = j["c_limit"].is_string() ? j["c_limit"].get<std::string>()
                                           : fmt17(j["c_limit"].get<double>());
  }
  if (j.contains("sequences")) {
    const auto& seqs = j["sequences"];
    if (!seqs.is_array() || seqs.size() != 2) {
      throw ConfigError("sequences: expected an array of exactly two sequence specs");
    }
    cfg.seq1 = parse_sequence(seqs[0], "sequences[0]");
    cfg.seq2 = parse_sequence(seqs[1], "sequences[1]");
  }
  if (j.contains("sequence_deltas")) {
    cfg.seq_deltas.first = j["sequence_deltas"].at(0).get<double>();
    cfg.seq_deltas.second = j["sequence_deltas"].at(1).get<double>();
  }
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("format")) {
    const std::string f = j["format"].get<std::string>();
    if (f == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (f == "jsonl") {
      cfg.format = OutputFormat::json_lines;
    } else {
      throw ConfigError("format: expected csv or jsonl, got '" + f + "'");
    }
  }
  return cfg;
}

std::vector<ResultRow> run(const ExperimentConfig& cfg) {
  const bool needs_grid = cfg.kind != ExperimentKind::efficiency;
  if (needs_grid) {
    if (cfg.n_grid.empty()) {
      throw ConfigError("n: grid must be nonempty");
    }
    for (std::size_t i = 1; i < cfg.n_grid.size(); ++i) {
      if (cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
        throw ConfigError("n: grid must be strictly increasing");
      }
    }
  }
  const bool needs_alphas = cfg.kind == ExperimentKind::stat ||
                            cfg.kind == ExperimentKind::tail ||
                            cfg.kind == ExperimentKind::slope ||
                            cfg.kind == ExperimentKind::projection ||
                            cfg.kind == ExperimentKind::assumptions;
  if (needs_alphas && cfg.alphas.empty()) {
    throw ConfigError("alphas: must be nonempty");
  }
  const bool needs_deltas = cfg.kind == ExperimentKind::tail ||
                            cfg.kind == ExperimentKind::slope ||
                            cfg.kind == ExperimentKind::projection;
  if (needs_deltas && cfg.deltas.empty()) {
    throw ConfigError("deltas: must be nonempty");
  }
  if (cfg.reps < 1) {
    throw ConfigError("reps: must be >= 1");
  }

  std::vector<ResultRow> rows;
  switch (cfg.kind) {
    case ExperimentKind::stat:
      run_stat(cfg, rows);
      break;
    case ExperimentKind::tail:
      run_tail_like(cfg, rows, false);
      break;
    case ExperimentKind::slope:
      run_tail_like(cfg, rows, true);
      break;
    case ExperimentKind::efficiency:
      run_efficiency(cfg, rows);
      break;
    case ExperimentKind::projection:
      run_projection(cfg, rows);
      break;
    case ExperimentKind::assumptions:
      run_assumptions(cfg, rows);
      break;
    case ExperimentKind::contiguity:
      run_contiguity(cfg, rows);
      break;
    case ExperimentKind::asymptotics:
      run_asymptotics(cfg, rows);
      break;
  }
  return rows;
}

namespace {

constexpr const char* kCsvHeader =
    "kind,alpha,n,k,delta,seed,stream,method,value,ci_low,ci_high,"
    "n_over_k,n_over_k_flag,n_over_klogk,n_over_klogk_flag,"
    "klogn_over_n,klogn_over_n_flag,kheavy_logn_over_n,kheavy_logn_over_n_flag,"
    "kbpow_logn_over_n,kbpow_logn_over_n_flag,detail";

std::string sanitize_detail(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::erase_if(s, [](char c) { return c == '"' || c == '\\'; });
  return s;
}

std::string fmt_int(std::int64_t v) { return v < 0 ? "na" : std::to_string(v); }

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << kCsvHeader << "\n";
  for (const auto& row : rows) {
    os << row.kind << ',' << fmt17(row.alpha) << ',' << fmt_int(row.n) << ',' << fmt_int(row.k)
       << ',' << fmt17(row.delta) << ',' << row.seed_value << ',' << row.seed_stream << ','
       << row.method << ',' << fmt_value(row) << ',' << fmt17(row.ci_low) << ','
       << fmt17(row.ci_high) << ',';
    if (row.conditions) {
      const auto& c = *row.conditions;
      os << fmt17(c.n_over_k) << ',' << to_string(c.mean_bin_ok) << ','
         << fmt17(c.n_over_k_log_k) << ',' << to_string(c.log_bin_ok) << ','
         << fmt17(c.k_log_n_over_n) << ',' << to_string(c.cells_rate_ok) << ','
         << fmt17(c.k_heavy_log_n_over_n) << ',' << to_string(c.heavy_rate_ok) << ','
         << fmt17(c.k_bpow_log_n_over_n) << ',' << to_string(c.bpow_rate_ok);
    } else {
      os << "na,na,na,na,na,na,na,na,na,na";
    }
    os << ',' << sanitize_detail(row.detail) << "\n";
  }
}

void append_json_field(std::string& line, const char* key, const std::string& value,
                       bool quote) {
  line += '"';
  line += key;
  line += "\":";
  if (quote) {
    line += '"';
    line += value;
    line += '"';
  } else {
    line += value;
  }
  line += ',';
}

std::string json_number_or_string(double v, bool indeterminate) {
  if (indeterminate) {
    return "\"indeterminate\"";
  }
  if (std::isnan(v)) {
    return "\"na\"";
  }
  if (std::isinf(v)) {
    return v > 0 ? "\"inf\"" : "\"-inf\"";
  }
  return fmt17(v);
}

void emit_jsonl(const std::vector<ResultRow>& rows, std::ostream& os) {
  for (const auto& row : rows) {
    std::string line = "{";
    append_json_field(line, "kind", row.kind, true);
    append_json_field(line, "alpha", json_number_or_string(row.alpha, false), false);
    append_json_field(line, "n", fmt_int(row.n) == "na" ? "null" : std::to_string(row.n), false);
    append_json_field(line, "k", fmt_int(row.k) == "na" ? "null" : std::to_string(row.k), false);
    append_json_field(line, "delta", json_number_or_string(row.delta, false), false);
    append_json_field(line, "seed", std::to_string(row.seed_value), false);
    append_json_field(line, "stream", std::to_string(row.seed_stream), false);
    append_json_field(line, "method", row.method, true);
    append_json_field(line, "value", json_number_or_string(row.value, row.value_indeterminate),
                      false);
    append_json_field(line, "ci_low", json_number_or_string(row.ci_low, false), false);
    append_json_field(line, "ci_high", json_number_or_string(row.ci_high, false), false);
    if (row.conditions) {
      const auto& c = *row.conditions;
      append_json_field(line, "n_over_k", json_number_or_string(c.n_over_k, false), false);
      append_json_field(line, "n_over_k_flag", to_string(c.mean_bin_ok), true);
      append_json_field(line, "n_over_klogk", json_number_or_string(c.n_over_k_log_k, false),
                        false);
      append_json_field(line, "n_over_klogk_flag", to_string(c.log_bin_ok), true);
      append_json_field(line, "klogn_over_n", json_number_or_string(c.k_log_n_over_n, false),
                        false);
      append_json_field(line, "klogn_over_n_flag", to_string(c.cells_rate_ok), true);
      append_json_field(line, "kheavy_logn_over_n",
                        json_number_or_string(c.k_heavy_log_n_over_n, false), false);
      append_json_field(line, "kheavy_logn_over_n_flag", to_string(c.heavy_rate_ok), true);
      append_json_field(line, "kbpow_logn_over_n",
                        json_number_or_string(c.k_bpow_log_n_over_n, false), false);
      append_json_field(line, "kbpow_logn_over_n_flag", to_string(c.bpow_rate_ok), true);
    } else {
      for (const char* key :
           {"n_over_k", "n_over_k_flag", "n_over_klogk", "n_over_klogk_flag", "klogn_over_n",
            "klogn_over_n_flag", "kheavy_logn_over_n", "kheavy_logn_over_n_flag",
            "kbpow_logn_over_n", "kbpow_logn_over_n_flag"}) {
        append_json_field(line, key, "na", true);
      }
    }
    append_json_field(line, "detail", sanitize_detail(row.detail), true);
    line.back() = '}';
    os << line << "\n";
  }
}

}  // namespace

void emit(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& os) {
  if (format == OutputFormat::csv) {
    emit_csv(rows, os);
  } else {
    emit_jsonl(rows, os);
  }
}

}  // namespace powdiv
