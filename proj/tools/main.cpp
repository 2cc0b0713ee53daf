#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "powdiv/experiment.hpp"

namespace {

namespace fs = std::filesystem;
using powdiv::ExperimentConfig;
using powdiv::ExperimentKind;

struct Overrides {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format;
  std::int64_t reps = 0;
  bool reps_set = false;
  double exact_budget = 0.0;
  bool budget_set = false;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", ov.seed, "RNG seed (overrides config)")->each([&](const std::string&) {
    ov.seed_set = true;
  });
  cmd->add_option("--out", ov.out, "output file path");
  cmd->add_option("--format", ov.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--reps", ov.reps, "Monte Carlo replicates")->each([&](const std::string&) {
    ov.reps_set = true;
  });
  cmd->add_option("--exact-budget", ov.exact_budget, "max type-class size for exact tails")
      ->each([&](const std::string&) { ov.budget_set = true; });
}

ExperimentConfig assemble(ExperimentKind kind, const Overrides& ov) {
  ExperimentConfig cfg;
  if (!ov.config_path.empty()) {
    std::ifstream in(ov.config_path);
    if (!in) {
      throw powdiv::ConfigError("config: cannot open '" + ov.config_path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    cfg = powdiv::config_from_json_text(text.str());
  }
  cfg.kind = kind;  // the subcommand wins over the file
  if (ov.seed_set) {
    cfg.seed.value = ov.seed;
  }
  if (!ov.out.empty()) {
    cfg.out_path = ov.out;
  }
  if (!ov.format.empty()) {
    cfg.format = ov.format == "csv" ? powdiv::OutputFormat::csv
                                    : powdiv::OutputFormat::json_lines;
  }
  if (ov.reps_set) {
    cfg.reps = ov.reps;
  }
  if (ov.budget_set) {
    cfg.exact_budget = ov.exact_budget;
  }
  return cfg;
}

fs::path default_out_path(const ExperimentConfig& cfg) {
  const char* ext = cfg.format == powdiv::OutputFormat::csv ? ".csv" : ".jsonl";
  fs::path name = std::string(powdiv::kind_name(cfg.kind)) + ext;
  if (const char* dir = std::getenv("POWDIV_OUT_DIR"); dir != nullptr && *dir != '\0') {
    return fs::path(dir) / name;
  }
  return name;
}

int execute(ExperimentKind kind, const Overrides& ov) {
  const ExperimentConfig cfg = assemble(kind, ov);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<powdiv::ResultRow> rows = powdiv::run(cfg);
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const fs::path out = cfg.out_path.empty() ? default_out_path(cfg) : fs::path(cfg.out_path);
  if (!out.parent_path().empty()) {
    fs::create_directories(out.parent_path());
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open output file '" + out.string() + "'");
  }
  powdiv::emit(rows, cfg.format, os);
  os.close();
  if (!os) {
    throw std::runtime_error("write failed for '" + out.string() + "'");
  }
  std::cerr << powdiv::kind_name(cfg.kind) << ": " << rows.size() << " rows -> " << out.string()
            << " (" << elapsed << " ms)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-divergence goodness-of-fit workbench"};
  app.require_subcommand(1);

  struct Sub {
    ExperimentKind kind;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {ExperimentKind::stat, "stat", "simulate divergence statistics"},
      {ExperimentKind::tail, "tail", "exact or Monte Carlo tail probabilities"},
      {ExperimentKind::slope, "slope", "finite-n error exponents with brackets"},
      {ExperimentKind::efficiency, "efficiency", "Bahadur efficiency ratios"},
      {ExperimentKind::projection, "projection", "constrained information projections"},
      {ExperimentKind::assumptions, "assumptions", "schedule assumption diagnostics"},
      {ExperimentKind::contiguity, "contiguity", "contiguity diagnostics and witnesses"},
      {ExperimentKind::asymptotics, "asymptotics", "generating-sequence ratio probes"},
  };

  std::vector<Overrides> overrides(std::size(subs));
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common_options(cmd, overrides[i]);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < std::size(subs); ++i) {
      if (app.get_subcommand(subs[i].name)->parsed()) {
        return execute(subs[i].kind, overrides[i]);
      }
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const powdiv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const powdiv::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
