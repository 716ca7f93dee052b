#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "nsk/config.hpp"
#include "nsk/errors.hpp"
#include "nsk/report.hpp"
#include "nsk/scenario.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Options& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "Scenario config (JSON)")->check(CLI::ExistingFile);
  if (config_required) c->required();
  cmd->add_option("--out", o.out, "Output directory (overrides NSK_OUTPUT_DIR and the config)");
  cmd->add_option("--seed", o.seed, "Seed for randomized data (overrides the config)");
  cmd->add_option("--threads", o.threads, "Worker threads for sweep")->check(CLI::PositiveNumber);
}

void print(const nsk::ScenarioOutcome& o, const std::string& prefix = "") {
  for (const auto& line : o.lines) std::cout << prefix << line << '\n';
  if (!o.executed)
    std::cerr << prefix << "error: " << o.error_kind << ": " << o.error_message << '\n';
  const int code = nsk::exit_code(o);
  std::cout << prefix << "verdict: " << (code == 0 ? "pass" : code == 2 ? "fail" : "error")
            << " (" << o.out_dir.string() << ")\n";
}

int run_single(nsk::ScenarioKind kind, const Options& o) {
  const std::string text = o.config.empty() ? std::string("{}") : nsk::read_file(o.config);
  nsk::ScenarioConfig config = nsk::parse_config(text, kind, o.seed);
  if (config.kind != kind)
    throw nsk::ValidationError(std::string("kind: config is '") + nsk::kind_name(config.kind) +
                               "' but the subcommand runs '" + nsk::kind_name(kind) + "'");
  const auto out_dir = nsk::resolve_output_dir(o.out, config.output_dir);
  const auto outcome = nsk::run_scenario(config, out_dir);
  print(outcome);
  return nsk::exit_code(outcome);
}

int run_sweep(const Options& o) {
  const auto scenarios = nsk::parse_sweep(nsk::read_file(o.config), o.seed);
  const auto out_dir = nsk::resolve_output_dir(o.out, "");
  const auto outcomes = nsk::run_sweep(scenarios, out_dir, o.threads);
  for (const auto& oc : outcomes) print(oc, oc.out_dir.filename().string() + ": ");
  const int code = nsk::exit_code(outcomes);
  std::cout << "sweep verdict: " << (code == 0 ? "pass" : code == 2 ? "fail" : "error") << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear and nonlinear analysis toolkit for the critical-pressure Navier-Stokes-Korteweg system"};
  app.set_version_flag("--version", nsk::version());
  app.require_subcommand(1);

  Options o;
  struct Sub {
    const char* name;
    const char* help;
    std::optional<nsk::ScenarioKind> kind;
  };
  const Sub subs[] = {
      {"verify-symbols", "Closed-form symbols against the matrix-exponential oracle",
       nsk::ScenarioKind::SymbolVerify},
      {"linear-decay", "Fit decay exponents of the linear flow", nsk::ScenarioKind::LinearDecay},
      {"ablation", "Divergence-form against generic momentum data", nsk::ScenarioKind::Ablation},
      {"nonlinear-run", "Integrate the nonlinear system", nsk::ScenarioKind::NonlinearRun},
      {"sweep", "Run a list of scenarios on a worker pool", std::nullopt},
  };
  std::vector<std::pair<CLI::App*, std::optional<nsk::ScenarioKind>>> commands;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, o, s.kind != nsk::ScenarioKind::SymbolVerify);
    commands.emplace_back(cmd, s.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& [cmd, kind] : commands) {
      if (!cmd->parsed()) continue;
      return kind ? run_single(*kind, o) : run_sweep(o);
    }
  } catch (const nsk::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
