#include "nsk/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "json.hpp"

#include "nsk/decay.hpp"
#include "nsk/errors.hpp"
#include "nsk/integrator.hpp"
#include "nsk/log.hpp"
#include "nsk/report.hpp"
#include "nsk/verify.hpp"

namespace nsk {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code(const ScenarioOutcome& o) {
  if (!o.executed) return 1;
  return o.passed ? 0 : 2;
}

int exit_code(const std::vector<ScenarioOutcome>& outcomes) {
  int code = 0;
  for (const auto& o : outcomes) {
    const int c = exit_code(o);
    if (c == 1) return 1;
    code = std::max(code, c);
  }
  return code;
}

fs::path resolve_output_dir(const std::optional<std::string>& flag, const std::string& config_dir) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  if (!config_dir.empty()) return config_dir;
  return kDefaultOutputDir;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json decay_json(const DecayReport& r) {
  return {{"label", r.label},
          {"fitted_exponent", finite_or_null(r.fitted_exponent)},
          {"predicted_exponent", finite_or_null(r.predicted_exponent)},
          {"residual", finite_or_null(r.residual)},
          {"tolerance", r.tolerance},
          {"window", {r.window.a, r.window.b}},
          {"samples", r.samples},
          {"trust_window_ok", r.trust_window_ok},
          {"verdict", r.verdict ? "pass" : "fail"}};
}

std::string decay_line(const DecayReport& r) {
  return std::string(r.verdict ? "PASS " : "FAIL ") + r.label + ": fitted " +
         fmt("%.4f", r.fitted_exponent) + ", predicted " + fmt("%.4f", r.predicted_exponent) +
         ", tolerance " + fmt("%g", r.tolerance);
}

// Collects artifacts as they are produced so that a failure part way keeps
// everything computed before it.
class Artifacts {
 public:
  Artifacts(fs::path dir, const ScenarioConfig& config) : dir_(std::move(dir)) {
    config_ = json::parse(serialize_config(config));
    json manifest = {{"tool", "nsk"},
                     {"version", version()},
                     {"kind", kind_name(config.kind)},
                     {"seed", config.seed ? json(*config.seed) : json(nullptr)},
                     {"config", config_}};
    write_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

  void series(const NormSeries& s) {
    write_file(dir_ / "series" / (file_stem(s.descriptor()) + ".csv"), series_csv(s));
  }

  void plot(const std::string& name, const std::string& title, const std::vector<PlotCurve>& curves,
            const std::vector<GuideLine>& guides) {
    write_file(dir_ / "plots" / (name + ".svg"), loglog_svg(title, curves, guides));
  }

  void report(json body) {
    body["version"] = version();
    body["config"] = config_;
    write_file(dir_ / "report.json", body.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  json config_;
};

GuideLine guide_through(const NormSeries& s, double slope, const std::string& label) {
  // Anchored at the first positive sample.
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.times()[i] > 0 && s.values()[i] > 0)
      return {slope, s.times()[i], s.values()[i], label};
  return {slope, 1.0, 1.0, label};
}

NormSeries renamed(const NormSeries& s, const std::string& descriptor) {
  NormSeries out(descriptor);
  for (std::size_t i = 0; i < s.size(); ++i) out.append(s.times()[i], s.values()[i]);
  return out;
}

std::string slope_label(double slope) { return "predicted slope " + fmt("%.4g", slope); }

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double cutoff_eps(const DecayConfig& d, const Grid& grid) {
  return d.cutoff_eps ? *d.cutoff_eps : d.cutoff_fraction * grid.xi_max();
}

json band_json(const CutoffSpec& cutoff, const Grid& grid) {
  std::size_t low = 0, transition = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto xi = grid.wavevector(i);
    double n2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) n2 += xi[a] * xi[a];
    const double phi = cutoff(std::sqrt(n2));
    if (phi > 0) ++low;
    if (phi > 0 && phi < 1) ++transition;
  }
  return {{"eps", cutoff.eps},
          {"profile", CutoffSpec::kProfile},
          {"xi_max", grid.xi_max()},
          {"xi_min", grid.wavenumber_unit()},
          {"low_band_modes", low},
          {"transition_modes", transition}};
}

// ---- symbol-verify --------------------------------------------------------

void run_symbols(const ScenarioConfig& c, Artifacts& art, ScenarioOutcome& out) {
  const SymbolConfig& sc = *c.symbols;
  const SymbolVerification v = verify_symbols(sc, *c.seed);
  json regimes = json::array();
  for (const auto& r : v.regimes) {
    regimes.push_back({{"regime", regime_name(r.regime)},
                       {"samples", r.samples},
                       {"max_deviation", r.max_deviation},
                       {"worst_t", r.worst_t},
                       {"worst_xi", r.worst_xi},
                       {"tolerance", sc.tolerance},
                       {"verdict", r.verdict ? "pass" : "fail"}});
    out.lines.push_back(std::string(r.verdict ? "PASS " : "FAIL ") + regime_name(r.regime) +
                        ": max relative deviation " + fmt("%.3e", r.max_deviation) + " over " +
                        std::to_string(r.samples) + " samples");
  }
  out.lines.push_back(std::string(v.continuity.verdict ? "PASS " : "FAIL ") +
                      "continuity across delta* = 0: max jump " + fmt("%.3e", v.continuity.max_jump));
  art.report({{"kind", kind_name(c.kind)},
              {"verdict", v.verdict ? "pass" : "fail"},
              {"regimes", regimes},
              {"continuity",
               {{"trials", v.continuity.trials},
                {"max_jump", v.continuity.max_jump},
                {"tolerance", sc.continuity_tolerance},
                {"verdict", v.continuity.verdict ? "pass" : "fail"}}}});
  out.passed = v.verdict;
}

// ---- linear-decay ---------------------------------------------------------

void run_linear(const ScenarioConfig& c, Artifacts& art, ScenarioOutcome& out) {
  const DecayConfig& d = *c.decay;
  const FluidParams params = build_params(*c.params);
  const Grid grid(c.grid->dim, c.grid->n, c.grid->box_len);
  const CutoffSpec cutoff(cutoff_eps(d, grid));
  const FitWindow window{d.window_a, d.window_b};
  const auto times = log_spaced(d.window_a, d.window_b, d.samples);
  const bool extremal = d.band != "heat";
  FitOptions options{d.tolerance, trust_horizon(params, grid, grid.spacing(), extremal)};

  double predicted = 0.0;
  std::string label;
  std::function<double(double)> primary, secondary, oracle;
  std::string secondary_name;
  if (d.band == "low") {
    LowBandProbe probe{params, grid, cutoff,
                       d.data == "generic" ? DataForm::Generic : DataForm::Divergence,
                       d.full_operator, d.full_operator};
    predicted = predicted_exponent(grid.dim(), d.p, d.q, d.j);
    label = "low_band_Linf_" + d.data;
    primary = [probe](double t) { return low_band_norm_gram(probe, t); };
    secondary = [probe](double t) { return low_band_norm_pipeline(probe, t); };
    secondary_name = "field_pipeline";
    if (d.oracle_check)
      oracle = [probe](double t) { return low_band_norm_gram(probe, t, oracle_symbol_table); };
  } else if (d.band == "high") {
    HighBandProbe probe{params, grid, cutoff, d.j};
    predicted = predicted_exponent(grid.dim(), d.p, d.q, d.j);
    label = "high_band_W10_j" + std::to_string(d.j);
    primary = [probe](double t) { return high_band_norm_modes(probe, t).norm; };
    secondary = [probe](double t) { return high_band_norm_pipeline(probe, t); };
    secondary_name = "field_pipeline";
  } else {
    predicted = -0.5 * grid.dim();
    label = "heat_anchor_Linf";
    primary = [&](double t) { return heat_anchor_linf(params, grid, t); };
  }

  const NormSeries series = sample_series(label, times, primary);
  art.series(series);
  DecayReport report = fit_decay(series, window, predicted, options);
  report.label = label;

  json body = {{"kind", kind_name(c.kind)}, {"band", d.band}, {"decay", decay_json(report)}};
  if (d.band != "heat") body["cutoff"] = band_json(cutoff, grid);
  body["trust_horizon"] = options.trust_end;
  out.lines.push_back(decay_line(report));
  bool pass = report.verdict;

  std::vector<PlotCurve> curves{{&series, label}};
  NormSeries oracle_series;
  if (secondary) {
    // Second route to the same operator norm at three points of the window.
    json checks = json::array();
    double worst = 0.0;
    for (double t : {times.front(), times[times.size() / 2], times.back()}) {
      const double a = primary(t), b = secondary(t);
      worst = std::max(worst, relative_gap(a, b));
      checks.push_back({{"t", t}, {"primary", a}, {secondary_name, b}});
    }
    const bool ok = worst <= kRouteTolerance;
    body["route_check"] = {{"route", secondary_name}, {"points", checks}, {"max_relative_gap", worst},
                           {"tolerance", kRouteTolerance}, {"verdict", ok ? "pass" : "fail"}};
    out.lines.push_back(std::string(ok ? "PASS " : "FAIL ") + secondary_name +
                        " agrees with the per-mode norm: max relative gap " + fmt("%.2e", worst));
    pass = pass && ok;
  }
  if (oracle) {
    oracle_series = sample_series(label + "_oracle", times, oracle);
    art.series(oracle_series);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      worst = std::max(worst, relative_gap(series.values()[i], oracle_series.values()[i]));
    const bool ok = worst <= kRouteTolerance;
    body["oracle_check"] = {{"max_relative_gap", worst}, {"tolerance", kRouteTolerance},
                            {"verdict", ok ? "pass" : "fail"}};
    out.lines.push_back(std::string(ok ? "PASS " : "FAIL ") +
                        "oracle-driven symbols reproduce the series: max relative gap " +
                        fmt("%.2e", worst));
    pass = pass && ok;
    curves.push_back({&oracle_series, label + " (oracle)"});
  }
  art.plot(label, label, curves, {guide_through(series, predicted, slope_label(predicted))});
  body["verdict"] = pass ? "pass" : "fail";
  art.report(body);
  out.passed = pass;
}

// ---- ablation -------------------------------------------------------------

void run_ablation(const ScenarioConfig& c, Artifacts& art, ScenarioOutcome& out) {
  const DecayConfig& d = *c.decay;
  const FluidParams params = build_params(*c.params);
  const Grid grid(c.grid->dim, c.grid->n, c.grid->box_len);
  AblationScenario s{params, grid, CutoffSpec(cutoff_eps(d, grid))};
  s.window = {d.window_a, d.window_b};
  s.samples = d.samples;
  s.amplitude = d.amplitude;
  s.tolerance = d.tolerance;
  const double trust = trust_horizon(params, grid, grid.spacing(), true);

  const AblationReport r = divergence_form_ablation(s);
  json body = {{"kind", kind_name(c.kind)}, {"cutoff", band_json(s.cutoff, grid)}, {"trust_horizon", trust}};
  if (r.skipped) {
    body["skipped"] = true;
    body["note"] = "zero data: both series vanish identically, no exponent to fit";
    body["verdict"] = "pass";
    out.lines.push_back("PASS ablation skipped: zero data");
    art.report(body);
    out.passed = true;
    return;
  }
  art.series(r.divergence_series);
  art.series(r.generic_series);

  const bool trusted = s.window.b <= trust;
  const bool gap_ok = r.gap >= kAblationGapThreshold - kAblationGapResolution;
  bool pass = r.divergence.verdict && r.generic.verdict && gap_ok && trusted;
  body["divergence"] = decay_json(r.divergence);
  body["generic"] = decay_json(r.generic);
  body["gap"] = r.gap;
  body["gap_threshold"] = kAblationGapThreshold;
  body["gap_resolution"] = kAblationGapResolution;
  body["trust_window_ok"] = trusted;
  out.lines.push_back(decay_line(r.divergence));
  out.lines.push_back(std::string(r.generic.verdict ? "PASS " : "FAIL ") +
                      "generic data decays slower: fitted " + fmt("%.4f", r.generic.fitted_exponent));
  out.lines.push_back(std::string(gap_ok ? "PASS " : "FAIL ") + "slope gap " + fmt("%.4f", r.gap) +
                      " (threshold " + fmt("%g", kAblationGapThreshold) + " less resolution " +
                      fmt("%g", kAblationGapResolution) + ")");

  std::vector<PlotCurve> curves{{&r.divergence_series, "divergence-form data"},
                                {&r.generic_series, "generic data"}};
  AblationReport ro{};
  if (d.oracle_check) {
    AblationScenario so = s;
    so.source = oracle_symbol_table;
    ro = divergence_form_ablation(so);
    art.series(renamed(ro.divergence_series, ro.divergence_series.descriptor() + "_oracle"));
    art.series(renamed(ro.generic_series, ro.generic_series.descriptor() + "_oracle"));
    const double diff = std::abs(ro.gap - r.gap);
    const bool ok = diff <= kRouteTolerance;
    body["oracle_check"] = {{"gap", ro.gap}, {"abs_difference", diff}, {"tolerance", kRouteTolerance},
                            {"verdict", ok ? "pass" : "fail"}};
    out.lines.push_back(std::string(ok ? "PASS " : "FAIL ") + "oracle-driven gap " +
                        fmt("%.6f", ro.gap) + " matches");
    pass = pass && ok;
  }
  art.plot("ablation", "low-band theta decay", curves,
           {guide_through(r.divergence_series, r.divergence.predicted_exponent,
                          slope_label(r.divergence.predicted_exponent)),
            guide_through(r.generic_series, r.divergence.predicted_exponent + 0.5,
                          slope_label(r.divergence.predicted_exponent + 0.5))});
  body["verdict"] = pass ? "pass" : "fail";
  art.report(body);
  out.passed = pass;
}

// ---- nonlinear-run --------------------------------------------------------

void run_nonlinear(const ScenarioConfig& c, Artifacts& art, ScenarioOutcome& out) {
  const NonlinearConfig& nc = *c.nonlinear;
  NonlinearScenario s{build_params(*c.params), Grid(c.grid->dim, c.grid->n, c.grid->box_len),
                      SpaceExponents{nc.p, nc.q1, nc.q2, nc.tau}};
  s.amplitude = nc.amplitude;
  s.horizon = nc.horizon;
  s.dt = nc.dt;
  s.sample_every = nc.sample_every;
  s.seed = *c.seed;
  s.linear_only = nc.linear_only;
  s.density_width = nc.density_width;
  s.tensor_width = nc.tensor_width;

  const auto notes = validate_scenario(s);
  const RunResult r = run(s);

  for (const auto& [key, series] : r.bundle) art.series(series);
  for (const NormSeries* ser : {&r.aggregate, &r.density_min, &r.density_max, &r.mean_theta})
    art.series(*ser);

  const double rho = s.params.rho_star();
  bool range_ok = !r.density_min.empty();
  for (double v : r.density_min.values()) range_ok = range_ok && v >= 0.25 * rho;
  for (double v : r.density_max.values()) range_ok = range_ok && v <= 4.0 * rho;
  bool monotone = true, finite = true;
  const auto& agg = r.aggregate.values();
  for (std::size_t i = 0; i < agg.size(); ++i) {
    finite = finite && std::isfinite(agg[i]);
    if (i > 0) monotone = monotone && agg[i] >= agg[i - 1];
  }

  json events = json::array();
  for (const auto& e : r.events) events.push_back({{"t", e.t}, {"kind", e.kind}, {"message", e.message}});
  json body = {{"kind", kind_name(c.kind)},
               {"completed", r.completed},
               {"steps", r.steps},
               {"final_time", r.final_time},
               {"scope_notes", notes},
               {"events", events},
               {"range_condition", range_ok},
               {"aggregate_monotone", monotone},
               {"aggregate_final", agg.empty() ? json(nullptr) : finite_or_null(agg.back())},
               {"mean_theta_drift", r.mean_theta_drift},
               {"max_symmetry_defect", r.max_symmetry_defect}};
  if (r.error_kind) body["error"] = {{"kind", *r.error_kind}, {"message", r.error_message.value_or("")}};

  art.plot("aggregate", "aggregate weighted norm", {{&r.aggregate, "N(theta, m)"}},
           {guide_through(r.aggregate, 0.0, "bounded (slope 0)")});
  const int N = s.grid.dim();
  std::vector<PlotCurve> curves;
  std::vector<GuideLine> guides;
  const std::pair<double, double> sups[] = {{kInfinity, N / nc.q1},
                                            {nc.q1, N / (2.0 * nc.q1)},
                                            {nc.q2, N / (2.0 * nc.q2) + 1.0}};
  for (const auto& [q, ell] : sups) {
    const auto it = r.bundle.find(sup_key(0, q));
    if (it == r.bundle.end()) continue;
    curves.push_back({&it->second, it->first});
    guides.push_back(guide_through(it->second, -ell, it->first + ": slope " + fmt("%.4g", -ell)));
  }
  art.plot("sup_norms", "sup-norm constituents (j = 0)", curves, guides);

  const bool pass = r.completed && range_ok && finite;
  body["verdict"] = pass ? "pass" : "fail";
  art.report(body);
  out.lines.push_back(std::string(r.completed ? "PASS " : "FAIL ") + "reached t = " +
                      fmt("%g", r.final_time) + " in " + std::to_string(r.steps) + " steps");
  out.lines.push_back(std::string(range_ok ? "PASS " : "FAIL ") + "range condition rho*/4 <= rho <= 4 rho*");
  out.lines.push_back(std::string(finite ? "PASS " : "FAIL ") + "aggregate norm finite" +
                      (agg.empty() ? std::string() : ", final " + fmt("%.6g", agg.back())));
  for (const auto& n : notes) out.lines.push_back("NOTE " + n);
  if (r.error_kind) {
    out.executed = false;
    out.error_kind = *r.error_kind;
    out.error_message = r.error_message.value_or("");
  }
  out.passed = pass;
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& config, const fs::path& out_dir) {
  ScenarioOutcome out;
  out.kind = config.kind;
  out.out_dir = out_dir;
  out.executed = true;
  try {
    validate_config(config);
    Artifacts art(out_dir, config);
    switch (config.kind) {
      case ScenarioKind::SymbolVerify:
        run_symbols(config, art, out);
        break;
      case ScenarioKind::LinearDecay:
        run_linear(config, art, out);
        break;
      case ScenarioKind::Ablation:
        run_ablation(config, art, out);
        break;
      case ScenarioKind::NonlinearRun:
        run_nonlinear(config, art, out);
        break;
    }
  } catch (const Error& e) {
    out.executed = false;
    out.error_kind = e.kind();
    out.error_message = e.what();
  } catch (const std::exception& e) {
    out.executed = false;
    out.error_kind = "InternalError";
    out.error_message = e.what();
  }
  if (!out.executed) {
    // Best effort: the error itself is the last artifact.
    try {
      json err = {{"kind", kind_name(config.kind)},
                  {"verdict", "error"},
                  {"error", {{"kind", out.error_kind}, {"message", out.error_message}}},
                  {"version", version()}};
      if (!fs::exists(out_dir / "report.json"))
        write_file(out_dir / "report.json", err.dump(2) + "\n");
      else
        write_file(out_dir / "error.json", err.dump(2) + "\n");
    } catch (const std::exception&) {
    }
  }
  return out;
}

std::vector<ScenarioConfig> parse_sweep(const std::string& text,
                                        std::optional<std::uint64_t> seed_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Re-parse through parse_config for the line/column message.
    parse_config(text);
    throw ParseError(e.what());
  }
  if (!j.is_object() || !j.contains("scenarios") || !j.at("scenarios").is_array())
    throw ValidationError("scenarios: a sweep needs a \"scenarios\" array");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "scenarios") throw ValidationError(it.key() + ": unknown key");
  std::vector<ScenarioConfig> out;
  std::size_t i = 0;
  for (const auto& entry : j.at("scenarios")) {
    try {
      out.push_back(parse_config(entry.dump(), std::nullopt, seed_override));
    } catch (const ValidationError& e) {
      throw ValidationError("scenarios[" + std::to_string(i) + "]." + e.what());
    }
    ++i;
  }
  if (out.empty()) throw ValidationError("scenarios: empty");
  return out;
}

std::vector<ScenarioOutcome> run_sweep(const std::vector<ScenarioConfig>& scenarios,
                                       const fs::path& out_dir, unsigned threads) {
  std::vector<ScenarioOutcome> outcomes(scenarios.size());
  std::vector<std::string> names(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu-", i);
    names[i] = buf + std::string(kind_name(scenarios[i].kind));
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++)
      outcomes[i] = run_scenario(scenarios[i], out_dir / names[i]);
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json manifest = {{"tool", "nsk"}, {"version", version()}, {"kind", "sweep"}, {"threads", k},
                   {"scenarios", json::array()}};
  json report = {{"kind", "sweep"}, {"version", version()}, {"scenarios", json::array()}};
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    manifest["scenarios"].push_back({{"directory", names[i]}, {"config", json::parse(serialize_config(scenarios[i]))}});
    const int code = exit_code(outcomes[i]);
    json row = {{"directory", names[i]},
                {"kind", kind_name(scenarios[i].kind)},
                {"verdict", code == 0 ? "pass" : code == 2 ? "fail" : "error"}};
    if (!outcomes[i].executed) row["error"] = {{"kind", outcomes[i].error_kind}, {"message", outcomes[i].error_message}};
    report["scenarios"].push_back(row);
  }
  const int code = exit_code(outcomes);
  report["verdict"] = code == 0 ? "pass" : code == 2 ? "fail" : "error";
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(out_dir / "report.json", report.dump(2) + "\n");
  return outcomes;
}

}  // namespace nsk
