#include "nsk/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

#include "nsk/errors.hpp"

namespace nsk {

using nlohmann::json;

const char* kind_name(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::SymbolVerify:
      return "symbol-verify";
    case ScenarioKind::LinearDecay:
      return "linear-decay";
    case ScenarioKind::Ablation:
      return "ablation";
    case ScenarioKind::NonlinearRun:
      return "nonlinear-run";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_kind(const std::string& s) {
  if (s == "symbol-verify" || s == "verify-symbols") return ScenarioKind::SymbolVerify;
  if (s == "linear-decay") return ScenarioKind::LinearDecay;
  if (s == "ablation") return ScenarioKind::Ablation;
  if (s == "nonlinear-run") return ScenarioKind::NonlinearRun;
  return std::nullopt;
}

namespace {

// Reads fields of one JSON object, remembering which keys were used so the
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "must be an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ValidationError(name(key) + ": " + what);
  }

  std::string name(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) { return j_.at(key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (v.is_number()) {
      out = v.get<double>();
    } else if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) {
      out = INFINITY;
    } else {
      fail(key, "must be a number");
    }
  }

  void number(const std::string& key, std::optional<double>& out) {
    if (!has(key)) return;
    double v = 0.0;
    number(key, v);
    out = v;
  }

  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    if (!j_.at(key).is_number_integer()) fail(key, "must be an integer");
    out = j_.at(key).get<int>();
  }

  void count(const std::string& key, std::size_t& out) {
    if (!has(key)) return;
    if (!j_.at(key).is_number_unsigned()) fail(key, "must be a non-negative integer");
    out = j_.at(key).get<std::size_t>();
  }

  void flag(const std::string& key, bool& out) {
    if (!has(key)) return;
    if (!j_.at(key).is_boolean()) fail(key, "must be true or false");
    out = j_.at(key).get<bool>();
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    if (!j_.at(key).is_string()) fail(key, "must be a string");
    out = j_.at(key).get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail(it.key(), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

PressureConfig read_pressure(const json& j) {
  Reader r(j, "params.pressure");
  PressureConfig p;
  r.text("law", p.law);
  r.number("K", p.K);
  if (r.has("coefficients")) {
    const json& c = r.at("coefficients");
    if (!c.is_array()) r.fail("coefficients", "must be an array of numbers");
    for (const auto& v : c) {
      if (!v.is_number()) r.fail("coefficients", "must be an array of numbers");
      p.coefficients.push_back(v.get<double>());
    }
  }
  r.number("rho_min", p.rho_min);
  r.number("rho_max", p.rho_max);
  r.finish();
  if (p.law != "critical-quadratic" && p.law != "polynomial")
    r.fail("law", "must be \"critical-quadratic\" or \"polynomial\"");
  return p;
}

ParamsConfig read_params(const json& j) {
  Reader r(j, "params");
  ParamsConfig p;
  r.number("mu_star", p.mu_star);
  r.number("nu_star", p.nu_star);
  r.number("kappa_star", p.kappa_star);
  r.number("rho_star", p.rho_star);
  if (r.has("pressure")) p.pressure = read_pressure(r.at("pressure"));
  r.finish();
  return p;
}

GridConfig read_grid(const json& j) {
  Reader r(j, "grid");
  GridConfig g;
  r.integer("dim", g.dim);
  r.count("n", g.n);
  r.number("box_len", g.box_len);
  r.finish();
  return g;
}

DecayConfig read_decay(const json& j) {
  Reader r(j, "decay");
  DecayConfig d;
  r.text("band", d.band);
  r.text("data", d.data);
  r.number("p", d.p);
  r.number("q", d.q);
  r.integer("j", d.j);
  if (r.has("window")) {
    const json& w = r.at("window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
      r.fail("window", "must be [a, b]");
    d.window_a = w[0].get<double>();
    d.window_b = w[1].get<double>();
  }
  r.count("samples", d.samples);
  r.number("tolerance", d.tolerance);
  r.number("cutoff_eps", d.cutoff_eps);
  r.number("cutoff_fraction", d.cutoff_fraction);
  r.flag("full_operator", d.full_operator);
  r.flag("oracle_check", d.oracle_check);
  r.number("amplitude", d.amplitude);
  r.finish();
  return d;
}

NonlinearConfig read_nonlinear(const json& j) {
  Reader r(j, "nonlinear");
  NonlinearConfig n;
  r.number("amplitude", n.amplitude);
  r.number("horizon", n.horizon);
  r.number("dt", n.dt);
  r.count("sample_every", n.sample_every);
  r.flag("linear_only", n.linear_only);
  r.number("density_width", n.density_width);
  r.number("tensor_width", n.tensor_width);
  r.number("p", n.p);
  r.number("q1", n.q1);
  r.number("q2", n.q2);
  r.number("tau", n.tau);
  r.finish();
  return n;
}

SymbolConfig read_symbols(const json& j) {
  Reader r(j, "symbols");
  SymbolConfig s;
  r.count("samples_per_regime", s.samples_per_regime);
  r.number("tolerance", s.tolerance);
  r.number("xi_min", s.xi_min);
  r.number("xi_max", s.xi_max);
  r.number("t_max", s.t_max);
  r.number("continuity_tolerance", s.continuity_tolerance);
  r.finish();
  return s;
}

void line_column(const std::string& text, std::size_t byte, std::size_t& line, std::size_t& col) {
  line = 1;
  col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, std::optional<ScenarioKind> default_kind,
                            std::optional<std::uint64_t> seed_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 0, col = 0;
    line_column(text, e.byte, line, col);
    std::ostringstream msg;
    // Keep the library's description, drop its own position prefix.
    std::string what = e.what();
    if (const auto at = what.find("column"); at != std::string::npos)
      if (const auto colon = what.find(": ", at); colon != std::string::npos) what = what.substr(colon + 2);
    msg << "line " << line << ", column " << col << ": " << what;
    throw ParseError(msg.str());
  }
  Reader r(j, "");
  ScenarioConfig c;
  std::string kind;
  r.text("kind", kind);
  if (!kind.empty()) {
    const auto k = parse_kind(kind);
    if (!k) r.fail("kind", "unknown scenario kind '" + kind + "'");
    c.kind = *k;
  } else if (default_kind) {
    c.kind = *default_kind;
  } else {
    r.fail("kind", "missing");
  }
  if (r.has("seed")) {
    if (!r.at("seed").is_number_unsigned()) r.fail("seed", "must be a non-negative integer");
    c.seed = r.at("seed").get<std::uint64_t>();
  }
  r.text("output_dir", c.output_dir);
  if (r.has("params")) c.params = read_params(r.at("params"));
  if (r.has("grid")) c.grid = read_grid(r.at("grid"));
  if (r.has("decay")) c.decay = read_decay(r.at("decay"));
  if (r.has("nonlinear")) c.nonlinear = read_nonlinear(r.at("nonlinear"));
  if (r.has("symbols")) c.symbols = read_symbols(r.at("symbols"));
  r.finish();
  if (seed_override) c.seed = seed_override;

  // Fill blocks that consist only of defaults.
  switch (c.kind) {
    case ScenarioKind::SymbolVerify:
      if (!c.symbols) c.symbols = SymbolConfig{};
      break;
    case ScenarioKind::LinearDecay:
    case ScenarioKind::Ablation:
      if (!c.decay) c.decay = DecayConfig{};
      break;
    case ScenarioKind::NonlinearRun:
      if (!c.nonlinear) c.nonlinear = NonlinearConfig{};
      break;
  }
  validate_config(c);
  return c;
}

void validate_config(const ScenarioConfig& c) {
  auto need = [&](bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ValidationError(field + ": " + what);
  };
  const bool spatial = c.kind != ScenarioKind::SymbolVerify;
  if (spatial) {
    need(c.params.has_value(), "params", "required for " + std::string(kind_name(c.kind)));
    need(c.grid.has_value(), "grid", "required for " + std::string(kind_name(c.kind)));
  }
  if (c.kind == ScenarioKind::SymbolVerify || c.kind == ScenarioKind::NonlinearRun)
    need(c.seed.has_value(), "seed", "required for randomized data");
  if (c.grid) {
    need(c.grid->dim >= 1 && c.grid->dim <= 4, "grid.dim", "must be in [1, 4]");
    need(c.grid->n >= 4 && (c.grid->n & (c.grid->n - 1)) == 0, "grid.n", "must be a power of two >= 4");
    need(c.grid->box_len > 0 && std::isfinite(c.grid->box_len), "grid.box_len", "must be positive");
  }
  if (c.params) {
    const auto& pr = c.params->pressure;
    if (pr.law == "polynomial") {
      need(!pr.coefficients.empty(), "params.pressure.coefficients", "required for a polynomial law");
      need(pr.rho_min > 0 && pr.rho_max > pr.rho_min, "params.pressure.rho_min",
           "need 0 < rho_min < rho_max");
    }
  }
  if (c.decay && (c.kind == ScenarioKind::LinearDecay || c.kind == ScenarioKind::Ablation)) {
    const auto& d = *c.decay;
    need(d.band == "low" || d.band == "high" || d.band == "heat", "decay.band",
         "must be \"low\", \"high\" or \"heat\"");
    need(d.data == "divergence" || d.data == "generic", "decay.data",
         "must be \"divergence\" or \"generic\"");
    need(d.window_a > 0 && d.window_b > d.window_a, "decay.window", "need 0 < a < b");
    need(d.samples >= 2, "decay.samples", "need at least 2");
    need(d.tolerance > 0, "decay.tolerance", "must be positive");
    need(!d.cutoff_eps || *d.cutoff_eps > 0, "decay.cutoff_eps", "must be positive");
    need(d.cutoff_fraction > 0, "decay.cutoff_fraction", "must be positive");
    need(d.amplitude >= 0, "decay.amplitude", "must be non-negative");
    if (c.kind == ScenarioKind::LinearDecay) {
      if (d.band == "low")
        need(std::isinf(d.p) && d.q == 2.0 && d.j == 0, "decay.p",
             "the low-band probe measures (p, q, j) = (inf, 2, 0)");
      if (d.band == "high")
        need(d.p == 2.0 && d.q == 2.0 && (d.j == 0 || d.j == 1), "decay.p",
             "the high-band probe measures (p, q) = (2, 2) with j in {0, 1}");
      if (d.band == "heat") need(c.grid && c.grid->dim >= 2, "grid.dim", "heat anchor needs N >= 2");
    } else {
      need(d.band == "low", "decay.band", "the ablation compares low-band runs");
    }
  }
  if (c.nonlinear && c.kind == ScenarioKind::NonlinearRun) {
    const auto& n = *c.nonlinear;
    need(n.amplitude >= 0, "nonlinear.amplitude", "must be non-negative");
    need(n.horizon > 0, "nonlinear.horizon", "must be positive");
    need(n.dt > 0 && n.dt <= n.horizon, "nonlinear.dt", "must be in (0, horizon]");
    need(n.sample_every >= 1, "nonlinear.sample_every", "must be at least 1");
    need(n.density_width > 0 && n.tensor_width > 0, "nonlinear.density_width", "widths must be positive");
    need(n.p >= 1 && std::isfinite(n.p), "nonlinear.p", "must be finite and >= 1");
    need(n.q1 >= 1 && n.q2 >= 1, "nonlinear.q1", "must be >= 1");
  }
  if (c.symbols && c.kind == ScenarioKind::SymbolVerify) {
    const auto& s = *c.symbols;
    need(s.samples_per_regime >= 1, "symbols.samples_per_regime", "must be at least 1");
    need(s.xi_min > 0 && s.xi_max > s.xi_min, "symbols.xi_min", "need 0 < xi_min < xi_max");
    need(s.t_max > 0, "symbols.t_max", "must be positive");
  }
}

std::string serialize_config(const ScenarioConfig& c) {
  json j = json::object();
  j["kind"] = kind_name(c.kind);
  if (c.seed) j["seed"] = *c.seed;
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  if (c.params) {
    const auto& p = *c.params;
    json pr = {{"law", p.pressure.law}};
    if (p.pressure.law == "critical-quadratic") {
      pr["K"] = p.pressure.K;
    } else {
      pr["coefficients"] = p.pressure.coefficients;
      pr["rho_min"] = p.pressure.rho_min;
      pr["rho_max"] = p.pressure.rho_max;
    }
    j["params"] = {{"mu_star", p.mu_star}, {"nu_star", p.nu_star}, {"kappa_star", p.kappa_star},
                   {"rho_star", p.rho_star}, {"pressure", pr}};
  }
  if (c.grid) j["grid"] = {{"dim", c.grid->dim}, {"n", c.grid->n}, {"box_len", c.grid->box_len}};
  if (c.decay) {
    const auto& d = *c.decay;
    j["decay"] = {{"band", d.band},
                  {"data", d.data},
                  {"p", number_json(d.p)},
                  {"q", number_json(d.q)},
                  {"j", d.j},
                  {"window", {d.window_a, d.window_b}},
                  {"samples", d.samples},
                  {"tolerance", d.tolerance},
                  {"cutoff_fraction", d.cutoff_fraction},
                  {"full_operator", d.full_operator},
                  {"oracle_check", d.oracle_check},
                  {"amplitude", d.amplitude}};
    if (d.cutoff_eps) j["decay"]["cutoff_eps"] = *d.cutoff_eps;
  }
  if (c.nonlinear) {
    const auto& n = *c.nonlinear;
    j["nonlinear"] = {{"amplitude", n.amplitude},         {"horizon", n.horizon},
                      {"dt", n.dt},                       {"sample_every", n.sample_every},
                      {"linear_only", n.linear_only},     {"density_width", n.density_width},
                      {"tensor_width", n.tensor_width},   {"p", n.p},
                      {"q1", n.q1},                       {"q2", n.q2},
                      {"tau", n.tau}};
  }
  if (c.symbols) {
    const auto& s = *c.symbols;
    j["symbols"] = {{"samples_per_regime", s.samples_per_regime},
                    {"tolerance", s.tolerance},
                    {"xi_min", s.xi_min},
                    {"xi_max", s.xi_max},
                    {"t_max", s.t_max},
                    {"continuity_tolerance", s.continuity_tolerance}};
  }
  return j.dump(2) + "\n";
}

FluidParams build_params(const ParamsConfig& p) {
  PressureLaw law = p.pressure.law == "polynomial"
                        ? polynomial_pressure(p.pressure.coefficients, p.rho_star, p.pressure.rho_min,
                                              p.pressure.rho_max)
                        : critical_quadratic(p.pressure.K, p.rho_star);
  return make_params(p.mu_star, p.nu_star, p.kappa_star, p.rho_star, std::move(law));
}

}  // namespace nsk
