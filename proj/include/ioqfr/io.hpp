#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ioqfr/bounds.hpp"

// Run configuration, model registry, and CSV/JSON serialization.

namespace ioqfr::io {

using nlohmann::json;

struct SweepGrid {
  double w_min = -5.0;
  double w_max = 5.0;
  int n_points = 201;
};

struct RunConfig {
  std::string model = "rf";
  std::map<std::string, double> params;
  std::vector<double> theta;
  SweepGrid sweep;
  ToleranceSet tol;
  json custom;     // model "custom"
  json classical;  // model "classical_jump"
  json signal;     // optional override of the registry signal
  std::string out;
};

inline const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {"cavity", "rf", "kerr_cat", "classical_jump", "custom"};
  return names;
}

inline bool is_registry_name(const std::string& name) {
  for (const auto& n : registry_names())
    if (n == name) return true;
  return false;
}

inline std::vector<std::string> allowed_params(const std::string& model) {
  if (model == "cavity") return {"kappa", "Delta"};
  if (model == "rf") return {"kappa", "Omega", "Delta", "theta"};
  if (model == "kerr_cat") return {"n_cut", "K", "Delta", "p", "F", "kappa_ex", "kappa_in", "theta"};
  return {};
}

inline void check_grid(const SweepGrid& g) {
  if (g.n_points < 1) throw ConfigError("sweep: n_points must be at least 1");
  if (!std::isfinite(g.w_min) || !std::isfinite(g.w_max)) throw ConfigError("sweep: bounds must be finite");
  if (g.w_min > g.w_max) throw ConfigError("sweep: w_min must not exceed w_max");
}

/// Uniform grid; a single point sits at w_min.
inline std::vector<double> grid_points(const SweepGrid& g) {
  check_grid(g);
  std::vector<double> w(static_cast<std::size_t>(g.n_points));
  for (int i = 0; i < g.n_points; ++i)
    w[static_cast<std::size_t>(i)] =
        g.n_points == 1 ? g.w_min : g.w_min + (g.w_max - g.w_min) * static_cast<double>(i) / (g.n_points - 1);
  return w;
}

// ---------------------------------------------------------------------------
// JSON config parsing

namespace detail {

template <typename T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

inline Eigen::Index index(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<Eigen::Index>();
}

inline void only_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

/// Sparse operator from [{row, col, re, im}, ...].
inline Operator sparse_operator(const json& entries, Eigen::Index d, const std::string& label) {
  if (!entries.is_array()) throw ConfigError(label + ": expected a list of {row, col, re, im} entries");
  CMatrix m = CMatrix::Zero(d, d);
  for (const auto& e : entries) {
    only_keys(e, {"row", "col", "re", "im"}, label);
    if (!e.contains("row") || !e.contains("col")) throw ConfigError(label + ": entry needs row and col");
    const auto r = index(e["row"], label + ".row");
    const auto c = index(e["col"], label + ".col");
    if (r < 0 || r >= d || c < 0 || c >= d) throw ConfigError(label + ": entry index out of range");
    const double re = e.contains("re") ? number(e["re"], label + ".re") : 0.0;
    const double im = e.contains("im") ? number(e["im"], label + ".im") : 0.0;
    m(r, c) += Complex(re, im);
  }
  return Operator(m, label);
}

inline RMatrix real_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ConfigError(where + ": expected a list of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(where + ": rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline std::vector<MonitoredCurrent> monitored_list(const json& j, const LindbladModel& m) {
  if (!j.is_array()) throw ConfigError("monitored: expected a list");
  std::vector<MonitoredCurrent> out;
  for (const auto& e : j) {
    only_keys(e, {"channel", "from", "to", "theta"}, "monitored");
    MonitoredCurrent c;
    c.theta = e.contains("theta") ? number(e["theta"], "monitored.theta") : 0.0;
    if (e.contains("channel")) {
      c.channel = index(e["channel"], "monitored.channel");
    } else if (e.contains("from") && e.contains("to")) {
      const std::string label =
          "L_" + std::to_string(index(e["to"], "monitored.to")) + "_" + std::to_string(index(e["from"], "monitored.from"));
      c.channel = -1;
      for (std::size_t k = 0; k < m.channels.size(); ++k)
        if (m.channels[k].label == label) c.channel = static_cast<Eigen::Index>(k);
      if (c.channel < 0) throw ConfigError("monitored: no jump channel " + label);
    } else {
      throw ConfigError("monitored: entry needs channel or from/to");
    }
    if (c.channel < 0 || c.channel >= m.n_channels()) throw ConfigError("monitored: channel index out of range");
    out.push_back(c);
  }
  return out;
}

inline SignalSpec signal_spec(const json& j, const LindbladModel& m) {
  only_keys(j, {"kinetic", "tangent"}, "signal");
  if (j.contains("kinetic") == j.contains("tangent")) throw ConfigError("signal: give exactly one of kinetic, tangent");
  if (j.contains("kinetic")) {
    const RMatrix b = real_matrix(j["kinetic"], "signal.kinetic");
    if (b.rows() != m.n_channels()) throw ConfigError("signal.kinetic: need one row per channel");
    return SignalSpec{KineticSignal{b}};
  }
  const json& t = j["tangent"];
  if (!t.is_array() || static_cast<Eigen::Index>(t.size()) != m.n_channels())
    throw ConfigError("signal.tangent: need one list per channel");
  TangentSignal ts;
  for (std::size_t mu = 0; mu < t.size(); ++mu) {
    if (!t[mu].is_array()) throw ConfigError("signal.tangent: expected a list of operators per channel");
    std::vector<Operator> row;
    for (std::size_t q = 0; q < t[mu].size(); ++q)
      row.push_back(sparse_operator(t[mu][q], m.dim(), "M_" + std::to_string(mu) + "_" + std::to_string(q)));
    if (!ts.m.empty() && row.size() != ts.m.front().size())
      throw ConfigError("signal.tangent: every channel needs the same number of parameters");
    ts.m.push_back(std::move(row));
  }
  return SignalSpec{ts};
}

inline LindbladModel custom_model(const json& j) {
  only_keys(j, {"dim", "hamiltonian", "channels", "monitored", "signal", "number_operator", "name"}, "custom");
  if (!j.contains("dim")) throw ConfigError("custom: dim is required");
  const auto d = index(j["dim"], "custom.dim");
  if (d < 1) throw ConfigError("custom: dim must be positive");
  LindbladModel m;
  m.name = j.contains("name") ? get_as<std::string>(j["name"], "custom.name") : "custom";
  m.hamiltonian = j.contains("hamiltonian") ? sparse_operator(j["hamiltonian"], d, "H") : Operator::zero(d, "H");
  if (j.contains("channels")) {
    if (!j["channels"].is_array()) throw ConfigError("custom.channels: expected a list");
    for (const auto& c : j["channels"]) {
      only_keys(c, {"label", "entries"}, "custom.channels");
      const std::string label = c.contains("label") ? get_as<std::string>(c["label"], "channel label")
                                                    : "L" + std::to_string(m.channels.size());
      m.channels.push_back(sparse_operator(c.contains("entries") ? c["entries"] : json::array(), d, label));
    }
  }
  if (j.contains("monitored")) m.monitored = monitored_list(j["monitored"], m);
  if (j.contains("signal")) m.signal = signal_spec(j["signal"], m);
  else m.signal = SignalSpec{KineticSignal{RMatrix::Zero(m.n_channels(), 0)}};
  if (j.contains("number_operator")) m.number_operator = sparse_operator(j["number_operator"], d, "n");
  return m;
}

inline LindbladModel classical_model(const json& j) {
  only_keys(j, {"rates", "Y", "monitored"}, "classical");
  if (!j.contains("rates")) throw ConfigError("classical: rates is required");
  const RMatrix rates = real_matrix(j["rates"], "classical.rates");
  std::vector<RMatrix> y;
  if (j.contains("Y")) {
    if (!j["Y"].is_array()) throw ConfigError("classical.Y: expected a list of matrices");
    for (const auto& yq : j["Y"]) y.push_back(real_matrix(yq, "classical.Y"));
  }
  LindbladModel m = classical_embedding(rates, y);
  if (j.contains("monitored")) m.monitored = monitored_list(j["monitored"], m);
  return m;
}

}  // namespace detail

/// Parses a config document. Unknown keys and parameters are rejected.
inline RunConfig parse_config(const json& j) {
  detail::only_keys(j, {"model", "params", "theta", "sweep", "tolerances", "custom", "classical", "signal", "output"},
                    "config");
  RunConfig cfg;
  if (j.contains("model")) cfg.model = detail::get_as<std::string>(j["model"], "model");
  if (!is_registry_name(cfg.model)) throw ConfigError("unknown model '" + cfg.model + "'");
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("params: expected an object");
    for (const auto& [k, v] : j["params"].items()) cfg.params[k] = detail::number(v, "params." + k);
  }
  if (j.contains("theta")) {
    if (j["theta"].is_number()) cfg.theta.push_back(j["theta"].get<double>());
    else if (j["theta"].is_array())
      for (const auto& t : j["theta"]) cfg.theta.push_back(detail::number(t, "theta"));
    else throw ConfigError("theta: expected a number or a list");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    detail::only_keys(s, {"w_min", "w_max", "n_points"}, "sweep");
    if (s.contains("w_min")) cfg.sweep.w_min = detail::number(s["w_min"], "sweep.w_min");
    if (s.contains("w_max")) cfg.sweep.w_max = detail::number(s["w_max"], "sweep.w_max");
    if (s.contains("n_points")) cfg.sweep.n_points = static_cast<int>(detail::index(s["n_points"], "sweep.n_points"));
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("tolerances: expected an object");
    for (const auto& [k, v] : j["tolerances"].items())
      if (!cfg.tol.set(k, detail::number(v, "tolerances." + k))) throw ConfigError("unknown tolerance '" + k + "'");
  }
  if (j.contains("custom")) cfg.custom = j["custom"];
  if (j.contains("classical")) cfg.classical = j["classical"];
  if (j.contains("signal")) cfg.signal = j["signal"];
  if (j.contains("output")) cfg.out = detail::get_as<std::string>(j["output"], "output");
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

/// Checks parameters against the registry entry.
inline void check_params(const RunConfig& cfg) {
  const auto allowed = allowed_params(cfg.model);
  for (const auto& [k, v] : cfg.params) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) throw ConfigError("model '" + cfg.model + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' is not finite");
  }
  if (cfg.model == "custom" && cfg.custom.is_null()) throw ConfigError("model 'custom' needs a custom section");
  if (cfg.model == "classical_jump" && cfg.classical.is_null())
    throw ConfigError("model 'classical_jump' needs a classical section");
}

inline double param(const RunConfig& cfg, const std::string& name, double fallback) {
  const auto it = cfg.params.find(name);
  return it == cfg.params.end() ? fallback : it->second;
}

inline CavityAnalytic build_cavity(const RunConfig& cfg) {
  check_params(cfg);
  return {param(cfg, "kappa", 1.0), param(cfg, "Delta", 0.0)};
}

/// Builds the Lindblad model named by the config (not "cavity").
inline LindbladModel build_model(const RunConfig& cfg) {
  check_params(cfg);
  LindbladModel m;
  if (cfg.model == "rf") {
    m = rf_lindblad({param(cfg, "kappa", 1.0), param(cfg, "Omega", 1.0)}, param(cfg, "theta", std::numbers::pi / 2),
                    param(cfg, "Delta", 0.0));
  } else if (cfg.model == "kerr_cat") {
    KerrCatParams k;
    const double n_cut = param(cfg, "n_cut", static_cast<double>(k.n_cut));
    if (n_cut != std::floor(n_cut)) throw ConfigError("kerr_cat: n_cut must be an integer");
    k.n_cut = static_cast<Eigen::Index>(n_cut);
    k.K = param(cfg, "K", k.K);
    k.Delta = param(cfg, "Delta", k.Delta);
    k.p = param(cfg, "p", k.p);
    k.F = param(cfg, "F", k.F);
    k.kappa_ex = param(cfg, "kappa_ex", k.kappa_ex);
    k.kappa_in = param(cfg, "kappa_in", k.kappa_in);
    k.theta = param(cfg, "theta", k.theta);
    m = kerr_cat(k);
  } else if (cfg.model == "classical_jump") {
    m = detail::classical_model(cfg.classical);
  } else if (cfg.model == "custom") {
    m = detail::custom_model(cfg.custom);
  } else if (cfg.model == "cavity") {
    throw ConfigError("model 'cavity' is analytic only; it supports sweep and verify");
  } else {
    throw ConfigError("unknown model '" + cfg.model + "'");
  }
  if (!cfg.signal.is_null()) m.signal = detail::signal_spec(cfg.signal, m);
  return m;
}

struct Variant {
  std::optional<double> theta;  // set when the model has a single current
  LindbladModel model;
};

/// One model per requested phase for single-current models; for several
/// currents the theta list assigns one phase per current.
inline std::vector<Variant> build_variants(const RunConfig& cfg) {
  LindbladModel base = build_model(cfg);
  std::vector<Variant> out;
  if (base.monitored.size() == 1) {
    if (cfg.theta.empty()) out.push_back({base.monitored[0].theta, base});
    for (double t : cfg.theta) {
      LindbladModel m = base;
      m.monitored[0].theta = t;
      out.push_back({t, std::move(m)});
    }
    return out;
  }
  if (!cfg.theta.empty()) {
    if (cfg.theta.size() != base.monitored.size())
      throw ConfigError("theta: give one phase per monitored current (" + std::to_string(base.monitored.size()) + ")");
    for (std::size_t a = 0; a < cfg.theta.size(); ++a) base.monitored[a].theta = cfg.theta[a];
  }
  out.push_back({std::nullopt, std::move(base)});
  return out;
}

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits; nan/inf spelled as strtod reads them.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& out, const CsvTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: missing header");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw ConfigError("csv: row width differs from header");
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') throw ConfigError("csv: bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Sweep tables

inline CsvTable cavity_table(const CavityAnalytic& cav, const std::vector<double>& omegas) {
  CsvTable t;
  t.header = {"omega", "abs_s", "theta_opt", "S", "abs_R", "ratio"};
  const CoherentCeilingReport rep = coherent_ceiling_check(cav, omegas);
  for (std::size_t i = 0; i < omegas.size(); ++i)
    t.rows.push_back({omegas[i], rep.abs_s[i], rep.theta_opt[i], 1.0, 2.0 * rep.abs_s[i], rep.ratio[i]});
  return t;
}

inline std::vector<std::string> sweep_header(const LindbladModel& m, bool with_theta) {
  const auto nm = m.monitored.size();
  const auto np = static_cast<std::size_t>(m.n_params());
  std::vector<std::string> h = {"omega"};
  if (with_theta) h.push_back("theta");
  auto idx = [](std::size_t i) { return std::to_string(i); };
  if (nm == 1) {
    h.push_back("S");
  } else {
    for (std::size_t a = 0; a < nm; ++a) h.push_back("S_" + idx(a) + "_" + idx(a));
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t b = a + 1; b < nm; ++b) {
        h.push_back("Re_S_" + idx(a) + "_" + idx(b));
        h.push_back("Im_S_" + idx(a) + "_" + idx(b));
      }
  }
  for (const char* part : {"Re_R_", "Im_R_"})
    for (std::size_t a = 0; a < nm; ++a)
      for (std::size_t q = 0; q < np; ++q) h.push_back(std::string(part) + (nm == 1 ? idx(q) : idx(a) + "_" + idx(q)));
  for (std::size_t q = 0; q < np; ++q) h.push_back("A_" + idx(q));
  if (nm == 1)
    for (std::size_t q = 0; q < np; ++q) h.push_back("r_" + idx(q));
  h.insert(h.end(), {"lambda_max", "margin_min", "pass"});
  return h;
}

inline std::vector<double> sweep_row(const FrequencyBound& p, const ActivityMatrix& act, std::optional<double> theta) {
  std::vector<double> row = {p.omega};
  if (theta) row.push_back(*theta);
  const CMatrix& S = p.S.complex_S;
  const auto nm = S.rows();
  if (nm == 1) {
    row.push_back(S(0, 0).real());
  } else {
    for (Eigen::Index a = 0; a < nm; ++a) row.push_back(S(a, a).real());
    for (Eigen::Index a = 0; a < nm; ++a)
      for (Eigen::Index b = a + 1; b < nm; ++b) {
        row.push_back(S(a, b).real());
        row.push_back(S(a, b).imag());
      }
  }
  const CMatrix& R = p.R.complex_R;
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    for (Eigen::Index q = 0; q < R.cols(); ++q) row.push_back(R(a, q).real());
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    for (Eigen::Index q = 0; q < R.cols(); ++q) row.push_back(R(a, q).imag());
  for (Eigen::Index q = 0; q < act.A.rows(); ++q) row.push_back(act.A(q, q));
  for (double r : p.r) row.push_back(r);
  row.insert(row.end(), {p.lambda_max, p.margin_min, p.pass ? 1.0 : 0.0});
  return row;
}

inline CertifyOptions sweep_options(unsigned threads) {
  CertifyOptions opt;
  opt.require_pure_dissipative = false;
  opt.allow_degenerate_activity = true;
  opt.threads = threads;
  return opt;
}

/// Rows ordered by phase (config order) then ascending omega.
inline CsvTable sweep_table(const RunConfig& cfg, unsigned threads) {
  const auto omegas = grid_points(cfg.sweep);
  if (cfg.model == "cavity") {
    if (!cfg.theta.empty()) throw ConfigError("model 'cavity' reports the optimal phase; --theta is not used");
    return cavity_table(build_cavity(cfg), omegas);
  }
  const auto variants = build_variants(cfg);
  CsvTable t;
  const bool with_theta = variants.front().theta.has_value();
  t.header = sweep_header(variants.front().model, with_theta);
  for (const auto& v : variants) {
    const Analysis an = analyze(v.model, cfg.tol);
    const BoundReport rep = certify(an, omegas, sweep_options(threads));
    for (const auto& p : rep.points) t.rows.push_back(sweep_row(p, rep.activity, v.theta));
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON reports

inline json matrix_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline json complex_json(const CMatrix& m) {
  return {{"re", matrix_json(m.real())}, {"im", matrix_json(m.imag())}};
}

inline json tolerances_json(const ToleranceSet& tol) {
  json j = json::object();
  for (const auto& [k, v] : tol.values()) j[k] = v;
  return j;
}

inline json steady_json(const Analysis& an) {
  const StationaryState& st = an.stationary;
  json j;
  j["model"] = an.model.name;
  j["model_hash"] = model_hash(an.model);
  j["dim"] = an.model.dim();
  j["rho"] = complex_json(st.rho.matrix);
  std::vector<double> pops;
  for (Eigen::Index i = 0; i < st.rho.dim(); ++i) pops.push_back(st.rho.matrix(i, i).real());
  j["populations"] = pops;
  j["gap"] = st.gap;
  j["residual"] = st.residual;
  j["min_eigenvalue"] = st.min_eigenvalue;
  if (an.model.number_operator)
    j["photon_number"] = trace_product(an.model.number_operator->matrix, st.rho.matrix).real();
  json spec = json::array();
  const auto n = std::min<Eigen::Index>(st.generator_spectrum.size(), 6);
  for (Eigen::Index i = 0; i < n; ++i) spec.push_back({st.generator_spectrum(i).real(), st.generator_spectrum(i).imag()});
  j["leading_eigenvalues"] = spec;
  j["tolerances"] = tolerances_json(an.tol);
  return j;
}

inline json bound_json(const BoundReport& rep, std::optional<double> theta) {
  json j;
  j["model"] = rep.model_name;
  j["model_hash"] = rep.model_hash;
  if (theta) j["theta"] = *theta;
  j["activity"] = matrix_json(rep.activity.A);
  j["pure_dissipative"] = {{"ok", rep.pure_dissipative.ok}, {"residuals", rep.pure_dissipative.residuals}};
  double lmax = -std::numeric_limits<double>::infinity(), mmin = std::numeric_limits<double>::infinity();
  json pts = json::array();
  for (const auto& p : rep.points) {
    lmax = std::max(lmax, p.lambda_max);
    mmin = std::min(mmin, p.margin_min);
    json e;
    e["omega"] = p.omega;
    e["lambda_max"] = p.lambda_max;
    e["r"] = p.r;
    e["margin_min"] = p.margin_min;
    e["support_mismatch"] = p.support_mismatch;
    e["directional_agrees"] = p.directional_agrees;
    e["pass"] = p.pass;
    if (!p.note.empty()) e["note"] = p.note;
    pts.push_back(e);
  }
  j["points"] = pts;
  j["summary"] = {{"max_lambda", lmax}, {"min_margin", mmin}, {"pass", rep.pass()}};
  j["tolerances"] = tolerances_json(rep.tol);
  return j;
}

}  // namespace ioqfr::io
