#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ioqfr/acceptance.hpp"
#include "ioqfr/io.hpp"
#include "ioqfr/parallel.hpp"

// Command-line front end. run() is the whole program; exit codes are
// 0 success, 1 usage or config error, 2 numerical or model error.

namespace ioqfr::cli {

struct Options {
  std::string model;
  std::vector<std::string> params;
  std::vector<double> theta;
  std::optional<double> w_min, w_max;
  std::optional<int> n_points;
  std::string out;
  bool json = false;
  std::vector<std::string> tol;
  std::vector<std::string> suites;
};

inline std::pair<std::string, double> key_value(const std::string& kv, const char* flag) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(std::string(flag) + " expects name=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(val.c_str(), &end);
  if (val.empty() || *end != '\0') throw ConfigError(std::string(flag) + " " + key + ": '" + val + "' is not a number");
  return {key, v};
}

inline void apply_tolerances(ToleranceSet& tol, const std::vector<std::string>& specs) {
  for (const auto& s : specs) {
    const auto [k, v] = key_value(s, "--tol");
    if (!(v > 0.0)) throw ConfigError("--tol " + k + " must be positive");
    if (!tol.set(k, v)) throw ConfigError("unknown tolerance '" + k + "'");
  }
}

/// Registry name, or path to a JSON config; command-line flags override the file.
inline io::RunConfig resolve_config(const Options& o) {
  if (o.model.empty()) throw ConfigError("--model is required");
  io::RunConfig cfg;
  if (io::is_registry_name(o.model)) {
    cfg.model = o.model;
  } else if (std::filesystem::is_regular_file(o.model)) {
    cfg = io::load_config_file(o.model);
  } else {
    throw ConfigError("'" + o.model + "' is neither a registered model nor a config file");
  }
  for (const auto& p : o.params) {
    const auto [k, v] = key_value(p, "--param");
    cfg.params[k] = v;
  }
  if (!o.theta.empty()) cfg.theta = o.theta;
  if (o.w_min) cfg.sweep.w_min = *o.w_min;
  if (o.w_max) cfg.sweep.w_max = *o.w_max;
  if (o.n_points) cfg.sweep.n_points = *o.n_points;
  if (!o.out.empty()) cfg.out = o.out;
  apply_tolerances(cfg.tol, o.tol);
  io::check_params(cfg);
  io::check_grid(cfg.sweep);
  return cfg;
}

/// Writes to --out when given, otherwise to the supplied stream.
inline void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

inline int cmd_steady(const Options& o, std::ostream& out) {
  const io::RunConfig cfg = resolve_config(o);
  const Analysis an = analyze(io::build_model(cfg), cfg.tol);
  const io::json j = io::steady_json(an);
  std::ostringstream s;
  if (o.json) {
    s << j.dump(2) << '\n';
  } else {
    s << "model        " << an.model.name << " (" << model_hash(an.model) << ")\n";
    s << "dim          " << an.model.dim() << '\n';
    s << "gap          " << io::format_number(an.stationary.gap) << '\n';
    s << "residual     " << io::format_number(an.stationary.residual) << '\n';
    s << "min eig(rho) " << io::format_number(an.stationary.min_eigenvalue) << '\n';
    if (j.contains("photon_number")) s << "photon num.  " << io::format_number(j["photon_number"].get<double>()) << '\n';
    s << "populations ";
    for (Eigen::Index i = 0; i < an.model.dim(); ++i)
      s << ' ' << io::format_number(an.stationary.rho.matrix(i, i).real());
    s << '\n';
  }
  emit(cfg.out, out, s.str());
  return 0;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  const io::RunConfig cfg = resolve_config(o);
  const io::CsvTable t = io::sweep_table(cfg, threads_from_env());
  std::ostringstream s;
  if (o.json) {
    s << io::json{{"header", t.header}, {"rows", t.rows}}.dump() << '\n';
  } else {
    io::write_csv(s, t);
  }
  emit(cfg.out, out, s.str());
  return 0;
}

inline int cmd_bound_report(const Options& o, std::ostream& out) {
  const io::RunConfig cfg = resolve_config(o);
  if (cfg.model == "cavity") throw ConfigError("bound-report needs a Lindblad model; 'cavity' is analytic only");
  const auto omegas = io::grid_points(cfg.sweep);
  CertifyOptions opt;
  opt.threads = threads_from_env();
  bool pass = true;
  io::json reports = io::json::array();
  std::ostringstream s;
  for (const auto& v : io::build_variants(cfg)) {
    const Analysis an = analyze(v.model, cfg.tol);
    const BoundReport rep = certify(an, omegas, opt);
    pass = pass && rep.pass();
    const io::json j = io::bound_json(rep, v.theta);
    reports.push_back(j);
    if (o.json) continue;
    std::size_t failed = 0;
    for (const auto& p : rep.points) failed += p.pass ? 0 : 1;
    s << rep.model_name << ' ' << rep.model_hash;
    if (v.theta) s << " theta=" << io::format_number(*v.theta);
    s << ": max lambda_max " << io::format_number(j["summary"]["max_lambda"].get<double>()) << ", min margin "
      << io::format_number(j["summary"]["min_margin"].get<double>()) << ", " << rep.points.size() - failed << '/'
      << rep.points.size() << " points pass -> " << (rep.pass() ? "PASS" : "FAIL") << '\n';
    std::size_t shown = 0;
    for (const auto& p : rep.points) {
      if (p.pass || shown++ >= 10) continue;
      s << "  omega " << io::format_number(p.omega) << ": margin " << io::format_number(p.margin_min)
        << (p.note.empty() ? "" : " (" + p.note + ")") << '\n';
    }
  }
  if (o.json) s << io::json{{"reports", reports}, {"pass", pass}}.dump(2) << '\n';
  emit(cfg.out, out, s.str());
  return pass ? 0 : 2;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  ToleranceSet tol;
  apply_tolerances(tol, o.tol);
  std::vector<const acceptance::Suite*> chosen;
  if (o.suites.empty()) {
    for (const auto& s : acceptance::suites()) chosen.push_back(&s);
  } else {
    for (const auto& name : o.suites) {
      const auto* s = acceptance::find_suite(name);
      if (s == nullptr) throw ConfigError("unknown suite '" + name + "'");
      chosen.push_back(s);
    }
  }
  std::ostringstream s;
  io::json results = io::json::array();
  int passed = 0;
  for (const auto* suite : chosen) {
    const auto r = acceptance::run(*suite, tol);
    passed += r.pass ? 1 : 0;
    if (o.json)
      results.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    else
      s << acceptance::format_line(r) << '\n';
  }
  const bool ok = passed == static_cast<int>(chosen.size());
  if (o.json) s << io::json{{"suites", results}, {"pass", ok}}.dump(2) << '\n';
  else s << "verify: " << passed << '/' << chosen.size() << " suites passed\n";
  emit(o.out, out, s.str());
  return ok ? 0 : 2;
}

inline void print_not_mixing(const NotMixing& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  for (const auto& z : e.offending())
    err << "  eigenvalue " << io::format_number(z.real()) << (z.imag() < 0 ? " - " : " + ")
        << io::format_number(std::abs(z.imag())) << "i\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Input-output quantum Fisher-information bounds for monitored open quantum systems"};
  app.require_subcommand(1);
  Options o;

  auto model_options = [&](CLI::App* c) {
    c->add_option("--model", o.model, "registered model name or path to a JSON config")->required();
    c->add_option("--param", o.params, "model parameter name=value (repeatable)");
    c->add_option("--theta", o.theta, "homodyne phase in radians (repeatable)");
    c->add_option("--wmin", o.w_min, "lowest frequency");
    c->add_option("--wmax", o.w_max, "highest frequency");
    c->add_option("--n", o.n_points, "number of frequency points");
    c->add_option("--out", o.out, "write the result to this file");
    c->add_flag("--json", o.json, "JSON output");
    c->add_option("--tol", o.tol, "tolerance name=value (repeatable; 'all' sets every accuracy tolerance)");
  };
  auto* steady = app.add_subcommand("steady", "stationary state report");
  auto* sweep = app.add_subcommand("sweep", "spectrum, response and bound per frequency as CSV");
  auto* bound = app.add_subcommand("bound-report", "certify the activity bound over the sweep");
  auto* verify = app.add_subcommand("verify", "run the acceptance suites");
  for (auto* c : {steady, sweep, bound}) model_options(c);
  verify->add_option("--suite", o.suites, "suite name or number (repeatable; default all)");
  verify->add_option("--tol", o.tol, "tolerance name=value (repeatable)");
  verify->add_option("--out", o.out, "write the table to this file");
  verify->add_flag("--json", o.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (steady->parsed()) return cmd_steady(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (bound->parsed()) return cmd_bound_report(o, out);
    return cmd_verify(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const NotMixing& e) {
    print_not_mixing(e, err);
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ioqfr::cli
