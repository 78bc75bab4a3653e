#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssn/montecarlo.hpp"
#include "ssn/optimize.hpp"
#include "ssn/report.hpp"
#include "ssn/schemes.hpp"
#include "ssn/validate.hpp"

namespace {

using ssn::real;

ssn::SchemeKind parse_scheme(const std::string& name) {
  if (name == "twin-simple") return ssn::SchemeKind::TwinSimple;
  if (name == "twin-opt") return ssn::SchemeKind::TwinOptimizedK;
  if (name == "squeezed") return ssn::SchemeKind::SqueezedCoherent;
  throw CLI::ValidationError("--scheme",
                             "expected twin-simple, twin-opt or squeezed");
}

std::string scheme_name(ssn::SchemeKind kind) {
  switch (kind) {
    case ssn::SchemeKind::TwinSimple: return "twin-simple";
    case ssn::SchemeKind::TwinOptimizedK: return "twin-opt";
    case ssn::SchemeKind::SqueezedCoherent: return "squeezed";
  }
  return "?";
}

std::vector<real> linspace(real lo, real hi, int n) {
  std::vector<real> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

std::vector<real> logspace(real lo, real hi, int n) {
  std::vector<real> g(n);
  const real llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return g;
}

nlohmann::json config_json(const ssn::SchemeConfig& cfg) {
  return {{"scheme", scheme_name(cfg.kind)},
          {"N", static_cast<double>(cfg.N)},
          {"A", static_cast<double>(cfg.absorption)},
          {"eta_p", static_cast<double>(cfg.eta_p)},
          {"eta_d", static_cast<double>(cfg.eta_d)},
          {"r", static_cast<double>(cfg.r)},
          {"R", static_cast<double>(cfg.R)}};
}

ssn::Table sweep_table(const ssn::SweepSpec& spec, const ssn::SweepResult& result) {
  ssn::Table t;
  t.columns = {spec.axis == ssn::SweepAxis::EtaD ? "eta_d" : "R",
               "delta_A", "Q", "G"};
  const bool squeezed = spec.base.kind == ssn::SchemeKind::SqueezedCoherent;
  t.columns.push_back(squeezed ? "r_opt" : "k_opt");
  for (const auto& row : result.rows) {
    std::vector<std::optional<double>> cells;
    cells.emplace_back(static_cast<double>(row.axis_value));
    cells.emplace_back(static_cast<double>(row.delta_A));
    cells.emplace_back(static_cast<double>(row.Q));
    cells.emplace_back(static_cast<double>(row.transfer_G));
    const auto& extra = squeezed ? row.r_opt : row.k_opt;
    if (extra)
      cells.emplace_back(static_cast<double>(*extra));
    else
      cells.emplace_back(std::nullopt);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void emit_sweep(const std::filesystem::path& csv_path, const std::string& command,
                const ssn::SweepSpec& spec, const ssn::SweepResult& result) {
  ssn::RunManifest manifest;
  manifest.command = command;
  manifest.timestamp = ssn::current_timestamp();
  manifest.params = config_json(spec.base);
  manifest.params["axis"] = spec.axis == ssn::SweepAxis::EtaD ? "eta_d" : "R";
  manifest.params["points"] = spec.grid.size();
  manifest.params["grid_min"] = static_cast<double>(spec.grid.front());
  manifest.params["grid_max"] = static_cast<double>(spec.grid.back());
  manifest.params["optimize_r"] = spec.optimize_r;
  const ssn::Table table = sweep_table(spec, result);
  ssn::write_csv(csv_path, manifest, table);
  std::filesystem::path mirror = csv_path;
  mirror.replace_extension(".json");
  ssn::write_json_mirror(mirror, manifest, table);
}

int cmd_eval(const ssn::SchemeConfig& cfg, bool optimize_r) {
  ssn::UncertaintyReport rep;
  real r_used = cfg.r;
  if (optimize_r && cfg.kind == ssn::SchemeKind::SqueezedCoherent) {
    const ssn::OptimizeResult opt = ssn::optimize_input_squeezing(cfg);
    rep = opt.report;
    r_used = opt.r_opt;
  } else {
    rep = ssn::evaluate_scheme(cfg);
  }
  std::printf("%-12s %-10s %-10s %-7s %-7s %-9s %-5s %-13s %-11s %-13s %s\n",
              "scheme", "N", "A", "eta_p", "eta_d", "r", "R", "delta_A", "Q", "G",
              "extra");
  std::string extra = "-";
  if (rep.k_opt) extra = "k_opt=" + ssn::format_number(static_cast<double>(*rep.k_opt));
  if (rep.r_opt && cfg.kind == ssn::SchemeKind::SqueezedCoherent)
    extra = "r=" + ssn::format_number(static_cast<double>(r_used));
  std::printf("%-12s %-10.4g %-10.4g %-7.4g %-7.4g %-9.5g %-5.3g %-13.6g %-11.6g %-13.6g %s\n",
              scheme_name(cfg.kind).c_str(), static_cast<double>(cfg.N),
              static_cast<double>(cfg.absorption), static_cast<double>(cfg.eta_p),
              static_cast<double>(cfg.eta_d), static_cast<double>(r_used),
              static_cast<double>(cfg.R), static_cast<double>(rep.delta_A),
              static_cast<double>(rep.Q), static_cast<double>(rep.transfer_G),
              extra.c_str());

  nlohmann::json record = {{"command", "eval"},
                           {"config", config_json(cfg)},
                           {"delta_A", static_cast<double>(rep.delta_A)},
                           {"Q", static_cast<double>(rep.Q)},
                           {"G", static_cast<double>(rep.transfer_G)}};
  record["config"]["r"] = static_cast<double>(r_used);
  if (rep.k_opt) record["k_opt"] = static_cast<double>(*rep.k_opt);
  if (optimize_r) record["r_opt"] = static_cast<double>(r_used);
  std::cout << record.dump() << "\n";
  return 0;
}

int cmd_figure(const std::string& name, const std::filesystem::path& out_dir,
               real big_n, real absorption, int points,
               std::optional<double> eps_p2_override) {
  std::filesystem::create_directories(out_dir);
  ssn::SchemeConfig base;
  base.N = big_n;
  base.absorption = absorption;

  struct Curve {
    std::string label;
    ssn::SweepSpec spec;
  };
  std::vector<Curve> curves;
  const auto eta_from_eps = [](double eps2) { return real(1) / (1 + real(eps2)); };

  if (name == "fig2" || name == "fig4") {
    std::vector<double> eps_set = name == "fig2"
                                      ? std::vector<double>{0, 1e-5, 1e-4, 1e-3, 1e-2}
                                      : std::vector<double>{0, 1e-3, 1e-2};
    if (eps_p2_override) eps_set = {*eps_p2_override};
    const int n = points > 0 ? points : 200;
    for (double eps : eps_set) {
      Curve c;
      c.label = "epsp2_" + ssn::format_number(eps);
      c.spec.base = base;
      c.spec.base.kind = name == "fig2" ? ssn::SchemeKind::TwinOptimizedK
                                        : ssn::SchemeKind::SqueezedCoherent;
      c.spec.base.eta_p = eta_from_eps(eps);
      c.spec.axis = ssn::SweepAxis::EtaD;
      c.spec.grid = logspace(0.01L, 1.0L, n);
      c.spec.optimize_r = name == "fig4";
      curves.push_back(std::move(c));
    }
  } else if (name == "fig3" || name == "fig5") {
    const int n = points > 0 ? points : 160;
    for (double eta_d : {0.99, 0.9, 0.5, 0.1}) {
      Curve c;
      c.label = "etad_" + ssn::format_number(eta_d);
      c.spec.base = base;
      c.spec.base.kind = name == "fig3" ? ssn::SchemeKind::TwinOptimizedK
                                        : ssn::SchemeKind::SqueezedCoherent;
      c.spec.base.eta_p = eps_p2_override ? eta_from_eps(*eps_p2_override) : real(1);
      c.spec.base.eta_d = real(eta_d);
      c.spec.axis = ssn::SweepAxis::GainR;
      c.spec.grid = linspace(0.0L, 8.0L, n);
      c.spec.optimize_r = name == "fig5";
      curves.push_back(std::move(c));
    }
  } else {
    throw CLI::ValidationError("figure", "unknown figure name " + name);
  }

  ssn::RunManifest top;
  top.command = "figure " + name;
  top.timestamp = ssn::current_timestamp();
  top.params = {{"name", name},
                {"N", static_cast<double>(big_n)},
                {"A", static_cast<double>(absorption)}};
  if (eps_p2_override) top.params["eps_p2"] = *eps_p2_override;
  nlohmann::json files = nlohmann::json::array();

  for (const auto& curve : curves) {
    const ssn::SweepResult result = ssn::run_sweep(curve.spec);
    const std::filesystem::path csv = out_dir / (name + "_" + curve.label + ".csv");
    emit_sweep(csv, "figure " + name + " " + curve.label, curve.spec, result);
    files.push_back(csv.filename().string());
    std::cout << "wrote " << csv.string() << "\n";
  }
  top.params["files"] = files;
  ssn::write_manifest(out_dir / (name + "_manifest.json"), top);
  return 0;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, std::int64_t samples) {
  std::vector<ssn::CheckResult> checks;
  const auto append = [&](std::vector<ssn::CheckResult> more) {
    checks.insert(checks.end(), more.begin(), more.end());
  };
  if (suite == "fock" || suite == "all") append(ssn::validate_fock(seed));
  if (suite == "mc" || suite == "all") append(ssn::validate_mc(seed, samples));
  if (suite == "asymptotics" || suite == "all") append(ssn::validate_asymptotics());
  if (suite == "all") append(ssn::validate_fisher());
  if (checks.empty())
    throw CLI::ValidationError("validate",
                               "unknown suite (use fock, mc, asymptotics or all)");

  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%-36s measured=%-12.4g threshold=%-10.4g %s\n", c.name.c_str(),
                static_cast<double>(c.measured), static_cast<double>(c.threshold),
                c.pass ? "PASS" : "FAIL");
    if (!c.pass) {
      ok = false;
      std::printf("  -> %s\n", c.note.empty() ? "check failed" : c.note.c_str());
    }
  }
  std::printf("%s\n", ok ? "all checks passed" : "validation FAILED");
  return ok ? 0 : 1;
}

std::map<std::string, std::string> read_kv_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto pos = line.find('=');
    if (pos == std::string::npos) continue;
    kv[line.substr(0, pos)] = line.substr(pos + 1);
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-shot-noise absorption measurement toolkit"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a single configuration");
  std::string eval_scheme;
  double eval_n = 0, eval_a = 0, eval_eta_p = 1, eval_eta_d = 1, eval_r = 0,
         eval_bigR = 0;
  bool eval_opt_r = false;
  eval->add_option("--scheme", eval_scheme, "twin-simple | twin-opt | squeezed")
      ->required();
  eval->add_option("--N", eval_n, "mean photon number at the object")->required();
  eval->add_option("--A", eval_a, "object absorption")->required();
  eval->add_option("--eta-p", eval_eta_p, "preparation efficiency");
  eval->add_option("--eta-d", eval_eta_d, "detection efficiency");
  eval->add_option("--r", eval_r, "input squeeze magnitude (squeezed scheme)");
  eval->add_option("--R", eval_bigR, "pre-detection amplifier gain");
  eval->add_flag("--optimize-r", eval_opt_r, "optimize r (squeezed scheme)");

  // figure
  auto* figure = app.add_subcommand("figure", "emit the data behind a figure");
  std::string fig_name;
  std::string fig_out = ".";
  double fig_n = 1e7, fig_a = 1e-5;
  int fig_points = 0;
  double fig_eps_p2 = -1;
  figure->add_option("name", fig_name, "fig2 | fig3 | fig4 | fig5")->required();
  figure->add_option("--out-dir", fig_out, "output directory");
  figure->add_option("--N", fig_n, "mean photon number at the object");
  figure->add_option("--A", fig_a, "object absorption");
  figure->add_option("--points", fig_points, "grid size override");
  figure->add_option("--eps-p2", fig_eps_p2,
                     "single preparation-inefficiency curve override");

  // validate
  auto* validate = app.add_subcommand("validate", "run oracle/property suites");
  std::string val_suite;
  std::uint64_t val_seed = 20240817ULL;
  std::int64_t val_samples = 1000000;
  validate->add_option("suite", val_suite, "fock | mc | asymptotics | all")
      ->required();
  validate->add_option("--seed", val_seed, "random seed");
  validate->add_option("--samples", val_samples, "Monte Carlo sample count");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "generic parameter sweep");
  std::string sw_scheme = "twin-opt", sw_axis = "R", sw_out = "sweep.csv",
              sw_config;
  double sw_n = 1e7, sw_a = 1e-5, sw_eta_p = 1, sw_eta_d = 1, sw_r = 0, sw_bigR = 0;
  double sw_min = 0, sw_max = 8;
  int sw_points = 81;
  bool sw_log = false, sw_opt_r = false;
  sweep->add_option("--config", sw_config, "key=value file with the flags below");
  sweep->add_option("--scheme", sw_scheme, "twin-simple | twin-opt | squeezed");
  sweep->add_option("--axis", sw_axis, "eta-d | R");
  sweep->add_option("--min", sw_min, "axis minimum");
  sweep->add_option("--max", sw_max, "axis maximum");
  sweep->add_option("--points", sw_points, "grid size");
  sweep->add_flag("--log", sw_log, "log-spaced grid");
  sweep->add_flag("--optimize-r", sw_opt_r, "optimize r per point (squeezed)");
  sweep->add_option("--N", sw_n, "mean photon number at the object");
  sweep->add_option("--A", sw_a, "object absorption");
  sweep->add_option("--eta-p", sw_eta_p, "preparation efficiency");
  sweep->add_option("--eta-d", sw_eta_d, "detection efficiency");
  sweep->add_option("--r", sw_r, "input squeeze magnitude");
  sweep->add_option("--R", sw_bigR, "amplifier gain");
  sweep->add_option("--out", sw_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*eval) {
      ssn::SchemeConfig cfg;
      cfg.kind = parse_scheme(eval_scheme);
      cfg.N = eval_n;
      cfg.absorption = eval_a;
      cfg.eta_p = eval_eta_p;
      cfg.eta_d = eval_eta_d;
      cfg.r = eval_r;
      cfg.R = eval_bigR;
      cfg.validate();
      return cmd_eval(cfg, eval_opt_r);
    }
    if (*figure) {
      std::optional<double> eps;
      if (fig_eps_p2 >= 0) eps = fig_eps_p2;
      return cmd_figure(fig_name, fig_out, fig_n, fig_a, fig_points, eps);
    }
    if (*validate) return cmd_validate(val_suite, val_seed, val_samples);
    if (*sweep) {
      if (!sw_config.empty()) {
        const auto kv = read_kv_config(sw_config);
        const auto get = [&](const char* key, auto& target) {
          const auto it = kv.find(key);
          if (it == kv.end()) return;
          std::istringstream ss(it->second);
          ss >> target;
        };
        get("scheme", sw_scheme);
        get("axis", sw_axis);
        get("min", sw_min);
        get("max", sw_max);
        get("points", sw_points);
        get("log", sw_log);
        get("optimize_r", sw_opt_r);
        get("N", sw_n);
        get("A", sw_a);
        get("eta_p", sw_eta_p);
        get("eta_d", sw_eta_d);
        get("r", sw_r);
        get("R", sw_bigR);
        get("out", sw_out);
      }
      ssn::SweepSpec spec;
      spec.base.kind = parse_scheme(sw_scheme);
      spec.base.N = sw_n;
      spec.base.absorption = sw_a;
      spec.base.eta_p = sw_eta_p;
      spec.base.eta_d = sw_eta_d;
      spec.base.r = sw_r;
      spec.base.R = sw_bigR;
      spec.optimize_r = sw_opt_r;
      if (sw_axis == "eta-d" || sw_axis == "eta_d")
        spec.axis = ssn::SweepAxis::EtaD;
      else if (sw_axis == "R")
        spec.axis = ssn::SweepAxis::GainR;
      else
        throw CLI::ValidationError("--axis", "expected eta-d or R");
      if (sw_points < 2) throw CLI::ValidationError("--points", "need >= 2");
      spec.grid = sw_log ? logspace(sw_min, sw_max, sw_points)
                         : linspace(sw_min, sw_max, sw_points);
      const ssn::SweepResult result = ssn::run_sweep(spec);
      emit_sweep(sw_out, "sweep", spec, result);
      std::cout << "wrote " << sw_out << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
