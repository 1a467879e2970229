#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qbf/bounds_marginal.hpp"
#include "qbf/svg.hpp"

namespace qbf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Data: return kExitData;
    case ErrorCategory::Config: return kExitConfig;
    case ErrorCategory::Numerical: return kExitNumerical;
  }
  return kExitInternal;
}

namespace {

constexpr const char* kBlue = "#1f5f9e";
constexpr const char* kRed = "#b2382c";
constexpr const char* kGray = "#777777";
constexpr const char* kGreen = "#2e7d32";

struct Artifacts {
  std::string csv;
  std::string svg;
  json config = json::object();
  json summary = json::object();
};

std::vector<double> resolve_taus(const RunConfig& cfg) {
  if (!cfg.grid.explicit_taus.empty()) return cfg.grid.explicit_taus;
  if (cfg.grid.count) {
    const double lo = cfg.grid.lo.value_or(std::max(cfg.delta + 0.01, 0.15));
    const double hi = cfg.grid.hi.value_or(std::min(1.0 - cfg.delta - 0.01, 0.85));
    if (*cfg.grid.count == 0 || lo > hi)
      throw Error(ErrorCode::InvalidConfig, "tau grid is empty");
    return linear_grid(lo, hi, *cfg.grid.count);
  }
  if (cfg.grid.lo || cfg.grid.hi)
    throw Error(ErrorCode::InvalidConfig, "--tau-min/--tau-max need --tau-count");
  if (cfg.subcommand == "coverage") return {0.25, 0.5, 0.75};
  return default_tau_grid(cfg.delta);
}

PolicySpec policy_of(const RunConfig& cfg) {
  PolicySpec p;
  p.kind = cfg.policy_kind == "randomized" ? PolicyKind::Randomized : PolicyKind::Threshold;
  p.delta = cfg.delta;
  p.z_source = cfg.rank_by == "auxiliary" ? RankingSource::Auxiliary : RankingSource::Outcome;
  p.seed = cfg.seed;
  return p;
}

Side side_of(const RunConfig& cfg) {
  return cfg.side == "upper" ? Side::UpperConclusion : Side::LowerConclusion;
}

json data_json(const RunConfig& cfg) {
  json j;
  j["input"] = cfg.input;
  j["y"] = cfg.columns.y;
  j["d"] = cfg.columns.d;
  j["x"] = cfg.columns.x;
  j["z"] = cfg.columns.z ? json(*cfg.columns.z) : json(nullptr);
  return j;
}

json policy_json(const RunConfig& cfg) {
  json j;
  j["kind"] = cfg.policy_kind;
  j["delta"] = cfg.delta;
  if (cfg.policy_kind == "threshold") j["rank_by"] = cfg.rank_by;
  return j;
}

json dgp_json(const DgpSpec& d) {
  json j;
  j["n"] = d.n;
  j["rho_sel"] = d.rho_sel;
  j["effect"] = d.effect;
  j["x_probs"] = d.x_probs;
  j["x_shift"] = d.x_shift;
  return j;
}

json warnings_json(const std::vector<Issue>& issues) {
  json j = json::array();
  for (const auto& w : issues) j.push_back({{"code", w.code}, {"message", w.message}});
  return j;
}

std::vector<double> values_of(const std::vector<ExtendedReal>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (auto e : v) out.push_back(e.value());
  return out;
}

Sample load_sample(const RunConfig& cfg) {
  if (cfg.input.empty()) throw Error(ErrorCode::InvalidConfig, "--input is required");
  if (cfg.rank_by == "auxiliary" && !cfg.columns.z)
    throw Error(ErrorCode::InvalidConfig, "--rank-by auxiliary needs --z");
  Sample s = ingest_csv(cfg.input, cfg.columns);
  require_valid(s);
  return s;
}

/// Policy, apparent distributions and F_Y for an observed sample.
struct Pipeline {
  Sample sample;
  PolicyAssignment assignment;
  ApparentPair pair;
  StepCdf f_y;
};

Pipeline build_pipeline(const RunConfig& cfg) {
  Pipeline p;
  p.sample = load_sample(cfg);
  p.assignment = assign_policy(p.sample, policy_of(cfg));
  p.pair = apparent_pair(p.sample, p.assignment);
  p.f_y = outcome_cdf(p.sample);
  return p;
}

json pipeline_summary(const Pipeline& p) {
  json j;
  j["n"] = p.sample.n();
  j["p_hat"] = p.pair.p_hat;
  j["realized_rate"] = p.assignment.realized_rate;
  j["newly_treated"] = p.assignment.newly_treated_count(p.sample);
  j["warnings"] = warnings_json(p.assignment.warnings);
  return j;
}

std::string frontier_svg(const FrontierCurve& f, const std::string& title) {
  SvgPlot plot(title, "tau", "selection bias c");
  plot.add_series(f.taus, f.c_values, kGray, "raw", true);
  plot.add_series(f.taus, f.clamped, kBlue, "clamped");
  plot.add_hline(0.0, kGray);
  plot.add_hline(1.0, kGray);
  std::ostringstream note;
  note << "g = " << format_double(f.g);
  plot.add_note(note.str());
  return plot.render();
}

Artifacts cmd_frontier(const RunConfig& cfg, const std::vector<double>& taus) {
  const auto p = build_pipeline(cfg);
  const auto curve = breakdown_frontier(p.pair, p.f_y, taus, cfg.g, side_of(cfg));
  Artifacts a;
  std::ostringstream csv;
  write_frontier_csv(csv, curve);
  a.csv = csv.str();
  a.svg = frontier_svg(curve, cfg.side == "upper" ? "Breakdown frontier (upper conclusion)"
                                                   : "Breakdown frontier (lower conclusion)");
  a.config["data"] = data_json(cfg);
  a.config["policy"] = policy_json(cfg);
  a.config["g"] = cfg.g;
  a.config["side"] = cfg.side;
  a.config["taus"] = taus;
  a.summary = pipeline_summary(p);
  return a;
}

Artifacts cmd_bounds(const RunConfig& cfg, const std::vector<double>& taus) {
  const auto p = build_pipeline(cfg);
  const auto curve = global_bounds_curve(p.pair, p.f_y, taus, cfg.c);
  const auto point = global_bounds_curve(p.pair, p.f_y, taus, 0.0);
  Artifacts a;
  std::ostringstream csv;
  write_bounds_csv(csv, curve);
  a.csv = csv.str();
  SvgPlot plot("Bounds on the quantile effect", "tau", "effect");
  plot.add_series(taus, values_of(curve.lower), kBlue, "lower");
  plot.add_series(taus, values_of(curve.upper), kRed, "upper");
  plot.add_series(taus, values_of(point.lower), kGray, "c = 0", true);
  plot.add_note("c = " + format_double(cfg.c));
  a.svg = plot.render();
  a.config["data"] = data_json(cfg);
  a.config["policy"] = policy_json(cfg);
  a.config["c"] = cfg.c;
  a.config["taus"] = taus;
  a.summary = pipeline_summary(p);
  return a;
}

Artifacts cmd_derived(const RunConfig& cfg, const std::vector<double>& taus) {
  const auto p = build_pipeline(cfg);
  const auto derived = derived_bounds(p.pair, p.f_y, cfg.tau_star, cfg.g, taus);
  const auto point = global_bounds_curve(p.pair, p.f_y, taus, 0.0);
  const auto sharp = sharpness_diagnostic(p.pair, p.f_y, cfg.tau_star, derived.c_clamped);
  const std::string sharp_name = sharp == Sharpness::Binding ? "binding" : "slack";

  Artifacts a;
  std::ostringstream csv;
  write_derived_csv(csv, derived.curve, point);
  a.csv = csv.str();
  SvgPlot plot("Bounds at the breakdown point of tau*", "tau", "effect");
  plot.add_series(taus, values_of(derived.curve.lower), kBlue, "lower");
  plot.add_series(taus, values_of(derived.curve.upper), kRed, "upper");
  plot.add_series(taus, values_of(point.lower), kGray, "c = 0", true);
  plot.add_vline(cfg.tau_star, kGreen);
  plot.add_hline(cfg.g, kGreen);
  plot.add_note("tau* = " + format_double(cfg.tau_star) + ", c = " +
                format_double(derived.c_clamped) + " (raw " + format_double(derived.c_raw) + ")");
  plot.add_note("sharpness at tau*: " + sharp_name);
  a.svg = plot.render();
  a.config["data"] = data_json(cfg);
  a.config["policy"] = policy_json(cfg);
  a.config["g"] = cfg.g;
  a.config["tau_star"] = cfg.tau_star;
  a.config["taus"] = taus;
  a.summary = pipeline_summary(p);
  a.summary["c_raw"] = derived.c_raw;
  a.summary["c_clamped"] = derived.c_clamped;
  a.summary["sharpness"] = sharp_name;
  return a;
}

Artifacts cmd_marginal(const RunConfig& cfg, const std::vector<double>& taus) {
  const Sample s = load_sample(cfg);
  const auto ipmf = indifference_pmf(s, cfg.alpha);
  FrontierCurve curve;
  if (cfg.m == 0.0) {
    curve = marginal_frontier(s, ipmf, taus);
  } else {
    std::vector<double> density;
    density.reserve(taus.size());
    for (double t : taus) density.push_back(density_at_quantile(s, t, cfg.bandwidth));
    curve = marginal_frontier_general(s, ipmf, taus, cfg.m, density);
  }
  Artifacts a;
  std::ostringstream csv;
  write_frontier_csv(csv, curve);
  a.csv = csv.str();
  SvgPlot plot("Marginal-effect breakdown frontier", "tau", "selection bias c");
  plot.add_series(curve.taus, curve.c_values, kGray, "raw", true);
  plot.add_series(curve.taus, curve.clamped, kBlue, "clamped");
  plot.add_hline(0.0, kGray);
  plot.add_note("alpha = " + format_double(cfg.alpha) + ", m = " + format_double(cfg.m));
  a.svg = plot.render();
  a.config["data"] = data_json(cfg);
  a.config["alpha"] = cfg.alpha;
  a.config["m"] = cfg.m;
  a.config["bandwidth"] = cfg.bandwidth ? json(*cfg.bandwidth) : json(nullptr);
  a.config["taus"] = taus;
  a.summary["n"] = s.n();
  a.summary["p_hat"] = s.treated_share();
  a.summary["misspecification_risk"] = cfg.alpha != 1.0;
  return a;
}

Artifacts cmd_bootstrap(const RunConfig& cfg, const std::vector<double>& taus) {
  const Sample s = load_sample(cfg);
  BootstrapConfig boot;
  boot.replications = cfg.replications;
  boot.level = cfg.level;
  boot.seed = cfg.seed;
  boot.freeze_assignment = cfg.freeze_assignment;
  boot.threads = cfg.threads;
  BandCurve band;
  if (cfg.statistic == "marginal") {
    band = bootstrap_marginal_frontier(s, cfg.alpha, taus, boot);
  } else {
    band = bootstrap_frontier(s, policy_of(cfg), cfg.g, side_of(cfg), taus, boot);
  }
  Artifacts a;
  std::ostringstream csv;
  write_band_csv(csv, band);
  a.csv = csv.str();
  SvgPlot plot("Frontier with pointwise bootstrap band", "tau", "selection bias c");
  plot.add_band(band.taus, band.lo, band.hi, kBlue);
  plot.add_series(band.taus, band.point, kBlue, "estimate");
  plot.add_hline(0.0, kGray);
  plot.add_note(format_double(cfg.level) + " level, " + std::to_string(band.replications) +
                " replications");
  a.svg = plot.render();
  a.config["data"] = data_json(cfg);
  a.config["statistic"] = cfg.statistic;
  if (cfg.statistic == "marginal") {
    a.config["alpha"] = cfg.alpha;
  } else {
    a.config["policy"] = policy_json(cfg);
    a.config["g"] = cfg.g;
    a.config["side"] = cfg.side;
    a.config["freeze_assignment"] = cfg.freeze_assignment;
  }
  a.config["replications"] = cfg.replications;
  a.config["level"] = cfg.level;
  a.config["taus"] = taus;
  a.summary["n"] = s.n();
  a.summary["replications"] = band.replications;
  a.summary["failed"] = band.failed;
  return a;
}

Artifacts cmd_simulate(const RunConfig& cfg) {
  DgpSpec spec = cfg.dgp;
  spec.seed = cfg.seed;
  const Sample s = generate_dgp(spec);
  Artifacts a;
  std::ostringstream csv;
  write_sample_csv(csv, s);
  a.csv = csv.str();

  SvgPlot plot("Simulated outcome distributions", "y", "cdf");
  for (auto [pred, color, label] : {std::tuple{RowPredicate::treated(), kRed, "treated"},
                                    std::tuple{RowPredicate::control(), kBlue, "control"}}) {
    const auto f = conditional_ecdf(s, nullptr, pred);
    plot.add_series({f.support().begin(), f.support().end()}, {f.cum().begin(), f.cum().end()},
                    color, label, false, true);
  }
  a.svg = plot.render();
  a.config["dgp"] = dgp_json(spec);
  a.summary["n"] = s.n();
  a.summary["p_hat"] = s.treated_share();
  return a;
}

Artifacts cmd_coverage(const RunConfig& cfg, const std::vector<double>& taus) {
  CoverageConfig cc;
  cc.n_data = cfg.dgp.n;
  cc.replications = cfg.replications;
  cc.runs = cfg.runs;
  cc.level = cfg.level;
  cc.seed = cfg.seed;
  cc.oracle_n = cfg.oracle_n;
  cc.threads = cfg.threads;
  const auto table = coverage_study(cfg.dgp, policy_of(cfg), cfg.g, taus, cc);
  Artifacts a;
  std::ostringstream csv;
  write_coverage_csv(csv, table);
  a.csv = csv.str();
  SvgPlot plot("Bootstrap band coverage", "tau", "coverage");
  plot.add_series(table.taus, table.coverage, kBlue, "coverage");
  plot.add_hline(cfg.level, kGreen);
  plot.add_note(std::to_string(table.runs) + " runs, n = " + std::to_string(table.n_data));
  a.svg = plot.render();
  json dgp = dgp_json(cfg.dgp);
  dgp.erase("n");
  a.config["dgp"] = dgp;
  a.config["policy"] = policy_json(cfg);
  a.config["g"] = cfg.g;
  a.config["n_data"] = cfg.dgp.n;
  a.config["replications"] = cfg.replications;
  a.config["runs"] = cfg.runs;
  a.config["level"] = cfg.level;
  a.config["oracle_n"] = cfg.oracle_n;
  a.config["taus"] = taus;
  a.summary["failed_runs"] = table.failed_runs;
  a.summary["low_run_count"] = table.low_run_count;
  return a;
}

/// Programmatic mirror of a CSV: header plus rows with numeric cells as JSON
/// numbers and the -inf / +inf sentinels kept as strings.
json csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  const auto table = read_csv(in);
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row = json::array();
    for (const auto& cell : r) {
      double v = 0.0;
      bool numeric = true;
      try {
        v = parse_double(cell);
      } catch (const Error&) {
        numeric = false;
      }
      if (numeric && std::isfinite(v))
        row.push_back(v);
      else
        row.push_back(cell);
    }
    rows.push_back(std::move(row));
  }
  return json{{"columns", table.header}, {"rows", std::move(rows)}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::InvalidConfig, "write failed for '" + path.string() + "'");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    const std::string name = cfg.name.empty() ? cfg.subcommand : cfg.name;
    const bool uses_grid = cfg.subcommand != "simulate";
    const std::vector<double> taus = uses_grid ? resolve_taus(cfg) : std::vector<double>{};

    Artifacts a;
    if (cfg.subcommand == "frontier") a = cmd_frontier(cfg, taus);
    else if (cfg.subcommand == "bounds") a = cmd_bounds(cfg, taus);
    else if (cfg.subcommand == "derived-bounds") a = cmd_derived(cfg, taus);
    else if (cfg.subcommand == "marginal-frontier") a = cmd_marginal(cfg, taus);
    else if (cfg.subcommand == "bootstrap") a = cmd_bootstrap(cfg, taus);
    else if (cfg.subcommand == "simulate") a = cmd_simulate(cfg);
    else if (cfg.subcommand == "coverage") a = cmd_coverage(cfg, taus);
    else throw Error(ErrorCode::InvalidConfig, "unknown subcommand '" + cfg.subcommand + "'");

    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::InvalidConfig, "cannot create '" + cfg.out_dir + "'");

    json outputs = json::array({name + ".csv", name + ".svg"});
    write_file(dir / (name + ".csv"), a.csv);
    write_file(dir / (name + ".svg"), a.svg);
    if (cfg.json) {
      write_file(dir / (name + ".json"), csv_to_json(a.csv).dump(2) + "\n");
      outputs.push_back(name + ".json");
    }

    json manifest;
    manifest["tool"] = "qbf";
    manifest["version"] = QBF_VERSION;
    manifest["subcommand"] = cfg.subcommand;
    manifest["seed"] = cfg.seed;
    manifest["config"] = std::move(a.config);
    manifest["outputs"] = std::move(outputs);
    manifest["summary"] = std::move(a.summary);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    for (const auto& w : manifest["summary"].value("warnings", json::array()))
      log << "warning: " << w["code"].get<std::string>() << ": "
          << w["message"].get<std::string>() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

namespace {

void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out-dir,-o", cfg.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--name", cfg.name, "Base name of the CSV/SVG outputs (default: subcommand)");
  sub->add_flag("--json", cfg.json, "Also write a JSON mirror of the CSV");
  sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
}

void add_data_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input,-i", cfg.input, "Input CSV with a header line")->required();
  sub->add_option("--y", cfg.columns.y, "Outcome column")->capture_default_str();
  sub->add_option("--d", cfg.columns.d, "Treatment column (0/1)")->capture_default_str();
  sub->add_option("--x", cfg.columns.x, "Covariate columns (comma separated)")->delimiter(',');
  sub->add_option("--z", cfg.columns.z, "Auxiliary ranking column");
}

void add_policy_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--policy", cfg.policy_kind, "Policy kind")
      ->check(CLI::IsMember({"threshold", "randomized"}))
      ->capture_default_str();
  sub->add_option("--delta", cfg.delta, "Share of the population newly treated")
      ->capture_default_str();
  sub->add_option("--rank-by", cfg.rank_by, "Threshold ranking variable")
      ->check(CLI::IsMember({"outcome", "auxiliary"}))
      ->capture_default_str();
}

void add_grid_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--taus", cfg.grid.explicit_taus, "Explicit tau grid (comma separated)")
      ->delimiter(',');
  sub->add_option("--tau-min", cfg.grid.lo, "Lower end of an equispaced tau grid");
  sub->add_option("--tau-max", cfg.grid.hi, "Upper end of an equispaced tau grid");
  sub->add_option("--tau-count", cfg.grid.count, "Points in an equispaced tau grid");
}

void add_side_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--g", cfg.g, "Effect threshold of the conclusion")->capture_default_str();
  sub->add_option("--side", cfg.side, "Conclusion G >= g (lower) or G <= g (upper)")
      ->check(CLI::IsMember({"lower", "upper"}))
      ->capture_default_str();
}

void add_dgp_options(CLI::App* sub, RunConfig& cfg, const char* n_flag) {
  sub->add_option(n_flag, cfg.dgp.n, "Rows per simulated sample")->capture_default_str();
  sub->add_option("--rho-sel", cfg.dgp.rho_sel, "Selection correlation")->capture_default_str();
  sub->add_option("--effect", cfg.dgp.effect, "Additive treatment effect")->capture_default_str();
  sub->add_option("--x-probs", cfg.dgp.x_probs, "Covariate level probabilities")
      ->delimiter(',');
  sub->add_option("--x-shift", cfg.dgp.x_shift, "Covariate effect on the outcome")
      ->capture_default_str();
}

void add_bootstrap_options(CLI::App* sub, RunConfig& cfg, std::size_t& replications) {
  sub->add_option("--replications,-B", replications, "Bootstrap replications")
      ->capture_default_str();
  sub->add_option("--level", cfg.level, "Pointwise confidence level")->capture_default_str();
}

int threads_from_env() {
  const char* env = std::getenv("QBF_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096)
    throw Error(ErrorCode::InvalidConfig, std::string("QBF_THREADS must be a positive integer, got '") + env + "'");
  return static_cast<int>(v);
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Sensitivity frontiers and bounds for quantile effects of treatment-expansion policies",
               "qbf"};
  app.set_version_flag("--version", QBF_VERSION);
  app.require_subcommand(1);

  auto* frontier = app.add_subcommand("frontier", "Breakdown frontier over a tau grid");
  add_data_options(frontier, cfg);
  add_policy_options(frontier, cfg);
  add_side_options(frontier, cfg);
  add_grid_options(frontier, cfg);
  add_output_options(frontier, cfg);

  auto* bounds = app.add_subcommand("bounds", "Sharp bounds on the quantile effect at a given c");
  add_data_options(bounds, cfg);
  add_policy_options(bounds, cfg);
  bounds->add_option("--c", cfg.c, "Selection bias in [0, 1]")->capture_default_str();
  add_grid_options(bounds, cfg);
  add_output_options(bounds, cfg);

  auto* derived = app.add_subcommand("derived-bounds", "Bounds at the breakdown point of tau*");
  add_data_options(derived, cfg);
  add_policy_options(derived, cfg);
  derived->add_option("--tau-star", cfg.tau_star, "Quantile whose breakdown point is used")
      ->capture_default_str();
  derived->add_option("--g", cfg.g, "Effect threshold at tau*")->capture_default_str();
  add_grid_options(derived, cfg);
  add_output_options(derived, cfg);

  auto* marginal = app.add_subcommand("marginal-frontier", "Marginal-effect breakdown frontier");
  add_data_options(marginal, cfg);
  marginal->add_option("--alpha", cfg.alpha, "Weight of the treated covariate law at the margin")
      ->capture_default_str();
  marginal->add_option("--m", cfg.m, "Effect threshold; nonzero values use a density estimate")
      ->capture_default_str();
  marginal->add_option("--bandwidth", cfg.bandwidth, "Kernel bandwidth (default Silverman)");
  add_grid_options(marginal, cfg);
  add_output_options(marginal, cfg);

  auto* boot = app.add_subcommand("bootstrap", "Frontier with a pointwise percentile band");
  add_data_options(boot, cfg);
  add_policy_options(boot, cfg);
  add_side_options(boot, cfg);
  boot->add_option("--statistic", cfg.statistic, "Frontier to resample")
      ->check(CLI::IsMember({"frontier", "marginal"}))
      ->capture_default_str();
  boot->add_option("--alpha", cfg.alpha, "Margin weight for the marginal statistic")
      ->capture_default_str();
  boot->add_flag("--freeze-assignment", cfg.freeze_assignment,
                 "Resample the original policy assignment instead of re-running the policy");
  std::size_t boot_reps = 1000;
  add_bootstrap_options(boot, cfg, boot_reps);
  add_grid_options(boot, cfg);
  add_output_options(boot, cfg);

  auto* simulate = app.add_subcommand("simulate", "Draw a sample from the selection model");
  add_dgp_options(simulate, cfg, "--n");
  add_output_options(simulate, cfg);

  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of bootstrap bands");
  add_dgp_options(coverage, cfg, "--n-data");
  add_policy_options(coverage, cfg);
  coverage->add_option("--g", cfg.g, "Effect threshold")->capture_default_str();
  coverage->add_option("--runs,-M", cfg.runs, "Simulated datasets")->capture_default_str();
  coverage->add_option("--oracle-n", cfg.oracle_n, "Oracle sample size")->capture_default_str();
  std::size_t coverage_reps = 200;
  add_bootstrap_options(coverage, cfg, coverage_reps);
  add_grid_options(coverage, cfg);
  add_output_options(coverage, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  cfg.replications = cfg.subcommand == "coverage" ? coverage_reps : boot_reps;

  try {
    cfg.threads = threads_from_env();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  try {
    return run(cfg, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace qbf::cli
