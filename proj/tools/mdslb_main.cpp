// mdslb: batch-sampling load balancer simulator and diffusion approximation
//
// Subcommands: simulate-ctmc, solve-ode, simulate-sde, coverage, bench,
// validate. Every subcommand is deterministic given --seed (timing fields
// excluded); outputs are written atomically and carry a provenance block
// with the effective merged configuration.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdslb/covariance.hpp"
#include "mdslb/ctmc.hpp"
#include "mdslb/diffusion.hpp"
#include "mdslb/experiments.hpp"
#include "mdslb/fluid.hpp"
#include "mdslb/io.hpp"
#include "mdslb/rates.hpp"
#include "mdslb/types.hpp"
#include "mdslb/validation.hpp"

using json = nlohmann::ordered_json;

namespace {

using mdslb::CoverageCell;
using mdslb::SystemParams;
using mdslb::TruncationConfig;
using mdslb::ValidationError;

std::vector<std::string> provenance_lines(CLI::App* sub) {
  std::vector<std::string> lines;
  lines.push_back("command=" + sub->get_name());
  lines.push_back("build=" + mdslb::build_id());
  std::string cfg = sub->config_to_str(true, false);
  std::istringstream is(cfg);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string provenance_comments(CLI::App* sub) {
  std::string out;
  for (const std::string& l : provenance_lines(sub)) out += "# " + l + "\n";
  return out;
}

json provenance_json(CLI::App* sub) {
  json prov = json::object();
  for (const std::string& l : provenance_lines(sub)) {
    size_t eq = l.find('=');
    if (eq == std::string::npos)
      prov[l] = "";
    else
      prov[l.substr(0, eq)] = l.substr(eq + 1);
  }
  return prov;
}

std::vector<CoverageCell> parse_grid(const std::string& spec) {
  std::vector<CoverageCell> cells;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ValidationError("grid entry '" + item + "' is not of the form L:k");
    try {
      CoverageCell c;
      c.L = std::stoi(item.substr(0, colon));
      c.k = std::stoi(item.substr(colon + 1));
      cells.push_back(c);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("grid entry '" + item + "' is not of the form L:k");
    }
  }
  if (cells.empty()) throw ValidationError("grid is empty");
  return cells;
}

std::string json_sibling(const std::string& csv_path) {
  if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
    return csv_path.substr(0, csv_path.size() - 4) + ".json";
  return csv_path + ".json";
}

struct CommonOpts {
  SystemParams p;
  int K = 20;
  double dt = 0.1;
  double ode_h = 0.01;
  uint64_t seed = 1;
  std::string out;
};

void add_model_flags(CLI::App* sub, CommonOpts& o, bool with_n = true) {
  if (with_n) sub->add_option("--n", o.p.n, "number of servers");
  sub->add_option("--lambda", o.p.lambda, "arrival rate per server");
  sub->add_option("--L", o.p.L, "queues sampled per request");
  sub->add_option("--k", o.p.k, "tasks per request");
  sub->add_option("--c", o.p.c, "storage redundancy factor (recorded only)");
  sub->add_option("--T", o.p.T, "time horizon");
}

void add_numerics_flags(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--K", o.K, "truncation level for the limit dynamics");
  sub->add_option("--dt", o.dt, "sample/integration grid spacing");
  sub->add_option("--ode-h", o.ode_h, "RK4 step size");
}

int cmd_simulate_ctmc(CLI::App* sub, const CommonOpts& o) {
  std::vector<double> grid = mdslb::uniform_grid(o.p.T, o.dt);
  mdslb::CtmcTrajectory tr =
      mdslb::simulate_ctmc(o.p, mdslb::counts_all_empty(o.p.n), grid, o.seed);
  size_t kmax = 0;
  for (const auto& c : tr.counts) kmax = std::max(kmax, c.size());
  std::string body = provenance_comments(sub);
  body += "time";
  for (size_t j = 0; j < kmax; ++j) body += ",level_" + std::to_string(j);
  body += ",empty_count,large_count,mean_len\n";
  for (size_t g = 0; g < tr.times.size(); ++g) {
    body += mdslb::fmt_double(tr.times[g]);
    const auto& c = tr.counts[g];
    for (size_t j = 0; j < kmax; ++j)
      body += "," + std::to_string(j < c.size() ? c[j] : 0);
    mdslb::MetricSample m = mdslb::metrics_from_counts(c, tr.jobs[g], o.p.n);
    body += "," + mdslb::fmt_double(m.empty_count) + "," +
            mdslb::fmt_double(m.large_count) + "," +
            mdslb::fmt_double(m.mean_len) + "\n";
  }
  mdslb::atomic_write_text(o.out, body);
  return 0;
}

int cmd_solve_ode(CLI::App* sub, const CommonOpts& o, int d) {
  TruncationConfig tc;
  tc.K = o.K;
  std::vector<double> grid = mdslb::uniform_grid(o.p.T, o.dt);
  mdslb::QueuePMF pi0 = mdslb::pmf_delta0(tc.K);
  mdslb::FluidTrajectory fl =
      d > 0 ? mdslb::solve_ode_powerd(pi0, o.p.lambda, d, tc, o.ode_h, grid)
            : mdslb::solve_ode(pi0, o.p, tc, o.ode_h, grid);
  std::string body = provenance_comments(sub);
  body += "time";
  for (int j = 0; j <= tc.K; ++j) body += ",pi_" + std::to_string(j);
  body += ",leak\n";
  for (size_t g = 0; g < fl.times.size(); ++g) {
    body += mdslb::fmt_double(fl.times[g]);
    for (int j = 0; j <= tc.K; ++j)
      body += "," + mdslb::fmt_double(fl.states[g].probs[static_cast<size_t>(j)]);
    body += "," + mdslb::fmt_double(fl.states[g].tail_mass) + "\n";
  }
  mdslb::atomic_write_text(o.out, body);
  return 0;
}

int cmd_simulate_sde(CLI::App* sub, const CommonOpts& o) {
  TruncationConfig tc;
  tc.K = o.K;
  mdslb::SdeCoeffs coeffs =
      mdslb::make_sde_coeffs(mdslb::pmf_delta0(tc.K), o.p, tc, o.dt, o.ode_h);
  mdslb::FluctuationVector x0(static_cast<size_t>(tc.K) + 1, 0.0);
  mdslb::SdeTrajectory tr = mdslb::simulate_sde(x0, coeffs, o.p, o.seed);
  std::string body = provenance_comments(sub);
  body += "time";
  for (int j = 0; j <= tc.K; ++j) body += ",x_" + std::to_string(j);
  body += "\n";
  for (size_t g = 0; g < tr.times.size(); ++g) {
    body += mdslb::fmt_double(tr.times[g]);
    for (int j = 0; j <= tc.K; ++j)
      body += "," + mdslb::fmt_double(tr.x[g][static_cast<size_t>(j)]);
    body += "\n";
  }
  mdslb::atomic_write_text(o.out, body);
  return 0;
}

int cmd_coverage(CLI::App* sub, const CommonOpts& o, const std::string& grid_spec,
                 int reps_diff, int reps_ctmc, bool paper_scale,
                 const std::string& ci_method, int jobs, const std::string& json_path,
                 const std::string& raw_path) {
  SystemParams base = o.p;
  int rd = reps_diff, rc = reps_ctmc;
  if (paper_scale) {
    base.n = 10000;
    rd = 1000;
    rc = 1000;
  }
  TruncationConfig tc;
  tc.K = o.K;
  std::vector<CoverageCell> cells = parse_grid(grid_spec);
  mdslb::CoverageReport rep = mdslb::run_coverage(base, cells, tc, rd, rc, o.seed,
                                                  ci_method, jobs, o.dt, o.ode_h);

  std::string body = provenance_comments(sub);
  // the option echo above shows pre-override values; say what actually ran
  if (paper_scale)
    body += "# effective: n=" + std::to_string(base.n) +
            " reps-diff=" + std::to_string(rd) +
            " reps-ctmc=" + std::to_string(rc) + "\n";
  body += "L,k,metric,ci_lo,ci_hi,coverage,diff_mean,ctmc_mean\n";
  for (const mdslb::CoverageRow& r : rep.rows) {
    body += std::to_string(r.L) + "," + std::to_string(r.k) + "," + r.metric +
            "," + mdslb::fmt_double(r.ci_lo) + "," + mdslb::fmt_double(r.ci_hi) +
            "," + mdslb::fmt_double(r.coverage) + "," +
            mdslb::fmt_double(r.diff_mean) + "," + mdslb::fmt_double(r.ctmc_mean) +
            "\n";
  }
  mdslb::atomic_write_text(o.out, body);

  json j;
  j["provenance"] = provenance_json(sub);
  j["n"] = base.n;
  j["reps_diff"] = rd;
  j["reps_ctmc"] = rc;
  j["ci_method"] = rep.ci_method;
  j["master_seed"] = rep.master_seed;
  j["K"] = tc.K;
  j["rows"] = json::array();
  for (const mdslb::CoverageRow& r : rep.rows) {
    json row;
    row["L"] = r.L;
    row["k"] = r.k;
    row["metric"] = r.metric;
    row["ci_lo"] = r.ci_lo;
    row["ci_hi"] = r.ci_hi;
    row["coverage"] = r.coverage;
    row["diff_mean"] = r.diff_mean;
    row["ctmc_mean"] = r.ctmc_mean;
    j["rows"].push_back(row);
  }
  mdslb::atomic_write_text(json_path.empty() ? json_sibling(o.out) : json_path,
                           j.dump(2) + "\n");

  if (!raw_path.empty()) {
    const char* metric_names[3] = {"empty_count", "large_count", "mean_len"};
    std::string raw = provenance_comments(sub);
    raw += "L,k,side,metric,rep,value\n";
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      for (int mi = 0; mi < 3; ++mi) {
        const std::string head = std::to_string(cells[ci].L) + "," +
                                 std::to_string(cells[ci].k) + ",";
        const std::string name = metric_names[mi];
        const auto& dv = rep.raw_diff[ci * 3 + static_cast<size_t>(mi)];
        for (size_t i = 0; i < dv.size(); ++i)
          raw += head + "diffusion," + name + "," + std::to_string(i) + "," +
                 mdslb::fmt_double(dv[i]) + "\n";
        const auto& cvv = rep.raw_ctmc[ci * 3 + static_cast<size_t>(mi)];
        for (size_t i = 0; i < cvv.size(); ++i)
          raw += head + "ctmc," + name + "," + std::to_string(i) + "," +
                 mdslb::fmt_double(cvv[i]) + "\n";
      }
    }
    mdslb::atomic_write_text(raw_path, raw);
  }
  return 0;
}

int cmd_bench(CLI::App* sub, const CommonOpts& o, int trials) {
  TruncationConfig tc;
  tc.K = o.K;
  mdslb::BenchResult b = mdslb::bench(o.p, tc, trials, o.seed, o.dt, o.ode_h);
  std::string body = provenance_comments(sub);
  body += "trials,events_per_trial,ctmc_secs_per_trial,sde_secs_per_trial,ode_secs,speedup\n";
  body += std::to_string(b.trials) + "," + mdslb::fmt_double(b.events_per_trial) +
          "," + mdslb::fmt_double(b.ctmc_secs_per_trial) + "," +
          mdslb::fmt_double(b.sde_secs_per_trial) + "," +
          mdslb::fmt_double(b.ode_secs) + "," + mdslb::fmt_double(b.speedup) + "\n";
  mdslb::atomic_write_text(o.out, body);
  return 0;
}

int cmd_validate(CLI::App* sub, const CommonOpts& o, const std::string& suite,
                 const std::string& ns_spec, int reps, double window, double t0,
                 int jobs) {
  TruncationConfig tc;
  tc.K = o.K;
  json j;
  j["provenance"] = provenance_json(sub);
  if (suite == "lln") {
    std::vector<int64_t> ns;
    std::istringstream is(ns_spec);
    std::string item;
    while (std::getline(is, item, ',')) {
      try {
        ns.push_back(std::stoll(item));
      } catch (const std::exception&) {
        throw ValidationError("ns entry '" + item + "' is not an integer");
      }
    }
    mdslb::LlnResult r =
        mdslb::lln_convergence_study(o.p, ns, reps, tc, o.seed, jobs, o.dt, o.ode_h);
    j["test"] = "lln_convergence";
    j["ns"] = r.ns;
    j["mean_err"] = r.mean_err;
    j["statistic"] = r.slope;
    j["tolerance"] = "strictly decreasing, log-log slope in [-0.65, -0.35]";
    j["decreasing"] = r.decreasing;
    j["pass"] = r.pass;
  } else if (suite == "covariation") {
    mdslb::CovariationResult r =
        mdslb::covariation_check(o.p, tc, t0, window, reps, o.seed, jobs, o.dt, o.ode_h);
    j["test"] = "covariation";
    j["statistic"] = r.max_z;
    j["tolerance"] = 5.0;
    j["t0"] = r.t0;
    j["delta"] = r.delta;
    j["reps"] = r.reps;
    j["worst_entry"] = {r.worst_i, r.worst_j};
    j["pass"] = r.pass;
  } else {
    throw ValidationError("suite must be lln or covariation");
  }
  mdslb::atomic_write_text(o.out, j.dump(2) + "\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch-sampling load balancer: exact chain, fluid limit, diffusion"};
  app.require_subcommand(1);

  // simulate-ctmc
  CommonOpts ct;
  auto* sc = app.add_subcommand("simulate-ctmc", "exact n-server chain trajectory");
  sc->set_config("--config");
  sc->option_defaults()->always_capture_default(true);
  add_model_flags(sc, ct);
  sc->add_option("--dt", ct.dt, "sample grid spacing");
  sc->add_option("--seed", ct.seed, "RNG seed");
  sc->add_option("-o,--out", ct.out, "output CSV path")->required();

  // solve-ode
  CommonOpts od;
  int ode_d = 0;
  auto* so = app.add_subcommand("solve-ode", "deterministic limit trajectory");
  so->set_config("--config");
  so->option_defaults()->always_capture_default(true);
  add_model_flags(so, od, false);
  add_numerics_flags(so, od);
  so->add_option("--d", ode_d, "d-choice shortcut (same as L=d, k=1)");
  so->add_option("-o,--out", od.out, "output CSV path")->required();

  // simulate-sde
  CommonOpts sd;
  auto* ss = app.add_subcommand("simulate-sde", "one fluctuation diffusion path");
  ss->set_config("--config");
  ss->option_defaults()->always_capture_default(true);
  add_model_flags(ss, sd);
  add_numerics_flags(ss, sd);
  ss->add_option("--seed", sd.seed, "RNG seed");
  ss->add_option("-o,--out", sd.out, "output CSV path")->required();

  // coverage (desk-scale defaults; --paper-scale switches to the full run)
  CommonOpts cv;
  cv.p.n = 2000;
  std::string grid_spec = "2:1,3:1,3:2,4:1,4:2,4:3,5:1,5:2,5:3,5:4";
  int reps_diff = 200, reps_ctmc = 200, jobs = 0;
  bool paper_scale = false;
  std::string ci_method = "percentile", json_path, raw_path;
  auto* co = app.add_subcommand("coverage", "CI coverage of chain metrics by the diffusion");
  co->set_config("--config");
  co->option_defaults()->always_capture_default(true);
  add_model_flags(co, cv);
  add_numerics_flags(co, cv);
  co->add_option("--grid", grid_spec, "cells as L:k pairs, comma separated");
  co->add_option("--reps-diff", reps_diff, "diffusion replicates per cell");
  co->add_option("--reps-ctmc", reps_ctmc, "chain replicates per cell");
  co->add_flag("--paper-scale", paper_scale, "n=10000 with 1000/1000 replicates");
  co->add_option("--ci", ci_method, "CI method: percentile or normal");
  co->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  co->add_option("--seed", cv.seed, "master seed");
  co->add_option("--json", json_path, "JSON report path (default: CSV path with .json)");
  co->add_option("--raw", raw_path, "optional per-replicate sample dump CSV");
  co->add_option("-o,--out", cv.out, "output CSV path")->required();

  // bench
  CommonOpts bn;
  int trials = 20;
  auto* be = app.add_subcommand("bench", "per-trial chain vs diffusion timing");
  be->set_config("--config");
  be->option_defaults()->always_capture_default(true);
  add_model_flags(be, bn);
  add_numerics_flags(be, bn);
  be->add_option("--trials", trials, "timed trials per method");
  be->add_option("--seed", bn.seed, "RNG seed");
  be->add_option("-o,--out", bn.out, "output CSV path")->required();

  // validate
  CommonOpts va;
  std::string suite = "lln", ns_spec = "100,1000,10000";
  int vreps = 20, vjobs = 0;
  double window = 0.05, t0 = 5.0;
  auto* vd = app.add_subcommand("validate", "statistical checks against the limit theorems");
  vd->set_config("--config");
  vd->option_defaults()->always_capture_default(true);
  add_model_flags(vd, va);
  add_numerics_flags(vd, va);
  vd->add_option("--suite", suite, "lln or covariation");
  vd->add_option("--ns", ns_spec, "comma-separated system sizes (lln)");
  vd->add_option("--reps", vreps, "replicates");
  vd->add_option("--window", window, "increment window delta (covariation)");
  vd->add_option("--t0", t0, "window start time (covariation)");
  vd->add_option("--jobs", vjobs, "worker threads (0 = hardware)");
  vd->add_option("--seed", va.seed, "master seed");
  vd->add_option("-o,--out", va.out, "output JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sc->parsed()) return cmd_simulate_ctmc(sc, ct);
    if (so->parsed()) {
      if (ode_d > 0) {
        od.p.L = ode_d;
        od.p.k = 1;
      }
      return cmd_solve_ode(so, od, ode_d);
    }
    if (ss->parsed()) return cmd_simulate_sde(ss, sd);
    if (co->parsed())
      return cmd_coverage(co, cv, grid_spec, reps_diff, reps_ctmc, paper_scale,
                          ci_method, jobs, json_path, raw_path);
    if (be->parsed()) return cmd_bench(be, bn, trials);
    if (vd->parsed())
      return cmd_validate(vd, va, suite, ns_spec, vreps, window, t0, vjobs);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mdslb::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const mdslb::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
