#include "gapmm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gapmm/continuation.hpp"
#include "gapmm/dirac_radial.hpp"
#include "gapmm/inequalities.hpp"
#include "gapmm/matrix_io.hpp"
#include "gapmm/minmax.hpp"
#include "gapmm/properties.hpp"

namespace gapmm {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNoGap = 2;
constexpr int kPropertyFail = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_manifest(const std::string& prefix, const std::vector<std::string>& files) {
  ordered_json m;
  m["artifacts"] = files;
  const std::time_t t = std::time(nullptr);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  m["generated_at"] = buf;
  write_text(prefix + ".manifest.json", m.dump(2) + "\n");
}

struct ChannelArgs {
  int kappa = -1;
  double nu = 0.5;
  double epsilon = 0.0;
  double mass = 1.0;
  double r_max = 0.0;  // 0: derived from nu and kmax
  int n_intervals = 96;
  double stretch = 1.22;
  int order = 7;
  int k_max = 1;
  double tol = 1e-10;
  std::string split = "talman";
  double edge_margin = 1e-3;
  unsigned long long seed = 7;
};

void add_channel_options(CLI::App* cmd, ChannelArgs& a, bool with_split) {
  cmd->add_option("--kappa", a.kappa, "angular quantum number, nonzero")->capture_default_str();
  cmd->add_option("--nu", a.nu, "Coulomb coupling strength")->capture_default_str();
  cmd->add_option("--eps,--epsilon", a.epsilon, "Coulomb regularization radius; 0 = point charge")
      ->capture_default_str();
  cmd->add_option("--mass", a.mass, "fermion mass (1 or 0)")->capture_default_str();
  cmd->add_option("--r-max", a.r_max, "box radius; 0 derives one from nu")->capture_default_str();
  cmd->add_option("--intervals", a.n_intervals, "radial grid intervals")->capture_default_str();
  cmd->add_option("--stretch", a.stretch, "exponential grid ratio (>= 1)")->capture_default_str();
  cmd->add_option("--order", a.order, "spline order")->capture_default_str();
  cmd->add_option("--kmax", a.k_max, "number of levels to solve")->capture_default_str();
  cmd->add_option("--tol", a.tol, "eigenvalue tolerance")->capture_default_str();
  if (with_split) {
    cmd->add_option("--split", a.split, "splitting: talman | free-energy")
        ->capture_default_str()
        ->check(CLI::IsMember({"talman", "free-energy"}));
  }
  cmd->add_option("--edge-margin", a.edge_margin,
                  "levels above mass - edge_margin are flagged as outside the gap")
      ->capture_default_str();
}

double pick_r_max(const ChannelArgs& a) {
  if (a.r_max > 0.0) return a.r_max;
  const double nu_eff = std::max(a.nu, 0.15);
  return (a.k_max >= 2 ? 150.0 : 45.0) / nu_eff;
}

std::shared_ptr<SplineBasis> make_basis(const ChannelArgs& a) {
  return std::make_shared<SplineBasis>(
      RadialGrid::exponential(pick_r_max(a), a.n_intervals, a.stretch), a.order);
}

PotentialSpec make_potential(const ChannelArgs& a) {
  return a.epsilon > 0.0 ? PotentialSpec::regularized_coulomb(a.nu, a.epsilon)
                         : PotentialSpec::coulomb(a.nu);
}

ordered_json channel_json(const ChannelArgs& a) {
  ordered_json j;
  j["kappa"] = a.kappa;
  j["nu"] = a.nu;
  j["epsilon"] = a.epsilon;
  j["mass"] = a.mass;
  j["grid"] = {{"r_max", pick_r_max(a)},
               {"intervals", a.n_intervals},
               {"stretch", a.stretch},
               {"order", a.order}};
  return j;
}

ordered_json hypothesis_json(const HypothesisReport& rep) {
  ordered_json j;
  j["gap_constant"] = rep.a_value;
  j["probe_energy"] = rep.probe_energy;
  j["q_min_eigenvalue"] = rep.q_min_eigenvalue;
  j["condition_ii"] = rep.condition_ii;
  j["condition_iii"] = rep.condition_iii;
  j["pass"] = rep.pass();
  return j;
}

int run_solve(const ChannelArgs& args, const std::string& out, const std::string& export_matrix) {
  const auto basis = make_basis(args);
  const RadialChannel channel = assemble_channel(basis, make_potential(args), args.kappa, args.mass);

  ChannelOptions copts;
  copts.splitting = args.split == "talman" ? Splitting::kTalman : Splitting::kFreeEnergy;
  copts.k_max = args.k_max;
  copts.solve.tol = args.tol;
  copts.edge_margin = args.edge_margin;
  const ChannelSolution cs = channel_spectrum(channel, copts);

  if (!export_matrix.empty()) {
    const SplitOperator op = copts.splitting == Splitting::kTalman
                                 ? talman_split(channel)
                                 : free_energy_split(channel).op;
    save_split_operator(export_matrix, op);
  }

  if (!cs.hypotheses_ok) {
    std::cerr << "hypothesis failure: positivity not established above the gap constant a = "
              << fmt(cs.hypothesis.a_value) << "\n";
    return kNoGap;
  }

  const bool analytic_known =
      args.epsilon == 0.0 && args.mass == 1.0 && args.nu > 0.0 && args.nu < 1.0;

  ordered_json j;
  j["channel"] = channel_json(args);
  j["splitting"] = splitting_name(copts.splitting);
  j["hypothesis"] = hypothesis_json(cs.hypothesis);
  j["levels"] = ordered_json::array();
  double max_abs_error = 0.0;
  bool any_in_gap = false;
  std::string dat = "# k lambda\n";
  for (std::size_t i = 0; i < cs.levels.size(); ++i) {
    const MinMaxSolution& sol = cs.levels[i];
    ordered_json lvl;
    lvl["k"] = sol.k;
    lvl["lambda"] = sol.lambda;
    lvl["residual"] = sol.residual;
    lvl["iterations"] = sol.iterations;
    lvl["bracket"] = {sol.bracket_lo, sol.bracket_hi};
    lvl["multiplicity"] = sol.multiplicity;
    lvl["in_gap"] = static_cast<bool>(cs.in_gap[i]);
    if (analytic_known && cs.in_gap[i]) {
      const int n_radial = args.kappa < 0 ? sol.k - 1 : sol.k;
      const double ref = analytic_dirac_coulomb(args.nu, args.kappa, n_radial);
      lvl["analytic_reference"] = ref;
      lvl["abs_error"] = std::abs(sol.lambda - ref);
      max_abs_error = std::max(max_abs_error, std::abs(sol.lambda - ref));
    }
    any_in_gap = any_in_gap || static_cast<bool>(cs.in_gap[i]);
    j["levels"].push_back(lvl);
    dat += std::to_string(sol.k) + " " + fmt(sol.lambda) + "\n";
  }
  if (analytic_known) j["max_abs_error"] = max_abs_error;

  if (!any_in_gap) {
    std::cerr << "no gap eigenvalue bracket\n";
    return kNoGap;
  }

  write_text(out + ".json", j.dump(2) + "\n");
  write_text(out + ".levels.dat", dat);
  write_manifest(out, {out + ".json", out + ".levels.dat"});
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int run_verify(const ChannelArgs& args, int fuzz_count, int fuzz_dim, const std::string& matrix_path,
               bool lemma21, int samples, const std::string& out) {
  if (fuzz_count <= 0 && matrix_path.empty() && !lemma21) {
    std::cerr << "verify: nothing to do (use --fuzz, --matrix, or --lemma21)\n";
    return kUsage;
  }

  ordered_json j;
  bool ok = true;
  std::vector<std::string> artifacts{out + ".json"};

  if (fuzz_count > 0) {
    FuzzOptions fo;
    fo.instances = fuzz_count;
    fo.dim = fuzz_dim;
    fo.seed = args.seed;
    const FuzzOutcome outcome = oracle_fuzz(fo);
    ordered_json f;
    f["instances"] = outcome.instances;
    f["oracle_checked"] = outcome.oracle_checked;
    f["agreements"] = outcome.agreements;
    f["counterexamples"] = outcome.counterexamples;
    f["rejected"] = outcome.rejected;
    f["max_deviation"] = outcome.max_deviation;
    f["pass"] = outcome.pass;
    if (!outcome.pass) {
      f["failure"] = outcome.failure_note;
      if (outcome.failing) {
        const std::string replay = out + ".replay.txt";
        save_split_operator(replay, *outcome.failing);
        f["replay"] = replay;
        artifacts.push_back(replay);
      }
      ok = false;
    }
    j["fuzz"] = f;
  }

  if (!matrix_path.empty()) {
    const SplitOperator op = load_split_operator(matrix_path);
    const double a = gap_constant(op);
    HypothesisReport rep;
    try {
      rep = check_hypotheses_retry(op, a + 0.01 * (1.0 + std::abs(a)));
    } catch (const std::exception& e) {
      rep.a_value = a;
    }
    ordered_json m;
    m["file"] = matrix_path;
    m["dim_plus"] = op.dim_plus();
    m["dim_minus"] = op.dim_minus();
    m["hypothesis"] = hypothesis_json(rep);
    j["matrix"] = m;
    ok = ok && rep.pass();
  }

  if (lemma21) {
    const auto basis = make_basis(args);
    const RadialChannel channel =
        assemble_channel(basis, make_potential(args), args.kappa, args.mass);
    const SplitOperator op = talman_split(channel);
    MonotonicityOptions mo;
    mo.samples = samples;
    mo.seed = args.seed;
    const VerificationReport rep = minmax_property_suite(op, mo);
    ordered_json checks = ordered_json::array();
    for (const CheckRecord& c : rep.checks) {
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"detail", c.detail}});
      ok = ok && c.pass;
    }
    j["lemma_monotonicity"] = {{"samples", samples}, {"checks", checks}, {"pass", rep.all_pass()}};
  }

  j["pass"] = ok;
  write_text(out + ".json", j.dump(2) + "\n");
  write_manifest(out, artifacts);
  std::cout << j.dump(2) << "\n";
  return ok ? kOk : kPropertyFail;
}

std::vector<double> parse_grid(const std::string& text) {
  // "start:stop:step" inclusive within half a step
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0)) {
    throw std::runtime_error("grid must be start:stop:step with positive step: " + text);
  }
  std::vector<double> values;
  for (double v = start; v <= stop + 0.5 * step; v += step) values.push_back(v);
  return values;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) values.push_back(std::stod(token));
  }
  if (values.empty()) throw std::runtime_error("empty list: " + text);
  return values;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string csv = "nu,epsilon,lambda1,a_nu,pass\n";
  for (const SweepPoint& p : points) {
    csv += fmt(p.nu);
    csv += ",";
    csv += fmt(p.epsilon);
    csv += ",";
    csv += fmt(p.lambda1);
    csv += ",";
    csv += fmt(p.a_value);
    csv += ",";
    csv += (p.solved && p.hypotheses_ok) ? "1" : "0";
    csv += "\n";
  }
  return csv;
}

int run_sweep(const ChannelArgs& args, const std::string& nu_grid, bool refine,
              const std::string& eps_list, const std::string& out) {
  ContinuationOptions opts;
  opts.kappa = args.kappa;
  opts.mass = args.mass;
  opts.basis = make_basis(args);
  opts.solve.tol = args.tol;
  opts.slack = 2.0 * args.tol;
  opts.edge_margin = args.edge_margin;

  ordered_json summary;
  bool ok = true;
  std::string csv;

  if (refine) {
    if (eps_list.empty()) {
      std::cerr << "sweep --refine needs --eps-list\n";
      return kUsage;
    }
    const RefineResult res = epsilon_refine(args.nu, parse_list(eps_list), opts);
    csv = sweep_csv(res.points);
    summary["mode"] = "epsilon-refine";
    summary["nu"] = args.nu;
    summary["all_solved"] = res.all_solved;
    summary["monotone_nonincreasing"] = res.monotone_ok;
    summary["worst_increase"] = res.worst_increase;
    summary["extrapolated"] = res.extrapolated;
    summary["analytic"] = res.analytic;
    summary["extrapolation_gap"] = res.extrapolation_gap;
    ok = res.all_solved && res.monotone_ok;
  } else {
    if (nu_grid.empty()) {
      std::cerr << "sweep needs --nu-grid (or --refine with --eps-list)\n";
      return kUsage;
    }
    if (!(args.epsilon > 0.0)) {
      std::cerr << "sweep over nu needs --eps > 0\n";
      return kUsage;
    }
    const NuSweepResult res = nu_sweep(parse_grid(nu_grid), args.epsilon, opts);
    csv = sweep_csv(res.points);
    double min_lambda = std::numeric_limits<double>::infinity();
    for (const SweepPoint& p : res.points) min_lambda = std::min(min_lambda, p.lambda1);
    const bool nonneg = min_lambda >= -opts.slack;
    summary["mode"] = "nu-sweep";
    summary["epsilon"] = args.epsilon;
    summary["all_solved"] = res.all_solved;
    summary["all_nonnegative"] = nonneg;
    summary["min_lambda1"] = min_lambda;
    summary["monotone_nonincreasing"] = res.monotone_ok;
    summary["lipschitz_ok"] = res.lipschitz_ok;
    summary["worst_increase"] = res.worst_increase;
    summary["worst_excess_drop"] = res.worst_excess_drop;
    ok = res.all_solved && nonneg && res.lipschitz_ok;
  }
  summary["pass"] = ok;

  write_text(out + ".csv", csv);
  write_text(out + ".summary.json", summary.dump(2) + "\n");
  write_manifest(out, {out + ".csv", out + ".summary.json"});
  std::cout << summary.dump(2) << "\n";
  return ok ? kOk : kPropertyFail;
}

int run_hardy(const ChannelArgs& args, const std::string& family, int count, bool free_energy,
              const std::string& out) {
  TestFamily fam;
  if (family == "random") {
    fam.kind = TestFamily::Kind::kRandomSpline;
  } else if (family == "bumps") {
    fam.kind = TestFamily::Kind::kBumps;
  } else if (family == "ground-state") {
    fam.kind = TestFamily::Kind::kGroundState;
    fam.nu = args.nu > 0.0 ? args.nu : 0.5;
  } else {
    std::cerr << "hardy: unknown family '" << family << "'\n";
    return kUsage;
  }
  fam.count = count;
  fam.seed = args.seed;

  std::vector<MarginRecord> records;
  const auto append = [&records](std::vector<MarginRecord> more) {
    records.insert(records.end(), more.begin(), more.end());
  };
  append(talman_inhomogeneous_margins(fam, args.nu, args.kappa));
  append(talman_homogeneous_margins(fam, args.kappa));
  append(classical_hardy_margins(fam));
  if (free_energy) {
    FreeEnergyMarginOptions fo;
    fo.nu = args.nu;
    fo.kappa = args.kappa;
    fo.count = count;
    fo.seed = args.seed;
    fo.mass = 1.0;
    append(free_energy_margins(fo));
    fo.mass = 0.0;
    append(free_energy_margins(fo));
  }

  std::string csv = "inequality,id,lhs,rhs,margin\n";
  for (const MarginRecord& r : records) {
    csv += r.inequality + "," + r.id + "," + fmt(r.lhs) + "," + fmt(r.rhs) + "," + fmt(r.margin) +
           "\n";
  }

  ordered_json summary;
  summary["family"] = family;
  summary["count"] = count;
  summary["nu"] = args.nu;
  summary["kappa"] = args.kappa;
  bool ok = true;
  ordered_json per = ordered_json::object();
  std::vector<std::string> tags;
  for (const MarginRecord& r : records) {
    if (std::find(tags.begin(), tags.end(), r.inequality) == tags.end()) tags.push_back(r.inequality);
  }
  for (const std::string& tag : tags) {
    std::vector<MarginRecord> group;
    for (const MarginRecord& r : records) {
      if (r.inequality == tag) group.push_back(r);
    }
    const double tol = tag.rfind("free-energy", 0) == 0 ? 1e-8 : 1e-10;
    const double rel = min_relative_margin(group);
    const bool pass = rel >= -tol;
    per[tag] = {{"count", group.size()},
                {"min_margin", min_margin(group)},
                {"median_margin", median_margin(group)},
                {"min_relative_margin", rel},
                {"tolerance", tol},
                {"pass", pass}};
    ok = ok && pass;
  }
  summary["inequalities"] = per;
  if (free_energy) {
    summary["note"] =
        "free-energy margins use discretized projectors from the finite basis, not the continuum";
  }
  summary["pass"] = ok;

  write_text(out + ".csv", csv);
  write_text(out + ".summary.json", summary.dump(2) + "\n");
  write_manifest(out, {out + ".csv", out + ".summary.json"});
  std::cout << summary.dump(2) << "\n";
  return ok ? kOk : kPropertyFail;
}

int run_matrix(const std::string& path, int k_max, double tol, double probe_energy,
               const std::string& out) {
  const SplitOperator op = load_split_operator(path);
  const double a = gap_constant(op);
  HypothesisReport rep;
  bool hypothesis_threw = false;
  try {
    const double probe = std::isfinite(probe_energy) ? probe_energy : a + 0.01 * (1.0 + std::abs(a));
    rep = check_hypotheses_retry(op, probe);
  } catch (const std::exception&) {
    hypothesis_threw = true;
    rep.a_value = a;
  }

  ordered_json j;
  j["file"] = path;
  j["dim_plus"] = op.dim_plus();
  j["dim_minus"] = op.dim_minus();
  j["hypothesis"] = hypothesis_json(rep);
  j["levels"] = ordered_json::array();

  const bool usable = !hypothesis_threw && rep.pass();
  if (usable) {
    for (int k = 1; k <= std::min(k_max, op.dim_plus()); ++k) {
      try {
        const MinMaxSolution sol = solve_level(op, k, tol);
        j["levels"].push_back({{"k", sol.k},
                               {"lambda", sol.lambda},
                               {"residual", sol.residual},
                               {"iterations", sol.iterations},
                               {"bracket", {sol.bracket_lo, sol.bracket_hi}},
                               {"multiplicity", sol.multiplicity}});
      } catch (const BracketError&) {
        break;
      }
    }
  }

  write_text(out + ".json", j.dump(2) + "\n");
  write_manifest(out, {out + ".json"});
  std::cout << j.dump(2) << "\n";
  if (!usable) {
    std::cerr << "hypothesis failure on " << path << "\n";
    return kNoGap;
  }
  return kOk;
}

void print_json_tree(const ordered_json& j, const std::string& indent) {
  for (const auto& item : j.items()) {
    const ordered_json& v = item.value();
    if (v.is_object()) {
      std::cout << indent << item.key() << ":\n";
      print_json_tree(v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v[0].is_object()) {
      std::cout << indent << item.key() << ":\n";
      for (const auto& row : v) {
        std::string line = indent + "  -";
        for (const auto& cell : row.items()) {
          line += " " + cell.key() + "=" + (cell.value().is_string()
                                                ? cell.value().get<std::string>()
                                                : cell.value().dump());
        }
        std::cout << line << "\n";
      }
    } else {
      std::cout << indent << item.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                << "\n";
    }
  }
}

int run_report(const std::vector<std::string>& paths) {
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "report: cannot open " << path << "\n";
      return kUsage;
    }
    ordered_json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      std::cerr << "report: " << path << ": " << e.what() << "\n";
      return kUsage;
    }
    std::cout << "== " << path << " ==\n";
    print_json_tree(j, "");
    std::cout << "\n";
  }
  return kOk;
}

// Flat key=value config support: keys mirror the long option names of the
// subcommand, '#' starts a comment, later lines override earlier ones. File
// values are appended as flags only when the command line does not already
// set the option, so explicit flags always win.
std::vector<std::string> merge_config_args(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config file: " + config_path);

  const auto trim = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  const auto aliases = [](const std::string& key) {
    std::vector<std::string> names{key};
    if (key == "eps") names.push_back("epsilon");
    if (key == "epsilon") names.push_back("eps");
    return names;
  };
  const auto given_on_cli = [&](const std::string& key) {
    for (const std::string& name : aliases(key)) {
      for (const std::string& a : args) {
        if (a == "--" + name || a.rfind("--" + name + "=", 0) == 0) return true;
      }
    }
    return false;
  };

  std::vector<std::string> keys;  // file order
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? std::string{} : trim(line.substr(0, eq));
    if (key.empty()) throw std::runtime_error("config line is not key=value: " + line);
    if (key == "config") continue;
    if (!values.count(key)) keys.push_back(key);
    values[key] = trim(line.substr(eq + 1));
  }
  for (const std::string& key : keys) {
    if (!given_on_cli(key)) args.push_back("--" + key + "=" + values[key]);
  }
  return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"spectral-gap eigenvalue solver for radial Dirac operators"};
  app.require_subcommand(1);

  std::string config_file;  // consumed by merge_config_args before parsing
  ChannelArgs solve_args;
  std::string solve_out = "solve", solve_export;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve gap levels of a radial channel");
  solve_cmd->add_option("--config", config_file, "flat key=value config file; flags win");
  add_channel_options(solve_cmd, solve_args, true);
  solve_cmd->add_option("--out", solve_out, "output prefix")->capture_default_str();
  solve_cmd->add_option("--export-matrix", solve_export, "also write the split operator");

  ChannelArgs verify_args;
  int fuzz_count = 0, fuzz_dim = 0, lemma_samples = 200;
  bool lemma21 = false;
  std::string verify_matrix, verify_out = "verify";
  CLI::App* verify_cmd = app.add_subcommand("verify", "property suites and oracle fuzzing");
  verify_cmd->add_option("--config", config_file, "flat key=value config file; flags win");
  add_channel_options(verify_cmd, verify_args, false);
  verify_cmd->add_option("--fuzz", fuzz_count, "random pencils checked against the dense oracle");
  verify_cmd->add_option("--dim", fuzz_dim, "fixed pencil dimension (0: random 4..40)");
  verify_cmd->add_option("--seed", verify_args.seed, "random seed")->capture_default_str();
  verify_cmd->add_option("--matrix", verify_matrix, "split-operator file to hypothesis-check");
  verify_cmd->add_flag("--lemma21", lemma21, "graph-norm/Schur-form inequality suite on the channel");
  verify_cmd->add_option("--samples", lemma_samples, "samples for --lemma21")->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "output prefix")->capture_default_str();

  ChannelArgs sweep_args;
  std::string nu_grid, eps_list, sweep_out = "sweep";
  bool refine = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "coupling-constant continuation runs");
  sweep_cmd->add_option("--config", config_file, "flat key=value config file; flags win");
  add_channel_options(sweep_cmd, sweep_args, false);
  sweep_cmd->add_option("--nu-grid", nu_grid, "start:stop:step coupling grid");
  sweep_cmd->add_flag("--refine", refine, "epsilon-refinement mode at fixed nu");
  sweep_cmd->add_option("--eps-list", eps_list, "comma-separated decreasing epsilons");
  sweep_cmd->add_option("--out", sweep_out, "output prefix")->capture_default_str();

  ChannelArgs hardy_args;
  std::string family = "random", hardy_out = "hardy";
  int hardy_count = 200;
  bool hardy_free = false;
  CLI::App* hardy_cmd = app.add_subcommand("hardy", "inequality margin tables");
  hardy_cmd->add_option("--config", config_file, "flat key=value config file; flags win");
  hardy_cmd->add_option("--family", family, "random | bumps | ground-state")->capture_default_str();
  hardy_cmd->add_option("--count", hardy_count, "family size for random draws")->capture_default_str();
  hardy_cmd->add_option("--nu", hardy_args.nu, "coupling for the inhomogeneous inequality")
      ->capture_default_str();
  hardy_cmd->add_option("--kappa", hardy_args.kappa, "angular quantum number")->capture_default_str();
  hardy_cmd->add_option("--seed", hardy_args.seed, "random seed")->capture_default_str();
  hardy_cmd->add_flag("--free-energy", hardy_free, "also run the discretized free-energy margins");
  hardy_cmd->add_option("--out", hardy_out, "output prefix")->capture_default_str();

  std::string matrix_file, matrix_out = "matrix-run";
  int matrix_kmax = 3;
  double matrix_tol = 1e-10;
  double matrix_energy = std::numeric_limits<double>::quiet_NaN();
  CLI::App* matrix_cmd = app.add_subcommand("matrix", "abstract engine on a split-operator file");
  matrix_cmd->add_option("file", matrix_file, "split-operator file")->required();
  matrix_cmd->add_option("--kmax", matrix_kmax, "levels to solve")->capture_default_str();
  matrix_cmd->add_option("--tol", matrix_tol, "eigenvalue tolerance")->capture_default_str();
  matrix_cmd->add_option("--energy", matrix_energy, "hypothesis probe energy (default: just above a)");
  matrix_cmd->add_option("--out", matrix_out, "output prefix")->capture_default_str();

  std::vector<std::string> report_paths;
  CLI::App* report_cmd = app.add_subcommand("report", "pretty-print result JSON files");
  report_cmd->add_option("files", report_paths, "result JSON files")->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config_args(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve_args, solve_out, solve_export);
    if (*verify_cmd)
      return run_verify(verify_args, fuzz_count, fuzz_dim, verify_matrix, lemma21, lemma_samples,
                        verify_out);
    if (*sweep_cmd) return run_sweep(sweep_args, nu_grid, refine, eps_list, sweep_out);
    if (*hardy_cmd) return run_hardy(hardy_args, family, hardy_count, hardy_free, hardy_out);
    if (*matrix_cmd)
      return run_matrix(matrix_file, matrix_kmax, matrix_tol, matrix_energy, matrix_out);
    if (*report_cmd) return run_report(report_paths);
  } catch (const HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoGap;
  } catch (const BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoGap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace gapmm
