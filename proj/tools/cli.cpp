#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "mpersuade/censorship.hpp"
#include "mpersuade/continuous_solver.hpp"
#include "mpersuade/discrete_solver.hpp"
#include "mpersuade/errors.hpp"
#include "mpersuade/oracle.hpp"

namespace mpersuade::cli {

namespace {

using json_io::Json;
using json_io::number;

const std::set<std::string> kTopLevelKeys = {"task",      "name",   "description", "prior", "objective",
                                             "environment", "tolerances", "sweep", "oracle", "outputs", "seed"};

[[noreturn]] void invalid(const std::string& message) { throw ConfigInvalid(message); }

const Json& require(const Json& config, const char* key) {
  auto it = config.find(key);
  if (it == config.end()) invalid(std::string(key) + ": missing required field for this task");
  return *it;
}

std::string string_field(const Json& j, const char* key, const std::string& path, const std::string& fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string() || it->get<std::string>().empty()) invalid(path + "." + key + ": expected a nonempty string");
  return it->get<std::string>();
}

int int_field(const Json& j, const char* key, const std::string& path, int fallback, int min_value) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < min_value)
    invalid(path + "." + key + ": expected an integer >= " + std::to_string(min_value));
  return it->get<int>();
}

SolverOptions parse_tolerances(const Json& config, const Overrides& overrides) {
  SolverOptions opts;
  if (auto it = config.find("tolerances"); it != config.end()) {
    if (!it->is_object()) invalid("tolerances: expected an object");
    for (const auto& [key, value] : it->items()) {
      const std::string path = "tolerances." + key;
      if (key == "root_width" || key == "tie_tol") {
        if (!value.is_number() || !(value.get<double>() > 0.0)) invalid(path + ": expected a positive number");
        (key == "root_width" ? opts.root_width : opts.tie_tol) = value.get<double>();
      } else if (key == "scan_points") {
        if (!value.is_number_integer() || value.get<long long>() < 2) invalid(path + ": expected an integer >= 2");
        opts.scan_points = value.get<int>();
      } else {
        invalid(path + ": unknown tolerance");
      }
    }
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) invalid("--tol: expected a positive number");
    opts.root_width = *overrides.tol;
  }
  if (overrides.grid) {
    if (*overrides.grid < 2) invalid("--grid: expected an integer >= 2");
    opts.scan_points = *overrides.grid;
  }
  return opts;
}

DiscretePrior discrete_prior(const Json& config) {
  Prior p = json_io::parse_prior(require(config, "prior"));
  if (auto* d = std::get_if<DiscretePrior>(&p)) return *d;
  invalid("prior.kind: this task needs a discrete prior");
}

ContinuousPrior continuous_prior(const Json& config) {
  return json_io::parse_continuous_prior(require(config, "prior"), "prior");
}

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

Json partition_json(const MonotonePartition& p) {
  Json out = Json::array();
  for (const Block& b : p.blocks()) out.push_back(Json::array({b.first, b.last}));
  return out;
}

Json atoms_json(const std::vector<Atom>& atoms) {
  Json out = Json::array();
  for (const Atom& a : atoms) out.push_back(Json{{"mean", number(a.mean)}, {"mass", number(a.mass)}});
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Tasks

Json solve_discrete_report(const Json& config, const SolverOptions& opts) {
  const DiscretePrior prior = discrete_prior(config);
  const ObjectiveFn v = json_io::parse_objective(require(config, "objective"));
  const MonotoneSolutionDiscrete sol = solve_monotone_discrete(prior, v, opts);
  const StochasticUpperCensorship& uc = sol.stochastic;

  bool contraction = verify_contraction(induce_distribution(prior, uc), prior).pass;
  Json partitions = Json::array();
  Json labels = Json::array();
  for (std::size_t i = 0; i < sol.best_partitions.size(); ++i) {
    partitions.push_back(partition_json(sol.best_partitions[i]));
    labels.push_back(Json{{"omega", number(sol.labels[i].cutoff_state)}, {"q", sol.labels[i].q}});
    contraction = contraction && verify_contraction(induce_distribution(prior, sol.best_partitions[i]), prior).pass;
  }
  const char* regime = uc.regime == UcRegime::no_disclosure ? "no_disclosure"
                       : uc.regime == UcRegime::knot        ? "knot"
                                                            : "tangency";
  return Json{{"task", "solve_discrete"},
              {"method", "solver"},
              {"objective", v.description()},
              {"shape", std::string(to_string(classify_shape(v).kind))},
              {"omega_star", number(uc.cutoff_state)},
              {"q_star", number(uc.q)},
              {"m_star", number(uc.pooled_mean)},
              {"value", number(uc.value)},
              {"regime", regime},
              {"tangency_residual", number(uc.tangency_residual)},
              {"monotone_value", number(sol.value)},
              {"partitions", partitions},
              {"labels", labels},
              {"contraction_pass", contraction}};
}

Json bipooling_json(const BipoolingSignal& s) {
  Json j{{"mode", std::string(to_string(s.mode))}};
  if (s.mode == BipoolingMode::deterministic_nonmonotone) {
    j["omega_L"] = number(s.omega_l);
    j["omega_R"] = number(s.omega_r);
    j["nonmonotone_witness"] = nonmonotonicity_witness(s);
  } else {
    j["omega_ss"] = number(s.omega_ss);
    j["q"] = number(s.q);
    j["fosd_witness"] = fosd_witness(s);
  }
  j["atoms"] = atoms_json(s.atoms);
  j["value"] = number(s.value);
  return j;
}

Json solve_continuous_report(const Json& config, const SolverOptions& opts) {
  const ContinuousPrior prior = continuous_prior(config);
  const ObjectiveFn v = json_io::parse_objective(require(config, "objective"));
  const IntervalDisclosure sol = solve_monotone_continuous(prior, v, opts);
  const ShapeReport shape = classify_shape(v, opts.shape_grid, opts.shape_tol);
  const BipoolingCertificate cert = check_bipooling_condition(prior, v, shape);

  Json roots = Json::array();
  for (const CutoffRoot& r : cutoff_rule_roots(prior, v, opts))
    roots.push_back(Json{{"omega", number(r.omega)}, {"value", number(r.value)}, {"residual", number(r.residual)}});

  Json cond{{"holds", cert.holds}};
  if (cert.bitangent) {
    cond["m_L"] = number(cert.m_l);
    cond["m_R"] = number(cert.m_r);
    cond["slope"] = number(cert.bitangent->slope);
  }
  if (cert.omega_ss > 0.0) {
    cond["omega_ss"] = number(cert.omega_ss);
    cond["excess"] = number(cert.excess);
  }
  if (!cert.holds) cond["reason"] = cert.reason;

  Json report{{"task", "solve_continuous"},
              {"method", "solver"},
              {"objective", v.description()},
              {"branch", std::string(to_string(sol.branch))},
              {"omega_L_star", number(sol.omega_l)},
              {"omega_R_star", number(sol.omega_r)},
              {"m_L_star", number(sol.m_l)},
              {"m_R_star", number(sol.m_r)},
              {"value", number(sol.value)},
              {"no_disclosure_value", number(v.eval(prior.mean()))},
              {"cutoff_roots", roots},
              {"condition1", cond}};
  const UnrestrictedValue u = unrestricted_value(prior, v, opts);
  report["unrestricted_value"] = number(u.value);
  report["unrestricted_signal"] = u.description;
  bool contraction = verify_contraction(induce_distribution(prior, pooling_set(sol)), prior).pass;
  if (cert.holds) {
    Json bp = Json::array();
    for (auto mode : {BipoolingMode::deterministic_nonmonotone, BipoolingMode::stochastic_monotone}) {
      const BipoolingSignal s = construct_bipooling(prior, v, cert, mode);
      contraction = contraction && verify_contraction(induce_distribution(s), prior).pass;
      bp.push_back(bipooling_json(s));
    }
    report["bipooling"] = bp;
  }
  report["contraction_pass"] = contraction;
  return report;
}

Json censorship_report(const Json& config, const SolverOptions& opts) {
  const MediaEnvironment env = json_io::parse_environment(require(config, "environment"));
  const CensorshipResult res = optimal_censorship(env, opts);
  Json report{{"task", "censorship"}, {"method", "solver"}, {"outlets", env.is_continuum() ? Json("continuum") : numbers(env.outlets())}};
  if (!env.is_continuum()) {
    const DiscretePrior prior = induced_state_prior(env);
    report["induced_prior"] = Json{{"support", numbers({prior.support().begin(), prior.support().end()})},
                                   {"probs", numbers({prior.probs().begin(), prior.probs().end()})}};
    Json censored = Json::array();
    Json permitted = Json::array();
    for (const CensorshipPolicy& p : res.policies) {
      std::vector<double> c, keep;
      for (std::size_t k = 0; k < env.outlets().size(); ++k)
        (std::find(p.censored.begin(), p.censored.end(), k) != p.censored.end() ? c : keep).push_back(env.outlets()[k]);
      censored.push_back(numbers(c));
      permitted.push_back(numbers(keep));
    }
    report["censored"] = censored;
    report["permitted"] = permitted;
    if (env.outlets().size() <= 12) {
      const EquivalenceReport eq = verify_outcome_equivalence(env);
      report["outcome_equivalence"] = Json{{"pass", eq.pass},
                                           {"policies", eq.policies},
                                           {"partitions", eq.partitions},
                                           {"max_atom_gap", number(eq.max_atom_gap)}};
    }
  } else {
    Json permitted = Json::array();
    for (const Interval& iv : res.permitted) permitted.push_back(Json::array({number(iv.lo), number(iv.hi)}));
    report["permitted"] = permitted;
  }
  report["policy"] = res.description;
  report["value"] = number(res.value);
  report["unrestricted_value"] = number(res.unrestricted_value);
  report["unrestricted_signal"] = res.unrestricted_description;
  return report;
}

// Deterministic uniform draw in [0,1) from 53 random bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Json oracle_batch(const Json& batch, std::uint64_t seed, const SolverOptions& opts) {
  if (!batch.is_object()) invalid("oracle.batch: expected an object");
  const int instances = int_field(batch, "instances", "oracle.batch", 50, 1);
  const int max_states = int_field(batch, "max_states", "oracle.batch", 8, 2);
  if (max_states > static_cast<int>(kMaxMonotoneStates)) invalid("oracle.batch.max_states: at most 25");
  std::mt19937_64 rng(seed);
  double max_gap = 0.0;
  bool all_uc = true;
  for (int t = 0; t < instances; ++t) {
    const std::size_t n = 2 + rng() % static_cast<std::uint64_t>(max_states - 1);
    std::vector<int> grid(21);
    for (int i = 0; i < 21; ++i) grid[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = 0; i < n; ++i) std::swap(grid[i], grid[i + rng() % (21 - i)]);
    std::vector<int> picked(grid.begin(), grid.begin() + static_cast<long>(n));
    std::sort(picked.begin(), picked.end());
    std::vector<double> support, probs;
    double total = 0.0;
    for (int g : picked) {
      support.push_back(g / 20.0);
      probs.push_back(static_cast<double>(1 + rng() % 20));
      total += probs.back();
    }
    for (double& p : probs) p /= total;
    const DiscretePrior prior = DiscretePrior::create(support, probs);
    const ObjectiveFn v = ObjectiveFn::s_family(0.1 + 0.8 * uniform01(rng))
                              .with_affine(-5.0 + 10.0 * uniform01(rng), -5.0 + 10.0 * uniform01(rng));
    const MonotoneSolutionDiscrete sol = solve_monotone_discrete(prior, v, opts);
    const BruteForceResult bf = brute_force(prior, v, PartitionKind::monotone);
    max_gap = std::max(max_gap, std::abs(bf.value - sol.value));
    const std::size_t j = sol.stochastic.cutoff_index;
    for (const SetPartition& sp : bf.best) {
      const auto mp = as_monotone(sp, n);
      const bool ok = mp && mp->is_upper_censorship() && (mp->pool_start() == j || mp->pool_start() == std::min(j + 1, n - 1));
      all_uc = all_uc && ok;
    }
  }
  return Json{{"instances", instances},
              {"max_states", max_states},
              {"seed", seed},
              {"max_value_gap", number(max_gap)},
              {"all_argmax_upper_censorship", all_uc},
              {"pass", all_uc && max_gap <= 1e-9}};
}

Json oracle_report(const Json& config, const SolverOptions& opts, const Overrides& overrides) {
  Json section = config.contains("oracle") ? config["oracle"] : Json::object();
  if (!section.is_object()) invalid("oracle: expected an object");
  const int grid = overrides.grid.value_or(int_field(section, "grid", "oracle", 400, 100));
  if (grid < 100) invalid("--grid: oracle grids need K >= 100");
  Json report{{"task", "oracle"}, {"method", "oracle"}};

  if (section.contains("batch")) {
    std::uint64_t seed = 1;
    if (auto it = config.find("seed"); it != config.end()) {
      if (!it->is_number_unsigned()) invalid("seed: expected a nonnegative integer");
      seed = it->get<std::uint64_t>();
    }
    if (overrides.seed) seed = *overrides.seed;
    report["batch"] = oracle_batch(section["batch"], seed, opts);
    return report;
  }

  const Prior prior = json_io::parse_prior(require(config, "prior"));
  const ObjectiveFn v = json_io::parse_objective(require(config, "objective"));
  if (const auto* d = std::get_if<DiscretePrior>(&prior)) {
    for (auto kind : {PartitionKind::monotone, PartitionKind::all}) {
      if (d->size() > (kind == PartitionKind::monotone ? kMaxMonotoneStates : kMaxAllStates)) continue;
      const BruteForceResult bf = brute_force(*d, v, kind);
      Json best = Json::array();
      for (const SetPartition& sp : bf.best) {
        Json blocks = Json::array();
        for (const auto& b : sp.blocks) blocks.push_back(b);
        best.push_back(blocks);
      }
      report[kind == PartitionKind::monotone ? "monotone" : "all"] =
          Json{{"value", number(bf.value)}, {"evaluated", bf.evaluated}, {"best", best}};
    }
    const GridResult g = grid_search_continuous(prior, v, grid, GridFamily::stochastic_uc_z);
    report["stochastic_uc_z"] = Json{{"grid", grid}, {"value", number(g.value)}, {"params", numbers(g.params)}};
  } else {
    for (auto family : {GridFamily::interval_disclosure, GridFamily::bipooling_pairs}) {
      const GridResult g = grid_search_continuous(prior, v, grid, family);
      report[std::string(to_string(family))] = Json{{"grid", grid}, {"value", number(g.value)}, {"params", numbers(g.params)}};
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sweeps

struct Curve {
  std::string header;
  std::vector<std::vector<double>> rows;
  std::size_t value_column = 0;
};

Curve uc_sweep(const Json& config, int points) {
  const DiscretePrior prior = discrete_prior(config);
  const ObjectiveFn v = json_io::parse_objective(require(config, "objective"));
  const UcWalk walk(prior, v);
  const double lo = prior.support().front();
  const double hi = prior.support().back();
  Curve c{"z,m,W,delta", {}, 2};
  for (int k = 0; k < points; ++k) {
    const double z = points == 1 ? lo : std::min(hi, lo + (hi - lo) * k / (points - 1));
    const UcPoint pt = walk.at(z);
    c.rows.push_back({z, pt.m, pt.value, pt.gap});
  }
  return c;
}

Curve cutoff_sweep(const Json& config, int points) {
  const ContinuousPrior prior = continuous_prior(config);
  const ObjectiveFn v = json_io::parse_objective(require(config, "objective"));
  const double mean = prior.mean();
  Curve c{"omega,value,residual,m_L,m_R", {}, 1};
  for (int k = 0; k < points; ++k) {
    const double w = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    // Endpoints use the limits of the conditional means.
    const double ml = w > 0.0 ? prior.conditional_mean(0.0, w) : 0.0;
    const double mr = w < 1.0 ? prior.conditional_mean(w, 1.0) : 1.0;
    const double f = prior.cdf(w);
    const double value = w <= 0.0 || w >= 1.0 ? v.eval(mean) : v.eval(ml) * f + v.eval(mr) * (1.0 - f);
    c.rows.push_back({w, value, v.tangent_gap(w, mr) - v.tangent_gap(w, ml), ml, mr});
  }
  return c;
}

Curve censorship_sweep(const Json& config) {
  const MediaEnvironment env = json_io::parse_environment(require(config, "environment"));
  if (env.is_continuum()) invalid("environment.outlets: the censorship sweep needs finite outlets");
  if (env.outlets().size() > 16) invalid("environment.outlets: the censorship sweep supports at most 16 outlets");
  Curve c{"bitmask,value", {}, 1};
  const std::uint64_t count = std::uint64_t{1} << env.outlets().size();
  for (std::uint64_t mask = 0; mask < count; ++mask)
    c.rows.push_back({static_cast<double>(mask), policy_value(env, CensorshipPolicy::from_mask(mask, env.outlets().size()))});
  return c;
}

std::string csv_text(const Curve& c) {
  std::string out = c.header + "\n";
  for (const auto& row : c.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += json_io::format_number(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out.flush()) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void run_config(const Json& config, const std::filesystem::path& out_dir, const Overrides& overrides) {
  if (!config.is_object()) invalid("config: expected a JSON object");
  for (const auto& [key, value] : config.items())
    if (!kTopLevelKeys.contains(key)) invalid(key + ": unknown field");
  const Json& task_field = require(config, "task");
  if (!task_field.is_string()) invalid("task: expected a string");
  const std::string task = task_field.get<std::string>();
  const SolverOptions opts = parse_tolerances(config, overrides);

  Json outputs = config.contains("outputs") ? config["outputs"] : Json::object();
  if (!outputs.is_object()) invalid("outputs: expected an object");
  const std::string report_name = string_field(outputs, "report", "outputs", "report.json");

  Json report;
  if (task == "solve_discrete") {
    report = solve_discrete_report(config, opts);
  } else if (task == "solve_continuous") {
    report = solve_continuous_report(config, opts);
  } else if (task == "censorship") {
    report = censorship_report(config, opts);
  } else if (task == "oracle") {
    report = oracle_report(config, opts, overrides);
  } else if (task == "sweep") {
    const Json& sweep = require(config, "sweep");
    if (!sweep.is_object()) invalid("sweep: expected an object");
    const std::string family = string_field(sweep, "family", "sweep", "");
    if (family.empty()) invalid("sweep.family: missing required field");
    const int points = overrides.grid.value_or(int_field(sweep, "points", "sweep", 1000, 1));
    if (points < 1) invalid("--grid: expected a positive integer");
    Curve curve;
    if (family == "uc_z")
      curve = uc_sweep(config, points);
    else if (family == "cutoff")
      curve = cutoff_sweep(config, points);
    else if (family == "censorship")
      curve = censorship_sweep(config);
    else
      invalid("sweep.family: expected uc_z, cutoff or censorship");
    const std::string csv_name = string_field(outputs, "csv", "outputs", family + ".csv");
    write_atomically(out_dir / csv_name, csv_text(curve));

    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.rows.size(); ++i)
      if (curve.rows[i][curve.value_column] > curve.rows[best][curve.value_column]) best = i;
    report = Json{{"task", "sweep"},
                  {"family", family},
                  {"rows", curve.rows.size()},
                  {"columns", curve.header},
                  {"csv", csv_name},
                  {"argmax_row", numbers(curve.rows[best])}};
  } else {
    invalid("task: expected solve_discrete, solve_continuous, censorship, oracle or sweep");
  }
  write_atomically(out_dir / report_name, dump(report));
}

int run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, const Overrides& overrides,
        std::ostream& err) {
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigInvalid("--config: cannot read " + config_path.string());
    Json config;
    try {
      config = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigInvalid(std::string("config: malformed JSON: ") + e.what());
    }
    run_config(config, out_dir, overrides);
    return kExitOk;
  } catch (const ConfigInvalid& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace mpersuade::cli
