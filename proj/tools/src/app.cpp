#include "catsim_app/app.hpp"

#include <CLI11.hpp>
#include <gsl/gsl_fit.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "catsim/fockoracle.hpp"
#include "catsim/measure.hpp"
#include "catsim/metrology.hpp"
#include "catsim/optics.hpp"
#include "catsim/qgates.hpp"
#include "catsim/table.hpp"
#include "catsim/version.hpp"
#include "catsim_app/audit.hpp"
#include "catsim_app/parallel.hpp"

namespace catsim::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
std::string show_value(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return fmt17(v);
  } else if constexpr (std::is_integral_v<T>) {
    return std::to_string(v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : " ") + show_value(x);
    return out;
  }
}

struct Param {
  std::string name;
  std::function<std::string()> show;
};

// One subcommand: its CLI11 handle, the echoed parameters in registration
// order, and where each config-file value came from.
struct Sub {
  CLI::App* app = nullptr;
  std::vector<Param> params;
  std::map<std::string, std::string> origin;

  template <class T>
  CLI::Option* param(const std::string& name, T& var, const std::string& desc) {
    params.push_back({name, [&var] { return show_value(var); }});
    return app->add_option("--" + name, var, desc)->capture_default_str();
  }
  CLI::Option* flag(const std::string& name, bool& var, const std::string& desc) {
    params.push_back({name, [&var] { return show_value(var); }});
    return app->add_flag("--" + name, var, desc);
  }
  std::string where(const std::string& key) const {
    auto it = origin.find(key);
    return it == origin.end() ? std::string("command line: ") : it->second + ": ";
  }
  void require(bool ok, const std::string& key, const std::string& msg) const {
    if (!ok) throw ConfigError(where(key) + "field '" + key + "': " + msg);
  }
  void budget(bool ok, const std::string& key, const std::string& msg) const {
    if (!ok) throw BudgetError(where(key) + "field '" + key + "': " + msg);
  }
};

struct Common {
  std::string config;
  std::string output;
  std::string format = "tsv";
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_common(Sub& s, Common& c) {
  s.app->add_option("--config", c.config, "key = value file; flags override it");
  s.app->add_option("--output,-o", c.output, "output path, stdout when empty");
  s.param("format", c.format, "tsv or jsonl")->check(CLI::IsMember({"tsv", "jsonl"}));
  s.param("seed", c.seed, "base seed; point i uses seed ^ i");
  // not echoed: worker count does not change results
  s.app->add_option("--threads", c.threads, "parallel sweep workers")->capture_default_str();
}

void apply_config(Sub& s, const std::vector<ConfigEntry>& entries, const std::string& name) {
  for (const auto& e : entries) {
    const std::string loc = name + ":" + std::to_string(e.line);
    if (e.key == "config" || e.key == "help") throw ConfigError(loc + ": key '" + e.key + "' is not allowed here");
    CLI::Option* opt = s.app->get_option_no_throw("--" + e.key);
    if (opt == nullptr)
      throw ConfigError(loc + ": unknown key '" + e.key + "' for " + s.app->get_name());
    if (opt->count() > 0) continue;
    s.origin[e.key] = loc;
    try {
      if (opt->get_items_expected_max() > 1) {
        std::string v = e.value;
        std::replace(v.begin(), v.end(), ',', ' ');
        std::istringstream is(v);
        std::string tok;
        while (is >> tok) opt->add_result(tok);
      } else {
        opt->add_result(e.value);
      }
      opt->run_callback();
    } catch (const CLI::Error& ex) {
      throw ConfigError(loc + ": field '" + e.key + "': " + ex.what());
    }
  }
}

struct Result {
  Table table;
  std::vector<std::pair<std::string, std::string>> notes;
  int code = kOk;
};

void emit(std::ostream& os, const std::string& experiment, const Common& c, const Sub& s, const Result& r) {
  if (c.format == "jsonl") {
    nlohmann::ordered_json h;
    h["catsim"] = kVersion;
    h["experiment"] = experiment;
    h["seed"] = c.seed;
    for (const auto& p : s.params) h["config"][p.name] = p.show();
    for (const auto& [k, v] : r.notes) h["results"][k] = v;
    os << h.dump() << '\n';
    r.table.write_records(os);
    return;
  }
  os << "# catsim " << kVersion << '\n';
  os << "# experiment " << experiment << '\n';
  os << "# seed " << c.seed << '\n';
  for (const auto& p : s.params) os << "# config " << p.name << " = " << p.show() << '\n';
  for (const auto& [k, v] : r.notes) os << "# result " << k << " = " << v << '\n';
  r.table.write(os);
}

double wrap(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

std::vector<double> linspace(double lo, double hi, int n) {
  if (n == 1) return {lo};
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

// ---- experiments ----

struct BellStats {
  double alpha_min = 1.0, alpha_max = 3.0;
  int alpha_steps = 9;
  long shots = 10000;
};

Result run_bell_stats(const BellStats& p, const Common& c, const Sub& s) {
  s.require(p.alpha_min > 0, "alpha-min", "must be > 0");
  s.require(p.alpha_max >= p.alpha_min, "alpha-max", "must be >= alpha-min");
  s.require(p.alpha_steps >= 1, "alpha-steps", "must be >= 1");
  s.require(p.shots >= 0, "shots", "must be >= 0");
  s.budget(p.alpha_max <= 10, "alpha-max", "exceeds the cutoff budget (10)");
  s.budget(p.shots <= 100000000, "shots", "exceeds the sampling budget (1e8)");
  s.budget(p.alpha_steps <= 10000, "alpha-steps", "exceeds the sweep budget (1e4)");

  const auto alphas = linspace(p.alpha_min, p.alpha_max, p.alpha_steps);
  std::vector<std::vector<std::vector<double>>> rows(alphas.size());
  parallel_for(static_cast<int>(alphas.size()), c.threads, [&](int i) {
    std::mt19937_64 rng(c.seed ^ static_cast<std::uint64_t>(i));
    const double a = alphas[static_cast<std::size_t>(i)];
    for (int w = 1; w <= 4; ++w) {
      const auto o = bell_outcomes(bell_cat(a, w), 0, 1);
      std::vector<double> probs;
      for (const auto& r : o) probs.push_back(r.probability);
      std::vector<long> counts(5, 0);
      for (long k = 0; k < p.shots; ++k) ++counts[sample_index(probs, rng)];
      std::vector<double> row{a, static_cast<double>(w)};
      row.insert(row.end(), probs.begin(), probs.end());
      for (long n : counts) row.push_back(p.shots ? static_cast<double>(n) / p.shots : 0.0);
      row.push_back(probs[static_cast<std::size_t>(w - 1)] + probs[4]);
      rows[static_cast<std::size_t>(i)].push_back(row);
    }
  });

  Result r{Table({"alpha", "state", "p_I", "p_II", "p_III", "p_IV", "p_FAIL", "f_I", "f_II", "f_III", "f_IV",
                  "f_FAIL", "p_correct_plus_fail"})};
  std::vector<double> x, y;
  for (const auto& block : rows)
    for (const auto& row : block) {
      r.table.add_row(row);
      if (row[1] == 1.0 && row[6] > 0) {
        x.push_back(row[0] * row[0]);
        y.push_back(std::log(row[6]));
      }
    }
  // ln P_FAIL = c0 + c1 alpha^2 for the even Bell-cat
  if (x.size() >= 3) {
    double c0, c1, cov00, cov01, cov11, sumsq;
    gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
    double my = 0, tss = 0;
    for (double v : y) my += v / static_cast<double>(y.size());
    for (double v : y) tss += (v - my) * (v - my);
    r.notes.push_back({"fail_exponent", fmt17(-c1)});
    r.notes.push_back({"fail_prefactor", fmt17(std::exp(c0))});
    r.notes.push_back({"fail_fit_r2", fmt17(tss > 0 ? 1.0 - sumsq / tss : 1.0)});
  }
  return r;
}

struct GateCheck {
  double alpha_min = 1.5, alpha_max = 3.0;
  int alpha_steps = 4;
  double theta_alpha2 = 0.02;
  int cnot_steps = 80;
  int rx_trials = 16;
};

Result run_gate_check(const GateCheck& p, const Common& c, const Sub& s) {
  s.require(p.alpha_min > 0, "alpha-min", "must be > 0");
  s.require(p.alpha_max >= p.alpha_min, "alpha-max", "must be >= alpha-min");
  s.require(p.alpha_steps >= 1, "alpha-steps", "must be >= 1");
  s.require(p.theta_alpha2 > 0, "theta-alpha2", "must be > 0");
  s.require(p.cnot_steps >= 0, "cnot-steps", "must be >= 0");
  s.require(p.rx_trials >= 0, "rx-trials", "must be >= 0");
  s.budget(p.alpha_max <= 6, "alpha-max", "exceeds the cutoff budget (6)");
  s.budget(p.cnot_steps <= 100000, "cnot-steps", "exceeds the budget (1e5)");
  s.budget(p.rx_trials <= 100000, "rx-trials", "exceeds the budget (1e5)");
  s.budget(p.alpha_steps <= 1000, "alpha-steps", "exceeds the sweep budget (1e3)");

  const auto alphas = linspace(p.alpha_min, p.alpha_max, p.alpha_steps);
  std::vector<std::vector<double>> rows(alphas.size());
  parallel_for(static_cast<int>(alphas.size()), c.threads, [&](int i) {
    std::mt19937_64 rng(c.seed ^ static_cast<std::uint64_t>(i));
    const double a = alphas[static_cast<std::size_t>(i)];
    const double th = p.theta_alpha2 / (a * a);
    const double rz = rz_channel_phase(a, th);
    const auto ph = entangling_channel_phases(a, th);
    const double ent_target[4] = {0.0, -2 * p.theta_alpha2, -2 * p.theta_alpha2, 0.0};
    double ent_err = 0.0;
    for (int k = 0; k < 4; ++k) ent_err = std::max(ent_err, std::abs(wrap(ph[static_cast<std::size_t>(k)] - ent_target[k])));

    double cnot_f = std::nan("");
    if (p.cnot_steps > 0) {
      const double step = std::numbers::pi / (4.0 * p.cnot_steps * a * a);
      cnot_f = refine_cnot_dressing(entangling_channel(a, step).power(p.cnot_steps)).fidelity;
    }

    double rx_f = 0.0, rx_reps = 0.0;
    const QubitEncoding enc{a, 0};
    const double rx_theta = std::numbers::pi / (4.0 * a * a);
    for (int t = 0; t < p.rx_trials; ++t) {
      std::normal_distribution<double> g;
      Eigen::Vector2cd in(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
      in.normalize();
      const auto o = gate_rx_pi2(encode(in(0), in(1), enc), enc, rx_theta, rng);
      const auto d = decode(o.state, enc);
      const Eigen::Vector2cd target = logical::Rx(std::numbers::pi / 2) * in;
      const Eigen::Vector2cd got(d.mu, d.nu);
      rx_f += std::norm(target.dot(got)) / got.squaredNorm();
      rx_reps += o.repetitions;
    }
    if (p.rx_trials > 0) {
      rx_f /= p.rx_trials;
      rx_reps /= p.rx_trials;
    } else {
      rx_f = rx_reps = std::nan("");
    }
    rows[static_cast<std::size_t>(i)] = {a,        th,   rz, 4 * p.theta_alpha2, std::abs(wrap(rz - 4 * p.theta_alpha2)),
                                         ent_err, static_cast<double>(p.cnot_steps), cnot_f, rx_f, rx_reps};
  });
  Result r{Table({"alpha", "theta", "rz_phase", "rz_target", "rz_error", "entangling_phase_error", "cnot_steps",
                  "cnot_fidelity", "rx_fidelity", "rx_repetitions"})};
  for (const auto& row : rows) r.table.add_row(row);
  return r;
}

struct WeakForce {
  std::vector<double> alpha{2.0};
  std::vector<int> n{1};
  double epsilon = 0.05;
  int trials = 10000;
  int repeats = 400;
};

Result run_weak_force(const WeakForce& p, const Common& c, const Sub& s) {
  s.require(!p.alpha.empty(), "alpha", "needs at least one value");
  s.require(!p.n.empty(), "n", "needs at least one value");
  for (double a : p.alpha) {
    s.require(a > 0, "alpha", "values must be > 0");
    s.budget(a <= 20, "alpha", "exceeds the cutoff budget (20)");
  }
  for (int n : p.n) {
    s.require(n >= 1, "n", "values must be >= 1");
    s.budget(n <= 64, "n", "exceeds the mode budget (64)");
  }
  s.require(p.epsilon >= 0, "epsilon", "must be >= 0");
  s.require(p.trials >= 0, "trials", "must be >= 0");
  s.require(p.repeats >= 2, "repeats", "must be >= 2");
  s.budget(p.trials <= 1000000000, "trials", "exceeds the trial budget (1e9)");
  s.budget(p.repeats <= 1000000, "repeats", "exceeds the repeat budget (1e6)");

  std::vector<std::pair<double, int>> grid;
  for (double a : p.alpha)
    for (int n : p.n) grid.emplace_back(a, n);
  std::vector<std::vector<double>> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), c.threads, [&](int i) {
    const auto [a, n] = grid[static_cast<std::size_t>(i)];
    std::mt19937_64 rng(c.seed ^ static_cast<std::uint64_t>(i));
    SensitivityReport rep = p.trials > 0 ? weak_force_experiment(a, n, p.epsilon, p.trials, rng, p.repeats)
                                         : weak_force_bound(a, n);
    const double nan = std::nan("");
    const double bound_eps = 1.0 / std::sqrt(rep.bound_expression);
    rows[static_cast<std::size_t>(i)] = {a,
                                         static_cast<double>(n),
                                         rep.n_tot,
                                         rep.qfi,
                                         rep.epsilon_min,
                                         rep.epsilon_min_generator,
                                         bound_eps,
                                         rep.epsilon_min_generator / bound_eps,
                                         p.epsilon,
                                         p.trials > 0 ? rep.estimate_mean : nan,
                                         p.trials > 0 ? rep.estimate_var : nan,
                                         p.trials > 0 ? rep.cramer_rao : nan,
                                         p.trials > 0 ? rep.saturation : nan,
                                         p.trials > 0 ? rep.fisher_readout : nan,
                                         p.trials > 0 ? rep.snr : nan};
  });
  Result r{Table({"alpha", "N", "n_tot", "qfi", "epsilon_min", "epsilon_min_generator", "epsilon_min_bound",
                  "generator_over_bound", "epsilon", "estimate_mean", "estimate_var", "cramer_rao", "saturation",
                  "fisher_readout", "snr"})};
  for (const auto& row : rows) r.table.add_row(row);
  return r;
}

struct Ruler {
  std::vector<double> alpha{10.0};
  double lambda = 10e-6;
  double theta_min = -1.0, theta_max = 7.0;
  int points = 4001;
  bool profile = false;
};

Result run_ruler(const Ruler& p, const Common& c, const Sub& s) {
  s.require(!p.alpha.empty(), "alpha", "needs at least one value");
  for (double a : p.alpha) {
    s.require(a > 0, "alpha", "values must be > 0");
    s.budget(a <= 40, "alpha", "exceeds the cutoff budget (40)");
  }
  s.require(p.lambda > 0, "lambda", "must be > 0");
  s.require(p.theta_max > p.theta_min, "theta-max", "must exceed theta-min");
  s.require(p.points >= 3, "points", "must be >= 3");
  s.budget(p.points <= 1000000, "points", "exceeds the scan budget (1e6)");

  std::vector<FringeScan> scans(p.alpha.size());
  parallel_for(static_cast<int>(p.alpha.size()), c.threads, [&](int i) {
    try {
      scans[static_cast<std::size_t>(i)] = quantum_ruler(p.alpha[static_cast<std::size_t>(i)], p.lambda, p.theta_min,
                                                         p.theta_max, p.points);
    } catch (const RangeError& e) {
      throw ConfigError(s.where("theta-max") + "field 'theta-max': " + e.what());
    }
  });
  if (p.profile) {
    Result r{Table({"alpha", "theta", "length", "probability"})};
    for (std::size_t i = 0; i < scans.size(); ++i)
      for (std::size_t k = 0; k < scans[i].theta.size(); ++k)
        r.table.add_row(std::vector<double>{p.alpha[i], scans[i].theta[k], scans[i].length[k], scans[i].probability[k]});
    return r;
  }
  Result r{Table({"alpha", "lambda", "peaks", "spacing_theta", "spacing_length", "width_theta", "width_length",
                  "visibility"})};
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const auto& f = scans[i];
    r.table.add_row(std::vector<double>{p.alpha[i], p.lambda, static_cast<double>(f.peaks_theta.size()),
                                        f.spacing_theta, f.spacing_length, f.peak_width_theta, f.peak_width_length,
                                        f.visibility});
  }
  return r;
}

struct Ramsey {
  int n_max = 10;
  double theta = 0.3;
  double step = 1e-4;
};

Result run_ramsey(const Ramsey& p, const Common&, const Sub& s) {
  s.require(p.n_max >= 1, "n-max", "must be >= 1");
  s.budget(p.n_max <= 1000, "n-max", "exceeds the budget (1000)");
  s.require(p.step > 0 && p.step < 0.1, "step", "must be in (0, 0.1)");
  Result r{Table({"N", "p_product", "p_entangled", "fisher_product", "fisher_entangled", "ratio", "dtheta_product",
                  "dtheta_entangled"})};
  for (int n = 1; n <= p.n_max; ++n) {
    double fp, fe;
    try {
      fp = ramsey_fisher(p.theta, n, false, p.step);
      fe = ramsey_fisher(p.theta, n, true, p.step);
    } catch (const std::domain_error& e) {
      throw ConfigError(s.where("theta") + "field 'theta': " + e.what() + " (N = " + std::to_string(n) + ")");
    }
    r.table.add_row(std::vector<double>{static_cast<double>(n), ramsey_probability(p.theta, n, false),
                                        ramsey_probability(p.theta, n, true), fp, fe, fe / fp, 1.0 / std::sqrt(fp),
                                        1.0 / std::sqrt(fe)});
  }
  return r;
}

struct Audit {
  AuditConfig cfg;
  bool detail = false;
};

Result run_oracle_audit(Audit& p, const Common& c, const Sub& s) {
  s.require(p.cfg.alpha_max > 0, "alpha-max", "must be > 0");
  s.require(p.cfg.cases >= 1, "cases", "must be >= 1");
  s.require(p.cfg.max_modes >= 1, "max-modes", "must be >= 1");
  s.require(p.cfg.max_terms >= 1, "max-terms", "must be >= 1");
  s.require(p.cfg.tol > 0, "tol", "must be > 0");
  s.budget(p.cfg.alpha_max <= 4, "alpha-max", "exceeds the Fock cutoff budget (4)");
  s.budget(p.cfg.max_modes <= 3, "max-modes", "exceeds the Fock dimension budget (3)");
  s.budget(p.cfg.max_terms <= 16, "max-terms", "exceeds the budget (16)");
  s.budget(p.cfg.cases <= 100000, "cases", "exceeds the budget (1e5)");
  p.cfg.seed = c.seed;
  const auto cases = run_audit(p.cfg, c.threads);
  bool ok = true;
  for (const auto& k : cases) ok = ok && k.pass;

  const auto& props = audit_properties();
  Result r{p.detail ? Table({"case", "property", "modes", "terms", "error", "pass"})
                    : Table({"property", "cases", "max_error", "failures", "pass"})};
  if (p.detail) {
    for (const auto& k : cases)
      r.table.add_row(std::vector<std::string>{std::to_string(k.index), k.property, std::to_string(k.modes),
                                               std::to_string(k.terms), fmt17(k.error), k.pass ? "1" : "0"});
  } else {
    for (const auto& prop : props) {
      int n = 0, fails = 0;
      double worst = 0.0;
      for (const auto& k : cases)
        if (k.property == prop.name) {
          ++n;
          fails += k.pass ? 0 : 1;
          worst = std::max(worst, k.error);
        }
      r.table.add_row(std::vector<std::string>{prop.name, std::to_string(n), fmt17(worst), std::to_string(fails),
                                               fails == 0 ? "1" : "0"});
    }
  }
  r.notes.push_back({"properties", std::to_string(props.size())});
  r.notes.push_back({"cases", std::to_string(cases.size())});
  r.notes.push_back({"all_pass", ok ? "true" : "false"});
  r.code = ok ? kOk : kPropertyFailure;
  return r;
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& name) {
  std::vector<ConfigEntry> out;
  std::map<std::string, int> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const std::string loc = name + ":" + std::to_string(line);
    if (eq == std::string::npos) throw ConfigError(loc + ": expected 'key = value'");
    ConfigEntry e{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
    if (e.key.empty() || e.key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789-") != std::string::npos)
      throw ConfigError(loc + ": malformed key '" + e.key + "'");
    if (e.value.empty()) throw ConfigError(loc + ": field '" + e.key + "' has no value");
    if (auto it = seen.find(e.key); it != seen.end())
      throw ConfigError(loc + ": duplicate key '" + e.key + "' (first on line " + std::to_string(it->second) + ")");
    seen[e.key] = line;
    out.push_back(std::move(e));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent-state quantum optics experiments", "catsim-cli"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  BellStats bell;
  GateCheck gate;
  WeakForce weak;
  Ruler ruler;
  Ramsey ramsey;
  Audit audit;
  std::map<std::string, Sub> subs;

  auto make = [&](const std::string& name, const std::string& desc) -> Sub& {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, desc);
    return s;
  };
  {
    Sub& s = make("bell-stats", "Bell-cat outcome frequencies and FAIL probability vs alpha");
    s.param("alpha-min", bell.alpha_min, "");
    s.param("alpha-max", bell.alpha_max, "");
    s.param("alpha-steps", bell.alpha_steps, "");
    s.param("shots", bell.shots, "samples per Bell state and alpha");
    add_common(s, common);
  }
  {
    Sub& s = make("gate-check", "Rz, entangling, CNOT and Rx(pi/2) checks vs alpha");
    s.param("alpha-min", gate.alpha_min, "");
    s.param("alpha-max", gate.alpha_max, "");
    s.param("alpha-steps", gate.alpha_steps, "");
    s.param("theta-alpha2", gate.theta_alpha2, "theta alpha^2 per gate step");
    s.param("cnot-steps", gate.cnot_steps, "entangling steps accumulated to CNOT, 0 skips");
    s.param("rx-trials", gate.rx_trials, "random inputs through Rx(pi/2)");
    add_common(s, common);
  }
  {
    Sub& s = make("weak-force", "Displacement sensing bounds and Monte Carlo estimation");
    s.param("alpha", weak.alpha, "cat amplitudes");
    s.param("n", weak.n, "mode counts");
    s.param("epsilon", weak.epsilon, "true displacement");
    s.param("trials", weak.trials, "parity shots per estimate, 0 skips the Monte Carlo");
    s.param("repeats", weak.repeats, "independent estimates");
    add_common(s, common);
  }
  {
    Sub& s = make("ruler", "Phase-scan fringe table of a cat overlap readout");
    s.param("alpha", ruler.alpha, "cat amplitudes");
    s.param("lambda", ruler.lambda, "wavelength in meters");
    s.param("theta-min", ruler.theta_min, "");
    s.param("theta-max", ruler.theta_max, "");
    s.param("points", ruler.points, "");
    s.flag("profile", ruler.profile, "emit the full fringe profile");
    add_common(s, common);
  }
  {
    Sub& s = make("ramsey", "Product vs entangled Ramsey Fisher information");
    s.param("n-max", ramsey.n_max, "");
    s.param("theta", ramsey.theta, "");
    s.param("step", ramsey.step, "finite-difference step");
    add_common(s, common);
  }
  {
    Sub& s = make("oracle-audit", "Cross-check against the Fock oracle");
    s.param("alpha-max", audit.cfg.alpha_max, "");
    s.param("cases", audit.cfg.cases, "");
    s.param("max-modes", audit.cfg.max_modes, "");
    s.param("max-terms", audit.cfg.max_terms, "");
    s.param("tol", audit.cfg.tol, "");
    s.flag("detail", audit.detail, "one row per case");
    add_common(s, common);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::Success&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Sub& sub = subs.at(name);
  try {
    if (!common.config.empty()) {
      std::ifstream f(common.config);
      if (!f) throw ConfigError("cannot open config file '" + common.config + "'");
      apply_config(sub, parse_config(f, common.config), common.config);
    }
    sub.require(common.threads >= 1, "threads", "must be >= 1");

    Result r = name == "bell-stats"     ? run_bell_stats(bell, common, sub)
               : name == "gate-check"   ? run_gate_check(gate, common, sub)
               : name == "weak-force"   ? run_weak_force(weak, common, sub)
               : name == "ruler"        ? run_ruler(ruler, common, sub)
               : name == "ramsey"       ? run_ramsey(ramsey, common, sub)
                                        : run_oracle_audit(audit, common, sub);
    if (common.output.empty() || common.output == "-") {
      emit(out, name, common, sub, r);
    } else {
      std::ofstream f(common.output, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file '" + common.output + "'");
      emit(f, name, common, sub, r);
    }
    if (r.code == kPropertyFailure) err << "property check failed\n";
    return r.code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BudgetError& e) {
    err << "budget error: " << e.what() << '\n';
    return kBudgetError;
  } catch (const fock::CutoffError& e) {
    err << "budget error: " << e.what() << '\n';
    return kBudgetError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace catsim::app
