#include "catsim_app/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "catsim/cstate.hpp"
#include "catsim/fockoracle.hpp"
#include "catsim/measure.hpp"
#include "catsim/optics.hpp"
#include "catsim_app/parallel.hpp"

namespace catsim::app {
namespace {

using fock::FockVector;
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

cplx gauss_c(Rng& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

std::vector<cplx> random_amps(Rng& rng, int modes, double rmax) {
  std::vector<cplx> a(static_cast<std::size_t>(modes));
  double n2 = 0.0;
  for (auto& x : a) {
    x = gauss_c(rng);
    n2 += std::norm(x);
  }
  const double r = rmax * uniform(rng, 0.0, 1.0) / std::sqrt(n2);
  for (auto& x : a) x *= r;
  return a;
}

CoherentSuperposition random_state(Rng& rng, int modes, int terms, double rmax) {
  std::vector<CoherentTerm> t;
  for (int k = 0; k < terms; ++k) t.push_back({gauss_c(rng), random_amps(rng, modes, rmax)});
  return normalize({modes, std::move(t)});
}

// Modes and terms drawn from the configured ranges.
CoherentSuperposition random_state(Rng& rng, const AuditConfig& c, int min_modes = 1) {
  const int m = uniform_int(rng, std::min(min_modes, c.max_modes), c.max_modes);
  return random_state(rng, m, uniform_int(rng, 1, c.max_terms), c.alpha_max);
}

FockVector embed(const CoherentSuperposition& s, int n_max) { return fock::to_fock(s, n_max); }

int cutoff(double a) { return fock::cutoff_for(a); }

double infidelity(const FockVector& x, const FockVector& y) {
  return std::max(0.0, 1.0 - fock::fock_fidelity(fock::fock_normalized(x), fock::fock_normalized(y)));
}

AuditCase make_case(const CoherentSuperposition& s, double err) {
  AuditCase c;
  c.modes = s.modes();
  c.terms = static_cast<int>(s.size());
  c.error = err;
  return c;
}

std::pair<int, int> two_modes(Rng& rng, int M) {
  const int a = uniform_int(rng, 0, M - 1);
  int b = uniform_int(rng, 0, M - 2);
  if (b >= a) ++b;
  return {a, b};
}

AuditCase check_norm(Rng& rng, const AuditConfig& c) {
  const auto s0 = random_state(rng, c);
  const auto s = scale(s0, gauss_c(rng));
  const auto v = embed(s, cutoff(s.max_amplitude()));
  const double n2 = squared_norm(s);
  return make_case(s, std::abs(n2 - v.norm2()) / n2);
}

AuditCase check_inner(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c);
  const auto t = random_state(rng, s.modes(), uniform_int(rng, 1, c.max_terms), c.alpha_max);
  const int n = cutoff(std::max(s.max_amplitude(), t.max_amplitude()));
  return make_case(s, std::abs(inner_product(s, t) - fock::fock_inner(embed(s, n), embed(t, n))));
}

AuditCase check_beamsplitter(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c, 2);
  if (s.modes() < 2) return make_case(s, 0.0);
  const auto [a, b] = two_modes(rng, s.modes());
  const double th = uniform(rng, -std::numbers::pi, std::numbers::pi);
  const auto out = beamsplitter(s, {a, b, th});
  const int n = cutoff(std::max(s.max_amplitude(), out.max_amplitude()));
  return make_case(s, infidelity(embed(out, n), fock::fock_beamsplitter(embed(s, n), a, b, th)));
}

AuditCase check_phase(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const double th = uniform(rng, -std::numbers::pi, std::numbers::pi);
  const int n = cutoff(s.max_amplitude());
  return make_case(s, infidelity(embed(phase_shift(s, m, th), n), fock::fock_phase(embed(s, n), m, th)));
}

AuditCase check_displace(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const cplx beta = std::polar(uniform(rng, 0.0, 1.0), uniform(rng, -std::numbers::pi, std::numbers::pi));
  const auto out = displace(s, m, beta);
  const int n = cutoff(std::max(s.max_amplitude(), out.max_amplitude()));
  return make_case(s, infidelity(embed(out, n), fock::fock_displace(embed(s, n), m, beta)));
}

AuditCase check_photon_statistics(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const int n = cutoff(s.max_amplitude());
  const auto p = photon_statistics(s, m, n);
  const auto q = fock::fock_measure_number(embed(s, n), m);
  double err = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) err = std::max(err, std::abs(p[k] - q[k]));
  return make_case(s, err);
}

AuditCase check_project_number(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const int n = cutoff(s.max_amplitude());
  const auto v = embed(s, n);
  const auto q = fock::fock_measure_number(v, m);
  // pick a count the state actually produces
  std::discrete_distribution<int> pick(q.begin(), q.end());
  const int k = pick(rng);
  const auto r = project_photon_number(s, m, k);
  double err = std::abs(r.probability - q[static_cast<std::size_t>(k)]);
  if (r.conditioned) err = std::max(err, infidelity(embed(*r.conditioned, n), fock::fock_project_number(v, m, k)));
  return make_case(s, err);
}

AuditCase check_parity(Rng& rng, const AuditConfig& c) {
  const int M = uniform_int(rng, 1, c.max_modes);
  const int K = uniform_int(rng, 1, c.max_terms);
  const int m = uniform_int(rng, 0, M - 1);
  const cplx a = std::polar(uniform(rng, 0.2, 1.0) * c.alpha_max, uniform(rng, -std::numbers::pi, std::numbers::pi));
  const cplx choice[3] = {a, -a, 0.0};
  std::vector<CoherentTerm> terms;
  for (int k = 0; k < K; ++k) {
    auto amps = random_amps(rng, M, c.alpha_max);
    amps[static_cast<std::size_t>(m)] = choice[uniform_int(rng, 0, 2)];
    terms.push_back({gauss_c(rng), amps});
  }
  const auto s = normalize({M, std::move(terms)});
  const int n = cutoff(s.max_amplitude());
  const auto v = embed(s, n);
  const auto q = fock::fock_measure_number(v, m);
  double pz = q[0], pe = 0.0, po = 0.0;
  for (std::size_t k = 1; k < q.size(); ++k) (k % 2 ? po : pe) += q[k];
  const auto r = parity_projection(s, m);
  double err = std::max({std::abs(r[0].probability - pz), std::abs(r[1].probability - pe),
                         std::abs(r[2].probability - po)});
  // every count inside a class leaves the same conditional state, so one representative suffices
  const int rep[3] = {0, 2, 1};
  for (int i = 0; i < 3; ++i)
    if (r[static_cast<std::size_t>(i)].conditioned && q[static_cast<std::size_t>(rep[i])] > 1e-12)
      err = std::max(err, infidelity(embed(*r[static_cast<std::size_t>(i)].conditioned, n),
                                     fock::fock_project_number(v, m, rep[i])));
  return make_case(s, err);
}

AuditCase check_homodyne_pdf(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const int n = cutoff(s.max_amplitude());
  const double span = std::sqrt(2.0) * c.alpha_max + 3.0;
  const double x = uniform(rng, -span, span);
  return make_case(s, std::abs(homodyne_pdf(s, m, x) - fock::fock_quadrature_pdf(embed(s, n), m, x)));
}

AuditCase check_homodyne_condition(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c, 2);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const int n = cutoff(s.max_amplitude());
  const auto v = embed(s, n);
  const double span = std::sqrt(2.0) * c.alpha_max + 2.0;
  const double x = uniform(rng, -span, span);
  const auto r = homodyne_condition(s, m, x);
  const auto& h = std::get<Homodyne>(r.outcome);
  double err = std::abs(h.density - fock::fock_quadrature_pdf(v, m, x));
  if (r.conditioned && h.density > 1e-12)
    err = std::max(err, infidelity(embed(*r.conditioned, n), fock::fock_project_quadrature(v, m, x)));
  return make_case(s, err);
}

AuditCase check_bell_unmix(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, c, 2);
  if (s.modes() < 2) return make_case(s, 0.0);
  const auto [a, b] = two_modes(rng, s.modes());
  const auto out = bell_unmix(s, a, b);
  const int n = cutoff(std::max(s.max_amplitude(), out.max_amplitude()));
  const auto ref = fock::fock_beamsplitter(fock::fock_phase(embed(s, n), b, std::numbers::pi / 2), a, b,
                                           -std::numbers::pi / 4);
  return make_case(s, infidelity(embed(out, n), ref));
}

AuditCase check_bell_outcomes(Rng& rng, const AuditConfig& c) {
  const int M = uniform_int(rng, 2, std::max(2, c.max_modes));
  const int K = uniform_int(rng, 1, c.max_terms);
  const double amax = c.alpha_max / std::sqrt(2.0);
  const cplx a = std::polar(uniform(rng, 0.2, 1.0) * amax, uniform(rng, -std::numbers::pi, std::numbers::pi));
  std::vector<CoherentTerm> terms;
  for (int k = 0; k < K; ++k) {
    auto amps = random_amps(rng, M, c.alpha_max / std::sqrt(2.0));
    amps[0] = uniform_int(rng, 0, 1) ? a : -a;
    amps[1] = uniform_int(rng, 0, 1) ? a : -a;
    terms.push_back({gauss_c(rng), amps});
  }
  const auto s = normalize({M, std::move(terms)});
  const auto r = bell_outcomes(s, 0, 1);
  const auto u = bell_unmix(s, 0, 1);
  const int n = cutoff(std::max(s.max_amplitude(), u.max_amplitude()));
  const auto v = fock::fock_beamsplitter(fock::fock_phase(embed(s, n), 1, std::numbers::pi / 2), 0, 1,
                                         -std::numbers::pi / 4);
  double p[5] = {0, 0, 0, 0, 0};
  const std::size_t d = v.dim(), s0 = v.stride(0), s1 = v.stride(1);
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(v.data.size()); ++idx) {
    const std::size_t x = (idx / s0) % d, y = (idx / s1) % d;
    int cls = 4;
    if (y == 0 && x > 0) cls = x % 2 ? 1 : 0;
    else if (x == 0 && y > 0) cls = y % 2 ? 3 : 2;
    else if (x > 0 && y > 0) continue;  // both ports lit: outside the code space
    p[cls] += std::norm(v.data(static_cast<Eigen::Index>(idx)));
  }
  double err = 0.0;
  for (int i = 0; i < 5; ++i) err = std::max(err, std::abs(r[static_cast<std::size_t>(i)].probability - p[i]));
  return make_case(s, err);
}

AuditCase check_nport_split(Rng& rng, const AuditConfig& c) {
  const auto s = random_state(rng, 1 + uniform_int(rng, 0, std::max(0, c.max_modes - 2)),
                              uniform_int(rng, 1, c.max_terms), c.alpha_max);
  const int m = uniform_int(rng, 0, s.modes() - 1);
  const auto out = nport_split(s, m, 2);
  const int n = cutoff(s.max_amplitude());
  const int fresh = s.modes();
  auto v = embed(tensor(s, vacuum(1)), n);
  v = fock::fock_phase(fock::fock_beamsplitter(v, m, fresh, std::numbers::pi / 4), fresh, -std::numbers::pi / 2);
  return make_case(s, infidelity(embed(out, n), v));
}

}  // namespace

const std::vector<AuditProperty>& audit_properties() {
  static const std::vector<AuditProperty> props = {
      {"norm", check_norm},
      {"inner_product", check_inner},
      {"beamsplitter", check_beamsplitter},
      {"phase_shift", check_phase},
      {"displace", check_displace},
      {"photon_statistics", check_photon_statistics},
      {"project_photon_number", check_project_number},
      {"parity_projection", check_parity},
      {"homodyne_pdf", check_homodyne_pdf},
      {"homodyne_condition", check_homodyne_condition},
      {"bell_unmix", check_bell_unmix},
      {"bell_outcomes", check_bell_outcomes},
      {"nport_split", check_nport_split},
  };
  return props;
}

AuditCase run_audit_case(const AuditConfig& cfg, int index) {
  const auto& props = audit_properties();
  const auto& p = props[static_cast<std::size_t>(index) % props.size()];
  Rng rng(cfg.seed ^ static_cast<std::uint64_t>(index));
  auto c = p.check(rng, cfg);
  c.property = p.name;
  c.index = index;
  c.pass = std::isfinite(c.error) && c.error <= cfg.tol;
  return c;
}

std::vector<AuditCase> run_audit(const AuditConfig& cfg, int threads) {
  std::vector<AuditCase> out(static_cast<std::size_t>(std::max(cfg.cases, 0)));
  parallel_for(cfg.cases, threads, [&](int i) { out[static_cast<std::size_t>(i)] = run_audit_case(cfg, i); });
  return out;
}

}  // namespace catsim::app
