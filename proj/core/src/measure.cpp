#include "catsim/measure.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>

#include "catsim/optics.hpp"

namespace catsim {

namespace {

void check_mode(const CoherentSuperposition& s, int mode) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("mode " + std::to_string(mode) + " outside [0, " +
                            std::to_string(s.modes()) + ")");
}

// Gram matrix with the listed modes left out.
Eigen::MatrixXcd gram_without(const CoherentSuperposition& s, const std::vector<int>& skip) {
  const auto K = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXcd g(K, K);
  for (Eigen::Index j = 0; j < K; ++j)
    for (Eigen::Index k = j; k < K; ++k) {
      cplx e = 0.0;
      for (int m = 0; m < s.modes(); ++m) {
        if (std::find(skip.begin(), skip.end(), m) != skip.end()) continue;
        const cplx a = s.term(j).amps[m], b = s.term(k).amps[m];
        e += -0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b;
      }
      g(j, k) = std::exp(e);
      g(k, j) = std::conj(g(j, k));
    }
  return g;
}

double quad_form(const Eigen::VectorXcd& w, const Eigen::MatrixXcd& g) {
  return std::max(0.0, w.dot(g * w).real());
}

// sum_k w_k |rest_k>, with the listed modes dropped.
CoherentSuperposition reduced(const CoherentSuperposition& s, const std::vector<int>& skip,
                              const Eigen::VectorXcd& w) {
  std::vector<CoherentTerm> terms;
  for (std::size_t k = 0; k < s.size(); ++k) {
    CoherentTerm t{w(static_cast<Eigen::Index>(k)), {}};
    for (int m = 0; m < s.modes(); ++m)
      if (std::find(skip.begin(), skip.end(), m) == skip.end()) t.amps.push_back(s.term(k).amps[m]);
    terms.push_back(std::move(t));
  }
  return merge_terms({s.modes() - static_cast<int>(skip.size()), std::move(terms)});
}

Eigen::VectorXcd coeffs(const CoherentSuperposition& s) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) c(static_cast<Eigen::Index>(k)) = s.term(k).coeff;
  return c;
}

// Reference amplitude a such that every amplitude of `mode` is a, -a or (if allowed) 0.
struct PmSupport {
  cplx a;
  std::vector<int> label;  // +1, -1, or 0 per term
};

PmSupport pm_support(const CoherentSuperposition& s, int mode, bool allow_zero) {
  double scale = 1.0;
  for (const auto& t : s.terms()) scale = std::max(scale, std::abs(t.amps[mode]));
  const double tol = 1e-9 * scale;
  PmSupport sup{0.0, {}};
  for (const auto& t : s.terms())
    if (std::abs(t.amps[mode]) > tol) {
      sup.a = t.amps[mode];
      break;
    }
  for (const auto& t : s.terms()) {
    const cplx v = t.amps[mode];
    if (std::abs(sup.a) > tol && std::abs(v - sup.a) <= tol)
      sup.label.push_back(1);
    else if (std::abs(sup.a) > tol && std::abs(v + sup.a) <= tol)
      sup.label.push_back(-1);
    else if (std::abs(v) <= tol && allow_zero)
      sup.label.push_back(0);
    else
      throw UnsupportedStateError("mode " + std::to_string(mode) +
                                  " is not supported on a common {a, -a" +
                                  std::string(allow_zero ? ", 0}" : "}") + " set");
  }
  return sup;
}

cplx parity_factor(ParityClass c, int label, cplx amp) {
  switch (c) {
    case ParityClass::zero: return std::exp(-0.5 * std::norm(amp));
    case ParityClass::even_nonzero: return label == 0 ? 0.0 : 1.0;
    case ParityClass::odd: return static_cast<double>(label);
  }
  return 0.0;
}

// Squared norm of the class projector applied to |a>.
double parity_weight(ParityClass c, double x) {
  switch (c) {
    case ParityClass::zero: return 1.0;
    case ParityClass::even_nonzero: return 0.5 * std::expm1(-x) * std::expm1(-x);
    case ParityClass::odd: return -0.5 * std::expm1(-2.0 * x);
  }
  return 0.0;
}

}  // namespace

const char* to_string(ParityClass c) {
  switch (c) {
    case ParityClass::zero: return "zero";
    case ParityClass::even_nonzero: return "even_nonzero";
    case ParityClass::odd: return "odd";
  }
  return "?";
}

const char* to_string(BellClass c) {
  switch (c) {
    case BellClass::I: return "I";
    case BellClass::II: return "II";
    case BellClass::III: return "III";
    case BellClass::IV: return "IV";
    case BellClass::FAIL: return "FAIL";
  }
  return "?";
}

std::string MeasurementRecord::kind() const {
  struct V {
    std::string operator()(const PhotonCount&) const { return "photon_count"; }
    std::string operator()(ParityClass) const { return "parity"; }
    std::string operator()(const Homodyne&) const { return "homodyne"; }
    std::string operator()(BellClass) const { return "bell"; }
  };
  return std::visit(V{}, outcome);
}

std::string MeasurementRecord::value() const {
  struct V {
    std::string operator()(const PhotonCount& p) const { return std::to_string(p.n); }
    std::string operator()(ParityClass c) const { return to_string(c); }
    std::string operator()(const Homodyne& h) const {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", h.x);
      return buf;
    }
    std::string operator()(BellClass c) const { return to_string(c); }
  };
  return std::visit(V{}, outcome);
}

cplx fock_amplitude(long n, cplx a) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  const double r = std::abs(a);
  if (r == 0.0) return n == 0 ? 1.0 : 0.0;
  const double dn = static_cast<double>(n);
  const double logmag = -0.5 * r * r + dn * std::log(r) - 0.5 * std::lgamma(dn + 1.0);
  return std::polar(std::exp(logmag), dn * std::arg(a));
}

int default_cutoff(double a) { return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0)); }

std::vector<double> photon_statistics(const CoherentSuperposition& s, int mode, int n_max) {
  check_mode(s, mode);
  if (n_max < 0) {
    double amax = 0.0;
    for (const auto& t : s.terms()) amax = std::max(amax, std::abs(t.amps[mode]));
    n_max = default_cutoff(amax);
  }
  const auto g = rest_gram(s, mode);
  const auto c = coeffs(s);
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
  Eigen::VectorXcd w(c.size());
  for (int n = 0; n <= n_max; ++n) {
    for (Eigen::Index k = 0; k < c.size(); ++k)
      w(k) = c(k) * fock_amplitude(n, s.term(static_cast<std::size_t>(k)).amps[mode]);
    p[static_cast<std::size_t>(n)] = quad_form(w, g);
  }
  return p;
}

MeasurementRecord project_photon_number(const CoherentSuperposition& s, int mode, long n) {
  check_mode(s, mode);
  const auto c = coeffs(s);
  Eigen::VectorXcd w(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k)
    w(k) = c(k) * fock_amplitude(n, s.term(static_cast<std::size_t>(k)).amps[mode]);
  const double p = quad_form(w, rest_gram(s, mode));
  if (!(p > kMinNorm2)) throw ZeroNormError("photon-number branch has zero probability");
  MeasurementRecord r{{mode}, PhotonCount{n}, p, std::nullopt};
  if (s.modes() > 1) r.conditioned = normalize(reduced(s, {mode}, w));
  return r;
}

std::array<MeasurementRecord, 3> parity_projection(const CoherentSuperposition& s, int mode) {
  check_mode(s, mode);
  const auto sup = pm_support(s, mode, true);
  const double x = std::norm(sup.a);
  const auto g = rest_gram(s, mode);
  const auto c = coeffs(s);
  std::array<MeasurementRecord, 3> out;
  const ParityClass classes[] = {ParityClass::zero, ParityClass::even_nonzero, ParityClass::odd};
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXcd w(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      w(k) = c(k) * parity_factor(classes[i], sup.label[ku], s.term(ku).amps[mode]);
    }
    const double p = parity_weight(classes[i], x) * quad_form(w, g);
    out[i] = MeasurementRecord{{mode}, classes[i], p, std::nullopt};
    if (s.modes() > 1 && p > kMinNorm2) out[i].conditioned = normalize(reduced(s, {mode}, w));
  }
  return out;
}

cplx quadrature_wavefunction(double x, cplx a) {
  static const double norm = std::pow(std::numbers::pi, -0.25);
  return norm * std::exp(-0.5 * x * x + std::sqrt(2.0) * a * x - 0.5 * a * a - 0.5 * std::norm(a));
}

double homodyne_pdf(const CoherentSuperposition& s, int mode, double x) {
  check_mode(s, mode);
  const auto c = coeffs(s);
  Eigen::VectorXcd w(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k)
    w(k) = c(k) * quadrature_wavefunction(x, s.term(static_cast<std::size_t>(k)).amps[mode]);
  return quad_form(w, rest_gram(s, mode));
}

namespace {

double grid_half_width(const CoherentSuperposition& s, int mode, double margin) {
  double amax = 0.0;
  for (const auto& t : s.terms()) amax = std::max(amax, std::abs(t.amps[mode]));
  return amax * std::sqrt(2.0) + margin;
}

}  // namespace

MeasurementRecord homodyne_condition(const CoherentSuperposition& s, int mode, double x, double dx) {
  check_mode(s, mode);
  if (dx <= 0.0) {
    const HomodyneGrid grid;
    dx = 2.0 * grid_half_width(s, mode, grid.margin) / (grid.points - 1);
  }
  const auto c = coeffs(s);
  Eigen::VectorXcd w(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k)
    w(k) = c(k) * quadrature_wavefunction(x, s.term(static_cast<std::size_t>(k)).amps[mode]);
  const double density = quad_form(w, rest_gram(s, mode));
  if (!(density > kMinNorm2)) throw ZeroNormError("homodyne density vanishes at this point");
  MeasurementRecord r{{mode}, Homodyne{x, density}, std::min(1.0, density * dx), std::nullopt};
  if (s.modes() > 1) r.conditioned = normalize(reduced(s, {mode}, w));
  return r;
}

MeasurementRecord homodyne_sample(const CoherentSuperposition& s, int mode, std::mt19937_64& rng,
                                  HomodyneGrid grid) {
  check_mode(s, mode);
  if (grid.points < 2) throw std::invalid_argument("homodyne grid needs at least two points");
  const double L = grid_half_width(s, mode, grid.margin);
  const double dx = 2.0 * L / (grid.points - 1);
  std::vector<double> xs(static_cast<std::size_t>(grid.points)), cdf(xs.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = -L + dx * static_cast<double>(i);
    const double p = homodyne_pdf(s, mode, xs[i]);
    cdf[i] = i == 0 ? 0.0 : cdf[i - 1] + 0.5 * (p + prev) * dx;
    prev = p;
  }
  const double t = std::uniform_real_distribution<double>(0.0, cdf.back())(rng);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), t);
  const auto i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf.begin(), 1,
                                                                    static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  const double span = cdf[i] - cdf[i - 1];
  const double x = xs[i - 1] + (span > 0 ? (t - cdf[i - 1]) / span : 0.5) * dx;
  return homodyne_condition(s, mode, x, dx);
}

CoherentSuperposition bell_unmix(const CoherentSuperposition& s, int mode_a, int mode_b) {
  auto u = phase_shift(s, mode_b, std::numbers::pi / 2);
  return beamsplitter(u, {mode_a, mode_b, -std::numbers::pi / 4});
}

std::array<MeasurementRecord, 5> bell_outcomes(const CoherentSuperposition& s, int mode_a, int mode_b,
                                               bool keep_fail_state) {
  check_mode(s, mode_a);
  check_mode(s, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("Bell measurement needs two distinct modes");
  const auto in_a = pm_support(s, mode_a, false);
  const auto in_b = pm_support(s, mode_b, false);
  if (std::abs(std::abs(in_a.a) - std::abs(in_b.a)) > 1e-9 * std::max(1.0, std::abs(in_a.a)))
    throw UnsupportedStateError("Bell measurement modes carry different amplitudes");

  const auto u = bell_unmix(s, mode_a, mode_b);
  const auto sa = pm_support(u, mode_a, true);
  const auto sb = pm_support(u, mode_b, true);
  const double xa = std::norm(sa.a), xb = std::norm(sb.a);
  const std::vector<int> skip{mode_a, mode_b};
  const auto g = gram_without(u, skip);
  const auto c = coeffs(u);

  using P = ParityClass;
  const std::pair<P, P> pattern[] = {{P::even_nonzero, P::zero},
                                     {P::odd, P::zero},
                                     {P::zero, P::even_nonzero},
                                     {P::zero, P::odd},
                                     {P::zero, P::zero}};
  const BellClass names[] = {BellClass::I, BellClass::II, BellClass::III, BellClass::IV, BellClass::FAIL};
  std::array<MeasurementRecord, 5> out;
  for (int i = 0; i < 5; ++i) {
    const auto [pa, pb] = pattern[i];
    Eigen::VectorXcd w(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      const auto ku = static_cast<std::size_t>(k);
      w(k) = c(k) * parity_factor(pa, sa.label[ku], u.term(ku).amps[mode_a]) *
             parity_factor(pb, sb.label[ku], u.term(ku).amps[mode_b]);
    }
    const double p = parity_weight(pa, xa) * parity_weight(pb, xb) * quad_form(w, g);
    out[i] = MeasurementRecord{{mode_a, mode_b}, names[i], p, std::nullopt};
    const bool keep = names[i] != BellClass::FAIL || keep_fail_state;
    if (keep && u.modes() > 2 && p > kMinNorm2) out[i].conditioned = normalize(reduced(u, skip, w));
  }
  return out;
}

std::size_t sample_index(const std::vector<double>& probs, std::mt19937_64& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  if (!(total > 0.0)) throw ZeroNormError("cannot sample from an all-zero distribution");
  const double t = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (t < acc && probs[i] > 0.0) return i;
  }
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  return 0;
}

MeasurementRecord bell_measurement(const CoherentSuperposition& s, int mode_a, int mode_b,
                                   std::mt19937_64& rng, bool keep_fail_state) {
  auto all = bell_outcomes(s, mode_a, mode_b, keep_fail_state);
  std::vector<double> p;
  for (const auto& r : all) p.push_back(r.probability);
  return all[sample_index(p, rng)];
}

BellClass classify_counts(long n, long m) {
  if (n > 0) return n % 2 == 0 ? BellClass::I : BellClass::II;
  if (m > 0) return m % 2 == 0 ? BellClass::III : BellClass::IV;
  return BellClass::FAIL;
}

BellCount bell_count_sample(const CoherentSuperposition& s, int mode_a, int mode_b, std::mt19937_64& rng) {
  check_mode(s, mode_a);
  check_mode(s, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("Bell measurement needs two distinct modes");
  const auto u = bell_unmix(s, mode_a, mode_b);
  const auto pn = photon_statistics(u, mode_a);
  const long n = static_cast<long>(sample_index(pn, rng));
  const auto c = coeffs(u);
  Eigen::VectorXcd w(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k)
    w(k) = c(k) * fock_amplitude(n, u.term(static_cast<std::size_t>(k)).amps[mode_a]);
  const auto rest = normalize(reduced(u, {mode_a}, w));
  const int mb = mode_b > mode_a ? mode_b - 1 : mode_b;
  const auto pm = photon_statistics(rest, mb);
  const long m = static_cast<long>(sample_index(pm, rng));
  double total_n = 0.0, total_m = 0.0;
  for (double p : pn) total_n += p;
  for (double p : pm) total_m += p;
  BellCount out{n, m, classify_counts(n, m),
                pn[static_cast<std::size_t>(n)] / total_n * pm[static_cast<std::size_t>(m)] / total_m,
                std::nullopt};
  if (rest.modes() > 1) out.conditioned = project_photon_number(rest, mb, m).conditioned;
  return out;
}

}  // namespace catsim
