#include "catsim/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "catsim/measure.hpp"
#include "catsim/optics.hpp"

namespace catsim {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::classical: return "classical";
    case Regime::single_cat: return "single_cat";
    case Regime::multimode_cat: return "multimode_cat";
  }
  return "?";
}

double classical_snr(double /*alpha0*/, double epsilon) { return 2.0 * epsilon; }

double sql_threshold() { return 0.5; }

double homodyne_snr(double alpha0, double epsilon) {
  auto moments = [](const CoherentSuperposition& s) {
    // momentum quadrature = position quadrature after a -pi/2 phase
    const auto r = phase_shift(s, 0, -std::numbers::pi / 2);
    const double c = std::sqrt(2.0) * std::abs(r.max_amplitude()) + 12.0;
    const int n = 8001;
    const double dx = 2.0 * c / (n - 1);
    double m0 = 0, m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = -c + dx * i;
      const double w = homodyne_pdf(r, 0, x) * ((i == 0 || i == n - 1) ? 0.5 : 1.0) * dx;
      m0 += w;
      m1 += w * x;
      m2 += w * x * x;
    }
    const double mean = m1 / m0;
    return std::pair{mean, m2 / m0 - mean * mean};
  };
  const auto ref = coherent({alpha0});
  const auto [mu0, var0] = moments(ref);
  const auto [mu1, var1] = moments(displace(ref, 0, cplx(0.0, epsilon)));
  (void)var1;
  return (mu1 - mu0) / std::sqrt(var0);
}

CoherentSuperposition displaced_cat(double alpha, double epsilon) {
  return displace(cat(alpha, 1), 0, cplx(0.0, epsilon));
}

CoherentSuperposition displaced_cat_approx(double alpha, double epsilon) {
  return normalize({1, {{std::polar(1.0, epsilon * alpha), {alpha}}, {std::polar(1.0, -epsilon * alpha), {-alpha}}}});
}

double qfi_displacement(const CoherentSuperposition& s, cplx direction, std::vector<int> modes) {
  if (std::abs(direction) == 0.0) throw std::invalid_argument("direction must be nonzero");
  const cplx u = direction / std::abs(direction);
  if (modes.empty())
    for (int m = 0; m < s.modes(); ++m) modes.push_back(m);
  for (int m : modes)
    if (m < 0 || m >= s.modes()) throw std::out_of_range("qfi mode index out of range");
  const auto n = normalize(s);
  const auto g = gram_matrix(n);
  // A = sum_m a_m over the selected modes; moments of A from a|b> = b|b>
  cplx A1 = 0.0, A2 = 0.0, AdA = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j)
    for (std::size_t k = 0; k < n.size(); ++k) {
      const cplx w = std::conj(n.term(j).coeff) * n.term(k).coeff *
                     g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      cplx sk = 0.0, sj = 0.0;
      for (int m : modes) {
        sk += n.term(k).amps[static_cast<std::size_t>(m)];
        sj += n.term(j).amps[static_cast<std::size_t>(m)];
      }
      A1 += w * sk;
      A2 += w * sk * sk;
      AdA += w * std::conj(sj) * sk;
    }
  // G = i (u A^dag - conj(u) A); [A, A^dag] = |modes|
  const cplx G1 = cplx(0, 1) * (u * std::conj(A1) - std::conj(u) * A1);
  const double G2 = std::real(-(u * u * std::conj(A2) + std::conj(u * u) * A2)) +
                    2.0 * AdA.real() + static_cast<double>(modes.size());
  return 4.0 * std::max(0.0, G2 - std::norm(G1));
}

double mean_photon_nominal(double alpha) { return alpha * alpha; }

double mean_photon_exact_even_cat(double alpha) { return alpha * alpha * std::tanh(alpha * alpha); }

double multimode_bound(int N, double n_tot) { return N * (1.0 + 4.0 * n_tot); }

double parity_expectation(const CoherentSuperposition& s) {
  const auto n = normalize(s);
  auto flipped = n;
  for (int m = 0; m < n.modes(); ++m) flipped = phase_shift(flipped, m, std::numbers::pi);
  return inner_product(n, flipped).real();
}

CoherentSuperposition nport_merge(const CoherentSuperposition& s, int N) {
  if (N < 1 || N > s.modes()) throw std::invalid_argument("nport_merge needs 1 <= N <= modes");
  const double root = std::sqrt(static_cast<double>(N));
  std::vector<CoherentTerm> terms;
  for (const auto& t : s.terms()) {
    const cplx a = t.amps[0];
    for (int m = 1; m < N; ++m)
      if (std::abs(t.amps[static_cast<std::size_t>(m)] - a) > 1e-12 * std::max(1.0, std::abs(a)))
        throw std::invalid_argument("nport_merge expects equal amplitudes on the split modes");
    CoherentTerm r{t.coeff, {a * root}};
    r.amps.insert(r.amps.end(), t.amps.begin() + N, t.amps.end());
    terms.push_back(std::move(r));
  }
  return {s.modes() - N + 1, std::move(terms)};
}

double weak_force_parity(double alpha, int N, double epsilon) {
  auto s = ghz_cat(alpha, N);
  for (int m = 0; m < N; ++m) s = displace(s, m, cplx(0.0, epsilon));
  return 0.5 * (1.0 + parity_expectation(nport_merge(s, N)));
}

SensitivityReport weak_force_bound(double alpha, int N) {
  if (N < 1) throw std::invalid_argument("weak force needs N >= 1");
  if (!(alpha >= 0)) throw std::invalid_argument("alpha must be non-negative");
  SensitivityReport r;
  r.alpha = alpha;
  r.N = N;
  r.n_tot = mean_photon_nominal(alpha);
  r.regime = alpha == 0.0 ? Regime::classical : (N > 1 ? Regime::multimode_cat : Regime::single_cat);
  const auto probe = alpha == 0.0 ? vacuum(N) : ghz_cat(alpha, N);
  r.qfi = qfi_displacement(probe, cplx(0.0, 1.0));
  r.epsilon_min = 1.0 / std::sqrt(r.qfi);
  r.epsilon_min_generator = 1.0 / std::sqrt(r.qfi / 4.0);
  r.bound_expression = multimode_bound(N, r.n_tot);
  return r;
}

double fisher_binary(const std::function<double(double)>& P, double x, double step) {
  auto deriv = [&](double h) { return (P(x + h) - P(x - h)) / (2.0 * h); };
  const double d1 = deriv(step), d2 = deriv(step / 2);
  double d = d1;
  if (std::abs(d1 - d2) > 1e-10 * std::max(1.0, std::abs(d2))) d = (4.0 * d2 - d1) / 3.0;
  const double p = P(x);
  const double den = p * (1.0 - p);
  if (!(den > 1e-14)) throw std::domain_error("Fisher information undefined at a fringe extremum");
  return d * d / den;
}

SensitivityReport weak_force_experiment(double alpha, int N, double epsilon, int trials, std::mt19937_64& rng,
                                        int repeats) {
  if (!(alpha > 0)) throw std::invalid_argument("weak force experiment needs alpha > 0");
  if (trials < 1 || repeats < 2) throw std::invalid_argument("need trials >= 1 and repeats >= 2");
  auto r = weak_force_bound(alpha, N);
  r.epsilon = epsilon;
  r.trials = trials;
  r.repeats = repeats;
  auto P = [&](double e) { return weak_force_parity(alpha, N, e); };

  // The even-parity probability falls from 1 to its first minimum near
  // pi / (4 alpha sqrt N); the estimator lives on that monotone stretch.
  const double guess = std::numbers::pi / (4.0 * alpha * std::sqrt(static_cast<double>(N)));
  double lo = 0.5 * guess, hi = 1.5 * guess;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    if (P(a) < P(b)) hi = b; else lo = a;
  }
  const double e_hi = 0.5 * (lo + hi);
  const double p_top = P(0.0), p_bot = P(e_hi);
  auto ml = [&](double f) {
    if (f >= p_top) return 0.0;
    if (f <= p_bot) return e_hi;
    double a = 0.0, b = e_hi;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      if (P(m) > f) a = m; else b = m;
    }
    return 0.5 * (a + b);
  };

  const double p_true = P(std::abs(epsilon));
  std::binomial_distribution<long> draw(trials, std::clamp(p_true, 0.0, 1.0));
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < repeats; ++k) {
    const double est = ml(static_cast<double>(draw(rng)) / trials);
    sum += est;
    sum2 += est * est;
  }
  r.estimate_mean = sum / repeats;
  r.estimate_var = std::max(0.0, (sum2 - sum * sum / repeats) / (repeats - 1));
  r.cramer_rao = 1.0 / (trials * r.qfi);
  try {
    r.fisher_readout = fisher_binary(P, std::abs(epsilon));
  } catch (const std::domain_error&) {
    r.fisher_readout = 0.0;
  }
  r.saturation = r.estimate_var > 0.0 ? r.cramer_rao / r.estimate_var : 0.0;
  r.snr = r.estimate_var > 0.0 ? r.estimate_mean / std::sqrt(r.estimate_var) : 0.0;
  return r;
}

double ramsey_probability(double theta, int N, bool entangled) {
  if (N < 1) throw std::invalid_argument("ramsey needs N >= 1");
  // (e^{-i k theta}|0..0> + e^{i k theta}|1..1>)/sqrt2 projected on the + state
  const double k = entangled ? static_cast<double>(N) : 1.0;
  const cplx amp = 0.5 * (std::polar(1.0, -k * theta) + std::polar(1.0, k * theta));
  return std::norm(amp);
}

double ramsey_fisher(double theta, int N, bool entangled, double step) {
  auto P = [&](double t) { return ramsey_probability(t, N, entangled); };
  const double f = fisher_binary(P, theta, step);
  return entangled ? f : N * f;
}

FringeScan quantum_ruler(double alpha, double lambda, double theta_min, double theta_max, int points) {
  if (!(alpha > 0) || !(lambda > 0)) throw std::invalid_argument("ruler needs alpha > 0 and lambda > 0");
  if (points < 3 || !(theta_max > theta_min)) throw std::invalid_argument("ruler needs a proper scan range");
  const auto probe = cat(alpha, 1);
  FringeScan f;
  const double d = (theta_max - theta_min) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double th = theta_min + d * i;
    f.theta.push_back(th);
    f.length.push_back(th * lambda / (2.0 * std::numbers::pi));
    f.probability.push_back(std::clamp(fidelity(probe, phase_shift(probe, 0, th)), 0.0, 1.0));
  }
  const auto [mn, mx] = std::minmax_element(f.probability.begin(), f.probability.end());
  f.visibility = (*mx + *mn) > 0 ? (*mx - *mn) / (*mx + *mn) : 0.0;
  const auto& p = f.probability;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] > *mn + 0.5 * (*mx - *mn)) {
      // parabolic refinement of the peak position
      const double den = p[i - 1] - 2 * p[i] + p[i + 1];
      const double off = den != 0.0 ? 0.5 * (p[i - 1] - p[i + 1]) / den : 0.0;
      f.peaks_theta.push_back(f.theta[i] + off * d);
    }
  }
  if (f.peaks_theta.size() < 2) throw RangeError("fewer than two fringe peaks in the scan range");
  f.spacing_theta = (f.peaks_theta.back() - f.peaks_theta.front()) / static_cast<double>(f.peaks_theta.size() - 1);
  f.spacing_length = f.spacing_theta * lambda / (2.0 * std::numbers::pi);

  // FWHM of the peak nearest zero, from the exact readout
  const double c = *std::min_element(f.peaks_theta.begin(), f.peaks_theta.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
  auto R = [&](double th) { return fidelity(probe, phase_shift(probe, 0, th)); };
  const double half = 0.5 * R(c);
  auto edge = [&](double dir) {
    double a = c, b = c + dir * 0.5 * f.spacing_theta;
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (a + b);
      if (R(m) > half) a = m; else b = m;
    }
    return 0.5 * (a + b);
  };
  f.peak_width_theta = edge(1.0) - edge(-1.0);
  f.peak_width_length = f.peak_width_theta * lambda / (2.0 * std::numbers::pi);
  return f;
}

}  // namespace catsim
