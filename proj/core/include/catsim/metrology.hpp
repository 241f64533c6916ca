#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "catsim/cstate.hpp"

namespace catsim {

enum class Regime { classical, single_cat, multimode_cat };
const char* to_string(Regime r);

struct SensitivityReport {
  Regime regime = Regime::single_cat;
  double alpha = 0.0;
  int N = 1;
  double n_tot = 0.0;
  double epsilon = 0.0;

  double qfi = 0.0;                    // 4 Var(G)
  double epsilon_min = 0.0;            // 1/sqrt(qfi)
  double epsilon_min_generator = 0.0;  // 1/sqrt(Var(G)), the (delta)^2 >= 1/Var convention
  double bound_expression = 0.0;       // N (1 + 4 n_tot)
  double snr = 0.0;

  int trials = 0;
  int repeats = 0;
  double estimate_mean = 0.0;
  double estimate_var = 0.0;
  double cramer_rao = 0.0;      // 1 / (trials qfi)
  double fisher_readout = 0.0;  // per shot, binary parity readout
  double saturation = 0.0;      // cramer_rao / estimate_var
};

struct FringeScan {
  std::vector<double> theta;
  std::vector<double> length;  // meters
  std::vector<double> probability;
  std::vector<double> peaks_theta;
  double spacing_theta = 0.0;
  double spacing_length = 0.0;
  double peak_width_theta = 0.0;  // FWHM of the peak closest to theta = 0
  double peak_width_length = 0.0;
  double visibility = 0.0;
};

class RangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double classical_snr(double alpha0, double epsilon);
double sql_threshold();
// Mean shift over width of the momentum-quadrature densities of |a0> and |a0 + i eps>,
// integrated numerically with the homodyne density.
double homodyne_snr(double alpha0, double epsilon);

CoherentSuperposition displaced_cat(double alpha, double epsilon);
// (e^{i eps a}|a> + e^{-i eps a}|-a>), normalized
CoherentSuperposition displaced_cat_approx(double alpha, double epsilon);

// 4 Var(G) for the collective displacement exp(eps sum_m (u a_m^dag - conj(u) a_m)),
// from coherent-state moments. Empty `modes` means every mode.
double qfi_displacement(const CoherentSuperposition& s, cplx direction, std::vector<int> modes = {});

double mean_photon_nominal(double alpha);
double mean_photon_exact_even_cat(double alpha);
double multimode_bound(int N, double n_tot);

// <Pi> through |b> -> |-b> on every mode.
double parity_expectation(const CoherentSuperposition& s);
// Recombine an N-port split: modes 0..N-1 must share amplitudes; result is single mode.
CoherentSuperposition nport_merge(const CoherentSuperposition& s, int N);
// Even-parity probability after D(i eps) on every mode of the N-mode probe.
double weak_force_parity(double alpha, int N, double epsilon);

SensitivityReport weak_force_bound(double alpha, int N);
SensitivityReport weak_force_experiment(double alpha, int N, double epsilon, int trials, std::mt19937_64& rng,
                                        int repeats = 400);

// Fisher information of a binary outcome with P(+|x), centered differences and a Richardson fallback.
double fisher_binary(const std::function<double(double)>& P, double x, double step = 1e-4);

double ramsey_probability(double theta, int N, bool entangled);
// Total Fisher information from N two-level systems.
double ramsey_fisher(double theta, int N, bool entangled, double step = 1e-4);

FringeScan quantum_ruler(double alpha, double lambda, double theta_min, double theta_max, int points);

}  // namespace catsim
