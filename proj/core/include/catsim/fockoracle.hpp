#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "catsim/cstate.hpp"

namespace catsim::fock {

class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense truncated number-basis vector; mode 0 is the most significant index.
struct FockVector {
  int modes = 1;
  int n_max = 0;
  Eigen::VectorXcd data;

  std::size_t dim() const { return static_cast<std::size_t>(n_max) + 1; }
  std::size_t stride(int mode) const;
  double norm2() const { return data.squaredNorm(); }
  // 1 - norm^2, meaningful for vectors built from normalized states
  double tail_mass() const { return 1.0 - norm2(); }
};

int cutoff_for(double a);

FockVector to_fock(const CoherentSuperposition& s, int n_max = -1);
FockVector fock_vacuum(int modes, int n_max);

cplx fock_inner(const FockVector& x, const FockVector& y);
double fock_fidelity(const FockVector& x, const FockVector& y);
FockVector fock_normalized(const FockVector& v);

// exp(i theta (a b^dag + a^dag b))
FockVector fock_beamsplitter(const FockVector& v, int mode_a, int mode_b, double theta);
// exp(i theta n)
FockVector fock_phase(const FockVector& v, int mode, double theta);
// exp(beta a^dag - conj(beta) a)
FockVector fock_displace(const FockVector& v, int mode, cplx beta);

std::vector<double> fock_measure_number(const FockVector& v, int mode);
double fock_quadrature_pdf(const FockVector& v, int mode, double x);

// Unnormalized contractions with <n| and <x| on one mode; M-1 modes remain.
FockVector fock_project_number(const FockVector& v, int mode, int n);
FockVector fock_project_quadrature(const FockVector& v, int mode, double x);

// Photon-number first moments of a single-mode vector: <a>, <a^2>, <a^dag a>.
struct Moments {
  cplx a;
  cplx a2;
  double n;
};
Moments fock_moments(const FockVector& v, int mode);

// Hermite functions psi_0..psi_n at x.
std::vector<double> hermite_functions(int n_max, double x);

// Throws CutoffError if more than `limit` of the weight sits in the top
// `band` number states of any mode.
void check_cutoff(const FockVector& v, double limit = 1e-10, int band = 3);

}  // namespace catsim::fock
