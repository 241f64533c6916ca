#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace catsim {

using cplx = std::complex<double>;

inline constexpr double kMergeTol = 1e-12;
inline constexpr double kDropRel = 1e-14;
inline constexpr double kMinNorm2 = 1e-300;

// Raised when a state (usually a measurement branch) has no weight left.
class ZeroNormError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CoherentTerm {
  cplx coeff;
  std::vector<cplx> amps;
};

// Sum_k c_k |a_k1, ..., a_kM>. Immutable once built.
// An empty term list is the zero vector; it can be built but not normalized.
class CoherentSuperposition {
 public:
  CoherentSuperposition(int modes, std::vector<CoherentTerm> terms);

  int modes() const { return modes_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<CoherentTerm>& terms() const { return terms_; }
  const CoherentTerm& term(std::size_t k) const { return terms_.at(k); }

  // Largest |amplitude| over all terms and modes.
  double max_amplitude() const;

 private:
  int modes_;
  std::vector<CoherentTerm> terms_;
};

cplx coherent_overlap(cplx a, cplx b);
// Product of single-mode overlaps, accumulated in the exponent.
cplx multimode_overlap(const std::vector<cplx>& a, const std::vector<cplx>& b);

Eigen::MatrixXcd gram_matrix(const CoherentSuperposition& s);
cplx inner_product(const CoherentSuperposition& x, const CoherentSuperposition& y);
double squared_norm(const CoherentSuperposition& s);
CoherentSuperposition normalize(const CoherentSuperposition& s);
CoherentSuperposition merge_terms(const CoherentSuperposition& s, double tol = kMergeTol,
                                  double drop_rel = kDropRel);
double fidelity(const CoherentSuperposition& x, const CoherentSuperposition& y);

CoherentSuperposition scale(const CoherentSuperposition& s, cplx factor);
CoherentSuperposition add(const CoherentSuperposition& x, const CoherentSuperposition& y);
CoherentSuperposition tensor(const CoherentSuperposition& x, const CoherentSuperposition& y);

// Contract one mode against a bra given per amplitude: sum_k c_k f(a_km) |rest_k>.
// Result has M-1 modes, is merged and unnormalized. Requires M >= 2.
CoherentSuperposition contract_mode(const CoherentSuperposition& s, int mode,
                                    const std::function<cplx(cplx)>& bra);

// Gram matrix of the state with `mode` removed (all ones when M == 1).
Eigen::MatrixXcd rest_gram(const CoherentSuperposition& s, int mode);

CoherentSuperposition coherent(std::vector<cplx> amps);
CoherentSuperposition vacuum(int modes);
// Normalized |a> + sign |-a>.
CoherentSuperposition cat(cplx a, int sign);

}  // namespace catsim
