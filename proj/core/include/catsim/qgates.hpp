#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "catsim/cstate.hpp"
#include "catsim/measure.hpp"

namespace catsim {

class GateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |0>_L = |-alpha>, |1>_L = |alpha> in `mode`.
struct QubitEncoding {
  double alpha;
  int mode = 0;
};

struct GateRecord {
  std::string element;
  std::string params;
  std::string outcome;
  double probability;
};

struct GateOutcome {
  CoherentSuperposition state;
  bool success;
  std::string applied;
  double probability;
  int repetitions = 1;
  std::vector<GateRecord> trace;
  std::vector<std::string> warnings;
};

struct Decoded {
  cplx mu;
  cplx nu;
  double leakage;
};

inline constexpr int kMaxRepeats = 64;

CoherentSuperposition encode(cplx mu, cplx nu, const QubitEncoding& enc);
// Coefficients in the {|-a>, |a>} basis via the 2x2 Gram system. Single-mode input.
Decoded decode(const CoherentSuperposition& s, const QubitEncoding& enc);

// Register of qubits, qubit i in mode i. Basis index has qubit 0 most significant.
CoherentSuperposition encode_register(const Eigen::VectorXcd& c, double alpha, int qubits);
Eigen::VectorXcd decode_register(const CoherentSuperposition& s, double alpha, double* leakage = nullptr);

CoherentSuperposition gate_x(const CoherentSuperposition& s, const QubitEncoding& enc);
GateOutcome teleport(const CoherentSuperposition& s, const QubitEncoding& enc, std::mt19937_64& rng);
GateOutcome gate_z(const CoherentSuperposition& s, const QubitEncoding& enc, std::mt19937_64& rng);
GateOutcome gate_rz(const CoherentSuperposition& s, const QubitEncoding& enc, double theta, std::mt19937_64& rng);
// Requires 2 theta alpha^2 = pi/2.
GateOutcome gate_rx_pi2(const CoherentSuperposition& s, const QubitEncoding& enc, double theta,
                        std::mt19937_64& rng);
GateOutcome entangling_gate(const CoherentSuperposition& s, const QubitEncoding& enc_a,
                            const QubitEncoding& enc_b, double theta, std::mt19937_64& rng);

// Offline resource for gate_rx_pi2: sum_{x,y} exp(i phi s_x s_y) |x a, y a>.
CoherentSuperposition rx_resource(double alpha, double phi);

// ---- exact channels on decoded coefficients ----

// Linear map on d x d matrices, acting on column-major vec(rho).
struct Superop {
  int d;
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
  Superop then(const Superop& next) const;
  Superop power(int n) const;
};

Superop unitary_superop(const Eigen::MatrixXcd& U);

// Teleportation of arbitrary coherent inputs. Column j of every Kraus map is
// the decoded output for input |inputs[j]>, X corrected, Z branch corrected
// when asked. FAIL is left out.
struct TeleportBranch {
  long n;
  long m;
  BellClass cls;
  Eigen::MatrixXcd K;
};
std::vector<TeleportBranch> teleport_branches(const std::vector<cplx>& inputs, double alpha,
                                              bool correct_z = true);

Superop rz_channel(double alpha, double theta);
Superop entangling_channel(double alpha, double theta);

// Relative phase arg(rho_10) after the exact Rz channel on (|0> + |1>)/sqrt2.
double rz_channel_phase(double alpha, double theta);
// Phases of rho_i0 for i = |-->, |-+>, |+->, |++> after one exact entangling step.
std::array<double, 4> entangling_channel_phases(double alpha, double theta);

// Process fidelity from (input, output) density pairs spanning d x d matrices.
// Output traces are taken as they come, so trace-decreasing maps are rescaled.
double process_fidelity(const std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>>& samples,
                        const Eigen::MatrixXcd& target);
double process_fidelity(const Superop& channel, const Eigen::MatrixXcd& target);

// ---- logical matrices in the {|0>_L, |1>_L} basis ----
namespace logical {
Eigen::Matrix2cd X();
Eigen::Matrix2cd Z();
Eigen::Matrix2cd H();
Eigen::Matrix2cd S();
Eigen::Matrix2cd Rz(double phi);  // diag(1, e^{i phi})
Eigen::Matrix2cd Rx(double phi);  // exp(-i phi X / 2)
Eigen::Matrix2cd Ry(double phi);
Eigen::Matrix4cd cnot();
}  // namespace logical

// Single-qubit dressing that maps the accumulated entangling phase onto CNOT:
// CNOT ~ post * U * pre. Each local gate is its base gate times Rz(p) Ry(q).
struct CnotDressing {
  Eigen::Matrix4cd pre;
  Eigen::Matrix4cd post;
  std::array<double, 8> params{};
  double fidelity = 0.0;
};
CnotDressing analytic_cnot_dressing();
// Nelder-Mead over the 8 parameters, starting from the analytic dressing.
CnotDressing refine_cnot_dressing(const Superop& accumulated, int max_iter = 400);
double dressed_cnot_fidelity(const Superop& accumulated, const CnotDressing& d);

}  // namespace catsim
