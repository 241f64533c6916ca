#include "catsim/qgates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <gsl/gsl_multimin.h>

#include "catsim/optics.hpp"

namespace catsim {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Moves mode `from` to position `to`, shifting the others.
CoherentSuperposition move_mode(const CoherentSuperposition& s, int from, int to) {
  if (from == to) return s;
  auto terms = s.terms();
  for (auto& t : terms) {
    const cplx a = t.amps[static_cast<std::size_t>(from)];
    t.amps.erase(t.amps.begin() + from);
    t.amps.insert(t.amps.begin() + to, a);
  }
  return {s.modes(), std::move(terms)};
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

void check_alpha(double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("qubit amplitude alpha must be positive");
}

// Teleport, then undo a Z branch by repeating teleportation until Z lands.
GateOutcome teleport_corrected(const CoherentSuperposition& s, const QubitEncoding& enc, std::mt19937_64& rng) {
  auto t = teleport(s, enc, rng);
  if (!t.success || t.applied != "Z") return t;
  auto z = gate_z(t.state, enc, rng);
  z.trace.insert(z.trace.begin(), t.trace.begin(), t.trace.end());
  z.probability *= t.probability;
  z.repetitions += t.repetitions;
  if (z.success) z.applied = "identity";
  return z;
}

void absorb(GateOutcome& into, const GateOutcome& part) {
  into.trace.insert(into.trace.end(), part.trace.begin(), part.trace.end());
  into.probability *= part.probability;
  into.repetitions += part.repetitions;
  into.warnings.insert(into.warnings.end(), part.warnings.begin(), part.warnings.end());
}

}  // namespace

CoherentSuperposition encode(cplx mu, cplx nu, const QubitEncoding& enc) {
  check_alpha(enc.alpha);
  if (mu == cplx(0.0) && nu == cplx(0.0)) throw std::invalid_argument("cannot encode the zero vector");
  return normalize(merge_terms({1, {{mu, {-enc.alpha}}, {nu, {enc.alpha}}}}));
}

Decoded decode(const CoherentSuperposition& s, const QubitEncoding& enc) {
  check_alpha(enc.alpha);
  if (s.modes() != 1) throw std::invalid_argument("decode expects a single-mode state");
  const double g = std::exp(-2.0 * enc.alpha * enc.alpha);
  const double det = 1.0 - g * g;
  if (det < 1e-14) throw std::domain_error("qubit Gram system is singular");
  const cplx b0 = inner_product(coherent({-enc.alpha}), s);
  const cplx b1 = inner_product(coherent({enc.alpha}), s);
  const cplx mu = (b0 - g * b1) / det, nu = (b1 - g * b0) / det;
  const double proj = std::norm(mu) + std::norm(nu) + 2.0 * g * std::real(std::conj(mu) * nu);
  return {mu, nu, std::max(0.0, squared_norm(s) - proj)};
}

CoherentSuperposition encode_register(const Eigen::VectorXcd& c, double alpha, int qubits) {
  check_alpha(alpha);
  if (c.size() != (Eigen::Index{1} << qubits)) throw std::invalid_argument("coefficient count must be 2^qubits");
  std::vector<CoherentTerm> terms;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    CoherentTerm t{c(i), {}};
    for (int q = 0; q < qubits; ++q) t.amps.emplace_back((i >> (qubits - 1 - q)) & 1 ? alpha : -alpha);
    terms.push_back(std::move(t));
  }
  return normalize(merge_terms({qubits, std::move(terms)}));
}

Eigen::VectorXcd decode_register(const CoherentSuperposition& s, double alpha, double* leakage) {
  check_alpha(alpha);
  const int q = s.modes();
  const Eigen::Index D = Eigen::Index{1} << q;
  const double g = std::exp(-2.0 * alpha * alpha);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Ones(1, 1);
  Eigen::Matrix2cd g1;
  g1 << 1.0, g, g, 1.0;
  for (int k = 0; k < q; ++k) G = kron(G, g1);
  Eigen::VectorXcd b(D);
  for (Eigen::Index i = 0; i < D; ++i) {
    std::vector<cplx> amps;
    for (int m = 0; m < q; ++m) amps.emplace_back((i >> (q - 1 - m)) & 1 ? alpha : -alpha);
    b(i) = inner_product(coherent(amps), s);
  }
  const Eigen::VectorXcd c = G.ldlt().solve(b);
  if (leakage) *leakage = std::max(0.0, squared_norm(s) - c.dot(G * c).real());
  return c;
}

CoherentSuperposition gate_x(const CoherentSuperposition& s, const QubitEncoding& enc) {
  return phase_shift(s, enc.mode, std::numbers::pi);
}

GateOutcome teleport(const CoherentSuperposition& s, const QubitEncoding& enc, std::mt19937_64& rng) {
  check_alpha(enc.alpha);
  const int M = s.modes();
  const auto joint = tensor(s, bell_cat_resource(enc.alpha));
  const auto bc = bell_count_sample(joint, enc.mode, M, rng);
  GateOutcome out{s, false, "FAIL", bc.probability, 1, {}, {}};
  out.trace.push_back({"bell_count", "alpha=" + num(enc.alpha),
                       "n=" + std::to_string(bc.n) + ",m=" + std::to_string(bc.m) + "," + to_string(bc.cls),
                       bc.probability});
  if (bc.cls == BellClass::FAIL) return out;
  auto st = move_mode(*bc.conditioned, M - 1, enc.mode);
  if (bc.cls == BellClass::III || bc.cls == BellClass::IV) {
    st = gate_x(st, enc);
    out.trace.push_back({"X", "", "", 1.0});
  }
  out.state = st;
  out.success = true;
  out.applied = (bc.cls == BellClass::II || bc.cls == BellClass::IV) ? "Z" : "identity";
  return out;
}

GateOutcome gate_z(const CoherentSuperposition& s, const QubitEncoding& enc, std::mt19937_64& rng) {
  GateOutcome acc{s, false, "repeat-limit", 1.0, 0, {}, {}};
  auto cur = s;
  for (int rep = 0; rep < kMaxRepeats; ++rep) {
    auto t = teleport(cur, enc, rng);
    absorb(acc, t);
    acc.state = t.state;
    if (!t.success) {
      acc.applied = "FAIL";
      return acc;
    }
    if (t.applied == "Z") {
      acc.success = true;
      acc.applied = "Z";
      return acc;
    }
    cur = t.state;
  }
  return acc;
}

GateOutcome gate_rz(const CoherentSuperposition& s, const QubitEncoding& enc, double theta, std::mt19937_64& rng) {
  check_alpha(enc.alpha);
  GateOutcome acc{s, false, "FAIL", 1.0, 0, {}, {}};
  const double a2 = enc.alpha * enc.alpha;
  if (theta * theta * a2 > 0.05)
    acc.warnings.push_back("theta^2 alpha^2 = " + num(theta * theta * a2) + " exceeds 0.05; gate far from deterministic");
  const cplx beta(0.0, enc.alpha * theta);
  const auto shifted = displace(s, enc.mode, beta);
  acc.trace.push_back({"displace", "beta_im=" + num(beta.imag()), "", 1.0});
  const auto t = teleport_corrected(shifted, enc, rng);
  absorb(acc, t);
  acc.state = t.state;
  acc.success = t.success;
  acc.applied = t.success ? "Rz(" + num(4.0 * theta * a2) + ")" : t.applied;
  return acc;
}

CoherentSuperposition rx_resource(double alpha, double phi) {
  check_alpha(alpha);
  std::vector<CoherentTerm> terms;
  for (int x : {-1, 1})
    for (int y : {-1, 1}) terms.push_back({std::polar(1.0, phi * x * y), {x * alpha, y * alpha}});
  return normalize({2, std::move(terms)});
}

GateOutcome gate_rx_pi2(const CoherentSuperposition& s, const QubitEncoding& enc, double theta, std::mt19937_64& rng) {
  check_alpha(enc.alpha);
  const double phi = theta * enc.alpha * enc.alpha;
  if (std::abs(2.0 * phi - std::numbers::pi / 2) > 1e-9)
    throw std::invalid_argument("gate_rx_pi2 needs 2 theta alpha^2 = pi/2");
  const int M = s.modes();
  const auto joint = tensor(s, rx_resource(enc.alpha, phi));
  const auto rec = bell_measurement(joint, enc.mode, M, rng);
  const auto cls = std::get<BellClass>(rec.outcome);
  GateOutcome acc{s, false, "FAIL", rec.probability, 1, {}, {}};
  acc.trace.push_back({"bell_parity", "alpha=" + num(enc.alpha) + ",phi=" + num(phi), to_string(cls), rec.probability});
  if (cls == BellClass::FAIL) return acc;
  auto st = move_mode(*rec.conditioned, M - 1, enc.mode);
  // byproduct P becomes U P U^dag after the rotation: Z -> Y, X -> X, XZ -> Z
  const bool need_x = cls == BellClass::II || cls == BellClass::III;
  const bool need_z = cls == BellClass::II || cls == BellClass::IV;
  if (need_x) {
    st = gate_x(st, enc);
    acc.trace.push_back({"X", "", "", 1.0});
  }
  acc.state = st;
  acc.success = true;
  acc.applied = "Rx(pi/2)";
  if (need_z) {
    const auto z = gate_z(st, enc, rng);
    absorb(acc, z);
    acc.state = z.state;
    acc.success = z.success;
    if (!z.success) acc.applied = z.applied;
  }
  return acc;
}

GateOutcome entangling_gate(const CoherentSuperposition& s, const QubitEncoding& enc_a, const QubitEncoding& enc_b,
                            double theta, std::mt19937_64& rng) {
  check_alpha(enc_a.alpha);
  check_alpha(enc_b.alpha);
  GateOutcome acc{s, false, "FAIL", 1.0, 0, {}, {}};
  const auto mixed = beamsplitter(s, {enc_a.mode, enc_b.mode, theta / 2});
  acc.trace.push_back({"beamsplitter", "theta=" + num(theta / 2), "", 1.0});
  const auto ta = teleport_corrected(mixed, enc_a, rng);
  absorb(acc, ta);
  acc.state = ta.state;
  if (!ta.success) return acc;
  const auto tb = teleport_corrected(ta.state, enc_b, rng);
  absorb(acc, tb);
  acc.state = tb.state;
  acc.success = tb.success;
  acc.applied = tb.success ? "entangle(" + num(theta) + ")" : tb.applied;
  return acc;
}

// ---- exact channels ----

Eigen::MatrixXcd Superop::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  Eigen::VectorXcd r = S * v;
  return Eigen::Map<Eigen::MatrixXcd>(r.data(), d, d);
}

Superop Superop::then(const Superop& next) const {
  if (next.d != d) throw std::invalid_argument("superoperator dimension mismatch");
  return {d, next.S * S};
}

Superop Superop::power(int n) const {
  if (n < 0) throw std::invalid_argument("negative power");
  Superop result{d, Eigen::MatrixXcd::Identity(S.rows(), S.cols())};
  Superop base = *this;
  while (n > 0) {
    if (n & 1) result.S = base.S * result.S;
    base.S = base.S * base.S;
    n >>= 1;
  }
  return result;
}

Superop unitary_superop(const Eigen::MatrixXcd& U) {
  return {static_cast<int>(U.rows()), kron(U.conjugate(), U)};
}

std::vector<TeleportBranch> teleport_branches(const std::vector<cplx>& inputs, double alpha, bool correct_z) {
  check_alpha(alpha);
  const auto res = bell_cat_resource(alpha);
  struct Leg {
    cplx coeff, A, B;
    int row;
  };
  std::vector<std::vector<Leg>> legs(inputs.size());
  double amax = 0.0, bmax = 0.0;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const auto u = bell_unmix(tensor(coherent({inputs[j]}), res), 0, 1);
    for (const auto& t : u.terms()) {
      legs[j].push_back({t.coeff, t.amps[0], t.amps[1], t.amps[2].real() < 0 ? 0 : 1});
      amax = std::max(amax, std::abs(t.amps[0]));
      bmax = std::max(bmax, std::abs(t.amps[1]));
    }
  }
  const int nA = default_cutoff(amax), nB = default_cutoff(bmax);
  std::vector<TeleportBranch> out;
  for (long n = 0; n <= nA; ++n)
    for (long m = 0; m <= nB; ++m) {
      const BellClass cls = classify_counts(n, m);
      if (cls == BellClass::FAIL) continue;
      const bool flip = cls == BellClass::III || cls == BellClass::IV;
      const bool zb = cls == BellClass::II || cls == BellClass::IV;
      Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(2, static_cast<Eigen::Index>(inputs.size()));
      for (std::size_t j = 0; j < inputs.size(); ++j)
        for (const auto& l : legs[j]) {
          const int row = flip ? 1 - l.row : l.row;
          K(row, static_cast<Eigen::Index>(j)) += l.coeff * fock_amplitude(n, l.A) * fock_amplitude(m, l.B);
        }
      if (correct_z && zb) K.row(1) *= -1.0;
      if (K.cwiseAbs().maxCoeff() > 1e-150) out.push_back({n, m, cls, std::move(K)});
    }
  return out;
}

Superop rz_channel(double alpha, double theta) {
  const cplx beta(0.0, alpha * theta);
  std::vector<cplx> inputs;
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  for (int j = 0; j < 2; ++j) {
    // route each logical basis state through the same displacement code path
    const auto d = displace(coherent({j == 0 ? -alpha : alpha}), 0, beta);
    inputs.push_back(d.term(0).amps[0]);
    D(j, j) = d.term(0).coeff;
  }
  Superop ch{2, Eigen::MatrixXcd::Zero(4, 4)};
  for (const auto& b : teleport_branches(inputs, alpha, true)) {
    const Eigen::MatrixXcd K = b.K * D;
    ch.S += kron(K.conjugate(), K);
  }
  return ch;
}

Superop entangling_channel(double alpha, double theta) {
  std::vector<cplx> ua, ub;
  for (int p = 0; p < 4; ++p) {
    const double xa = (p >> 1) ? alpha : -alpha, xb = (p & 1) ? alpha : -alpha;
    const auto mixed = beamsplitter(coherent({xa, xb}), {0, 1, theta / 2});
    ua.push_back(mixed.term(0).amps[0]);
    ub.push_back(mixed.term(0).amps[1]);
  }
  // A[z][w](p, q) = sum_K K(z,p) conj(K(w,q)); the two teleports are independent
  auto accumulate = [&](const std::vector<cplx>& in) {
    std::array<std::array<Eigen::Matrix4cd, 2>, 2> A;
    for (auto& row : A)
      for (auto& a : row) a.setZero();
    for (const auto& b : teleport_branches(in, alpha, true))
      for (int z = 0; z < 2; ++z)
        for (int w = 0; w < 2; ++w) A[z][w] += b.K.row(z).transpose() * b.K.row(w).conjugate();
    return A;
  };
  const auto A = accumulate(ua), B = accumulate(ub);
  Superop ch{4, Eigen::MatrixXcd::Zero(16, 16)};
  for (int z = 0; z < 2; ++z)
    for (int Z = 0; Z < 2; ++Z)
      for (int w = 0; w < 2; ++w)
        for (int W = 0; W < 2; ++W) {
          const int i = 2 * z + Z, j = 2 * w + W;
          for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q) ch.S(i + 4 * j, p + 4 * q) = A[z][w](p, q) * B[Z][W](p, q);
        }
  return ch;
}

double rz_channel_phase(double alpha, double theta) {
  Eigen::Vector2cd c(1.0, 1.0);
  const Eigen::MatrixXcd rho = rz_channel(alpha, theta).apply(c * c.adjoint() / 2.0);
  return std::arg(rho(1, 0));
}

std::array<double, 4> entangling_channel_phases(double alpha, double theta) {
  Eigen::Vector4cd c = Eigen::Vector4cd::Constant(0.5);
  const Eigen::MatrixXcd rho = entangling_channel(alpha, theta).apply(c * c.adjoint());
  return {std::arg(rho(0, 0)), std::arg(rho(1, 0)), std::arg(rho(2, 0)), std::arg(rho(3, 0))};
}

double process_fidelity(const std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>>& samples,
                        const Eigen::MatrixXcd& target) {
  const auto d = target.rows();
  Eigen::MatrixXcd A(d * d, static_cast<Eigen::Index>(samples.size()));
  Eigen::MatrixXcd B(d * d, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& [in, out] = samples[k];
    if (in.rows() != d || out.rows() != d) throw std::invalid_argument("sample dimension mismatch");
    A.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXcd>(in.data(), d * d);
    B.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXcd>(out.data(), d * d);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  lu.setThreshold(1e-10);
  if (lu.rank() < d * d) throw std::invalid_argument("input set does not span the operator space");
  const Eigen::MatrixXcd S = B * A.completeOrthogonalDecomposition().pseudoInverse();
  return process_fidelity(Superop{static_cast<int>(d), S}, target);
}

double process_fidelity(const Superop& channel, const Eigen::MatrixXcd& target) {
  const int d = channel.d;
  if (target.rows() != d || target.cols() != d) throw std::invalid_argument("target dimension mismatch");
  cplx F = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(d, d);
      E(i, j) = 1.0;
      F += target.col(i).dot(channel.apply(E) * target.col(j));
    }
  const double tr = channel.apply(Eigen::MatrixXcd::Identity(d, d) / d).trace().real();
  return std::clamp(F.real() / (d * d) / tr, 0.0, 1.0);
}

namespace logical {
Eigen::Matrix2cd X() { return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(); }
Eigen::Matrix2cd Z() { return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(); }
Eigen::Matrix2cd H() { return (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0); }
Eigen::Matrix2cd S() { return (Eigen::Matrix2cd() << 1, 0, 0, cplx(0, 1)).finished(); }
Eigen::Matrix2cd Rz(double phi) { return (Eigen::Matrix2cd() << 1, 0, 0, std::polar(1.0, phi)).finished(); }
Eigen::Matrix2cd Rx(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return (Eigen::Matrix2cd() << c, cplx(0, -s), cplx(0, -s), c).finished();
}
Eigen::Matrix2cd Ry(double phi) {
  const double c = std::cos(phi / 2), s = std::sin(phi / 2);
  return (Eigen::Matrix2cd() << c, -s, s, c).finished();
}
Eigen::Matrix4cd cnot() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}
}  // namespace logical

namespace {

CnotDressing dressing_from(const std::array<double, 8>& p) {
  using namespace logical;
  const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd base[4] = {I, H(), S(), H() * S()};
  Eigen::Matrix2cd L[4];
  for (int k = 0; k < 4; ++k) L[k] = base[k] * Rz(p[2 * k]) * Ry(p[2 * k + 1]);
  CnotDressing d;
  d.pre = kron(L[0], L[1]);
  d.post = kron(L[2], L[3]);
  d.params = p;
  return d;
}

struct FitData {
  const Superop* acc;
};

double nm_cost(const gsl_vector* x, void* data) {
  std::array<double, 8> p{};
  for (std::size_t i = 0; i < 8; ++i) p[i] = gsl_vector_get(x, i);
  const auto* f = static_cast<FitData*>(data);
  return 1.0 - dressed_cnot_fidelity(*f->acc, dressing_from(p));
}

}  // namespace

double dressed_cnot_fidelity(const Superop& accumulated, const CnotDressing& d) {
  const auto chain = unitary_superop(d.pre).then(accumulated).then(unitary_superop(d.post));
  return process_fidelity(chain, logical::cnot());
}

CnotDressing analytic_cnot_dressing() { return dressing_from({}); }

CnotDressing refine_cnot_dressing(const Superop& accumulated, int max_iter) {
  FitData data{&accumulated};
  gsl_multimin_function fn{&nm_cost, 8, &data};
  gsl_vector* x = gsl_vector_calloc(8);
  gsl_vector* step = gsl_vector_alloc(8);
  gsl_vector_set_all(step, 0.02);
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 8);
  gsl_multimin_fminimizer_set(m, &fn, x, step);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(m)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-9) == GSL_SUCCESS) break;
  }
  std::array<double, 8> p{};
  for (std::size_t i = 0; i < 8; ++i) p[i] = gsl_vector_get(m->x, i);
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  auto best = dressing_from(p);
  best.fidelity = dressed_cnot_fidelity(accumulated, best);
  auto start = analytic_cnot_dressing();
  start.fidelity = dressed_cnot_fidelity(accumulated, start);
  return best.fidelity >= start.fidelity ? best : start;
}

}  // namespace catsim
