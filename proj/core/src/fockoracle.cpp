#include "catsim/fockoracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace catsim::fock {

namespace {

void check_mode(const FockVector& v, int mode) {
  if (mode < 0 || mode >= v.modes)
    throw std::out_of_range("mode " + std::to_string(mode) + " outside [0, " + std::to_string(v.modes) + ")");
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Number-state coefficients of |a> by the ratio recurrence c_n = c_{n-1} a / sqrt(n).
// Starting from exp(-|a|^2/2) keeps every step finite for the amplitudes we use.
Eigen::VectorXcd coherent_column(cplx a, int n_max) {
  Eigen::VectorXcd c(n_max + 1);
  c(0) = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * a / std::sqrt(static_cast<double>(n));
  return c;
}

// Applies a single-mode operator (dim x dim, acting on the number index) to `mode`.
FockVector apply_single(const FockVector& v, int mode, const Eigen::MatrixXcd& op) {
  const std::size_t d = v.dim(), st = v.stride(mode), outer = static_cast<std::size_t>(v.data.size()) / (d * st);
  FockVector out = v;
  Eigen::VectorXcd col(static_cast<Eigen::Index>(d));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < st; ++i) {
      const std::size_t base = o * d * st + i;
      for (std::size_t n = 0; n < d; ++n) col(static_cast<Eigen::Index>(n)) = v.data(static_cast<Eigen::Index>(base + n * st));
      const Eigen::VectorXcd r = op * col;
      for (std::size_t n = 0; n < d; ++n) out.data(static_cast<Eigen::Index>(base + n * st)) = r(static_cast<Eigen::Index>(n));
    }
  return out;
}

// Contract `mode` with the row vector `bra` (indexed by n).
FockVector contract(const FockVector& v, int mode, const Eigen::VectorXcd& bra) {
  check_mode(v, mode);
  if (v.modes < 2) throw std::invalid_argument("contraction needs at least two modes");
  FockVector out;
  out.modes = v.modes - 1;
  out.n_max = v.n_max;
  const std::size_t d = v.dim(), st = v.stride(mode), outer = static_cast<std::size_t>(v.data.size()) / (d * st);
  out.data = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(outer * st));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < st; ++i) {
      cplx acc = 0.0;
      for (std::size_t n = 0; n < d; ++n)
        acc += bra(static_cast<Eigen::Index>(n)) * v.data(static_cast<Eigen::Index>(o * d * st + n * st + i));
      out.data(static_cast<Eigen::Index>(o * st + i)) = acc;
    }
  return out;
}

}  // namespace

std::size_t FockVector::stride(int mode) const { return ipow(dim(), modes - 1 - mode); }

int cutoff_for(double a) { return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0)); }

FockVector fock_vacuum(int modes, int n_max) {
  FockVector v{modes, n_max, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(n_max) + 1, modes)))};
  v.data(0) = 1.0;
  return v;
}

FockVector to_fock(const CoherentSuperposition& s, int n_max) {
  if (n_max < 0) n_max = cutoff_for(s.max_amplitude());
  FockVector v{s.modes(), n_max, {}};
  const std::size_t d = v.dim();
  v.data = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ipow(d, s.modes())));
  for (const auto& t : s.terms()) {
    Eigen::VectorXcd prod = Eigen::VectorXcd::Constant(1, t.coeff);
    for (int m = 0; m < s.modes(); ++m) {
      const auto col = coherent_column(t.amps[m], n_max);
      Eigen::VectorXcd next(prod.size() * col.size());
      for (Eigen::Index i = 0; i < prod.size(); ++i) next.segment(i * col.size(), col.size()) = prod(i) * col;
      prod = std::move(next);
    }
    v.data += prod;
  }
  return v;
}

cplx fock_inner(const FockVector& x, const FockVector& y) {
  if (x.modes != y.modes || x.n_max != y.n_max) throw std::invalid_argument("Fock shape mismatch");
  return x.data.dot(y.data);
}

double fock_fidelity(const FockVector& x, const FockVector& y) { return std::norm(fock_inner(x, y)); }

FockVector fock_normalized(const FockVector& v) {
  FockVector out = v;
  const double n = v.data.norm();
  if (!(n > 0)) throw std::domain_error("zero Fock vector");
  out.data /= n;
  return out;
}

FockVector fock_beamsplitter(const FockVector& v, int mode_a, int mode_b, double theta) {
  check_mode(v, mode_a);
  check_mode(v, mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("beam splitter needs two distinct modes");
  const int nm = v.n_max;
  const std::size_t sa = v.stride(mode_a), sb = v.stride(mode_b), d = v.dim();
  FockVector out = v;
  out.data.setZero();

  // Enumerate every index with n_a = n_b = 0 as a base offset.
  std::vector<std::size_t> bases;
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(v.data.size()); ++idx)
    if ((idx / sa) % d == 0 && (idx / sb) % d == 0) bases.push_back(idx);

  // G = a b^dag + a^dag b conserves n_a + n_b = N. Within a block,
  // basis |k, N-k>, G is tridiagonal with known integer spectrum.
  for (int N = 0; N <= 2 * nm; ++N) {
    const int dimN = N + 1;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dimN, dimN);
    for (int k = 0; k < N; ++k) {
      const double e = std::sqrt(static_cast<double>(k + 1) * (N - k));
      G(k + 1, k) = e;
      G(k, k + 1) = e;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    Eigen::VectorXcd ph(dimN);
    for (int i = 0; i < dimN; ++i) ph(i) = std::polar(1.0, theta * es.eigenvalues()(i));
    const Eigen::MatrixXcd U = es.eigenvectors().cast<cplx>() * ph.asDiagonal() * es.eigenvectors().transpose().cast<cplx>();
    const int kmin = std::max(0, N - nm), kmax = std::min(N, nm);
    for (std::size_t base : bases) {
      Eigen::VectorXcd in = Eigen::VectorXcd::Zero(dimN);
      bool any = false;
      for (int k = kmin; k <= kmax; ++k) {
        in(k) = v.data(static_cast<Eigen::Index>(base + k * sa + (N - k) * sb));
        any = any || in(k) != cplx(0.0);
      }
      if (!any) continue;
      const Eigen::VectorXcd r = U * in;
      for (int k = kmin; k <= kmax; ++k) out.data(static_cast<Eigen::Index>(base + k * sa + (N - k) * sb)) += r(k);
    }
  }
  return out;
}

FockVector fock_phase(const FockVector& v, int mode, double theta) {
  check_mode(v, mode);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(v.n_max + 1, v.n_max + 1);
  for (int n = 0; n <= v.n_max; ++n) op(n, n) = std::polar(1.0, theta * n);
  return apply_single(v, mode, op);
}

FockVector fock_displace(const FockVector& v, int mode, cplx beta) {
  check_mode(v, mode);
  // Exponentiate in a padded space so truncation of the generator does not
  // reach the retained block.
  const int D = v.n_max + 1 + cutoff_for(std::abs(beta)) + 20;
  // H = i (beta a^dag - conj(beta) a) is Hermitian and exp(beta a^dag - ...) = exp(-i H)
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(D, D);
  for (int n = 0; n + 1 < D; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    H(n + 1, n) = cplx(0, 1) * beta * s;
    H(n, n + 1) = -cplx(0, 1) * std::conj(beta) * s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::VectorXcd ph(D);
  for (int i = 0; i < D; ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i));
  const Eigen::MatrixXcd U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  return apply_single(v, mode, U.topLeftCorner(v.n_max + 1, v.n_max + 1));
}

std::vector<double> fock_measure_number(const FockVector& v, int mode) {
  check_mode(v, mode);
  const std::size_t d = v.dim(), st = v.stride(mode);
  std::vector<double> p(d, 0.0);
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(v.data.size()); ++idx)
    p[(idx / st) % d] += std::norm(v.data(static_cast<Eigen::Index>(idx)));
  return p;
}

std::vector<double> hermite_functions(int n_max, double x) {
  std::vector<double> psi(static_cast<std::size_t>(n_max) + 1);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n < n_max; ++n)
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
  return psi;
}

FockVector fock_project_number(const FockVector& v, int mode, int n) {
  Eigen::VectorXcd bra = Eigen::VectorXcd::Zero(v.n_max + 1);
  if (n >= 0 && n <= v.n_max) bra(n) = 1.0;
  return contract(v, mode, bra);
}

FockVector fock_project_quadrature(const FockVector& v, int mode, double x) {
  const auto psi = hermite_functions(v.n_max, x);
  Eigen::VectorXcd bra(v.n_max + 1);
  for (int n = 0; n <= v.n_max; ++n) bra(n) = psi[static_cast<std::size_t>(n)];
  return contract(v, mode, bra);
}

double fock_quadrature_pdf(const FockVector& v, int mode, double x) {
  check_mode(v, mode);
  if (v.modes == 1) {
    const auto psi = hermite_functions(v.n_max, x);
    cplx acc = 0.0;
    for (int n = 0; n <= v.n_max; ++n) acc += psi[static_cast<std::size_t>(n)] * v.data(n);
    return std::norm(acc);
  }
  return fock_project_quadrature(v, mode, x).norm2();
}

Moments fock_moments(const FockVector& v, int mode) {
  check_mode(v, mode);
  const std::size_t d = v.dim(), st = v.stride(mode);
  Moments m{0.0, 0.0, 0.0};
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(v.data.size()); ++idx) {
    const std::size_t n = (idx / st) % d;
    const cplx c = v.data(static_cast<Eigen::Index>(idx));
    m.n += static_cast<double>(n) * std::norm(c);
    if (n + 1 < d) m.a += std::conj(c) * std::sqrt(static_cast<double>(n + 1)) * v.data(static_cast<Eigen::Index>(idx + st));
    if (n + 2 < d)
      m.a2 += std::conj(c) * std::sqrt(static_cast<double>((n + 1) * (n + 2))) *
              v.data(static_cast<Eigen::Index>(idx + 2 * st));
  }
  return m;
}

void check_cutoff(const FockVector& v, double limit, int band) {
  for (int mode = 0; mode < v.modes; ++mode) {
    const auto p = fock_measure_number(v, mode);
    double top = 0.0;
    for (int n = std::max(0, v.n_max - band + 1); n <= v.n_max; ++n) top += p[static_cast<std::size_t>(n)];
    if (top > limit)
      throw CutoffError("Fock cutoff " + std::to_string(v.n_max) + " too small on mode " + std::to_string(mode));
  }
}

}  // namespace catsim::fock
