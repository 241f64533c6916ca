#include "catsim/cstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace catsim {

namespace {

cplx overlap_exponent(cplx a, cplx b) {
  return -0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b;
}

void check_mode(const CoherentSuperposition& s, int mode) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("mode " + std::to_string(mode) + " outside [0, " +
                            std::to_string(s.modes()) + ")");
}

}  // namespace

CoherentSuperposition::CoherentSuperposition(int modes, std::vector<CoherentTerm> terms)
    : modes_(modes), terms_(std::move(terms)) {
  if (modes_ < 1) throw std::invalid_argument("mode count must be positive");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.amps.size()) != modes_)
      throw std::invalid_argument("term amplitude count does not match mode count");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw std::invalid_argument("non-finite coefficient");
    for (const auto& a : t.amps)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw std::invalid_argument("non-finite amplitude");
  }
}

double CoherentSuperposition::max_amplitude() const {
  double m = 0.0;
  for (const auto& t : terms_)
    for (const auto& a : t.amps) m = std::max(m, std::abs(a));
  return m;
}

cplx coherent_overlap(cplx a, cplx b) { return std::exp(overlap_exponent(a, b)); }

cplx multimode_overlap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("mode count mismatch");
  cplx e = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) e += overlap_exponent(a[m], b[m]);
  return std::exp(e);
}

Eigen::MatrixXcd gram_matrix(const CoherentSuperposition& s) {
  const auto K = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXcd g(K, K);
  for (Eigen::Index j = 0; j < K; ++j) {
    g(j, j) = multimode_overlap(s.term(j).amps, s.term(j).amps);
    for (Eigen::Index k = j + 1; k < K; ++k) {
      g(j, k) = multimode_overlap(s.term(j).amps, s.term(k).amps);
      g(k, j) = std::conj(g(j, k));
    }
  }
  return g;
}

cplx inner_product(const CoherentSuperposition& x, const CoherentSuperposition& y) {
  if (x.modes() != y.modes()) throw std::invalid_argument("mode count mismatch");
  cplx acc = 0.0;
  for (const auto& tx : x.terms())
    for (const auto& ty : y.terms())
      acc += std::conj(tx.coeff) * ty.coeff * multimode_overlap(tx.amps, ty.amps);
  return acc;
}

double squared_norm(const CoherentSuperposition& s) {
  const auto g = gram_matrix(s);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) c(static_cast<Eigen::Index>(k)) = s.term(k).coeff;
  return std::max(0.0, c.dot(g * c).real());
}

CoherentSuperposition scale(const CoherentSuperposition& s, cplx factor) {
  auto terms = s.terms();
  for (auto& t : terms) t.coeff *= factor;
  return {s.modes(), std::move(terms)};
}

CoherentSuperposition normalize(const CoherentSuperposition& s) {
  const double n2 = squared_norm(s);
  if (!(n2 > kMinNorm2)) throw ZeroNormError("cannot normalize a zero-norm state");
  return scale(s, 1.0 / std::sqrt(n2));
}

CoherentSuperposition merge_terms(const CoherentSuperposition& s, double tol, double drop_rel) {
  if (tol < 0) throw std::invalid_argument("merge tolerance must be non-negative");
  std::vector<CoherentTerm> out;
  for (const auto& t : s.terms()) {
    bool merged = false;
    for (auto& o : out) {
      double dist = 0.0;
      for (int m = 0; m < s.modes(); ++m) dist = std::max(dist, std::abs(t.amps[m] - o.amps[m]));
      if (dist < tol || (tol == 0.0 && dist == 0.0)) {
        // |a + d> ~ exp(i Im(d conj(a))) D(d)|a>: keep the displacement phase
        double ph = 0.0;
        for (int m = 0; m < s.modes(); ++m)
          ph += std::imag((t.amps[m] - o.amps[m]) * std::conj(o.amps[m]));
        o.coeff += t.coeff * std::polar(1.0, ph);
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(t);
  }
  double cmax = 0.0;
  for (const auto& o : out) cmax = std::max(cmax, std::abs(o.coeff));
  std::erase_if(out, [&](const CoherentTerm& o) {
    return std::abs(o.coeff) <= drop_rel * cmax || o.coeff == cplx(0.0);
  });
  return {s.modes(), std::move(out)};
}

double fidelity(const CoherentSuperposition& x, const CoherentSuperposition& y) {
  return std::norm(inner_product(x, y));
}

CoherentSuperposition add(const CoherentSuperposition& x, const CoherentSuperposition& y) {
  if (x.modes() != y.modes()) throw std::invalid_argument("mode count mismatch");
  auto terms = x.terms();
  terms.insert(terms.end(), y.terms().begin(), y.terms().end());
  return merge_terms({x.modes(), std::move(terms)});
}

CoherentSuperposition tensor(const CoherentSuperposition& x, const CoherentSuperposition& y) {
  std::vector<CoherentTerm> terms;
  terms.reserve(x.size() * y.size());
  for (const auto& tx : x.terms())
    for (const auto& ty : y.terms()) {
      CoherentTerm t{tx.coeff * ty.coeff, tx.amps};
      t.amps.insert(t.amps.end(), ty.amps.begin(), ty.amps.end());
      terms.push_back(std::move(t));
    }
  return {x.modes() + y.modes(), std::move(terms)};
}

CoherentSuperposition contract_mode(const CoherentSuperposition& s, int mode,
                                    const std::function<cplx(cplx)>& bra) {
  check_mode(s, mode);
  if (s.modes() < 2) throw std::invalid_argument("contract_mode needs at least two modes");
  std::vector<CoherentTerm> terms;
  terms.reserve(s.size());
  for (const auto& t : s.terms()) {
    CoherentTerm r{t.coeff * bra(t.amps[mode]), {}};
    for (int m = 0; m < s.modes(); ++m)
      if (m != mode) r.amps.push_back(t.amps[m]);
    terms.push_back(std::move(r));
  }
  return merge_terms({s.modes() - 1, std::move(terms)});
}

Eigen::MatrixXcd rest_gram(const CoherentSuperposition& s, int mode) {
  check_mode(s, mode);
  const auto K = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXcd g(K, K);
  for (Eigen::Index j = 0; j < K; ++j)
    for (Eigen::Index k = j; k < K; ++k) {
      cplx e = 0.0;
      for (int m = 0; m < s.modes(); ++m)
        if (m != mode) e += overlap_exponent(s.term(j).amps[m], s.term(k).amps[m]);
      g(j, k) = std::exp(e);
      g(k, j) = std::conj(g(j, k));
    }
  return g;
}

CoherentSuperposition coherent(std::vector<cplx> amps) {
  const int M = static_cast<int>(amps.size());
  return {M, {CoherentTerm{1.0, std::move(amps)}}};
}

CoherentSuperposition vacuum(int modes) {
  return coherent(std::vector<cplx>(static_cast<std::size_t>(std::max(modes, 0)), 0.0));
}

CoherentSuperposition cat(cplx a, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("cat sign must be +1 or -1");
  return normalize({1, {{1.0, {a}}, {static_cast<double>(sign), {-a}}}});
}

}  // namespace catsim
