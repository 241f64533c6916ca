#include "catsim/optics.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace catsim {

namespace {

void check_mode(const CoherentSuperposition& s, int mode) {
  if (mode < 0 || mode >= s.modes())
    throw std::out_of_range("mode " + std::to_string(mode) + " outside [0, " +
                            std::to_string(s.modes()) + ")");
}

}  // namespace

CoherentSuperposition beamsplitter(const CoherentSuperposition& s, const BeamSplitterSpec& spec) {
  check_mode(s, spec.mode_a);
  check_mode(s, spec.mode_b);
  if (spec.mode_a == spec.mode_b) throw std::invalid_argument("beam splitter needs two distinct modes");
  const double c = std::cos(spec.theta), sn = std::sin(spec.theta);
  const cplx is(0.0, sn);
  auto terms = s.terms();
  for (auto& t : terms) {
    const cplx g = t.amps[spec.mode_a], b = t.amps[spec.mode_b];
    t.amps[spec.mode_a] = g * c + is * b;
    t.amps[spec.mode_b] = b * c + is * g;
  }
  return {s.modes(), std::move(terms)};
}

CoherentSuperposition phase_shift(const CoherentSuperposition& s, int mode, double theta) {
  check_mode(s, mode);
  const cplx ph = std::polar(1.0, theta);
  auto terms = s.terms();
  for (auto& t : terms) t.amps[mode] *= ph;
  return {s.modes(), std::move(terms)};
}

CoherentSuperposition displace(const CoherentSuperposition& s, int mode, cplx beta) {
  check_mode(s, mode);
  auto terms = s.terms();
  for (auto& t : terms) {
    const cplx a = t.amps[mode];
    t.coeff *= std::exp(0.5 * (beta * std::conj(a) - std::conj(beta) * a));
    t.amps[mode] = a + beta;
  }
  return {s.modes(), std::move(terms)};
}

CoherentSuperposition displace_physical(const CoherentSuperposition& s, int mode, cplx beta,
                                        double strong_amp) {
  check_mode(s, mode);
  if (!(strong_amp > 0)) throw std::invalid_argument("strong_amp must be positive");
  const double theta = std::abs(beta) / strong_amp;
  const cplx lo = std::polar(strong_amp, std::arg(beta) - std::numbers::pi / 2);
  const int anc = s.modes();
  auto joint = tensor(s, coherent({lo}));
  joint = beamsplitter(joint, {mode, anc, theta});
  const cplx nominal = lo * std::cos(theta);
  return normalize(contract_mode(joint, anc, [&](cplx a) { return coherent_overlap(nominal, a); }));
}

CoherentSuperposition nport_split(const CoherentSuperposition& s, int mode, int N) {
  check_mode(s, mode);
  if (N < 1) throw std::invalid_argument("nport_split needs N >= 1");
  const double f = 1.0 / std::sqrt(static_cast<double>(N));
  auto terms = s.terms();
  for (auto& t : terms) {
    const cplx a = t.amps[mode] * f;
    t.amps[mode] = a;
    t.amps.insert(t.amps.end(), static_cast<std::size_t>(N - 1), a);
  }
  return {s.modes() + N - 1, std::move(terms)};
}

CoherentSuperposition nport_split_tree(const CoherentSuperposition& s, int mode, int N) {
  check_mode(s, mode);
  if (N < 1 || !std::has_single_bit(static_cast<unsigned>(N)))
    throw std::invalid_argument("tree splitter needs N a power of two");
  auto out = tensor(s, vacuum(N - 1));
  std::vector<int> active{mode};
  int next = s.modes();
  while (static_cast<int>(active.size()) < N) {
    std::vector<int> grown;
    for (int m : active) {
      const int fresh = next++;
      out = beamsplitter(out, {m, fresh, std::numbers::pi / 4});
      out = phase_shift(out, fresh, -std::numbers::pi / 2);
      grown.push_back(m);
      grown.push_back(fresh);
    }
    active = grown;
  }
  return out;
}

CoherentSuperposition bell_cat_resource(double alpha) {
  auto s = tensor(cat(std::sqrt(2.0) * alpha, 1), vacuum(1));
  s = beamsplitter(s, {0, 1, std::numbers::pi / 4});
  return phase_shift(s, 1, -std::numbers::pi / 2);
}

CoherentSuperposition bell_cat(double alpha, int which) {
  if (which < 1 || which > 4) throw std::invalid_argument("Bell-cat index must be 1..4");
  const double sign = (which % 2 == 1) ? 1.0 : -1.0;
  const double b = (which <= 2) ? alpha : -alpha;
  return normalize({2, {{1.0, {alpha, b}}, {sign, {-alpha, -b}}}});
}

CoherentSuperposition ghz_cat(double alpha, int N) {
  if (N < 1) throw std::invalid_argument("ghz_cat needs N >= 1");
  return nport_split(cat(alpha, 1), 0, N);
}

}  // namespace catsim
