#include "catsim/serialize.hpp"

namespace catsim {

nlohmann::json to_json(const CoherentSuperposition& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : s.terms()) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : t.amps) amps.push_back({a.real(), a.imag()});
    terms.push_back({{"coeff_re", t.coeff.real()}, {"coeff_im", t.coeff.imag()}, {"amps", amps}});
  }
  return {{"modes", s.modes()}, {"terms", terms}};
}

CoherentSuperposition state_from_json(const nlohmann::json& j) {
  const int modes = j.at("modes").get<int>();
  std::vector<CoherentTerm> terms;
  for (const auto& jt : j.at("terms")) {
    CoherentTerm t{{jt.at("coeff_re").get<double>(), jt.at("coeff_im").get<double>()}, {}};
    for (const auto& ja : jt.at("amps")) t.amps.emplace_back(ja.at(0).get<double>(), ja.at(1).get<double>());
    terms.push_back(std::move(t));
  }
  return {modes, std::move(terms)};
}

std::string dump_state(const CoherentSuperposition& s) { return to_json(s).dump(); }

CoherentSuperposition parse_state(const std::string& text) {
  return state_from_json(nlohmann::json::parse(text));
}

}  // namespace catsim
