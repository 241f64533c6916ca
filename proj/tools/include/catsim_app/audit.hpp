#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace catsim::app {

struct AuditConfig {
  double alpha_max = 3.0;  // bound on the l2 norm of each term's amplitude vector
  int cases = 240;         // spread round-robin over the registered properties
  int max_modes = 3;
  int max_terms = 8;
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

struct AuditCase {
  std::string property;
  int index = 0;
  int modes = 0;
  int terms = 0;
  double error = 0.0;  // infidelity or absolute probability mismatch, whichever is larger
  bool pass = false;
};

struct AuditProperty {
  std::string name;
  std::function<AuditCase(std::mt19937_64&, const AuditConfig&)> check;
};

const std::vector<AuditProperty>& audit_properties();

// Case i runs property i mod P with its own generator seeded by seed ^ i.
AuditCase run_audit_case(const AuditConfig& cfg, int index);
std::vector<AuditCase> run_audit(const AuditConfig& cfg, int threads = 1);

}  // namespace catsim::app
