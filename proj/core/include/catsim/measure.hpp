#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "catsim/cstate.hpp"

namespace catsim {

class UnsupportedStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ParityClass { zero, even_nonzero, odd };
enum class BellClass { I, II, III, IV, FAIL };

struct PhotonCount {
  long n;
};
struct Homodyne {
  double x;
  double density;
};

using Outcome = std::variant<PhotonCount, ParityClass, Homodyne, BellClass>;

struct MeasurementRecord {
  std::vector<int> modes;
  Outcome outcome;
  // Homodyne records carry the mass of the grid cell around x here; the
  // density itself sits in the outcome.
  double probability = 0.0;
  std::optional<CoherentSuperposition> conditioned;

  std::string kind() const;
  std::string value() const;
};

const char* to_string(ParityClass c);
const char* to_string(BellClass c);

// <n|a> = exp(-|a|^2/2) a^n / sqrt(n!), evaluated in logs.
cplx fock_amplitude(long n, cplx a);

// ceil(a^2 + 10 a + 20)
int default_cutoff(double a);

std::vector<double> photon_statistics(const CoherentSuperposition& s, int mode, int n_max = -1);
MeasurementRecord project_photon_number(const CoherentSuperposition& s, int mode, long n);

// Order: zero, even_nonzero, odd. The mode's amplitudes must lie in {a, -a, 0}.
std::array<MeasurementRecord, 3> parity_projection(const CoherentSuperposition& s, int mode);

// <x|a> for x = (a + a^dag)/sqrt2.
cplx quadrature_wavefunction(double x, cplx a);
double homodyne_pdf(const CoherentSuperposition& s, int mode, double x);

struct HomodyneGrid {
  int points = 4096;
  double margin = 8.0;
};

MeasurementRecord homodyne_condition(const CoherentSuperposition& s, int mode, double x,
                                     double dx = 0.0);
MeasurementRecord homodyne_sample(const CoherentSuperposition& s, int mode, std::mt19937_64& rng,
                                  HomodyneGrid grid = {});

// Undo the Bell-cat preparation: +pi/2 on mode_b, then a -pi/4 splitter.
// (u, v) -> ((u + v)/sqrt2, i (v - u)/sqrt2)
CoherentSuperposition bell_unmix(const CoherentSuperposition& s, int mode_a, int mode_b);

// All five classes in the order I, II, III, IV, FAIL. Both modes must carry
// amplitudes in {a, -a}. FAIL keeps its conditioned state only if asked.
std::array<MeasurementRecord, 5> bell_outcomes(const CoherentSuperposition& s, int mode_a, int mode_b,
                                               bool keep_fail_state = false);
MeasurementRecord bell_measurement(const CoherentSuperposition& s, int mode_a, int mode_b,
                                   std::mt19937_64& rng, bool keep_fail_state = false);

// Photon-number resolved version, valid for any input: count n on the first
// unmixed port and m on the second.
struct BellCount {
  long n;
  long m;
  BellClass cls;
  double probability;
  std::optional<CoherentSuperposition> conditioned;
};
BellClass classify_counts(long n, long m);
BellCount bell_count_sample(const CoherentSuperposition& s, int mode_a, int mode_b,
                            std::mt19937_64& rng);

// Draws an index from a discrete distribution by inverse CDF on one uniform.
std::size_t sample_index(const std::vector<double>& probs, std::mt19937_64& rng);

}  // namespace catsim
