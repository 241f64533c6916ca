#pragma once

#include "catsim/cstate.hpp"

namespace catsim {

struct BeamSplitterSpec {
  int mode_a;
  int mode_b;
  double theta;
};

// (g, b) -> (g cos t + i b sin t, b cos t + i g sin t) on every term.
CoherentSuperposition beamsplitter(const CoherentSuperposition& s, const BeamSplitterSpec& spec);
CoherentSuperposition phase_shift(const CoherentSuperposition& s, int mode, double theta);
CoherentSuperposition displace(const CoherentSuperposition& s, int mode, cplx beta);

// Displacement through a weak beam splitter and a strong local oscillator in an
// ancilla mode. The ancilla is projected onto its nominal output and removed.
CoherentSuperposition displace_physical(const CoherentSuperposition& s, int mode, cplx beta,
                                        double strong_amp);

// a -> a/sqrt(N) in `mode` and in N-1 appended modes.
CoherentSuperposition nport_split(const CoherentSuperposition& s, int mode, int N);

// Same split built from 50/50 beam splitters (N a power of two), with the
// phases compensated so it matches nport_split.
CoherentSuperposition nport_split_tree(const CoherentSuperposition& s, int mode, int N);

// |a,a> + |-a,-a> (normalized), built from cat(sqrt2 a) x |0>, a 50/50
// splitter, and a -pi/2 phase on the second mode.
CoherentSuperposition bell_cat_resource(double alpha);

// The four Bell-cats in closed form:
// 1: |a,a>+|-a,-a>  2: |a,a>-|-a,-a>  3: |a,-a>+|-a,a>  4: |a,-a>-|-a,a>
CoherentSuperposition bell_cat(double alpha, int which);

// (|a/sqrtN, ...> + |-a/sqrtN, ...>) over N modes, normalized.
CoherentSuperposition ghz_cat(double alpha, int N);

}  // namespace catsim
