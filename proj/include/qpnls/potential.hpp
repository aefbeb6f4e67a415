#pragma once

#include <string>
#include <vector>

#include "qpnls/lattice.hpp"
#include "qpnls/poly.hpp"

namespace qpnls {

struct FrequencyComponent {
  MultiIndex l;  // integer frequency vector, every component nonzero
  double v = 0;  // amplitude
};

/// Quasi-periodic on-site potential
///   V_j(theta, alpha) = sum_{l in Gamma} v_l cos(2 pi l . (theta + j*alpha))
/// where j*alpha is the componentwise product. Gamma sits in [-L, L]^d with
/// no zero components (a) and no pair summing to zero (b).
struct PotentialSpec {
  int d = 1;
  int L = 1;
  std::vector<FrequencyComponent> gamma_set;
  std::vector<double> theta;  // in [0,1)^d
  std::vector<double> alpha;  // in [0,1)^d
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks conditions (a), (b), the [-L,L]^d box, duplicate frequencies and
/// basic shape. Never throws; reports every violation it finds.
ValidationReport validate_spec(const PotentialSpec& spec);

double eval_potential(const PotentialSpec& spec, const MultiIndex& j);

/// Componentwise eval_potential, ordered like `box`.
std::vector<double> potential_vector(const PotentialSpec& spec,
                                     const std::vector<MultiIndex>& box);

/// Frequencies omega_j = V_j over the given sites.
FrequencyMap frequency_map(const PotentialSpec& spec,
                           const std::vector<MultiIndex>& sites);

/// sum |v_l| — a uniform bound on |V_j|.
double amplitude_bound(const PotentialSpec& spec);

/// One cosine factor cos(2 pi l . (theta + j*alpha)) without its amplitude,
/// evaluated with the same high-accuracy range reduction as eval_potential.
double potential_cos_factor(const PotentialSpec& spec, const MultiIndex& l,
                            const MultiIndex& j);

/// Copy of `spec` with the phases replaced (used when sampling (theta,alpha)).
PotentialSpec with_phases(PotentialSpec spec, std::vector<double> theta,
                          std::vector<double> alpha);

}  // namespace qpnls
