#pragma once

#include <vector>

#include "qpnls/lattice.hpp"
#include "qpnls/potential.hpp"

namespace qpnls {

/// |det| in log space plus the sign (sign 0 means the determinant is 0).
struct LogDet {
  double log_abs = 0;  // -inf when the determinant vanishes
  int sign = 1;
};

struct WronskianFactors {
  double log_a1 = 0;  // product of |cos| factors
  double log_a2 = 0;  // product of (2 pi mu)^2 factors
  double log_a3 = 0;  // Vandermonde-type pairwise difference product
  int sign = 1;
};

/// Direction vector for the derivative d_xi: first d entries act on alpha
/// (xi tilde), last d on theta (xi hat). All components in (0,1].
/// Default: fractional parts of square roots of primes, which avoid exact
/// integer-combination collisions at desk scale.
std::vector<double> default_diophantine_direction(int d);

/// The Wronskian of the frequency map: the R x R matrix of even directional
/// derivatives d_xi^{2s} cos(2 pi l.(theta + j*alpha)) over column pairs
/// (j in support, l in Gamma_L), R = #support * #Gamma_L. Its determinant
/// factorizes exactly into cosine, squared-slope and Vandermonde parts; all
/// three are accumulated in log space.
/// Throws std::domain_error when a squared-slope factor is exactly zero
/// (the direction xi collides with an integer relation).
WronskianFactors wronskian_factors(const PotentialSpec& spec,
                                   const std::vector<MultiIndex>& support,
                                   const std::vector<double>& xi);

LogDet wronskian_det(const PotentialSpec& spec,
                     const std::vector<MultiIndex>& support,
                     const std::vector<double>& xi);

}  // namespace qpnls
