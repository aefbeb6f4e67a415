#include "qpnls/wronskian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qpnls {

std::vector<double> default_diophantine_direction(int d) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                               23, 29, 31, 37, 41, 43, 47, 53};
  if (2 * d > static_cast<int>(std::size(primes)))
    throw std::invalid_argument("default_diophantine_direction: d too large");
  std::vector<double> xi(static_cast<std::size_t>(2 * d));
  for (int i = 0; i < 2 * d; ++i) {
    const double s = std::sqrt(static_cast<double>(primes[i]));
    xi[static_cast<std::size_t>(i)] = s - std::floor(s);
  }
  return xi;
}

WronskianFactors wronskian_factors(const PotentialSpec& spec,
                                   const std::vector<MultiIndex>& support,
                                   const std::vector<double>& xi) {
  if (support.empty())
    throw std::invalid_argument("wronskian_factors: empty support");
  if (static_cast<int>(xi.size()) != 2 * spec.d)
    throw std::invalid_argument("wronskian_factors: xi must have length 2d");
  const double two_pi = 2 * std::numbers::pi;
  const double inf = std::numeric_limits<double>::infinity();

  // Column data: slope mu and cosine per (site, frequency) pair.
  std::vector<double> mu, cosv;
  for (auto& j : support) {
    for (auto& fc : spec.gamma_set) {
      double m = 0;
      for (int i = 0; i < spec.d; ++i) {
        m += fc.l.c[i] * static_cast<double>(j.c[i]) * xi[i];
        m += fc.l.c[i] * xi[static_cast<std::size_t>(spec.d + i)];
      }
      mu.push_back(m);
      cosv.push_back(potential_cos_factor(spec, fc.l, j));
    }
  }
  const std::size_t R = mu.size();

  WronskianFactors f;
  int sign = (R % 2 == 0) ? 1 : -1;  // each diagonal factor x_c = -(2 pi mu)^2
  for (std::size_t c = 0; c < R; ++c) {
    if (mu[c] == 0.0)
      throw std::domain_error(
          "wronskian_factors: slope factor is exactly 0 at column " +
          std::to_string(c) + " (direction xi collides)");
    f.log_a2 += std::log(two_pi * two_pi * mu[c] * mu[c]);
    if (cosv[c] == 0.0) {
      f.log_a1 = -inf;
      sign = 0;
    } else {
      if (f.log_a1 != -inf) f.log_a1 += std::log(std::abs(cosv[c]));
      if (sign != 0 && cosv[c] < 0) sign = -sign;
    }
  }
  for (std::size_t c = 0; c < R; ++c) {
    for (std::size_t cc = c + 1; cc < R; ++cc) {
      // x_cc - x_c = (2 pi)^2 (mu_c^2 - mu_cc^2)
      const double diff = mu[c] * mu[c] - mu[cc] * mu[cc];
      if (diff == 0.0) {
        f.log_a3 = -inf;
        sign = 0;
        continue;
      }
      if (f.log_a3 != -inf)
        f.log_a3 += std::log(two_pi * two_pi * std::abs(diff));
      if (sign != 0 && diff < 0) sign = -sign;
    }
  }
  f.sign = sign;
  return f;
}

LogDet wronskian_det(const PotentialSpec& spec,
                     const std::vector<MultiIndex>& support,
                     const std::vector<double>& xi) {
  const WronskianFactors f = wronskian_factors(spec, support, xi);
  LogDet out;
  out.sign = f.sign;
  out.log_abs = f.log_a1 + f.log_a2 + f.log_a3;
  if (out.sign == 0)
    out.log_abs = -std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace qpnls
