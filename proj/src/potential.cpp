#include "qpnls/potential.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace qpnls {

ValidationReport validate_spec(const PotentialSpec& spec) {
  ValidationReport report;
  auto complain = [&report](std::string msg) {
    report.violations.push_back(std::move(msg));
  };
  if (spec.d < 1) complain("dimension d must be >= 1");
  if (spec.L < 1) complain("scale L must be >= 1");
  if (static_cast<int>(spec.theta.size()) != spec.d)
    complain("theta must have length d");
  if (static_cast<int>(spec.alpha.size()) != spec.d)
    complain("alpha must have length d");
  if (spec.gamma_set.empty()) complain("frequency set is empty");

  std::set<MultiIndex> seen;
  for (auto& fc : spec.gamma_set) {
    if (fc.l.dim() != spec.d) {
      complain("frequency " + to_string(fc.l) + " has wrong dimension");
      continue;
    }
    for (int i = 0; i < spec.d; ++i)
      if (fc.l.c[i] == 0) {
        complain("condition (a) violated: frequency " + to_string(fc.l) +
                 " has a zero component");
        break;
      }
    for (int i = 0; i < spec.d; ++i)
      if (std::abs(fc.l.c[i]) > spec.L) {
        complain("frequency " + to_string(fc.l) + " outside [-L, L]^d");
        break;
      }
    if (!seen.insert(fc.l).second)
      complain("duplicate frequency " + to_string(fc.l));
  }
  for (std::size_t a = 0; a < spec.gamma_set.size(); ++a)
    for (std::size_t b = a; b < spec.gamma_set.size(); ++b) {
      const MultiIndex& la = spec.gamma_set[a].l;
      const MultiIndex& lb = spec.gamma_set[b].l;
      if (la.dim() != spec.d || lb.dim() != spec.d) continue;
      bool opposite = true;
      for (int i = 0; i < spec.d; ++i)
        if (la.c[i] + lb.c[i] != 0) {
          opposite = false;
          break;
        }
      if (opposite)
        complain("condition (b) violated: " + to_string(la) + " + " +
                 to_string(lb) + " = 0");
    }
  return report;
}

namespace {

// Fractional part of n*x with the product's rounding error recovered via
// fma, so the result is accurate even when n*x is large (sites ~1e4).
double frac_int_mul(long long n, double x) {
  const double p = static_cast<double>(n) * x;
  const double err = std::fma(static_cast<double>(n), x, -p);
  return (p - std::nearbyint(p)) + err;
}

double reduced_cos_arg(const PotentialSpec& spec, const MultiIndex& l,
                       const MultiIndex& j) {
  double t = 0;
  for (int i = 0; i < spec.d; ++i) {
    t += l.c[i] * spec.theta[i];
    t += frac_int_mul(static_cast<long long>(l.c[i]) * j.c[i], spec.alpha[i]);
  }
  return t - std::nearbyint(t);
}

}  // namespace

double eval_potential(const PotentialSpec& spec, const MultiIndex& j) {
  if (j.dim() != spec.d)
    throw std::invalid_argument("eval_potential: site dimension mismatch");
  double v = 0;
  for (auto& fc : spec.gamma_set)
    v += fc.v * std::cos(2 * std::numbers::pi * reduced_cos_arg(spec, fc.l, j));
  return v;
}

std::vector<double> potential_vector(const PotentialSpec& spec,
                                     const std::vector<MultiIndex>& box) {
  std::vector<double> out;
  out.reserve(box.size());
  for (auto& j : box) out.push_back(eval_potential(spec, j));
  return out;
}

FrequencyMap frequency_map(const PotentialSpec& spec,
                           const std::vector<MultiIndex>& sites) {
  FrequencyMap omega;
  for (auto& j : sites) omega[j] = eval_potential(spec, j);
  return omega;
}

double potential_cos_factor(const PotentialSpec& spec, const MultiIndex& l,
                            const MultiIndex& j) {
  return std::cos(2 * std::numbers::pi * reduced_cos_arg(spec, l, j));
}

double amplitude_bound(const PotentialSpec& spec) {
  double s = 0;
  for (auto& fc : spec.gamma_set) s += std::abs(fc.v);
  return s;
}

PotentialSpec with_phases(PotentialSpec spec, std::vector<double> theta,
                          std::vector<double> alpha) {
  spec.theta = std::move(theta);
  spec.alpha = std::move(alpha);
  return spec;
}

}  // namespace qpnls
