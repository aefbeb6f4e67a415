#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "qpnls/lattice.hpp"
#include "qpnls/poly.hpp"
#include "qpnls/potential.hpp"

namespace qpnls {

/// Parameters of the non-resonance condition for frequency vectors. The
/// theoretical threshold (gamma / (2 L M^2 j0)^(2(d+1)))^(10 L^4 M^4)
/// underflows double precision already for modest L, M, so it is kept in
/// log10 form and the working small-divisor floor tau is a free parameter
/// (desk-scale default 1e-8) unless strict mode pins tau to the threshold.
struct ResonanceParams {
  double gamma = 0.1;  // target excluded measure, in (0,1)
  int L = 1;
  int M = 2;
  int j0 = 20;
  int d = 1;
  double tau = 1e-8;
  bool strict_floor = false;

  double log10_reference_threshold() const;
  void validate() const;  // throws std::invalid_argument
};

/// Integer vector k = (k_j) with nonzero entries on a finite support; indexes
/// one small divisor sum_j k_j omega_j.
struct DivisorIndex {
  std::map<MultiIndex, int> k;

  int l1() const {
    int s = 0;
    for (auto& [site, v] : k) s += std::abs(v);
    return s;
  }
  double diameter() const;
  DivisorIndex negated() const;
  bool operator==(const DivisorIndex&) const = default;
  auto operator<=>(const DivisorIndex&) const = default;
};

std::string to_string(const DivisorIndex& k);

/// Signed divisor sum_j k_j omega_j; the caller takes |.|.
/// Throws std::out_of_range if omega lacks a support site.
double divisor_value(const DivisorIndex& k, const FrequencyMap& omega);

/// Upper estimate of how many indices enumerate_divisor_indices would yield;
/// used for the refusal cap.
std::uint64_t predicted_index_count(const ResonanceParams& p);

inline constexpr std::uint64_t kEnumerationCap = 100'000'000;

/// Visits every k != 0 with supp k meeting A(j0, M^2) and
/// diameter(k) + |k|_1 <= M + 2, each exactly once. The visitor returns
/// false to stop early. Throws std::runtime_error with the predicted count
/// when it exceeds the cap.
void enumerate_divisor_indices(const ResonanceParams& p,
                               const std::function<bool(const DivisorIndex&)>& visit);

std::vector<DivisorIndex> collect_divisor_indices(const ResonanceParams& p);

/// All sites any enumerated index can touch (candidate region).
std::vector<MultiIndex> divisor_site_region(const ResonanceParams& p);

struct NonresonanceResult {
  bool ok = true;
  std::optional<DivisorIndex> violated;  // first k with |divisor| < tau
  double value = 0;                      // its divisor value
};

NonresonanceResult check_nonresonant(const FrequencyMap& omega, double tau,
                                     const std::vector<DivisorIndex>& indices);

struct MeasureEstimate {
  double fraction = 0;      // resonant fraction of samples
  double ci_halfwidth = 0;  // 95% Wilson interval half-width
  long failures = 0;
  long samples = 0;
};

/// Uniform Monte-Carlo over (theta, alpha) in [0,1]^{2d}: the fraction of
/// samples whose frequency vector fails the non-resonance check at p.tau.
/// Deterministic in (seed, samples) and independent of worker count.
MeasureEstimate estimate_resonant_measure(const ResonanceParams& p,
                                          const PotentialSpec& spec_template,
                                          long samples, std::uint64_t seed,
                                          int workers = 1);

/// 95% Wilson score half-width for x successes in n trials.
double wilson_halfwidth(long x, long n);

}  // namespace qpnls
