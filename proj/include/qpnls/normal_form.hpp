#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpnls/lattice.hpp"
#include "qpnls/poly.hpp"
#include "qpnls/potential.hpp"

namespace qpnls {

/// Configuration of the finite-step normal form transform in the barrier
/// annulus A(j0, M^2).
struct BnfConfig {
  int M = 2;            // number of elimination steps
  int j0 = 12;          // barrier radius
  double r = 4.2;       // weight base; must exceed 4 so every evaluated
                        // radius r - s*sigma >= r/2 stays above 2
  double epsilon1 = 0;  // hopping strength
  double epsilon2 = 0;  // nonlinearity strength
  double tau = 1e-8;    // small-divisor floor
  int lie_order = 0;    // 0 = adaptive from the contraction ratio
  int size_cap_offset = 2;     // selection cap diameter + degree <= s + 2
  int schedule_floor = -1;     // N_s = max(M^2 - 20(s-1), floor); -1 -> M^2
  double series_tail_tol = 1e-14;  // relative tail target of the Lie series
  int box_halfwidth = 0;           // 0 -> j0 + M^2 + M + 2

  double sigma() const { return r / (2.0 * M); }
  double radius_at(int s) const { return r - (s - 1) * sigma(); }
  int annulus_width(int s) const;  // N_s
  int effective_box_halfwidth() const {
    return box_halfwidth > 0 ? box_halfwidth : j0 + M * M + M + 2;
  }
  double epsilon() const { return epsilon1 + epsilon2; }
  void validate() const;  // throws std::invalid_argument
};

/// One ledger line: a measured norm against its target, tagged with whether
/// the run's pass/fail verdict depends on it. Step 0 holds initial checks,
/// step M+1 the final ones.
struct LedgerRow {
  int step = 0;
  std::string name;
  double measured = 0;
  double bound = 0;
  bool pass = false;
  bool enforced = false;
};

struct StepLog {
  int step = 0;
  std::size_t selected_terms = 0;
  std::size_t eliminated_terms = 0;
  int order_used = 0;
  double contraction_lhs = 0;  // (e/sigma) * ||G||
  double residual_rel = 0;     // homological residual, relative
  double norm_F = 0;
  double norm_Z = 0;
  double norm_R = 0;
  double norm_Rsel = 0;
};

/// State of the iteration: H_s = D + Z_s + R_s with D the untouched
/// quadratic diagonal, Z_s purely resonant, R_s purely non-resonant.
struct BnfState {
  int s = 1;
  FrequencyMap omega;   // V_j over the working box
  HamiltonianPoly D;    // (1/2) sum V_j |q_j|^2, never modified
  HamiltonianPoly Z;
  HamiltonianPoly R;
  std::vector<LedgerRow> ledger;
};

struct HamiltonianParts {
  HamiltonianPoly D, Z, R;
};

/// D = (1/2) sum V_j |q_j|^2, Z = (eps2/4) sum |q_j|^4,
/// R = (eps1/2) sum over ordered nearest-neighbour pairs of q_i conj(q_j),
/// all restricted to `box`. Throws if the box cannot hold the barrier
/// annulus plus a one-bond halo.
HamiltonianParts build_hamiltonian(const PotentialSpec& spec, const Box& box,
                                   double epsilon1, double epsilon2,
                                   const BnfConfig& cfg);

struct HomologicalSolution {
  HamiltonianPoly F;        // F(n) = R(n) / S(n) on non-resonant terms
  HamiltonianPoly dropped;  // resonant part of the input, untouched
};

/// Error raised when a selected monomial's divisor falls below tau.
struct SmallDivisorError : std::runtime_error {
  Monomial monomial;
  double divisor;
  SmallDivisorError(const Monomial& m, double s);
};

HomologicalSolution solve_homological(const HamiltonianPoly& selected,
                                      const FrequencyMap& omega, double tau);

/// U composed with the time-1 flow of G: sum_{m<=order} ad_G^m(U) / m!,
/// ad_G(U) = {U, G}. Every stage is filtered by `keep` when provided.
HamiltonianPoly apply_lie_series(const HamiltonianPoly& U,
                                 const HamiltonianPoly& G, int order,
                                 const MonomialPredicate& keep = {});

/// Error raised when the contraction hypothesis (e/sigma)||G|| <= 1/2 fails.
struct ContractionError : std::runtime_error {
  double lhs, rhs;
  ContractionError(double l, double r);
};

/// One elimination step: select, solve, transform, re-split, record.
BnfState bnf_step(BnfState state, const BnfConfig& cfg, StepLog* log = nullptr);

struct BnfResult {
  BnfState state;             // after M steps
  std::vector<StepLog> steps;
  bool final_bounds_pass = false;  // the three enforced final rows
  double final_Z_norm = 0, final_R_norm = 0, final_Rbarrier_norm = 0;
};

/// Full M-step transform with a non-resonance pre-scan; the final ledger
/// rows compare ||Z~||, ||R~|| against 2 eps^0.9 and the barrier part
/// against eps^(0.9 M), all at radius r/2.
BnfResult run_bnf(const PotentialSpec& spec, const BnfConfig& cfg);

/// Split of the final remainder: terms meeting A(j0, M^2/2); detached terms
/// with diameter >= M+4; detached narrow terms (diameter <= M+3), whose
/// outside-barrier charge must vanish exactly.
struct RemainderParts {
  HamiltonianPoly barrier;
  HamiltonianPoly wide;
  HamiltonianPoly narrow;
  std::vector<Monomial> flux_violations;  // narrow terms with nonzero charge
};
RemainderParts classify_remainder(const HamiltonianPoly& R,
                                  const BnfConfig& cfg);

}  // namespace qpnls
