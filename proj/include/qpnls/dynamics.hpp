#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qpnls/lattice.hpp"
#include "qpnls/potential.hpp"

namespace qpnls {

/// Complex amplitudes on a finite box, zero-Dirichlet outside.
struct LatticeState {
  Box box;
  std::vector<std::complex<double>> amp;  // row-major over box.sites()
  double time = 0;

  explicit LatticeState(Box b)
      : box(std::move(b)),
        amp(static_cast<std::size_t>(box.site_count()), {0, 0}) {}
};

struct SimConfig {
  PotentialSpec potential;
  double epsilon1 = 0;  // hopping
  double epsilon2 = 0;  // on-site nonlinearity
  double dt = 0;        // 0 -> stability default
  double t_end = 1;
  int cadence = 10;  // observable rows every `cadence` steps
};

double default_dt(const SimConfig& cfg, const LatticeState& initial);

/// Splitting integrator for i dq_j/dt = V_j q_j + eps1 (Delta q)_j
/// + eps2 |q_j|^2 q_j. The diagonal sub-flow is an exact phase rotation
/// (|q_j| is its invariant), the hopping sub-flow decomposes into per-axis,
/// per-parity sweeps of exact 2x2 rotations, and the composition is
/// palindromic, so each step is unitary to rounding and time-reversible.
class SplitStepIntegrator {
 public:
  SplitStepIntegrator(const SimConfig& cfg, const Box& box);

  void step(LatticeState& state) const { advance(state, dt_); }
  /// One step of the time-reversed flow (for reversibility checks).
  void step_back(LatticeState& state) const { advance(state, -dt_); }

  double dt() const { return dt_; }
  void set_dt(double dt) { dt_ = dt; }
  const std::vector<double>& site_potential() const { return V_; }

 private:
  void advance(LatticeState& state, double dt) const;
  void phase_rotation(LatticeState& state, double t) const;
  void bond_sweep(LatticeState& state, std::size_t sweep, double t) const;

  double eps1_, eps2_;
  double dt_;
  std::vector<double> V_;  // per-site potential
  std::vector<std::vector<std::pair<long, long>>> sweeps_;  // disjoint bonds
};

double l2_norm_sq(const LatticeState& state);

/// H = (1/2)(sum V_j |q_j|^2 + eps1 sum over ordered nearest-neighbour pairs
/// q_i conj(q_j) + (eps2/2) sum |q_j|^4), zero-Dirichlet outside the box.
double energy(const LatticeState& state, const std::vector<double>& V,
              double eps1, double eps2);

/// Mass beyond the given Euclidean radius: sum over |j| > radius of |q_j|^2.
double barrier_mass(const LatticeState& state, double radius);

/// Deterministic localized initial profile q_j ~ exp(-0.35 |j|), normalized
/// to unit mass. Throws if the tail beyond j0 is not below delta.
LatticeState initial_profile(const Box& box, int j0, double delta);

struct TrajectoryRow {
  double t = 0;
  double l2 = 0;
  double energy = 0;
  double mass_j0 = 0;     // barrier mass at radius j0
  double mass_outer = 0;  // barrier mass at radius j0 + M^2
};

struct ExperimentConfig {
  SimConfig sim;            // potential phases are overwritten per sample
  int j0 = 12;
  int M = 2;
  double delta = 0.01;
  double gamma = 0.1;       // reported exclusion budget
  double tau = 1e-8;        // non-resonance floor for the sample filter
  int samples = 24;         // attempted (theta, alpha) draws
  int min_accepted = 20;
  std::uint64_t seed = 1;
  int workers = 1;
  int box_halfwidth = 0;    // 0 -> auto from the halo rule
};

struct SampleResult {
  int index = 0;
  std::vector<double> theta, alpha;
  bool nonresonant = false;
  double max_outer_mass = 0;
  double slope = 0;  // least-squares growth rate of the outer mass
  bool pass = false; // max outer mass < 2 delta
  std::vector<TrajectoryRow> rows;
  std::vector<std::complex<double>> final_amp;
};

struct ExperimentReport {
  std::vector<SampleResult> samples;
  int accepted = 0;
  bool all_pass = false;   // every accepted sample kept mass < 2 delta
  double max_slope = 0;
  double slope_bound = 0;  // 10 eps^(M+1)
  double t_end = 0;        // delta * eps^-M
  Box box;
};

/// Samples (theta, alpha), filters by the non-resonance check at tau,
/// integrates accepted samples to t = delta * eps^-M and records the mass
/// beyond j0 + M^2. Deterministic in the seed and worker-count independent.
ExperimentReport localization_experiment(const ExperimentConfig& cfg);

/// Checkpoint text format: `# box lo hi [lo hi ...]` header, then one line
/// `site re im` per site with 17-digit floats (bit-exact round trip).
std::string state_to_text(const LatticeState& state);
LatticeState state_from_text(const std::string& text);

}  // namespace qpnls
