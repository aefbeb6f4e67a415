#include "qpnls/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qpnls/resonance.hpp"
#include "qpnls/rng.hpp"

namespace qpnls {

double default_dt(const SimConfig& cfg, const LatticeState& initial) {
  double max_q2 = 0;
  for (auto& a : initial.amp) max_q2 = std::max(max_q2, std::norm(a));
  const double scale = amplitude_bound(cfg.potential) +
                       4.0 * cfg.potential.d * cfg.epsilon1 +
                       cfg.epsilon2 * max_q2;
  return 0.01 / std::max(1.0, scale);
}

SplitStepIntegrator::SplitStepIntegrator(const SimConfig& cfg, const Box& box)
    : eps1_(cfg.epsilon1), eps2_(cfg.epsilon2), dt_(cfg.dt) {
  const auto sites = box.sites();
  V_ = potential_vector(cfg.potential, sites);
  // One sweep per (axis, parity): a disjoint set of nearest-neighbour bonds.
  sweeps_.assign(static_cast<std::size_t>(2 * box.dim()), {});
  for (auto& j : sites) {
    for (int axis = 0; axis < box.dim(); ++axis) {
      MultiIndex nb = j;
      nb.c[axis] += 1;
      const long v = box.index_of(nb);
      if (v < 0) continue;
      const int parity = ((j.c[axis] % 2) + 2) % 2;
      sweeps_[static_cast<std::size_t>(2 * axis + parity)].push_back(
          {box.index_of(j), v});
    }
  }
}

void SplitStepIntegrator::phase_rotation(LatticeState& state, double t) const {
  for (std::size_t i = 0; i < state.amp.size(); ++i) {
    const double phase = -(V_[i] + eps2_ * std::norm(state.amp[i])) * t;
    state.amp[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
}

void SplitStepIntegrator::bond_sweep(LatticeState& state, std::size_t sweep,
                                     double t) const {
  const double c = std::cos(eps1_ * t);
  const std::complex<double> is(0, std::sin(eps1_ * t));
  for (auto& [u, v] : sweeps_[sweep]) {
    const auto qu = state.amp[static_cast<std::size_t>(u)];
    const auto qv = state.amp[static_cast<std::size_t>(v)];
    state.amp[static_cast<std::size_t>(u)] = c * qu - is * qv;
    state.amp[static_cast<std::size_t>(v)] = c * qv - is * qu;
  }
}

void SplitStepIntegrator::advance(LatticeState& state, double dt) const {
  // Palindromic composition: A and all sweeps but the last at dt/2, the last
  // sweep at dt, then the mirror image.
  const std::size_t m = sweeps_.size();
  phase_rotation(state, dt / 2);
  for (std::size_t k = 0; k + 1 < m; ++k) bond_sweep(state, k, dt / 2);
  bond_sweep(state, m - 1, dt);
  for (std::size_t k = m - 1; k-- > 0;) bond_sweep(state, k, dt / 2);
  phase_rotation(state, dt / 2);
  state.time += dt;
}

double l2_norm_sq(const LatticeState& state) {
  double s = 0;
  for (auto& a : state.amp) s += std::norm(a);
  return s;
}

double energy(const LatticeState& state, const std::vector<double>& V,
              double eps1, double eps2) {
  double diag = 0, quart = 0;
  for (std::size_t i = 0; i < state.amp.size(); ++i) {
    const double n = std::norm(state.amp[i]);
    diag += V[i] * n;
    quart += n * n;
  }
  double hop = 0;
  if (eps1 != 0) {
    const auto sites = state.box.sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (int axis = 0; axis < state.box.dim(); ++axis) {
        MultiIndex nb = sites[i];
        nb.c[axis] += 1;
        const long v = state.box.index_of(nb);
        if (v < 0) continue;
        // Ordered pairs (i,nb) and (nb,i) sum to twice the real part.
        hop += 2 * std::real(state.amp[i] *
                             std::conj(state.amp[static_cast<std::size_t>(v)]));
      }
    }
  }
  return 0.5 * (diag + eps1 * hop + 0.5 * eps2 * quart);
}

double barrier_mass(const LatticeState& state, double radius) {
  const auto sites = state.box.sites();
  double s = 0;
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i].l2() > radius) s += std::norm(state.amp[i]);
  return s;
}

LatticeState initial_profile(const Box& box, int j0, double delta) {
  LatticeState state(box);
  const auto sites = box.sites();
  double total = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double a = std::exp(-0.35 * sites[i].l2());
    state.amp[i] = a;
    total += a * a;
  }
  const double scale = 1.0 / std::sqrt(total);
  for (auto& a : state.amp) a *= scale;
  const double tail = barrier_mass(state, j0);
  if (tail >= delta)
    throw std::invalid_argument(
        "initial_profile: tail beyond j0 is " + std::to_string(tail) +
        ", not below delta = " + std::to_string(delta));
  return state;
}

namespace {

double least_squares_slope(const std::vector<TrajectoryRow>& rows) {
  if (rows.size() < 2) return 0;
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(rows.size());
  for (auto& row : rows) {
    st += row.t;
    sy += row.mass_outer;
    stt += row.t * row.t;
    sty += row.t * row.mass_outer;
  }
  const double denom = n * stt - st * st;
  return denom == 0 ? 0 : (n * sty - st * sy) / denom;
}

}  // namespace

ExperimentReport localization_experiment(const ExperimentConfig& cfg) {
  const double eps = cfg.sim.epsilon1 + cfg.sim.epsilon2;
  const double t_end = cfg.delta * std::pow(std::max(eps, 1e-300), -cfg.M);

  // Halo rule: Lieb-Robinson-style speed 4 d eps1 plus a margin of 10 sites.
  int halfwidth = cfg.box_halfwidth;
  if (halfwidth <= 0)
    halfwidth = cfg.j0 + cfg.M * cfg.M +
                static_cast<int>(std::ceil(4.0 * cfg.sim.potential.d *
                                           cfg.sim.epsilon1 * t_end)) +
                10;
  const Box box = Box::centered(cfg.sim.potential.d, halfwidth);

  ResonanceParams rp;
  rp.gamma = cfg.gamma;
  rp.L = cfg.sim.potential.L;
  rp.M = cfg.M;
  rp.j0 = cfg.j0;
  rp.d = cfg.sim.potential.d;
  rp.tau = cfg.tau;
  const auto indices = collect_divisor_indices(rp);
  std::vector<MultiIndex> divisor_sites;
  for (auto& k : indices)
    for (auto& [site, v] : k.k) divisor_sites.push_back(site);
  std::sort(divisor_sites.begin(), divisor_sites.end());
  divisor_sites.erase(
      std::unique(divisor_sites.begin(), divisor_sites.end()),
      divisor_sites.end());

  ExperimentReport report;
  report.box = box;
  report.t_end = t_end;
  report.slope_bound = 10.0 * std::pow(eps, cfg.M + 1);
  report.samples.resize(static_cast<std::size_t>(cfg.samples));

  const LatticeState initial = initial_profile(box, cfg.j0, cfg.delta);
  const double outer_radius = cfg.j0 + cfg.M * cfg.M;

  auto run_sample = [&](int index) {
    SampleResult& out = report.samples[static_cast<std::size_t>(index)];
    out.index = index;
    auto rng = make_stream(cfg.seed, static_cast<std::uint64_t>(index));
    const int d = cfg.sim.potential.d;
    out.theta.resize(static_cast<std::size_t>(d));
    out.alpha.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) out.theta[static_cast<std::size_t>(a)] = uniform01(rng);
    for (int a = 0; a < d; ++a) out.alpha[static_cast<std::size_t>(a)] = uniform01(rng);

    SimConfig sim = cfg.sim;
    sim.potential = with_phases(sim.potential, out.theta, out.alpha);
    const FrequencyMap omega = frequency_map(sim.potential, divisor_sites);
    out.nonresonant = check_nonresonant(omega, cfg.tau, indices).ok;
    if (!out.nonresonant) return;  // excluded resonant sample

    LatticeState state = initial;
    SplitStepIntegrator integrator(sim, box);
    if (sim.dt <= 0) integrator.set_dt(default_dt(sim, state));
    const auto& V = integrator.site_potential();
    const long steps = static_cast<long>(std::ceil(t_end / integrator.dt()));
    const double dt = t_end / static_cast<double>(steps);
    integrator.set_dt(dt);

    auto record = [&]() {
      TrajectoryRow row;
      row.t = state.time;
      row.l2 = l2_norm_sq(state);
      row.energy = energy(state, V, sim.epsilon1, sim.epsilon2);
      row.mass_j0 = barrier_mass(state, cfg.j0);
      row.mass_outer = barrier_mass(state, outer_radius);
      out.rows.push_back(row);
      out.max_outer_mass = std::max(out.max_outer_mass, row.mass_outer);
    };
    record();
    for (long n = 1; n <= steps; ++n) {
      integrator.step(state);
      if (n % cfg.sim.cadence == 0 || n == steps) record();
    }
    out.slope = least_squares_slope(out.rows);
    out.pass = out.max_outer_mass < 2 * cfg.delta;
    out.final_amp = state.amp;
  };

  const int nworkers = std::max(1, cfg.workers);
  if (nworkers == 1) {
    for (int i = 0; i < cfg.samples; ++i) run_sample(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> cursor{0};
    for (int w = 0; w < std::min(nworkers, cfg.samples); ++w)
      pool.emplace_back([&]() {
        for (int i = cursor.fetch_add(1); i < cfg.samples;
             i = cursor.fetch_add(1))
          run_sample(i);
      });
    for (auto& th : pool) th.join();
  }

  for (auto& s : report.samples) {
    if (!s.nonresonant) continue;
    ++report.accepted;
    report.max_slope = std::max(report.max_slope, s.slope);
  }
  report.all_pass = report.accepted > 0;
  for (auto& s : report.samples)
    if (s.nonresonant && !s.pass) report.all_pass = false;
  return report;
}

}  // namespace qpnls
