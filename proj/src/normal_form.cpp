#include "qpnls/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpnls/resonance.hpp"

namespace qpnls {

int BnfConfig::annulus_width(int s) const {
  const int floor_val = schedule_floor < 0 ? M * M : schedule_floor;
  return std::max(M * M - 20 * (s - 1), floor_val);
}

void BnfConfig::validate() const {
  if (M < 1) throw std::invalid_argument("BnfConfig: M must be >= 1");
  if (j0 < 1) throw std::invalid_argument("BnfConfig: j0 must be >= 1");
  if (r <= 4)
    throw std::invalid_argument(
        "BnfConfig: r must exceed 4 so every working radius r - s*sigma >= "
        "r/2 stays inside the weighted norm's domain (r > 2)");
  if (epsilon1 < 0 || epsilon1 > 1 || epsilon2 < 0 || epsilon2 > 1)
    throw std::invalid_argument("BnfConfig: epsilon1, epsilon2 must be in [0,1]");
  if (tau < 0) throw std::invalid_argument("BnfConfig: tau < 0");
  if (size_cap_offset < 0)
    throw std::invalid_argument("BnfConfig: size_cap_offset < 0");
  if (schedule_floor == 0 || schedule_floor < -1)
    throw std::invalid_argument("BnfConfig: schedule_floor must be -1 or >= 1");
  if (annulus_width(M + 1) < 1)
    throw std::invalid_argument("BnfConfig: annulus schedule hits zero width");
  if (effective_box_halfwidth() < j0 + M * M + 1)
    throw std::invalid_argument(
        "BnfConfig: box too small for the barrier annulus plus halo");
}

SmallDivisorError::SmallDivisorError(const Monomial& m, double s)
    : std::runtime_error("small divisor " + std::to_string(s) +
                         " below floor for monomial " + to_string(m)),
      monomial(m),
      divisor(s) {}

ContractionError::ContractionError(double l, double r)
    : std::runtime_error("Lie series contraction condition failed: (e/sigma)"
                         "*|G| = " +
                         std::to_string(l) + " > " + std::to_string(r)),
      lhs(l),
      rhs(r) {}

HamiltonianParts build_hamiltonian(const PotentialSpec& spec, const Box& box,
                                   double epsilon1, double epsilon2,
                                   const BnfConfig& cfg) {
  if (box.dim() != spec.d)
    throw std::invalid_argument("build_hamiltonian: box dimension mismatch");
  const int need = cfg.j0 + cfg.M * cfg.M + 1;
  for (auto& [lo, hi] : box.range)
    if (lo > -need || hi < need)
      throw std::invalid_argument(
          "build_hamiltonian: box must cover the barrier annulus plus a "
          "one-bond halo (need half-width >= " +
          std::to_string(need) + ")");

  HamiltonianParts parts{HamiltonianPoly(spec.d), HamiltonianPoly(spec.d),
                         HamiltonianPoly(spec.d)};
  for (auto& j : box.sites()) {
    const double vj = eval_potential(spec, j);
    parts.D.add_term(Monomial::make({{j, {1, 1}}}), 0.5 * vj);
    if (epsilon2 != 0)
      parts.Z.add_term(Monomial::make({{j, {2, 2}}}), 0.25 * epsilon2);
    if (epsilon1 != 0) {
      for (int axis = 0; axis < spec.d; ++axis) {
        for (int dir : {-1, +1}) {
          MultiIndex nb = j;
          nb.c[axis] += dir;
          if (!box.contains(nb)) continue;
          parts.R.add_term(Monomial::make({{j, {1, 0}}, {nb, {0, 1}}}),
                           0.5 * epsilon1);
        }
      }
    }
  }
  return parts;
}

HomologicalSolution solve_homological(const HamiltonianPoly& selected,
                                      const FrequencyMap& omega, double tau) {
  HomologicalSolution out{HamiltonianPoly(selected.dim()),
                          HamiltonianPoly(selected.dim())};
  for (auto& [m, c] : selected.terms()) {
    if (m.resonant()) {
      out.dropped.add_term(m, c);
      continue;
    }
    const double s = monomial_divisor(m, omega);
    if (std::abs(s) < tau) throw SmallDivisorError(m, s);
    out.F.add_term(m, c / s);
  }
  return out;
}

HamiltonianPoly apply_lie_series(const HamiltonianPoly& U,
                                 const HamiltonianPoly& G, int order,
                                 const MonomialPredicate& keep) {
  HamiltonianPoly acc = keep ? truncate(U, keep) : U;
  HamiltonianPoly stage = acc;
  for (int m = 1; m <= order && !stage.empty(); ++m) {
    stage = poisson_bracket(stage, G);
    stage *= Coeff(1.0 / m);
    if (keep) stage = truncate(stage, keep);
    stage.prune();
    acc += stage;
  }
  return acc;
}

namespace {

// sum_{i=0}^{s} 2^{-i}
double dyadic_partial_sum(int s) { return 2.0 - std::pow(2.0, -s); }

void record_slices(std::vector<LedgerRow>& ledger, int step,
                   const HamiltonianPoly& Z, const HamiltonianPoly& R,
                   const NormParams& np, double eps) {
  double max_size = 0;
  for (auto& [m, c] : Z.terms())
    max_size = std::max(max_size, m.diameter() + m.degree());
  for (auto& [m, c] : R.terms())
    max_size = std::max(max_size, m.diameter() + m.degree());
  const int amax = std::min(12, static_cast<int>(std::ceil(max_size)));
  for (int A = 3; A <= amax; ++A) {
    // Z and R never share a monomial (resonant vs not), so slice norms add.
    const double measured = grade_by_size(Z, A, np) + grade_by_size(R, A, np);
    const double bound = std::pow(eps, 1.0 + 0.9 * (A - 3));
    ledger.push_back(
        {step, "slice_A" + std::to_string(A), measured, bound,
         measured <= bound, false});
  }
}

}  // namespace

BnfState bnf_step(BnfState state, const BnfConfig& cfg, StepLog* log) {
  const int s = state.s;
  const double eps = cfg.epsilon();
  const double sigma = cfg.sigma();
  const double r_s = cfg.radius_at(s);
  const double r_next = cfg.radius_at(s + 1);
  const NormParams np_s{cfg.j0, cfg.M * cfg.M, r_s};
  const NormParams np_next{cfg.j0, cfg.M * cfg.M, r_next};

  // Selection: support meets A(j0, N_{s+1}) and diameter + degree <= s + 2.
  const double cap = s + cfg.size_cap_offset;
  const auto selector = all_of_pred(
      annulus_overlap_pred(cfg.j0, cfg.annulus_width(s + 1)),
      size_cap_pred(cap));
  const HamiltonianPoly selected = truncate(state.R, selector);

  HomologicalSolution sol = solve_homological(selected, state.omega, cfg.tau);

  // Exactness of the solver: L_V F must reproduce the non-resonant part.
  const HamiltonianPoly nonres = resonant_split(selected).nonresonant;
  const double sel_norm = weighted_norm(nonres, np_s);
  double residual_rel = 0;
  if (sel_norm > 0) {
    const HamiltonianPoly resid = lie_derivative(sol.F, state.omega) - nonres;
    residual_rel = weighted_norm(resid, np_s) / sel_norm;
  }

  // Generator: with D = (1/2) sum V|q|^2 one has {D, G} = -L_V(G)/(-2i) ...
  // concretely {D, -2i F} = -(nonresonant part of the selection), the exact
  // first-order cancellation.
  const HamiltonianPoly G = Coeff(0, -2) * sol.F;
  const double g_norm = weighted_norm(G, np_s);
  const double contraction = (std::numbers::e / sigma) * g_norm;
  if (contraction > 0.5) throw ContractionError(contraction, 0.5);

  // Adaptive series order from the certified geometric tail
  // q^(m+1)/(1-q) <= tol, plus a measured early stop inside the loop.
  int order = cfg.lie_order;
  if (order <= 0) {
    const double q = contraction;
    if (q <= 0) {
      order = 0;
    } else {
      order = static_cast<int>(std::ceil(
                  std::log(cfg.series_tail_tol * (1 - q)) / std::log(q))) -
              1;
      order = std::clamp(order, 1, 60);
    }
  }

  const HamiltonianPoly ZR = state.Z + state.R;
  const double zr_norm = weighted_norm(ZR, np_s);
  const double stage_floor = cfg.series_tail_tol * std::max(zr_norm, 1e-300);

  // Transform D and Z+R separately so the diagonal is preserved exactly:
  // exp(ad_G) D = D + sum_{m>=1} ad_G^{m-1}({D,G})/m!.
  HamiltonianPoly transformed = ZR;
  {
    HamiltonianPoly stage = ZR;
    HamiltonianPoly dstage = poisson_bracket(state.D, G);  // m = 1 term
    int used = 0;
    for (int m = 1; m <= order; ++m) {
      if (m > 1) {
        dstage = poisson_bracket(dstage, G);
        dstage *= Coeff(1.0 / m);
        dstage.prune();
      }
      stage = poisson_bracket(stage, G);
      stage *= Coeff(1.0 / m);
      stage.prune();
      transformed += stage;
      transformed += dstage;
      used = m;
      if (stage.empty() && dstage.empty()) break;
      if (weighted_norm(stage, np_next) + weighted_norm(dstage, np_next) <=
          stage_floor)
        break;
    }
    order = used;
  }
  transformed.prune();

  ResonantSplit split = resonant_split(transformed);

  BnfState next;
  next.s = s + 1;
  next.omega = std::move(state.omega);
  next.D = std::move(state.D);
  next.Z = std::move(split.resonant);
  next.R = std::move(split.nonresonant);
  next.ledger = std::move(state.ledger);

  const double z_norm = weighted_norm(next.Z, np_next);
  const double r_norm = weighted_norm(next.R, np_next);
  const HamiltonianPoly r_sel_next = truncate(
      next.R, annulus_overlap_pred(cfg.j0, cfg.annulus_width(s + 2)));
  const double rsel_norm = weighted_norm(r_sel_next, np_next);

  auto push = [&next](int step, const std::string& name, double measured,
                      double bound, bool enforced) {
    next.ledger.push_back(
        {step, name, measured, bound, measured <= bound, enforced});
  };
  push(s, "F", g_norm, std::pow(eps, 0.9 * s), false);
  push(s, "contraction", contraction, 0.5, false);
  push(s, "hom_residual", residual_rel, 1e-12, true);
  push(s, "Z", z_norm, std::pow(eps, 0.9) * dyadic_partial_sum(s), false);
  push(s, "R", r_norm, std::pow(eps, 0.9) * dyadic_partial_sum(s), false);
  push(s, "Rcal", rsel_norm, std::pow(eps, 1.0 + 0.9 * s), false);
  record_slices(next.ledger, s, next.Z, next.R, np_next, eps);

  if (log) {
    log->step = s;
    log->selected_terms = selected.size();
    log->eliminated_terms = sol.F.size();
    log->order_used = order;
    log->contraction_lhs = contraction;
    log->residual_rel = residual_rel;
    log->norm_F = g_norm;
    log->norm_Z = z_norm;
    log->norm_R = r_norm;
    log->norm_Rsel = rsel_norm;
  }
  return next;
}

BnfResult run_bnf(const PotentialSpec& spec, const BnfConfig& cfg) {
  cfg.validate();
  const ValidationReport vr = validate_spec(spec);
  if (!vr.ok()) {
    std::string msg = "run_bnf: invalid potential spec:";
    for (auto& v : vr.violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }

  const Box box = Box::centered(spec.d, cfg.effective_box_halfwidth());
  const auto sites = box.sites();

  BnfState state;
  state.s = 1;
  state.omega = frequency_map(spec, sites);
  HamiltonianParts parts =
      build_hamiltonian(spec, box, cfg.epsilon1, cfg.epsilon2, cfg);
  state.D = std::move(parts.D);
  state.Z = std::move(parts.Z);
  state.R = std::move(parts.R);

  // Non-resonance pre-scan over the divisor index family for (L, M, j0).
  {
    ResonanceParams rp;
    rp.gamma = 0.5;  // only enters the reference threshold, not the family
    rp.L = spec.L;
    rp.M = cfg.M;
    rp.j0 = cfg.j0;
    rp.d = spec.d;
    rp.tau = cfg.tau;
    const auto indices = collect_divisor_indices(rp);
    const auto res = check_nonresonant(state.omega, cfg.tau, indices);
    if (!res.ok)
      throw std::runtime_error(
          "run_bnf: non-resonance pre-scan failed: |divisor| = " +
          std::to_string(std::abs(res.value)) + " < tau for k = " +
          to_string(*res.violated));
  }

  const double eps = cfg.epsilon();
  const NormParams np1{cfg.j0, cfg.M * cfg.M, cfg.r};
  state.ledger.push_back({0, "H1_minus_D",
                          weighted_norm(state.Z + state.R, np1),
                          std::pow(eps, 0.99), false, false});
  state.ledger.back().pass =
      state.ledger.back().measured <= state.ledger.back().bound;

  BnfResult result;
  for (int s = 1; s <= cfg.M; ++s) {
    StepLog log;
    state = bnf_step(std::move(state), cfg, &log);
    result.steps.push_back(log);
  }

  const NormParams np_final{cfg.j0, cfg.M * cfg.M, cfg.radius_at(cfg.M + 1)};
  result.final_Z_norm = weighted_norm(state.Z, np_final);
  result.final_R_norm = weighted_norm(state.R, np_final);
  const HamiltonianPoly barrier_part = truncate(
      state.R, annulus_overlap_pred(cfg.j0, 0.5 * cfg.M * cfg.M));
  result.final_Rbarrier_norm = weighted_norm(barrier_part, np_final);

  const double zr_bound = 2 * std::pow(eps, 0.9);
  const double barrier_bound = std::pow(eps, 0.9 * cfg.M);
  auto push_final = [&state](const std::string& name, double measured,
                             double bound, int step) {
    state.ledger.push_back(
        {step, name, measured, bound, measured <= bound, true});
  };
  push_final("Z_final", result.final_Z_norm, zr_bound, cfg.M + 1);
  push_final("R_final", result.final_R_norm, zr_bound, cfg.M + 1);
  push_final("Rbarrier_final", result.final_Rbarrier_norm, barrier_bound,
             cfg.M + 1);
  record_slices(state.ledger, cfg.M + 1, state.Z, state.R, np_final, eps);

  result.final_bounds_pass = result.final_Z_norm <= zr_bound &&
                             result.final_R_norm <= zr_bound &&
                             result.final_Rbarrier_norm <= barrier_bound;
  result.state = std::move(state);
  return result;
}

RemainderParts classify_remainder(const HamiltonianPoly& R,
                                  const BnfConfig& cfg) {
  RemainderParts out{HamiltonianPoly(R.dim()), HamiltonianPoly(R.dim()),
                     HamiltonianPoly(R.dim()),
                     {}};
  const double half_width = 0.5 * cfg.M * cfg.M;
  for (auto& [m, c] : R.terms()) {
    if (m.touches_annulus(cfg.j0, half_width)) {
      out.barrier.add_term(m, c);
    } else if (m.diameter() >= cfg.M + 4) {
      out.wide.add_term(m, c);
    } else {
      out.narrow.add_term(m, c);
      if (m.charge_outside(cfg.j0) != 0) out.flux_violations.push_back(m);
    }
  }
  return out;
}

}  // namespace qpnls
