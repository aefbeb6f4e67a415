#pragma once

#include <complex>
#include <functional>
#include <map>

#include "qpnls/lattice.hpp"
#include "qpnls/monomial.hpp"

namespace qpnls {

using Coeff = std::complex<double>;

/// Relative coefficient floor: after each algebra operation, terms with
/// |c| < kPruneRel * max|c| are dropped, as are constant terms (empty
/// support generates no dynamics).
inline constexpr double kPruneRel = 1e-16;

/// Sparse polynomial in (q_j, conj(q_j)) over lattice multi-indices,
/// represented as a map monomial -> complex coefficient. Values are
/// immutable in spirit: algebra operations are pure functions returning new
/// polynomials. Iteration order is the canonical monomial order, so
/// serialization and norms are deterministic.
class HamiltonianPoly {
 public:
  using TermMap = std::map<Monomial, Coeff>;

  explicit HamiltonianPoly(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("HamiltonianPoly: dim < 1");
  }

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Coeff coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  /// Accumulate c into the coefficient of m. Constants (empty m) are
  /// silently dropped.
  void add_term(const Monomial& m, Coeff c) {
    if (m.empty()) return;
    if (!m.entries().empty() && m.dim() != dim_)
      throw std::invalid_argument("HamiltonianPoly: monomial dimension");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Drop terms below the relative floor and exact zeros.
  void prune(double rel = kPruneRel) {
    const double floor = rel * max_abs_coeff();
    std::erase_if(terms_, [floor](const auto& kv) {
      return std::abs(kv.second) <= floor;
    });
  }

  HamiltonianPoly& operator+=(const HamiltonianPoly& o);
  HamiltonianPoly& operator-=(const HamiltonianPoly& o);
  HamiltonianPoly& operator*=(Coeff s);

 private:
  int dim_;
  TermMap terms_;
};

HamiltonianPoly operator+(HamiltonianPoly a, const HamiltonianPoly& b);
HamiltonianPoly operator-(HamiltonianPoly a, const HamiltonianPoly& b);
HamiltonianPoly operator*(Coeff s, HamiltonianPoly a);

/// Checks the reality structure of a Hamiltonian: coefficient of (n, n')
/// equals conj(coefficient of (n', n)) within tol * max|c|.
bool is_self_adjoint(const HamiltonianPoly& W, double tol = 1e-13);

/// Poisson bracket {W, U} = i sum_j (dW/dq_j dU/dqbar_j - dW/dqbar_j dU/dq_j),
/// computed termwise: a pair of monomials (n, m) contributes at each common
/// site k the factor (n_k m'_k - n'_k m_k) on the merged exponents reduced by
/// one in both slots at k.
HamiltonianPoly poisson_bracket(const HamiltonianPoly& W,
                                const HamiltonianPoly& U);

/// Site frequencies (omega_j = V_j in the normal form).
using FrequencyMap = std::map<MultiIndex, double>;

/// Small divisor of a monomial: S(n) = sum_j (n_j - n'_j) omega_j.
/// Throws std::out_of_range naming the site if omega lacks one.
double monomial_divisor(const Monomial& m, const FrequencyMap& omega);

/// Multiplies each monomial by its small divisor S(n); resonant terms get 0
/// and vanish. (The linearization of the bracket with the diagonal part.)
HamiltonianPoly lie_derivative(const HamiltonianPoly& W,
                               const FrequencyMap& omega);

struct ResonantSplit {
  HamiltonianPoly resonant;     // n_j = n'_j at every site
  HamiltonianPoly nonresonant;  // the rest; resonant + nonresonant == input
};
ResonantSplit resonant_split(const HamiltonianPoly& W);

using MonomialPredicate = std::function<bool(const Monomial&)>;

/// Keeps exactly the terms satisfying the predicate (a pure function of
/// support, diameter and degree). No pruning: selection is exact.
HamiltonianPoly truncate(const HamiltonianPoly& W,
                         const MonomialPredicate& keep);

MonomialPredicate annulus_overlap_pred(double j0, double N);
MonomialPredicate size_cap_pred(double max_size);  // diameter + degree <= cap
MonomialPredicate all_of_pred(MonomialPredicate a, MonomialPredicate b);

/// Weighted norm: sum over monomials whose support meets A(j0, N) of
/// |c| * |n|_1 * r^(Delta(n) + |n|_1 - 1). Requires r > 2.
double weighted_norm(const HamiltonianPoly& W, int j0, double N, double r);
inline double weighted_norm(const HamiltonianPoly& W, const NormParams& p) {
  return weighted_norm(W, p.j0, p.N, p.r);
}

/// Weighted norm of the slice with Delta(n) + |n|_1 in (A-1, A]. For d = 1
/// the size is an integer and the slice is exactly Delta + |n|_1 == A; the
/// half-open binning keeps the slices a partition when Delta is irrational.
double grade_by_size(const HamiltonianPoly& W, int A, const NormParams& p);

}  // namespace qpnls
