#include "qpnls/poly.hpp"

#include <algorithm>
#include <cmath>

namespace qpnls {

HamiltonianPoly& HamiltonianPoly::operator+=(const HamiltonianPoly& o) {
  if (o.dim_ != dim_)
    throw std::invalid_argument("HamiltonianPoly: dimension mismatch");
  for (auto& [m, c] : o.terms_) add_term(m, c);
  prune();
  return *this;
}

HamiltonianPoly& HamiltonianPoly::operator-=(const HamiltonianPoly& o) {
  if (o.dim_ != dim_)
    throw std::invalid_argument("HamiltonianPoly: dimension mismatch");
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  prune();
  return *this;
}

HamiltonianPoly& HamiltonianPoly::operator*=(Coeff s) {
  if (s == Coeff(0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

HamiltonianPoly operator+(HamiltonianPoly a, const HamiltonianPoly& b) {
  a += b;
  return a;
}

HamiltonianPoly operator-(HamiltonianPoly a, const HamiltonianPoly& b) {
  a -= b;
  return a;
}

HamiltonianPoly operator*(Coeff s, HamiltonianPoly a) {
  a *= s;
  return a;
}

bool is_self_adjoint(const HamiltonianPoly& W, double tol) {
  const double floor = tol * W.max_abs_coeff();
  for (auto& [m, c] : W.terms()) {
    Coeff partner = W.coeff(m.conjugate());
    if (std::abs(c - std::conj(partner)) > floor) return false;
  }
  return true;
}

namespace {

// Merged exponents of two monomials with both slots at `at` reduced by one.
// The two decrements may have to land on different operands (n may carry the
// q power and m the qbar power), so place each on an entry that can absorb it.
Monomial combine_at(const Monomial& n, const Monomial& m,
                    const MultiIndex& at) {
  std::vector<Monomial::Entry> entries;
  entries.reserve(n.entries().size() + m.entries().size());
  entries.insert(entries.end(), n.entries().begin(), n.entries().end());
  entries.insert(entries.end(), m.entries().begin(), m.entries().end());
  bool took_q = false, took_qbar = false;
  for (auto& [site, e] : entries) {
    if (!(site == at)) continue;
    if (!took_q && e.q >= 1) {
      e.q -= 1;
      took_q = true;
    }
    if (!took_qbar && e.qbar >= 1) {
      e.qbar -= 1;
      took_qbar = true;
    }
    if (took_q && took_qbar) break;
  }
  return Monomial::make(std::move(entries));
}

}  // namespace

HamiltonianPoly poisson_bracket(const HamiltonianPoly& W,
                                const HamiltonianPoly& U) {
  if (W.dim() != U.dim())
    throw std::invalid_argument("poisson_bracket: dimension mismatch");
  const Coeff I(0, 1);
  HamiltonianPoly out(W.dim());
  for (auto& [n, wc] : W.terms()) {
    for (auto& [m, uc] : U.terms()) {
      // Walk common support sites (both entry lists are sorted).
      auto itn = n.entries().begin();
      auto itm = m.entries().begin();
      while (itn != n.entries().end() && itm != m.entries().end()) {
        if (itn->first < itm->first) {
          ++itn;
        } else if (itm->first < itn->first) {
          ++itm;
        } else {
          const long factor =
              static_cast<long>(itn->second.q) * itm->second.qbar -
              static_cast<long>(itn->second.qbar) * itm->second.q;
          if (factor != 0)
            out.add_term(combine_at(n, m, itn->first),
                         I * wc * uc * static_cast<double>(factor));
          ++itn;
          ++itm;
        }
      }
    }
  }
  out.prune();
  return out;
}

double monomial_divisor(const Monomial& m, const FrequencyMap& omega) {
  double s = 0;
  for (auto& [site, e] : m.entries()) {
    if (e.q == e.qbar) continue;
    auto it = omega.find(site);
    if (it == omega.end())
      throw std::out_of_range("monomial_divisor: no frequency at site " +
                              to_string(site));
    s += static_cast<double>(e.q - e.qbar) * it->second;
  }
  return s;
}

HamiltonianPoly lie_derivative(const HamiltonianPoly& W,
                               const FrequencyMap& omega) {
  HamiltonianPoly out(W.dim());
  for (auto& [m, c] : W.terms()) {
    if (m.resonant()) continue;
    out.add_term(m, c * monomial_divisor(m, omega));
  }
  return out;
}

ResonantSplit resonant_split(const HamiltonianPoly& W) {
  ResonantSplit out{HamiltonianPoly(W.dim()), HamiltonianPoly(W.dim())};
  for (auto& [m, c] : W.terms())
    (m.resonant() ? out.resonant : out.nonresonant).add_term(m, c);
  return out;
}

HamiltonianPoly truncate(const HamiltonianPoly& W,
                         const MonomialPredicate& keep) {
  HamiltonianPoly out(W.dim());
  for (auto& [m, c] : W.terms())
    if (keep(m)) out.add_term(m, c);
  return out;
}

MonomialPredicate annulus_overlap_pred(double j0, double N) {
  return [j0, N](const Monomial& m) { return m.touches_annulus(j0, N); };
}

MonomialPredicate size_cap_pred(double max_size) {
  return [max_size](const Monomial& m) {
    return m.diameter() + m.degree() <= max_size;
  };
}

MonomialPredicate all_of_pred(MonomialPredicate a, MonomialPredicate b) {
  return [a = std::move(a), b = std::move(b)](const Monomial& m) {
    return a(m) && b(m);
  };
}

double weighted_norm(const HamiltonianPoly& W, int j0, double N, double r) {
  if (r <= 2)
    throw std::invalid_argument("weighted_norm: requires r > 2, got r = " +
                                std::to_string(r));
  double s = 0;
  for (auto& [m, c] : W.terms()) {
    if (!m.touches_annulus(j0, N)) continue;
    s += std::abs(c) * m.degree() *
         std::pow(r, m.diameter() + m.degree() - 1);
  }
  return s;
}

double grade_by_size(const HamiltonianPoly& W, int A, const NormParams& p) {
  HamiltonianPoly slice(W.dim());
  for (auto& [m, c] : W.terms()) {
    const double size = m.diameter() + m.degree();
    if (size > A - 1 && size <= A) slice.add_term(m, c);
  }
  return weighted_norm(slice, p);
}

}  // namespace qpnls
