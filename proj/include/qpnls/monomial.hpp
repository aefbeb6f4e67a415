#pragma once

#include <algorithm>
#include <compare>
#include <stdexcept>
#include <vector>

#include "qpnls/lattice.hpp"

namespace qpnls {

/// Exponents of q_j and conjugate(q_j) at one site.
struct SiteExponents {
  int q = 0;
  int qbar = 0;
  bool operator==(const SiteExponents&) const = default;
  auto operator<=>(const SiteExponents&) const = default;
};

/// A product  prod_j q_j^{n_j} conj(q_j)^{n'_j}  over a finite support.
/// Entries are kept sorted by site (lexicographic coords) and never store a
/// site with both exponents zero, so equal monomials compare equal and
/// serialize identically. Size data (total degree, support diameter) is
/// cached at construction.
class Monomial {
 public:
  using Entry = std::pair<MultiIndex, SiteExponents>;

  Monomial() = default;  // empty product

  /// Build from possibly unsorted entries; duplicate sites are merged by
  /// exponent addition, zero entries dropped. Negative exponents are
  /// rejected.
  static Monomial make(std::vector<Entry> entries) {
    for (auto& [site, e] : entries) {
      if (e.q < 0 || e.qbar < 0)
        throw std::invalid_argument("Monomial: negative exponent");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Monomial m;
    for (auto& [site, e] : entries) {
      if (!m.entries_.empty() && m.entries_.back().first == site) {
        m.entries_.back().second.q += e.q;
        m.entries_.back().second.qbar += e.qbar;
      } else {
        if (!m.entries_.empty() &&
            m.entries_.back().first.dim() != site.dim())
          throw std::invalid_argument("Monomial: mixed dimensions");
        m.entries_.push_back({site, e});
      }
    }
    std::erase_if(m.entries_, [](const Entry& en) {
      return en.second.q == 0 && en.second.qbar == 0;
    });
    m.degree_ = 0;
    for (auto& [site, e] : m.entries_) m.degree_ += e.q + e.qbar;
    m.diameter_ = 0;
    for (std::size_t a = 0; a < m.entries_.size(); ++a)
      for (std::size_t b = a + 1; b < m.entries_.size(); ++b)
        m.diameter_ = std::max(
            m.diameter_, dist(m.entries_[a].first, m.entries_[b].first));
    return m;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int dim() const { return entries_.empty() ? 0 : entries_[0].first.dim(); }

  /// |n|_1 = sum of all exponents.
  int degree() const { return degree_; }

  /// Delta(n): max Euclidean distance between support sites (0 if <= 1 site).
  double diameter() const { return diameter_; }

  /// n_j = n'_j at every site.
  bool resonant() const {
    for (auto& [site, e] : entries_)
      if (e.q != e.qbar) return false;
    return true;
  }

  SiteExponents exponents_at(const MultiIndex& site) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), site,
        [](const Entry& en, const MultiIndex& s) { return en.first < s; });
    if (it != entries_.end() && it->first == site) return it->second;
    return {};
  }

  /// Sum over all sites of (n_j - n'_j).
  int total_charge() const {
    int s = 0;
    for (auto& [site, e] : entries_) s += e.q - e.qbar;
    return s;
  }

  /// Sum over sites with |j| > radius of (n_j - n'_j).
  int charge_outside(double radius) const {
    int s = 0;
    for (auto& [site, e] : entries_)
      if (site.l2() > radius) s += e.q - e.qbar;
    return s;
  }

  bool touches_annulus(double j0, double N) const {
    for (auto& [site, e] : entries_)
      if (in_annulus(site, j0, N)) return true;
    return false;
  }

  /// Swap q and qbar exponents at every site.
  Monomial conjugate() const {
    Monomial m = *this;
    for (auto& [site, e] : m.entries_) std::swap(e.q, e.qbar);
    return m;
  }

  bool operator==(const Monomial& o) const { return entries_ == o.entries_; }
  auto operator<=>(const Monomial& o) const { return entries_ <=> o.entries_; }

 private:
  std::vector<Entry> entries_;
  int degree_ = 0;
  double diameter_ = 0;
};

inline std::string to_string(const Monomial& m) {
  if (m.empty()) return "1";
  std::string out;
  for (auto& [site, e] : m.entries()) {
    if (!out.empty()) out += ' ';
    out += to_string(site) + ":(" + std::to_string(e.q) + "," +
           std::to_string(e.qbar) + ")";
  }
  return out;
}

}  // namespace qpnls
