#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qpnls {

/// A point of Z^d. Doubles as a lattice site and as an integer frequency
/// vector. The dimension d is fixed per workspace; mixing dimensions in one
/// computation is a caller error and is checked where cheap.
struct MultiIndex {
  std::vector<int> c;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> coords) : c(std::move(coords)) {}
  static MultiIndex of(std::initializer_list<int> coords) {
    return MultiIndex(std::vector<int>(coords));
  }

  int dim() const { return static_cast<int>(c.size()); }

  long l1() const {
    long s = 0;
    for (int x : c) s += std::abs(static_cast<long>(x));
    return s;
  }

  double l2() const {
    double s = 0;
    for (int x : c) s += static_cast<double>(x) * x;
    return std::sqrt(s);
  }

  bool operator==(const MultiIndex&) const = default;
  auto operator<=>(const MultiIndex&) const = default;  // lexicographic
};

inline double dist(const MultiIndex& a, const MultiIndex& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    double dx = static_cast<double>(a.c[i]) - b.c[i];
    s += dx * dx;
  }
  return std::sqrt(s);
}

inline long l1_dist(const MultiIndex& a, const MultiIndex& b) {
  long s = 0;
  for (int i = 0; i < a.dim(); ++i)
    s += std::abs(static_cast<long>(a.c[i]) - b.c[i]);
  return s;
}

inline std::string to_string(const MultiIndex& j) {
  std::string out;
  for (int i = 0; i < j.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(j.c[i]);
  }
  return out;
}

/// Annulus membership: | |j| - j0 | <= N with Euclidean |j|.
/// N is a double so half-integer widths (M^2/2 for odd M) work.
inline bool in_annulus(const MultiIndex& j, double j0, double N) {
  return std::abs(j.l2() - j0) <= N;
}

/// Parameters of the weighted norm ||.||_{j0,N,r}.
struct NormParams {
  int j0 = 1;
  int N = 1;
  double r = 4.0;  // weight base, must exceed 2

  bool contains(const MultiIndex& j) const { return in_annulus(j, j0, N); }
};

/// Axis-aligned finite sublattice of Z^d, inclusive ranges per axis.
struct Box {
  std::vector<std::pair<int, int>> range;

  Box() = default;
  explicit Box(std::vector<std::pair<int, int>> r) : range(std::move(r)) {
    for (auto& [lo, hi] : range)
      if (lo > hi) throw std::invalid_argument("Box: empty axis range");
  }

  static Box centered(int d, int halfwidth) {
    return Box(std::vector<std::pair<int, int>>(
        static_cast<std::size_t>(d), {-halfwidth, halfwidth}));
  }

  int dim() const { return static_cast<int>(range.size()); }

  bool contains(const MultiIndex& j) const {
    if (j.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (j.c[i] < range[i].first || j.c[i] > range[i].second) return false;
    return true;
  }

  long site_count() const {
    long n = 1;
    for (auto& [lo, hi] : range) n *= (hi - lo + 1);
    return n;
  }

  /// Row-major linear index; -1 if outside.
  long index_of(const MultiIndex& j) const {
    if (!contains(j)) return -1;
    long idx = 0;
    for (int i = 0; i < dim(); ++i)
      idx = idx * (range[i].second - range[i].first + 1) +
            (j.c[i] - range[i].first);
    return idx;
  }

  /// All sites in row-major (lexicographic) order.
  std::vector<MultiIndex> sites() const {
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(site_count()));
    MultiIndex cur;
    cur.c.resize(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) cur.c[i] = range[i].first;
    while (true) {
      out.push_back(cur);
      int axis = dim() - 1;
      while (axis >= 0) {
        if (++cur.c[axis] <= range[axis].second) break;
        cur.c[axis] = range[axis].first;
        --axis;
      }
      if (axis < 0) break;
    }
    return out;
  }
};

}  // namespace qpnls
