#include "qpnls/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qpnls {

namespace {

double det_gauss(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = m[row][col] / m[col][col];
      for (std::size_t cc = col; cc < n; ++cc)
        m[row][cc] -= factor * m[col][cc];
    }
  }
  return det;
}

// k-th central finite difference of f at x with step h (uses half-integer
// offsets for odd k, so the stencil stays centered).
double central_diff(const std::function<double(double)>& f, double x, int k,
                    double h) {
  double num = 0;
  double binom = 1;
  for (int i = 0; i <= k; ++i) {
    num += (i % 2 == 0 ? 1.0 : -1.0) * binom * f(x + (k / 2.0 - i) * h);
    binom = binom * (k - i) / (i + 1);
  }
  return num / std::pow(h, k);
}

}  // namespace

Bgg85Result verify_bgg85(const std::vector<std::vector<double>>& basis,
                         const std::vector<double>& w) {
  const std::size_t r = basis.size();
  if (r == 0 || w.size() != r)
    throw std::invalid_argument("verify_bgg85: need r vectors of length r");
  for (auto& v : basis)
    if (v.size() != r)
      throw std::invalid_argument("verify_bgg85: basis vector length != r");

  Bgg85Result out;
  double M = 0;
  for (auto& v : basis) {
    double l1 = 0;
    for (double x : v) l1 += std::abs(x);
    M = std::max(M, l1);
  }
  out.det = det_gauss(basis);
  for (auto& v : basis) {
    double dot = 0;
    for (std::size_t i = 0; i < r; ++i) dot += w[i] * v[i];
    out.lhs = std::max(out.lhs, std::abs(dot));
  }
  double w2 = 0;
  for (double x : w) w2 += x * x;
  w2 = std::sqrt(w2);
  const double rd = static_cast<double>(r);
  out.rhs = (M == 0.0 && r > 1)
                ? 0.0
                : std::pow(rd, -1.5) * std::pow(M, 1.0 - rd) * w2 *
                      std::abs(out.det);
  out.holds = out.lhs >= out.rhs * (1 - 1e-12);
  return out;
}

double km98_zeta(int k) {
  // k (k+1) ((k+1)!)^(1/k)
  return k * (k + 1.0) * std::exp(std::lgamma(k + 2.0) / k);
}

Km98Result verify_km98(const std::function<double(double)>& f, double a,
                       double b, int k, double A, double gamma, long grid) {
  if (!(b > a) || k < 1 || !(A > 0) || gamma < 0 || grid < 16)
    throw std::invalid_argument("verify_km98: bad arguments");
  const double h = (b - a) / static_cast<double>(grid);

  Km98Result out;
  out.zeta = km98_zeta(k);
  out.bound = out.zeta * std::pow(gamma / A, 1.0 / k);

  // Certify the k-th derivative floor on the midpoint grid.
  const double hd = std::max(h, (b - a) * 1e-7);
  double min_fd = std::numeric_limits<double>::infinity();
  long inside = 0;
  long boundary_cells = 0;
  bool prev_in = false;
  for (long i = 0; i < grid; ++i) {
    const double x = a + (i + 0.5) * h;
    min_fd = std::min(min_fd, std::abs(central_diff(f, x, k, hd)));
    const bool in = std::abs(f(x)) <= gamma;
    if (in) ++inside;
    if (i > 0 && in != prev_in) ++boundary_cells;
    prev_in = in;
  }
  out.min_kth_derivative = min_fd;
  if (min_fd < A * (1 - 1e-6))
    throw std::domain_error(
        "verify_km98: derivative floor not certified on grid (min |f^(k)| = " +
        std::to_string(min_fd) + " < A = " + std::to_string(A) + ")");

  out.measured = inside * h;
  if (out.bound > 0) {
    const double err_est = (boundary_cells + 2) * h;
    if (err_est > 0.01 * out.bound)
      throw std::domain_error(
          "verify_km98: grid too coarse (measure error estimate " +
          std::to_string(err_est) + " above 1% of bound)");
  }
  out.holds = out.measured <= out.bound + 1e-12;
  return out;
}

Sw23Result verify_sw23(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& lo, const std::vector<double>& hi,
    const std::vector<double>& beta, int k, double A,
    const std::vector<double>& eps_seq, long grid_per_axis,
    long cert_grid_per_axis) {
  const std::size_t d = lo.size();
  if (d == 0 || hi.size() != d || beta.size() != d || k < 1 ||
      eps_seq.empty() || grid_per_axis < 8 || cert_grid_per_axis < 4)
    throw std::invalid_argument("verify_sw23: bad arguments");
  if (!(A > 0 && A < 1))
    throw std::invalid_argument("verify_sw23: requires 0 < A < 1");
  for (double e : eps_seq)
    if (!(e > 0 && e < A))
      throw std::invalid_argument("verify_sw23: requires 0 < eps < A");
  double beta_max = 0;
  for (double bcomp : beta) beta_max = std::max(beta_max, std::abs(bcomp));
  if (beta_max == 0)
    throw std::invalid_argument("verify_sw23: beta must be nonzero");
  double min_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d; ++i) {
    if (!(hi[i] > lo[i]))
      throw std::invalid_argument("verify_sw23: empty box axis");
    min_width = std::min(min_width, hi[i] - lo[i]);
  }

  Sw23Result out;
  out.eps = eps_seq;

  // Directional-derivative certification on an inset coarse grid (the FD
  // stencil must stay inside the box).
  const double tstep = 1e-4 * min_width / beta_max;
  const double margin = (k / 2.0 + 1) * tstep * beta_max;
  double min_dir = std::numeric_limits<double>::infinity();
  {
    std::vector<long> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
      for (std::size_t i = 0; i < d; ++i) {
        const double a = lo[i] + margin, b = hi[i] - margin;
        x[i] = a + (idx[i] + 0.5) * (b - a) / cert_grid_per_axis;
      }
      auto along = [&](double t) {
        std::vector<double> y(d);
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + t * beta[i];
        return f(y);
      };
      double best = 0;
      for (int l = 1; l <= k; ++l)
        best = std::max(best, std::abs(central_diff(along, 0.0, l, tstep)));
      min_dir = std::min(min_dir, best);
      std::size_t axis = d;
      while (axis > 0) {
        if (++idx[axis - 1] < cert_grid_per_axis) break;
        idx[axis - 1] = 0;
        --axis;
      }
      if (axis == 0) break;
    }
  }
  out.min_directional = min_dir;
  if (min_dir < A * (1 - 1e-6))
    throw std::domain_error(
        "verify_sw23: directional-derivative condition not certified "
        "(min sup_l |d_beta^l f| = " +
        std::to_string(min_dir) + " < A = " + std::to_string(A) + ")");

  // One pass over the fine midpoint grid, counting all thresholds at once.
  std::vector<long> counts(eps_seq.size(), 0);
  double cell_vol = 1;
  for (std::size_t i = 0; i < d; ++i)
    cell_vol *= (hi[i] - lo[i]) / grid_per_axis;
  {
    std::vector<long> idx(d, 0);
    std::vector<double> x(d);
    while (true) {
      for (std::size_t i = 0; i < d; ++i)
        x[i] = lo[i] + (idx[i] + 0.5) * (hi[i] - lo[i]) / grid_per_axis;
      const double fv = std::abs(f(x));
      for (std::size_t e = 0; e < eps_seq.size(); ++e)
        if (fv <= eps_seq[e]) ++counts[e];
      std::size_t axis = d;
      while (axis > 0) {
        if (++idx[axis - 1] < grid_per_axis) break;
        idx[axis - 1] = 0;
        --axis;
      }
      if (axis == 0) break;
    }
  }
  bool all_zero = true;
  for (std::size_t e = 0; e < eps_seq.size(); ++e) {
    out.measured.push_back(counts[e] * cell_vol);
    out.ratio.push_back(out.measured.back() /
                        std::pow(eps_seq[e], 1.0 / k));
    if (counts[e] != 0) all_zero = false;
  }
  if (all_zero) {
    out.holds = true;
  } else {
    const double baseline = out.ratio.front();
    double worst = 0;
    for (double r : out.ratio) worst = std::max(worst, r);
    out.holds = baseline > 0 && worst <= 2 * baseline;
  }
  return out;
}

}  // namespace qpnls
