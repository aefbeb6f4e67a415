#pragma once

#include <functional>
#include <vector>

namespace qpnls {

/// max_l |w . v^(l)| >= r^(-3/2) M^(1-r) |w|_2 |det[v]| for linearly
/// independent integer-ish bases with |v^(l)|_1 <= M. `M` is taken as the
/// largest l1 norm among the basis vectors. A singular basis makes the right
/// side 0 and the inequality trivially true (reported, not thrown).
struct Bgg85Result {
  double lhs = 0;
  double rhs = 0;
  double det = 0;
  bool holds = false;
};
Bgg85Result verify_bgg85(const std::vector<std::vector<double>>& basis,
                         const std::vector<double>& w);

/// Sublevel-measure bound for a 1-D function with a k-th derivative floor:
/// meas{|f| <= gamma} <= zeta_k (gamma/A)^(1/k),
/// zeta_k = k(k+1)((k+1)!)^(1/k). The measure is estimated on a uniform
/// midpoint grid; the k-th derivative floor is certified on the same grid by
/// central finite differences. Throws std::domain_error if the floor fails
/// or the grid is too coarse for a 1%-of-bound measure estimate.
struct Km98Result {
  double measured = 0;
  double bound = 0;
  double zeta = 0;
  double min_kth_derivative = 0;
  bool holds = false;
};
Km98Result verify_km98(const std::function<double(double)>& f, double a,
                       double b, int k, double A, double gamma,
                       long grid = 200000);

double km98_zeta(int k);

/// Scaling check for the d-dimensional sublevel bound with a directional
/// derivative condition: inf_x sup_{1<=l<=k} |d_beta^l f| >= A certified on a
/// coarse grid, then meas{|f| <= eps} estimated on a fine midpoint grid for
/// each eps in a dyadic sequence. Since the bound's constant is not
/// explicit, the check is that measured / eps^(1/k) stays bounded as eps
/// shrinks (within a factor 2 of the first ratio).
struct Sw23Result {
  std::vector<double> eps;
  std::vector<double> measured;
  std::vector<double> ratio;  // measured / eps^(1/k)
  double min_directional = 0;
  bool holds = false;
};
Sw23Result verify_sw23(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& lo, const std::vector<double>& hi,
    const std::vector<double>& beta, int k, double A,
    const std::vector<double>& eps_seq, long grid_per_axis = 2048,
    long cert_grid_per_axis = 128);

}  // namespace qpnls
