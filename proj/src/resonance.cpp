#include "qpnls/resonance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qpnls/rng.hpp"

namespace qpnls {

double ResonanceParams::log10_reference_threshold() const {
  const double base =
      std::log10(gamma) -
      2.0 * (d + 1) *
          std::log10(2.0 * L * static_cast<double>(M) * M * j0);
  return 10.0 * std::pow(static_cast<double>(L), 4) *
         std::pow(static_cast<double>(M), 4) * base;
}

void ResonanceParams::validate() const {
  if (!(gamma > 0 && gamma < 1))
    throw std::invalid_argument("ResonanceParams: gamma must be in (0,1)");
  if (L < 1 || M < 1 || j0 < 1 || d < 1)
    throw std::invalid_argument("ResonanceParams: L, M, j0, d must be >= 1");
  if (tau < 0) throw std::invalid_argument("ResonanceParams: tau < 0");
  if (strict_floor) {
    const double log_tau = tau > 0 ? std::log10(tau) : -1e400;
    if (log_tau < log10_reference_threshold())
      throw std::invalid_argument(
          "ResonanceParams: strict mode requires log10(tau) >= " +
          std::to_string(log10_reference_threshold()));
  }
}

double DivisorIndex::diameter() const {
  double dmax = 0;
  for (auto a = k.begin(); a != k.end(); ++a)
    for (auto b = std::next(a); b != k.end(); ++b)
      dmax = std::max(dmax, dist(a->first, b->first));
  return dmax;
}

DivisorIndex DivisorIndex::negated() const {
  DivisorIndex out;
  for (auto& [site, v] : k) out.k[site] = -v;
  return out;
}

std::string to_string(const DivisorIndex& kk) {
  std::string out;
  for (auto& [site, v] : kk.k) {
    if (!out.empty()) out += ' ';
    out += to_string(site) + ":" + std::to_string(v);
  }
  return out.empty() ? "(empty)" : out;
}

double divisor_value(const DivisorIndex& k, const FrequencyMap& omega) {
  double s = 0;
  for (auto& [site, v] : k.k) {
    auto it = omega.find(site);
    if (it == omega.end())
      throw std::out_of_range("divisor_value: no frequency at site " +
                              to_string(site));
    s += v * it->second;
  }
  return s;
}

namespace {

// Sites with (j0 - N) - slack <= |j| <= (j0 + N) + slack.
std::vector<MultiIndex> radial_shell_sites(int d, double j0, double N,
                                           double slack) {
  const double lo = j0 - N - slack;
  const double hi = j0 + N + slack;
  const int hw = static_cast<int>(std::ceil(hi));
  std::vector<MultiIndex> out;
  double cells = 1;
  for (int i = 0; i < d; ++i) cells *= 2.0 * hw + 1;
  if (cells > 2e8)
    throw std::runtime_error(
        "divisor enumeration: candidate region exceeds 2e8 cells");
  for (auto& j : Box::centered(d, hw).sites()) {
    const double r = j.l2();
    if (r >= lo && r <= hi) out.push_back(j);
  }
  return out;
}

long ball_cardinality(int d, double radius) {
  const int hw = static_cast<int>(std::floor(radius));
  long n = 0;
  for (auto& j : Box::centered(d, hw).sites())
    if (j.l2() <= radius) ++n;
  return n;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Enumerate compositions of `total` into `parts` positive parts with
// independent signs, invoking fn(values).
bool signed_compositions(int total, int parts, std::vector<int>& values,
                         const std::function<bool(const std::vector<int>&)>& fn) {
  if (parts == 1) {
    for (int sign : {+1, -1}) {
      values.push_back(sign * total);
      const bool go = fn(values);
      values.pop_back();
      if (!go) return false;
    }
    return true;
  }
  for (int head = 1; head + (parts - 1) <= total; ++head) {
    for (int sign : {+1, -1}) {
      values.push_back(sign * head);
      const bool go =
          signed_compositions(total - head, parts - 1, values, fn);
      values.pop_back();
      if (!go) return false;
    }
  }
  return true;
}

struct SupportWalker {
  const std::vector<MultiIndex>& region;
  double j0, N;      // target annulus
  double max_diam;   // diameter budget
  int max_sites;
  const std::function<bool(const std::vector<MultiIndex>&)>& emit;
  std::vector<MultiIndex> current;

  bool extend(std::size_t from) {
    if (!current.empty()) {
      bool touches = false;
      for (auto& s : current)
        if (in_annulus(s, j0, N)) {
          touches = true;
          break;
        }
      if (touches && !emit(current)) return false;
    }
    if (static_cast<int>(current.size()) >= max_sites) return true;
    for (std::size_t i = from; i < region.size(); ++i) {
      bool fits = true;
      for (auto& s : current)
        if (dist(s, region[i]) > max_diam) {
          fits = false;
          break;
        }
      if (!fits) continue;
      current.push_back(region[i]);
      const bool go = extend(i + 1);
      current.pop_back();
      if (!go) return false;
    }
    return true;
  }
};

}  // namespace

std::uint64_t predicted_index_count(const ResonanceParams& p) {
  const int B = p.M + 2;
  const double N = static_cast<double>(p.M) * p.M;
  std::uint64_t total = 0;
  for (int t = 1; t <= B; ++t) {
    const double dmax = B - t;
    std::uint64_t region;
    {
      const int hw = static_cast<int>(std::ceil(p.j0 + N + dmax));
      double cells = 1;
      for (int i = 0; i < p.d; ++i) cells *= 2.0 * hw + 1;
      if (cells > 2e8) return UINT64_MAX;  // candidate region alone too big
      region = static_cast<std::uint64_t>(
          radial_shell_sites(p.d, p.j0, N, dmax).size());
    }
    const std::uint64_t ball =
        static_cast<std::uint64_t>(std::max(1L, ball_cardinality(p.d, dmax)));
    for (int parts = 1; parts <= t; ++parts) {
      std::uint64_t supports = region;
      for (int i = 1; i < parts; ++i) {
        if (supports > kEnumerationCap * 4) return UINT64_MAX;
        supports *= ball;
      }
      const std::uint64_t assignments =
          binomial(t - 1, parts - 1) * (1ULL << parts);
      if (supports > 0 && assignments > UINT64_MAX / supports)
        return UINT64_MAX;
      const std::uint64_t add = supports * assignments;
      if (total > UINT64_MAX - add) return UINT64_MAX;
      total += add;
    }
  }
  return total;
}

void enumerate_divisor_indices(
    const ResonanceParams& p,
    const std::function<bool(const DivisorIndex&)>& visit) {
  p.validate();
  const std::uint64_t predicted = predicted_index_count(p);
  if (predicted > kEnumerationCap)
    throw std::runtime_error(
        "divisor enumeration refused: predicted index count " +
        (predicted == UINT64_MAX ? std::string("overflows")
                                 : std::to_string(predicted)) +
        " exceeds cap " + std::to_string(kEnumerationCap));

  const int B = p.M + 2;
  const double N = static_cast<double>(p.M) * p.M;
  for (int t = 1; t <= B; ++t) {
    const double dmax = B - t;
    const auto region = radial_shell_sites(p.d, p.j0, N, dmax);
    bool keep_going = true;
    std::vector<int> values;
    const std::function<bool(const std::vector<MultiIndex>&)> on_support =
        [&](const std::vector<MultiIndex>& support) {
          const int parts = static_cast<int>(support.size());
          if (parts > t) return true;
          return signed_compositions(
              t, parts, values, [&](const std::vector<int>& vals) {
                DivisorIndex k;
                for (int i = 0; i < parts; ++i) k.k[support[i]] = vals[i];
                if (!visit(k)) {
                  keep_going = false;
                  return false;
                }
                return true;
              });
        };
    SupportWalker walker{region, static_cast<double>(p.j0), N,
                         dmax,   t,                         on_support,
                         {}};
    walker.extend(0);
    if (!keep_going) return;
  }
}

std::vector<DivisorIndex> collect_divisor_indices(const ResonanceParams& p) {
  std::vector<DivisorIndex> out;
  enumerate_divisor_indices(p, [&out](const DivisorIndex& k) {
    out.push_back(k);
    return true;
  });
  return out;
}

std::vector<MultiIndex> divisor_site_region(const ResonanceParams& p) {
  return radial_shell_sites(p.d, p.j0,
                            static_cast<double>(p.M) * p.M,
                            p.M + 1.0);
}

NonresonanceResult check_nonresonant(const FrequencyMap& omega, double tau,
                                     const std::vector<DivisorIndex>& indices) {
  for (auto& k : indices) {
    const double v = divisor_value(k, omega);
    if (std::abs(v) < tau) return {false, k, v};
  }
  return {};
}

double wilson_halfwidth(long x, long n) {
  if (n <= 0) return 0;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double phat = static_cast<double>(x) / n;
  const double denom = 1.0 + z * z / n;
  return z *
         std::sqrt(phat * (1 - phat) / n + z * z / (4.0 * n * n)) / denom;
}

MeasureEstimate estimate_resonant_measure(const ResonanceParams& p,
                                          const PotentialSpec& spec_template,
                                          long samples, std::uint64_t seed,
                                          int workers) {
  p.validate();
  if (samples < 100)
    throw std::invalid_argument("estimate_resonant_measure: need >= 100 samples");
  const auto indices = collect_divisor_indices(p);

  // Compile: site list + per-index (site slot, coefficient) pairs.
  std::vector<MultiIndex> sites;
  for (auto& k : indices)
    for (auto& [site, v] : k.k) sites.push_back(site);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  std::map<MultiIndex, int> slot;
  for (std::size_t i = 0; i < sites.size(); ++i)
    slot[sites[i]] = static_cast<int>(i);
  std::vector<std::vector<std::pair<int, int>>> compiled;
  compiled.reserve(indices.size());
  for (auto& k : indices) {
    std::vector<std::pair<int, int>> rows;
    for (auto& [site, v] : k.k) rows.push_back({slot[site], v});
    compiled.push_back(std::move(rows));
  }

  const int nworkers = std::max(1, workers);
  std::atomic<long> failures{0};
  auto run_chunk = [&](long lo, long hi) {
    std::vector<double> omega(sites.size());
    long local = 0;
    for (long i = lo; i < hi; ++i) {
      auto rng = make_stream(seed, static_cast<std::uint64_t>(i));
      std::vector<double> theta(p.d), alpha(p.d);
      for (int a = 0; a < p.d; ++a) theta[a] = uniform01(rng);
      for (int a = 0; a < p.d; ++a) alpha[a] = uniform01(rng);
      const PotentialSpec sample = with_phases(spec_template, theta, alpha);
      for (std::size_t s = 0; s < sites.size(); ++s)
        omega[s] = eval_potential(sample, sites[s]);
      for (auto& rows : compiled) {
        double v = 0;
        for (auto& [sl, coeff] : rows) v += coeff * omega[sl];
        if (std::abs(v) < p.tau) {
          ++local;
          break;
        }
      }
    }
    failures += local;
  };

  if (nworkers == 1) {
    run_chunk(0, samples);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (samples + nworkers - 1) / nworkers;
    for (int w = 0; w < nworkers; ++w) {
      const long lo = w * chunk;
      const long hi = std::min(samples, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_chunk, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  MeasureEstimate out;
  out.samples = samples;
  out.failures = failures.load();
  out.fraction = static_cast<double>(out.failures) / samples;
  out.ci_halfwidth = wilson_halfwidth(out.failures, samples);
  return out;
}

}  // namespace qpnls
