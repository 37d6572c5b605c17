// Copyright 2026 The storyeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "storyeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("correlation: length mismatch");
  if (x.size() < 3) throw Error("correlation: need at least 3 samples");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y))
    throw Error("correlation: undefined for a constant input");
}

double two_sided_t_pvalue(double r, std::size_t n) {
  double df = static_cast<double>(n - 2);
  double one_minus_r2 = (1.0 - r) * (1.0 + r);
  if (one_minus_r2 <= 0.0) return 0.0;
  double t = std::fabs(r) * std::sqrt(df / one_minus_r2);
  return std::clamp(2.0 * special::student_t_sf(t, df), 0.0, 1.0);
}

}  // namespace

Corr pearson(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const std::size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);
  return {r, two_sided_t_pvalue(r, n)};
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

Corr spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  std::vector<double> rx = average_ranks(x);
  std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

namespace {

// Merge sort that counts inversions; used for the discordant pair count.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& tmp,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, tmp, lo, mid) +
                      count_inversions(v, tmp, mid, hi);
  std::size_t a = lo, b = mid, out = lo;
  while (a < mid && b < hi) {
    if (v[b] < v[a]) {
      inv += mid - a;
      tmp[out++] = v[b++];
    } else {
      tmp[out++] = v[a++];
    }
  }
  while (a < mid) tmp[out++] = v[a++];
  while (b < hi) tmp[out++] = v[b++];
  std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
  return inv;
}

struct TieStats {
  double pairs = 0;   // sum t(t-1)/2
  double term0 = 0;   // sum t(t-1)(t-2)
  double term1 = 0;   // sum t(t-1)(2t+5)
};

template <typename Eq>
TieStats tie_stats(std::size_t n, Eq&& same_group) {
  TieStats s;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && same_group(j, j + 1)) ++j;
    double t = static_cast<double>(j - i + 1);
    s.pairs += t * (t - 1) / 2.0;
    s.term0 += t * (t - 1) * (t - 2);
    s.term1 += t * (t - 1) * (2 * t + 5);
    i = j + 1;
  }
  return s;
}

}  // namespace

Corr kendall(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  TieStats xt = tie_stats(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]];
  });
  TieStats yt;
  {
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    std::sort(ys.begin(), ys.end());
    yt = tie_stats(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });
  }
  TieStats joint = tie_stats(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
  });

  std::vector<double> y_sorted_by_x(n);
  for (std::size_t i = 0; i < n; ++i) y_sorted_by_x[i] = y[order[i]];
  std::vector<double> tmp(n);
  double discordant = static_cast<double>(
      count_inversions(y_sorted_by_x, tmp, 0, n));

  double total = static_cast<double>(n) * (n - 1) / 2.0;
  double con_minus_dis =
      total - xt.pairs - yt.pairs + joint.pairs - 2.0 * discordant;
  double denom = std::sqrt((total - xt.pairs) * (total - yt.pairs));
  if (denom <= 0.0) throw Error("kendall: undefined for a constant input");
  double tau = std::clamp(con_minus_dis / denom, -1.0, 1.0);

  // Tie-adjusted asymptotic variance of (concordant - discordant).
  double m = static_cast<double>(n) * (n - 1);
  double var = (m * (2.0 * n + 5) - xt.term1 - yt.term1) / 18.0 +
               (2.0 * xt.pairs * yt.pairs) / m +
               xt.term0 * yt.term0 / (9.0 * m * (n - 2));
  double p = 1.0;
  if (var > 0.0) {
    double z = con_minus_dis / std::sqrt(var);
    p = std::clamp(2.0 * special::normal_sf(std::fabs(z)), 0.0, 1.0);
  }
  return {tau, p};
}

namespace special {

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double incomplete_gamma_upper(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw Error("incomplete_gamma_upper: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) {
    // Lower series, then complement.
    double term = 1.0 / s;
    double sum = term;
    double ap = s;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 3e-16) break;
    }
    double lower = sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    return 1.0 - lower;
  }
  // Continued fraction for the upper tail.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 3e-16) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double student_t_sf(double t, double df) {
  if (t < 0.0) return 1.0 - student_t_sf(-t, df);
  if (!std::isfinite(t)) return 0.0;
  double x = df / (df + t * t);
  return 0.5 * incomplete_beta(df / 2.0, 0.5, x);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return incomplete_gamma_upper(df / 2.0, x / 2.0);
}

}  // namespace special

}  // namespace storyeval
