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

#pragma once

#include <span>
#include <vector>

namespace storyeval {

struct Corr {
  double coefficient = 0.0;
  double p_value = 1.0;
};

/// Sample Pearson correlation; two-sided p-value from the t statistic
/// t = r sqrt((n-2)/(1-r^2)) with n-2 degrees of freedom.
/// Requires equal lengths >= 3 and non-constant inputs.
Corr pearson(std::span<const double> x, std::span<const double> y);

/// Pearson over average ranks (ties share their rank mean); p-value via the
/// same t approximation.
Corr spearman(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b with tie correction, O(n log n) via merge counting;
/// p-value from the tie-adjusted normal approximation.
Corr kendall(std::span<const double> x, std::span<const double> y);

/// Average ranks, 1-based; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

namespace special {

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);
/// Upper regularized incomplete gamma Q(s, x).
double incomplete_gamma_upper(double s, double x);
/// P(T > t) for Student's t with df degrees of freedom, t >= 0.
double student_t_sf(double t, double df);
/// P(Z > z) for the standard normal.
double normal_sf(double z);
/// P(X > x) for chi-squared with df degrees of freedom.
double chi_square_sf(double x, double df);

}  // namespace special

}  // namespace storyeval
