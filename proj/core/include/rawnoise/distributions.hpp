// Copyright (c) 2026 The rawnoise project authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>
#include <optional>
#include <string>

namespace rawnoise {

/// The bell-shaped distribution set used to model signal-independent noise.
/// Weibull and Gamma are fitted in their three-parameter forms (free
/// location) since the noise is zero-centered but their natural support is
/// one-sided.
enum class DistFamily { StudentT, Weibull, TukeyLambda, Gaussian, Gamma };

inline constexpr DistFamily kAllFamilies[] = {
    DistFamily::StudentT, DistFamily::Weibull, DistFamily::TukeyLambda,
    DistFamily::Gaussian, DistFamily::Gamma};

std::string to_string(DistFamily family);
DistFamily dist_family_from_string(const std::string& name);

/// A location-scale(-shape) distribution with evaluable pdf/cdf/quantile.
/// shape is the Student-t dof, the Weibull/Gamma shape k, or the Tukey
/// Lambda lambda; Gaussian has none.
struct FittedDistribution {
  DistFamily family = DistFamily::Gaussian;
  double location = 0.0;
  double scale = 1.0;
  std::optional<double> shape;
  double gof_statistic = 0.0;  // KS distance vs the fitting sample

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;  // p in [0, 1]; may return +-inf

  double support_lo() const;  // -inf when unbounded below
  double support_hi() const;

  /// Throws std::invalid_argument on scale <= 0 or a shape outside the
  /// family's constraint (Weibull/Gamma shape > 0, StudentT dof > 0).
  void validate() const;
};

FittedDistribution make_gaussian(double mean, double sigma);
FittedDistribution make_student_t(double location, double scale, double dof);
FittedDistribution make_tukey_lambda(double location, double scale, double lambda);
FittedDistribution make_weibull(double location, double scale, double shape);
FittedDistribution make_gamma(double location, double scale, double shape);

// Unit (location 0, scale 1) Tukey Lambda primitives. The family is defined
// by its quantile function Q(p) = (p^l - (1-p)^l) / l, with the logistic
// Q(p) = log(p / (1-p)) at l = 0.
double tukey_lambda_quantile(double p, double lambda);
double tukey_lambda_cdf(double x, double lambda);
double tukey_lambda_pdf(double x, double lambda);
/// Variance of the unit family; finite for lambda > -0.5.
double tukey_lambda_variance(double lambda);

double gaussian_cdf(double z);       // standard normal
double gaussian_quantile(double p);  // standard normal

}  // namespace rawnoise
