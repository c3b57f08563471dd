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

#include "rawnoise/distributions.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/distributions/weibull.hpp>
#include <cmath>
#include <stdexcept>

#include "rawnoise/errors.hpp"

namespace rawnoise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Clamp boost policy exceptions away from the hot paths: evaluate at the
// interior and special-case the endpoints ourselves.
using boost::math::policies::domain_error;
using boost::math::policies::ignore_error;
using boost::math::policies::overflow_error;
using boost::math::policies::policy;
using quiet_policy = policy<domain_error<ignore_error>, overflow_error<ignore_error>>;

using normal_d = boost::math::normal_distribution<double, quiet_policy>;
using student_d = boost::math::students_t_distribution<double, quiet_policy>;
using weibull_d = boost::math::weibull_distribution<double, quiet_policy>;
using gamma_d = boost::math::gamma_distribution<double, quiet_policy>;

constexpr bool near_zero(double lambda) { return std::abs(lambda) < 1e-12; }

}  // namespace

std::string to_string(DistFamily family) {
  switch (family) {
    case DistFamily::StudentT: return "student_t";
    case DistFamily::Weibull: return "weibull";
    case DistFamily::TukeyLambda: return "tukey_lambda";
    case DistFamily::Gaussian: return "gaussian";
    case DistFamily::Gamma: return "gamma";
  }
  return "gaussian";
}

DistFamily dist_family_from_string(const std::string& name) {
  for (DistFamily f : kAllFamilies)
    if (to_string(f) == name) return f;
  throw DataError("unknown distribution family: '" + name + "'");
}

double tukey_lambda_quantile(double p, double lambda) {
  if (p <= 0.0) return near_zero(lambda) || lambda < 0.0 ? -kInf : -1.0 / lambda;
  if (p >= 1.0) return near_zero(lambda) || lambda < 0.0 ? kInf : 1.0 / lambda;
  if (near_zero(lambda)) return std::log(p / (1.0 - p));
  // expm1 keeps the two near-unity powers from cancelling for small lambda.
  return (std::expm1(lambda * std::log(p)) - std::expm1(lambda * std::log1p(-p))) /
         lambda;
}

double tukey_lambda_cdf(double x, double lambda) {
  if (lambda > 0.0 && !near_zero(lambda)) {
    if (x <= -1.0 / lambda) return 0.0;
    if (x >= 1.0 / lambda) return 1.0;
  }
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  // Q is strictly increasing; invert by bisection on p.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tukey_lambda_quantile(mid, lambda) < x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double tukey_lambda_pdf(double x, double lambda) {
  if (lambda > 0.0 && !near_zero(lambda)) {
    if (x <= -1.0 / lambda || x >= 1.0 / lambda) return 0.0;
  }
  const double p = tukey_lambda_cdf(x, lambda);
  if (p <= 0.0 || p >= 1.0) return 0.0;
  // dQ/dp = p^(l-1) + (1-p)^(l-1); pdf is its reciprocal at p = F(x).
  const double dq = std::pow(p, lambda - 1.0) + std::pow(1.0 - p, lambda - 1.0);
  return 1.0 / dq;
}

double tukey_lambda_variance(double lambda) {
  if (lambda <= -0.5) throw std::invalid_argument("TL variance finite only for lambda > -0.5");
  if (near_zero(lambda)) {
    const double pi = 3.14159265358979323846;
    return pi * pi / 3.0;
  }
  const double log_beta = 2.0 * std::lgamma(lambda + 1.0) - std::lgamma(2.0 * lambda + 2.0);
  return (2.0 / (lambda * lambda)) * (1.0 / (2.0 * lambda + 1.0) - std::exp(log_beta));
}

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

double gaussian_quantile(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  return boost::math::quantile(normal_d(0.0, 1.0), p);
}

FittedDistribution make_gaussian(double mean, double sigma) {
  FittedDistribution d{DistFamily::Gaussian, mean, sigma, std::nullopt, 0.0};
  d.validate();
  return d;
}

FittedDistribution make_student_t(double location, double scale, double dof) {
  FittedDistribution d{DistFamily::StudentT, location, scale, dof, 0.0};
  d.validate();
  return d;
}

FittedDistribution make_tukey_lambda(double location, double scale, double lambda) {
  FittedDistribution d{DistFamily::TukeyLambda, location, scale, lambda, 0.0};
  d.validate();
  return d;
}

FittedDistribution make_weibull(double location, double scale, double shape) {
  FittedDistribution d{DistFamily::Weibull, location, scale, shape, 0.0};
  d.validate();
  return d;
}

FittedDistribution make_gamma(double location, double scale, double shape) {
  FittedDistribution d{DistFamily::Gamma, location, scale, shape, 0.0};
  d.validate();
  return d;
}

void FittedDistribution::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("distribution scale must be > 0");
  switch (family) {
    case DistFamily::Gaussian:
      break;
    case DistFamily::StudentT:
      if (!shape || !(*shape > 0.0))
        throw std::invalid_argument("StudentT dof must be > 0");
      break;
    case DistFamily::Weibull:
    case DistFamily::Gamma:
      if (!shape || !(*shape > 0.0))
        throw std::invalid_argument("Weibull/Gamma shape must be > 0");
      break;
    case DistFamily::TukeyLambda:
      if (!shape) throw std::invalid_argument("TukeyLambda needs a shape");
      break;
  }
}

double FittedDistribution::pdf(double x) const {
  const double z = (x - location) / scale;
  switch (family) {
    case DistFamily::Gaussian:
      return boost::math::pdf(normal_d(0.0, 1.0), z) / scale;
    case DistFamily::StudentT:
      return boost::math::pdf(student_d(*shape), z) / scale;
    case DistFamily::TukeyLambda:
      return tukey_lambda_pdf(z, *shape) / scale;
    case DistFamily::Weibull:
      if (z <= 0.0) return 0.0;
      return boost::math::pdf(weibull_d(*shape, 1.0), z) / scale;
    case DistFamily::Gamma:
      if (z <= 0.0) return 0.0;
      return boost::math::pdf(gamma_d(*shape, 1.0), z) / scale;
  }
  return 0.0;
}

double FittedDistribution::cdf(double x) const {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double z = (x - location) / scale;
  switch (family) {
    case DistFamily::Gaussian:
      return gaussian_cdf(z);
    case DistFamily::StudentT:
      return boost::math::cdf(student_d(*shape), z);
    case DistFamily::TukeyLambda:
      return tukey_lambda_cdf(z, *shape);
    case DistFamily::Weibull:
      if (z <= 0.0) return 0.0;
      return boost::math::cdf(weibull_d(*shape, 1.0), z);
    case DistFamily::Gamma:
      if (z <= 0.0) return 0.0;
      return boost::math::cdf(gamma_d(*shape, 1.0), z);
  }
  return 0.0;
}

double FittedDistribution::quantile(double p) const {
  if (p <= 0.0) return support_lo();
  if (p >= 1.0) return support_hi();
  double z = 0.0;
  switch (family) {
    case DistFamily::Gaussian:
      z = boost::math::quantile(normal_d(0.0, 1.0), p);
      break;
    case DistFamily::StudentT:
      z = boost::math::quantile(student_d(*shape), p);
      break;
    case DistFamily::TukeyLambda:
      z = tukey_lambda_quantile(p, *shape);
      break;
    case DistFamily::Weibull:
      z = boost::math::quantile(weibull_d(*shape, 1.0), p);
      break;
    case DistFamily::Gamma:
      z = boost::math::quantile(gamma_d(*shape, 1.0), p);
      break;
  }
  return location + scale * z;
}

double FittedDistribution::support_lo() const {
  switch (family) {
    case DistFamily::Weibull:
    case DistFamily::Gamma:
      return location;
    case DistFamily::TukeyLambda:
      if (*shape > 0.0) return location - scale / *shape;
      return -kInf;
    default:
      return -kInf;
  }
}

double FittedDistribution::support_hi() const {
  if (family == DistFamily::TukeyLambda && *shape > 0.0)
    return location + scale / *shape;
  return kInf;
}

}  // namespace rawnoise
