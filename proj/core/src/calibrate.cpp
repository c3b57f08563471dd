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

#include "rawnoise/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rawnoise/errors.hpp"
#include "rawnoise/simplex.hpp"

namespace rawnoise {

PhotonTransferFit photon_transfer_fit(const std::vector<std::vector<BayerFrame>>& stacks) {
  if (stacks.size() < 3)
    throw std::invalid_argument("photon_transfer_fit: need at least 3 illumination levels");
  for (const auto& stack : stacks)
    if (stack.size() < 2)
      throw std::invalid_argument("photon_transfer_fit: need at least 2 frames per level");

  const BayerFrame& ref = stacks.front().front();
  for (const auto& stack : stacks)
    for (const auto& frame : stack)
      if (frame.width != ref.width || frame.height != ref.height ||
          frame.black_level != ref.black_level || frame.quant_step != ref.quant_step)
        throw DataError("photon_transfer_fit: frames have mixed sensor settings");

  PhotonTransferFit fit;
  for (const auto& stack : stacks) {
    const std::size_t px = ref.pixel_count();
    const double nf = static_cast<double>(stack.size());
    std::vector<double> sum(px, 0.0), sum_sq(px, 0.0);
    for (const auto& frame : stack) {
      for (std::size_t i = 0; i < px; ++i) {
        const double v = frame.samples[i];
        sum[i] += v;
        sum_sq[i] += v * v;
      }
    }
    double mean_acc = 0.0, var_acc = 0.0;
    for (std::size_t i = 0; i < px; ++i) {
      const double mean = sum[i] / nf;
      // Temporal variance per pixel; immune to fixed-pattern offsets.
      const double var = std::max(0.0, (sum_sq[i] - nf * mean * mean) / (nf - 1.0));
      mean_acc += mean - ref.black_level;
      var_acc += var;
    }
    fit.points.emplace_back(mean_acc / static_cast<double>(px),
                            var_acc / static_cast<double>(px));
  }

  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0.0)
    throw DataError("photon_transfer_fit: all level means are equal, fit is singular");
  if (syy <= 0.0)
    throw DataError(
        "photon_transfer_fit: variance is identical at every level (zero-noise "
        "stacks?), r^2 undefined");

  fit.gain = sxy / sxx;
  fit.intercept = my - fit.gain * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - (fit.gain * x + fit.intercept);
    ss_res += e * e;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

double estimate_read_variance(const std::vector<BayerFrame>& dark_frames) {
  if (dark_frames.empty())
    throw std::invalid_argument("estimate_read_variance: no dark frames");
  double ss = 0.0;
  double dof = 0.0;
  for (const auto& frame : dark_frames) {
    const std::size_t n = frame.pixel_count();
    if (n < 2) throw std::invalid_argument("estimate_read_variance: frame too small");
    double mean = 0.0;
    for (double v : frame.samples) mean += v;
    mean /= static_cast<double>(n);
    for (double v : frame.samples) ss += (v - mean) * (v - mean);
    dof += static_cast<double>(n - 1);
  }
  return ss / dof;
}

double estimate_row_sigma(const std::vector<BayerFrame>& dark_frames) {
  if (dark_frames.empty())
    throw std::invalid_argument("estimate_row_sigma: no dark frames");
  std::vector<double> row_means;
  double ss = 0.0, dof = 0.0;
  for (const auto& frame : dark_frames) {
    if (frame.width < 2 || frame.height < 2)
      throw std::invalid_argument("estimate_row_sigma: frame too small");
    double frame_mean = 0.0;
    for (double v : frame.samples) frame_mean += v;
    frame_mean /= static_cast<double>(frame.pixel_count());
    for (int r = 0; r < frame.height; ++r) {
      double m = 0.0;
      for (int c = 0; c < frame.width; ++c) m += frame.at(r, c);
      row_means.push_back(m / frame.width - frame_mean);
    }
    for (double v : frame.samples) ss += (v - frame_mean) * (v - frame_mean);
    dof += static_cast<double>(frame.pixel_count() - 1);
  }
  const double var_all = ss / dof;
  double rm_mean = 0.0;
  for (double v : row_means) rm_mean += v;
  rm_mean /= static_cast<double>(row_means.size());
  double rm_var = 0.0;
  for (double v : row_means) rm_var += (v - rm_mean) * (v - rm_mean);
  rm_var /= static_cast<double>(row_means.size() - 1);

  const double w = static_cast<double>(dark_frames.front().width);
  const double sigma2 = (rm_var - var_all / w) / (1.0 - 1.0 / w);
  return std::sqrt(std::max(sigma2, 0.0));
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = -100; i <= 100; ++i) grid.push_back(i / 100.0);
  return grid;
}

PpccResult ppcc_tukey_lambda(const std::vector<double>& samples,
                             const std::vector<double>& lambda_grid) {
  if (samples.size() < 100)
    throw std::invalid_argument("ppcc_tukey_lambda: need at least 100 samples");
  if (lambda_grid.empty())
    throw std::invalid_argument("ppcc_tukey_lambda: empty lambda grid");

  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw DataError("ppcc_tukey_lambda: constant samples, correlation undefined");

  // Filliben's median plotting positions.
  const std::size_t n = sorted.size();
  std::vector<double> positions(n);
  positions[0] = 1.0 - std::pow(0.5, 1.0 / static_cast<double>(n));
  positions[n - 1] = std::pow(0.5, 1.0 / static_cast<double>(n));
  for (std::size_t i = 1; i + 1 < n; ++i)
    positions[i] = (static_cast<double>(i + 1) - 0.3175) /
                   (static_cast<double>(n) + 0.365);

  double s_mean = 0.0;
  for (double v : sorted) s_mean += v;
  s_mean /= static_cast<double>(n);
  double s_var = 0.0;
  for (double v : sorted) s_var += (v - s_mean) * (v - s_mean);

  PpccResult result;
  result.lambda_grid = lambda_grid;
  result.ppcc_values.resize(lambda_grid.size());
  double best = -2.0;
  std::vector<double> quantiles(n);
  for (std::size_t gi = 0; gi < lambda_grid.size(); ++gi) {
    const double lambda = lambda_grid[gi];
    double q_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      quantiles[i] = tukey_lambda_quantile(positions[i], lambda);
      q_mean += quantiles[i];
    }
    q_mean /= static_cast<double>(n);
    double q_var = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dq = quantiles[i] - q_mean;
      q_var += dq * dq;
      cov += dq * (sorted[i] - s_mean);
    }
    const double r = cov / std::sqrt(q_var * s_var);
    result.ppcc_values[gi] = r;
    if (r > best) {
      best = r;
      result.best_lambda = lambda;
    }
  }
  return result;
}

namespace {

struct CollapsedSample {
  std::vector<double> centers;  // unique quantized values, ascending
  std::vector<double> counts;
  double total = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double skew = 0.0;
  double min_center = 0.0;
  double max_center = 0.0;
};

CollapsedSample collapse(const std::vector<double>& samples, double q) {
  const double x0 = *std::min_element(samples.begin(), samples.end());
  std::map<long long, std::pair<double, double>> bins;  // key -> (sum, count)
  for (double x : samples) {
    const long long k = std::llround((x - x0) / q);
    auto& [sum, count] = bins[k];
    sum += x;
    count += 1.0;
  }
  CollapsedSample out;
  double m1 = 0.0;
  for (const auto& [k, sc] : bins) {
    out.centers.push_back(sc.first / sc.second);
    out.counts.push_back(sc.second);
    out.total += sc.second;
    m1 += sc.first;
  }
  m1 /= out.total;
  double m2 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < out.centers.size(); ++i) {
    const double d = out.centers[i] - m1;
    m2 += out.counts[i] * d * d;
    m3 += out.counts[i] * d * d * d;
  }
  m2 /= out.total;
  m3 /= out.total;
  out.mean = m1;
  out.sd = std::sqrt(std::max(m2, 1e-300));
  out.skew = m3 / std::pow(std::max(m2, 1e-300), 1.5);
  out.min_center = out.centers.front();
  out.max_center = out.centers.back();
  return out;
}

// Negative censored log-likelihood of a candidate distribution.
double censored_nll(const CollapsedSample& s, double q, const FittedDistribution& d) {
  double nll = 0.0;
  double prev_hi = -std::numeric_limits<double>::infinity();
  double prev_cdf_hi = 0.0;
  for (std::size_t i = 0; i < s.centers.size(); ++i) {
    const double lo = s.centers[i] - 0.5 * q;
    const double hi = s.centers[i] + 0.5 * q;
    const double cdf_lo = (lo == prev_hi) ? prev_cdf_hi : d.cdf(lo);
    const double cdf_hi = d.cdf(hi);
    prev_hi = hi;
    prev_cdf_hi = cdf_hi;
    const double mass = cdf_hi - cdf_lo;
    nll -= s.counts[i] * std::log(std::max(mass, 1e-300));
  }
  return nll;
}

// Unconstrained parameter vectors per family. Location-bounded families
// (Weibull/Gamma) keep their support below the lowest occupied bin via
// location = lo_edge - exp(u).
FittedDistribution decode_params(DistFamily family, const std::vector<double>& p,
                                 double lo_edge) {
  FittedDistribution d;
  d.family = family;
  switch (family) {
    case DistFamily::Gaussian:
      d.location = p[0];
      d.scale = std::exp(p[1]);
      break;
    case DistFamily::StudentT:
      d.location = p[0];
      d.scale = std::exp(p[1]);
      d.shape = std::exp(std::min(p[2], 12.0));  // dof
      break;
    case DistFamily::TukeyLambda:
      d.location = p[0];
      d.scale = std::exp(p[1]);
      d.shape = p[2];
      break;
    case DistFamily::Weibull:
    case DistFamily::Gamma:
      d.location = lo_edge - std::exp(p[0]);
      d.scale = std::exp(p[1]);
      d.shape = std::exp(std::min(p[2], 12.0));
      break;
  }
  return d;
}

std::vector<std::vector<double>> initial_guesses(DistFamily family,
                                                 const CollapsedSample& s, double q) {
  const double mu = s.mean;
  const double sd = std::max(s.sd, 0.25 * q);
  std::vector<std::vector<double>> inits;
  switch (family) {
    case DistFamily::Gaussian:
      inits.push_back({mu, std::log(sd)});
      inits.push_back({mu, std::log(sd * 2.0)});
      inits.push_back({mu, std::log(sd * 0.5)});
      break;
    case DistFamily::StudentT:
      for (double dof : {5.0, 3.0, 20.0}) {
        const double core = dof > 2.0 ? sd * std::sqrt((dof - 2.0) / dof) : sd * 0.7;
        inits.push_back({mu, std::log(core), std::log(dof)});
      }
      break;
    case DistFamily::TukeyLambda:
      for (double lambda : {0.14, -0.15, 0.5}) {
        const double var_u = tukey_lambda_variance(std::max(lambda, -0.45));
        inits.push_back({mu, std::log(sd / std::sqrt(var_u)), lambda});
      }
      break;
    case DistFamily::Weibull: {
      // Near-symmetric shape first; location from the mean relation.
      for (double k : {3.6, 2.0, 6.0}) {
        const double g1 = std::exp(std::lgamma(1.0 + 1.0 / k));
        const double g2 = std::exp(std::lgamma(1.0 + 2.0 / k));
        const double alpha = sd / std::sqrt(std::max(g2 - g1 * g1, 1e-12));
        const double loc = mu - alpha * g1;
        const double lo_edge = s.min_center - 0.5 * q;
        const double gap = std::max(lo_edge - loc, 0.05 * sd);
        inits.push_back({std::log(gap), std::log(alpha), std::log(k)});
      }
      break;
    }
    case DistFamily::Gamma: {
      double k0 = 10.0;
      if (std::abs(s.skew) > 0.05) k0 = std::min(400.0, 4.0 / (s.skew * s.skew));
      for (double k : {k0, k0 * 4.0, std::max(1.0, k0 / 4.0)}) {
        const double theta = sd / std::sqrt(k);
        const double loc = mu - k * theta;
        const double lo_edge = s.min_center - 0.5 * q;
        const double gap = std::max(lo_edge - loc, 0.05 * sd);
        inits.push_back({std::log(gap), std::log(theta), std::log(k)});
      }
      break;
    }
  }
  return inits;
}

// KS distance between the collapsed empirical CDF and a model CDF.
double collapsed_ks(const CollapsedSample& s, const FittedDistribution& d) {
  double ks = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < s.centers.size(); ++i) {
    const double f = d.cdf(s.centers[i]);
    ks = std::max(ks, f - cum / s.total);
    cum += s.counts[i];
    ks = std::max(ks, cum / s.total - f);
  }
  return ks;
}

}  // namespace

FittedDistribution fit_family_censored(const std::vector<double>& samples, double q,
                                       DistFamily family,
                                       const CensoredFitOptions& options) {
  if (q <= 0.0) throw std::invalid_argument("fit_family_censored: q must be positive");
  if (samples.size() < 2)
    throw std::invalid_argument("fit_family_censored: too few samples");

  const CollapsedSample s = collapse(samples, q);
  if (s.centers.size() < 2)
    throw DataError("fit_family_censored: all samples fall into one quantization bin");
  const double lo_edge = s.min_center - 0.5 * q;

  auto objective = [&](const std::vector<double>& p) -> double {
    const FittedDistribution d = decode_params(family, p, lo_edge);
    if (!(d.scale > 1e-12) || !std::isfinite(d.scale)) return 1e100;
    if (d.shape && (!std::isfinite(*d.shape))) return 1e100;
    if ((family == DistFamily::Weibull || family == DistFamily::Gamma) &&
        (!(d.shape > 1e-6) || !std::isfinite(d.location)))
      return 1e100;
    if (family == DistFamily::TukeyLambda && std::abs(*d.shape) > 2.0) return 1e100;
    const double nll = censored_nll(s, q, d);
    return std::isfinite(nll) ? nll : 1e100;
  };

  auto inits = initial_guesses(family, s, q);
  if (static_cast<int>(inits.size()) > options.restarts)
    inits.resize(static_cast<std::size_t>(options.restarts));

  optim::SimplexOptions sopt;
  sopt.rel_tol = options.rel_tol;
  sopt.max_iter = options.max_iter;

  bool any = false;
  double best_nll = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  for (const auto& x0 : inits) {
    std::vector<double> steps(x0.size(), 0.25);
    const auto res = optim::nelder_mead(objective, x0, steps, sopt);
    if (res.converged && res.fval < 1e99 && res.fval < best_nll) {
      best_nll = res.fval;
      best_x = res.x;
      any = true;
    }
  }
  if (!any)
    throw DataError("fit_family_censored: " + to_string(family) +
                    " failed to converge from every start");

  FittedDistribution d = decode_params(family, best_x, lo_edge);
  d.validate();
  d.gof_statistic = collapsed_ks(s, d);
  return d;
}

DistributionSetFit fit_distribution_set(const std::vector<double>& samples, double q,
                                        const CensoredFitOptions& options) {
  if (samples.size() < 1000)
    throw std::invalid_argument(
        "fit_distribution_set: need at least 1000 samples, got " +
        std::to_string(samples.size()));
  if (q <= 0.0) throw std::invalid_argument("fit_distribution_set: q must be positive");

  DistributionSetFit out;
  bool any = false;
  double best_ks = std::numeric_limits<double>::infinity();
  for (DistFamily family : kAllFamilies) {
    FamilyFitResult r;
    r.family = family;
    try {
      FittedDistribution d = fit_family_censored(samples, q, family, options);
      r.ks = d.gof_statistic;
      r.fit = std::move(d);
      r.diagnostic = "ok";
      if (r.ks < best_ks) {
        best_ks = r.ks;
        out.best = *r.fit;
        any = true;
      }
    } catch (const std::exception& e) {
      r.diagnostic = e.what();
    }
    out.per_family.push_back(std::move(r));
  }
  if (!any) {
    std::ostringstream msg;
    msg << "fit_distribution_set: every family failed to converge:";
    for (const auto& r : out.per_family)
      msg << "\n  " << to_string(r.family) << ": " << r.diagnostic;
    throw DataError(msg.str());
  }
  return out;
}

}  // namespace rawnoise
