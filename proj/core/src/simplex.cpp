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

#include "rawnoise/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rawnoise::optim {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, std::vector<double> steps,
                          const SimplexOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || steps.size() != n)
    throw std::invalid_argument("nelder_mead: bad dimensions");

  constexpr double kAlpha = 1.0;  // reflection
  constexpr double kGamma = 2.0;  // expansion
  constexpr double kRho = 0.5;    // contraction
  constexpr double kSigma = 0.5;  // shrink

  std::vector<std::vector<double>> verts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i)
    verts[i + 1][i] += (steps[i] != 0.0 ? steps[i] : 1e-4);

  std::vector<double> fvals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fvals[i] = f(verts[i]);

  std::vector<std::size_t> order(n + 1);
  SimplexResult result;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
    const std::size_t best = order.front(), worst = order.back();
    const std::size_t second_worst = order[n - 1];

    result.iterations = iter;
    const double spread = std::abs(fvals[worst] - fvals[best]);
    if (spread <= options.rel_tol * (std::abs(fvals[best]) + 1e-12)) {
      result.converged = true;
      break;
    }

    // Centroid of all but the worst vertex.
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += verts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + t * (verts[worst][j] - centroid[j]);
      return p;
    };

    const auto reflected = blend(-kAlpha);
    const double f_reflected = f(reflected);

    if (f_reflected < fvals[best]) {
      const auto expanded = blend(-kGamma);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        verts[worst] = expanded;
        fvals[worst] = f_expanded;
      } else {
        verts[worst] = reflected;
        fvals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fvals[second_worst]) {
      verts[worst] = reflected;
      fvals[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < fvals[worst];
    const auto contracted = blend(outside ? -kRho : kRho);
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(f_reflected, fvals[worst])) {
      verts[worst] = contracted;
      fvals[worst] = f_contracted;
      continue;
    }

    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j)
        verts[i][j] = verts[best][j] + kSigma * (verts[i][j] - verts[best][j]);
      fvals[i] = f(verts[i]);
    }
  }

  const std::size_t best =
      std::min_element(fvals.begin(), fvals.end()) - fvals.begin();
  result.x = verts[best];
  result.fval = fvals[best];
  return result;
}

}  // namespace rawnoise::optim
