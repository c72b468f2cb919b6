// Copyright 2026 The CoRA Authors.
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

#include "cora/grad_check.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "cora/rng.h"

namespace cora {
namespace {

double Evaluate(const ObjectiveFn& objective) {
  Graph g;
  Var loss = objective(g);
  return g.value(loss)[0];
}

// Half of the probes go to entries with a nonzero analytic gradient, the
// rest are uniform, so sparse gradients (embedding tables) are still hit.
std::vector<std::size_t> ChooseEntries(const Array& grad, std::size_t budget, Rng& rng) {
  const std::size_t n = grad.size();
  std::vector<std::size_t> chosen;
  if (n <= budget) {
    chosen.resize(n);
    for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
    return chosen;
  }
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < n; ++i) {
    if (grad[i] != 0.0) nonzero.push_back(i);
  }
  std::set<std::size_t> picked;
  rng.Shuffle(nonzero);
  for (std::size_t i = 0; i < nonzero.size() && picked.size() < budget / 2; ++i) {
    picked.insert(nonzero[i]);
  }
  while (picked.size() < budget) picked.insert(rng.Index(n));
  return {picked.begin(), picked.end()};
}

}  // namespace

double GradCheckReport::max_relative_error() const {
  double worst = 0.0;
  for (const auto& t : tensors) worst = std::max(worst, t.max_relative_error);
  return worst;
}

std::string GradCheckReport::ToString() const {
  std::string out;
  char line[256];
  for (const auto& t : tensors) {
    std::snprintf(line, sizeof(line),
                  "%-28s probed=%-4zu max_rel_err=%.3e analytic=%+.6e numeric=%+.6e %s\n",
                  t.name.c_str(), t.probed, t.max_relative_error, t.analytic,
                  t.numeric, t.passed ? "ok" : "FAIL");
    out += line;
  }
  std::snprintf(line, sizeof(line), "grad-check %s: max relative error %.3e (tolerance %.1e)\n",
                passed ? "PASS" : "FAIL", max_relative_error(), tolerance);
  out += line;
  return out;
}

GradCheckReport CheckGradients(ParameterStore& params, const ObjectiveFn& objective,
                               const GradCheckOptions& options) {
  params.ZeroGrad();
  {
    Graph g;
    Var loss = objective(g);
    g.Backward(loss);
  }

  GradCheckReport report;
  report.tolerance = options.tolerance;
  report.passed = true;
  Rng rng(options.seed);

  for (auto& [name, param] : params) {
    TensorGradReport tr;
    tr.name = name;
    const auto entries = ChooseEntries(param.grad, options.samples_per_tensor, rng);
    for (std::size_t idx : entries) {
      const double original = param.value[idx];
      param.value[idx] = original + options.step;
      const double up = Evaluate(objective);
      param.value[idx] = original - options.step;
      const double down = Evaluate(objective);
      param.value[idx] = original;

      const double numeric = (up - down) / (2.0 * options.step);
      const double analytic = param.grad[idx];
      ++tr.probed;
      if (!std::isfinite(numeric) || !std::isfinite(analytic)) {
        tr.finite = false;
        tr.max_relative_error = INFINITY;
        tr.worst_index = idx;
        tr.analytic = analytic;
        tr.numeric = numeric;
        continue;
      }
      const double denom = std::max({std::fabs(analytic), std::fabs(numeric),
                                     options.denominator_floor});
      const double rel = std::fabs(analytic - numeric) / denom;
      if (tr.probed == 1 || rel > tr.max_relative_error) {
        tr.max_relative_error = rel;
        tr.worst_index = idx;
        tr.analytic = analytic;
        tr.numeric = numeric;
      }
    }
    tr.passed = tr.finite && tr.max_relative_error <= options.tolerance;
    report.passed = report.passed && tr.passed;
    report.tensors.push_back(tr);
  }
  return report;
}

}  // namespace cora
