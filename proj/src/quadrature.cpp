#include "hilbmap/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace hilbmap {

const RadialRule& gauss_legendre_unit(int n) {
  if (n < 1) throw std::invalid_argument("radial rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<RadialRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto rule = std::make_unique<RadialRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
    if (!table) throw std::runtime_error("GSL failed to build a " + std::to_string(n) + "-point rule");
    for (int i = 0; i < n; ++i) {
      double xi = 0.0, wi = 0.0;
      gsl_integration_glfixed_point(0.0, 1.0, static_cast<size_t>(i), &xi, &wi, table);
      rule->nodes[i] = xi;
      rule->weights[i] = wi;
    }
    gsl_integration_glfixed_table_free(table);
    std::vector<std::pair<double, double>> sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = {rule->nodes[i], rule->weights[i]};
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) std::tie(rule->nodes[i], rule->weights[i]) = sorted[i];
    slot = std::move(rule);
  }
  return *slot;
}

QuadratureRule::QuadratureRule(int radial_count, int angular_count)
    : radial_(&gauss_legendre_unit(radial_count)) {
  if (angular_count < 1) throw std::invalid_argument("angular rule needs at least one node");
  angles_.resize(angular_count);
  for (int l = 0; l < angular_count; ++l)
    angles_[l] = 2.0 * std::numbers::pi * l / angular_count;
  angular_weight_ = 2.0 * std::numbers::pi / angular_count;
}

QuadratureRule QuadratureRule::defaults(int k) { return {256, 4 * k + 8}; }

}  // namespace hilbmap
