#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hilbmap/sphere.hpp"

namespace hilbmap {

// omega_phi (or a Newton/Gauss–Newton iterate) is not positive at a grid point.
class NotAdmissible : public std::runtime_error {
 public:
  NotAdmissible(const Point& where, double density)
      : std::runtime_error("omega_phi not positive at " + where.describe() +
                           " (density " + std::to_string(density) + ")"),
        location(where),
        density(density) {}

  Point location;
  double density;
};

// An iterative method stopped without meeting its tolerance. history holds the
// residual after every accepted iterate, starting with the initial one.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history(std::move(history)) {}

  std::vector<double> history;
};

}  // namespace hilbmap
