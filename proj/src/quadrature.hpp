#pragma once

#include <functional>

namespace sch {

// Composite midpoint rule on a geometrically graded mesh over [a, b],
// refined toward the endpoint where the integrand has its (integrable)
// singularity or boundary layer. `panels_per_decade` panels span each
// factor of ten in distance from the singular end; the mesh bottoms out at
// rel_floor * (b - a), below which one midpoint panel closes the gap.
double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        bool singular_at_left, int panels_per_decade = 64,
                        double rel_floor = 1e-12);

// Plain composite midpoint with `points` nodes.
double integrate_midpoint(const std::function<double(double)>& f, double a, double b,
                          int points);

}  // namespace sch
