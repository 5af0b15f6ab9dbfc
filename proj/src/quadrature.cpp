#include "quadrature.hpp"

#include <cmath>
#include <vector>

namespace sch {

double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        bool singular_at_left, int panels_per_decade,
                        double rel_floor) {
  const double span = b - a;
  if (!(span > 0.0)) return 0.0;
  const int decades = static_cast<int>(std::ceil(-std::log10(rel_floor)));
  const int panels = panels_per_decade * decades;
  const double ratio = std::pow(10.0, -1.0 / panels_per_decade);

  // Breakpoints measured as distances from the singular end, from `span`
  // geometrically down to span * rel_floor, then one closing panel to 0.
  double sum = 0.0;
  double outer = span;
  for (int k = 1; k <= panels; ++k) {
    const double inner = span * std::pow(ratio, k);
    sum += f(singular_at_left ? a + 0.5 * (inner + outer) : b - 0.5 * (inner + outer)) *
           (outer - inner);
    outer = inner;
  }
  sum += f(singular_at_left ? a + 0.5 * outer : b - 0.5 * outer) * outer;
  return sum;
}

double integrate_midpoint(const std::function<double(double)>& f, double a, double b,
                          int points) {
  const double span = b - a;
  if (!(span > 0.0) || points < 1) return 0.0;
  const double dx = span / points;
  double sum = 0.0;
  for (int i = 0; i < points; ++i) sum += f(a + (i + 0.5) * dx);
  return sum * dx;
}

}  // namespace sch
