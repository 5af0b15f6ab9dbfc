#pragma once

namespace sch {

// Series evaluation of the Green functions of d/dt + Laplacian^2 on (0, pi)
// with u = Lap u = 0 boundary conditions:
//
//   exact   G_t(x,y)       = sum_{j>=1}  e^{-j^4 t}            phi_j(x) phi_j(y)
//   semi    G^n_t(x,y)     = sum_{j<n}   e^{-lambda_{j,n}^2 t} phi_{j,n}(x) phi_j(kappa_n(y))
//   full    G^{n,tau}_t    = sum_{j<n}   (1+tau lambda^2)^{-floor(t/tau)} phi_{j,n}(x) phi_j(kappa_n(y))
//
// with phi_j(x) = sqrt(2/pi) sin(j x) and phi_{j,n} its polygonal
// interpolant. order = 1 applies the (discrete) Laplacian in y, which
// multiplies term j by lambda_j resp. lambda_{j,n}.
struct KernelSpec {
  enum class Family { exact, semi, full };
  Family family = Family::exact;
  int truncation = 1;  // J, exact family only
  int n = 0;           // discrete families
  double tau = 0.0;    // full family only
  int order = 0;       // 0 = kernel, 1 = Laplacian applied

  static KernelSpec exact(int J, int order = 0);
  static KernelSpec semi(int n, int order = 0);
  static KernelSpec full(int n, double tau, int order = 0);
};

// Requires t > 0 (t >= tau for the full family) and x, y in [0, pi].
double kernel_value(const KernelSpec& spec, double t, double x, double y);

// Upper bound on the dropped tail sum_{j>J} (j^2)^order e^{-j^4 t} (times
// the |phi| bound 2/pi), by integral comparison.
double exact_tail_bound(int J, double t, int order);

// Space-discretization error integrals of Lemma-5.2 type at probe point x:
//   order 0:  int_0^T int_O |G^n_s(x,y) - G_s(x,y)|^2 dy ds      (~ n^-2)
//   order 1:  int_0^T int_O |D_n G^n_s(x,y) - D G_s(x,y)| dy ds  (~ n^-1)
// Exact kernel truncated at J = 8n; trapezoid in y, graded midpoint in s.
double kernel_error_space(int n, double T, double x, int order);

// Time-discretization error integrals of Lemma-6.2 type:
//   order 0:  int_0^T int_O |G^{n,tau}_{s+tau} - G^n_s|^2 dy ds      (~ tau^{3/4-eps})
//   order 1:  int_0^T int_O |D_n G^{n,tau}_{s+tau} - D_n G^n_s| dy ds (~ tau^{3/8-eps})
// Requires tau to divide T.
double kernel_error_time(int n, double tau, double T, double x, int order);

// Left-hand sides of the discrete-kernel regularity estimates, split into
// the spatial-difference integral (bounded by C|x1-x2|^2 resp. C|x1-x2|)
// and the temporal one (bounded by C|t-s|^{3a/4} resp. C|t-s|^{3a/8}):
//   spatial:  int_0^t int_O |K_{t-r}(x1,z) - K_{t-r}(x2,z)|^p dz dr
//   temporal: int_0^s int_O |K_{t-r}(x1,z) - K_{s-r}(x1,z)|^p dz dr
//           + int_s^t int_O |K_{t-r}(x1,z)|^p dz dr
// with (K, p) = (G^n, 2) for order 0 and (D_n G^n, 1) for order 1.
struct RegularityProbe {
  double spatial = 0.0;
  double temporal = 0.0;
};

RegularityProbe kernel_regularity_probe(int n, double T, double x1, double x2,
                                        double s, double t, int order);

}  // namespace sch
