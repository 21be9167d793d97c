#ifndef SBMC_QUADRATURE_HPP
#define SBMC_QUADRATURE_HPP

#include <functional>

namespace sbmc::quad {

// Default tolerances used for all kernel/oracle integrals: two orders of
// magnitude below the statistical errors we ever report.
inline constexpr double kAbsTol = 1e-10;
inline constexpr double kRelTol = 1e-8;

struct Result {
    double value = 0.0;
    double error = 0.0;   // crude error estimate from the adaptive refinement
    long evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = kAbsTol, double rel_tol = kRelTol,
                 int max_depth = 40);

// \int_a^\infty f, via the substitution t = a + u/(1-u) on (0,1).
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol = kAbsTol, double rel_tol = kRelTol);

// Tensorized adaptive rule: outer adaptive in t of inner adaptive in s over
// [a,b] x [c,d].  Intended for smooth integrands (kernel rectangles).
Result integrate_2d(const std::function<double(double, double)>& f,
                    double a, double b, double c, double d,
                    double abs_tol = kAbsTol, double rel_tol = kRelTol);

// Gauss-Legendre nodes/weights on [a,b], n up to 64.
void gauss_legendre(int n, double a, double b, double* nodes, double* weights);

}  // namespace sbmc::quad

#endif
