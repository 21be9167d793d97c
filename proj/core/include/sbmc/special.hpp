#ifndef SBMC_SPECIAL_HPP
#define SBMC_SPECIAL_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sbmc {

struct OrderOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Density of the Levy measure of the s/2-subordinator,
//   lambda(dy) = s / (2 Gamma(1-s/2)) * y^{-1-s/2} dy,  y > 0,
// normalized so that \int_0^inf (1 - e^{-yu}) lambda(dy) = u^{s/2}.
double levy_density(double s, double y);

// Stirling numbers of the second kind S(m,r) for 1 <= r <= m <= 20, computed
// exactly via the alternating sum (1/r!) sum_s (-1)^{r-s} C(r,s) s^m in
// 128-bit integer arithmetic.
std::uint64_t stirling2(int m, int r);

// Independent check value from the triangle recurrence
// S(m,r) = r S(m-1,r) + S(m-1,r-1).
std::uint64_t stirling2_recurrence(int m, int r);

// q_n(x) = i^n h_n(-i x) where h_n is the probabilists' Hermite polynomial;
// real for real x and satisfies q_{n+1} = x q_n + n q_{n-1}.  These are the
// polynomials that turn moments of a path functional into field moments.
double hermite_ix(int n, double x);

// e^{-x} - 1 + x, stable for small x >= 0.
double expm1_plus(double x);

// 1 - e^{-x}, stable for small x >= 0.
double one_mexp(double x);

// (1+x)^p - 1, stable for small x > -1.
double powm1p(double x, double p);

}  // namespace sbmc

#endif
