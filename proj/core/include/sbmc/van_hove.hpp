#ifndef SBMC_VAN_HOVE_HPP
#define SBMC_VAN_HOVE_HPP

#include "sbmc/kernels.hpp"

namespace sbmc {

// Closed forms of the eps = 0 (decoupled, shifted-field) limit, used as
// references when the tunneling amplitude is taken small.
namespace van_hove {

// ground energy of the decoupled problem: -alpha^2/2 \int rho/w dw
inline double energy_shift(double alpha, const KernelSet& ks) {
    return -0.5 * alpha * alpha * ks.overlap_h_over_omega_h();
}

// spin-averaged characteristic function
//   <e^{i beta phi(f)}> = e^{-beta^2 ||f||^2 / 4} cos(beta alpha (h/w, f))
inline double char_fn(double beta, double alpha, const CrossKernel& cross) {
    return std::exp(-0.25 * beta * beta * cross.norm_f_sq) *
           std::cos(beta * alpha * cross.overlap_h_over_omega_f);
}

// <phi(f)^2> = ||f||^2/2 + (alpha (h/w,f))^2
inline double second_moment(double alpha, const CrossKernel& cross) {
    const double shift = alpha * cross.overlap_h_over_omega_f;
    return 0.5 * cross.norm_f_sq + shift * shift;
}

// <e^{beta phi(f)}> for the shifted Gaussian, spin averaged
inline double exp_moment(double beta, double alpha, const CrossKernel& cross) {
    return std::exp(0.25 * beta * beta * cross.norm_f_sq) *
           std::cosh(beta * alpha * cross.overlap_h_over_omega_f);
}

}  // namespace van_hove

}  // namespace sbmc

#endif
