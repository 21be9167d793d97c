#ifndef SBMC_KERNELS_HPP
#define SBMC_KERNELS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sbmc/spectral_density.hpp"

namespace sbmc {

// One-dimensional Laplace-type kernel of a spectral density,
//   k(r)  = \int rho(w) e^{-r w} dw            (r >= 0)
// together with its first and second antiderivatives
//   k1(r) = \int_0^r k(u) du,   k2(r) = \int_0^r k1(u) du,
// and the inverse-frequency moments m(j) = \int rho(w)/w^j dw.
//
// k1 extends to an odd and k2 to an even function of r; callers pass |r|.
class DecayKernel {
  public:
    struct ExpMode {
        double c;  // weight of e^{-w r} in k
        double w;
    };

    virtual ~DecayKernel() = default;
    virtual double k(double r) const = 0;
    virtual double k1(double r) const = 0;
    virtual double k2(double r) const = 0;
    virtual double m(int j) const = 0;

    // non-null when k is a finite sum of exponentials; cross integrals over
    // separated time intervals then factorize into O(n) prefix sums
    virtual const std::vector<ExpMode>* exp_modes() const { return nullptr; }
};

std::shared_ptr<const DecayKernel> make_kernel(const SpectralDensity& sd);

// base kernel times a constant
std::shared_ptr<const DecayKernel> scale_kernel(
    std::shared_ptr<const DecayKernel> base, double factor);

// Overlap data for one test function f: rho_hf(w) ~ h^(w) f^(w) reduced to
// one dimension, rho_ff likewise for f with itself.
struct TestOverlap {
    std::string name;
    SpectralDensity rho_hf;
    SpectralDensity rho_ff;
};

// The two standard choices derived from the bath: f = h and f = h/omega.
TestOverlap overlap_f_equals_h(const SpectralDensity& bath);
TestOverlap overlap_f_equals_h_over_omega(const SpectralDensity& bath);

struct CrossKernel {
    std::string name;
    std::shared_ptr<const DecayKernel> hf;
    double norm_f_sq = 0.0;             // \int rho_ff dw = ||f||^2
    double overlap_h_over_omega_f = 0.0;  // \int rho_hf / w dw = (h/w, f)

    double c(double r) const { return hf->k(std::abs(r)); }
    // odd antiderivative with c1(0)=0, so \int_a^b c = c1(b)-c1(a) for a<b
    double c1(double r) const {
        return r >= 0.0 ? hf->k1(r) : -hf->k1(-r);
    }
    // \int_R^inf c(r) dr, for reporting truncation systematics
    double tail(double R) const { return hf->m(1) - hf->k1(R); }
};

class KernelSet {
  public:
    KernelSet() = default;

    double w_amp(double t) const { return 0.5 * bath_->k(std::abs(t)); }

    // even double antiderivative of w_amp with u2(0)=0, u2'(0)=0; the
    // rectangle sum u2(b-c)-u2(a-c)-u2(b-d)+u2(a-d) integrates w_amp over
    // [a,b]x[c,d] exactly
    double u2(double t) const { return 0.5 * bath_->k2(std::abs(t)); }
    double u2_prime(double t) const {
        return t >= 0.0 ? 0.5 * bath_->k1(t) : -0.5 * bath_->k1(-t);
    }

    double rect(double a, double b, double c, double d) const {
        return u2(b - c) - u2(a - c) - u2(b - d) + u2(a - d);
    }

    double norm_h_sq() const { return norm_h_sq_; }                  // ||h||^2
    double norm_h_over_omega_sq() const { return norm_h_over_omega_sq_; }
    double overlap_h_over_omega_h() const { return overlap_h_; }     // (h/w, h)

    // \int_R^inf u w_amp(u) du; R=0 gives the quadrant bound constant
    // norm_h_over_omega_sq / 2.
    double tail_u_w(double R) const {
        return 0.5 * (norm_h_over_omega_sq_ - (R * bath_->k1(R) - bath_->k2(R)));
    }

    const CrossKernel& cross(const std::string& name) const;
    const std::vector<CrossKernel>& crosses() const { return cross_; }
    bool has_cross(const std::string& name) const;

    // Kernel of the density rho(w) (1 - e^{-beta rho_op(w)}), for quadrant
    // integrals weighted by second-quantized operators.  rho_op == 1 reduces
    // exactly to a (1 - e^{-beta}) rescaling of the bath kernel.
    std::shared_ptr<const DecayKernel> modified_kernel(
        double beta, const std::function<double(double)>& rho_op) const;
    std::shared_ptr<const DecayKernel> modified_kernel(double beta) const;

    // pointwise modified pair kernel, halved like w_amp
    std::function<double(double)> w_amp_mod(
        double beta, const std::function<double(double)>& rho_op) const;
    std::function<double(double)> w_amp_mod(double beta) const;

    std::shared_ptr<const DecayKernel> bath_kernel() const { return bath_; }
    const SpectralDensity& bath_density() const { return bath_density_; }

    friend KernelSet build_kernels(const SpectralDensity&,
                                   const std::vector<TestOverlap>&);

  private:
    std::shared_ptr<const DecayKernel> bath_;
    SpectralDensity bath_density_;
    std::vector<CrossKernel> cross_;
    double norm_h_sq_ = 0.0;
    double norm_h_over_omega_sq_ = 0.0;
    double overlap_h_ = 0.0;
};

// Throws InfraredDivergent / NonPositiveDensity on invalid inputs.
KernelSet build_kernels(const SpectralDensity& bath,
                        const std::vector<TestOverlap>& overlaps = {});

}  // namespace sbmc

#endif
