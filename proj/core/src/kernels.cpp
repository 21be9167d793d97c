#include "sbmc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbmc/quadrature.hpp"
#include "sbmc/special.hpp"

namespace sbmc {

namespace {

class PowerLawKernel final : public DecayKernel {
  public:
    explicit PowerLawKernel(const PowerLawExpCutoff& p)
        : lam_(p.amplitude), pexp_(p.exponent), c_(p.cutoff) {
        k0_ = lam_ * std::tgamma(pexp_ + 1.0) * std::pow(c_, pexp_ + 1.0);
        const double q = pexp_ + 1.0;
        if (q == std::floor(q) && q >= 1.0 && q <= 8.0) {
            int_pow_ = static_cast<int>(q);
        }
    }

    double k(double r) const override {
        const double base = 1.0 + c_ * r;
        if (int_pow_ > 0) {
            double b = base;
            for (int i = 1; i < int_pow_; ++i) b *= base;
            return k0_ / b;
        }
        return k0_ * std::pow(base, -(pexp_ + 1.0));
    }

    double k1(double r) const override {
        const double x = c_ * r;
        if (x < 1e-4) return series1(r, x);
        if (pexp_ == 2.0) {
            const double b = 1.0 + x;
            return (k0_ / (2.0 * c_)) * x * (2.0 + x) / (b * b);
        }
        if (pexp_ == 0.0) return (k0_ / c_) * std::log1p(x);
        // k0/(c p) * (1 - (1+x)^{-p})
        return -(k0_ / (c_ * pexp_)) * powm1p(x, -pexp_);
    }

    double k2(double r) const override {
        const double x = c_ * r;
        if (x < 1e-4) return series2(r, x);
        if (pexp_ == 2.0) {
            return (k0_ / (2.0 * c_)) * (r - x / (c_ * (1.0 + x)));
        }
        if (pexp_ == 0.0) {
            return (k0_ / (c_ * c_)) * ((1.0 + x) * std::log1p(x) - x);
        }
        if (pexp_ == 1.0) {
            return (k0_ / (c_ * c_)) * (x - std::log1p(x));
        }
        return (k0_ / (c_ * pexp_)) *
               (r - powm1p(x, 1.0 - pexp_) / (c_ * (1.0 - pexp_)));
    }

    double m(int j) const override {
        const double a = pexp_ + 1.0 - j;
        if (!(a > 0.0)) {
            throw InfraredDivergent("power-law kernel: requested moment diverges");
        }
        return lam_ * std::tgamma(a) * std::pow(c_, a);
    }

  private:
    double series1(double r, double x) const {
        const double p1 = pexp_ + 1.0;
        return k0_ * r *
               (1.0 + x * (-p1 / 2.0 +
                           x * (p1 * (p1 + 1.0) / 6.0 -
                                x * p1 * (p1 + 1.0) * (p1 + 2.0) / 24.0)));
    }
    double series2(double r, double x) const {
        const double p1 = pexp_ + 1.0;
        return k0_ * r * r *
               (0.5 + x * (-p1 / 6.0 +
                           x * (p1 * (p1 + 1.0) / 24.0 -
                                x * p1 * (p1 + 1.0) * (p1 + 2.0) / 120.0)));
    }

    double lam_, pexp_, c_, k0_;
    int int_pow_ = 0;
};

class DiscreteKernel final : public DecayKernel {
  public:
    explicit DiscreteKernel(const DiscreteModes& d) {
        for (const auto& mo : d.modes) {
            c_.push_back(mo.coupling * mo.coupling);
            w_.push_back(mo.frequency);
        }
        fill_modes();
    }
    DiscreteKernel(std::vector<double> c, std::vector<double> w)
        : c_(std::move(c)), w_(std::move(w)) {
        fill_modes();
    }

    const std::vector<ExpMode>* exp_modes() const override { return &modes_; }

    double k(double r) const override {
        double acc = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            acc += c_[i] * std::exp(-w_[i] * r);
        }
        return acc;
    }
    double k1(double r) const override {
        double acc = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            acc += c_[i] / w_[i] * one_mexp(w_[i] * r);
        }
        return acc;
    }
    double k2(double r) const override {
        double acc = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            acc += c_[i] / (w_[i] * w_[i]) * expm1_plus(w_[i] * r);
        }
        return acc;
    }
    double m(int j) const override {
        double acc = 0.0;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            acc += c_[i] / std::pow(w_[i], j);
        }
        return acc;
    }

  private:
    void fill_modes() {
        for (std::size_t i = 0; i < c_.size(); ++i) modes_.push_back({c_[i], w_[i]});
    }
    std::vector<double> c_, w_;
    std::vector<ExpMode> modes_;
};

// Exact integral of a piecewise-linear density against e^{-r w}.
// phi1(z) = (1-e^{-z})/z, phi2(z) = (1-(1+z)e^{-z})/z^2, both stable at 0.
double phi1(double z) {
    if (z < 1e-3) return 1.0 - z * (0.5 - z * (1.0 / 6.0 - z / 24.0));
    return one_mexp(z) / z;
}
double phi2(double z) {
    if (z < 1e-3) return 0.5 - z * (1.0 / 3.0 - z * (0.125 - z / 30.0));
    return (1.0 - (1.0 + z) * std::exp(-z)) / (z * z);
}

double laplace_of_linear(const std::vector<double>& omega,
                         const std::vector<double>& rho, double r) {
    double acc = 0.0;
    for (std::size_t i = 1; i < omega.size(); ++i) {
        const double L = omega[i] - omega[i - 1];
        const double z = r * L;
        const double slope = (rho[i] - rho[i - 1]) / L;
        acc += std::exp(-r * omega[i - 1]) * L *
               (rho[i - 1] * phi1(z) + slope * L * phi2(z));
    }
    return acc;
}

// Kernel backed by exact segment integrals for k and a dense geometric-grid
// cache for the antiderivatives, with an exponential tail model anchored to
// the exact moments beyond r_max (linear asymptote for k2).
class CachedKernel final : public DecayKernel {
  public:
    CachedKernel(std::function<double(double)> k_exact, double m0, double m1,
                 double m2, double omega_min, double r_max, int n_nodes = 4096)
        : k_exact_(std::move(k_exact)),
          m_{m0, m1, m2},
          w1_(omega_min),
          rmax_(r_max) {
        grid_.resize(n_nodes + 1);
        kv_.resize(n_nodes + 1);
        k1v_.resize(n_nodes + 1);
        k2v_.resize(n_nodes + 1);
        const double r0 = rmax_ * 1e-6;
        grid_[0] = 0.0;
        const double ratio = std::pow(rmax_ / r0, 1.0 / (n_nodes - 1));
        for (int i = 1; i <= n_nodes; ++i) {
            grid_[i] = r0 * std::pow(ratio, i - 1);
        }
        for (int i = 0; i <= n_nodes; ++i) kv_[i] = k_exact_(grid_[i]);
        k1v_[0] = 0.0;
        k2v_[0] = 0.0;
        for (int i = 1; i <= n_nodes; ++i) {
            const double h = grid_[i] - grid_[i - 1];
            const double kmid = k_exact_(0.5 * (grid_[i - 1] + grid_[i]));
            k1v_[i] = k1v_[i - 1] + h / 6.0 * (kv_[i - 1] + 4.0 * kmid + kv_[i]);
            const double k1mid = 0.5 * (k1v_[i - 1] + k1v_[i]) +
                                 h * (kv_[i - 1] - kv_[i]) / 8.0;
            k2v_[i] = k2v_[i - 1] + h / 6.0 * (k1v_[i - 1] + 4.0 * k1mid + k1v_[i]);
        }
    }

    double k(double r) const override {
        if (r > rmax_) return kv_.back() * std::exp(-w1_ * (r - rmax_));
        return k_exact_(r);
    }

    double k1(double r) const override {
        if (r > rmax_) {
            const double miss = m_[1] - k1v_.back();
            return m_[1] - miss * std::exp(-w1_ * (r - rmax_));
        }
        const auto [i, h, u] = locate(r);
        // cubic Hermite with exact endpoint derivatives k
        return hermite(k1v_[i], k1v_[i + 1], kv_[i], kv_[i + 1], h, u);
    }

    double k2(double r) const override {
        if (r > rmax_) {
            const double d = r - rmax_;
            const double miss = m_[1] - k1v_.back();
            return k2v_.back() + m_[1] * d - miss * one_mexp(w1_ * d) / w1_;
        }
        const auto [i, h, u] = locate(r);
        // quintic Hermite: value k2, slope k1, curvature k at both ends
        const double t = u;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        const double h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        const double h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        const double h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        const double h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        const double h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        const double h21 = 0.5 * t3 - t4 + 0.5 * t5;
        return h00 * k2v_[i] + h01 * k2v_[i + 1] +
               h * (h10 * k1v_[i] + h11 * k1v_[i + 1]) +
               h * h * (h20 * kv_[i] + h21 * kv_[i + 1]);
    }

    double m(int j) const override { return m_[j]; }

  private:
    std::tuple<int, double, double> locate(double r) const {
        auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
        int i = static_cast<int>(it - grid_.begin()) - 1;
        if (i < 0) i = 0;
        if (i >= static_cast<int>(grid_.size()) - 1) {
            i = static_cast<int>(grid_.size()) - 2;
        }
        const double h = grid_[i + 1] - grid_[i];
        return {i, h, (r - grid_[i]) / h};
    }

    static double hermite(double y0, double y1, double d0, double d1, double h,
                          double t) {
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * d0 +
               (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * d1;
    }

    std::function<double(double)> k_exact_;
    double m_[3];
    double w1_, rmax_;
    std::vector<double> grid_, kv_, k1v_, k2v_;
};

class ScaledKernel final : public DecayKernel {
  public:
    ScaledKernel(std::shared_ptr<const DecayKernel> base, double f)
        : base_(std::move(base)), f_(f) {
        if (const auto* em = base_->exp_modes()) {
            modes_ = *em;
            for (auto& mo : modes_) mo.c *= f_;
        }
    }
    double k(double r) const override { return f_ * base_->k(r); }
    double k1(double r) const override { return f_ * base_->k1(r); }
    double k2(double r) const override { return f_ * base_->k2(r); }
    double m(int j) const override { return f_ * base_->m(j); }
    const std::vector<ExpMode>* exp_modes() const override {
        return modes_.empty() ? nullptr : &modes_;
    }

  private:
    std::shared_ptr<const DecayKernel> base_;
    double f_;
    std::vector<ExpMode> modes_;
};

std::shared_ptr<const DecayKernel> make_tabulated_kernel(const Tabulated& t) {
    auto omega = t.omega;
    auto rho = t.rho;
    auto k_exact = [omega, rho](double r) {
        return laplace_of_linear(omega, rho, r);
    };
    Tabulated copy{omega, rho};
    const double m0 = moment(SpectralDensity{copy}, 0);
    const double m1 = moment(SpectralDensity{copy}, 1);
    const double m2 = moment(SpectralDensity{copy}, 2);
    const double w1 = omega.front();
    const double r_max = std::max(200.0, 60.0 / w1);
    return std::make_shared<CachedKernel>(k_exact, m0, m1, m2, w1, r_max);
}

}  // namespace

std::shared_ptr<const DecayKernel> make_kernel(const SpectralDensity& sd) {
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        return std::make_shared<PowerLawKernel>(*p);
    }
    if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        return std::make_shared<DiscreteKernel>(*d);
    }
    return make_tabulated_kernel(std::get<Tabulated>(sd));
}

std::shared_ptr<const DecayKernel> scale_kernel(
    std::shared_ptr<const DecayKernel> base, double factor) {
    return std::make_shared<ScaledKernel>(std::move(base), factor);
}

TestOverlap overlap_f_equals_h(const SpectralDensity& bath) {
    return TestOverlap{"h", bath, bath};
}

TestOverlap overlap_f_equals_h_over_omega(const SpectralDensity& bath) {
    return TestOverlap{"h_over_omega", divided_by_omega(bath, 1),
                       divided_by_omega(bath, 2)};
}

const CrossKernel& KernelSet::cross(const std::string& name) const {
    for (const auto& c : cross_) {
        if (c.name == name) return c;
    }
    throw std::out_of_range("KernelSet: no test function named '" + name + "'");
}

bool KernelSet::has_cross(const std::string& name) const {
    for (const auto& c : cross_) {
        if (c.name == name) return true;
    }
    return false;
}

std::shared_ptr<const DecayKernel> KernelSet::modified_kernel(double beta) const {
    return std::make_shared<ScaledKernel>(bath_, one_mexp(beta));
}

std::shared_ptr<const DecayKernel> KernelSet::modified_kernel(
    double beta, const std::function<double(double)>& rho_op) const {
    // if rho_op is constant the modification is an exact scalar factor
    bool constant = true;
    const double r0 = rho_op(1.0);
    for (int i = 0; i < 64 && constant; ++i) {
        const double w = 1e-3 * std::pow(10.0, 7.0 * i / 63.0);
        if (std::abs(rho_op(w) - r0) > 1e-15 * (1.0 + std::abs(r0))) {
            constant = false;
        }
    }
    if (constant) {
        return std::make_shared<ScaledKernel>(bath_, one_mexp(beta * r0));
    }

    if (const auto* d = std::get_if<DiscreteModes>(&bath_density_)) {
        std::vector<double> c, w;
        for (const auto& mo : d->modes) {
            c.push_back(mo.coupling * mo.coupling * one_mexp(beta * rho_op(mo.frequency)));
            w.push_back(mo.frequency);
        }
        return std::make_shared<DiscreteKernel>(c, w);
    }

    // continuum baths: integrate the modified density and cache the
    // antiderivatives like a tabulated kernel
    SpectralDensity sd = bath_density_;
    std::function<double(double)> kern_exact;
    double omega_min = 0.0;
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        const PowerLawExpCutoff pl = *p;
        kern_exact = [pl, beta, rho_op](double r) {
            auto f = [&](double w) {
                return pl.amplitude * std::pow(w, pl.exponent) *
                       std::exp(-w / pl.cutoff) * one_mexp(beta * rho_op(w)) *
                       std::exp(-r * w);
            };
            return quad::integrate_to_inf(f, 0.0, 1e-12, 1e-10).value;
        };
        omega_min = 1e-3 * pl.cutoff;
    } else {
        const auto& t = std::get<Tabulated>(sd);
        Tabulated mod = t;
        for (std::size_t i = 0; i < mod.rho.size(); ++i) {
            mod.rho[i] = t.rho[i] * one_mexp(beta * rho_op(t.omega[i]));
        }
        kern_exact = [mod](double r) {
            return laplace_of_linear(mod.omega, mod.rho, r);
        };
        omega_min = t.omega.front();
    }
    auto m_of = [&](int j) {
        // the (1 - e^{-beta rho_op}) weight keeps every moment finite that
        // the bath itself has
        if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
            auto f = [&](double w) {
                return p->amplitude * std::pow(w, p->exponent - j) *
                       std::exp(-w / p->cutoff) * one_mexp(beta * rho_op(w));
            };
            return quad::integrate_to_inf(f, 0.0, 1e-12, 1e-10).value;
        }
        const auto& t = std::get<Tabulated>(sd);
        double acc = 0.0;
        for (std::size_t i = 1; i < t.omega.size(); ++i) {
            auto f = [&](std::size_t idx) {
                return t.rho[idx] * one_mexp(beta * rho_op(t.omega[idx])) /
                       std::pow(t.omega[idx], j);
            };
            acc += 0.5 * (f(i - 1) + f(i)) * (t.omega[i] - t.omega[i - 1]);
        }
        return acc;
    };
    return std::make_shared<CachedKernel>(kern_exact, m_of(0), m_of(1), m_of(2),
                                          omega_min, std::max(200.0, 60.0 / omega_min));
}

std::function<double(double)> KernelSet::w_amp_mod(double beta) const {
    auto kern = modified_kernel(beta);
    return [kern](double t) { return 0.5 * kern->k(std::abs(t)); };
}

std::function<double(double)> KernelSet::w_amp_mod(
    double beta, const std::function<double(double)>& rho_op) const {
    auto kern = modified_kernel(beta, rho_op);
    return [kern](double t) { return 0.5 * kern->k(std::abs(t)); };
}

KernelSet build_kernels(const SpectralDensity& bath,
                        const std::vector<TestOverlap>& overlaps) {
    validate_bath(bath);
    KernelSet ks;
    ks.bath_density_ = bath;
    ks.bath_ = make_kernel(bath);
    ks.norm_h_sq_ = ks.bath_->m(0);
    ks.norm_h_over_omega_sq_ = ks.bath_->m(2);
    ks.overlap_h_ = ks.bath_->m(1);
    for (const auto& ov : overlaps) {
        validate_overlap(ov.rho_hf);
        validate_overlap(ov.rho_ff);
        CrossKernel ck;
        ck.name = ov.name;
        ck.hf = make_kernel(ov.rho_hf);
        ck.norm_f_sq = moment(ov.rho_ff, 0);
        ck.overlap_h_over_omega_f = ck.hf->m(1);
        ks.cross_.push_back(std::move(ck));
    }
    return ks;
}

}  // namespace sbmc
