#include "sbmc/energy.hpp"

#include <cmath>

namespace sbmc {

namespace {

struct IntegralResult {
    double value = 0.0;
    double var = 0.0;
    double curvature = 0.0;
    std::vector<EnergyLadderNode> nodes;
};

// composite Simpson over a uniform lambda grid of mean-action estimates
IntegralResult coupling_integral(const McmcConfig& base, const KernelSet& ks,
                                 const EnergyOptions& opt, double T) {
    const double lam_max = 0.5 * base.alpha * base.alpha;
    int n = std::max(opt.nodes, 5);
    if (n % 2 == 0) ++n;
    const double h = lam_max / (n - 1);

    IntegralResult out;
    std::vector<double> means(static_cast<std::size_t>(n)),
        vars(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        McmcConfig cfg = base;
        cfg.T = T;
        cfg.lambda_run = h * i;
        cfg.burnin_sweeps = opt.burnin_sweeps;
        cfg.measure_sweeps = opt.measure_sweeps;
        cfg.seed = base.seed + 7919 * static_cast<std::uint64_t>(i) +
                   (T == base.T ? 0u : 104729u);
        RunResult run = run_chains(cfg, ks);
        const auto sum =
            stats::summarize_chains(run.samples.action, run.samples.chain_edges);
        means[static_cast<std::size_t>(i)] = sum.mean;
        vars[static_cast<std::size_t>(i)] = sum.stderror * sum.stderror;
        out.nodes.push_back({cfg.lambda_run, sum.mean, sum.stderror, sum.tau_int});
    }

    double simpson = 0.0, trap = 0.0, var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ws =
            (i == 0 || i == n - 1) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
        simpson += ws * h / 3.0 * means[static_cast<std::size_t>(i)];
        var += (ws * h / 3.0) * (ws * h / 3.0) * vars[static_cast<std::size_t>(i)];
        const double wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        trap += wt * h * means[static_cast<std::size_t>(i)];
    }
    out.value = simpson;
    out.var = var;
    out.curvature =
        std::abs(simpson - trap) / std::max(std::abs(simpson), 1e-300);
    return out;
}

}  // namespace

EnergyResult energy(const McmcConfig& base, const KernelSet& ks,
                    const EnergyOptions& opt) {
    EnergyResult out;
    if (base.alpha == 0.0) {
        out.value = -base.eps;
        out.e_at_T = out.e_at_half_T = out.value;
        return out;  // the ladder integrand is empty
    }

    const IntegralResult full = coupling_integral(base, ks, opt, base.T);
    out.integrand = full.nodes;
    out.curvature = full.curvature;
    if (full.curvature > opt.curvature_tol) {
        throw LadderTooCoarse(
            "energy: Simpson/trapezoid disagreement " +
            std::to_string(full.curvature) +
            " exceeds tolerance; refine the lambda ladder");
    }
    out.e_at_T = -base.eps - full.value / (2.0 * base.T);
    const double var_T = full.var / (4.0 * base.T * base.T);

    if (!opt.richardson) {
        out.value = out.e_at_T;
        out.stderror = std::sqrt(var_T);
        out.e_at_half_T = 0.0;
        return out;
    }

    const IntegralResult half = coupling_integral(base, ks, opt, 0.5 * base.T);
    out.e_at_half_T = -base.eps - half.value / base.T;
    const double var_half = half.var / (base.T * base.T);

    // E(T) = E + c/T + o(1/T): the 2:1 ladder cancels the 1/T term
    out.value = 2.0 * out.e_at_T - out.e_at_half_T;
    out.stderror = std::sqrt(4.0 * var_T + var_half);
    out.systematic = std::abs(out.e_at_T - out.e_at_half_T);
    return out;
}

}  // namespace sbmc
