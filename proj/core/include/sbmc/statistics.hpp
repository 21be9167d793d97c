#ifndef SBMC_STATISTICS_HPP
#define SBMC_STATISTICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace sbmc::stats {

struct Summary {
    double mean = 0.0;
    double stderror = 0.0;
    double tau_int = 0.5;
    std::size_t n = 0;
};

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // population variance

// Integrated autocorrelation time with the self-consistent window
// W = smallest lag with W >= 6 tau(W).
double tau_int(std::span<const double> x);

// Blocked standard error of the mean; block size >= 20 tau_int, at least 8
// blocks (block size shrinks if the series is too short, which inflates
// nothing but is recorded via tau anyway).
Summary summarize(std::span<const double> x);

// Series split at chain boundaries: per-chain summaries combined by sample
// count; associative and commutative.
Summary combine(const std::vector<Summary>& parts);

Summary summarize_chains(std::span<const double> x,
                         std::span<const std::size_t> chain_edges);

}  // namespace sbmc::stats

#endif
