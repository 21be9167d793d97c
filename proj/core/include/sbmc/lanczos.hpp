#ifndef SBMC_LANCZOS_HPP
#define SBMC_LANCZOS_HPP

#include <functional>
#include <stdexcept>
#include <vector>

namespace sbmc {

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using MatVec = std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Eigenvalues (ascending) and, optionally, eigenvectors of a symmetric
// tridiagonal matrix; implicit QL with shifts.
void tridiag_eigen(std::vector<double>& diag, std::vector<double>& off,
                   std::vector<double>* vecs);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    int iterations = 0;
};

// Lowest eigenpair by Lanczos with full reorthogonalization, started from v0
// (or e_0-ish default).  Converges to residual_tol or throws NoConvergence.
EigenPair lowest_eigenpair(const MatVec& av, std::size_t dim,
                           std::vector<double> v0 = {},
                           int max_iter = 300, double residual_tol = 1e-11);

// Gauss quadrature w.r.t. the spectral measure of A seeded by the (normalized)
// vector v: <v, F(A) v> ~= sum_j weight_j F(node_j).
struct SpectralQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum to 1

    double integrate(const std::function<double(double)>& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc += weights[i] * f(nodes[i]);
        }
        return acc;
    }
};

SpectralQuadrature spectral_quadrature(const MatVec& av, std::size_t dim,
                                       std::vector<double> v, int order);

}  // namespace sbmc

#endif
