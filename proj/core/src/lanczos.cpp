#include "sbmc/lanczos.hpp"

#include <cmath>

namespace sbmc {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::vector<double>& x, double a) {
    for (auto& v : x) v *= a;
}

struct Tridiag {
    std::vector<double> alpha, beta;  // beta[k] couples k and k+1
    std::vector<std::vector<double>> basis;
};

// Lanczos with full reorthogonalization (two Gram-Schmidt passes).
Tridiag lanczos(const MatVec& av, std::size_t dim, std::vector<double> v,
                int order) {
    Tridiag t;
    const double nv = norm(v);
    if (nv == 0.0) throw std::invalid_argument("lanczos: zero start vector");
    scale(v, 1.0 / nv);
    std::vector<double> w(dim);
    for (int k = 0; k < order; ++k) {
        t.basis.push_back(v);
        av(v, w);
        const double a = dot(v, w);
        t.alpha.push_back(a);
        axpy(-a, v, w);
        if (k > 0) axpy(-t.beta[static_cast<std::size_t>(k) - 1], t.basis[static_cast<std::size_t>(k) - 1], w);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : t.basis) {
                const double c = dot(q, w);
                if (c != 0.0) axpy(-c, q, w);
            }
        }
        const double b = norm(w);
        if (b < 1e-14 || static_cast<std::size_t>(k) + 1 >= dim ||
            k + 1 >= order) {
            break;
        }
        t.beta.push_back(b);
        v = w;
        scale(v, 1.0 / b);
    }
    return t;
}

}  // namespace

void tridiag_eigen(std::vector<double>& d, std::vector<double>& e,
                   std::vector<double>* vecs) {
    // implicit QL with Wilkinson shifts (EISPACK tql2 lineage)
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.resize(static_cast<std::size_t>(n), 0.0);  // e[i] couples i and i+1; e[n-1] unused
    if (vecs) {
        vecs->assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) (*vecs)[static_cast<std::size_t>(i) * n + i] = 1.0;
    }
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > 50) throw NoConvergence("tridiag_eigen: QL did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (vecs) {
                    for (int k = 0; k < n; ++k) {
                        f = (*vecs)[static_cast<std::size_t>(k) * n + i + 1];
                        (*vecs)[static_cast<std::size_t>(k) * n + i + 1] =
                            s * (*vecs)[static_cast<std::size_t>(k) * n + i] + c * f;
                        (*vecs)[static_cast<std::size_t>(k) * n + i] =
                            c * (*vecs)[static_cast<std::size_t>(k) * n + i] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending, carrying columns
    for (int i = 0; i < n - 1; ++i) {
        int k = i;
        for (int j = i + 1; j < n; ++j) {
            if (d[j] < d[k]) k = j;
        }
        if (k != i) {
            std::swap(d[i], d[k]);
            if (vecs) {
                for (int row = 0; row < n; ++row) {
                    std::swap((*vecs)[static_cast<std::size_t>(row) * n + i],
                              (*vecs)[static_cast<std::size_t>(row) * n + k]);
                }
            }
        }
    }
}

EigenPair lowest_eigenpair(const MatVec& av, std::size_t dim,
                           std::vector<double> v0, int max_iter,
                           double residual_tol) {
    if (v0.empty()) {
        v0.assign(dim, 0.0);
        v0[0] = 1.0;
        if (dim > 1) v0[1] = 0.5;  // break accidental symmetry
        if (dim > 2) v0[dim / 2] = 0.25;
    }
    const int order = static_cast<int>(std::min<std::size_t>(dim, static_cast<std::size_t>(max_iter)));
    Tridiag t = lanczos(av, dim, std::move(v0), order);
    std::vector<double> d = t.alpha;
    std::vector<double> e = t.beta;
    std::vector<double> vecs;
    tridiag_eigen(d, e, &vecs);
    const int k = static_cast<int>(t.alpha.size());

    EigenPair out;
    out.value = d[0];
    out.iterations = k;
    out.vector.assign(dim, 0.0);
    for (int j = 0; j < k; ++j) {
        axpy(vecs[static_cast<std::size_t>(j) * k + 0], t.basis[static_cast<std::size_t>(j)], out.vector);
    }
    const double nv = norm(out.vector);
    scale(out.vector, 1.0 / nv);
    std::vector<double> w(dim);
    av(out.vector, w);
    axpy(-out.value, out.vector, w);
    out.residual = norm(w);
    if (out.residual > residual_tol) {
        throw NoConvergence("lowest_eigenpair: residual " +
                            std::to_string(out.residual) + " above tolerance");
    }
    return out;
}

SpectralQuadrature spectral_quadrature(const MatVec& av, std::size_t dim,
                                       std::vector<double> v, int order) {
    // represents the normalized seed; callers scale by ||v||^2 if needed
    Tridiag t = lanczos(av, dim, std::move(v), order);
    std::vector<double> d = t.alpha;
    std::vector<double> e = t.beta;
    std::vector<double> vecs;
    tridiag_eigen(d, e, &vecs);
    const int k = static_cast<int>(t.alpha.size());
    SpectralQuadrature q;
    q.nodes = d;
    q.weights.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const double w0 = vecs[static_cast<std::size_t>(0) * k + j];
        q.weights[static_cast<std::size_t>(j)] = w0 * w0;
    }
    return q;
}

}  // namespace sbmc
