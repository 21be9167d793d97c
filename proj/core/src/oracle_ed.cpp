#include "sbmc/oracle_ed.hpp"

#include <cmath>
#include <stdexcept>

namespace sbmc {

namespace {

struct Basis {
    int n_levels;               // n_max + 1
    std::size_t n_modes;
    std::size_t boson_dim;      // n_levels^n_modes
    std::size_t dim;            // 2 * boson_dim

    // boson occupation of mode m in boson index b
    int occ(std::size_t b, std::size_t m) const {
        for (std::size_t i = 0; i < m; ++i) b /= static_cast<std::size_t>(n_levels);
        return static_cast<int>(b % static_cast<std::size_t>(n_levels));
    }
    std::size_t stride(std::size_t m) const {
        std::size_t s = 1;
        for (std::size_t i = 0; i < m; ++i) s *= static_cast<std::size_t>(n_levels);
        return s;
    }
    int total_occ(std::size_t b) const {
        int tot = 0;
        for (std::size_t m = 0; m < n_modes; ++m) tot += occ(b, m);
        return tot;
    }
};

Basis make_basis(const TruncatedModel& model) {
    Basis b;
    b.n_levels = model.n_max + 1;
    b.n_modes = model.modes.size();
    b.boson_dim = 1;
    for (std::size_t m = 0; m < b.n_modes; ++m) {
        b.boson_dim *= static_cast<std::size_t>(b.n_levels);
    }
    b.dim = 2 * b.boson_dim;
    return b;
}

}  // namespace

std::size_t TruncatedModel::dim() const {
    std::size_t d = 2;
    for (std::size_t m = 0; m < modes.size(); ++m) {
        d *= static_cast<std::size_t>(n_max + 1);
    }
    return d;
}

void TruncatedModel::validate() const {
    if (modes.empty()) throw std::invalid_argument("ED model: at least one mode required");
    if (n_max < 1) throw std::invalid_argument("ED model: n_max must be >= 1");
    for (const auto& m : modes) {
        if (!(m.omega > 0.0)) throw std::invalid_argument("ED model: mode frequencies must be > 0");
    }
    if (dim() > (std::size_t{1} << 15)) {
        throw std::invalid_argument("ED model: Hilbert dimension exceeds 2^15");
    }
}

MatVec hamiltonian_matvec(const TruncatedModel& model) {
    const Basis basis = make_basis(model);
    const double eps = model.eps;
    const double alpha = model.alpha;
    const auto modes = model.modes;
    return [basis, eps, alpha, modes](const std::vector<double>& x,
                                      std::vector<double>& y) {
        y.assign(basis.dim, 0.0);
        for (std::size_t s = 0; s < 2; ++s) {
            const double sz = (s == 0) ? 1.0 : -1.0;
            const std::size_t off = s * basis.boson_dim;
            const std::size_t offFlip = (1 - s) * basis.boson_dim;
            for (std::size_t b = 0; b < basis.boson_dim; ++b) {
                const double xv = x[off + b];
                if (xv != 0.0) {
                    // diagonal boson energy
                    double diag = 0.0;
                    for (std::size_t m = 0; m < basis.n_modes; ++m) {
                        diag += modes[m].omega * basis.occ(b, m);
                    }
                    y[off + b] += diag * xv;
                    // spin flip
                    y[offFlip + b] += -eps * xv;
                }
            }
            if (alpha != 0.0) {
                for (std::size_t m = 0; m < basis.n_modes; ++m) {
                    const double c = alpha * sz * modes[m].g / std::sqrt(2.0);
                    const std::size_t st = basis.stride(m);
                    for (std::size_t b = 0; b < basis.boson_dim; ++b) {
                        const int n = basis.occ(b, m);
                        const double xv = x[off + b];
                        if (xv == 0.0) continue;
                        if (n + 1 < basis.n_levels) {
                            y[off + b + st] += c * std::sqrt(n + 1.0) * xv;
                        }
                        if (n > 0) {
                            y[off + b - st] += c * std::sqrt(static_cast<double>(n)) * xv;
                        }
                    }
                }
            }
        }
    };
}

GroundStateResult ground_state(const TruncatedModel& model) {
    model.validate();
    const Basis basis = make_basis(model);
    const MatVec av = hamiltonian_matvec(model);

    // ground state: start from |+x> (x) vacuum which overlaps it for all
    // parameters (positivity of the semigroup in this representation)
    std::vector<double> v0(basis.dim, 0.0);
    v0[0] = 1.0 / std::sqrt(2.0);
    v0[basis.boson_dim] = 1.0 / std::sqrt(2.0);
    EigenPair gsp = lowest_eigenpair(av, basis.dim, v0, 400, 1e-10);

    GroundStateResult out;
    out.energy = gsp.value;
    out.state = std::move(gsp.vector);
    out.residual = gsp.residual;
    out.iterations = gsp.iterations;

    // gap: excitations seen by the sigma_z channel, which stays inside the
    // opposite symmetry sector
    const SpectralQuadrature q = sigma_z_channel(model, out.state);
    double e_low = 1e300, e_dom = 1e300, w_dom = 0.0;
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
        if (q.weights[j] < 1e-8) continue;
        if (q.nodes[j] < e_low) e_low = q.nodes[j];
        if (q.weights[j] > w_dom) {
            w_dom = q.weights[j];
            e_dom = q.nodes[j];
        }
    }
    out.gap = e_dom - gsp.value;
    out.gap_sector = e_low - gsp.value;
    out.gap_weight = w_dom;
    return out;
}

SpectralQuadrature sigma_z_channel(const TruncatedModel& model,
                                   const std::vector<double>& state) {
    const Basis basis = make_basis(model);
    std::vector<double> w(basis.dim);
    for (std::size_t b = 0; b < basis.boson_dim; ++b) {
        w[b] = state[b];
        w[basis.boson_dim + b] = -state[basis.boson_dim + b];
    }
    return spectral_quadrature(hamiltonian_matvec(model), basis.dim, w, 400);
}

double perturbative_energy(const TruncatedModel& model) {
    double acc = 0.0;
    for (const auto& m : model.modes) {
        acc += m.g * m.g / (2.0 * model.eps + m.omega);
    }
    return -model.eps - 0.5 * model.alpha * model.alpha * acc;
}

EdObservables observables(const TruncatedModel& model,
                          const std::vector<double>& state) {
    const Basis basis = make_basis(model);
    EdObservables out;
    for (std::size_t s = 0; s < 2; ++s) {
        const double sz = (s == 0) ? 1.0 : -1.0;
        const std::size_t off = s * basis.boson_dim;
        const std::size_t offFlip = (1 - s) * basis.boson_dim;
        for (std::size_t b = 0; b < basis.boson_dim; ++b) {
            const double p = state[off + b] * state[off + b];
            const int n = basis.total_occ(b);
            out.N += p * n;
            out.N2 += p * n * n;
            out.N3 += p * n * n * n;
            out.N4 += p * static_cast<double>(n) * n * n * n;
            const double par = (n % 2 == 0) ? 1.0 : -1.0;
            out.boson_parity += p * par;
            out.spin_times_boson_parity += p * sz * par;
            // sigma_x (-1)^N couples the two spin components
            out.spin_boson_parity -= par * state[off + b] * state[offFlip + b];
        }
    }
    return out;
}

double exp_number_moment(const TruncatedModel& model,
                         const std::vector<double>& state, double beta) {
    const Basis basis = make_basis(model);
    double acc = 0.0;
    for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t off = s * basis.boson_dim;
        for (std::size_t b = 0; b < basis.boson_dim; ++b) {
            acc += state[off + b] * state[off + b] *
                   std::exp(beta * basis.total_occ(b));
        }
    }
    return acc;
}

FieldOperator::FieldOperator(const TruncatedModel& model,
                             std::vector<double> f_coef) {
    const Basis basis = make_basis(model);
    dim_ = basis.dim;
    norm_f_sq_ = 0.0;
    for (double f : f_coef) norm_f_sq_ += f * f;
    mv_ = [basis, f_coef](const std::vector<double>& x, std::vector<double>& y) {
        y.assign(basis.dim, 0.0);
        for (std::size_t s = 0; s < 2; ++s) {
            const std::size_t off = s * basis.boson_dim;
            for (std::size_t m = 0; m < basis.n_modes; ++m) {
                const double c = f_coef[m] / std::sqrt(2.0);
                if (c == 0.0) continue;
                const std::size_t st = basis.stride(m);
                for (std::size_t b = 0; b < basis.boson_dim; ++b) {
                    const double xv = x[off + b];
                    if (xv == 0.0) continue;
                    const int n = basis.occ(b, m);
                    if (n + 1 < basis.n_levels) {
                        y[off + b + st] += c * std::sqrt(n + 1.0) * xv;
                    }
                    if (n > 0) {
                        y[off + b - st] += c * std::sqrt(static_cast<double>(n)) * xv;
                    }
                }
            }
        }
    };
}

double FieldOperator::expectation(const std::vector<double>& state,
                                  const std::function<double(double)>& F,
                                  int order) const {
    SpectralQuadrature q = spectral_quadrature(mv_, dim_, state, order);
    return q.integrate(F);
}

double FieldOperator::sigma_expectation(const std::vector<double>& state,
                                        const std::function<double(double)>& F,
                                        int order) const {
    // <u, F(Phi) v> with u = sigma_z state, v = state; Phi commutes with
    // sigma_z so polarization with (u+v)/2, (u-v)/2 is exact
    const std::size_t half = dim_ / 2;
    std::vector<double> plus(dim_), minus(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double sz = (i < half) ? 1.0 : -1.0;
        const double u = sz * state[i];
        plus[i] = 0.5 * (u + state[i]);
        minus[i] = 0.5 * (u - state[i]);
    }
    auto norm2 = [](const std::vector<double>& x) {
        double acc = 0.0;
        for (double v : x) acc += v * v;
        return acc;
    };
    double acc = 0.0;
    const double np = norm2(plus);
    const double nm = norm2(minus);
    if (np > 1e-28) {
        acc += np * spectral_quadrature(mv_, dim_, plus, order).integrate(F);
    }
    if (nm > 1e-28) {
        acc -= nm * spectral_quadrature(mv_, dim_, minus, order).integrate(F);
    }
    return acc;
}

double FieldOperator::moment(const std::vector<double>& state, int n) const {
    std::vector<double> v = state;
    std::vector<double> w;
    for (int i = 0; i < n; ++i) {
        mv_(v, w);
        std::swap(v, w);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) acc += state[i] * v[i];
    return acc;
}

std::vector<double> cutoff_ladder(TruncatedModel model, int n_lo, int n_hi,
                                  int step) {
    std::vector<double> out;
    for (int n = n_lo; n <= n_hi; n += step) {
        model.n_max = n;
        out.push_back(ground_state(model).energy);
    }
    return out;
}

}  // namespace sbmc
