#ifndef SBMC_PATH_HPP
#define SBMC_PATH_HPP

#include <string>
#include <vector>

#include "sbmc/kernels.hpp"

namespace sbmc {

struct TruncationTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Cadlag +-1 path on [-T,T]: value v on [-T, tau_1), flipping at each jump.
// Jump times are strictly increasing and strictly inside the open window.
struct SpinPath {
    double T = 1.0;
    int v = +1;
    std::vector<double> jumps;

    int spin_at(double t) const;
    int spin_end() const { return (jumps.size() % 2 == 0) ? v : -v; }
    int n() const { return static_cast<int>(jumps.size()); }

    // maximal constant pieces [a_i, b_i) with sign s_i, covering [-T,T]
    struct Segment {
        double a, b;
        int s;
    };
    std::vector<Segment> segments() const;

    void validate() const;  // throws std::invalid_argument

    // line format: "T v n tau_1 ... tau_n" at full precision
    std::string to_line() const;
    static SpinPath from_line(const std::string& line);
};

// A(X) = \int\int_{[-T,T]^2} X_t X_s w_amp(t-s) dt ds, exact via the
// rectangle sums of the double antiderivative u2.
double pair_action(const SpinPath& path, const KernelSet& ks);

// A(path with spins flipped on [lo,hi)) - A(path)
//   = -4 * (cross interaction between the region and its complement).
double delta_action_flip(const SpinPath& path, const KernelSet& ks, double lo,
                         double hi);

// K(f) = -(alpha/2) \int_{-Tp}^{Tp} c_hf(r) X_r dr, exact segment sum.
// Tp defaults to the full window.
double k_of(const SpinPath& path, const CrossKernel& cross, double alpha,
            double t_prime = -1.0);

enum class QuadrantMode { Plain, Modified };

// \int_{-Tp}^0 dt \int_0^{Tp} ds X_t X_s w(t-s) with w = k/2 for the given
// decay kernel (the bath kernel for the plain case, a modified kernel for
// number-operator weights).  Enforces the a-priori path bound
// |value| <= m(2)/2 of the kernel used.
double quadrant(const SpinPath& path, const DecayKernel& kernel,
                double t_prime);

inline double quadrant(const SpinPath& path, const KernelSet& ks,
                       double t_prime) {
    if (t_prime > path.T) {
        throw TruncationTooLarge("quadrant: truncation must satisfy T' <= T");
    }
    return quadrant(path, *ks.bath_kernel(), t_prime);
}

}  // namespace sbmc

#endif
