#include "sbmc/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sbmc {

int SpinPath::spin_at(double t) const {
    const auto it = std::upper_bound(jumps.begin(), jumps.end(), t);
    const auto flips = static_cast<std::size_t>(it - jumps.begin());
    return (flips % 2 == 0) ? v : -v;
}

std::vector<SpinPath::Segment> SpinPath::segments() const {
    std::vector<Segment> out;
    out.reserve(jumps.size() + 1);
    double a = -T;
    int s = v;
    for (double tau : jumps) {
        out.push_back({a, tau, s});
        a = tau;
        s = -s;
    }
    out.push_back({a, T, s});
    return out;
}

void SpinPath::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("SpinPath: window half-width must be > 0");
    if (v != 1 && v != -1) throw std::invalid_argument("SpinPath: initial sign must be +-1");
    double prev = -T;
    for (double tau : jumps) {
        if (!(tau > prev)) {
            throw std::invalid_argument("SpinPath: jump times must be strictly increasing inside the window");
        }
        prev = tau;
    }
    if (!jumps.empty() && !(jumps.back() < T)) {
        throw std::invalid_argument("SpinPath: jump times must lie strictly inside the window");
    }
    if (!jumps.empty() && !(jumps.front() > -T)) {
        throw std::invalid_argument("SpinPath: jump times must lie strictly inside the window");
    }
}

std::string SpinPath::to_line() const {
    std::ostringstream os;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", T);
    os << buf << ' ' << v << ' ' << jumps.size();
    for (double tau : jumps) {
        std::snprintf(buf, sizeof(buf), "%.17g", tau);
        os << ' ' << buf;
    }
    return os.str();
}

SpinPath SpinPath::from_line(const std::string& line) {
    std::istringstream is(line);
    SpinPath p;
    std::size_t n = 0;
    if (!(is >> p.T >> p.v >> n)) {
        throw std::invalid_argument("SpinPath::from_line: malformed header");
    }
    p.jumps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(is >> p.jumps[i])) {
            throw std::invalid_argument("SpinPath::from_line: missing jump time");
        }
    }
    p.validate();
    return p;
}

namespace {

// rectangle integral of k/2 over [a,b] x [c,d] via the even antiderivative
inline double rect_half_k2(const DecayKernel& kern, double a, double b,
                           double c, double d) {
    const auto u2 = [&kern](double x) { return 0.5 * kern.k2(std::abs(x)); };
    return u2(b - c) - u2(a - c) - u2(b - d) + u2(a - d);
}

using Segs = std::vector<SpinPath::Segment>;

// path segments clipped to [lo, hi)
Segs clip(const Segs& segs, double lo, double hi) {
    Segs out;
    for (const auto& sg : segs) {
        const double a = std::max(sg.a, lo);
        const double b = std::min(sg.b, hi);
        if (b > a) out.push_back({a, b, sg.s});
    }
    return out;
}

double cross_sum(const DecayKernel& kern, const Segs& left, const Segs& right) {
    double acc = 0.0;
    for (const auto& p : left) {
        for (const auto& q : right) {
            const double r = rect_half_k2(kern, p.a, p.b, q.a, q.b);
            acc += (p.s * q.s) * r;
        }
    }
    return acc;
}

// Factorized cross integral for exponential kernels over separated groups:
// every left segment lies at or below `split`, every right one at or above.
// Exponents are measured from the split so all factors stay within [0,1].
double cross_sum_exp(const std::vector<DecayKernel::ExpMode>& modes,
                     const Segs& left, const Segs& right, double split) {
    double acc = 0.0;
    for (const auto& mo : modes) {
        const double w = mo.w;
        double il = 0.0;
        for (const auto& sg : left) {
            il += sg.s * (std::exp(w * (sg.b - split)) - std::exp(w * (sg.a - split)));
        }
        double ir = 0.0;
        for (const auto& sg : right) {
            ir += sg.s * (std::exp(-w * (sg.a - split)) - std::exp(-w * (sg.b - split)));
        }
        acc += 0.5 * mo.c * il * ir / (w * w);
    }
    return acc;
}

double cross_separated(const DecayKernel& kern, const Segs& left,
                       const Segs& right, double split) {
    if (left.empty() || right.empty()) return 0.0;
    if (const auto* modes = kern.exp_modes()) {
        return cross_sum_exp(*modes, left, right, split);
    }
    return cross_sum(kern, left, right);
}

}  // namespace

double pair_action(const SpinPath& path, const KernelSet& ks) {
    const Segs segs = path.segments();
    const DecayKernel& kern = *ks.bath_kernel();
    double acc = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        acc += rect_half_k2(kern, segs[i].a, segs[i].b, segs[i].a, segs[i].b);
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const double r =
                rect_half_k2(kern, segs[i].a, segs[i].b, segs[j].a, segs[j].b);
            acc += 2.0 * (segs[i].s * segs[j].s) * r;
        }
    }
    return acc;
}

double delta_action_flip(const SpinPath& path, const KernelSet& ks, double lo,
                         double hi) {
    if (hi <= lo) return 0.0;
    lo = std::max(lo, -path.T);
    hi = std::min(hi, path.T);
    if (hi <= lo) return 0.0;
    const Segs segs = path.segments();
    const Segs region = clip(segs, lo, hi);
    const Segs left = clip(segs, -path.T, lo);
    const Segs right = clip(segs, hi, path.T);
    if (left.empty() && right.empty()) return 0.0;  // global flip
    const DecayKernel& kern = *ks.bath_kernel();
    return -4.0 * (cross_separated(kern, left, region, lo) +
                   cross_separated(kern, region, right, hi));
}

double k_of(const SpinPath& path, const CrossKernel& cross, double alpha,
            double t_prime) {
    if (alpha == 0.0) return 0.0;
    const double tp = (t_prime < 0.0) ? path.T : t_prime;
    if (tp > path.T) {
        throw TruncationTooLarge("k_of: truncation must satisfy T' <= T");
    }
    const Segs segs = clip(path.segments(), -tp, tp);
    double acc = 0.0;
    for (const auto& sg : segs) {
        acc += sg.s * (cross.c1(sg.b) - cross.c1(sg.a));
    }
    return -0.5 * alpha * acc;
}

double quadrant(const SpinPath& path, const DecayKernel& kernel,
                double t_prime) {
    if (t_prime > path.T) {
        throw TruncationTooLarge("quadrant: truncation must satisfy T' <= T");
    }
    const Segs segs = path.segments();
    const Segs left = clip(segs, -t_prime, 0.0);
    const Segs right = clip(segs, 0.0, t_prime);
    const double value = cross_separated(kernel, left, right, 0.0);
    const double bound = 0.5 * kernel.m(2) * (1.0 + 1e-9) + 1e-300;
    if (!(std::abs(value) <= bound)) {
        throw std::logic_error("quadrant: a-priori path bound violated");
    }
    return value;
}

}  // namespace sbmc
