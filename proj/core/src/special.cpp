#include "sbmc/special.hpp"

#include <cmath>

namespace sbmc {

double levy_density(double s, double y) {
    if (!(s > 0.0 && s < 2.0)) {
        throw OrderOutOfRange("levy_density: order s must lie in (0,2)");
    }
    if (!(y > 0.0)) {
        throw OrderOutOfRange("levy_density: argument y must be positive");
    }
    return s / (2.0 * std::tgamma(1.0 - 0.5 * s)) * std::pow(y, -1.0 - 0.5 * s);
}

namespace {

using i128 = __int128;

i128 binomial128(int n, int k) {
    i128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

i128 ipow128(int base, int exp) {
    i128 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::uint64_t stirling2(int m, int r) {
    if (m < 1 || m > 20 || r < 1 || r > m) {
        throw OrderOutOfRange("stirling2: need 1 <= r <= m <= 20");
    }
    i128 sum = 0;
    for (int s = 1; s <= r; ++s) {
        const i128 term = binomial128(r, s) * ipow128(s, m);
        sum += ((r - s) % 2 == 0) ? term : -term;
    }
    i128 rfact = 1;
    for (int i = 2; i <= r; ++i) rfact *= i;
    // the alternating sum is r! times an integer
    return static_cast<std::uint64_t>(sum / rfact);
}

std::uint64_t stirling2_recurrence(int m, int r) {
    if (m < 1 || m > 20 || r < 1 || r > m) {
        throw OrderOutOfRange("stirling2_recurrence: need 1 <= r <= m <= 20");
    }
    std::vector<std::uint64_t> row(static_cast<std::size_t>(m) + 1, 0);
    row[0] = 1;  // S(0,0)
    for (int mm = 1; mm <= m; ++mm) {
        for (int rr = mm; rr >= 1; --rr) {
            row[rr] = static_cast<std::uint64_t>(rr) * row[rr] + row[rr - 1];
        }
        row[0] = 0;
    }
    return row[r];
}

double hermite_ix(int n, double x) {
    if (n < 0) throw OrderOutOfRange("hermite_ix: order must be >= 0");
    double qm = 1.0;  // q_0
    if (n == 0) return qm;
    double q = x;  // q_1
    for (int k = 1; k < n; ++k) {
        const double qp = x * q + k * qm;
        qm = q;
        q = qp;
    }
    return q;
}

double expm1_plus(double x) {
    if (x < 1e-3) {
        // x^2/2 - x^3/6 + x^4/24 - x^5/120
        return x * x * (0.5 + x * (-1.0 / 6.0 + x * (1.0 / 24.0 - x / 120.0)));
    }
    return std::expm1(-x) + x;
}

double one_mexp(double x) { return -std::expm1(-x); }

double powm1p(double x, double p) { return std::expm1(p * std::log1p(x)); }

}  // namespace sbmc
