#include "sbmc/spectral_density.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sbmc {

namespace {

void check_tabulated_shape(const Tabulated& t) {
    if (t.omega.size() != t.rho.size()) {
        throw SpectralDensityError("tabulated density: column size mismatch");
    }
    if (t.omega.size() < 8) {
        throw SpectralDensityError("tabulated density: need at least 8 grid points");
    }
    if (t.omega.front() <= 0.0) {
        throw SpectralDensityError("tabulated density: grid must start at omega > 0");
    }
    for (std::size_t i = 1; i < t.omega.size(); ++i) {
        if (!(t.omega[i] > t.omega[i - 1])) {
            throw SpectralDensityError("tabulated density: omega grid must be strictly increasing");
        }
    }
    for (double r : t.rho) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw NonPositiveDensity("tabulated density: rho must be finite and >= 0");
        }
    }
}

double trapezoid_moment(const Tabulated& t, int j) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.omega.size(); ++i) {
        const double f0 = t.rho[i - 1] / std::pow(t.omega[i - 1], j);
        const double f1 = t.rho[i] / std::pow(t.omega[i], j);
        acc += 0.5 * (f0 + f1) * (t.omega[i] - t.omega[i - 1]);
    }
    return acc;
}

}  // namespace

void validate_overlap(const SpectralDensity& sd) {
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        if (!(p->amplitude >= 0.0)) {
            throw NonPositiveDensity("power-law density: amplitude must be >= 0");
        }
        if (!(p->cutoff > 0.0)) {
            throw SpectralDensityError("power-law density: cutoff must be > 0");
        }
        if (!(p->exponent > -1.0)) {
            throw SpectralDensityError("power-law density: exponent must be > -1 for a finite norm");
        }
    } else if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        if (d->modes.empty()) {
            throw SpectralDensityError("discrete density: at least one mode required");
        }
        for (const auto& m : d->modes) {
            if (!(m.frequency > 0.0)) {
                throw InfraredDivergent("discrete density: mode frequencies must be > 0");
            }
        }
    } else {
        check_tabulated_shape(std::get<Tabulated>(sd));
    }
}

void validate_bath(const SpectralDensity& sd) {
    validate_overlap(sd);
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        // \int w^{s-2} e^{-w/wc} dw < inf  iff  s > 1
        if (!(p->exponent > 1.0)) {
            throw InfraredDivergent("power-law bath: exponent must be > 1 (h/omega not square integrable)");
        }
    } else if (const auto* t = std::get_if<Tabulated>(&sd)) {
        if (!std::isfinite(trapezoid_moment(*t, 2))) {
            throw InfraredDivergent("tabulated bath: trapezoid estimate of int rho/w^2 is not finite");
        }
    }
}

double moment(const SpectralDensity& sd, int j) {
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        const double a = p->exponent + 1.0 - j;
        if (!(a > 0.0)) {
            throw InfraredDivergent("power-law density: moment diverges");
        }
        return p->amplitude * std::tgamma(a) * std::pow(p->cutoff, a);
    }
    if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        double acc = 0.0;
        for (const auto& m : d->modes) {
            acc += m.coupling * m.coupling / std::pow(m.frequency, j);
        }
        return acc;
    }
    return trapezoid_moment(std::get<Tabulated>(sd), j);
}

SpectralDensity divided_by_omega(const SpectralDensity& sd, int j) {
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        return PowerLawExpCutoff{p->amplitude, p->exponent - j, p->cutoff};
    }
    if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        DiscreteModes out = *d;
        for (auto& m : out.modes) {
            // store the division in the squared coupling
            m.coupling /= std::pow(m.frequency, 0.5 * j);
        }
        return out;
    }
    Tabulated out = std::get<Tabulated>(sd);
    for (std::size_t i = 0; i < out.omega.size(); ++i) {
        out.rho[i] /= std::pow(out.omega[i], j);
    }
    return out;
}

Tabulated load_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SpectralDensityError("cannot open tabulated density file: " + path);
    }
    Tabulated t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        for (auto& ch : s) {
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        }
        std::istringstream ss(s);
        std::string first;
        if (!(ss >> first)) continue;           // blank line
        if (first[0] == '#') continue;          // comment
        double w, r;
        std::istringstream ss2(s);
        if (!(ss2 >> w >> r)) {
            if (lineno == 1) continue;          // header row
            throw SpectralDensityError(path + ":" + std::to_string(lineno) +
                                       ": expected two numeric columns");
        }
        t.omega.push_back(w);
        t.rho.push_back(r);
    }
    check_tabulated_shape(t);
    return t;
}

std::string describe(const SpectralDensity& sd) {
    std::ostringstream os;
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        os << "power_law{amplitude=" << p->amplitude << ",exponent=" << p->exponent
           << ",cutoff=" << p->cutoff << "}";
    } else if (const auto* d = std::get_if<DiscreteModes>(&sd)) {
        os << "discrete{";
        for (std::size_t i = 0; i < d->modes.size(); ++i) {
            if (i) os << ",";
            os << "(" << d->modes[i].coupling << "," << d->modes[i].frequency << ")";
        }
        os << "}";
    } else {
        const auto& t = std::get<Tabulated>(sd);
        os << "tabulated{" << t.omega.size() << " points, omega in [" << t.omega.front()
           << "," << t.omega.back() << "]}";
    }
    return os.str();
}

}  // namespace sbmc
