#ifndef SBMC_SPECTRAL_DENSITY_HPP
#define SBMC_SPECTRAL_DENSITY_HPP

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sbmc {

struct SpectralDensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// \int rho(w)/w^2 dw diverges: the infrared regularity hypothesis fails and
// no ground-state quantity below is defined.
struct InfraredDivergent : SpectralDensityError {
    using SpectralDensityError::SpectralDensityError;
};
struct NonPositiveDensity : SpectralDensityError {
    using SpectralDensityError::SpectralDensityError;
};

// rho(w) = amplitude * w^exponent * exp(-w/cutoff).  Used both as a bath
// density (exponent > 1 required) and as a test-function overlap density
// (any exponent > -1 with finite moments in use).
struct PowerLawExpCutoff {
    double amplitude = 1.0;
    double exponent = 2.0;
    double cutoff = 1.0;
};

// rho(w) = sum_m coupling_m^2 delta(w - frequency_m)
struct DiscreteModes {
    struct Mode {
        double coupling;   // g_m
        double frequency;  // w_m > 0
    };
    std::vector<Mode> modes;
};

// Piecewise description on a strictly increasing grid with w_1 > 0.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> rho;
};

using SpectralDensity = std::variant<PowerLawExpCutoff, DiscreteModes, Tabulated>;

// Validates positivity, grid monotonicity and infrared regularity
// (finiteness of \int rho/w^2).  Throws the errors above.
void validate_bath(const SpectralDensity& sd);

// Weaker check for overlap densities: only positivity/grid shape.
void validate_overlap(const SpectralDensity& sd);

// \int rho(w) / w^j dw for j = 0,1,2 (j=0 gives the plain norm).
// For Tabulated this is the trapezoid estimate on the stored grid.
double moment(const SpectralDensity& sd, int j);

// rho(w)/w^j as a new density of the same family, used to derive the
// standard test functions f = h and f = h/omega from the bath.
SpectralDensity divided_by_omega(const SpectralDensity& sd, int j);

// Two-column CSV (omega, rho); '#'-comments and an optional header allowed,
// first column strictly increasing and positive.
Tabulated load_tabulated_csv(const std::string& path);

std::string describe(const SpectralDensity& sd);

}  // namespace sbmc

#endif
