// analytic.hpp: closed-form references for axial-z coupling in the x-z
// plane. These are the oracles the matrix engines are tested against, so
// they deliberately share no code with them.
#pragma once

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "collective.hpp"
#include "dark.hpp"
#include "system.hpp"
#include "units.hpp"

namespace spinyield::analytic {

// Electron 1 coupled to one nucleus through (0, 0, az) sees an effective
// field shifted by +-az/gamma depending on the nuclear z state; electron 2
// precesses bare. Everything below is built from those two tilted fields.
struct VerticalSingleParams {
    double theta = 0;     // field tilt
    double omega0 = 0;    // bare electron frequency, rad/s
    double omega_p = 0, omega_m = 0;
    double theta_p = 0, theta_m = 0;

    static VerticalSingleParams build(const sys::FieldVector& field, double az,
                                      const units::UnitSystem& units = {}) {
        VerticalSingleParams p;
        double bx = field.b0 * std::sin(field.theta);
        double bz = field.b0 * std::cos(field.theta);
        p.theta = field.theta;
        p.omega0 = units.gamma * field.b0;
        double shift = az / units.gamma;
        p.omega_p = units.gamma * std::hypot(bx, bz + shift);
        p.omega_m = units.gamma * std::hypot(bx, bz - shift);
        p.theta_p = std::atan2(bx, bz + shift);
        p.theta_m = std::atan2(bx, bz - shift);
        return p;
    }
};

// Time-domain dark population and coherence for the nuclear-up (+) or
// nuclear-down (-) branch, then averaged.
namespace detail {

inline double fp_branch(double dtheta, double omega, double t) {
    double s2 = std::pow(std::sin(dtheta), 2);
    return 0.5 * (1 - 0.5 * s2 * (1 - std::cos(2 * omega * t)));
}

inline double fc_branch(double dtheta, double omega, double omega0, double t) {
    double c4 = std::pow(std::cos(dtheta / 2), 4);
    double s4 = std::pow(std::sin(dtheta / 2), 4);
    double s2 = std::pow(std::sin(dtheta), 2);
    return 0.5 * (c4 * std::cos(2 * (omega - omega0) * t) +
                  s4 * std::cos(2 * (omega + omega0) * t) +
                  0.5 * s2 * std::cos(2 * omega0 * t));
}

// Laplace transform of cos(w t) against k e^{-kt}.
inline double lorentz(double k, double w) { return k * k / (k * k + w * w); }

}  // namespace detail

inline dark::Decomposition fp_fc_single(const VerticalSingleParams& p, double t) {
    dark::Decomposition d;
    d.fp = 0.5 * (detail::fp_branch(p.theta_p - p.theta, p.omega_p, t) +
                  detail::fp_branch(p.theta_m - p.theta, p.omega_m, t));
    d.fc = 0.5 * (detail::fc_branch(p.theta_p - p.theta, p.omega_p, p.omega0, t) +
                  detail::fc_branch(p.theta_m - p.theta, p.omega_m, p.omega0, t));
    return d;
}

struct YieldPair {
    double phi_p = 0;
    double phi_c = 0;
};

// Keep only the non-oscillating pieces; valid deep in the fast-precession
// regime, so complain when the scales are not separated.
inline YieldPair phi_secular_single(const VerticalSingleParams& p, double k) {
    if (std::min({p.omega0, p.omega_p, p.omega_m}) < 50 * k)
        std::cerr << "phi_secular_single: precession within 50x of the decay rate, "
                     "secular result unreliable\n";
    double s2p = std::pow(std::sin(p.theta_p - p.theta), 2);
    double s2m = std::pow(std::sin(p.theta_m - p.theta), 2);
    return {0.5 - 0.125 * (s2p + s2m), 0.0};
}

// Exact term-by-term Laplace integral of the oscillatory forms.
inline YieldPair phi_single_exact(const VerticalSingleParams& p, double k) {
    YieldPair y;
    for (double sign : {1.0, -1.0}) {
        double dtheta = (sign > 0 ? p.theta_p : p.theta_m) - p.theta;
        double omega = sign > 0 ? p.omega_p : p.omega_m;
        double s2 = std::pow(std::sin(dtheta), 2);
        double c4 = std::pow(std::cos(dtheta / 2), 4);
        double s4 = std::pow(std::sin(dtheta / 2), 4);
        y.phi_p += 0.5 * 0.5 * (1 - 0.5 * s2 * (1 - detail::lorentz(k, 2 * omega)));
        y.phi_c += 0.5 * 0.5 *
                   (c4 * detail::lorentz(k, 2 * (omega - p.omega0)) +
                    s4 * detail::lorentz(k, 2 * (omega + p.omega0)) +
                    0.5 * s2 * detail::lorentz(k, 2 * p.omega0));
    }
    return y;
}

// ------------------------- identical nuclei, axial z -------------------------

// With n identical (0,0,tz/2) tensors the bath enters only through the total
// nuclear z projection M, which shifts electron 1's field by M tz/gamma.
// Weights are the total-spin multiplicities.

namespace detail {

struct BranchGeometry {
    double dtheta = 0;
    double omega = 0;
};

inline BranchGeometry branch(int /*n*/, double tz, const sys::FieldVector& field,
                             double m, const units::UnitSystem& units) {
    double bx = field.b0 * std::sin(field.theta);
    double bz = field.b0 * std::cos(field.theta);
    double shift = m * tz / units.gamma;
    BranchGeometry g;
    g.omega = units.gamma * std::hypot(bx, bz + shift);
    g.dtheta = std::atan2(bx, bz + shift) - field.theta;
    return g;
}

}  // namespace detail

inline dark::Decomposition fp_fc_multi_vertical(int n, double tz,
                                                const sys::FieldVector& field, double t,
                                                const units::UnitSystem& units = {}) {
    if (n < 1) throw std::invalid_argument("fp_fc_multi_vertical: need n >= 1");
    double omega0 = units.gamma * field.b0;
    double scale = std::pow(2.0, -n);
    dark::Decomposition d;
    for (double j : collective::sector_spins(n)) {
        double w = collective::nu(n, j) * scale;
        for (double m = -j; m <= j + 0.5; m += 1) {
            auto g = detail::branch(n, tz, field, m, units);
            d.fp += w * detail::fp_branch(g.dtheta, g.omega, t);
            d.fc += w * detail::fc_branch(g.dtheta, g.omega, omega0, t);
        }
    }
    return d;
}

// Secular yields: the coherence survives only through the even-n M = 0
// branches, whose count telescopes to the central binomial.
inline YieldPair phi_multi_vertical(int n, double tz, const sys::FieldVector& field,
                                    const units::UnitSystem& units = {}) {
    if (n < 1) throw std::invalid_argument("phi_multi_vertical: need n >= 1");
    double scale = std::pow(2.0, -n);
    YieldPair y;
    y.phi_p = 0.5;
    for (double j : collective::sector_spins(n)) {
        double w = collective::nu(n, j) * scale;
        for (double m = -j; m <= j + 0.5; m += 1) {
            auto g = detail::branch(n, tz, field, m, units);
            y.phi_p -= 0.25 * w * std::pow(std::sin(g.dtheta), 2);
            if (m == 0) y.phi_c += 0.5 * w;
        }
    }
    return y;
}

// Closed form for the even-n coherence floor: 2^{-(n+1)} n! / ((n/2)!)^2.
inline double phi_c_even_constant(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("phi_c_even_constant: n must be even and positive");
    return std::pow(2.0, -(n + 1)) * collective::detail::binomial(n, n / 2);
}

inline YieldPair phi_multi_vertical_exact(int n, double tz,
                                          const sys::FieldVector& field, double k,
                                          const units::UnitSystem& units = {}) {
    if (n < 1) throw std::invalid_argument("phi_multi_vertical_exact: need n >= 1");
    double omega0 = units.gamma * field.b0;
    double scale = std::pow(2.0, -n);
    YieldPair y;
    for (double j : collective::sector_spins(n)) {
        double w = collective::nu(n, j) * scale;
        for (double m = -j; m <= j + 0.5; m += 1) {
            auto g = detail::branch(n, tz, field, m, units);
            double s2 = std::pow(std::sin(g.dtheta), 2);
            double c4 = std::pow(std::cos(g.dtheta / 2), 4);
            double s4 = std::pow(std::sin(g.dtheta / 2), 4);
            y.phi_p += w * 0.5 * (1 - 0.5 * s2 * (1 - detail::lorentz(k, 2 * g.omega)));
            y.phi_c += w * (0.5 * c4 * detail::lorentz(k, 2 * (g.omega - omega0)) +
                            0.5 * s4 * detail::lorentz(k, 2 * (g.omega + omega0)) +
                            0.25 * s2 * detail::lorentz(k, 2 * omega0));
        }
    }
    return y;
}

// ----------------------------- expansion limits -----------------------------

// Second order in the small ratio gamma B0 / az for a single vertical
// coupling dominating the field.
inline double phi_strong_coupling(double theta, double b0, double az,
                                  const units::UnitSystem& units = {}) {
    double ratio = units.gamma * b0 / az;
    if (std::abs(ratio) > 0.3)
        std::cerr << "phi_strong_coupling: gamma*B0/az = " << ratio
                  << ", expansion out of its depth\n";
    double s2 = std::pow(std::sin(theta), 2);
    double s4 = s2 * s2;
    return 0.5 - 0.25 * s2 - ratio * ratio * (0.75 * s2 - s4);
}

// Leading driven-yield correction for a weak resonant transverse drive:
// the bright-dark transition saturates quadratically in time, and the
// Laplace weight turns the t^2 growth into 2/k^2.
inline double phi_rf_perturbative(const VerticalSingleParams& p, double b_rf, double k,
                                  const units::UnitSystem& units = {}) {
    double base = phi_single_exact(p, k).phi_p;
    double rabi = units.gamma * b_rf;
    double bracket = std::pow(std::cos(p.theta_p - p.theta), 2) +
                     std::pow(std::cos(p.theta_m - p.theta), 2);
    return base - rabi * rabi / (8 * k * k) * bracket;
}

}  // namespace spinyield::analytic
