// units.hpp: the unit system tying reduced quantities to SI angular frequencies.
#pragma once

namespace spinyield::units {

// Everything downstream works in SI: fields in tesla, couplings and
// frequencies in rad/s, rates in 1/s, times in seconds.
//
// gamma is the electron gyromagnetic ratio with g = 2 and hbar absorbed,
// so gamma*B is the angular frequency attached to a Pauli (not spin-1/2)
// Zeeman term. lambda() is the hyperfine reference scale: the Zeeman
// frequency of the 46 uT reference field. Couplings quoted as multiples
// of lambda and rates as multiples of k_default round-trip exactly.
struct UnitSystem {
    double gamma = 8.794e10;   // rad s^-1 T^-1
    double b_ref = 46e-6;      // T
    double k_default = 1e4;    // s^-1

    double lambda() const { return gamma * b_ref; }   // rad/s, ~4.045e6

    double si_from_lambda(double x) const { return x * lambda(); }
    double lambda_from_si(double w) const { return w / lambda(); }
    double si_from_k(double x) const { return x * k_default; }
    double k_from_si(double r) const { return r / k_default; }
};

}  // namespace spinyield::units
