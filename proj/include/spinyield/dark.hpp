// dark.hpp: field-aligned dark/bright frame on the electron pair, and the
// population/coherence split of the singlet probability.
#pragma once

#include <cmath>
#include <stdexcept>

#include "ops.hpp"
#include "system.hpp"

namespace spinyield::dark {

using spinyield::Matrix;
using spinyield::Vector;
using spinyield::cd;

// M(theta, phi) = sum over both electrons of n.sigma for the unit vector n
// at polar angle theta and azimuth phi. Spectrum {0, 0, +2, -2}; its kernel
// is the dark plane.
inline Matrix build_m(double theta, double phi = 0) {
    Matrix one = std::sin(theta) * std::cos(phi) * ops::sigma_x() +
                 std::sin(theta) * std::sin(phi) * ops::sigma_y() +
                 std::cos(theta) * ops::sigma_z();
    return ops::kron(one, ops::id(2)) + ops::kron(ops::id(2), one);
}

// Product eigenbasis of M(theta, phi). d1, d2 span the kernel; b1, b2 carry
// eigenvalues +2 and -2. Phases are pinned so that <S|d1> = +1/sqrt(2),
// which makes |S> = (d1 - d2)/sqrt(2) at every field direction.
struct DarkFrame {
    double theta = 0;
    double phi = 0;
    Vector d1, d2, b1, b2;

    static DarkFrame build(double theta, double phi = 0) {
        DarkFrame f;
        f.theta = theta;
        f.phi = phi;
        Matrix p(ops::psi(theta, phi)), q(ops::psi_perp(theta, phi));
        f.d1 = ops::kron(p, q);
        f.d2 = ops::kron(q, p);
        f.b1 = ops::kron(p, p);
        f.b2 = ops::kron(q, q);
        return f;
    }
};

// Decomposition of the singlet probability: fs = fp + fc, where fp is the
// mean dark population and fc the (sign-flipped) real dark coherence.
struct Decomposition {
    double fp = 0;
    double fc = 0;

    double fs() const { return fp + fc; }
};

inline Decomposition fp_fc(const Matrix& rho, const DarkFrame& frame) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("fp_fc: expected a 4x4 electron-pair state");
    ops::check_density(rho, "fp_fc");
    Decomposition d;
    d.fp = 0.5 * ((frame.d1.adjoint() * rho * frame.d1)(0).real() +
                  (frame.d2.adjoint() * rho * frame.d2)(0).real());
    d.fc = -((frame.d1.adjoint() * rho * frame.d2)(0)).real();
    return d;
}

// Zero the d1<->d2 off-diagonal pair, leave everything else alone. Reduces a
// singlet to the incoherent dark mixture; keeps fp, kills fc; idempotent.
inline Matrix dephase_dark(const Matrix& rho, const DarkFrame& frame) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("dephase_dark: expected a 4x4 electron-pair state");
    Matrix p1 = frame.d1 * frame.d1.adjoint();
    Matrix p2 = frame.d2 * frame.d2.adjoint();
    return rho - p1 * rho * p2 - p2 * rho * p1;
}

}  // namespace spinyield::dark
