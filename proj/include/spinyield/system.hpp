// system.hpp: radical-pair spin system, static Hamiltonian, initial states.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ops.hpp"
#include "units.hpp"

namespace spinyield::sys {

using spinyield::Matrix;
using spinyield::Vector;
using spinyield::cd;

enum class Axis { x, y, z };

// Static field of magnitude b0 (tesla) at polar angle theta, azimuth phi.
struct FieldVector {
    double b0 = 0;
    double theta = 0;
    double phi = 0;

    double bx() const { return b0 * std::sin(theta) * std::cos(phi); }
    double by() const { return b0 * std::sin(theta) * std::sin(phi); }
    double bz() const { return b0 * std::cos(theta); }
};

// Diagonal hyperfine tensor, entries in rad/s. Axial means ax == ay.
// In the collective parametrization T_x = 2*ax, T_z = 2*az.
struct HyperfineTensor {
    double ax = 0, ay = 0, az = 0;

    bool axial() const { return ax == ay; }
};

// Two electrons plus n_nuclei spin-1/2 nuclei, each nucleus coupled to
// electron 1 through its own diagonal tensor. Site order in the product
// basis: electron 1, electron 2, nucleus 1, ..., nucleus n.
struct SpinSystem {
    int n_nuclei = 0;
    std::vector<HyperfineTensor> tensors;

    int sites() const { return n_nuclei + 2; }
    int dim() const { return 4 << n_nuclei; }

    void validate() const {
        if (n_nuclei < 0)
            throw std::invalid_argument("SpinSystem: negative nucleus count");
        if (static_cast<int>(tensors.size()) != n_nuclei)
            throw std::invalid_argument("SpinSystem: " + std::to_string(tensors.size()) +
                                        " tensors for " + std::to_string(n_nuclei) + " nuclei");
        if (n_nuclei > 8)
            throw std::invalid_argument("SpinSystem: full-Hilbert engine capped at 8 nuclei");
    }
};

// Pauli operator on one site of the electron1 x electron2 x nuclei chain.
// Site 0 and 1 are the electrons, 2.. the nuclei.
inline Matrix embed_pauli(Axis axis, int site, int n_nuclei) {
    Matrix p = (axis == Axis::x) ? ops::sigma_x()
             : (axis == Axis::y) ? ops::sigma_y()
                                 : ops::sigma_z();
    return ops::embed(p, site, n_nuclei + 2);
}

// Zeeman term gamma * B . (S1 + S2) on the full space.
inline Matrix build_zeeman(const FieldVector& field, int n_nuclei,
                           const units::UnitSystem& units = {}) {
    const double cx = units.gamma * field.bx();
    const double cy = units.gamma * field.by();
    const double cz = units.gamma * field.bz();
    Matrix h = Matrix::Zero(4 << n_nuclei, 4 << n_nuclei);
    for (int e = 0; e < 2; ++e) {
        if (cx != 0) h += cx * embed_pauli(Axis::x, e, n_nuclei);
        if (cy != 0) h += cy * embed_pauli(Axis::y, e, n_nuclei);
        h += cz * embed_pauli(Axis::z, e, n_nuclei);
    }
    return h;
}

// Full static Hamiltonian: Zeeman plus per-nucleus hyperfine coupling of
// electron 1, H = gamma B.(S1+S2) + sum_n S1 . A_n . I_n.
inline Matrix build_h0(const SpinSystem& system, const FieldVector& field,
                       const units::UnitSystem& units = {}) {
    system.validate();
    Matrix h = build_zeeman(field, system.n_nuclei, units);
    for (int n = 0; n < system.n_nuclei; ++n) {
        const HyperfineTensor& a = system.tensors[n];
        const int nuc = n + 2;
        if (a.ax != 0)
            h += a.ax * (embed_pauli(Axis::x, 0, system.n_nuclei) *
                         embed_pauli(Axis::x, nuc, system.n_nuclei));
        if (a.ay != 0)
            h += a.ay * (embed_pauli(Axis::y, 0, system.n_nuclei) *
                         embed_pauli(Axis::y, nuc, system.n_nuclei));
        if (a.az != 0)
            h += a.az * (embed_pauli(Axis::z, 0, system.n_nuclei) *
                         embed_pauli(Axis::z, nuc, system.n_nuclei));
    }
    return h;
}

// ----------------------------- initial states -------------------------------

enum class StateKind { singlet, triplet0, dark_incoherent };

inline Vector singlet_ket() {
    Vector s = Vector::Zero(4);
    s(1) = 1 / std::sqrt(2.0);    // |10>
    s(2) = -1 / std::sqrt(2.0);   // |01>
    return s;
}

inline Vector triplet0_ket() {
    Vector t = Vector::Zero(4);
    t(1) = 1 / std::sqrt(2.0);
    t(2) = 1 / std::sqrt(2.0);
    return t;
}

// Electron-pair initial state (4x4). The field direction (theta, phi) only
// matters for the incoherent dark mixture, an equal mix of the two
// field-aligned dark product states.
inline Matrix initial_state(StateKind kind, double theta = 0, double phi = 0) {
    switch (kind) {
        case StateKind::singlet: {
            Vector s = singlet_ket();
            return s * s.adjoint();
        }
        case StateKind::triplet0: {
            Vector t = triplet0_ket();
            return t * t.adjoint();
        }
        case StateKind::dark_incoherent: {
            Vector d1 = ops::kron(Matrix(ops::psi(theta, phi)), Matrix(ops::psi_perp(theta, phi)));
            Vector d2 = ops::kron(Matrix(ops::psi_perp(theta, phi)), Matrix(ops::psi(theta, phi)));
            return 0.5 * (d1 * d1.adjoint() + d2 * d2.adjoint());
        }
    }
    throw std::invalid_argument("initial_state: unknown kind");
}

}  // namespace spinyield::sys
