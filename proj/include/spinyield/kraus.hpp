// kraus.hpp: the electron-pair map induced by unpolarized nuclei, as an
// explicit operator-sum, plus the dark-coherence residual check.
#pragma once

#include <vector>

#include "dark.hpp"
#include "ops.hpp"
#include "system.hpp"

namespace spinyield::dark {

// The static Hamiltonian splits across electron 1 (with all nuclei) and
// electron 2. With the nuclei starting maximally mixed, tracing them out
// leaves rho_s(t) = sum_ij K_ij rho_s(0) K_ij^dag with
//   K_ij = 2^{-N/2} <i|U_1(t)|j> (x) U_2(t),
// where i, j run over nuclear basis states and <i|U_1|j> is a 2x2 block on
// electron 1. Each K_ij is a product operator across the pair, which is what
// keeps the dark coherence from ever being generated.
inline std::vector<Matrix> kraus_operators(const sys::SpinSystem& system,
                                           const sys::FieldVector& field, double t,
                                           const units::UnitSystem& units = {}) {
    system.validate();
    const int nn = system.n_nuclei;
    const int nuc_dim = 1 << nn;

    // Electron 1 + nuclei, on its own compact chain (site 0 = electron 1).
    Matrix h1 = Matrix::Zero(2 * nuc_dim, 2 * nuc_dim);
    const double bw[3] = {field.bx(), field.by(), field.bz()};
    for (int w = 0; w < 3; ++w) {
        Matrix p = (w == 0) ? ops::sigma_x() : (w == 1) ? ops::sigma_y() : ops::sigma_z();
        if (bw[w] != 0) h1 += units.gamma * bw[w] * ops::embed(p, 0, nn + 1);
        for (int n = 0; n < nn; ++n) {
            const auto& a = system.tensors[n];
            double c = (w == 0) ? a.ax : (w == 1) ? a.ay : a.az;
            if (c != 0) h1 += c * (ops::embed(p, 0, nn + 1) * ops::embed(p, n + 1, nn + 1));
        }
    }
    Matrix h2 = units.gamma * (bw[0] * ops::sigma_x() + bw[1] * ops::sigma_y() +
                               bw[2] * ops::sigma_z());

    Matrix u1 = ops::evolution_operator(h1, t);
    Matrix u2 = ops::evolution_operator(h2, t);

    const double norm = std::pow(2.0, -0.5 * nn);
    std::vector<Matrix> ks;
    ks.reserve(nuc_dim * nuc_dim);
    for (int i = 0; i < nuc_dim; ++i)
        for (int j = 0; j < nuc_dim; ++j) {
            Matrix block(2, 2);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    block(a, b) = u1(a * nuc_dim + i, b * nuc_dim + j);
            ks.push_back(norm * ops::kron(block, u2));
        }
    return ks;
}

// Largest dark off-diagonal element any single Kraus branch generates from
// the incoherent dark mixture, over the sampled times. Zero in exact
// arithmetic because every branch is a product operator.
inline double verify_incoherence(const sys::SpinSystem& system,
                                 const sys::FieldVector& field, double theta,
                                 const std::vector<double>& t_samples,
                                 const units::UnitSystem& units = {}) {
    DarkFrame frame = DarkFrame::build(theta);
    Matrix rho_in = sys::initial_state(sys::StateKind::dark_incoherent, theta);
    double worst = 0;
    for (double t : t_samples) {
        for (const Matrix& k : kraus_operators(system, field, t, units)) {
            Matrix x = k * rho_in * k.adjoint();
            worst = std::max(worst, std::abs((frame.d1.adjoint() * x * frame.d2)(0)));
            worst = std::max(worst, std::abs((frame.d2.adjoint() * x * frame.d1)(0)));
        }
    }
    return worst;
}

// Default sampling grid for the residual check: 64 times across five
// lifetimes of the recombination rate.
inline std::vector<double> default_times(double k, int count = 64) {
    std::vector<double> ts(count);
    for (int i = 0; i < count; ++i) ts[i] = 5.0 / k * i / (count - 1);
    return ts;
}

}  // namespace spinyield::dark
