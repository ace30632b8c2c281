// collective.hpp: identical axially-coupled nuclei treated one total-spin
// sector at a time, turning an exponential bath into a polynomial one.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "closed.hpp"
#include "ops.hpp"
#include "system.hpp"

namespace spinyield::collective {

using spinyield::Matrix;
using spinyield::cd;

namespace detail {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    // Exact in double through n = 30 or so, far beyond the nucleus cap.
    double c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

}  // namespace detail

// Number of total-spin-j irreps in the product of n spin-1/2 nuclei.
inline double nu(int n, double j) {
    int twoj = static_cast<int>(std::llround(2 * j));
    if (n < 1 || twoj < 0 || twoj > n || ((n - twoj) % 2) != 0)
        throw std::invalid_argument("nu: sector j=" + std::to_string(j) +
                                    " does not occur for n=" + std::to_string(n));
    int k = (n - twoj) / 2;
    return detail::binomial(n, k) - detail::binomial(n, k - 1);
}

// Total-spin sectors of n nuclei, largest first.
inline std::vector<double> sector_spins(int n) {
    std::vector<double> js;
    for (int twoj = n; twoj >= 0; twoj -= 2) js.push_back(twoj / 2.0);
    return js;
}

// Spin-j matrices in the |j,m> basis ordered m = +j ... -j.
inline Matrix jz_matrix(double j) {
    int d = static_cast<int>(std::llround(2 * j)) + 1;
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = j - i;
    return m;
}

inline Matrix jplus_matrix(double j) {
    int d = static_cast<int>(std::llround(2 * j)) + 1;
    Matrix m = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) {
        double mm = j - i;  // raising from |j, mm> to |j, mm+1>
        m(i - 1, i) = std::sqrt((j - mm) * (j + mm + 1));
    }
    return m;
}

// Electron pair x one total-spin sector. The identical-tensor coupling
// sum_n (tx/2)(s1x inx + s1y iny) + (tz/2) s1z inz collapses to
// tx (s1+ J- + s1- J+) + tz s1z Jz with s1+- the half-convention electron
// ladder and J the standard collective spin.
inline Matrix sector_hamiltonian(double j, double tx, double tz,
                                 const sys::FieldVector& field,
                                 const units::UnitSystem& units = {}) {
    int jd = static_cast<int>(std::llround(2 * j)) + 1;
    Matrix idj = ops::id(jd);
    auto on_e1 = [&](const Matrix& p) { return ops::kron(ops::kron(p, ops::id(2)), idj); };
    auto on_e2 = [&](const Matrix& p) { return ops::kron(ops::kron(ops::id(2), p), idj); };

    Matrix h = Matrix::Zero(4 * jd, 4 * jd);
    const double bw[3] = {field.bx(), field.by(), field.bz()};
    const Matrix paulis[3] = {ops::sigma_x(), ops::sigma_y(), ops::sigma_z()};
    for (int w = 0; w < 3; ++w)
        if (bw[w] != 0) h += units.gamma * bw[w] * (on_e1(paulis[w]) + on_e2(paulis[w]));

    Matrix jp = jplus_matrix(j);
    Matrix s1p = ops::sigma_plus();
    if (tx != 0)
        h += tx * (ops::kron(ops::kron(s1p, ops::id(2)), Matrix(jp.adjoint())) +
                   ops::kron(ops::kron(Matrix(s1p.adjoint()), ops::id(2)), jp));
    if (tz != 0) h += tz * ops::kron(ops::kron(ops::sigma_z(), ops::id(2)), jz_matrix(j));
    return h;
}

// Yields for n identical nuclei with tensor (tx/2, tx/2, tz/2), computed
// sector by sector: each |j,m> starts populated, weighted by nu(n,j)/2^n.
inline closed::YieldRecord sector_yield(int n, double tx, double tz,
                                        const sys::FieldVector& field,
                                        const Matrix& rho_e, double k,
                                        const units::UnitSystem& units = {}) {
    if (n < 1) throw std::invalid_argument("sector_yield: need at least one nucleus");
    closed::YieldRecord out{field.theta, 0, 0, 0};
    const double scale = std::pow(2.0, -n);
    for (double j : sector_spins(n)) {
        int jd = static_cast<int>(std::llround(2 * j)) + 1;
        auto sd = closed::SpectralDecomposition::build(
            sector_hamiltonian(j, tx, tz, field, units));
        double w = nu(n, j) * scale;
        for (int mi = 0; mi < jd; ++mi) {
            Matrix pm = Matrix::Zero(jd, jd);
            pm(mi, mi) = 1;
            closed::YieldRecord r =
                closed::yield_with(sd, ops::kron(rho_e, pm), field.theta, k, field.phi);
            out.phi_s += w * r.phi_s;
            out.phi_p += w * r.phi_p;
            out.phi_c += w * r.phi_c;
        }
    }
    return out;
}

}  // namespace spinyield::collective
