// noise.hpp: Gaussian white noise as double-commutator dephasing on top of
// the coherent flow, built in Liouville space. One exact resolvent route and
// one stepped time-domain route, plus the anisotropy reduction they feed.
#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "closed.hpp"
#include "dark.hpp"
#include "ops.hpp"
#include "system.hpp"
#include "units.hpp"

namespace spinyield::noise {

using spinyield::Matrix;
using spinyield::Vector;
using spinyield::cd;

// Dense-LU budget for the resolvent solve, and the tighter budget for the
// repeated-exponential integrator.
inline constexpr int kMaxLiouvilleDim = 4096;
inline constexpr int kMaxIntegratorDim = 1024;

enum class Kind { magnetic, hyperfine };

// One white-noise channel. rate is the dephasing strength in s^-1; theta is
// the coupling axis for magnetic noise, a polar angle in the x-z plane
// (hyperfine noise is isotropic and ignores it).
struct NoiseSpec {
    Kind kind = Kind::magnetic;
    double rate = 0;
    double theta = 0;
};

// The operator multiplying the white-noise amplitude. Magnetic noise shakes
// both electrons along a common axis; hyperfine noise shakes the isotropic
// electron-1 contact coupling and is defined for exactly one nucleus.
inline Matrix coupling_operator(const sys::SpinSystem& system, const NoiseSpec& spec) {
    if (spec.rate < 0)
        throw std::invalid_argument("noise: rate " + std::to_string(spec.rate) +
                                    " must be nonnegative");
    if (spec.kind == Kind::magnetic)
        return ops::kron(dark::build_m(spec.theta), ops::id(1 << system.n_nuclei));
    if (system.n_nuclei != 1)
        throw std::invalid_argument(
            "noise: hyperfine noise is defined for exactly one nucleus, got " +
            std::to_string(system.n_nuclei));
    Matrix h = Matrix::Zero(8, 8);
    for (auto axis : {sys::Axis::x, sys::Axis::y, sys::Axis::z})
        h += sys::embed_pauli(axis, 0, 1) * sys::embed_pauli(axis, 2, 1);
    return h;
}

// Generator of the master equation on column-stacked states:
// vec(rho') = gen * vec(rho) realizes -i[H,rho] - sum Gamma [h,[h,rho]].
struct Liouvillian {
    int hilbert_dim = 0;
    Matrix gen;
};

inline Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, int d) {
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

inline Liouvillian build_liouvillian(const sys::SpinSystem& system,
                                     const sys::FieldVector& field,
                                     const std::vector<NoiseSpec>& noises,
                                     const units::UnitSystem& units = {}) {
    system.validate();
    const int d = system.dim();
    if (d * d > kMaxLiouvilleDim)
        throw std::invalid_argument("liouvillian: dimension " + std::to_string(d * d) +
                                    " exceeds the dense budget " +
                                    std::to_string(kMaxLiouvilleDim));
    Matrix h = sys::build_h0(system, field, units);
    const Matrix idd = ops::id(d);

    Liouvillian lv;
    lv.hilbert_dim = d;
    // Column stacking: vec(A X B) = (B^T kron A) vec(X).
    lv.gen = cd(0, -1) * (ops::kron(idd, h) - ops::kron(h.transpose(), idd));
    for (const NoiseSpec& spec : noises) {
        if (spec.rate == 0) {
            coupling_operator(system, spec);  // still validates the channel
            continue;
        }
        Matrix hop = coupling_operator(system, spec);
        Matrix h2 = hop * hop;
        lv.gen -= spec.rate * (ops::kron(idd, h2) + ops::kron(h2.transpose(), idd) -
                               2.0 * ops::kron(hop.transpose(), hop));
    }
    return lv;
}

// Exact noisy yields: Phi_X = k <vec(P_X), (k - gen)^{-1} vec(rho0)>. One
// in-place LU per call; the factorization is cheap next to building gen for
// small systems and is the whole cost at the dimension cap.
inline closed::YieldRecord resolvent_yield(const Liouvillian& lv, const Matrix& rho0,
                                           double k, double theta, double phi = 0) {
    if (k <= 0) throw std::invalid_argument("resolvent: k must be positive");
    const int d = lv.hilbert_dim;
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("resolvent: state dimension " +
                                    std::to_string(rho0.rows()) + " does not match " +
                                    std::to_string(d));
    auto obs = closed::Observables::build(theta, phi, d);

    Matrix a = -lv.gen;
    a.diagonal().array() += k;
    Vector b = vec(rho0);
    Eigen::PartialPivLU<Eigen::Ref<Matrix>> lu(a);  // decomposes a in place
    Vector x = lu.solve(b);
    double residual = (k * x - lv.gen * x - b).norm() / b.norm();
    if (!(residual < 1e-8))
        throw std::runtime_error("resolvent: solve residual " + std::to_string(residual) +
                                 ", reciprocal condition " + std::to_string(lu.rcond()));

    closed::YieldRecord r;
    r.theta = theta;
    r.phi_s = k * vec(obs.p_s).dot(x).real();
    r.phi_p = k * vec(obs.p_p).dot(x).real();
    r.phi_c = k * vec(obs.p_c).dot(x).real();
    return r;
}

inline closed::YieldRecord resolvent_yield(const sys::SpinSystem& system,
                                           const sys::FieldVector& field,
                                           const std::vector<NoiseSpec>& noises,
                                           const Matrix& rho_e, double k,
                                           const units::UnitSystem& units = {}) {
    Liouvillian lv = build_liouvillian(system, field, noises, units);
    return resolvent_yield(lv, closed::embed_initial(rho_e, system.n_nuclei), k,
                           field.theta, field.phi);
}

// Stepped evolution, exact per step through the dense exponential of
// gen * dt. Equal consecutive steps reuse one exponential.
inline std::vector<Matrix> integrate_master(const Liouvillian& lv, const Matrix& rho0,
                                            const std::vector<double>& t_grid) {
    const int d = lv.hilbert_dim;
    if (d * d > kMaxIntegratorDim)
        throw std::invalid_argument("integrate_master: dimension " +
                                    std::to_string(d * d) + " exceeds the stepping budget " +
                                    std::to_string(kMaxIntegratorDim));
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("integrate_master: state dimension mismatch");
    if (t_grid.empty() || t_grid.front() != 0)
        throw std::invalid_argument("integrate_master: time grid must start at 0");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("integrate_master: time grid must increase");

    std::vector<Matrix> out;
    out.reserve(t_grid.size());
    out.push_back(rho0);
    Vector v = vec(rho0);
    Matrix step;
    double cached_dt = -1;
    for (size_t i = 1; i < t_grid.size(); ++i) {
        double dt = t_grid[i] - t_grid[i - 1];
        if (dt != cached_dt) {
            step = (lv.gen * dt).exp();
            cached_dt = dt;
        }
        v = step * v;
        out.push_back(unvec(v, d));
    }
    return out;
}

// Time-domain yield under noise: composite Simpson of k e^{-kt} <P>(t) on a
// uniform grid, stepping the vectorized state with one cached exponential.
// Same horizon and step policy as the closed quadrature route, with an extra
// guard so strong dephasing is also resolved.
inline closed::YieldRecord integrated_yield(const sys::SpinSystem& system,
                                            const sys::FieldVector& field,
                                            const std::vector<NoiseSpec>& noises,
                                            const Matrix& rho_e, double k,
                                            double t_max = 0, double dt = 0,
                                            const units::UnitSystem& units = {}) {
    if (k <= 0) throw std::invalid_argument("integrated yield: k must be positive");
    Liouvillian lv = build_liouvillian(system, field, noises, units);
    if (lv.hilbert_dim * lv.hilbert_dim > kMaxIntegratorDim)
        throw std::invalid_argument("integrated yield: dimension " +
                                    std::to_string(lv.hilbert_dim * lv.hilbert_dim) +
                                    " exceeds the stepping budget " +
                                    std::to_string(kMaxIntegratorDim));
    Matrix h = sys::build_h0(system, field, units);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    double omega_max = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
    double damping = 0;
    for (const NoiseSpec& spec : noises) damping += 16 * spec.rate;

    if (t_max <= 0) t_max = 16.0 / k;
    if (dt <= 0) {
        dt = 1.0 / (50 * k);
        if (omega_max > 0) dt = std::min(dt, 2 * M_PI / (64 * omega_max));
        if (damping > 0) dt = std::min(dt, 1.0 / (50 * damping));
    } else if (omega_max > 0 && dt > 2 * M_PI / (50 * omega_max)) {
        throw std::invalid_argument(
            "integrated yield: dt " + std::to_string(dt) + " too coarse for omega_max " +
            std::to_string(omega_max) + "; need at least 50 steps per period");
    }

    int steps = static_cast<int>(std::ceil(t_max / dt));
    if (steps % 2 != 0) ++steps;
    dt = t_max / steps;

    auto obs = closed::Observables::build(field.theta, field.phi, lv.hilbert_dim);
    Vector ps = vec(obs.p_s), pp = vec(obs.p_p), pc = vec(obs.p_c);
    Vector v = vec(closed::embed_initial(rho_e, system.n_nuclei));
    Matrix step = (lv.gen * dt).exp();

    double acc_s = 0, acc_p = 0, acc_c = 0;
    for (int j = 0; j <= steps; ++j) {
        double w = (j == 0 || j == steps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        double decay = k * std::exp(-k * j * dt);
        acc_s += w * decay * ps.dot(v).real();
        acc_p += w * decay * pp.dot(v).real();
        acc_c += w * decay * pc.dot(v).real();
        if (j != steps) v = step * v;
    }
    return {field.theta, acc_s * dt / 3, acc_p * dt / 3, acc_c * dt / 3};
}

// Spread of the singlet yield over a directional sweep; the figure-level
// flatness measure every noise trend is stated against.
inline double anisotropy(const std::vector<closed::YieldRecord>& records) {
    if (records.size() < 2)
        throw std::invalid_argument("anisotropy: need at least two records");
    double lo = records[0].phi_s, hi = records[0].phi_s;
    for (const auto& r : records) {
        lo = std::min(lo, r.phi_s);
        hi = std::max(hi, r.phi_s);
    }
    return hi - lo;
}

}  // namespace spinyield::noise
