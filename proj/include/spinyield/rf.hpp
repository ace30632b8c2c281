// rf.hpp: evolution under the static Hamiltonian plus a weak monochromatic
// drive, and the quadrature yields of the driven trajectories.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "closed.hpp"
#include "dark.hpp"
#include "ops.hpp"
#include "system.hpp"
#include "units.hpp"

namespace spinyield::rf {

using spinyield::Matrix;
using spinyield::Vector;
using spinyield::cd;

// Oscillating field B_rf cos(omega t) along (sin alpha, 0, cos alpha). The
// drive stays in the x-z plane; it couples through the same two-electron
// direction operator as a static field would.
struct RfField {
    double b_rf = 0;   // amplitude, Tesla
    double omega = 0;  // angular frequency, rad/s
    double alpha = 0;  // direction in the x-z plane, radians

    void validate() const {
        if (!(b_rf >= 0))
            throw std::invalid_argument("RfField: b_rf must be >= 0");
        if (!(omega >= 0))
            throw std::invalid_argument("RfField: omega must be >= 0");
        if (!std::isfinite(alpha))
            throw std::invalid_argument("RfField: alpha must be finite");
    }
};

namespace detail {

// Fastest angular scale a trajectory carries: the widest Bohr gap of the
// static part or the drive frequency, whichever is quicker.
inline double fastest_scale(const Matrix& h0, const RfField& drive) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("propagate_rf: eigensolver failed on h0");
    double span = es.eigenvalues()(h0.rows() - 1) - es.eigenvalues()(0);
    return std::max({span, drive.omega, 1e-300});
}

inline long resolution_floor(double t_final, double omega_fast) {
    return static_cast<long>(std::ceil(50.0 * t_final * omega_fast / (2 * M_PI)));
}

// Midpoint walker: each step applies exp[-i H(t_mid) dt] built from a fresh
// eigendecomposition of the frozen midpoint Hamiltonian, so every factor is
// unitary to machine precision and million-step trajectories stay physical.
// All workspace is allocated once.
class Stepper {
  public:
    Stepper(const sys::SpinSystem& system, const sys::FieldVector& field,
            const RfField& drive, const Matrix& rho_e, double t_final, long steps,
            const units::UnitSystem& units)
        : h0_(sys::build_h0(system, field, units)),
          rho_(closed::embed_initial(rho_e, system.n_nuclei)),
          omega_(drive.omega) {
        drive.validate();
        if (!(t_final > 0))
            throw std::invalid_argument("propagate_rf: t_final must be positive");
        if (steps <= 0)
            throw std::invalid_argument("propagate_rf: steps must be positive");
        long floor = resolution_floor(t_final, fastest_scale(h0_, drive));
        if (steps < floor)
            throw std::invalid_argument(
                "propagate_rf: " + std::to_string(steps) +
                " steps under-resolve the fastest period; need at least " +
                std::to_string(floor));
        int nd = 1 << system.n_nuclei;
        coupling_ = units.gamma * drive.b_rf *
                    ops::kron(dark::build_m(drive.alpha), ops::id(nd));
        dt_ = t_final / static_cast<double>(steps);
        int d = static_cast<int>(h0_.rows());
        h_.resize(d, d);
        u_.resize(d, d);
        tmp_.resize(d, d);
        phases_.resize(d);
    }

    void advance() {
        double t_mid = (static_cast<double>(n_) + 0.5) * dt_;
        h_ = h0_ + std::cos(omega_ * t_mid) * coupling_;
        es_.compute(h_);
        if (es_.info() != Eigen::Success)
            throw std::runtime_error("propagate_rf: eigensolver failed mid-walk");
        for (int i = 0; i < phases_.size(); ++i) {
            double a = -es_.eigenvalues()(i) * dt_;
            phases_(i) = cd(std::cos(a), std::sin(a));
        }
        u_.noalias() = es_.eigenvectors() * phases_.asDiagonal() * es_.eigenvectors().adjoint();
        tmp_.noalias() = u_ * rho_;
        rho_.noalias() = tmp_ * u_.adjoint();
        ++n_;
    }

    const Matrix& state() const { return rho_; }
    double dt() const { return dt_; }

  private:
    Matrix h0_, coupling_, rho_, h_, u_, tmp_;
    Vector phases_;
    Eigen::SelfAdjointEigenSolver<Matrix> es_;
    double omega_ = 0, dt_ = 0;
    long n_ = 0;
};

}  // namespace detail

// Driven analogue of closed::propagate. The step count must resolve the
// fastest period at least 50 times over; too few steps are refused with the
// count that would do.
inline Matrix propagate_rf(const sys::SpinSystem& system, const sys::FieldVector& field,
                           const RfField& drive, const Matrix& rho_e, double t_final,
                           long steps, const units::UnitSystem& units = {}) {
    system.validate();
    detail::Stepper walker(system, field, drive, rho_e, t_final, steps, units);
    for (long i = 0; i < steps; ++i) walker.advance();
    return walker.state();
}

// Laplace-weighted yields of the driven trajectory, Simpson over the step
// grid. steps = 0 picks the default budget: two million steps, or the
// resolution floor if that is higher. t_max = 0 means 12/k; an explicit
// horizon shorter than 10/k truncates too much tail to be meaningful and is
// refused.
inline closed::YieldRecord rf_yield(const sys::SpinSystem& system,
                                    const sys::FieldVector& field, const RfField& drive,
                                    const Matrix& rho_e, double k, double t_max = 0,
                                    long steps = 0, const units::UnitSystem& units = {}) {
    if (k <= 0) throw std::invalid_argument("rf_yield: k must be positive");
    system.validate();
    drive.validate();
    if (t_max <= 0) t_max = 12.0 / k;
    if (t_max < 10.0 / k)
        throw std::invalid_argument("rf_yield: t_max below 10/k truncates the decay");
    if (steps <= 0) {
        Matrix h0 = sys::build_h0(system, field, units);
        steps = std::max<long>(2'000'000,
                               detail::resolution_floor(t_max, detail::fastest_scale(h0, drive)));
    }
    steps += steps % 2;  // composite Simpson wants an even interval count

    detail::Stepper walker(system, field, drive, rho_e, t_max, steps, units);
    auto obs = closed::Observables::build(field.theta, field.phi, walker.state().rows());

    double acc_s = 0, acc_p = 0, acc_c = 0;
    double dt = walker.dt(), decay = std::exp(-k * dt), env = 1;
    for (long i = 0; i <= steps; ++i) {
        double simpson = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
        double w = simpson * k * env;
        const Matrix& rho = walker.state();
        acc_s += w * (obs.p_s * rho).trace().real();
        acc_p += w * (obs.p_p * rho).trace().real();
        acc_c += w * (obs.p_c * rho).trace().real();
        if (i < steps) {
            walker.advance();
            env *= decay;
        }
    }
    return {field.theta, acc_s * dt / 3, acc_p * dt / 3, acc_c * dt / 3};
}

}  // namespace spinyield::rf
