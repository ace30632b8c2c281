// Driven dynamics: midpoint stepping against the closed propagator, step
// refusal and convergence, the quadratic small-drive law, the perturbative
// oracle at the free-electron resonance, and the resonance/detuning shape of
// the driven compass.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "spinyield/analytic.hpp"
#include "spinyield/closed.hpp"
#include "spinyield/noise.hpp"
#include "spinyield/rf.hpp"
#include "spinyield/system.hpp"

using namespace spinyield;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const units::UnitSystem kUnits;
const double kLambda = kUnits.lambda();
const double kRate = kUnits.k_default;

const sys::SpinSystem kFigTensor{1, {{3 * kLambda, 3 * kLambda, 5 * kLambda}}};
const sys::SpinSystem kVertical{1, {{0, 0, 5 * kLambda}}};

// Gap of the hyperfine-free electron, the frequency a resonant drive hits.
const double kResonance = 2 * kUnits.gamma * kUnits.b_ref;

sys::FieldVector stock_field(double theta) { return {kUnits.b_ref, theta, 0}; }

rf::RfField orthogonal_drive(double b_rf, double omega, double theta) {
    return {b_rf, omega, theta + M_PI / 2};
}

// Smallest step count propagate_rf accepts: 50 per fastest period.
long floor_steps(const sys::SpinSystem& system, double theta, double omega,
                 double t_final) {
    auto sd = closed::SpectralDecomposition::build(
        sys::build_h0(system, stock_field(theta), kUnits));
    double fast = std::max(sd.omega_max(), omega);
    return static_cast<long>(std::ceil(50.0 * t_final * fast / (2 * M_PI)));
}

std::vector<closed::YieldRecord> driven_sweep(double b_rf, double omega,
                                              const std::vector<double>& thetas) {
    std::vector<closed::YieldRecord> out;
    for (double theta : thetas) {
        long steps = floor_steps(kFigTensor, theta, omega, 12.0 / kRate);
        out.push_back(rf::rf_yield(kFigTensor, stock_field(theta),
                                   orthogonal_drive(b_rf, omega, theta),
                                   sys::initial_state(sys::StateKind::singlet), kRate,
                                   0, steps));
    }
    return out;
}

}  // namespace

TEST_CASE("zero drive reduces to the closed propagator") {
    double theta = 0.7, t = 2e-5;
    Matrix rho_e = testutil::random_density(4);
    long steps = floor_steps(kFigTensor, theta, kResonance, t);
    Matrix driven = rf::propagate_rf(kFigTensor, stock_field(theta),
                                     orthogonal_drive(0, kResonance, theta), rho_e, t,
                                     steps, kUnits);
    Matrix closed_walk = closed::propagate(kFigTensor, stock_field(theta), rho_e, t, kUnits);
    CHECK((driven - closed_walk).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("driven stepping conserves trace and purity") {
    double theta = 0.7, t = 2e-5;
    Matrix rho_e = sys::initial_state(sys::StateKind::singlet);
    Matrix rho0 = closed::embed_initial(rho_e, kFigTensor.n_nuclei);
    long steps = floor_steps(kFigTensor, theta, kResonance, t);
    Matrix out = rf::propagate_rf(kFigTensor, stock_field(theta),
                                  orthogonal_drive(150e-9, kResonance, theta), rho_e, t,
                                  steps, kUnits);
    CHECK(std::abs(out.trace().real() - 1) < 1e-10);
    CHECK(std::abs((out * out).trace().real() - (rho0 * rho0).trace().real()) < 1e-8);
    ops::check_density(out, "propagate_rf output");
}

TEST_CASE("under-resolved stepping is refused with the required count") {
    double theta = 0.3, t = 1e-6;
    Matrix rho_e = sys::initial_state(sys::StateKind::singlet);
    long floor = floor_steps(kFigTensor, theta, kResonance, t);
    auto drive = orthogonal_drive(150e-9, kResonance, theta);
    CHECK_THROWS_WITH(
        rf::propagate_rf(kFigTensor, stock_field(theta), drive, rho_e, t, floor / 2),
        ContainsSubstring("need at least") && ContainsSubstring(std::to_string(floor)));
    CHECK_NOTHROW(
        rf::propagate_rf(kFigTensor, stock_field(theta), drive, rho_e, t, floor));

    CHECK_THROWS_AS(rf::propagate_rf(kFigTensor, stock_field(theta), drive, rho_e, t, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(rf::propagate_rf(kFigTensor, stock_field(theta), drive, rho_e, 0,
                                     floor),
                    std::invalid_argument);
    CHECK_THROWS_AS(rf::propagate_rf(kFigTensor, stock_field(theta),
                                     {-1e-9, kResonance, 0}, rho_e, t, floor),
                    std::invalid_argument);
    CHECK_THROWS_AS(rf::rf_yield(kFigTensor, stock_field(theta), drive, rho_e, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(rf::rf_yield(kFigTensor, stock_field(theta), drive, rho_e, kRate,
                                 5.0 / kRate),
                    std::invalid_argument);
}

TEST_CASE("doubling the steps barely moves the yield") {
    double theta = 0.7;
    Matrix rho_e = sys::initial_state(sys::StateKind::singlet);
    auto drive = orthogonal_drive(150e-9, kResonance, theta);
    long steps = floor_steps(kFigTensor, theta, kResonance, 12.0 / kRate);
    auto coarse = rf::rf_yield(kFigTensor, stock_field(theta), drive, rho_e, kRate, 0,
                               steps);
    auto fine = rf::rf_yield(kFigTensor, stock_field(theta), drive, rho_e, kRate, 0,
                             2 * steps);
    CHECK(std::abs(coarse.phi_s - fine.phi_s) < 1e-6);
    CHECK(std::abs(coarse.phi_p - fine.phi_p) < 1e-6);
}

TEST_CASE("weak drives detach quadratically from the closed yield") {
    double theta = 0.7;
    Matrix rho_e = sys::initial_state(sys::StateKind::singlet);
    long steps = floor_steps(kFigTensor, theta, kResonance, 12.0 / kRate);
    auto at = [&](double b_rf) {
        return rf::rf_yield(kFigTensor, stock_field(theta),
                            orthogonal_drive(b_rf, kResonance, theta), rho_e, kRate, 0,
                            steps);
    };
    auto off = at(0);
    // The undriven quadrature is the closed spectral yield up to the truncated
    // e^{-12} tail of the decay weight.
    auto spectral = closed::yield_spectral(kFigTensor, stock_field(theta), rho_e, kRate);
    CHECK(std::abs(off.phi_s - spectral.phi_s) < 2e-5);
    CHECK(std::abs(off.phi_s - (off.phi_p + off.phi_c)) < 1e-9);

    double drop8 = off.phi_s - at(8e-9).phi_s;
    double drop16 = off.phi_s - at(16e-9).phi_s;
    REQUIRE(drop8 > 0);
    REQUIRE(drop16 > 0);
    double slope = std::log2(drop16 / drop8);
    CHECK(slope > 1.8);
    CHECK(slope < 2.2);
}

TEST_CASE("a weak resonant drive reproduces the perturbative correction") {
    double theta = 0.7, b_rf = 15e-9;
    Matrix rho_e = sys::initial_state(sys::StateKind::singlet);
    auto p = analytic::VerticalSingleParams::build(stock_field(theta), 5 * kLambda,
                                                   kUnits);
    double correction = analytic::phi_single_exact(p, kRate).phi_p -
                        analytic::phi_rf_perturbative(p, b_rf, kRate, kUnits);
    REQUIRE(correction > 1e-3);

    long steps = floor_steps(kVertical, theta, kResonance, 12.0 / kRate);
    auto at = [&](double b) {
        return rf::rf_yield(kVertical, stock_field(theta),
                            orthogonal_drive(b, kResonance, theta), rho_e, kRate, 0,
                            steps);
    };
    double drop = at(0).phi_p - at(b_rf).phi_p;
    CHECK(std::abs(drop - correction) < 0.1 * correction);
}

TEST_CASE("the resonant drive flattens the compass, detuning restores it") {
    std::vector<double> grid{0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI / 2};
    double base = noise::anisotropy(driven_sweep(0, kResonance, grid));
    REQUIRE(base > 0.01);

    // At 150 nT the free-electron Rabi rate gamma*b_rf is 1.3k: the resonant
    // drive empties better than half the compass signal within the pair
    // lifetime, but full cycling (and hence complete flattening) would need
    // gamma*b_rf well above k.
    auto on = driven_sweep(150e-9, kResonance, grid);
    CHECK(noise::anisotropy(on) < 0.45 * base);
    for (const auto& r : on) CHECK(std::abs(r.phi_p - r.phi_s) < 5e-3);

    // The quoted experimental 1.315 MHz sits 17k above this model's
    // resonance, far outside the Rabi linewidth, so it barely bites.
    double quoted = noise::anisotropy(driven_sweep(150e-9, 2 * M_PI * 1.315e6, grid));
    CHECK(quoted > 0.85 * base);

    double detuned = noise::anisotropy(driven_sweep(150e-9, 3 * kResonance, grid));
    CHECK(detuned >= 0.7 * base);
}
