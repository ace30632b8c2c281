#include <catch2/catch_amalgamated.hpp>

#include <spinyield/dark.hpp>
#include <spinyield/kraus.hpp>

#include "helpers.hpp"

using namespace spinyield;
using dark::DarkFrame;
using sys::FieldVector;
using sys::HyperfineTensor;
using sys::SpinSystem;

namespace {

const units::UnitSystem U;

// Reference reduced dynamics, independent of the operator-sum construction:
// evolve the full state with the dense propagator and trace the nuclei out
// by explicit index loops.
Matrix oracle_reduced(const SpinSystem& system, const FieldVector& field,
                      const Matrix& rho_e, double t) {
    const int nd = 1 << system.n_nuclei;
    Matrix rho_full = ops::kron(rho_e, ops::id(nd) / double(nd));
    Matrix u = ops::evolution_operator(sys::build_h0(system, field), t);
    Matrix rho_t = u * rho_full * u.adjoint();
    Matrix red = Matrix::Zero(4, 4);
    for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f)
            for (int n = 0; n < nd; ++n)
                red(e, f) += rho_t(e * nd + n, f * nd + n);
    return red;
}

Matrix partial_transpose_2(const Matrix& rho) {
    Matrix pt(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    pt(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
    return pt;
}

}  // namespace

TEST_CASE("M(0) is the bare two-spin z projector combination") {
    Matrix m = dark::build_m(0);
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = 2;
    expect(3, 3) = -2;
    REQUIRE((m - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("M(theta) has spectrum {-2, 0, 0, 2} at any angle") {
    for (double theta : {0.0, 0.3, 1.0, M_PI / 2, 2.2}) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(dark::build_m(theta), Eigen::EigenvaluesOnly);
        Eigen::Vector4d expect(-2, 0, 0, 2);
        REQUIRE((es.eigenvalues() - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("frame vectors are eigenvectors of M with the advertised eigenvalues") {
    for (double theta : {0.0, 0.4, 1.1, M_PI / 2}) {
        DarkFrame f = DarkFrame::build(theta);
        Matrix m = dark::build_m(theta);
        REQUIRE((m * f.d1).norm() < 1e-12);
        REQUIRE((m * f.d2).norm() < 1e-12);
        REQUIRE((m * f.b1 - 2.0 * f.b1).norm() < 1e-12);
        REQUIRE((m * f.b2 + 2.0 * f.b2).norm() < 1e-12);
    }
}

TEST_CASE("frame is orthonormal and fixes the singlet phase convention") {
    for (double theta : {0.0, 0.7, 1.4}) {
        DarkFrame f = DarkFrame::build(theta);
        Matrix basis(4, 4);
        basis.col(0) = f.d1;
        basis.col(1) = f.d2;
        basis.col(2) = f.b1;
        basis.col(3) = f.b2;
        REQUIRE((basis.adjoint() * basis - ops::id(4)).cwiseAbs().maxCoeff() < 1e-12);

        Vector s = sys::singlet_ket();
        cd overlap = (s.adjoint() * f.d1)(0);
        REQUIRE(std::abs(overlap - cd(1 / std::sqrt(2.0), 0)) < 1e-12);
        REQUIRE((s - (f.d1 - f.d2) / std::sqrt(2.0)).norm() < 1e-12);
    }
}

TEST_CASE("at theta=0 the dark vectors are |10> and |01> with positive sign") {
    DarkFrame f = DarkFrame::build(0);
    Vector expect1 = Vector::Zero(4), expect2 = Vector::Zero(4);
    expect1(1) = 1;
    expect2(2) = 1;
    REQUIRE((f.d1 - expect1).norm() < 1e-14);
    REQUIRE((f.d2 - expect2).norm() < 1e-14);
}

TEST_CASE("dark vectors are product states") {
    for (double theta : {0.2, 0.9, 1.5}) {
        DarkFrame f = DarkFrame::build(theta);
        // Reshape the pair amplitude into a 2x2 matrix; a product state has
        // exactly one nonzero singular value.
        Matrix amp(2, 2);
        amp << f.d1(0), f.d1(1), f.d1(2), f.d1(3);
        Eigen::JacobiSVD<Matrix> svd(amp);
        REQUIRE(svd.singularValues()(1) < 1e-12);
        REQUIRE(std::abs(svd.singularValues()(0) - 1.0) < 1e-12);
    }
}

TEST_CASE("singlet decomposes into equal population and coherence at any angle") {
    Matrix rho = sys::initial_state(sys::StateKind::singlet);
    for (double theta : {0.0, 0.5, 1.0, M_PI / 2}) {
        auto d = dark::fp_fc(rho, DarkFrame::build(theta));
        REQUIRE(std::abs(d.fp - 0.5) < 1e-12);
        REQUIRE(std::abs(d.fc - 0.5) < 1e-12);
        REQUIRE(std::abs(d.fs() - 1.0) < 1e-12);
    }
}

TEST_CASE("triplet0 at theta=0 has flipped coherence") {
    auto d = dark::fp_fc(sys::initial_state(sys::StateKind::triplet0), DarkFrame::build(0));
    REQUIRE(std::abs(d.fp - 0.5) < 1e-12);
    REQUIRE(std::abs(d.fc + 0.5) < 1e-12);
}

TEST_CASE("fs equals the singlet expectation for random states") {
    Vector s = sys::singlet_ket();
    for (int draw = 0; draw < 1000; ++draw) {
        Matrix rho = testutil::random_density(4);
        double theta = testutil::uniform(0, M_PI);
        auto d = dark::fp_fc(rho, DarkFrame::build(theta));
        double fs_direct = (s.adjoint() * rho * s)(0).real();
        REQUIRE(std::abs(d.fs() - fs_direct) < 1e-12);
    }
}

TEST_CASE("dark dephasing kills the coherence and nothing else") {
    // Zeroing a single off-diagonal pair is not a positive map, so a random
    // input can leave the output slightly outside the density cone. The
    // population and coherence functionals are linear and well defined
    // regardless, so assert them through the frame directly.
    auto raw_fp = [](const Matrix& rho, const DarkFrame& f) {
        return 0.5 * ((f.d1.adjoint() * rho * f.d1)(0).real() +
                      (f.d2.adjoint() * rho * f.d2)(0).real());
    };
    for (int draw = 0; draw < 50; ++draw) {
        Matrix rho = testutil::random_density(4);
        DarkFrame f = DarkFrame::build(testutil::uniform(0, M_PI / 2));
        Matrix out = dark::dephase_dark(rho, f);

        auto before = dark::fp_fc(rho, f);
        REQUIRE(std::abs(raw_fp(out, f) - before.fp) < 1e-12);
        REQUIRE(std::abs((out - rho).trace()) < 1e-12);
        REQUIRE(std::abs((f.d1.adjoint() * out * f.d2)(0)) < 1e-13);

        // Idempotent, and bright-sector elements untouched.
        Matrix twice = dark::dephase_dark(out, f);
        REQUIRE((twice - out).cwiseAbs().maxCoeff() < 1e-13);
        REQUIRE(std::abs((f.b1.adjoint() * (out - rho) * f.b2)(0)) < 1e-13);
        REQUIRE(std::abs((f.b1.adjoint() * (out - rho) * f.d1)(0)) < 1e-13);
    }
}

TEST_CASE("dephasing the singlet yields the incoherent dark mixture") {
    for (double theta : {0.0, 0.6, 1.3}) {
        DarkFrame f = DarkFrame::build(theta);
        Matrix out = dark::dephase_dark(sys::initial_state(sys::StateKind::singlet), f);
        Matrix expect = sys::initial_state(sys::StateKind::dark_incoherent, theta);
        REQUIRE((out - expect).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("incoherent dark mixture is separable by the partial-transpose test") {
    for (double theta : {0.0, 0.5, 1.0, 1.5}) {
        Matrix rho = sys::initial_state(sys::StateKind::dark_incoherent, theta);
        Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose_2(rho), Eigen::EigenvaluesOnly);
        REQUIRE(es.eigenvalues().minCoeff() > -1e-12);
    }
    // Sanity: the singlet itself must fail the same test.
    Matrix s = sys::initial_state(sys::StateKind::singlet);
    Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose_2(s), Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() < -0.4);
}

TEST_CASE("operator-sum branches at t=0 are scaled identities on diagonal blocks") {
    SpinSystem system{1, {HyperfineTensor{3 * U.lambda(), 3 * U.lambda(), 5 * U.lambda()}}};
    FieldVector field{46e-6, 0.8, 0};
    auto ks = dark::kraus_operators(system, field, 0);
    REQUIRE(ks.size() == 4);
    double norm = 1 / std::sqrt(2.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Matrix expect = (i == j) ? Matrix(norm * ops::id(4)) : Matrix(Matrix::Zero(4, 4));
            REQUIRE((ks[i * 2 + j] - expect).cwiseAbs().maxCoeff() < 1e-14);
        }
}

TEST_CASE("operator-sum branches are complete") {
    for (int nn : {1, 2}) {
        SpinSystem system{nn, std::vector<HyperfineTensor>(
                                  nn, HyperfineTensor{3 * U.lambda(), 3 * U.lambda(),
                                                      5 * U.lambda()})};
        FieldVector field{46e-6, 1.1, 0};
        double t = 3.0 / U.lambda();
        Matrix sum = Matrix::Zero(4, 4);
        for (const Matrix& k : dark::kraus_operators(system, field, t))
            sum += k.adjoint() * k;
        REQUIRE((sum - ops::id(4)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("operator sum reproduces the traced-out full dynamics") {
    for (int draw = 0; draw < 10; ++draw) {
        SpinSystem system{1, {HyperfineTensor{testutil::uniform(0, 5) * U.lambda(),
                                              testutil::uniform(0, 5) * U.lambda(),
                                              testutil::uniform(0, 5) * U.lambda()}}};
        FieldVector field{46e-6, testutil::uniform(0, M_PI / 2), 0};
        Matrix rho_e = testutil::random_density(4);
        double t = testutil::uniform(0, 5e-4);

        Matrix from_kraus = Matrix::Zero(4, 4);
        for (const Matrix& k : dark::kraus_operators(system, field, t))
            from_kraus += k * rho_e * k.adjoint();

        Matrix expect = oracle_reduced(system, field, rho_e, t);
        REQUIRE((from_kraus - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("no branch creates dark coherence from the incoherent mixture") {
    SpinSystem full{1, {HyperfineTensor{3 * U.lambda(), 3 * U.lambda(), 5 * U.lambda()}}};
    SpinSystem axialz{1, {HyperfineTensor{0, 0, 5 * U.lambda()}}};
    auto times = dark::default_times(U.k_default);
    for (const auto& system : {full, axialz})
        for (double theta : {0.0, 0.7, M_PI / 2}) {
            FieldVector field{46e-6, theta, 0};
            REQUIRE(dark::verify_incoherence(system, field, theta, times) < 1e-12);
        }
}
