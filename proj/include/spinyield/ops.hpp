// ops.hpp: Pauli matrices, product-space embedding, and matrix sanity checks.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace spinyield {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace ops {

// Basis convention everywhere: |1> before |0>, so sigma_z = diag(1, -1).
// All spin operators are bare Paulis (eigenvalues +-1), nuclei included.

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, cd(0, -1), cd(0, 1), 0;
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Matrix sigma_plus() {    // |1><0|
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

inline Matrix id(int n) { return Matrix::Identity(n, n); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

// op acting on one qubit of a chain of n_sites qubits, identity elsewhere.
inline Matrix embed(const Matrix& op, int site, int n_sites) {
    if (op.rows() != 2 || op.cols() != 2)
        throw std::invalid_argument("embed: op must be 2x2");
    if (site < 0 || site >= n_sites)
        throw std::invalid_argument("embed: site " + std::to_string(site) +
                                    " out of range for " + std::to_string(n_sites) + " sites");
    Matrix out = (site == 0) ? op : id(1 << site);
    if (site != 0) out = kron(out, op);
    int right = n_sites - site - 1;
    if (right > 0) out = kron(out, id(1 << right));
    return out;
}

// ------------------------- dark-frame spinor halves -------------------------

// psi(theta, phi) = cos(theta/2)|1> + e^{i phi} sin(theta/2)|0>; the +1
// eigenvector of n.sigma for the unit vector n at polar angle theta and
// azimuth phi. Real for phi = 0.
inline Vector psi(double theta, double phi = 0) {
    Vector v(2);
    v << std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2);
    return v;
}

// psi_perp(theta, phi) = -e^{-i phi} sin(theta/2)|1> + cos(theta/2)|0>, the
// -1 eigenvector. The phase is pinned so that <S | psi x psi_perp> =
// +1/sqrt(2) at every field direction.
inline Vector psi_perp(double theta, double phi = 0) {
    Vector v(2);
    v << -std::polar(1.0, -phi) * std::sin(theta / 2), std::cos(theta / 2);
    return v;
}

// exp(-i H t) for hermitian H, through the eigenbasis so the result is
// unitary to round-off.
inline Matrix evolution_operator(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("evolution_operator: eigensolver failed");
    Vector phases(h.rows());
    for (int i = 0; i < h.rows(); ++i) {
        double a = -es.eigenvalues()(i) * t;
        phases(i) = cd(std::cos(a), std::sin(a));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ------------------------------ sanity checks ------------------------------

inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void check_hermitian(const Matrix& m, double tol = 1e-12,
                            const char* what = "matrix") {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(what) + ": not square");
    double defect = hermiticity_defect(m);
    if (!(defect < tol))
        throw std::invalid_argument(std::string(what) + ": hermiticity defect " +
                                    std::to_string(defect));
}

// Density-matrix contract: unit trace within 1e-10, hermitian within 1e-12,
// eigenvalues >= -1e-10.
inline void check_density(const Matrix& rho, const char* what = "state") {
    check_hermitian(rho, 1e-12, what);
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument(std::string(what) + ": trace " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error(std::string(what) + ": eigenvalue check failed");
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument(std::string(what) + ": negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
}

}  // namespace ops
}  // namespace spinyield
