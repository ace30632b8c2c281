// helpers.hpp: shared RNG and random-state generators for the test suite.
#pragma once

#include <random>

#include <spinyield/ops.hpp>

namespace testutil {

using spinyield::Matrix;
using spinyield::Vector;
using spinyield::cd;

// One fixed-seed stream per test binary keeps every property test reproducible.
inline std::mt19937& rng() {
    static std::mt19937 gen(20260817u);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Matrix ginibre(int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            g(i, j) = cd(gauss(rng()), gauss(rng()));
    return g;
}

// Full-rank random density matrix.
inline Matrix random_density(int dim) {
    Matrix g = ginibre(dim, dim);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline Vector random_ket(int dim) {
    Vector v = ginibre(dim, 1);
    return v / v.norm();
}

}  // namespace testutil
