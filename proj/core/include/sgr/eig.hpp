#pragma once

#include <vector>

#include "sgr/matrix.hpp"

namespace sgr {

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Input must be symmetric within 1e-9 Frobenius; convergence is declared
// when the off-diagonal Frobenius mass drops below 1e-12 relative to the
// input norm, capped at 100 sweeps (error reports the sweep count).
// Eigenvalues come back ascending; each eigenvector column is sign-fixed
// so its first nonzero component is positive.
SpectralDecomposition sym_eig(const Matrix& m);

// Number of eigenvalues treated as zero: those below 1e-8 relative to the
// largest eigenvalue.
std::size_t zero_eigenvalue_count(const SpectralDecomposition& d);

// Moore-Penrose pseudo-inverse of a connected graph Laplacian, assembled
// from the nonzero eigenpairs. Exactly one zero eigenvalue is required;
// anything else means a disconnected graph.
Matrix laplacian_pinv(const SpectralDecomposition& d);
Matrix laplacian_pinv(const Matrix& laplacian);

// L^{+/2}: same eigenbasis, lambda^{-1/2} on nonzero eigenvalues.
Matrix laplacian_pinv_sqrt(const SpectralDecomposition& d);

// Pairwise Euclidean distances between the rows of z (squared if asked).
Matrix cdist(const Matrix& z, bool squared);

// True when hi - lo is positive semidefinite within tolerance
// (smallest eigenvalue >= -1e-9).
bool psd_dominates(const Matrix& hi, const Matrix& lo);

}  // namespace sgr
