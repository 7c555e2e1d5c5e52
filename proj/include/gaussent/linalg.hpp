#pragma once

#include "gaussent/matrix.hpp"

namespace gaussent {

// 10^(-P/2), the structural tolerance at P digits.
Real half_precision_tol(int digits);

struct SymEig {
    Vector values;  // descending
    Matrix vectors; // orthonormal columns, canonical gauge
};

// Cyclic Jacobi eigensolver for real symmetric matrices.
// Degenerate clusters get a basis built from the projected unit vectors,
// and every vector has its largest-magnitude entry positive.
SymEig sym_eig(const Matrix& m);

struct PsdResult {
    bool psd;
    Real min_eigenvalue;
};

// PSD within tol relative to max(1, |m|_max); tol <= 0 means 10^(-P/2).
PsdResult psd_check(const Matrix& m, const Real& tol = Real(0));

Matrix pseudoinverse(const Matrix& sym, const Real& rank_tol);
Matrix matrix_sqrt(const Matrix& spd);
Matrix matrix_inv_sqrt(const Matrix& spd);
Matrix inverse(const Matrix& m); // Gauss-Jordan, partial pivoting

// Lower triangular L with m = L L^T; throws NumericalFailure if m is not positive definite.
Matrix cholesky(const Matrix& spd);
Matrix lower_triangular_inverse(const Matrix& l);

// Real symmetric embedding [[R, -I], [I, R]] of the Hermitian matrix R + iI.
Matrix hermitian_embedding(const Matrix& re, const Matrix& im);

void require_symmetric(const Matrix& m, const char* what);

} // namespace gaussent
