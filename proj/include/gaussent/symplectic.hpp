#pragma once

#include "gaussent/matrix.hpp"

#include <cstddef>
#include <vector>

namespace gaussent {

// Covariance matrices and symplectic maps are plain matrices in mode ordering
// (x1, p1, x2, p2, ...). The vacuum is the identity.
using CovMatrix = Matrix;
using SymplecticMap = Matrix;

struct Bipartition {
    std::size_t n_A = 0;
    std::size_t n_B = 0;
    std::size_t n_modes() const { return n_A + n_B; }
};

Matrix omega(std::size_t n_modes, int digits);
// diag(1,...,1, 1,-1, 1,-1, ...) with the sign flips on the B modes
Matrix lambda_b(const Bipartition& bip, int digits);

// w Omega v^T
Real symplectic_product(const Vector& w, const Vector& v);

struct SymplecticCheck {
    bool ok;
    Real residual; // max |S Omega S^T - Omega|
};
SymplecticCheck is_symplectic(const Matrix& s, const Real& tol = Real(0));
Matrix symplectic_inverse(const Matrix& s); // -Omega S^T Omega

void validate_cm(const CovMatrix& sigma, const char* what);

struct Physicality {
    bool physical;
    Real min_symplectic_eigenvalue;
};
// sigma > 0 and sigma + i Omega >= 0, through the symplectic spectrum
Physicality physicality(const CovMatrix& sigma, const Real& tol = Real(0));
// the same condition through the 4n real embedding of sigma + i Omega
Physicality physicality_embedding(const CovMatrix& sigma, const Real& tol = Real(0));
void require_physical(const CovMatrix& sigma, const char* what);

// Symplectic eigenvalues, descending, one per mode.
Vector symplectic_eigenvalues(const CovMatrix& sigma);

struct WilliamsonResult {
    SymplecticMap S; // S sigma S^T = diag(nu_1, nu_1, ..., nu_n, nu_n)
    Vector nu;       // descending
};

// Williamson normal form of a positive definite matrix. Each row pair is
// rotated to maximise the x-quadrature weight of its first row, and signed so
// that the largest entry of that row is positive.
WilliamsonResult williamson(const Matrix& sigma);

// Symplectic Gram-Schmidt. Seeds come in (x-like, p-like) pairs and are kept
// in order; the basis is completed first from the candidate pairs, then from
// unit vectors.
SymplecticMap symplectic_gram_schmidt(const std::vector<Vector>& seeds, std::size_t n_modes,
                                      const std::vector<Vector>& candidates = {});

CovMatrix partial_trace(const CovMatrix& sigma, const std::vector<std::size_t>& keep_modes);

// perm[k] is the old index of new mode k
Matrix mode_permutation(const std::vector<std::size_t>& perm);
CovMatrix permute_modes(const CovMatrix& sigma, const std::vector<std::size_t>& perm);

} // namespace gaussent
