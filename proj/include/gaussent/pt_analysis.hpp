#pragma once

#include "gaussent/symplectic.hpp"

#include <vector>

namespace gaussent {

CovMatrix partial_transpose(const CovMatrix& sigma, const Bipartition& bip);

struct PtSpectrum {
    Bipartition bip;
    Vector nu_tilde;          // descending, one value per row pair
    SymplecticMap s_tilde;    // row pair j belongs to nu_tilde[j]
    Real tol_neg;
    std::vector<std::size_t> vn_pairs;     // nu_tilde < 1 - tol_neg, ascending nu_tilde
    std::vector<std::size_t> vslash_pairs; // the others, ascending nu_tilde

    std::size_t n_minus() const { return vn_pairs.size(); }
    Vector row(std::size_t r) const { return s_tilde.row(r); }
    // V_N rows in ascending nu_tilde order, (x-like, p-like) per pair
    std::vector<Vector> vn_rows() const;
    std::vector<Vector> vslash_rows() const;
};

// Williamson decomposition of the partially transposed matrix. tol_neg <= 0
// selects 10^(-P/2). Requires a physical covariance matrix.
PtSpectrum pt_spectrum(const CovMatrix& sigma, const Bipartition& bip, const Real& tol_neg = Real(0));

// -sum log2 nu_tilde over pairs with nu_tilde < 1, each pair counted once
Real log_negativity(const PtSpectrum& spec);
Real log_negativity(const CovMatrix& sigma, const Bipartition& bip);

// S_tilde' = S_tilde Lambda (S_A + S_B)^{-1} Lambda
SymplecticMap s_tilde_local_update(const SymplecticMap& s_tilde, const SymplecticMap& local, const Bipartition& bip);

} // namespace gaussent
