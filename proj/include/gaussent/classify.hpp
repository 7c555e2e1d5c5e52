#pragma once

#include "gaussent/pt_analysis.hpp"

#include <vector>

namespace gaussent {

struct NsolResult {
    bool nsol;
    Real worst_deviation; // max over V_N row pairs of |<v_iA|Omega|v_jA> - Omega_ij / 2|
    std::size_t n_minus;
};

// Local symplectic products of the V_N rows restricted to A (and to B) must be
// half the global ones. tol <= 0 selects 10^(-P/2). n_cores > 0 restricts the
// check to that many V_N pairs, smallest nu_tilde first.
NsolResult nsol_check(const PtSpectrum& spec, const Real& tol = Real(0), std::size_t n_cores = 0);
NsolResult nsol_check(const CovMatrix& sigma, const Bipartition& bip, const Real& tol = Real(0));

struct Core {
    Real nu_minus;
    Real r; // -ln(nu_minus) / 2
};

// Core-halo form sigma' = P (S_A + S_B) sigma (S_A + S_B)^T P^T.
// Core f occupies modes 2f (A side) and 2f+1 (B side); the halo follows,
// A modes first.
struct CoreHaloDecomposition {
    Bipartition bip;
    SymplecticMap local_map;        // S_A + S_B in the input mode order
    std::vector<std::size_t> order; // new mode k is old mode order[k]
    CovMatrix sigma_prime;
    SymplecticMap s_tilde_prime;    // PT Williamson map in the core-halo frame
    std::vector<Core> cores;        // ascending nu_minus
    std::size_t halo_A = 0;
    std::size_t halo_B = 0;
    std::vector<bool> flipped;      // negative-squeezing core, phase flip applied

    std::size_t n_cores() const { return cores.size(); }
    Bipartition halo_bipartition() const { return {halo_A, halo_B}; }
    // core-halo coordinates of the whole transformation, P (S_A + S_B)
    Matrix frame() const;
};

struct ConsolidateOptions {
    Real tol_nsol = Real(0); // <= 0: 10^(-P/2)
    Real tol_neg = Real(0);  // <= 0: 10^(-P/2)
    std::size_t max_cores = 0; // > 0: consolidate only the smallest nu_tilde pairs
};

// General consolidation by local symplectic Gram-Schmidt on the restricted
// V_N rows, completed with the remaining restricted rows in ascending nu_tilde.
CoreHaloDecomposition consolidate(const CovMatrix& sigma, const Bipartition& bip, const ConsolidateOptions& opt = {});
CoreHaloDecomposition consolidate(const CovMatrix& sigma, const PtSpectrum& spec, const ConsolidateOptions& opt = {});

// Consolidation for A-B exchange-symmetric states without x-p correlations:
// S_A = S_B is the x-p separated Williamson diagonaliser of sigma~_A - sigma~_AB.
CoreHaloDecomposition symmetric_consolidate(const CovMatrix& sigma, const Bipartition& bip, const Real& tol_neg = Real(0));
bool symmetric_consolidate_applicable(const CovMatrix& sigma, const Bipartition& bip);

struct TwoModeSymmetric {
    Real nu_minus; // sqrt((n + kp)(n - kq))
    Real lambda;   // ((n + kp)/(n - kq))^(1/4), the local squeezing to TMSVS form
    Real r;        // -ln(nu_minus)/2 if nu_minus < 1, else 0
};

// Closed form for the normal form [[n,0,kq,0],[0,n,0,kp],[kq,0,n,0],[0,kp,0,n]], kq >= kp.
TwoModeSymmetric two_mode_symmetric_analysis(const Real& n, const Real& k_q, const Real& k_p);
CovMatrix two_mode_normal_form(const Real& n, const Real& k_q, const Real& k_p);

} // namespace gaussent
