#pragma once

#include "gaussent/classify.hpp"

#include <string>
#include <vector>

namespace gaussent {

// AllCores consolidates every V_N pair of the state, filters them in ascending
// nu_minus and re-consolidates the remainder. DominantCore consolidates and
// filters only the smallest nu_tilde pair of each remainder.
enum class MnfStrategy { AllCores, DominantCore };

struct MnfOptions {
    Real tol_nsol = Real(0);      // <= 0: 10^(-P/2)
    Real tol_neg = Real(0);       // <= 0: 10^(-P/2)
    Real structure_tol = Real(0); // <= 0: 10^(-P/2); core alignment and |l> structure, relative
    int max_flow_iterations = 100;
    MnfStrategy strategy = MnfStrategy::DominantCore;
};

// cosh 2r on the diagonal, +sinh 2r on xA xB, -sinh 2r on pA pB
CovMatrix two_mode_squeezed_vacuum(const Real& r);

struct CoreNoise {
    Real y11, y22, y12;
    Real a1, a2, a3, a4;
    Real nu_plus, nu_minus;
    Real r; // -ln(nu_minus) / 2
    Matrix y_core; // 4x4 noise on (xA, pA, xB, pB)
};

// Noise of an aligned core from its PT Williamson rows: rows 0,1 are the V_/
// pair (a1 a2 a1 a2), (a3 a4 a3 a4); rows 2,3 the V_N pair
// (-1 0 1 0)/sqrt2, (0 -1 0 1)/sqrt2.
CoreNoise core_noise_from_s_tilde(const Matrix& s_core, const Real& nu_plus, const Real& nu_minus, const Real& tol = Real(0));

// The same from a 4x4 core covariance matrix: PT Williamson, rotation of the
// V_N pair onto the aligned form, then the closed form. Verifies
// sigma_c = TMSVS(r) + Y_c.
CoreNoise core_noise(const CovMatrix& core, const Real& tol = Real(0));

struct FilterResult {
    CoreNoise noise;
    Matrix y_coupling;   // Y_cr = sigma_cr, 4 x 2k
    Matrix y_rest;       // Y_r = Y_cr^T Y_c^+ Y_cr
    Matrix y_full;       // assembled Y_f in the frame of sigma'
    CovMatrix pure_core; // TMSVS(r)
    CovMatrix remainder; // sigma_r - Y_r
    std::vector<std::size_t> rest_modes;
    Real structure_residual; // largest deviation of sigma_cr from the |l> pattern, relative
    Real schur_residual;     // |Y_cr^T Y_c^+ Y_cr - Y_cr^T (sigma_c + i Omega)^-1 Y_cr|
};

// Removes core `core` (modes 2 core, 2 core + 1) of sigma'.
FilterResult filter_step(const CovMatrix& sigma_prime, std::size_t core, const MnfOptions& opt = {});

// <v| Omega^T Lambda Y Lambda Omega |v> for a row vector v; b_side marks B modes.
Real vn_overlap(const Matrix& y, const std::vector<bool>& b_side, const Vector& v);

enum class HaloStatus { Separable, PptUndetermined, PptEntangled, Npt };
enum class Label { NIC, NsolOnly, Separable, PptUndetermined, PptEntangled, NptNonNsol };

std::string to_string(HaloStatus s);
std::string to_string(Label l);

struct SeparabilityResult {
    HaloStatus status;
    int iterations; // separability flow steps, 0 when decided directly
};

// PPT decides 1xN bipartitions and pure states; decoupled blocks are decided
// one at a time; everything else goes through the separability flow
// A' = B' = A - Re X, C' = -Im X, X = C (B - iJ)^-1 C^T.
SeparabilityResult halo_separability(const CovMatrix& sigma, const Bipartition& bip, const MnfOptions& opt = {});

struct Filtration {
    std::size_t round; // consolidation round, 0 is the first
    Real nu_minus;
    Real r;
    CoreNoise noise;
    Matrix y;          // Y_f in the first consolidation frame
    Matrix y_coupling; // Y_cr in the round frame
    CovMatrix pure_core;
    Real structure_residual;
    Real schur_residual;
    Real max_overlap; // largest V_N overlap of Y_f over the later cores of the same round
};

struct MnfReport {
    Bipartition bip;
    Real N;
    std::size_t n_minus = 0;
    bool nsol = false;
    Matrix first_frame;    // P (S_A + S_B) of the first consolidation
    CovMatrix sigma_prime; // first consolidation
    std::vector<Filtration> filtrations;
    CovMatrix final_halo;
    Bipartition final_halo_bip;
    HaloStatus halo_status = HaloStatus::Separable;
    int flow_iterations = 0;
    Label label = Label::Separable;
    Real N_p_mnf;
    bool alignment_held = true;
    bool additional_cores = false;
    std::size_t rounds = 0;
    CovMatrix pure_state;       // sigma' - sum Y_f, first consolidation frame
    CovMatrix pure_state_input; // the same in the input frame
    Real reconstruction_residual;
};

MnfReport mnf_run(const CovMatrix& sigma, const Bipartition& bip, const MnfOptions& opt = {});

struct NicConditions {
    bool spectrum_mm;  // spec_VN(-W s~p W s~p) = spec_VN(-W s~m W s~m)
    bool vectors_mm;   // matching V_N eigenvector subspaces
    bool spectrum_mp;  // spec_VN(-W s~p W s~p) = spec_VN(-W s~m W s~p)
    bool vectors_mp;
    Real worst_spectrum;
    Real worst_angle; // 1 - smallest cosine of the principal angles
    bool all() const { return spectrum_mm && vectors_mm && spectrum_mp && vectors_mp; }
};

// Evaluated on the V_N subspace of sigma_m (its n_minus smallest PT pairs).
// Requires sigma_m - sigma_p >= 0.
NicConditions nic_conditions(const CovMatrix& sigma_p, const CovMatrix& sigma_m, const Bipartition& bip, const Real& tol = Real(0));

} // namespace gaussent
