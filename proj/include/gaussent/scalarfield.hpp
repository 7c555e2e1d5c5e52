#pragma once

#include "gaussent/symplectic.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gaussent {

// Two regions of d sites separated by r_tilde sites on the infinite 1D lattice.
struct RegionSpec {
    int d = 1;
    int r_tilde = 0;
    std::string mass = "1e-10"; // decimal, parsed at the working precision
    int precision = 0;          // 0 selects default_field_precision
};

int default_field_precision(int r_tilde); // max(64, 30 + 2 r_tilde)

struct Correlator {
    Real g_x; // (1/pi) int_0^pi cos(k D) / w_k dk
    Real g_p; // (1/pi) int_0^pi cos(k D) w_k dk,  w_k = sqrt(m^2 + 4 sin^2(k/2))
};

// Closed form: complete elliptic integrals by the AGM, then the three-term
// recurrence in D. Values for D = 0..max_delta.
std::vector<Correlator> correlator_table(const Real& m, int max_delta, int digits);
Correlator correlator(int delta, const Real& m, int digits);

// Independent route by tanh-sinh quadrature, with k = m sinh(u) on [0, k_cut].
Correlator correlator_quadrature(int delta, const Real& m, int digits);

// Site indices: A = 0..d-1, B mode j at site 2d + r_tilde - 1 - j (mirrored,
// so the state is A-B exchange symmetric mode by mode).
std::pair<CovMatrix, Bipartition> vacuum_cm(const RegionSpec& spec);

void clear_correlator_cache();

} // namespace gaussent
