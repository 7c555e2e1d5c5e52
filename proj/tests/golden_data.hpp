#pragma once

#include "gaussent/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstddef>
#include <cstring>

namespace golden {

using gaussent::Matrix;
using gaussent::Real;

template <std::size_t R, std::size_t C>
inline Matrix from_strings(const char* const (&t)[R][C])
{
    Matrix m(R, C);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) m(i, j) = Real(t[i][j]);
    return m;
}

// half a unit in the last printed decimal place
inline double printed_half_unit(const char* s)
{
    const char* dot = std::strchr(s, '.');
    if (!dot) return 0.5;
    int decimals = 0;
    for (const char* c = dot + 1; *c >= '0' && *c <= '9'; ++c) ++decimals;
    return 0.5 * std::pow(10.0, -decimals);
}

// allowed deviation for agreement to `sig` significant digits, never finer than the printed resolution
inline double sig_tolerance(const char* s, int sig)
{
    double p = std::abs(std::atof(s));
    double t = p > 0 ? 0.5 * std::pow(10.0, std::floor(std::log10(p)) - sig + 1) : 0.0;
    return std::max(t, printed_half_unit(s));
}

// Mixed 4-mode state, bipartition 2 x 2, ordering (xA1, pA1, xA2, pA2, xB1, pB1, xB2, pB2).
inline const char* const xp_mixed_4mode[8][8] = {
    {"2.89562", "1.86324", "1.20668", "3.63702", "0.388124", "0.199187", "-1.61365", "0.752206"},
    {"1.86324", "6.90690", "0.936903", "-4.22060", "0.531462", "-0.263280", "-2.15507", "1.90189"},
    {"1.20668", "0.936903", "1.23135", "2.42264", "1.21851", "2.45543", "-0.213628", "0.763726"},
    {"3.63702", "-4.22060", "2.42264", "26.1167", "4.64899", "2.47557", "1.78513", "5.15944"},
    {"0.388124", "0.531462", "1.21851", "4.64899", "3.26789", "5.95046", "2.06324", "1.95927"},
    {"0.199187", "-0.263280", "2.45543", "2.47557", "5.95046", "20.1834", "6.99689", "0.447081"},
    {"-1.61365", "-2.15507", "-0.213628", "1.78513", "2.06324", "6.99689", "4.90273", "0.681893"},
    {"0.752206", "1.90189", "0.763726", "5.15944", "1.95927", "0.447081", "0.681893", "4.20990"}};

inline const char* xp_mixed_4mode_nu_minus = "0.213940";
inline const char* xp_mixed_4mode_N = "2.22472";

// printed local maps before the sign conjugations below
inline const char* const xp_mixed_4mode_sa_raw[4][4] = {
    {"-0.906105", "-0.588806", "2.46527", "-0.176266"},
    {"0.581021", "-0.381514", "-0.0235654", "0.128324"},
    {"0.460665", "0.00242659", "1.41924", "-0.210609"},
    {"-0.994206", "0.672478", "0", "0.484625"}};

inline const char* const xp_mixed_4mode_sb_raw[4][4] = {
    {"-0.851396", "0.0275469", "-0.489418", "-0.720178"},
    {"-1.78259", "-0.476916", "0.219893", "-0.789690"},
    {"0.512159", "0.703799", "1.15507", "0.446517"},
    {"-1.03125", "-0.353295", "-0.256786", "0.294780"}};

// S_A = diag(1, 1, -1, -1) S_A_raw
inline Matrix xp_mixed_4mode_sa()
{
    Matrix m = from_strings(xp_mixed_4mode_sa_raw);
    for (std::size_t i = 2; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = -m(i, j);
    return m;
}

// S_B = Z S_B_raw Z, Z = diag(1, -1, 1, -1)
inline Matrix xp_mixed_4mode_sb()
{
    Matrix m = from_strings(xp_mixed_4mode_sb_raw);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if ((i + j) % 2) m(i, j) = -m(i, j);
    return m;
}

// core-halo form, ordering (cA, cB, hA, hB)
inline const char* const xp_mixed_4mode_sigma_prime[8][8] = {
    {"3.6920", "-0.38369", "3.4781", "0.38369", "-0.60432", "-0.054119", "-0.073460", "-0.24042"},
    {"-0.38369", "3.3723", "-0.38369", "-3.1583", "0.16689", "-0.57620", "0.23274", "-0.95387"},
    {"3.4781", "-0.38369", "3.6920", "0.38369", "-0.60432", "-0.054119", "-0.073460", "-0.24042"},
    {"0.38369", "-3.1583", "0.38369", "3.3723", "-0.16689", "0.57620", "-0.23274", "0.95387"},
    {"-0.60432", "0.16689", "-0.60432", "-0.16689", "5.1245", "0.27367", "-2.9693", "0.28105"},
    {"-0.054119", "-0.57620", "-0.054119", "0.57620", "0.27367", "2.5123", "-0.31802", "0.51894"},
    {"-0.073459", "0.23274", "-0.073460", "-0.23274", "-2.9693", "-0.31802", "5.0281", "-0.33108"},
    {"-0.24042", "-0.95387", "-0.24042", "0.95387", "0.28105", "0.51894", "-0.33108", "2.6272"}};

// Field vacuum d = 2, r_tilde = 1, m = 1e-10 in core-halo form (cA, cB, hA, hB).
inline const char* const field_d2_r1_sigma_prime[8][8] = {
    {"7.65761", "0", "6.72931", "0", "5.22809", "0", "5.22809", "0"},
    {"0", "1.02441", "0", "-0.096102", "0", "0.047747", "0", "-0.047747"},
    {"6.72931", "0", "7.65761", "0", "5.22809", "0", "5.22809", "0"},
    {"0", "-0.096102", "0", "1.02441", "0", "-0.047747", "0", "0.047747"},
    {"5.22809", "0", "5.22809", "0", "5.18827", "0", "4.10771", "0"},
    {"0", "0.047747", "0", "-0.047747", "0", "1.11078", "0", "-0.026938"},
    {"5.22809", "0", "5.22809", "0", "4.10771", "0", "5.18827", "0"},
    {"0", "-0.047747", "0", "0.047747", "0", "-0.026938", "0", "1.11078"}};

inline const char* const field_d2_r1_core_noise[4][4] = {
    {"6.65484", "0", "6.65484", "0"},
    {"0", "0.021637", "0", "-0.021637"},
    {"6.65484", "0", "6.65484", "0"},
    {"0", "-0.021637", "0", "0.021637"}};

// sigma' minus the assembled noise: TMSVS core plus filtered halo
inline const char* const field_d2_r1_pure_halo[8][8] = {
    {"1.00277", "0", "0.074465", "0", "0", "0", "0", "0"},
    {"0", "1.00277", "0", "-0.074465", "0", "0", "0", "0"},
    {"0.074465", "0", "1.00277", "0", "0", "0", "0", "0"},
    {"0", "-0.074465", "0", "1.00277", "0", "0", "0", "0"},
    {"0", "0", "0", "0", "1.08269", "0", "0.000490", "0"},
    {"0", "0", "0", "0", "0", "1.00389", "0", "0.078307"},
    {"0", "0", "0", "0", "0.000490", "0", "1.08269", "0"},
    {"0", "0", "0", "0", "0", "0.078307", "0", "1.00389"}};

// (d, r_tilde at NIC onset, r_tilde at separability onset)
struct Transition {
    int d, r_nic, r_sep;
};
inline const Transition field_transitions[] = {{1, 0, 1}, {2, 1, 2}, {3, 4, 9}, {4, 11, 13}, {5, 19, 26}, {6, 30, 32}};

struct FieldPoint {
    int r_tilde;
    const char* value;
};
// d = 10, m = 1e-10
inline const FieldPoint field_d10_N[] = {{0, "1.214"}, {1, "0.3915"}, {10, "1.243e-2"}, {30, "4.193e-5"}, {50, "8.134e-8"}};
inline const FieldPoint field_d10_Np[] = {{10, "4.696e-2"}, {50, "1.857e-4"}, {95, "3.873e-14"}};

} // namespace golden
