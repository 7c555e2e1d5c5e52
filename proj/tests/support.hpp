#pragma once

#include "doctest.h"
#include "gaussent/linalg.hpp"
#include "gaussent/symplectic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

template <>
struct doctest::StringMaker<gaussent::Real> {
    static doctest::String convert(const gaussent::Real& x) { return x.str(12).c_str(); }
};

namespace testsupport {

using namespace gaussent;

inline Real uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    return Real(d(rng));
}

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            m(i, j) = uniform(rng, -1, 1);
            m(j, i) = m(i, j);
        }
    return m;
}

inline Matrix rotation(std::size_t n_modes, std::size_t k, const Real& th)
{
    Matrix s = Matrix::identity(2 * n_modes);
    Real c = cos(th), sn = sin(th);
    s(2 * k, 2 * k) = c;
    s(2 * k, 2 * k + 1) = sn;
    s(2 * k + 1, 2 * k) = -sn;
    s(2 * k + 1, 2 * k + 1) = c;
    return s;
}

inline Matrix squeezer(std::size_t n_modes, std::size_t k, const Real& r)
{
    Matrix s = Matrix::identity(2 * n_modes);
    s(2 * k, 2 * k) = exp(r);
    s(2 * k + 1, 2 * k + 1) = exp(-r);
    return s;
}

inline Matrix beam_splitter(std::size_t n_modes, std::size_t i, std::size_t j, const Real& th)
{
    Matrix s = Matrix::identity(2 * n_modes);
    Real c = cos(th), sn = sin(th);
    for (int q = 0; q < 2; ++q) {
        s(2 * i + q, 2 * i + q) = c;
        s(2 * i + q, 2 * j + q) = sn;
        s(2 * j + q, 2 * i + q) = -sn;
        s(2 * j + q, 2 * j + q) = c;
    }
    return s;
}

// product of rotations, squeezers and beam splitters
inline Matrix random_symplectic(std::size_t n_modes, std::mt19937_64& rng, double squeeze = 0.6)
{
    Matrix s = Matrix::identity(2 * n_modes);
    for (int layer = 0; layer < 2; ++layer) {
        for (std::size_t k = 0; k < n_modes; ++k) {
            s = rotation(n_modes, k, uniform(rng, 0, 6.283)) * s;
            s = squeezer(n_modes, k, uniform(rng, -squeeze, squeeze)) * s;
            s = rotation(n_modes, k, uniform(rng, 0, 6.283)) * s;
        }
        for (std::size_t i = 0; i + 1 < n_modes; ++i)
            for (std::size_t j = i + 1; j < n_modes; ++j) s = beam_splitter(n_modes, i, j, uniform(rng, 0, 6.283)) * s;
    }
    return s;
}

inline Matrix random_local_symplectic(const Bipartition& bip, std::mt19937_64& rng, double squeeze = 0.6)
{
    Matrix a = bip.n_A ? random_symplectic(bip.n_A, rng, squeeze) : Matrix();
    Matrix b = bip.n_B ? random_symplectic(bip.n_B, rng, squeeze) : Matrix();
    if (a.empty()) return b;
    if (b.empty()) return a;
    return direct_sum(a, b);
}

inline Matrix thermal(const std::vector<Real>& nu)
{
    Matrix d(2 * nu.size(), 2 * nu.size());
    for (std::size_t k = 0; k < nu.size(); ++k) {
        d(2 * k, 2 * k) = nu[k];
        d(2 * k + 1, 2 * k + 1) = nu[k];
    }
    return d;
}

inline Matrix random_cm(std::size_t n_modes, std::mt19937_64& rng, double nu_max = 3.0)
{
    std::vector<Real> nu;
    for (std::size_t k = 0; k < n_modes; ++k) nu.push_back(uniform(rng, 1.0, nu_max));
    Matrix s = random_symplectic(n_modes, rng);
    return (s * thermal(nu) * s.transpose()).symmetrized();
}

// two-mode squeezed vacuum, ordering (xA, pA, xB, pB)
inline Matrix tmsvs(const Real& r)
{
    Real c = cosh(Real(2) * r), s = sinh(Real(2) * r);
    Matrix m(4, 4);
    for (int i = 0; i < 4; ++i) m(i, i) = c;
    m(0, 2) = m(2, 0) = s;
    m(1, 3) = m(3, 1) = -s;
    return m;
}

inline Eigen::MatrixXd to_eigen(const Matrix& m)
{
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j).to_double();
    return e;
}

// symplectic eigenvalues from the nonsymmetric spectrum of -Omega sigma Omega sigma, double precision
inline std::vector<double> symplectic_spectrum_double(const Matrix& sigma)
{
    std::size_t n = sigma.rows() / 2;
    Eigen::MatrixXd s = to_eigen(sigma);
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        o(2 * k, 2 * k + 1) = 1;
        o(2 * k + 1, 2 * k) = -1;
    }
    Eigen::MatrixXd m = -o * s * o * s;
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    std::vector<double> ev;
    for (int i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(std::sqrt(std::abs(es.eigenvalues()[i].real())));
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    std::vector<double> nu;
    for (std::size_t k = 0; k < n; ++k) nu.push_back(0.5 * (ev[2 * k] + ev[2 * k + 1]));
    return nu;
}

inline double rel_err(const Real& a, const Real& b)
{
    Real d = abs(a - b) / max(Real(1e-300), abs(b));
    return d.to_double();
}

} // namespace testsupport
