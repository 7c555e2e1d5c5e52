#include "gaussent/pt_analysis.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace gaussent {

namespace {

void check_bipartition(const CovMatrix& sigma, const Bipartition& bip, const char* what)
{
    if (sigma.rows() != 2 * bip.n_modes())
        throw InvalidInput(std::string(what) + ": bipartition does not match the matrix size");
}

} // namespace

CovMatrix partial_transpose(const CovMatrix& sigma, const Bipartition& bip)
{
    check_bipartition(sigma, bip, "partial_transpose");
    CovMatrix t = sigma;
    // Lambda sigma Lambda flips the sign of entries with exactly one B momentum index
    auto flipped = [&](std::size_t i) { return i / 2 >= bip.n_A && i % 2 == 1; };
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
            if (flipped(i) != flipped(j)) t(i, j) = -t(i, j);
    return t;
}

std::vector<Vector> PtSpectrum::vn_rows() const
{
    std::vector<Vector> r;
    for (std::size_t j : vn_pairs) {
        r.push_back(s_tilde.row(2 * j));
        r.push_back(s_tilde.row(2 * j + 1));
    }
    return r;
}

std::vector<Vector> PtSpectrum::vslash_rows() const
{
    std::vector<Vector> r;
    for (std::size_t j : vslash_pairs) {
        r.push_back(s_tilde.row(2 * j));
        r.push_back(s_tilde.row(2 * j + 1));
    }
    return r;
}

PtSpectrum pt_spectrum(const CovMatrix& sigma, const Bipartition& bip, const Real& tol_neg)
{
    check_bipartition(sigma, bip, "pt_spectrum");
    validate_cm(sigma, "pt_spectrum");
    require_physical(sigma, "pt_spectrum");
    const int digits = sigma.digits();

    CovMatrix st = partial_transpose(sigma, bip);
    WilliamsonResult w = williamson(st);

    PtSpectrum out;
    out.bip = bip;
    out.nu_tilde = w.nu;
    out.s_tilde = w.S;
    out.tol_neg = tol_neg.sign() > 0 ? tol_neg : half_precision_tol(digits);

    const std::size_t n = bip.n_modes();
    std::vector<std::size_t> asc(n);
    std::iota(asc.begin(), asc.end(), 0);
    std::reverse(asc.begin(), asc.end());
    Real thr = Real(1) - out.tol_neg;
    for (std::size_t j : asc) (w.nu[j] < thr ? out.vn_pairs : out.vslash_pairs).push_back(j);

    // sigma = Lambda Omega (sum nu |nu><nu|) Omega^T Lambda
    Matrix o = omega(n, digits);
    Matrix d(2 * n, 2 * n, digits);
    for (std::size_t k = 0; k < 2 * n; ++k) d(k, k) = w.nu[k / 2];
    Matrix rec = o * w.S.transpose() * d * w.S * o.transpose();
    rec = partial_transpose(rec, bip);
    Real err = max_abs_diff(rec, sigma);
    if (err > half_precision_tol(digits) * max(Real(1), sigma.max_abs()))
        throw NumericalFailure("pt_spectrum: reconstruction check failed (" + err.str(6) + ")");
    return out;
}

Real log_negativity(const PtSpectrum& spec)
{
    Real n = Real::zero(spec.s_tilde.digits());
    for (const auto& nu : spec.nu_tilde)
        if (nu < Real(1)) n -= log2(nu);
    return n;
}

Real log_negativity(const CovMatrix& sigma, const Bipartition& bip)
{
    return log_negativity(pt_spectrum(sigma, bip));
}

SymplecticMap s_tilde_local_update(const SymplecticMap& s_tilde, const SymplecticMap& local, const Bipartition& bip)
{
    if (local.rows() != s_tilde.rows() || local.rows() != 2 * bip.n_modes())
        throw InvalidInput("s_tilde_local_update: shape mismatch");
    if (!is_symplectic(local).ok) throw InvalidInput("s_tilde_local_update: local map is not symplectic");
    // off-diagonal A-B blocks must vanish
    Real tol = half_precision_tol(local.digits()) * max(Real(1), local.max_abs());
    std::size_t a = 2 * bip.n_A;
    for (std::size_t i = 0; i < local.rows(); ++i)
        for (std::size_t j = 0; j < local.cols(); ++j)
            if ((i < a) != (j < a) && abs(local(i, j)) > tol) throw InvalidInput("s_tilde_local_update: map is not local");
    Matrix l = lambda_b(bip, local.digits());
    return s_tilde * l * symplectic_inverse(local) * l;
}

} // namespace gaussent
