#include "gaussent/classify.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/linalg.hpp"

#include <algorithm>

namespace gaussent {

namespace {

Vector restrict_scaled(const Vector& v, std::size_t from, std::size_t count, const Real& f)
{
    Vector r;
    r.reserve(count);
    for (std::size_t k = 0; k < count; ++k) r.push_back(v[from + k] * f);
    return r;
}

std::vector<std::size_t> core_halo_order(std::size_t n_cores, const Bipartition& bip)
{
    std::vector<std::size_t> order;
    for (std::size_t f = 0; f < n_cores; ++f) {
        order.push_back(f);
        order.push_back(bip.n_A + f);
    }
    for (std::size_t k = n_cores; k < bip.n_A; ++k) order.push_back(k);
    for (std::size_t k = n_cores; k < bip.n_B; ++k) order.push_back(bip.n_A + k);
    return order;
}

// sum of A-part . B-part of a core's V_N rows in the PT frame; > 0 means A-B symmetric
Real core_symmetry(const Matrix& st, std::size_t pair, std::size_t mode_a, std::size_t mode_b)
{
    Real s = Real::zero(st.digits());
    for (std::size_t r = 2 * pair; r < 2 * pair + 2; ++r)
        for (std::size_t q = 0; q < 2; ++q) s += st(r, 2 * mode_a + q) * st(r, 2 * mode_b + q);
    return s;
}

// Shared tail of both consolidation routes: permutation, S~' and the invariants.
CoreHaloDecomposition finish(const CovMatrix& sigma, const PtSpectrum& spec, const SymplecticMap& local, const std::vector<Real>& core_nu,
                             std::vector<bool> flipped)
{
    const Bipartition bip = spec.bip;
    const std::size_t m = core_nu.size();
    const int digits = sigma.digits();

    CoreHaloDecomposition d;
    d.bip = bip;
    d.local_map = local;
    d.order = core_halo_order(m, bip);
    d.halo_A = bip.n_A - m;
    d.halo_B = bip.n_B - m;
    d.flipped = std::move(flipped);
    Matrix perm = mode_permutation(d.order);
    d.sigma_prime = (perm * local * sigma * local.transpose() * perm.transpose()).symmetrized();

    // halo sign gauge: the largest core-halo coupling of each halo mode is positive
    Real tol_c = half_precision_tol(digits) * max(Real(1), d.sigma_prime.max_abs());
    bool regauge = false;
    for (std::size_t k = 2 * m; k < bip.n_modes(); ++k) {
        Real best = Real::zero(digits);
        for (std::size_t r = 2 * k; r < 2 * k + 2; ++r)
            for (std::size_t c = 0; c < 4 * m; ++c)
                if (abs(d.sigma_prime(r, c)) > abs(best)) best = d.sigma_prime(r, c);
        if (abs(best) > tol_c && best.sign() < 0) {
            std::size_t old = d.order[k];
            for (std::size_t r = 2 * old; r < 2 * old + 2; ++r)
                for (std::size_t c = 0; c < d.local_map.cols(); ++c) d.local_map(r, c) = -d.local_map(r, c);
            regauge = true;
        }
    }
    if (regauge) d.sigma_prime = (perm * d.local_map * sigma * d.local_map.transpose() * perm.transpose()).symmetrized();
    d.s_tilde_prime = s_tilde_local_update(spec.s_tilde, d.local_map, bip) * perm.transpose();
    for (const auto& nu : core_nu) d.cores.push_back({nu, -log(nu) / Real(2)});

    if (!is_symplectic(d.local_map).ok) throw NumericalFailure("consolidation: local map is not symplectic");

    Real tol = half_precision_tol(digits);
    // V_N rows confined to their own core
    for (std::size_t f = 0; f < m; ++f) {
        std::size_t pair = spec.vn_pairs[f];
        for (std::size_t r = 2 * pair; r < 2 * pair + 2; ++r) {
            Vector row = d.s_tilde_prime.row(r);
            Real nr = norm(row);
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c / 4 == f) continue;
                if (abs(row[c]) > tol * nr)
                    throw NumericalFailure("consolidation: V_N row of core " + std::to_string(f) + " leaks outside its core (" +
                                           abs(row[c]).str(4) + ")");
            }
        }
        // V_N rows A-B anti-symmetric in the PT frame
        if (core_symmetry(d.s_tilde_prime, pair, 2 * f, 2 * f + 1).sign() > 0)
            throw NumericalFailure("consolidation: core " + std::to_string(f) + " still negatively squeezed");
        // reduced core carries nu_minus
        CovMatrix core = d.sigma_prime.block(4 * f, 4 * f, 4, 4);
        PtSpectrum cs = pt_spectrum(core, {1, 1});
        Real scale = max(Real(1), core.max_abs());
        if (abs(cs.nu_tilde[1] - core_nu[f]) > tol * scale)
            throw NumericalFailure("consolidation: reduced core " + std::to_string(f) + " does not reproduce its nu_minus");
    }
    return d;
}

} // namespace

Matrix CoreHaloDecomposition::frame() const
{
    return mode_permutation(order) * local_map;
}

NsolResult nsol_check(const PtSpectrum& spec, const Real& tol, std::size_t n_cores)
{
    if (spec.n_minus() == 0) throw NotApplicable("nsol_check: state has no negativity");
    Real t = tol.sign() > 0 ? tol : half_precision_tol(spec.s_tilde.digits());
    std::vector<Vector> rows = spec.vn_rows();
    if (n_cores > 0 && 2 * n_cores < rows.size()) rows.resize(2 * n_cores);
    const std::size_t a2 = 2 * spec.bip.n_A, b2 = 2 * spec.bip.n_B;
    std::vector<Vector> ra, rb;
    for (const auto& r : rows) {
        ra.push_back(restrict_scaled(r, 0, a2, Real(1)));
        rb.push_back(restrict_scaled(r, a2, b2, Real(1)));
    }
    Real worst = Real::zero(spec.s_tilde.digits());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            Real target = (i % 2 == 0 && j == i + 1) ? Real("0.5") : Real(0);
            Real pa = a2 ? symplectic_product(ra[i], ra[j]) : Real(0);
            Real pb = b2 ? symplectic_product(rb[i], rb[j]) : Real(0);
            worst = max(worst, abs(pa - target));
            worst = max(worst, abs(pb - target));
        }
    return {worst <= t, worst, rows.size() / 2};
}

NsolResult nsol_check(const CovMatrix& sigma, const Bipartition& bip, const Real& tol)
{
    return nsol_check(pt_spectrum(sigma, bip), tol);
}

CoreHaloDecomposition consolidate(const CovMatrix& sigma, const Bipartition& bip, const ConsolidateOptions& opt)
{
    return consolidate(sigma, pt_spectrum(sigma, bip, opt.tol_neg), opt);
}

CoreHaloDecomposition consolidate(const CovMatrix& sigma, const PtSpectrum& spec, const ConsolidateOptions& opt)
{
    const Bipartition bip = spec.bip;
    if (sigma.rows() != 2 * bip.n_modes()) throw InvalidInput("consolidate: bipartition does not match the matrix size");
    NsolResult ns = nsol_check(spec, opt.tol_nsol, opt.max_cores);
    if (!ns.nsol) throw NotApplicable("consolidate: state is not N-SOL (worst deviation " + ns.worst_deviation.str(4) + ")");
    const std::size_t m = ns.n_minus;
    const std::size_t na = bip.n_A, nb = bip.n_B;
    if (m > std::min(na, nb)) throw NumericalFailure("consolidate: more cores than modes on one side");
    const int digits = sigma.digits();
    Real sq2 = sqrt(Real::zero(digits) + Real(2));

    std::vector<Vector> seed_a, seed_b, cand_a, cand_b;
    std::vector<Vector> vn = spec.vn_rows(), rest(vn.begin() + 2 * m, vn.end());
    for (std::size_t k = 0; k < 2 * m; ++k) {
        seed_a.push_back(restrict_scaled(vn[k], 0, 2 * na, sq2));
        seed_b.push_back(restrict_scaled(vn[k], 2 * na, 2 * nb, sq2));
    }
    for (const auto& r : spec.vslash_rows()) rest.push_back(r);
    for (const auto& r : rest) {
        cand_a.push_back(restrict_scaled(r, 0, 2 * na, sq2));
        cand_b.push_back(restrict_scaled(r, 2 * na, 2 * nb, sq2));
    }
    Matrix ga = symplectic_gram_schmidt(seed_a, na, cand_a);
    Matrix gb = symplectic_gram_schmidt(seed_b, nb, cand_b);

    // phase pi on the B mode of every negative-squeezing core
    Matrix st = spec.s_tilde * symplectic_inverse(direct_sum(ga, gb));
    std::vector<bool> flipped(m, false);
    for (std::size_t f = 0; f < m; ++f) {
        if (core_symmetry(st, spec.vn_pairs[f], f, na + f).sign() > 0) {
            flipped[f] = true;
            for (std::size_t r = 2 * f; r < 2 * f + 2; ++r)
                for (std::size_t c = 0; c < gb.cols(); ++c) gb(r, c) = -gb(r, c);
        }
    }
    Matrix lam = lambda_b(bip, digits);
    Matrix local = lam * direct_sum(ga, gb) * lam;

    std::vector<Real> core_nu;
    for (std::size_t f = 0; f < m; ++f) core_nu.push_back(spec.nu_tilde[spec.vn_pairs[f]]);
    return finish(sigma, spec, local, core_nu, std::move(flipped));
}

bool symmetric_consolidate_applicable(const CovMatrix& sigma, const Bipartition& bip)
{
    if (bip.n_A != bip.n_B || sigma.rows() != 2 * bip.n_modes()) return false;
    const std::size_t n = bip.n_A;
    CovMatrix st = partial_transpose(sigma, bip);
    Real tol = half_precision_tol(sigma.digits()) * max(Real(1), sigma.max_abs());
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) {
            if (abs(st(i, j) - st(2 * n + i, 2 * n + j)) > tol) return false;
            if (abs(st(i, 2 * n + j) - st(j, 2 * n + i)) > tol) return false;
            if (i % 2 != j % 2 && (abs(st(i, j)) > tol || abs(st(i, 2 * n + j)) > tol)) return false;
        }
    return true;
}

CoreHaloDecomposition symmetric_consolidate(const CovMatrix& sigma, const Bipartition& bip, const Real& tol_neg)
{
    if (!symmetric_consolidate_applicable(sigma, bip))
        throw InvalidInput("symmetric_consolidate: state is not A-B symmetric without x-p correlations");
    PtSpectrum spec = pt_spectrum(sigma, bip, tol_neg);
    if (spec.n_minus() == 0) throw NotApplicable("symmetric_consolidate: state has no negativity");
    const std::size_t n = bip.n_A;
    const int digits = sigma.digits();
    CovMatrix st = partial_transpose(sigma, bip);

    Matrix x(n, n, digits), p(n, n, digits);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            x(i, j) = st(2 * i, 2 * j) - st(2 * i, 2 * n + 2 * j);
            p(i, j) = st(2 * i + 1, 2 * j + 1) - st(2 * i + 1, 2 * n + 2 * j + 1);
        }
    x = x.symmetrized();
    p = p.symmetrized();
    Matrix xh = matrix_sqrt(x);
    Matrix xih = matrix_inv_sqrt(x);
    SymEig e = sym_eig((xh * p * xh).symmetrized());

    // ascending nu, cores first
    Matrix s(2 * n, 2 * n, digits);
    std::vector<Real> nu;
    Matrix ut = e.vectors.transpose();
    Matrix sx = ut * xih, sp = ut * xh;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t src = n - 1 - k;
        Real v = sqrt(e.values[src]);
        Real rv = sqrt(v);
        for (std::size_t j = 0; j < n; ++j) {
            s(2 * k, 2 * j) = sx(src, j) * rv;
            s(2 * k + 1, 2 * j + 1) = sp(src, j) / rv;
        }
        nu.push_back(v);
    }
    std::vector<Real> core_nu;
    Real thr = Real(1) - spec.tol_neg;
    for (const auto& v : nu)
        if (v < thr) core_nu.push_back(v);
    if (core_nu.size() != spec.n_minus())
        throw NumericalFailure("symmetric_consolidate: negativity outside the antisymmetric sector");
    Real tol = half_precision_tol(digits);
    for (std::size_t f = 0; f < core_nu.size(); ++f)
        if (abs(core_nu[f] - spec.nu_tilde[spec.vn_pairs[f]]) > tol)
            throw NumericalFailure("symmetric_consolidate: core spectrum disagrees with the PT spectrum");
    Matrix local = direct_sum(s, s);
    return finish(sigma, spec, local, core_nu, std::vector<bool>(core_nu.size(), false));
}

CovMatrix two_mode_normal_form(const Real& n, const Real& k_q, const Real& k_p)
{
    CovMatrix m(4, 4, std::max(n.digits(), std::max(k_q.digits(), k_p.digits())));
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = n;
    m(0, 2) = m(2, 0) = k_q;
    m(1, 3) = m(3, 1) = k_p;
    return m;
}

TwoModeSymmetric two_mode_symmetric_analysis(const Real& n, const Real& k_q, const Real& k_p)
{
    if (k_q < k_p) throw InvalidInput("two_mode_symmetric_analysis: expected k_q >= k_p");
    if (abs(k_q) >= n || abs(k_p) >= n) throw UnphysicalState("two_mode_symmetric_analysis: requires n > |k_q|, |k_p|");
    // symplectic eigenvalues sqrt((n+kq)(n+kp)) and sqrt((n-kq)(n-kp)) must be >= 1
    Real one = Real(1);
    Real tol = half_precision_tol(n.digits());
    if ((n + k_q) * (n + k_p) < one - tol || (n - k_q) * (n - k_p) < one - tol)
        throw UnphysicalState("two_mode_symmetric_analysis: normal form violates the uncertainty relation");
    TwoModeSymmetric out;
    out.nu_minus = sqrt((n + k_p) * (n - k_q));
    out.lambda = sqrt(sqrt((n + k_p) / (n - k_q)));
    out.r = out.nu_minus < one ? -log(out.nu_minus) / Real(2) : Real::zero(n.digits());
    return out;
}

} // namespace gaussent
