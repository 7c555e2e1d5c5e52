#include "gaussent/mnf.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace gaussent {

namespace {

// the looser of 10^(-P/2) and the structure tolerance
Real loose_tol(int digits, const MnfOptions& opt)
{
    Real half = half_precision_tol(digits);
    return opt.structure_tol.sign() > 0 ? max(half, opt.structure_tol) : half;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to)
{
    std::vector<std::size_t> v(to - from);
    std::iota(v.begin(), v.end(), from);
    return v;
}

struct SideOrder {
    std::vector<std::size_t> order; // A modes first, original order kept within a side
    Bipartition bip;
};

SideOrder side_first(const std::vector<bool>& b_side)
{
    SideOrder s;
    for (std::size_t k = 0; k < b_side.size(); ++k)
        if (!b_side[k]) s.order.push_back(k);
    s.bip.n_A = s.order.size();
    for (std::size_t k = 0; k < b_side.size(); ++k)
        if (b_side[k]) s.order.push_back(k);
    s.bip.n_B = b_side.size() - s.bip.n_A;
    return s;
}

// largest singular value
Real spectral_norm(const Matrix& c)
{
    if (c.empty()) return Real(0);
    Matrix g = c.rows() <= c.cols() ? c * c.transpose() : c.transpose() * c;
    return sqrt(max(Real(0), sym_eig(g.symmetrized()).values.front()));
}

bool is_pure(const CovMatrix& s, const Real& tol)
{
    for (const auto& nu : symplectic_eigenvalues(s))
        if (abs(nu - Real(1)) > tol) return false;
    return true;
}

// Giedke-Kraus-Lewenstein-Cirac map on a PPT state with both sides multimode.
SeparabilityResult separability_flow(const CovMatrix& sigma, const Bipartition& bip, const MnfOptions& opt)
{
    const int digits = sigma.digits();
    std::size_t na = bip.n_A, nb = bip.n_B;
    CovMatrix s = sigma;
    if (na > nb) {
        std::vector<std::size_t> order = range(na, na + nb);
        for (std::size_t k = 0; k < na; ++k) order.push_back(k);
        s = permute_modes(sigma, order);
        std::swap(na, nb);
    }
    Matrix a = s.block(0, 0, 2 * na, 2 * na);
    Matrix b = s.block(2 * na, 2 * na, 2 * nb, 2 * nb);
    Matrix c = s.block(0, 2 * na, 2 * na, 2 * nb);
    Real tol = half_precision_tol(digits);
    Matrix ja = omega(na, digits);
    Matrix jb = omega(nb, digits);
    Real minus1 = Real(-1);
    for (int it = 0; it <= opt.max_flow_iterations; ++it) {
        if (it > 0 && !psd_check(hermitian_embedding(a, minus1 * ja), tol).psd) return {HaloStatus::PptEntangled, it};
        Matrix shifted = a - Matrix::identity(2 * na, digits) * spectral_norm(c);
        if (psd_check(hermitian_embedding(shifted, minus1 * ja), tol).psd) return {HaloStatus::Separable, it};
        if (it == opt.max_flow_iterations) break;
        // B - iJ >= 0 may be singular; the generalised Schur complement uses the pseudoinverse
        Matrix inv = pseudoinverse(hermitian_embedding(b, minus1 * jb).symmetrized(), tol);
        const std::size_t m = b.rows();
        Matrix re = inv.block(0, 0, m, m), im = inv.block(m, 0, m, m);
        Matrix re_x = (c * re * c.transpose()).symmetrized();
        Matrix im_x = c * im * c.transpose();
        a = (a - re_x).symmetrized();
        b = a;
        c = minus1 * im_x;
        jb = ja;
    }
    return {HaloStatus::PptUndetermined, opt.max_flow_iterations};
}

} // namespace

CovMatrix two_mode_squeezed_vacuum(const Real& r)
{
    const int digits = r.digits();
    Real c = cosh(Real(2) * r), s = sinh(Real(2) * r);
    CovMatrix m(4, 4, digits);
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = c;
    m(0, 2) = m(2, 0) = s;
    m(1, 3) = m(3, 1) = -s;
    return m;
}

CoreNoise core_noise_from_s_tilde(const Matrix& s, const Real& nu_plus, const Real& nu_minus, const Real& tol)
{
    if (s.rows() != 4 || s.cols() != 4) throw InvalidInput("core_noise_from_s_tilde: expected 4x4 rows");
    if (!(nu_minus.sign() > 0 && nu_minus < Real(1))) throw InvalidInput("core_noise_from_s_tilde: nu_minus must lie in (0, 1)");
    const int digits = s.digits();
    Real t = tol.sign() > 0 ? tol : half_precision_tol(digits);
    if (nu_plus < Real(1) - t) throw InvalidInput("core_noise_from_s_tilde: nu_plus below 1");

    Real h = Real(1) / sqrt(Real::zero(digits) + Real(2));
    Matrix e(2, 4, digits);
    e(0, 0) = -h;
    e(0, 2) = h;
    e(1, 1) = -h;
    e(1, 3) = h;
    if (max_abs_diff(s.block(2, 0, 2, 4), e) > t) throw NumericalFailure("core_noise_from_s_tilde: V_N rows are not in the aligned form");
    CoreNoise n;
    n.a1 = s(0, 0);
    n.a2 = s(0, 1);
    n.a3 = s(1, 0);
    n.a4 = s(1, 1);
    Real scale = max(Real(1), s.block(0, 0, 2, 4).max_abs());
    if (abs(s(0, 2) - n.a1) > t * scale || abs(s(0, 3) - n.a2) > t * scale || abs(s(1, 2) - n.a3) > t * scale ||
        abs(s(1, 3) - n.a4) > t * scale)
        throw NumericalFailure("core_noise_from_s_tilde: V_/ rows are not A-B symmetric");
    if (abs(Real(2) * n.a1 * n.a4 - Real(2) * n.a3 * n.a2 - Real(1)) > t * scale * scale)
        throw NumericalFailure("core_noise_from_s_tilde: symplectic constraint 2 a1 a4 - 2 a3 a2 = 1 violated");

    n.nu_plus = nu_plus;
    n.nu_minus = nu_minus;
    n.r = -log(nu_minus) / Real(2);
    Real inv = Real(1) / nu_minus;
    n.y11 = Real(2) * nu_plus * (n.a2 * n.a2 + n.a4 * n.a4) - inv;
    n.y22 = Real(2) * nu_plus * (n.a1 * n.a1 + n.a3 * n.a3) - inv;
    n.y12 = Real(-2) * nu_plus * (n.a1 * n.a2 + n.a3 * n.a4);
    Real ys = max(Real(1), max(abs(n.y11), abs(n.y22)));
    if (n.y11 < -t * ys || n.y22 < -t * ys || n.y11 * n.y22 - n.y12 * n.y12 < -t * ys * ys)
        throw NumericalFailure("core_noise_from_s_tilde: core noise is not positive semidefinite (misaligned core)");

    Real y[2][2] = {{n.y11, n.y12}, {n.y12, n.y22}};
    n.y_core = Matrix(4, 4, digits);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Real v = y[i % 2][j % 2] / Real(2);
            bool neg = (i == 3) != (j == 3);
            n.y_core(i, j) = neg ? -v : v;
        }
    return n;
}

CoreNoise core_noise(const CovMatrix& core, const Real& tol)
{
    if (core.rows() != 4 || core.cols() != 4) throw InvalidInput("core_noise: expected a 4x4 core");
    const int digits = core.digits();
    Real t = tol.sign() > 0 ? tol : half_precision_tol(digits);
    PtSpectrum cs = pt_spectrum(core, {1, 1});
    if (cs.n_minus() != 1) throw NotApplicable("core_noise: core carries no negativity");
    Matrix s = cs.s_tilde;

    // rotate the V_N pair onto (-1 0 1 0)/sqrt2, (0 -1 0 1)/sqrt2
    Real h = Real(1) / sqrt(Real::zero(digits) + Real(2));
    Matrix e(2, 4, digits);
    e(0, 0) = -h;
    e(0, 2) = h;
    e(1, 1) = -h;
    e(1, 3) = h;
    Matrix v = s.block(2, 0, 2, 4);
    Matrix g = v * v.transpose();
    Real det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (abs(det) <= t) throw NumericalFailure("core_noise: degenerate V_N pair");
    Matrix gi(2, 2, digits);
    gi(0, 0) = g(1, 1) / det;
    gi(1, 1) = g(0, 0) / det;
    gi(0, 1) = -g(0, 1) / det;
    gi(1, 0) = -g(1, 0) / det;
    Matrix rot = e * v.transpose() * gi;
    if (max_abs_diff(rot * rot.transpose(), Matrix::identity(2, digits)) > t)
        throw NumericalFailure("core_noise: V_N pair of the core is not aligned with a positively squeezed TMSVS");
    s.set_block(2, 0, rot * v);

    CoreNoise n = core_noise_from_s_tilde(s, cs.nu_tilde[0], cs.nu_tilde[1], t);
    Matrix diff = core - two_mode_squeezed_vacuum(n.r) - n.y_core;
    if (diff.max_abs() > t * max(Real(1), core.max_abs()))
        throw NumericalFailure("core_noise: TMSVS plus noise does not reproduce the core (" + diff.max_abs().str(4) + ")");
    return n;
}

FilterResult filter_step(const CovMatrix& sigma_prime, std::size_t core, const MnfOptions& opt)
{
    validate_cm(sigma_prime, "filter_step");
    const std::size_t n = sigma_prime.rows() / 2;
    if (2 * core + 1 >= n) throw InvalidInput("filter_step: core index out of range");
    const int digits = sigma_prime.digits();
    Real loose = loose_tol(digits, opt);

    std::vector<std::size_t> ci = range(4 * core, 4 * core + 4), ri, modes;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == 2 * core || k == 2 * core + 1) continue;
        modes.push_back(k);
        ri.push_back(2 * k);
        ri.push_back(2 * k + 1);
    }
    CovMatrix sc = sigma_prime.select(ci);
    Matrix scr = sigma_prime.select(ci, ri);
    CovMatrix sr = sigma_prime.select(ri);

    FilterResult fr;
    fr.rest_modes = modes;
    fr.noise = core_noise(sc, loose);
    fr.pure_core = two_mode_squeezed_vacuum(fr.noise.r);
    fr.y_coupling = scr;

    // |l> = (l_i, -l_j, l_i, l_j) in every column
    Real dev = Real::zero(digits);
    for (std::size_t j = 0; j < scr.cols(); ++j) {
        dev = max(dev, abs(scr(0, j) - scr(2, j)));
        dev = max(dev, abs(scr(1, j) + scr(3, j)));
    }
    // a coupling below 10^(-P/2) of the matrix scale counts as zero
    Real scale = max(Real(1), sigma_prime.max_abs());
    Real cmax = scr.max_abs();
    fr.structure_residual = cmax > half_precision_tol(digits) * scale ? dev / cmax : dev / scale;
    if (fr.structure_residual > loose)
        throw NumericalFailure("filter_step: core-rest coupling violates the |l> structure (relative " + fr.structure_residual.str(4) + ")");

    Matrix yci = pseudoinverse(fr.noise.y_core, half_precision_tol(digits));
    fr.y_rest = (scr.transpose() * yci * scr).symmetrized();

    // the same form through (sigma_c + i Omega)^-1, real embedding
    Matrix emb = hermitian_embedding(sc, omega(2, digits));
    Matrix inv = pseudoinverse(emb.symmetrized(), half_precision_tol(digits));
    Matrix q_re = scr.transpose() * inv.block(0, 0, 4, 4) * scr;
    Matrix q_im = scr.transpose() * inv.block(4, 0, 4, 4) * scr;
    Real yscale = max(Real(1), fr.y_rest.max_abs());
    fr.schur_residual = max(max_abs_diff(q_re, fr.y_rest), q_im.max_abs()) / yscale;
    if (fr.schur_residual > loose)
        throw NumericalFailure("filter_step: Schur form through sigma_c + i Omega disagrees (" + fr.schur_residual.str(4) + ")");

    fr.y_full = Matrix(2 * n, 2 * n, digits);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) fr.y_full(ci[i], ci[j]) = fr.noise.y_core(i, j);
        for (std::size_t j = 0; j < ri.size(); ++j) fr.y_full(ci[i], ri[j]) = fr.y_full(ri[j], ci[i]) = scr(i, j);
    }
    for (std::size_t i = 0; i < ri.size(); ++i)
        for (std::size_t j = 0; j < ri.size(); ++j) fr.y_full(ri[i], ri[j]) = fr.y_rest(i, j);
    PsdResult yp = psd_check(fr.y_full, loose);
    if (!yp.psd) throw NumericalFailure("filter_step: assembled noise is not positive semidefinite (" + yp.min_eigenvalue.str(4) + ")");

    fr.remainder = (sr - fr.y_rest).symmetrized();
    if (!ri.empty()) {
        Physicality ph = physicality(fr.remainder, loose);
        if (!ph.physical)
            throw NumericalFailure("filter_step: filtered remainder is unphysical (min symplectic eigenvalue " +
                                   ph.min_symplectic_eigenvalue.str(6) + ")");
    }
    return fr;
}

Real vn_overlap(const Matrix& y, const std::vector<bool>& b_side, const Vector& v)
{
    const std::size_t n = b_side.size();
    if (y.rows() != 2 * n || v.size() != 2 * n) throw InvalidInput("vn_overlap: dimension mismatch");
    Vector w(2 * n, Real::zero(y.digits()));
    for (std::size_t k = 0; k < n; ++k) {
        w[2 * k] = v[2 * k + 1];
        w[2 * k + 1] = -v[2 * k];
        if (b_side[k]) w[2 * k + 1] = -w[2 * k + 1];
    }
    return dot(w, y * w);
}

std::string to_string(HaloStatus s)
{
    switch (s) {
    case HaloStatus::Separable: return "separable";
    case HaloStatus::PptUndetermined: return "PPT-undetermined";
    case HaloStatus::PptEntangled: return "PPT-entangled";
    case HaloStatus::Npt: return "NPT-non-NSOL";
    }
    return "?";
}

std::string to_string(Label l)
{
    switch (l) {
    case Label::NIC: return "NIC";
    case Label::NsolOnly: return "NSOL-only";
    case Label::Separable: return "separable";
    case Label::PptUndetermined: return "PPT-undetermined";
    case Label::PptEntangled: return "PPT-entangled";
    case Label::NptNonNsol: return "NPT-non-NSOL";
    }
    return "?";
}

SeparabilityResult halo_separability(const CovMatrix& sigma, const Bipartition& bip, const MnfOptions& opt)
{
    if (bip.n_A == 0 || bip.n_B == 0) return {HaloStatus::Separable, 0};
    validate_cm(sigma, "halo_separability");
    if (sigma.rows() != 2 * bip.n_modes()) throw InvalidInput("halo_separability: bipartition does not match the matrix size");
    if (pt_spectrum(sigma, bip, opt.tol_neg).n_minus() > 0) return {HaloStatus::Npt, 0};
    if (bip.n_A == 1 || bip.n_B == 1) return {HaloStatus::Separable, 0};

    // decoupled blocks
    const std::size_t n = bip.n_modes();
    const int digits = sigma.digits();
    Real tol = half_precision_tol(digits) * max(Real(1), sigma.max_abs());
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](std::size_t k) {
        while (root[k] != k) k = root[k] = root[root[k]];
        return k;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (sigma.block(2 * i, 2 * j, 2, 2).max_abs() > tol) root[find(j)] = find(i);

    SeparabilityResult out{HaloStatus::Separable, 0};
    for (std::size_t r = 0; r < n; ++r) {
        if (find(r) != r) continue;
        std::vector<std::size_t> modes;
        std::size_t a = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (find(k) == r) {
                modes.push_back(k);
                if (k < bip.n_A) ++a;
            }
        std::size_t b = modes.size() - a;
        if (a <= 1 || b <= 1) continue;
        CovMatrix sub = permute_modes(sigma, modes);
        if (is_pure(sub, half_precision_tol(digits))) continue;
        SeparabilityResult f = separability_flow(sub, {a, b}, opt);
        out.iterations = std::max(out.iterations, f.iterations);
        if (f.status == HaloStatus::PptEntangled) return {HaloStatus::PptEntangled, out.iterations};
        if (f.status == HaloStatus::PptUndetermined) out.status = HaloStatus::PptUndetermined;
    }
    return out;
}

MnfReport mnf_run(const CovMatrix& sigma, const Bipartition& bip, const MnfOptions& opt)
{
    validate_cm(sigma, "mnf_run");
    if (sigma.rows() != 2 * bip.n_modes()) throw InvalidInput("mnf_run: bipartition does not match the matrix size");
    require_physical(sigma, "mnf_run");
    const int digits = sigma.digits();
    const std::size_t n = bip.n_modes();
    Real loose = loose_tol(digits, opt);

    MnfReport rep;
    rep.bip = bip;
    PtSpectrum spec0 = pt_spectrum(sigma, bip, opt.tol_neg);
    rep.N = log_negativity(spec0);
    rep.n_minus = spec0.n_minus();
    rep.N_p_mnf = Real::zero(digits);
    rep.reconstruction_residual = Real::zero(digits);
    rep.first_frame = Matrix::identity(2 * n, digits);
    rep.sigma_prime = sigma;
    rep.final_halo = sigma;
    rep.final_halo_bip = bip;
    rep.pure_state = sigma;
    rep.pure_state_input = sigma;

    if (rep.n_minus == 0) {
        SeparabilityResult s = halo_separability(sigma, bip, opt);
        rep.halo_status = s.status;
        rep.flow_iterations = s.iterations;
        rep.label = s.status == HaloStatus::Separable      ? Label::Separable
                    : s.status == HaloStatus::PptEntangled ? Label::PptEntangled
                                                            : Label::PptUndetermined;
        return rep;
    }
    rep.nsol = nsol_check(spec0, opt.tol_nsol).nsol;
    if (!rep.nsol) {
        rep.halo_status = HaloStatus::Npt;
        rep.label = Label::NptNonNsol;
        return rep;
    }

    ConsolidateOptions co{opt.tol_nsol, opt.tol_neg};
    if (opt.strategy == MnfStrategy::DominantCore) co.max_cores = 1;
    const std::size_t cap = 4 * n;
    CovMatrix cur = sigma;
    std::vector<bool> side(n, false);
    for (std::size_t k = bip.n_A; k < n; ++k) side[k] = true;
    Matrix back; // first consolidation frame <- current coordinates
    Matrix ysum(2 * n, 2 * n, digits), puresum(2 * n, 2 * n, digits);
    bool halo_npt = false;
    std::vector<Real> pending; // original nu_minus values not yet extracted
    for (std::size_t j : spec0.vn_pairs) pending.push_back(spec0.nu_tilde[j]);

    for (bool first = true;; first = false) {
        if (cur.rows() == 0) {
            rep.halo_status = HaloStatus::Separable;
            break;
        }
        SideOrder so = side_first(side);
        CovMatrix cq = permute_modes(cur, so.order);
        PtSpectrum sp = first ? spec0 : pt_spectrum(cq, so.bip, opt.tol_neg);
        if (sp.n_minus() == 0) {
            SeparabilityResult s = halo_separability(cq, so.bip, opt);
            rep.halo_status = s.status;
            rep.flow_iterations = s.iterations;
            break;
        }
        if (!first && !nsol_check(sp, opt.tol_nsol, co.max_cores).nsol) {
            rep.halo_status = HaloStatus::Npt;
            halo_npt = true;
            break;
        }
        CoreHaloDecomposition d = consolidate(cq, sp, co);
        Matrix f = d.frame() * mode_permutation(so.order);
        if (first) {
            rep.first_frame = f;
            rep.sigma_prime = d.sigma_prime;
            back = Matrix::identity(2 * n, digits);
        } else {
            back = back * symplectic_inverse(f);
        }
        cur = d.sigma_prime;
        const std::size_t m = d.n_cores();
        side.assign(cur.rows() / 2, false);
        for (std::size_t k = 0; k < m; ++k) side[2 * k + 1] = true;
        for (std::size_t k = 2 * m + d.halo_A; k < side.size(); ++k) side[k] = true;
        std::vector<std::size_t> cols = range(0, side.size());
        std::vector<Vector> others; // V_N rows of the cores of this round, round frame
        for (std::size_t g = 1; g < m; ++g)
            for (std::size_t q = 0; q < 2; ++q) others.push_back(d.s_tilde_prime.row(2 * sp.vn_pairs[g] + q));

        for (std::size_t c = 0; c < m; ++c) {
            if (rep.filtrations.size() >= cap)
                throw NumericalFailure("mnf_run: iteration cap of " + std::to_string(cap) + " filtrations exceeded");
            FilterResult fr = filter_step(cur, 0, opt);

            Filtration ft;
            ft.round = rep.rounds;
            ft.nu_minus = fr.noise.nu_minus;
            ft.r = fr.noise.r;
            ft.noise = fr.noise;
            ft.y = (back * fr.y_full * back.transpose()).symmetrized();
            ft.y_coupling = fr.y_coupling;
            ft.pure_core = fr.pure_core;
            ft.structure_residual = fr.structure_residual;
            ft.schur_residual = fr.schur_residual;
            ft.max_overlap = Real::zero(digits);
            Real yscale = max(Real(1), fr.y_full.max_abs());
            for (std::size_t g = 2 * c; g < others.size(); ++g) {
                Vector vr;
                for (std::size_t k : cols) {
                    vr.push_back(others[g][2 * k]);
                    vr.push_back(others[g][2 * k + 1]);
                }
                Real ov = abs(vn_overlap(fr.y_full, side, vr)) / (yscale * max(Real(1), dot(vr, vr)));
                ft.max_overlap = max(ft.max_overlap, ov);
            }
            if (ft.max_overlap > loose) rep.alignment_held = false;

            bool matched = false;
            for (std::size_t j = 0; j < pending.size() && !matched; ++j)
                if (abs(pending[j] - fr.noise.nu_minus) <= loose) {
                    pending.erase(pending.begin() + j);
                    matched = true;
                }
            if (!matched) rep.additional_cores = true;

            Matrix bc = back.select(range(0, 2 * n), range(0, 4));
            puresum += bc * fr.pure_core * bc.transpose();
            ysum += ft.y;
            rep.N_p_mnf += -log2(fr.noise.nu_minus);
            rep.filtrations.push_back(ft);

            back = back.select(range(0, 2 * n), range(4, back.cols()));
            side.erase(side.begin(), side.begin() + 2);
            cols.erase(cols.begin(), cols.begin() + 2);
            cur = fr.remainder;
            if (cur.rows() == 0) break;

            // pending cores keep their nu_minus; anything new is an additional core
            SideOrder so2 = side_first(side);
            PtSpectrum sp2 = pt_spectrum(permute_modes(cur, so2.order), so2.bip, opt.tol_neg);
            std::vector<Real> now;
            for (std::size_t j : sp2.vn_pairs) now.push_back(sp2.nu_tilde[j]);
            for (const auto& p : pending) {
                bool found = false;
                for (const auto& v : now)
                    if (abs(v - p) <= loose) found = true;
                if (!found) rep.alignment_held = false;
            }
            if (now.size() > pending.size()) {
                rep.additional_cores = true;
                break;
            }
        }
        ++rep.rounds;
    }

    if (cur.rows() > 0) {
        SideOrder so = side_first(side);
        rep.final_halo = permute_modes(cur, so.order);
        rep.final_halo_bip = so.bip;
        Matrix halo1 = back * cur * back.transpose();
        puresum += halo1;
    } else {
        rep.final_halo = CovMatrix();
        rep.final_halo_bip = {0, 0};
    }
    rep.pure_state = (rep.sigma_prime - ysum).symmetrized();
    Matrix rec = ysum + puresum;
    rep.reconstruction_residual = max_abs_diff(rec, rep.sigma_prime) / max(Real(1), rep.sigma_prime.max_abs());
    if (rep.reconstruction_residual > loose)
        throw NumericalFailure("mnf_run: noise and pure parts do not reconstruct sigma' (" + rep.reconstruction_residual.str(4) + ")");
    Matrix fi = symplectic_inverse(rep.first_frame);
    rep.pure_state_input = (fi * rep.pure_state * fi.transpose()).symmetrized();

    bool nic = rep.filtrations.size() == rep.n_minus && pending.empty() && !rep.additional_cores && !halo_npt &&
               rep.alignment_held && rep.halo_status == HaloStatus::Separable;
    rep.label = nic ? Label::NIC : Label::NsolOnly;
    return rep;
}

NicConditions nic_conditions(const CovMatrix& sigma_p, const CovMatrix& sigma_m, const Bipartition& bip, const Real& tol)
{
    validate_cm(sigma_p, "nic_conditions");
    validate_cm(sigma_m, "nic_conditions");
    if (sigma_p.rows() != sigma_m.rows() || sigma_m.rows() != 2 * bip.n_modes())
        throw InvalidInput("nic_conditions: dimension mismatch");
    const int digits = std::min(sigma_p.digits(), sigma_m.digits());
    Real t = tol.sign() > 0 ? tol : half_precision_tol(digits);
    if (!psd_check(sigma_m - sigma_p, t).psd) throw InvalidInput("nic_conditions: sigma_m - sigma_p is not positive semidefinite");

    NicConditions out{true, true, true, true, Real::zero(digits), Real::zero(digits)};
    const std::size_t k = 2 * pt_spectrum(sigma_m, bip).n_minus();
    if (k == 0) return out;
    const std::size_t dim = sigma_m.rows();
    Matrix w = omega(bip.n_modes(), digits);
    Matrix wt = w.transpose();
    CovMatrix tp = partial_transpose(sigma_p, bip), tm = partial_transpose(sigma_m, bip);
    Matrix hp = matrix_sqrt(tp), hm = matrix_sqrt(tm);
    Matrix hpi = matrix_inv_sqrt(tp), hmi = matrix_inv_sqrt(tm);

    // V_N eigenpairs of -W s~ W s~' through the similar symmetric form
    struct Part {
        Vector values; // ascending
        Matrix vectors;
    };
    auto lowest = [&](const Matrix& h, const Matrix& hinv, const Matrix& mid) {
        SymEig e = sym_eig((h * wt * mid * w * h).symmetrized());
        Part p{{}, Matrix(dim, k, digits)};
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t src = dim - 1 - j;
            p.values.push_back(e.values[src]);
            Vector v = hinv * e.vectors.col(src);
            p.vectors.set_col(j, v);
        }
        return p;
    };
    Part pp = lowest(hp, hpi, tp), mm = lowest(hm, hmi, tm), mp = lowest(hp, hpi, tm);
    mm.vectors = w * tm * mm.vectors;

    auto spectra = [&](const Part& a, const Part& b) {
        Real worst = Real::zero(digits);
        for (std::size_t j = 0; j < k; ++j) worst = max(worst, abs(a.values[j] - b.values[j]) / max(Real(1), abs(a.values[j])));
        out.worst_spectrum = max(out.worst_spectrum, worst);
        return worst <= t;
    };
    auto orthonormal = [&](const Matrix& m, std::size_t c0, std::size_t nc) {
        std::vector<Vector> q;
        for (std::size_t j = c0; j < c0 + nc; ++j) {
            Vector v = m.col(j);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : q) v = axpy(v, -dot(u, v), u);
            q.push_back(scaled(v, Real(1) / norm(v)));
        }
        return q;
    };
    // principal angles per cluster of (numerically) equal eigenvalues of a
    auto vectors = [&](const Part& a, const Part& b) {
        Real worst = Real::zero(digits);
        for (std::size_t j0 = 0; j0 < k;) {
            std::size_t j1 = j0 + 2;
            while (j1 < k && abs(a.values[j1] - a.values[j0]) <= t * max(Real(1), abs(a.values[j0]))) j1 += 2;
            std::vector<Vector> qa = orthonormal(a.vectors, j0, j1 - j0), qb = orthonormal(b.vectors, j0, j1 - j0);
            Matrix g(qa.size(), qb.size(), digits);
            for (std::size_t i = 0; i < qa.size(); ++i)
                for (std::size_t j = 0; j < qb.size(); ++j) g(i, j) = dot(qa[i], qb[j]);
            Real smin = sqrt(max(Real(0), sym_eig((g.transpose() * g).symmetrized()).values.back()));
            worst = max(worst, Real(1) - smin);
            j0 = j1;
        }
        out.worst_angle = max(out.worst_angle, worst);
        return worst <= t;
    };
    out.spectrum_mm = spectra(pp, mm);
    out.vectors_mm = vectors(pp, mm);
    out.spectrum_mp = spectra(pp, mp);
    out.vectors_mp = vectors(pp, mp);
    return out;
}

} // namespace gaussent
