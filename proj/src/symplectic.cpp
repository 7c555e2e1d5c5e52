#include "gaussent/symplectic.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace gaussent {

namespace {

std::size_t modes_of(const Matrix& m, const char* what)
{
    if (!m.square() || m.rows() % 2 != 0) throw InvalidInput(std::string(what) + ": expected a 2n x 2n matrix");
    return m.rows() / 2;
}

// rotate the pair (a, b) to maximise the x weight of a, then fix the overall sign
void canonical_pair_gauge(Vector& a, Vector& b)
{
    Real wa = Real::zero(a[0].digits()), wb = wa, wc = wa;
    for (std::size_t k = 0; k < a.size(); k += 2) {
        wa += a[k] * a[k];
        wb += b[k] * b[k];
        wc += a[k] * b[k];
    }
    Real theta = atan2(Real(2) * wc, wa - wb) / Real(2);
    if (!theta.is_zero()) {
        Real c = cos(theta), s = sin(theta);
        Vector na(a.size()), nb(b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            na[k] = c * a[k] + s * b[k];
            nb[k] = c * b[k] - s * a[k];
        }
        a = std::move(na);
        b = std::move(nb);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < a.size(); ++k)
        if (mpfr_cmpabs(a[k].raw(), a[best].raw()) > 0) best = k;
    if (a[best].sign() < 0) {
        for (auto& x : a) x = -x;
        for (auto& x : b) x = -x;
    }
}

struct SymplecticBasis {
    std::vector<Vector> x, p;

    Vector project(Vector w) const
    {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < x.size(); ++i) {
                Real wp = symplectic_product(w, p[i]);
                Real wx = symplectic_product(w, x[i]);
                w = axpy(w, -wp, x[i]);
                w = axpy(w, wx, p[i]);
            }
        return w;
    }

    // false if the pair is symplectically degenerate
    bool accept(Vector a, Vector b, const Real& tol)
    {
        a = project(std::move(a));
        b = project(std::move(b));
        Real c = symplectic_product(a, b);
        if (abs(c) <= tol * norm(a) * norm(b) || c.is_zero()) return false;
        Real f = Real(1) / sqrt(abs(c));
        a = scaled(a, f);
        b = scaled(b, c.sign() < 0 ? -f : f);
        x.push_back(std::move(a));
        p.push_back(std::move(b));
        return true;
    }
};

} // namespace

Matrix omega(std::size_t n_modes, int digits)
{
    Matrix o(2 * n_modes, 2 * n_modes, digits);
    for (std::size_t k = 0; k < n_modes; ++k) {
        mpfr_set_si(o(2 * k, 2 * k + 1).raw(), 1, MPFR_RNDN);
        mpfr_set_si(o(2 * k + 1, 2 * k).raw(), -1, MPFR_RNDN);
    }
    return o;
}

Matrix lambda_b(const Bipartition& bip, int digits)
{
    Matrix l = Matrix::identity(2 * bip.n_modes(), digits);
    for (std::size_t k = bip.n_A; k < bip.n_modes(); ++k) mpfr_set_si(l(2 * k + 1, 2 * k + 1).raw(), -1, MPFR_RNDN);
    return l;
}

Real symplectic_product(const Vector& w, const Vector& v)
{
    if (w.size() != v.size() || w.size() % 2 != 0) throw InvalidInput("symplectic_product: length mismatch");
    Real s = Real::zero(w.empty() ? default_digits() : w[0].digits());
    for (std::size_t k = 0; k < w.size(); k += 2) {
        mpfr_fma(s.raw(), w[k].raw(), v[k + 1].raw(), s.raw(), MPFR_RNDN);
        Real t = w[k + 1] * v[k];
        s -= t;
    }
    return s;
}

SymplecticCheck is_symplectic(const Matrix& s, const Real& tol)
{
    std::size_t n = modes_of(s, "is_symplectic");
    Matrix o = omega(n, s.digits());
    Real r = max_abs_diff(s * o * s.transpose(), o);
    Real t = tol.sign() > 0 ? tol : half_precision_tol(s.digits());
    Real scale = max(Real(1), s.max_abs());
    return {r <= t * scale * scale, r};
}

Matrix symplectic_inverse(const Matrix& s)
{
    std::size_t n = modes_of(s, "symplectic_inverse");
    Matrix o = omega(n, s.digits());
    return Real(-1) * (o * s.transpose() * o);
}

void validate_cm(const CovMatrix& sigma, const char* what)
{
    modes_of(sigma, what);
    require_symmetric(sigma, what);
}

Vector symplectic_eigenvalues(const CovMatrix& sigma)
{
    std::size_t n = modes_of(sigma, "symplectic_eigenvalues");
    Matrix l = cholesky(sigma.symmetrized());
    Matrix o = omega(n, sigma.digits());
    // L^T Omega^T sigma Omega L is similar to -Omega sigma Omega sigma
    Matrix m = (l.transpose() * o.transpose() * sigma * o * l).symmetrized();
    SymEig e = sym_eig(m);
    Vector nu;
    for (std::size_t k = 0; k < n; ++k) {
        Real a = e.values[2 * k], b = e.values[2 * k + 1];
        nu.push_back(sqrt(max(Real(0), (a + b) / Real(2))));
    }
    return nu;
}

Physicality physicality(const CovMatrix& sigma, const Real& tol)
{
    validate_cm(sigma, "physicality");
    Real t = tol.sign() > 0 ? tol : half_precision_tol(sigma.digits());
    Vector nu;
    try {
        nu = symplectic_eigenvalues(sigma);
    } catch (const NumericalFailure&) {
        return {false, Real(0)};
    }
    Real lo = nu.empty() ? Real(1) : nu.back();
    return {lo >= Real(1) - t, lo};
}

Physicality physicality_embedding(const CovMatrix& sigma, const Real& tol)
{
    std::size_t n = modes_of(sigma, "physicality_embedding");
    Real t = tol.sign() > 0 ? tol : half_precision_tol(sigma.digits());
    Matrix e = hermitian_embedding(sigma.symmetrized(), omega(n, sigma.digits()));
    SymEig s = sym_eig(e);
    Real lo = s.values.back();
    return {lo >= -t * max(Real(1), sigma.max_abs()), lo};
}

void require_physical(const CovMatrix& sigma, const char* what)
{
    Physicality p = physicality(sigma);
    if (!p.physical)
        throw UnphysicalState(std::string(what) + ": covariance matrix violates the uncertainty relation (min symplectic eigenvalue " +
                              p.min_symplectic_eigenvalue.str(10) + ")");
}

WilliamsonResult williamson(const Matrix& sigma)
{
    std::size_t n = modes_of(sigma, "williamson");
    const int digits = sigma.digits();
    validate_cm(sigma, "williamson");
    Matrix l;
    try {
        l = cholesky(sigma.symmetrized());
    } catch (const NumericalFailure&) {
        throw NumericalFailure("williamson: matrix not positive definite");
    }
    Matrix linv = lower_triangular_inverse(l);
    Matrix o = omega(n, digits);
    Matrix b = linv * o * linv.transpose(); // antisymmetric
    Matrix k = (b.transpose() * b).symmetrized(); // eigenvalues 1/nu^2, doubly degenerate
    SymEig e = sym_eig(k);

    Real scale = Real(1);
    for (const auto& x : e.values) scale = max(scale, abs(x));
    Real ctol = half_precision_tol(digits) * scale;

    struct Pair {
        Real nu;
        Vector u, v;
        std::size_t cluster;
    };
    std::vector<Pair> pairs;
    std::size_t j0 = 0;
    while (j0 < 2 * n) {
        std::size_t j1 = j0 + 1;
        while (j1 < 2 * n && e.values[j1 - 1] - e.values[j1] <= ctol) ++j1;
        if ((j1 - j0) % 2 != 0) throw NumericalFailure("williamson: unpaired eigenvalue of the normal-form matrix");
        std::vector<Vector> rem;
        for (std::size_t j = j0; j < j1; ++j) rem.push_back(e.vectors.col(j));
        while (!rem.empty()) {
            Vector u = rem.front();
            Real mu = dot(u, k * u);
            Real nu = Real(1) / sqrt(mu);
            Vector v = scaled(b * u, -nu);
            v = axpy(v, -dot(u, v), u);
            v = scaled(v, Real(1) / norm(v));
            pairs.push_back({nu, u, v, j0});
            // remove span{u, v} and drop the two weakest directions
            std::vector<std::pair<Real, Vector>> proj;
            for (std::size_t i = 1; i < rem.size(); ++i) {
                Vector w = rem[i];
                for (int pass = 0; pass < 2; ++pass) {
                    w = axpy(w, -dot(u, w), u);
                    w = axpy(w, -dot(v, w), v);
                }
                Real nw = norm(w);
                proj.emplace_back(nw, std::move(w));
            }
            std::vector<std::size_t> idx(proj.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t c) { return proj[a].first > proj[c].first; });
            std::size_t keep = proj.size() >= 1 ? proj.size() - 1 : 0;
            std::vector<std::size_t> kept(idx.begin(), idx.begin() + keep);
            std::sort(kept.begin(), kept.end());
            std::vector<Vector> next;
            for (std::size_t i : kept) {
                Vector w = proj[i].second;
                for (const auto& q : next) w = axpy(w, -dot(q, w), q);
                next.push_back(scaled(w, Real(1) / norm(w)));
            }
            rem = std::move(next);
        }
        j0 = j1;
    }

    // descending nu: reverse the cluster order, keep the order inside a cluster
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.cluster > b.cluster; });
    WilliamsonResult out;
    out.S = Matrix(2 * n, 2 * n, digits);
    Matrix linv_t = linv.transpose(); // rows of S are sqrt(nu) u^T L^{-1}
    for (std::size_t j = 0; j < n; ++j) {
        Real sq = sqrt(pairs[j].nu);
        Vector a = scaled(linv_t * pairs[j].u, sq);
        Vector c = scaled(linv_t * pairs[j].v, sq);
        canonical_pair_gauge(a, c);
        out.S.set_row(2 * j, a);
        out.S.set_row(2 * j + 1, c);
        out.nu.push_back(pairs[j].nu);
    }

    // consistency
    Matrix d = out.S * sigma * out.S.transpose();
    Real tol = half_precision_tol(digits);
    Real sc = max(Real(1), sigma.max_abs());
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) {
            Real target = (i == j) ? out.nu[i / 2] : Real(0);
            if (abs(d(i, j) - target) > tol * sc) throw NumericalFailure("williamson: S sigma S^T is not diagonal");
        }
    if (!is_symplectic(out.S).ok) throw NumericalFailure("williamson: result is not symplectic");
    return out;
}

SymplecticMap symplectic_gram_schmidt(const std::vector<Vector>& seeds, std::size_t n_modes, const std::vector<Vector>& candidates)
{
    if (seeds.size() % 2 != 0) throw InvalidInput("symplectic_gram_schmidt: seeds must come in pairs");
    if (candidates.size() % 2 != 0) throw InvalidInput("symplectic_gram_schmidt: candidates must come in pairs");
    if (seeds.size() > 2 * n_modes) throw InvalidInput("symplectic_gram_schmidt: too many seeds");
    for (const auto& s : seeds)
        if (s.size() != 2 * n_modes) throw InvalidInput("symplectic_gram_schmidt: seed length mismatch");
    int digits = seeds.empty() ? (candidates.empty() ? default_digits() : candidates[0][0].digits()) : seeds[0][0].digits();
    Real tol = half_precision_tol(digits);

    SymplecticBasis basis;
    for (std::size_t i = 0; i < seeds.size(); i += 2)
        if (!basis.accept(seeds[i], seeds[i + 1], tol))
            throw NumericalFailure("symplectic_gram_schmidt: seed pair " + std::to_string(i / 2) + " is symplectically degenerate");

    for (std::size_t i = 0; i + 1 < candidates.size() && basis.x.size() < n_modes; i += 2) {
        if (candidates[i].size() != 2 * n_modes) throw InvalidInput("symplectic_gram_schmidt: candidate length mismatch");
        basis.accept(candidates[i], candidates[i + 1], tol);
    }

    // unit-vector completion
    auto unit = [&](std::size_t i) {
        Vector e(2 * n_modes, Real::zero(digits));
        mpfr_set_ui(e[i].raw(), 1, MPFR_RNDN);
        return e;
    };
    for (std::size_t i = 0; i < 2 * n_modes && basis.x.size() < n_modes; ++i) {
        Vector w = basis.project(unit(i));
        if (norm(w) <= tol) continue;
        std::size_t best = 2 * n_modes;
        Real best_c = Real(0);
        for (std::size_t j = i + 1; j < 2 * n_modes; ++j) {
            Real c = abs(symplectic_product(w, basis.project(unit(j))));
            if (c > best_c) {
                best_c = c;
                best = j;
            }
        }
        if (best == 2 * n_modes || best_c <= tol) continue;
        basis.accept(unit(i), unit(best), tol);
    }
    if (basis.x.size() != n_modes) throw NumericalFailure("symplectic_gram_schmidt: could not complete the basis");

    SymplecticMap s(2 * n_modes, 2 * n_modes, digits);
    for (std::size_t k = 0; k < n_modes; ++k) {
        s.set_row(2 * k, basis.x[k]);
        s.set_row(2 * k + 1, basis.p[k]);
    }
    if (!is_symplectic(s).ok) throw NumericalFailure("symplectic_gram_schmidt: result is not symplectic");
    return s;
}

CovMatrix partial_trace(const CovMatrix& sigma, const std::vector<std::size_t>& keep_modes)
{
    std::size_t n = modes_of(sigma, "partial_trace");
    std::vector<std::size_t> idx;
    for (std::size_t m : keep_modes) {
        if (m >= n) throw InvalidInput("partial_trace: mode index out of range");
        idx.push_back(2 * m);
        idx.push_back(2 * m + 1);
    }
    return sigma.select(idx);
}

Matrix mode_permutation(const std::vector<std::size_t>& perm)
{
    std::size_t n = perm.size();
    std::vector<bool> seen(n, false);
    for (std::size_t m : perm) {
        if (m >= n || seen[m]) throw InvalidInput("mode_permutation: not a permutation");
        seen[m] = true;
    }
    Matrix p(2 * n, 2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        p(2 * k, 2 * perm[k]) = Real(1);
        p(2 * k + 1, 2 * perm[k] + 1) = Real(1);
    }
    return p;
}

CovMatrix permute_modes(const CovMatrix& sigma, const std::vector<std::size_t>& perm)
{
    std::size_t n = modes_of(sigma, "permute_modes");
    if (perm.size() != n) throw InvalidInput("permute_modes: permutation length mismatch");
    std::vector<std::size_t> idx;
    for (std::size_t m : perm) {
        idx.push_back(2 * m);
        idx.push_back(2 * m + 1);
    }
    mode_permutation(perm); // validates
    return sigma.select(idx);
}

} // namespace gaussent
