#include "gaussent/linalg.hpp"

#include "gaussent/errors.hpp"

#include <algorithm>
#include <numeric>

namespace gaussent {

namespace {

constexpr int max_sweeps = 80;
constexpr long guard_bits = 32;

// Scratch mpfr_t values, released on scope exit.
struct Scratch {
    explicit Scratch(long bits, int count) : n(count)
    {
        v = new mpfr_t[count];
        for (int i = 0; i < count; ++i) mpfr_init2(v[i], bits);
    }
    ~Scratch()
    {
        for (int i = 0; i < n; ++i) mpfr_clear(v[i]);
        delete[] v;
    }
    mpfr_ptr operator[](int i) { return v[i]; }
    int n;
    mpfr_t* v;
};

Real off_diagonal_norm(const Matrix& a)
{
    Real s = Real::zero(a.digits());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) mpfr_fma(s.raw(), a(i, j).raw(), a(i, j).raw(), s.raw(), MPFR_RNDN);
    return sqrt(s);
}

// one rotation zeroing a(p,q); a symmetric, stored in full
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q, Scratch& t)
{
    const std::size_t n = a.rows();
    mpfr_ptr theta = t[0], tt = t[1], c = t[2], s = t[3], tau = t[4], g = t[5], h = t[6], tmp = t[7];

    // theta = (a_qq - a_pp) / (2 a_pq)
    mpfr_sub(theta, a(q, q).raw(), a(p, p).raw(), MPFR_RNDN);
    mpfr_div(theta, theta, a(p, q).raw(), MPFR_RNDN);
    mpfr_div_2ui(theta, theta, 1, MPFR_RNDN);
    // t = sgn(theta) / (|theta| + sqrt(theta^2 + 1))
    mpfr_hypot(tmp, theta, t[8], MPFR_RNDN); // t[8] holds 1
    mpfr_abs(tt, theta, MPFR_RNDN);
    mpfr_add(tt, tt, tmp, MPFR_RNDN);
    mpfr_ui_div(tt, 1, tt, MPFR_RNDN);
    if (mpfr_sgn(theta) < 0) mpfr_neg(tt, tt, MPFR_RNDN);
    // c = 1/sqrt(t^2+1), s = t c, tau = s/(1+c)
    mpfr_hypot(c, tt, t[8], MPFR_RNDN);
    mpfr_ui_div(c, 1, c, MPFR_RNDN);
    mpfr_mul(s, tt, c, MPFR_RNDN);
    mpfr_add_ui(tau, c, 1, MPFR_RNDN);
    mpfr_div(tau, s, tau, MPFR_RNDN);

    // diagonal
    mpfr_mul(tmp, tt, a(p, q).raw(), MPFR_RNDN);
    mpfr_sub(a(p, p).raw(), a(p, p).raw(), tmp, MPFR_RNDN);
    mpfr_add(a(q, q).raw(), a(q, q).raw(), tmp, MPFR_RNDN);
    mpfr_set_zero(a(p, q).raw(), 1);
    mpfr_set_zero(a(q, p).raw(), 1);

    auto update = [&](mpfr_ptr x, mpfr_ptr y) {
        // x' = x - s (y + x tau), y' = y + s (x - y tau)
        mpfr_set(g, x, MPFR_RNDN);
        mpfr_set(h, y, MPFR_RNDN);
        mpfr_fma(tmp, g, tau, h, MPFR_RNDN);
        mpfr_mul(tmp, tmp, s, MPFR_RNDN);
        mpfr_sub(x, g, tmp, MPFR_RNDN);
        mpfr_mul(tmp, h, tau, MPFR_RNDN);
        mpfr_sub(tmp, g, tmp, MPFR_RNDN);
        mpfr_fma(y, s, tmp, h, MPFR_RNDN);
    };

    for (std::size_t r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        update(a(r, p).raw(), a(r, q).raw());
        mpfr_set(a(p, r).raw(), a(r, p).raw(), MPFR_RNDN);
        mpfr_set(a(q, r).raw(), a(r, q).raw(), MPFR_RNDN);
    }
    for (std::size_t r = 0; r < n; ++r) update(v(r, p).raw(), v(r, q).raw());
}

void fix_sign(Matrix& vecs, std::size_t j)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < vecs.rows(); ++i)
        if (mpfr_cmpabs(vecs(i, j).raw(), vecs(best, j).raw()) > 0) best = i;
    if (vecs(best, j).sign() < 0)
        for (std::size_t i = 0; i < vecs.rows(); ++i) mpfr_neg(vecs(i, j).raw(), vecs(i, j).raw(), MPFR_RNDN);
}

// Replace columns [j0, j1) by the canonical basis of their span.
void canonical_cluster_basis(Matrix& vecs, std::size_t j0, std::size_t j1)
{
    const std::size_t n = vecs.rows();
    const std::size_t k = j1 - j0;
    Matrix w = vecs.block(0, j0, n, k);
    // residual of e_i after projecting on span(w) and removing accepted vectors
    std::vector<Vector> res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = w * w.row(i);
    std::vector<bool> used(n, false);
    std::vector<Vector> basis;
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = n;
        Real best_norm;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            Real nr = dot(res[i], res[i]);
            if (best == n || nr > best_norm) {
                best = i;
                best_norm = nr;
            }
        }
        used[best] = true;
        Vector b = res[best];
        for (const auto& p : basis) b = axpy(b, -dot(p, b), p);
        b = scaled(b, Real(1) / norm(b));
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) res[i] = axpy(res[i], -dot(b, res[i]), b);
        basis.push_back(std::move(b));
    }
    for (std::size_t c = 0; c < k; ++c) vecs.set_col(j0 + c, basis[c]);
}

} // namespace

Real half_precision_tol(int digits) { return pow10(-(digits / 2), digits); }

void require_symmetric(const Matrix& m, const char* what)
{
    if (!m.square()) throw InvalidInput(std::string(what) + ": matrix not square");
    if (m.empty()) return;
    Real scale = max(Real(1), m.max_abs());
    Real tol = half_precision_tol(m.digits()) * scale;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (abs(m(i, j) - m(j, i)) > tol) throw InvalidInput(std::string(what) + ": matrix not symmetric");
}

SymEig sym_eig(const Matrix& m)
{
    require_symmetric(m, "sym_eig");
    const std::size_t n = m.rows();
    const int digits = m.empty() ? default_digits() : m.digits();
    const long work_bits = digits_to_bits(digits) + guard_bits;
    const int work_digits = bits_to_digits(work_bits);

    Matrix a = m.symmetrized();
    a.set_digits(work_digits);
    Matrix v = Matrix::identity(n, work_digits);

    Real mnorm = a.frobenius();
    Real target = pow10(-(digits - 8), work_digits) * mnorm;
    Real negligible = pow10(-(digits + 12), work_digits) * mnorm;

    Scratch t(work_bits, 9);
    mpfr_set_ui(t[8], 1, MPFR_RNDN);

    bool converged = n < 2 || mnorm.is_zero();
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (off_diagonal_norm(a) <= target) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (mpfr_cmpabs(a(p, q).raw(), negligible.raw()) <= 0) {
                    mpfr_set_zero(a(p, q).raw(), 1);
                    mpfr_set_zero(a(q, p).raw(), 1);
                    continue;
                }
                rotate(a, v, p, q, t);
            }
    }
    if (!converged && off_diagonal_norm(a) > target) throw NumericalFailure("sym_eig: Jacobi iteration did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymEig out;
    out.vectors = Matrix(n, n, work_digits);
    for (std::size_t k = 0; k < n; ++k) {
        out.values.push_back(a(order[k], order[k]));
        out.vectors.set_col(k, v.col(order[k]));
    }

    // degenerate clusters
    Real scale = Real(1);
    for (const auto& x : out.values) scale = max(scale, abs(x));
    Real ctol = half_precision_tol(digits) * scale;
    std::size_t j0 = 0;
    while (j0 < n) {
        std::size_t j1 = j0 + 1;
        while (j1 < n && out.values[j1 - 1] - out.values[j1] <= ctol) ++j1;
        if (j1 - j0 > 1) canonical_cluster_basis(out.vectors, j0, j1);
        j0 = j1;
    }
    for (std::size_t j = 0; j < n; ++j) fix_sign(out.vectors, j);

    out.vectors.set_digits(digits);
    for (auto& x : out.values) x.set_bits(digits_to_bits(digits));
    return out;
}

PsdResult psd_check(const Matrix& m, const Real& tol)
{
    if (m.empty()) return {true, Real(0)};
    Real t = tol.sign() > 0 ? tol : half_precision_tol(m.digits());
    SymEig e = sym_eig(m);
    Real lo = e.values.back();
    Real scale = max(Real(1), m.max_abs());
    return {lo >= -t * scale, lo};
}

Matrix pseudoinverse(const Matrix& sym, const Real& rank_tol)
{
    SymEig e = sym_eig(sym);
    const std::size_t n = sym.rows();
    Real top = Real(0);
    for (const auto& x : e.values) top = max(top, abs(x));
    Real cut = rank_tol * top;
    Matrix r(n, n, sym.digits());
    for (std::size_t k = 0; k < n; ++k) {
        if (abs(e.values[k]) <= cut || top.is_zero()) continue;
        Real inv = Real(1) / e.values[k];
        Vector u = e.vectors.col(k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mpfr_fma(r(i, j).raw(), u[i].raw(), (u[j] * inv).raw(), r(i, j).raw(), MPFR_RNDN);
    }
    return r.symmetrized();
}

namespace {

Matrix spectral_function(const Matrix& spd, bool inverse_root)
{
    SymEig e = sym_eig(spd);
    const std::size_t n = spd.rows();
    for (const auto& x : e.values)
        if (x.sign() <= 0) throw NumericalFailure("matrix square root: matrix not positive definite");
    Matrix r(n, n, spd.digits());
    for (std::size_t k = 0; k < n; ++k) {
        Real f = inverse_root ? Real(1) / sqrt(e.values[k]) : sqrt(e.values[k]);
        Vector u = e.vectors.col(k);
        for (std::size_t i = 0; i < n; ++i) {
            Real ui = u[i] * f;
            for (std::size_t j = 0; j < n; ++j) mpfr_fma(r(i, j).raw(), ui.raw(), u[j].raw(), r(i, j).raw(), MPFR_RNDN);
        }
    }
    return r.symmetrized();
}

} // namespace

Matrix matrix_sqrt(const Matrix& spd) { return spectral_function(spd, false); }
Matrix matrix_inv_sqrt(const Matrix& spd) { return spectral_function(spd, true); }

Matrix inverse(const Matrix& m)
{
    if (!m.square()) throw InvalidInput("inverse: matrix not square");
    const std::size_t n = m.rows();
    Matrix a = m;
    Matrix inv = Matrix::identity(n, m.digits());
    Real scale = m.max_abs();
    Real tiny = pow10(-(m.digits() - 4), m.digits()) * scale;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (mpfr_cmpabs(a(r, c).raw(), a(piv, c).raw()) > 0) piv = r;
        if (mpfr_cmpabs(a(piv, c).raw(), tiny.raw()) <= 0) throw NumericalFailure("inverse: matrix singular");
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                mpfr_swap(a(c, j).raw(), a(piv, j).raw());
                mpfr_swap(inv(c, j).raw(), inv(piv, j).raw());
            }
        Real d = Real(1) / a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= d;
            inv(c, j) *= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c).is_zero()) continue;
            Real f = -a(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                mpfr_fma(a(r, j).raw(), f.raw(), a(c, j).raw(), a(r, j).raw(), MPFR_RNDN);
                mpfr_fma(inv(r, j).raw(), f.raw(), inv(c, j).raw(), inv(r, j).raw(), MPFR_RNDN);
            }
        }
    }
    return inv;
}

Matrix cholesky(const Matrix& spd)
{
    require_symmetric(spd, "cholesky");
    const std::size_t n = spd.rows();
    Matrix l(n, n, spd.digits());
    for (std::size_t j = 0; j < n; ++j) {
        Real d = spd(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            mpfr_fms(d.raw(), l(j, k).raw(), l(j, k).raw(), d.raw(), MPFR_RNDN);
            mpfr_neg(d.raw(), d.raw(), MPFR_RNDN);
        }
        if (d.sign() <= 0) throw NumericalFailure("cholesky: matrix not positive definite");
        l(j, j) = sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            Real s = spd(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                mpfr_fms(s.raw(), l(i, k).raw(), l(j, k).raw(), s.raw(), MPFR_RNDN);
                mpfr_neg(s.raw(), s.raw(), MPFR_RNDN);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Matrix lower_triangular_inverse(const Matrix& l)
{
    const std::size_t n = l.rows();
    Matrix x(n, n, l.digits());
    for (std::size_t j = 0; j < n; ++j) {
        x(j, j) = Real(1) / l(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            Real s = Real::zero(l.digits());
            for (std::size_t k = j; k < i; ++k) mpfr_fma(s.raw(), l(i, k).raw(), x(k, j).raw(), s.raw(), MPFR_RNDN);
            x(i, j) = -s / l(i, i);
        }
    }
    return x;
}

Matrix hermitian_embedding(const Matrix& re, const Matrix& im)
{
    const std::size_t n = re.rows();
    Matrix e(2 * n, 2 * n, re.digits());
    e.set_block(0, 0, re);
    e.set_block(n, n, re);
    e.set_block(0, n, Real(-1) * im);
    e.set_block(n, 0, im);
    return e;
}

} // namespace gaussent
