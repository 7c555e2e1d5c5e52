#include "gaussent/matrix.hpp"

#include "gaussent/errors.hpp"

#include <algorithm>
#include <sstream>

namespace gaussent {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidInput(std::string(what) + ": shape mismatch");
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, int digits) : rows_(rows), cols_(cols)
{
    data_.reserve(rows * cols);
    for (std::size_t k = 0; k < rows * cols; ++k) data_.push_back(Real::zero(digits));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InvalidInput("ragged initializer");
        for (double v : r) data_.emplace_back(v);
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
}

Matrix Matrix::identity(std::size_t n, int digits)
{
    Matrix m(n, n, digits);
    for (std::size_t i = 0; i < n; ++i) mpfr_set_ui(m(i, i).raw(), 1, MPFR_RNDN);
    return m;
}

Matrix Matrix::diagonal(const Vector& d)
{
    Matrix m(d.size(), d.size(), d.empty() ? default_digits() : d[0].digits());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

int Matrix::digits() const
{
    if (data_.empty()) return default_digits();
    long b = data_[0].bits();
    for (const auto& x : data_) b = std::min(b, x.bits());
    return bits_to_digits(b);
}

void Matrix::set_digits(int digits)
{
    long b = digits_to_bits(digits);
    for (auto& x : data_) x.set_bits(b);
}

Vector Matrix::row(std::size_t i) const
{
    return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

Vector Matrix::col(std::size_t j) const
{
    Vector v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
}

void Matrix::set_row(std::size_t i, const Vector& v)
{
    if (v.size() != cols_) throw InvalidInput("set_row: length mismatch");
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
}

void Matrix::set_col(std::size_t j, const Vector& v)
{
    if (v.size() != rows_) throw InvalidInput("set_col: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidInput("block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b)
{
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw InvalidInput("set_block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::select(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const
{
    Matrix b(ri.size(), ci.size());
    for (std::size_t i = 0; i < ri.size(); ++i)
        for (std::size_t j = 0; j < ci.size(); ++j) b(i, j) = (*this)(ri[i], ci[j]);
    return b;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::symmetrized() const
{
    if (!square()) throw InvalidInput("symmetrized: not square");
    Matrix s(*this);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j) {
            Real m = ((*this)(i, j) + (*this)(j, i)) / Real(2);
            s(i, j) = m;
            s(j, i) = m;
        }
    return s;
}

Real Matrix::trace() const
{
    Real t = Real::zero(digits());
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

Real Matrix::max_abs() const
{
    Real m = Real::zero(digits());
    for (const auto& x : data_)
        if (mpfr_cmpabs(x.raw(), m.raw()) > 0) m = abs(x);
    return m;
}

Real Matrix::frobenius() const
{
    Real s = Real::zero(digits());
    for (const auto& x : data_) mpfr_fma(s.raw(), x.raw(), x.raw(), s.raw(), MPFR_RNDN);
    return sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& o)
{
    require_same_shape(*this, o, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o)
{
    require_same_shape(*this, o, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(const Real& s)
{
    for (auto& x : data_) x *= s;
    return *this;
}

std::string Matrix::str(int sig_digits) const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << "  ";
            os << (*this)(i, j).str(sig_digits);
        }
        os << '\n';
    }
    return os.str();
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) throw InvalidInput("matrix product: shape mismatch");
    int digits = std::max(a.empty() ? 0 : a.digits(), b.empty() ? 0 : b.digits());
    if (digits == 0) digits = default_digits();
    Matrix c(a.rows(), b.cols(), digits);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Real& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                mpfr_fma(c(i, j).raw(), aik.raw(), b(k, j).raw(), c(i, j).raw(), MPFR_RNDN);
        }
    return c;
}

Matrix operator*(Matrix a, const Real& s) { return a *= s; }
Matrix operator*(const Real& s, Matrix a) { return a *= s; }

Vector operator*(const Matrix& a, const Vector& v)
{
    if (a.cols() != v.size()) throw InvalidInput("matrix-vector product: shape mismatch");
    Vector r;
    r.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Real s = Real::zero(a.digits());
        for (std::size_t j = 0; j < a.cols(); ++j) mpfr_fma(s.raw(), a(i, j).raw(), v[j].raw(), s.raw(), MPFR_RNDN);
        r.push_back(std::move(s));
    }
    return r;
}

Matrix direct_sum(const Matrix& a, const Matrix& b)
{
    int digits = std::max(a.empty() ? 0 : a.digits(), b.empty() ? 0 : b.digits());
    if (digits == 0) digits = default_digits();
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols(), digits);
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

Matrix outer(const Vector& u, const Vector& v)
{
    Matrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
    return m;
}

Real dot(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) throw InvalidInput("dot: length mismatch");
    Real s = Real::zero(a.empty() ? default_digits() : a[0].digits());
    for (std::size_t i = 0; i < a.size(); ++i) mpfr_fma(s.raw(), a[i].raw(), b[i].raw(), s.raw(), MPFR_RNDN);
    return s;
}

Real norm(const Vector& v) { return sqrt(dot(v, v)); }

Vector scaled(const Vector& v, const Real& s)
{
    Vector r(v);
    for (auto& x : r) x *= s;
    return r;
}

Vector axpy(const Vector& y, const Real& a, const Vector& x)
{
    if (x.size() != y.size()) throw InvalidInput("axpy: length mismatch");
    Vector r(y);
    for (std::size_t i = 0; i < r.size(); ++i) mpfr_fma(r[i].raw(), a.raw(), x[i].raw(), r[i].raw(), MPFR_RNDN);
    return r;
}

Real max_abs_diff(const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b, "max_abs_diff");
    return (a - b).max_abs();
}

} // namespace gaussent
