#include "gaussent/real.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaussent {

namespace {

thread_local int tls_digits = 64;

long bits_of(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }

template <class F>
Real unary(const Real& x, F f)
{
    Real r = Real::with_bits(x.bits());
    f(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

} // namespace

long digits_to_bits(int digits)
{
    return static_cast<long>(std::ceil(digits * 3.321928094887362)) + 8;
}

int bits_to_digits(long bits)
{
    return static_cast<int>(std::floor((bits - 8) / 3.321928094887362 + 1e-9));
}

int default_digits() { return tls_digits; }

void set_default_digits(int digits)
{
    if (digits < 8) throw std::invalid_argument("precision below 8 digits");
    tls_digits = digits;
}

PrecisionGuard::PrecisionGuard(int digits) : saved_(tls_digits) { set_default_digits(digits); }
PrecisionGuard::~PrecisionGuard() { tls_digits = saved_; }

Real::Real()
{
    mpfr_init2(v_, digits_to_bits(tls_digits));
    mpfr_set_zero(v_, 1);
}

Real::Real(int v)
{
    mpfr_init2(v_, digits_to_bits(tls_digits));
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(long v)
{
    mpfr_init2(v_, digits_to_bits(tls_digits));
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(unsigned long v)
{
    mpfr_init2(v_, digits_to_bits(tls_digits));
    mpfr_set_ui(v_, v, MPFR_RNDN);
}

Real::Real(double v)
{
    mpfr_init2(v_, digits_to_bits(tls_digits));
    mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(std::string_view decimal) : Real(decimal, tls_digits) {}

Real::Real(std::string_view decimal, int digits)
{
    mpfr_init2(v_, digits_to_bits(digits));
    std::string s(decimal);
    // trim surrounding blanks
    auto b = s.find_first_not_of(" \t\n\r");
    auto e = s.find_last_not_of(" \t\n\r");
    s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    if (s.empty() || mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw std::invalid_argument("not a decimal number: '" + std::string(decimal) + "'");
    }
}

Real::Real(const Real& o)
{
    mpfr_init2(v_, o.bits());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept
{
    // steal the limbs, leave o as a valid tiny zero
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, MPFR_PREC_MIN);
}

Real& Real::operator=(const Real& o)
{
    if (this != &o) {
        if (bits() != o.bits()) mpfr_set_prec(v_, o.bits());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept
{
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real()
{
    mpfr_clear(v_);
}

Real Real::with_bits(long bits)
{
    Real r;
    mpfr_set_prec(r.v_, bits);
    mpfr_set_zero(r.v_, 1);
    return r;
}

Real Real::zero(int digits) { return with_bits(digits_to_bits(digits)); }

Real Real::pi(int digits)
{
    Real r = zero(digits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::epsilon(int digits) { return pow10(-digits, digits); }

void Real::set_bits(long b)
{
    mpfr_prec_round(v_, b, MPFR_RNDN);
}

std::string Real::str(int sig_digits) const
{
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
    int n = sig_digits > 0 ? sig_digits : digits();
    std::vector<char> buf(n + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", n - 1, v_);
    return std::string(buf.data());
}

std::string Real::fixed(int decimals) const
{
    int len = mpfr_snprintf(nullptr, 0, "%.*Rf", decimals, v_);
    std::vector<char> buf(len + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rf", decimals, v_);
    return std::string(buf.data());
}

Real& Real::operator+=(const Real& o)
{
    if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator-=(const Real& o)
{
    if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator*=(const Real& o)
{
    if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real& Real::operator/=(const Real& o)
{
    if (o.bits() > bits()) mpfr_prec_round(v_, o.bits(), MPFR_RNDN);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real Real::operator-() const
{
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

Real operator+(const Real& a, const Real& b)
{
    Real r = Real::with_bits(bits_of(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator-(const Real& a, const Real& b)
{
    Real r = Real::with_bits(bits_of(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator*(const Real& a, const Real& b)
{
    Real r = Real::with_bits(bits_of(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator/(const Real& a, const Real& b)
{
    Real r = Real::with_bits(bits_of(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b)
{
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log2(const Real& x) { return unary(x, mpfr_log2); }
Real log10(const Real& x) { return unary(x, mpfr_log10); }
Real sin(const Real& x) { return unary(x, mpfr_sin); }
Real cos(const Real& x) { return unary(x, mpfr_cos); }
Real sinh(const Real& x) { return unary(x, mpfr_sinh); }
Real cosh(const Real& x) { return unary(x, mpfr_cosh); }
Real tanh(const Real& x) { return unary(x, mpfr_tanh); }
Real asinh(const Real& x) { return unary(x, mpfr_asinh); }

Real atan2(const Real& y, const Real& x)
{
    Real r = Real::with_bits(bits_of(y, x));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, const Real& y)
{
    Real r = Real::with_bits(bits_of(x, y));
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

Real pow10(int e, int digits)
{
    Real r = Real::zero(digits);
    mpfr_ui_pow_ui(r.raw(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
    if (e < 0) mpfr_ui_div(r.raw(), 1, r.raw(), MPFR_RNDN);
    return r;
}

Real hypot(const Real& a, const Real& b)
{
    Real r = Real::with_bits(bits_of(a, b));
    mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

} // namespace gaussent
