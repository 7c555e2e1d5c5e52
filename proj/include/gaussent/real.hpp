#pragma once

#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace gaussent {

// Binary precision used for a given number of decimal digits.
long digits_to_bits(int digits);
int bits_to_digits(long bits);

// Working precision for newly constructed values on this thread.
int default_digits();
void set_default_digits(int digits);

class PrecisionGuard {
public:
    explicit PrecisionGuard(int digits);
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    int saved_;
};

// Arbitrary precision real backed by mpfr_t.
// Results of binary operations carry the larger operand precision.
class Real {
public:
    Real();
    Real(int v);
    Real(long v);
    Real(unsigned long v);
    Real(double v);
    explicit Real(std::string_view decimal);
    Real(std::string_view decimal, int digits);

    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    static Real with_bits(long bits);
    static Real zero(int digits);
    static Real pi(int digits);
    static Real epsilon(int digits); // 10^-digits

    long bits() const { return mpfr_get_prec(v_); }
    int digits() const { return bits_to_digits(bits()); }
    void set_bits(long bits); // keeps the value, rounded

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    std::string str(int sig_digits = 0) const; // scientific; 0 = full
    std::string fixed(int decimals) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real operator-() const;

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b);

private:
    mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real log10(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real tanh(const Real& x);
Real asinh(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, const Real& y);
Real pow10(int e, int digits);
Real hypot(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

} // namespace gaussent
