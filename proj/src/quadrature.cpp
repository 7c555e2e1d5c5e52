#include "gaussent/quadrature.hpp"

#include "gaussent/errors.hpp"

namespace gaussent {

namespace {

// sum over nodes t = j h with j of the given parity (all if step 1)
Real level_sum(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, const Real& h, long start, long step,
               const Real& wmin, long& evals)
{
    Real half_pi = Real::pi(a.digits()) / Real(2);
    Real len = b - a;
    Real s = Real::zero(a.digits());
    auto node = [&](const Real& t) -> bool {
        Real u = half_pi * sinh(t);
        Real ch = cosh(u);
        Real w = len / Real(2) * half_pi * cosh(t) / (ch * ch);
        if (w < wmin) return false;
        // x measured from the nearer endpoint
        Real x = (u.sign() < 0) ? a + len / (Real(1) + exp(Real(-2) * u)) : b - len / (Real(1) + exp(Real(2) * u));
        if (x <= a || x >= b) return false;
        s += w * f(x);
        ++evals;
        return true;
    };
    if (start == 0) node(Real::zero(a.digits()));
    for (long j = (start == 0 ? step : start);; j += step) {
        bool left = node(h * Real(-j));
        bool right = node(h * Real(j));
        if (!left && !right) break;
    }
    return s;
}

} // namespace

QuadratureResult tanh_sinh(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, int digits, int max_level)
{
    PrecisionGuard guard(digits + 10);
    Real lo = a, hi = b;
    lo.set_bits(digits_to_bits(digits + 10));
    hi.set_bits(digits_to_bits(digits + 10));
    Real wmin = pow10(-(digits + 20), digits + 10);
    Real tol = pow10(-digits, digits + 10);
    long evals = 0;

    Real h = Real(1);
    Real sum = level_sum(f, lo, hi, h, 0, 1, wmin, evals);
    Real est = sum * h;
    Real prev = est;
    for (int level = 1; level <= max_level; ++level) {
        h /= Real(2);
        sum += level_sum(f, lo, hi, h, 1, 2, wmin, evals);
        est = sum * h;
        Real diff = abs(est - prev);
        if (level >= 3 && diff <= tol * max(Real(1), abs(est))) return {est, diff, level, evals};
        prev = est;
    }
    throw NumericalFailure("tanh_sinh: target precision not reached");
}

} // namespace gaussent
