#include "gaussent/scalarfield.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/quadrature.hpp"

#include <map>
#include <mutex>

namespace gaussent {

namespace {

constexpr int guard_digits = 20;

struct CacheKey {
    std::string mass;
    int digits;
    bool operator<(const CacheKey& o) const { return digits != o.digits ? digits < o.digits : mass < o.mass; }
};

std::mutex cache_mutex;
std::map<CacheKey, std::vector<Correlator>> cache;

} // namespace

int default_field_precision(int r_tilde) { return std::max(64, 30 + 2 * r_tilde); }

std::vector<Correlator> correlator_table(const Real& m, int max_delta, int digits)
{
    if (m.sign() <= 0) throw InvalidInput("correlator: mass must be positive");
    if (max_delta < 0) throw InvalidInput("correlator: negative offset");
    CacheKey key{m.str(m.digits()), digits};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end() && static_cast<int>(it->second.size()) > max_delta)
            return std::vector<Correlator>(it->second.begin(), it->second.begin() + max_delta + 1);
    }

    const int wd = digits + guard_digits + max_delta / 10;
    PrecisionGuard guard(wd);
    Real mm = m;
    mm.set_bits(digits_to_bits(wd));
    Real m2 = mm * mm;
    Real q = sqrt(m2 + Real(4));
    Real k = Real(2) / q;
    Real pi = Real::pi(wd);

    // AGM for K(k) and E(k)
    Real a = Real(1), b = sqrt(Real(1) - k * k), c = k;
    Real s = c * c / Real(2);
    Real pw = Real("0.5");
    Real stop = pow10(-(wd - 2), wd);
    for (int it = 0; abs(c) > stop; ++it) {
        if (it > 200) throw NumericalFailure("correlator: AGM did not converge");
        Real an = (a + b) / Real(2);
        Real bn = sqrt(a * b);
        c = (a - b) / Real(2);
        a = an;
        b = bn;
        pw *= Real(2);
        s += pw * c * c;
    }
    Real kk = pi / (Real(2) * a);
    Real ee = kk * (Real(1) - s);

    std::vector<Real> in(max_delta + 3);
    in[0] = Real(2) * kk / (pi * q);
    Real j0 = Real(2) * q * ee / pi;
    in[1] = ((m2 + Real(2)) * in[0] - j0) / Real(2);
    Real half = Real("0.5");
    for (int d = 1; d + 1 < static_cast<int>(in.size()); ++d) {
        Real dd = Real(d);
        in[d + 1] = (dd * (m2 + Real(2)) * in[d] - (dd - half) * in[d - 1]) / (dd + half);
    }

    std::vector<Correlator> out;
    for (int d = 0; d <= max_delta; ++d) {
        const Real& prev = d > 0 ? in[d - 1] : in[1];
        Real gp = (m2 + Real(2)) * in[d] - in[d + 1] - prev;
        Real gx = in[d];
        gx.set_bits(digits_to_bits(digits));
        gp.set_bits(digits_to_bits(digits));
        out.push_back({gx, gp});
    }
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto& slot = cache[key];
        if (slot.size() < out.size()) slot = out;
    }
    return out;
}

Correlator correlator(int delta, const Real& m, int digits)
{
    if (delta < 0) delta = -delta;
    return correlator_table(m, delta, digits)[delta];
}

Correlator correlator_quadrature(int delta, const Real& m, int digits)
{
    if (m.sign() < 0) throw InvalidInput("correlator_quadrature: negative mass");
    if (delta < 0) delta = -delta;
    const int wd = digits + 10;
    PrecisionGuard guard(wd);
    Real mm = m;
    mm.set_bits(digits_to_bits(wd));
    Real m2 = mm * mm;
    Real dl = Real(delta);
    Real pi = Real::pi(wd);
    Real kcut = Real("1e-3");
    auto omega_k = [&](const Real& kx) {
        Real sh = sin(kx / Real(2));
        return sqrt(m2 + Real(4) * sh * sh);
    };

    Real gx, gp;
    if (mm.is_zero()) {
        gx = Real(0); // divergent, not defined
        gp = tanh_sinh([&](const Real& kx) { return cos(kx * dl) * omega_k(kx); }, Real(0), pi, digits).value;
        gp /= pi;
        return {gx, gp};
    }
    Real umax = asinh(kcut / mm);
    auto fx_low = [&](const Real& u) {
        Real kx = mm * sinh(u);
        return cos(kx * dl) * mm * cosh(u) / omega_k(kx);
    };
    auto fp_low = [&](const Real& u) {
        Real kx = mm * sinh(u);
        return cos(kx * dl) * mm * cosh(u) * omega_k(kx);
    };
    gx = tanh_sinh(fx_low, Real(0), umax, digits).value;
    gx += tanh_sinh([&](const Real& kx) { return cos(kx * dl) / omega_k(kx); }, kcut, pi, digits).value;
    gp = tanh_sinh(fp_low, Real(0), umax, digits).value;
    gp += tanh_sinh([&](const Real& kx) { return cos(kx * dl) * omega_k(kx); }, kcut, pi, digits).value;
    gx /= pi;
    gp /= pi;
    gx.set_bits(digits_to_bits(digits));
    gp.set_bits(digits_to_bits(digits));
    return {gx, gp};
}

std::pair<CovMatrix, Bipartition> vacuum_cm(const RegionSpec& spec)
{
    if (spec.d < 1) throw InvalidInput("vacuum_cm: d must be at least 1");
    if (spec.r_tilde < 0) throw InvalidInput("vacuum_cm: separation must be non-negative");
    const int digits = spec.precision > 0 ? spec.precision : default_field_precision(spec.r_tilde);
    Real m(spec.mass, digits);
    if (m.sign() <= 0) throw InvalidInput("vacuum_cm: mass must be positive");
    const int d = spec.d;
    std::vector<int> site;
    for (int j = 0; j < d; ++j) site.push_back(j);
    for (int j = 0; j < d; ++j) site.push_back(2 * d + spec.r_tilde - 1 - j);
    std::vector<Correlator> g = correlator_table(m, 2 * d + spec.r_tilde, digits);
    const std::size_t n = 2 * d;
    CovMatrix s(2 * n, 2 * n, digits);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            int delta = std::abs(site[a] - site[b]);
            s(2 * a, 2 * b) = g[delta].g_x;
            s(2 * a + 1, 2 * b + 1) = g[delta].g_p;
        }
    return {s, Bipartition{static_cast<std::size_t>(d), static_cast<std::size_t>(d)}};
}

void clear_correlator_cache()
{
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.clear();
}

} // namespace gaussent
