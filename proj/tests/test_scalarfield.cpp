#include "doctest.h"
#include "support.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/pt_analysis.hpp"
#include "gaussent/scalarfield.hpp"

using namespace gaussent;
using namespace testsupport;

TEST_CASE("closed form correlators against quadrature")
{
    const int digits = 40;
    PrecisionGuard g(digits);
    for (const char* ms : {"1e-10", "0.3", "2"}) {
        Real m(ms, digits);
        std::vector<Correlator> t = correlator_table(m, 6, digits);
        for (int dl : {0, 1, 2, 5}) {
            Correlator q = correlator_quadrature(dl, m, digits);
            CHECK(abs(t[dl].g_x - q.g_x) < Real(1e-30) * abs(t[0].g_x));
            CHECK(abs(t[dl].g_p - q.g_p) < Real(1e-30));
        }
    }
}

TEST_CASE("massless momentum correlator at zero offset is 4 / pi")
{
    const int digits = 40;
    PrecisionGuard g(digits);
    Correlator q = correlator_quadrature(0, Real(0), digits);
    CHECK(abs(q.g_p - Real(4) / Real::pi(digits)) < Real(1e-35));
    Correlator c = correlator(0, Real("1e-10", digits), digits);
    CHECK(abs(c.g_p - Real(4) / Real::pi(digits)) < Real(1e-18));
}

TEST_CASE("heavy mass limit decouples the sites")
{
    const int digits = 40;
    PrecisionGuard g(digits);
    Real m("1e4", digits);
    Correlator c0 = correlator(0, m, digits);
    CHECK(rel_err(c0.g_x, Real(1) / m) < 1e-7);
    CHECK(rel_err(c0.g_p, m) < 1e-7);
    CHECK(abs(correlator(3, m, digits).g_x) < Real(1e-20));
}

TEST_CASE("correlators are positive at zero offset and decay")
{
    const int digits = 40;
    PrecisionGuard g(digits);
    Real m("0.5", digits);
    std::vector<Correlator> t = correlator_table(m, 10, digits);
    CHECK(t[0].g_x > Real(0));
    CHECK(t[0].g_p > Real(0));
    for (int dl = 1; dl <= 10; ++dl) {
        CHECK(abs(t[dl].g_x) < abs(t[dl - 1].g_x));
        CHECK(abs(t[dl].g_p) < abs(t[dl - 1].g_p));
    }
    CHECK_THROWS_AS(correlator_table(Real(0), 3, digits), InvalidInput);
}

TEST_CASE("vacuum covariance matrix structure")
{
    RegionSpec rs;
    rs.d = 3;
    rs.r_tilde = 2;
    auto [s, bip] = vacuum_cm(rs);
    PrecisionGuard g(s.digits());
    CHECK(bip.n_A == 3);
    CHECK(bip.n_B == 3);
    CHECK(s.digits() >= default_field_precision(2));
    std::vector<int> site{0, 1, 2, 7, 6, 5};
    Real m(rs.mass, s.digits());
    std::vector<Correlator> t = correlator_table(m, 8, s.digits());
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            int dl = std::abs(site[a] - site[b]);
            CHECK(s(2 * a, 2 * b) == t[dl].g_x);
            CHECK(s(2 * a + 1, 2 * b + 1) == t[dl].g_p);
            CHECK(s(2 * a, 2 * b + 1) == Real(0));
        }
    // exchange symmetry, mode by mode
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (int q = 0; q < 2; ++q) {
                CHECK(s(2 * a + q, 2 * b + q) == s(2 * (a + 3) + q, 2 * (b + 3) + q));
                CHECK(s(2 * a + q, 2 * (b + 3) + q) == s(2 * b + q, 2 * (a + 3) + q));
            }
    CHECK(physicality(s).physical);
}

TEST_CASE("field states are physical and negativity decays with separation")
{
    Real prev;
    for (int r = 0; r <= 6; ++r) {
        RegionSpec rs;
        rs.d = 2;
        rs.r_tilde = r;
        auto [s, bip] = vacuum_cm(rs);
        PrecisionGuard g(s.digits());
        CHECK(physicality(s).physical);
        Real n = log_negativity(s, bip);
        if (r == 0) CHECK(n > Real(0));
        if (r > 0) CHECK(n <= prev);
        prev = n;
    }
    RegionSpec one;
    one.d = 1;
    auto [s1, b1] = vacuum_cm(one);
    PrecisionGuard g(s1.digits());
    CHECK(log_negativity(s1, b1) > Real(0));
    RegionSpec bad;
    bad.d = 0;
    CHECK_THROWS_AS(vacuum_cm(bad), InvalidInput);
}

TEST_CASE("default field precision")
{
    CHECK(default_field_precision(0) == 64);
    CHECK(default_field_precision(17) == 64);
    CHECK(default_field_precision(95) == 220);
}
