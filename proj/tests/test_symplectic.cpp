#include "doctest.h"
#include "support.hpp"

#include "gaussent/errors.hpp"

using namespace gaussent;
using namespace testsupport;

TEST_CASE("omega and symplectic inverse")
{
    PrecisionGuard g(50);
    Matrix o = omega(2, 50);
    CHECK(o(0, 1) == Real(1));
    CHECK(o(1, 0) == Real(-1));
    std::mt19937_64 rng(5);
    Matrix s = random_symplectic(3, rng);
    CHECK(is_symplectic(s).ok);
    CHECK(max_abs_diff(symplectic_inverse(s) * s, Matrix::identity(6)) < Real(1e-40));
    CHECK_FALSE(is_symplectic(Matrix::diagonal({Real(2), Real(2)})).ok);
}

TEST_CASE("williamson of vacuum and thermal states is the identity")
{
    PrecisionGuard g(50);
    WilliamsonResult w = williamson(Matrix::identity(4));
    CHECK(max_abs_diff(w.S, Matrix::identity(4)) < Real(1e-40));
    WilliamsonResult t = williamson(Matrix::diagonal({Real(3), Real(3)}));
    CHECK(max_abs_diff(t.S, Matrix::identity(2)) < Real(1e-40));
    CHECK(abs(t.nu[0] - Real(3)) < Real(1e-40));
}

TEST_CASE("williamson of a two-mode squeezed vacuum")
{
    PrecisionGuard g(50);
    Matrix s = tmsvs(Real("0.7"));
    WilliamsonResult w = williamson(s);
    for (const auto& nu : w.nu) CHECK(abs(nu - Real(1)) < Real(1e-40));
    CHECK(is_symplectic(w.S).ok);
}

TEST_CASE("williamson random states against the nonsymmetric oracle")
{
    PrecisionGuard g(64);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + trial % 5;
        Matrix sigma = random_cm(n, rng);
        WilliamsonResult w = williamson(sigma);
        CHECK(is_symplectic(w.S, Real(1e-50)).ok);
        Matrix d = w.S * sigma * w.S.transpose();
        std::vector<Real> dd;
        for (const auto& nu : w.nu) dd.push_back(nu);
        CHECK(max_abs_diff(d, thermal(dd)) < Real(1e-50));
        // round trip
        Matrix back = symplectic_inverse(w.S) * thermal(dd) * symplectic_inverse(w.S).transpose();
        CHECK(max_abs_diff(back, sigma) < Real(1e-50));
        std::vector<double> oracle = symplectic_spectrum_double(sigma);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(w.nu[k].to_double() - oracle[k]) < 1e-9);
        Vector se = symplectic_eigenvalues(sigma);
        for (std::size_t k = 0; k < n; ++k) CHECK(abs(se[k] - w.nu[k]) < Real(1e-50));
    }
}

TEST_CASE("williamson rejects indefinite input")
{
    CHECK_THROWS_AS(williamson(Matrix{{1, 2}, {2, 1}}), NumericalFailure);
}

TEST_CASE("physicality through both routes")
{
    PrecisionGuard g(50);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix sigma = random_cm(2, rng);
        CHECK(physicality(sigma).physical);
        CHECK(physicality_embedding(sigma).physical);
        Matrix squashed = sigma * Real("0.5");
        bool a = physicality(squashed).physical;
        bool b = physicality_embedding(squashed).physical;
        CHECK(a == b);
    }
    CHECK_FALSE(physicality(Matrix::diagonal({Real("0.5"), Real("0.5")})).physical);
    CHECK_FALSE(physicality_embedding(Matrix::diagonal({Real("0.5"), Real("0.5")})).physical);
    CHECK_THROWS_AS(require_physical(Matrix::diagonal({Real("0.5"), Real("0.5")}), "test"), UnphysicalState);
}

TEST_CASE("symplectic gram-schmidt")
{
    PrecisionGuard g(50);
    std::mt19937_64 rng(13);
    Matrix s = random_symplectic(3, rng);
    // first two rows of a symplectic matrix are a valid seed pair
    Matrix gs = symplectic_gram_schmidt({s.row(0), s.row(1)}, 3);
    CHECK(is_symplectic(gs).ok);
    CHECK(max_abs_diff(gs.block(0, 0, 2, 6), s.block(0, 0, 2, 6)) < Real(1e-40));
    // full seed set reproduces the matrix
    std::vector<Vector> all;
    for (std::size_t i = 0; i < 6; ++i) all.push_back(s.row(i));
    CHECK(max_abs_diff(symplectic_gram_schmidt(all, 3), s) < Real(1e-40));
    // empty seed set completes to the identity
    CHECK(max_abs_diff(symplectic_gram_schmidt({}, 2), Matrix::identity(4)) < Real(1e-40));
    // degenerate seeds
    Vector x = s.row(0);
    CHECK_THROWS_AS(symplectic_gram_schmidt({x, x}, 3), NumericalFailure);
}

TEST_CASE("mode permutations and partial trace")
{
    PrecisionGuard g(40);
    std::mt19937_64 rng(17);
    Matrix sigma = random_cm(3, rng);
    Matrix p = mode_permutation({2, 0, 1});
    CHECK(max_abs_diff(permute_modes(sigma, {2, 0, 1}), p * sigma * p.transpose()) == Real(0));
    Matrix r = partial_trace(sigma, {1});
    CHECK(r(0, 0) == sigma(2, 2));
    CHECK_THROWS_AS(permute_modes(sigma, {0, 0, 1}), InvalidInput);
}
