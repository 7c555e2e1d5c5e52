#pragma once

#include "mnf_states.hpp"

#include "gaussent/classify.hpp"
#include "gaussent/linalg.hpp"
#include "gaussent/mnf.hpp"

#include <functional>
#include <string>

namespace testsupport {

struct SuiteResult {
    int cases = 0;
    int failures = 0;
    double worst = 0; // largest residual over the tolerance, <= 1 passes
    std::string first_failure;

    void record(bool ok, double ratio, const std::string& what)
    {
        ++cases;
        worst = std::max(worst, ratio);
        if (!ok) {
            if (!failures) first_failure = what;
            ++failures;
        }
    }
    void fail(const std::string& what) { record(false, 0, what); }
    bool passed() const { return failures == 0 && cases > 0; }
};

inline double ratio(const Real& value, const Real& tol) { return (value / tol).to_double(); }

struct RandomCoreState {
    Matrix sigma;
    Bipartition bip;
    std::size_t cores;
};

// scrambled noisy cores: k cores, halo of up to two modes per side
inline RandomCoreState random_core_state(std::mt19937_64& rng, std::size_t k_min, std::size_t k_max)
{
    std::size_t k = k_min + rng() % (k_max - k_min + 1);
    std::vector<Real> r, ha, hb;
    for (std::size_t c = 0; c < k; ++c) r.push_back(uniform(rng, 0.1, 1.0));
    std::size_t na = rng() % 3, nb = rng() % 3;
    if (k + na > 4) na = 4 - k;
    if (k + nb > 4) nb = 4 - k;
    for (std::size_t h = 0; h < na; ++h) ha.push_back(uniform(rng, 1.0, 2.5));
    for (std::size_t h = 0; h < nb; ++h) hb.push_back(uniform(rng, 1.0, 2.5));
    int rank = 1 + static_cast<int>(rng() % 2);
    Matrix s = noisy_core_state(r, ha, hb, rng, std::uniform_real_distribution<double>(0.0, 1.0)(rng), rank);
    Bipartition bip{k + na, k + nb};
    Matrix loc = random_local_symplectic(bip, rng, 0.5);
    return {(loc * s * loc.transpose()).symmetrized(), bip, k};
}

// (a) symplecticity and Williamson round trip
inline SuiteResult suite_williamson(int cases, int digits, unsigned seed)
{
    PrecisionGuard g(digits);
    std::mt19937_64 rng(seed);
    Real tol = half_precision_tol(digits);
    SuiteResult res;
    for (int i = 0; i < cases; ++i) {
        std::size_t n = 1 + i % 6;
        Matrix s = random_cm(n, rng);
        try {
            WilliamsonResult w = williamson(s);
            Real sym = is_symplectic(w.S, tol).residual / max(Real(1), w.S.max_abs() * w.S.max_abs());
            Vector d2;
            for (const auto& nu : w.nu) {
                d2.push_back(nu);
                d2.push_back(nu);
            }
            Real rt = max_abs_diff(w.S * s * w.S.transpose(), Matrix::diagonal(d2)) / max(Real(1), s.max_abs());
            Matrix si = symplectic_inverse(w.S);
            Real back = max_abs_diff(si * Matrix::diagonal(d2) * si.transpose(), s) / max(Real(1), s.max_abs());
            Real worst = max(sym, max(rt, back));
            res.record(worst <= tol, ratio(worst, tol), "case " + std::to_string(i));
        } catch (const std::exception& e) {
            res.fail("case " + std::to_string(i) + ": " + e.what());
        }
    }
    return res;
}

// (b) negativity under random local symplectics
inline SuiteResult suite_negativity_invariance(int cases, int digits, unsigned seed)
{
    PrecisionGuard g(digits);
    std::mt19937_64 rng(seed);
    Real tol = half_precision_tol(digits);
    SuiteResult res;
    for (int i = 0; i < cases; ++i) {
        std::size_t n = 2 + i % 5;
        Bipartition bip{1 + static_cast<std::size_t>(rng() % (n - 1)), 0};
        bip.n_B = n - bip.n_A;
        Matrix s = random_cm(n, rng, 1.6);
        Matrix loc = random_local_symplectic(bip, rng);
        Matrix t = (loc * s * loc.transpose()).symmetrized();
        try {
            Real a = log_negativity(s, bip), b = log_negativity(t, bip);
            Real dev = abs(a - b) / max(Real(1), a);
            res.record(dev <= tol, ratio(dev, tol), "case " + std::to_string(i));
        } catch (const std::exception& e) {
            res.fail("case " + std::to_string(i) + ": " + e.what());
        }
    }
    return res;
}

struct MnfSample {
    Matrix sigma;
    Bipartition bip;
    MnfReport report;
};

// (c) Y_f PSD and reconstruction of sigma'
inline SuiteResult suite_noise_reconstruction(int cases, int digits, unsigned seed, std::vector<MnfSample>* keep = nullptr)
{
    PrecisionGuard g(digits);
    std::mt19937_64 rng(seed);
    Real tol = half_precision_tol(digits);
    SuiteResult res;
    for (int i = 0; i < cases; ++i) {
        RandomCoreState st = random_core_state(rng, 1, 3);
        try {
            MnfReport rep = mnf_run(st.sigma, st.bip);
            Real worst = rep.reconstruction_residual;
            bool ok = worst <= tol && !rep.filtrations.empty();
            for (const auto& f : rep.filtrations) {
                PsdResult p = psd_check(f.y, tol);
                if (!p.psd) ok = false;
                Real neg = max(Real(0), -p.min_eigenvalue) / max(Real(1), f.y.max_abs());
                worst = max(worst, neg);
            }
            res.record(ok, ratio(worst, tol), "case " + std::to_string(i));
            if (keep) keep->push_back({st.sigma, st.bip, rep});
        } catch (const std::exception& e) {
            res.fail("case " + std::to_string(i) + ": " + e.what());
        }
    }
    return res;
}

// (d) V_N of every other core untouched by a filtration
inline SuiteResult suite_overlap(int cases, int digits, unsigned seed, std::vector<MnfSample>* keep = nullptr)
{
    PrecisionGuard g(digits);
    std::mt19937_64 rng(seed);
    Real tol = half_precision_tol(digits);
    Real h = Real(1) / sqrt(Real(2));
    SuiteResult res;
    for (int i = 0; i < cases; ++i) {
        RandomCoreState st = random_core_state(rng, 2, 3);
        try {
            CoreHaloDecomposition d = consolidate(st.sigma, st.bip);
            if (d.n_cores() != st.cores) {
                res.fail("case " + std::to_string(i) + ": wrong core count");
                continue;
            }
            FilterResult fr = filter_step(d.sigma_prime, 0);
            const std::size_t n = d.sigma_prime.rows() / 2;
            std::vector<bool> side(n, false);
            for (std::size_t f = 0; f < d.n_cores(); ++f) side[2 * f + 1] = true;
            for (std::size_t k = 2 * d.n_cores() + d.halo_A; k < n; ++k) side[k] = true;
            Real worst = Real(0);
            Real scale = max(Real(1), fr.y_full.max_abs());
            for (std::size_t c2 = 1; c2 < d.n_cores(); ++c2) {
                Vector vx(2 * n, Real(0)), vp(2 * n, Real(0)), vs(2 * n, Real(0));
                vx[4 * c2] = -h;
                vx[4 * c2 + 2] = h;
                vp[4 * c2 + 1] = -h;
                vp[4 * c2 + 3] = h;
                for (std::size_t k = 0; k < 2 * n; ++k) vs[k] = (vx[k] + vp[k]) * h;
                for (const Vector* v : {&vx, &vp, &vs}) worst = max(worst, abs(vn_overlap(fr.y_full, side, *v)) / scale);
            }
            MnfOptions opt;
            opt.strategy = MnfStrategy::AllCores;
            MnfReport rep = mnf_run(st.sigma, st.bip, opt);
            for (const auto& f : rep.filtrations) worst = max(worst, f.max_overlap);
            res.record(worst <= tol && rep.alignment_held, ratio(worst, tol), "case " + std::to_string(i));
            if (keep) keep->push_back({st.sigma, st.bip, rep});
        } catch (const std::exception& e) {
            res.fail("case " + std::to_string(i) + ": " + e.what());
        }
    }
    return res;
}

// (e) nic conditions on NIC runs, N_p_mnf >= N on complete decompositions
inline SuiteResult suite_nic_weyl(const std::vector<MnfSample>& samples, int digits)
{
    PrecisionGuard g(digits);
    Real tol = half_precision_tol(digits);
    SuiteResult res;
    int i = 0;
    for (const auto& s : samples) {
        const MnfReport& r = s.report;
        bool complete = r.halo_status == HaloStatus::Separable || r.halo_status == HaloStatus::PptUndetermined ||
                        r.halo_status == HaloStatus::PptEntangled;
        try {
            bool ok = true;
            double worst = 0;
            if (complete) {
                Real gap = (r.N - r.N_p_mnf) / max(Real(1), r.N);
                if (gap > tol) ok = false;
                worst = std::max(worst, ratio(max(Real(0), gap), tol));
            }
            if (r.label == Label::NIC) {
                NicConditions c = nic_conditions(r.pure_state_input, s.sigma, s.bip);
                if (!c.all()) ok = false;
                worst = std::max(worst, ratio(max(c.worst_spectrum, c.worst_angle), tol));
                Real gap = abs(r.N - r.N_p_mnf) / max(Real(1), r.N);
                if (gap > tol) ok = false;
            }
            res.record(ok, worst, "sample " + std::to_string(i));
        } catch (const std::exception& e) {
            res.fail("sample " + std::to_string(i) + ": " + e.what());
        }
        ++i;
    }
    return res;
}

} // namespace testsupport
