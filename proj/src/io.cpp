#include "gaussent/io.hpp"

#include "gaussent/errors.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <sstream>

namespace gaussent {

using nlohmann::json;

// enough decimal digits to recover every bit
std::string exact(const Real& x) { return x.str(2 + static_cast<int>(std::ceil(x.bits() * std::log10(2.0)))); }

CmFile parse_cm_json(const std::string& text, int digits)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("cm json: ") + e.what());
    }
    CmFile f;
    try {
        const std::size_t n = j.at("n_modes").get<std::size_t>();
        const std::size_t na = j.at("n_A").get<std::size_t>();
        f.digits = digits > 0 ? digits : j.value("precision_digits", default_digits());
        if (f.digits < 10) throw InvalidInput("cm json: precision_digits below 10");
        if (n == 0 || na > n) throw InvalidInput("cm json: invalid n_modes / n_A");
        const json& e = j.at("entries");
        if (!e.is_array() || e.size() != 2 * n) throw InvalidInput("cm json: entries must have 2 n_modes rows");
        f.sigma = Matrix(2 * n, 2 * n, f.digits);
        for (std::size_t r = 0; r < 2 * n; ++r) {
            if (!e[r].is_array() || e[r].size() != 2 * n) throw InvalidInput("cm json: row " + std::to_string(r) + " has the wrong length");
            for (std::size_t c = 0; c < 2 * n; ++c) {
                const json& v = e[r][c];
                std::string s = v.is_string() ? v.get<std::string>() : v.dump();
                Real x;
                try {
                    x = Real(s, f.digits);
                } catch (const std::invalid_argument&) {
                    throw InvalidInput("cm json: entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not a number");
                }
                if (!x.is_finite()) throw InvalidInput("cm json: entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not a number");
                f.sigma(r, c) = x;
            }
        }
        f.bip = {na, n - na};
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("cm json: ") + e.what());
    }
    validate_cm(f.sigma, "cm json");
    return f;
}

CmFile read_cm_json(const std::string& path, int digits)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cm_json(ss.str(), digits);
}

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(exact(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

json cm_to_json(const CovMatrix& sigma, const Bipartition& bip)
{
    return {{"n_modes", bip.n_modes()}, {"n_A", bip.n_A}, {"precision_digits", sigma.digits()}, {"entries", matrix_to_json(sigma)}};
}

void write_cm_json(const std::string& path, const CovMatrix& sigma, const Bipartition& bip)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << cm_to_json(sigma, bip).dump(1) << "\n";
}

json decomposition_to_json(const CoreHaloDecomposition& d)
{
    json cores = json::array();
    for (std::size_t f = 0; f < d.cores.size(); ++f)
        cores.push_back({{"modes", {2 * f, 2 * f + 1}}, {"nu_minus", exact(d.cores[f].nu_minus)}, {"r", exact(d.cores[f].r)},
                         {"flipped", static_cast<bool>(d.flipped[f])}});
    return {{"local_map", matrix_to_json(d.local_map)},
            {"order", d.order},
            {"sigma_prime", matrix_to_json(d.sigma_prime)},
            {"cores", cores},
            {"halo_A", d.halo_A},
            {"halo_B", d.halo_B}};
}

json report_to_json(const MnfReport& r)
{
    json filt = json::array();
    for (const auto& f : r.filtrations)
        filt.push_back({{"round", f.round},
                        {"nu_minus", exact(f.nu_minus)},
                        {"r", exact(f.r)},
                        {"y11", exact(f.noise.y11)},
                        {"y22", exact(f.noise.y22)},
                        {"y12", exact(f.noise.y12)},
                        {"Y", matrix_to_json(f.y)},
                        {"Y_coupling", matrix_to_json(f.y_coupling)},
                        {"structure_residual", f.structure_residual.str(4)},
                        {"schur_residual", f.schur_residual.str(4)},
                        {"max_overlap", f.max_overlap.str(4)}});
    json halo = r.final_halo.empty() ? json(nullptr) : cm_to_json(r.final_halo, r.final_halo_bip);
    return {{"N", exact(r.N)},
            {"n_minus", r.n_minus},
            {"nsol", r.nsol},
            {"label", to_string(r.label)},
            {"N_p_mnf", exact(r.N_p_mnf)},
            {"halo_status", to_string(r.halo_status)},
            {"flow_iterations", r.flow_iterations},
            {"alignment_held", r.alignment_held},
            {"additional_cores", r.additional_cores},
            {"rounds", r.rounds},
            {"reconstruction_residual", r.reconstruction_residual.str(4)},
            {"filtrations", filt},
            {"final_halo", halo}};
}

} // namespace gaussent
