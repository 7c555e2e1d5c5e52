#pragma once

#include "gaussent/classify.hpp"
#include "gaussent/mnf.hpp"

#include <json.hpp>

#include <string>

namespace gaussent {

struct CmFile {
    CovMatrix sigma;
    Bipartition bip;
    int digits = 0;
};

// { "n_modes", "n_A", "precision_digits", "entries": [[decimal strings]] }
// digits > 0 overrides precision_digits.
CmFile parse_cm_json(const std::string& text, int digits = 0);
CmFile read_cm_json(const std::string& path, int digits = 0);
nlohmann::json cm_to_json(const CovMatrix& sigma, const Bipartition& bip);
void write_cm_json(const std::string& path, const CovMatrix& sigma, const Bipartition& bip);

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json decomposition_to_json(const CoreHaloDecomposition& d);
nlohmann::json report_to_json(const MnfReport& r);

// full-precision decimal string
std::string exact(const Real& x);

} // namespace gaussent
