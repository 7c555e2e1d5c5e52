#pragma once

#include "gaussent/mnf.hpp"
#include "gaussent/scalarfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gaussent {

struct ScanRow {
    int r_tilde = 0;
    Real N;
    Real N_p_mnf;
    Label label = Label::Separable;
    std::size_t cores_mixed = 0; // n_minus of the field state
    std::size_t cores_pure = 0;  // cores extracted by MNF
    int digits = 0;
};

struct ScanOptions {
    int d = 1;
    int r_min = 0;
    int r_max = 0;
    std::string mass = "1e-10";
    int precision = 0; // 0 selects default_field_precision per point
    int workers = 1;
    MnfOptions mnf;
};

struct ScanResult {
    std::vector<ScanRow> rows; // ascending r_tilde
    std::optional<int> r_nic;  // smallest r_tilde labeled NIC
    std::optional<int> r_sep;  // smallest r_tilde labeled separable
};

ScanRow scan_point(int d, int r_tilde, const std::string& mass, int precision = 0, const MnfOptions& opt = {});
ScanResult scan(const ScanOptions& opt);

std::string csv_header();
std::string csv_row(const ScanRow& row, int sig_digits = 6);

} // namespace gaussent
