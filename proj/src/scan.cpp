#include "gaussent/scan.hpp"

#include "gaussent/errors.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace gaussent {

ScanRow scan_point(int d, int r_tilde, const std::string& mass, int precision, const MnfOptions& opt)
{
    RegionSpec rs;
    rs.d = d;
    rs.r_tilde = r_tilde;
    rs.mass = mass;
    rs.precision = precision;
    auto [sigma, bip] = vacuum_cm(rs);
    PrecisionGuard guard(sigma.digits());
    MnfReport rep = mnf_run(sigma, bip, opt);
    ScanRow row;
    row.r_tilde = r_tilde;
    row.N = rep.N;
    row.N_p_mnf = rep.N_p_mnf;
    row.label = rep.label;
    row.cores_mixed = rep.n_minus;
    row.cores_pure = rep.filtrations.size();
    row.digits = sigma.digits();
    return row;
}

ScanResult scan(const ScanOptions& opt)
{
    if (opt.d < 1) throw InvalidInput("scan: d must be at least 1");
    if (opt.r_min < 0 || opt.r_max < opt.r_min) throw InvalidInput("scan: invalid separation range");
    const int count = opt.r_max - opt.r_min + 1;
    ScanResult out;
    out.rows.resize(count);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                out.rows[i] = scan_point(opt.d, opt.r_min + i, opt.mass, opt.precision, opt.mnf);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    const int workers = std::max(1, std::min(opt.workers, count));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (const auto& row : out.rows) {
        if (!out.r_nic && row.label == Label::NIC) out.r_nic = row.r_tilde;
        if (!out.r_sep && row.label == Label::Separable) out.r_sep = row.r_tilde;
    }
    return out;
}

std::string csv_header() { return "r_tilde,N,N_p_mnf,label,cores_mixed,cores_pure"; }

std::string csv_row(const ScanRow& row, int sig_digits)
{
    return std::to_string(row.r_tilde) + "," + row.N.str(sig_digits) + "," + row.N_p_mnf.str(sig_digits) + "," + to_string(row.label) +
           "," + std::to_string(row.cores_mixed) + "," + std::to_string(row.cores_pure);
}

} // namespace gaussent
