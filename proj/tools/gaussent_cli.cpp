#include "gaussent/errors.hpp"
#include "gaussent/io.hpp"
#include "gaussent/mnf.hpp"
#include "gaussent/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace gaussent;
using nlohmann::json;

namespace {

enum Exit { ok = 0, invalid_input = 2, unphysical = 3, numerical = 4 };

MnfOptions mnf_options(const std::string& strategy, const std::string& tol_nsol, const std::string& tol_neg, const std::string& structure_tol,
                       int digits)
{
    MnfOptions o;
    if (strategy == "all") o.strategy = MnfStrategy::AllCores;
    else if (strategy == "dominant") o.strategy = MnfStrategy::DominantCore;
    else throw InvalidInput("unknown strategy '" + strategy + "'");
    auto parse = [&](const std::string& s) {
        if (s.empty()) return Real(0);
        try {
            return Real(s, digits);
        } catch (const std::invalid_argument&) {
            throw InvalidInput("not a decimal number: '" + s + "'");
        }
    };
    o.tol_nsol = parse(tol_nsol);
    o.tol_neg = parse(tol_neg);
    o.structure_tol = parse(structure_tol);
    return o;
}

int cmd_classify(const std::string& path, int na, int precision, const MnfOptions& base, const std::string& out,
                 const std::string& strategy, const std::string& tn, const std::string& tg, const std::string& ts)
{
    CmFile f = read_cm_json(path, precision);
    if (na >= 0) {
        if (static_cast<std::size_t>(na) > f.bip.n_modes()) throw InvalidInput("--na exceeds the number of modes");
        f.bip = {static_cast<std::size_t>(na), f.bip.n_modes() - na};
    }
    PrecisionGuard guard(f.digits);
    MnfOptions opt = mnf_options(strategy, tn, tg, ts, f.digits);
    opt.max_flow_iterations = base.max_flow_iterations;
    MnfReport rep = mnf_run(f.sigma, f.bip, opt);
    json j = {{"input", path}, {"n_A", f.bip.n_A}, {"n_B", f.bip.n_B}, {"precision_digits", f.digits}, {"N", exact(rep.N)},
              {"n_minus", rep.n_minus}, {"nsol", rep.nsol}, {"label", to_string(rep.label)}, {"mnf", report_to_json(rep)}};
    std::string text = j.dump(1);
    if (out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream o(out);
        if (!o) throw InvalidInput("cannot write " + out);
        o << text << "\n";
        std::cout << "label " << to_string(rep.label) << "  N " << rep.N.str(6) << "  N_p_mnf " << rep.N_p_mnf.str(6) << "\n";
    }
    return ok;
}

int cmd_scan(ScanOptions so, const std::string& prefix, int sig)
{
    ScanResult res = scan(so);
    json rows = json::array();
    std::string csv = csv_header() + "\n";
    for (const auto& r : res.rows) {
        csv += csv_row(r, sig) + "\n";
        rows.push_back({{"r_tilde", r.r_tilde},
                        {"N", r.N.str(sig)},
                        {"N_p_mnf", r.N_p_mnf.str(sig)},
                        {"label", to_string(r.label)},
                        {"cores_mixed", r.cores_mixed},
                        {"cores_pure", r.cores_pure},
                        {"N_exact", exact(r.N)},
                        {"N_p_mnf_exact", exact(r.N_p_mnf)},
                        {"precision_digits", r.digits}});
    }
    json trans = {{"r_nic", res.r_nic ? json(*res.r_nic) : json(nullptr)}, {"r_sep", res.r_sep ? json(*res.r_sep) : json(nullptr)}};
    json j = {{"d", so.d}, {"mass", so.mass}, {"rows", rows}, {"transitions", trans}};
    std::cout << csv;
    std::cout << "# r_nic " << (res.r_nic ? std::to_string(*res.r_nic) : "none") << "  r_sep "
              << (res.r_sep ? std::to_string(*res.r_sep) : "none") << "\n";
    if (!prefix.empty()) {
        std::ofstream c(prefix + ".csv"), o(prefix + ".json");
        if (!c || !o) throw InvalidInput("cannot write " + prefix + ".csv / .json");
        c << csv;
        o << j.dump(1) << "\n";
    }
    return ok;
}

int cmd_genfield(int d, int r, const std::string& mass, int precision, const std::string& out)
{
    RegionSpec rs;
    rs.d = d;
    rs.r_tilde = r;
    rs.mass = mass;
    rs.precision = precision;
    auto [sigma, bip] = vacuum_cm(rs);
    if (out.empty()) std::cout << cm_to_json(sigma, bip).dump(1) << "\n";
    else write_cm_json(out, sigma, bip);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gaussian entanglement structure: consolidation, minimum noise filtering, field scans"};
    app.require_subcommand(1);

    std::string strategy = "dominant", tol_nsol, tol_neg, structure_tol;
    MnfOptions base;
    auto add_mnf_flags = [&](CLI::App* c) {
        c->add_option("--strategy", strategy, "dominant (one core per round) or all")->check(CLI::IsMember({"dominant", "all"}));
        c->add_option("--tol-nsol", tol_nsol, "N-SOL tolerance, default 10^(-P/2)");
        c->add_option("--tol-neg", tol_neg, "negativity threshold, default 10^(-P/2)");
        c->add_option("--structure-tol", structure_tol, "alignment and |l> structure tolerance, default 10^(-P/2)");
        c->add_option("--flow-iterations", base.max_flow_iterations, "separability flow cap");
    };

    auto* classify = app.add_subcommand("classify", "classify a covariance matrix file");
    std::string cm, out;
    int na = -1, precision = 0;
    classify->add_option("--cm", cm, "covariance matrix JSON")->required();
    classify->add_option("--na", na, "modes on side A (default from the file)");
    classify->add_option("--precision", precision, "decimal digits (default from the file)");
    classify->add_option("--out", out, "write the JSON report here instead of stdout");
    add_mnf_flags(classify);

    auto* scanc = app.add_subcommand("scan", "sweep the separation of two field regions");
    ScanOptions so;
    std::string prefix;
    int sig = 6;
    scanc->add_option("--d", so.d, "sites per region")->required();
    scanc->add_option("--rmin", so.r_min, "smallest separation")->default_val(0);
    scanc->add_option("--rmax", so.r_max, "largest separation")->required();
    scanc->add_option("--mass", so.mass, "lattice mass")->default_val("1e-10");
    scanc->add_option("--precision", so.precision, "decimal digits, 0 adapts to the separation")->default_val(0);
    scanc->add_option("--workers", so.workers, "worker threads")->default_val(1);
    scanc->add_option("--out", prefix, "write PREFIX.csv and PREFIX.json");
    scanc->add_option("--digits", sig, "significant digits in the table")->default_val(6);
    add_mnf_flags(scanc);

    auto* gen = app.add_subcommand("genfield", "write the covariance matrix of two field regions");
    int gd = 1, gr = 0, gp = 0;
    std::string gm = "1e-10", gout;
    gen->add_option("--d", gd, "sites per region")->required();
    gen->add_option("--r", gr, "separation")->required();
    gen->add_option("--mass", gm, "lattice mass")->default_val("1e-10");
    gen->add_option("--precision", gp, "decimal digits, 0 adapts to the separation")->default_val(0);
    gen->add_option("--out", gout, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : invalid_input;
    }

    try {
        if (*classify) return cmd_classify(cm, na, precision, base, out, strategy, tol_nsol, tol_neg, structure_tol);
        if (*scanc) {
            int digits = so.precision > 0 ? so.precision : 64;
            so.mnf = mnf_options(strategy, tol_nsol, tol_neg, structure_tol, digits);
            so.mnf.max_flow_iterations = base.max_flow_iterations;
            return cmd_scan(so, prefix, sig);
        }
        if (*gen) return cmd_genfield(gd, gr, gm, gp, gout);
    } catch (const UnphysicalState& e) {
        std::cerr << "unphysical: " << e.what() << "\n";
        return unphysical;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid_input;
    } catch (const NotApplicable& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid_input;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical;
    }
    return ok;
}
