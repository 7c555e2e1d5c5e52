#include "support.hpp"

#include "gaussent/errors.hpp"
#include "gaussent/io.hpp"
#include "gaussent/scalarfield.hpp"
#include "gaussent/scan.hpp"

#include <fstream>

using namespace gaussent;
using namespace testsupport;

TEST_CASE("cm json round trip is exact")
{
    PrecisionGuard g(64);
    std::mt19937_64 rng(71);
    CovMatrix s = random_cm(3, rng);
    CmFile f = parse_cm_json(cm_to_json(s, {1, 2}).dump());
    CHECK(f.bip.n_A == 1);
    CHECK(f.bip.n_B == 2);
    CHECK(f.digits == 64);
    CHECK((f.sigma - s).max_abs() == Real(0));
}

TEST_CASE("digits override and file round trip")
{
    PrecisionGuard g(40);
    CovMatrix s = tmsvs(Real("0.7"));
    const std::string path = "test_io_tmsvs.json";
    write_cm_json(path, s, {1, 1});
    CmFile f = read_cm_json(path, 80);
    CHECK(f.digits == 80);
    CHECK(f.sigma.digits() == 80);
    CHECK((f.sigma - s).max_abs() < Real("1e-38"));
    std::remove(path.c_str());
}

TEST_CASE("malformed input is rejected")
{
    CHECK_THROWS_AS(parse_cm_json("{"), InvalidInput);
    CHECK_THROWS_AS(parse_cm_json(R"({"n_modes":1,"n_A":1,"precision_digits":30,"entries":[["1","x"],["0","1"]]})"), InvalidInput);
    CHECK_THROWS_AS(parse_cm_json(R"({"n_modes":2,"n_A":1,"precision_digits":30,"entries":[["1","0"],["0","1"]]})"), InvalidInput);
    CmFile f = parse_cm_json(R"({"n_modes":2,"n_A":1,"precision_digits":30,"entries":[["0.1","0","0","0"],["0","0.1","0","0"],["0","0","1","0"],["0","0","0","1"]]})");
    PrecisionGuard g(f.digits);
    CHECK_THROWS_AS(pt_spectrum(f.sigma, f.bip), UnphysicalState);
}

TEST_CASE("shipped data files load")
{
    CmFile f = read_cm_json(GAUSSENT_DATA_DIR "/xp_mixed_4mode.json");
    CHECK(f.bip.n_A == 2);
    CHECK(f.sigma.rows() == 8);
    CmFile v = read_cm_json(GAUSSENT_DATA_DIR "/vacuum_2mode.json");
    PrecisionGuard g(v.digits);
    CHECK(log_negativity(v.sigma, v.bip) == Real(0));
}

TEST_CASE("scan row csv agrees with report json")
{
    ScanRow row = scan_point(2, 1, "1e-10");
    std::string line = csv_row(row);
    CHECK(line.rfind("1,", 0) == 0);
    CHECK(line.find(",NIC,") != std::string::npos);
    CHECK(csv_header() == "r_tilde,N,N_p_mnf,label,cores_mixed,cores_pure");
    RegionSpec rs;
    rs.d = 2;
    rs.r_tilde = 1;
    auto [s, bip] = vacuum_cm(rs);
    PrecisionGuard g(s.digits());
    nlohmann::json j = report_to_json(mnf_run(s, bip));
    CHECK(Real(j["N"].get<std::string>()) == row.N);
}
