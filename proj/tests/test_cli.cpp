#include "doctest.h"

#include "crossimpact/cli.hpp"
#include "crossimpact/io.hpp"
#include "crossimpact/synth.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace crossimpact;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("crossimpact_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

const char* kReferenceParams = R"({"pairs": {
  "ij": {"gamma0": 1.13e-4, "tau0": 7.34, "beta": 0.14, "delta": 0.61},
  "ji": {"gamma0": 0.79e-4, "tau0": 4.75, "beta": 0.03, "delta": 0.50}}})";

const char* kZeroParams = R"({"pairs": {
  "ij": {"gamma0": 0, "tau0": 1, "beta": 0.1, "delta": 0.6},
  "ji": {"gamma0": 0, "tau0": 1, "beta": 0.1, "delta": 0.5}}})";

}  // namespace

TEST_CASE("exit codes") {
    TempDir tmp;
    std::ofstream(tmp / "p.json") << kReferenceParams;
    CHECK(run({}).code == cli::kValidationError);
    CHECK(run({"--help"}).code == cli::kOk);
    CHECK(run({"frobnicate"}).code == cli::kValidationError);
    CHECK(run({"cost", "--params", tmp / "p.json", "--kappa-i", "0.5", "--kappa-j", "0.5", "--zeta-t", "1"}).code ==
          cli::kOk);
    const auto bad = run({"cost", "--params", tmp / "p.json", "--kappa-i", "1.5", "--kappa-j", "0.5", "--zeta-t", "1"});
    CHECK(bad.code == cli::kValidationError);
    CHECK(bad.err.find("kappa_i") != std::string::npos);
    CHECK(run({"cost", "--params", tmp / "p.json", "--kappa-i", "0.5"}).code == cli::kValidationError);
    CHECK(run({"cost", "--bogus"}).code == cli::kValidationError);
    CHECK(run({"cost", "--params", tmp / "missing.json", "--kappa-i", "0.5", "--kappa-j", "0.5", "--zeta-t", "1"}).code ==
          cli::kValidationError);

    std::ofstream(tmp / "broken.json") << "{\"pairs\": ";
    CHECK(run({"optimize", "--params", tmp / "broken.json"}).code == cli::kValidationError);
    std::ofstream(tmp / "nokey.json") << R"({"pairs": {"ij": {"gamma0": 1}}})";
    CHECK(run({"optimize", "--params", tmp / "nokey.json"}).code == cli::kValidationError);

    // a corpus too small for the requested cut-off fails during computation
    std::ofstream(tmp / "s.json") << R"({"seed": 1, "days": 2, "seconds_per_day": 50, "pairs": {
      "ij": {"gamma0": 1e-4, "tau0": 5, "beta": 0.2, "delta": 0.6},
      "ji": {"gamma0": 1e-4, "tau0": 5, "beta": 0.2, "delta": 0.5}}})";
    REQUIRE(run({"synth", "--config", tmp / "s.json", "--out-dir", tmp / "s"}).code == cli::kOk);
    const auto cal = run({"calibrate", "--bars-i", tmp / "s/bars_i.csv", "--bars-j", tmp / "s/bars_j.csv", "--cutoff",
                          "100", "--report-len", "50", "--out", tmp / "cal.json"});
    CHECK(cal.code == cli::kComputationError);
}

TEST_CASE("cost of zero kernels is zero") {
    TempDir tmp;
    std::ofstream(tmp / "z.json") << kZeroParams;
    const auto r = run({"--json", "cost", "--params", tmp / "z.json", "--kappa-i", "0.3", "--kappa-j", "0.6",
                        "--zeta-t", "0.7"});
    REQUIRE(r.code == 0);
    const auto doc = Json::parse(r.out);
    CHECK(doc["omega_c"].get<double>() == 0.0);
    CHECK(doc["omega_ij"].get<double>() == 0.0);
    CHECK(doc.contains("region"));
}

TEST_CASE("cost request document") {
    TempDir tmp;
    std::ofstream(tmp / "req.json") << R"({"presets": {"zeta_v": 1, "T_i": 1, "vdot_in_i": 0.1},
      "strategy": {"kappa_i": 0.5, "kappa_j": 0.3, "zeta_T": 1},
      "pairs": {"ij": {"gamma0": 1.13e-4, "tau0": 7.34, "beta": 0.14, "delta": 0.61},
                "ji": {"gamma0": 0.79e-4, "tau0": 4.75, "beta": 0.03, "delta": 0.50}},
      "method": "quadrature"})";
    const auto r = run({"--json", "--no-timestamp", "cost", "--request", tmp / "req.json", "--out", tmp / "res.json"});
    REQUIRE(r.code == 0);
    const auto doc = read_json_file(tmp / "res.json");
    CHECK(doc["region"] == "III");
    CHECK(doc["omega_c"].get<double>() < 0.0);
    CHECK(doc["omega_c_x1e6"].get<double>() == doctest::Approx(doc["omega_c"].get<double>() * 1e6));
    CHECK_FALSE(doc.contains("generated_at"));
    CHECK(Json::parse(r.out) == doc);
}

TEST_CASE("heatmap writes one CSV and one JSON per zeta_T") {
    TempDir tmp;
    std::ofstream(tmp / "p.json") << kReferenceParams;
    const auto r = run({"--no-timestamp", "heatmap", "--params", tmp / "p.json", "--grid", "12", "--out-dir", tmp / "h"});
    REQUIRE(r.code == 0);
    for (const char* z : {"0.5", "1", "2"}) {
        const auto csv = tmp / ("h/surface_zeta" + std::string(z) + ".csv");
        REQUIRE(fs::exists(csv));
        std::ifstream is(csv);
        std::string header;
        std::getline(is, header);
        CHECK(header == "zeta_T,kappa_i,kappa_j,region,feasible,omega_c,omega_c_x1e6");
        int rows = 0;
        for (std::string line; std::getline(is, line);) ++rows;
        CHECK(rows == 144);
        CHECK(fs::exists(tmp / ("h/surface_zeta" + std::string(z) + ".json")));
    }
    const auto first = slurp(tmp / "h/surface_zeta1.json");
    REQUIRE(run({"--no-timestamp", "--threads", "1", "heatmap", "--params", tmp / "p.json", "--grid", "12",
                 "--out-dir", tmp / "h2"})
                .code == 0);
    CHECK(slurp(tmp / "h2/surface_zeta1.json") == first);
    CHECK(slurp(tmp / "h2/surface_zeta2.csv") == slurp(tmp / "h/surface_zeta2.csv"));
}

TEST_CASE("optimize") {
    TempDir tmp;
    std::ofstream(tmp / "p.json") << kReferenceParams;
    const auto r = run({"--json", "optimize", "--params", tmp / "p.json", "--grid", "15", "--region", "III"});
    REQUIRE(r.code == 0);
    const auto doc = Json::parse(r.out);
    CHECK(doc.dump().find("\"III\"") != std::string::npos);
    const auto refined = run({"--json", "optimize", "--params", tmp / "p.json", "--grid", "15", "--refine"});
    CHECK(refined.code == 0);
}

TEST_CASE("synth, stats, calibrate and heatmap chain") {
    TempDir tmp;
    SynthConfig cfg;
    cfg.seed = 4;
    cfg.days = 12;
    cfg.seconds_per_day = 6000;
    cfg.G_ij = {1.13e-4, 7.34, 0.14};
    cfg.G_ji = {0.79e-4, 4.75, 0.03};
    cfg.g_i = {0.61};
    cfg.g_j = {0.5};
    write_json_file(tmp / "cfg.json", synth_config_to_json(cfg));

    REQUIRE(run({"--no-timestamp", "synth", "--config", tmp / "cfg.json", "--out-dir", tmp / "a"}).code == 0);
    REQUIRE(run({"--no-timestamp", "synth", "--config", tmp / "cfg.json", "--out-dir", tmp / "b"}).code == 0);
    for (const char* f : {"bars_i.csv", "bars_j.csv", "truth.json"}) {
        CHECK(slurp(tmp / (std::string("a/") + f)) == slurp(tmp / (std::string("b/") + f)));
    }
    REQUIRE(run({"--seed", "5", "synth", "--config", tmp / "cfg.json", "--out-dir", tmp / "c"}).code == 0);
    CHECK(slurp(tmp / "c/bars_i.csv") != slurp(tmp / "a/bars_i.csv"));
    const auto truth = read_json_file(tmp / "a/truth.json");
    CHECK(truth.contains("realized"));

    const auto stats = run({"stats", "--bars-i", tmp / "a/bars_i.csv", "--bars-j", tmp / "a/bars_j.csv", "--tau-max",
                            "50", "--out-dir", tmp / "st"});
    REQUIRE(stats.code == 0);
    for (const char* f : {"response_ij.csv", "response_ji.csv", "sign_ii.csv", "sign_jj.csv", "conditional_ij.csv",
                          "conditional_ji.csv"}) {
        CHECK(fs::exists(tmp / (std::string("st/") + f)));
    }
    std::ifstream resp(tmp / "st/response_ij.csv");
    std::string header;
    std::getline(resp, header);
    CHECK(header == "tau,value,count");

    const auto cal = run({"--no-timestamp", "calibrate", "--bars-i", tmp / "a/bars_i.csv", "--bars-j",
                          tmp / "a/bars_j.csv", "--cutoff", "300", "--report-len", "100", "--fit-first", "5", "--out",
                          tmp / "fitted.json"});
    REQUIRE(cal.code == 0);
    const auto fitted = params_from_json(read_json_file(tmp / "fitted.json"));
    CHECK(fitted.model.g_i.delta == doctest::Approx(0.61).epsilon(0.15));
    CHECK(fs::exists(tmp / "fitted.diagnostics.json"));
    const auto diag = read_json_file(tmp / "fitted.diagnostics.json");
    CHECK(diag.dump().find("rcond") != std::string::npos);

    const auto heat = run({"heatmap", "--params", tmp / "fitted.json", "--grid", "8", "--zeta-t", "1", "--out-dir",
                           tmp / "hm"});
    CHECK(heat.code == 0);
    CHECK(fs::exists(tmp / "hm/surface_zeta1.csv"));
}

TEST_CASE("ingest from trade and quote files") {
    TempDir tmp;
    SynthConfig cfg;
    cfg.seed = 8;
    cfg.days = 3;
    cfg.seconds_per_day = 1000;
    const auto [si, sj] = generate_signs(cfg);
    auto write_stock = [&](const std::string& ticker, const SignSeries& signs, double base) {
        fs::create_directories(tmp.path / ticker);
        for (std::size_t d = 0; d < signs.size(); ++d) {
            const std::string date = "2021-03-0" + std::to_string(d + 1);
            std::ofstream t(tmp.path / ticker / (date + ".trades.csv"));
            std::ofstream q(tmp.path / ticker / (date + ".quotes.csv"));
            t << "second,ordinal,price,volume\n";
            q << "second,ordinal,bid,ask\n";
            double price = base;
            t << "599,0," << price << ",100\n";
            q << "0,0," << price - 0.01 << "," << price + 0.01 << "\n";
            for (std::size_t s = 0; s < signs[d].size(); ++s) {
                if (signs[d][s] == 0) continue;
                price += 0.01 * signs[d][s];
                t << 600 + s << ",0," << price << ",100\n";
                q << 600 + s << ",1," << price - 0.01 << "," << price + 0.01 << "\n";
            }
        }
    };
    write_stock("AAA", si, 50.0);
    write_stock("BBB", sj, 80.0);
    // a day on which only one stock traded
    fs::copy_file(tmp.path / "AAA" / "2021-03-01.trades.csv", tmp.path / "AAA" / "2021-03-09.trades.csv");

    const auto r = run({"ingest", "--trades-dir", tmp.path.string(), "--tickers", "AAA,BBB", "--session-close", "2200",
                        "--out", tmp / "bars"});
    REQUIRE(r.code == 0);
    const auto a = read_bars_csv(fs::path(tmp / "bars/AAA.bars.csv"));
    const auto b = read_bars_csv(fs::path(tmp / "bars/BBB.bars.csv"));
    REQUIRE(a.size() == 3);
    check_aligned(a, b);
    for (std::size_t d = 0; d < 3; ++d) {
        REQUIRE(a[d].bars.size() == 1000);
        // the session edge removes the reference trade, so the day's first
        // trade has no prior price and classifies as 0
        bool first = true;
        for (std::size_t s = 0; s < 1000; ++s) {
            INFO("day " << d << " second " << s);
            if (si[d][s] != 0 && first) {
                CHECK(a[d].bars[s].sign == 0);
                first = false;
                continue;
            }
            CHECK(a[d].bars[s].sign == si[d][s]);
        }
    }

    const auto bad = run({"ingest", "--trades-dir", tmp / "nowhere", "--tickers", "AAA,BBB", "--out", tmp / "x"});
    CHECK(bad.code == cli::kValidationError);
}

TEST_CASE("JSON documents round trip") {
    ParamsFile p;
    p.model = {{1.13e-4, 7.34, 0.14}, {0.79e-4, 4.75, 0.03}, {0.61}, {0.5}};
    p.G_ii = PowerLawKernel{2e-4, 3.0, 0.3};
    p.f_i = VolumeImpact{0.7};
    const auto back = params_from_json(Json::parse(params_to_json(p).dump()));
    CHECK(back.model.G_ij == p.model.G_ij);
    CHECK(back.model.g_j == p.model.g_j);
    REQUIRE(back.G_ii);
    CHECK(*back.G_ii == *p.G_ii);
    CHECK(back.f_i->delta == 0.7);

    SynthConfig c;
    c.seed = 123456789012345ULL;
    c.flow_i.rho = 0.45;
    c.noise_sigma = 1e-5;
    const auto c2 = synth_config_from_json(Json::parse(synth_config_to_json(c).dump()));
    CHECK(c2.seed == c.seed);
    CHECK(c2.flow_i.rho == 0.45);
    CHECK(c2.noise_sigma == 1e-5);

    const Presets pr{2.0, 3.0, 0.2};
    const auto pr2 = presets_from_json(presets_to_json(pr));
    CHECK(pr2.zeta_v == 2.0);
    CHECK(pr2.vdot_in_i == 0.2);
    CHECK_THROWS(params_from_json(Json::parse(R"({"pairs": {"ij": {"gamma0": 1, "tau0": -1, "beta": 0, "delta": 0.5},
        "ji": {"gamma0": 1, "tau0": 1, "beta": 0, "delta": 0.5}}})")));
}
