// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace spinbus;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const Run r = run(args);
    REQUIRE(r.code == kExitOk);
    return json::parse(r.out);
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("spinbus_cli_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("number formatting") {
        CHECK(format_number(0.1) == "0.1");
        CHECK(format_number(1.0 / 3.0) == "0.333333333333");
        CHECK(format_number(60880) == "60880");
        CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
        CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
        CHECK(format_number(std::nan("")) == "nan");
    }

    TEST_CASE("usage errors exit with the config code") {
        CHECK(run({}).code == kExitConfig);
        CHECK(run({"nonsense"}).code == kExitConfig);
        CHECK(run({"bounds", "--no-such-flag"}).code == kExitConfig);
        CHECK(run({"bounds", "--format", "xml"}).code == kExitConfig);
        CHECK(run({"bounds", "--ratio", "-1"}).code == kExitConfig);
        CHECK(run({"gap-scan", "--Ns", "4", "6", "8"}).code == kExitConfig);
        CHECK(run({"spectrum", "--N", "6"}).code == kExitConfig);
        CHECK(run({"wstate", "--protocol", "three"}).code == kExitConfig);
        CHECK(run({"error-scan", "--Ns", "3", "4"}).code == kExitConfig);
        CHECK(run({"error-scan", "--architecture", "ring"}).code == kExitConfig);
        const Run r = run({"serial", "--input", "7"});
        CHECK(r.code == kExitConfig);
        CHECK(r.err.find("input") != std::string::npos);
    }

    TEST_CASE("help exits cleanly") {
        const Run r = run({"--help"});
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("busgate") != std::string::npos);
    }

    TEST_CASE("bounds") {
        const json j = run_json({"bounds", "--ratio", "100"});
        CHECK(j["schema"] == kOutputSchema);
        CHECK(j["command"] == "bounds");
        CHECK(j["summary"]["N_max"] == 60880);
        CHECK(j["summary"]["n_max"] == 78);
        CHECK(j["rows"].empty());

        const Run csv = run({"bounds"});
        REQUIRE(csv.code == kExitOk);
        CHECK(first_line(csv.out).find("N_max") != std::string::npos);
        CHECK(csv.out.find("60880") != std::string::npos);
    }

    TEST_CASE("wstate") {
        const json j = run_json({"wstate", "--protocol", "two", "--n", "3"});
        CHECK(format_number(j["summary"]["p_formula"].get<double>()) == "0.853333333333");
        CHECK(j["summary"]["p_sim"].get<double>() == doctest::Approx(192.0 / 225.0).epsilon(1e-10));
        CHECK(j["summary"]["bus_gate"] == true);
        const json one = run_json({"wstate", "--protocol", "one", "--n", "3"});
        CHECK(one["summary"]["p_formula"].get<double>() == doctest::Approx(0.75));
        CHECK(one["summary"]["bus_gate"] == false);
    }

    TEST_CASE("busgate") {
        const json even = run_json({"busgate", "--n", "4"});
        CHECK(even["summary"]["is_identity"] == true);
        const json odd = run_json({"busgate", "--n", "3", "--delta", "1e-3", "--trials", "20"});
        CHECK(odd["summary"]["is_identity"] == false);
        CHECK(odd["rows"].size() == 2);
        for (const auto& row : odd["rows"]) {
            CHECK(row["phase_re"].get<double>() == doctest::Approx(row["expected_re"].get<double>()));
            CHECK(row["phase_im"].get<double>() == doctest::Approx(row["expected_im"].get<double>()));
        }
        CHECK(odd["summary"]["worst_infidelity"].get<double>() < odd["summary"]["infidelity_bound"].get<double>());
        CHECK(std::abs(odd["summary"]["timing_ratio"].get<double>() - 1.0) < 0.01);

        const Run csv = run({"busgate", "--n", "3"});
        CHECK(first_line(csv.out) == "two_j,phase_re,phase_im,expected_re,expected_im");
    }

    TEST_CASE("spectrum and scans") {
        const Run s = run({"spectrum", "--N", "5", "--levels", "4"});
        REQUIRE(s.code == kExitOk);
        CHECK(first_line(s.out) == "index,energy,sz");
        const json sj = run_json({"spectrum", "--N", "5", "--nodes", "1", "--J_q", "0.1", "--levels", "6"});
        CHECK(sj["rows"].size() == 6);
        CHECK(sj["rows"][0]["energy"].get<double>() <= sj["rows"][5]["energy"].get<double>());

        const json g = run_json({"gap-scan", "--Ns", "3", "5", "7", "9", "--fit-min", "3"});
        CHECK(g["rows"].size() == 4);
        CHECK(g["summary"]["fit"]["exponent"].get<double>() < -0.6);

        const json e = run_json({"jeff-scan", "--Ns", "5", "7", "9", "--fit-min", "5"});
        CHECK(e["rows"].size() == 3);
        CHECK(e["summary"]["fit"]["exponent"].get<double>() < 0.0);
    }

    TEST_CASE("error scans") {
        const json chain = run_json({"error-scan", "--Ns", "3", "4", "5", "--trials", "20", "--seed", "4"});
        REQUIRE(chain["rows"].size() == 3);
        CHECK(chain["rows"][0]["gates"] == 3);
        CHECK(chain["rows"][0]["seed"] == 4);
        const json again = run_json({"error-scan", "--Ns", "3", "4", "5", "--trials", "20", "--seed", "4"});
        CHECK(again == chain);

        const json bus = run_json({"error-scan", "--architecture", "bus", "--trials", "20"});
        CHECK(bus["rows"].size() == 3);
        CHECK(bus["summary"]["max_over_min"].get<double>() < 1.05);

        const Run csv = run({"error-scan", "--Ns", "3", "4", "5", "--trials", "5"});
        CHECK(first_line(csv.out) == "N,gates,mean_eps,stderr,delta,trials,seed");
    }

    TEST_CASE("serial") {
        const json j = run_json({"serial", "--N", "5", "--bus-model", "effective", "--samples", "3"});
        CHECK(j["summary"]["fidelity"].get<double>() > 0.999);
        CHECK(j["rows"].size() > 0);
        CHECK(j["summary"]["crossover_N"].is_number());
        CHECK(run({"serial", "--N", "6"}).code != kExitOk);
    }

    TEST_CASE("config files") {
        const auto dir = scratch_dir("config");
        const auto cfg = dir / "run.ini";
        {
            std::ofstream f(cfg);
            f << "ratio=10\nformat=json\n";
        }
        const Run r = run({"bounds", "--config", cfg.string()});
        REQUIRE(r.code == kExitOk);
        const json j = json::parse(r.out);
        CHECK(j["summary"]["n_max"] == 16);

        const Run flag = run({"bounds", "--config", cfg.string(), "--ratio", "100"});
        REQUIRE(flag.code == kExitOk);
        CHECK(json::parse(flag.out)["summary"]["n_max"] == 78);

        {
            std::ofstream f(dir / "bad.ini");
            f << "ratio=10\nbogus_key=1\n";
        }
        CHECK(run({"bounds", "--config", (dir / "bad.ini").string()}).code == kExitConfig);
        CHECK(run({"bounds", "--config", (dir / "missing.ini").string()}).code == kExitConfig);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("output directory") {
        const auto dir = scratch_dir("out");
        const Run r = run({"wstate", "--n", "2", "--output-dir", dir.string(), "--format", "json"});
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.empty());
        std::ifstream f(dir / "wstate.json");
        REQUIRE(f.good());
        const json j = json::parse(f);
        CHECK(j["summary"]["p_formula"].get<double>() == doctest::Approx(8.0 / 9.0));
        CHECK(run({"bounds", "--output-dir", dir.string(), "--quiet"}).err.empty());
        CHECK(std::filesystem::exists(dir / "bounds.csv"));
        std::filesystem::remove_all(dir);
    }
}
