// End-to-end checks of the fansq binary: spawns the real executable, parses
// its CSV/JSON output and verifies exit codes. The binary path arrives as
// argv[1] from CTest.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

#include "testkit.hpp"

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string g_bin;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    const std::string cmd = g_bin + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            csv.header = cells;
            first = false;
        } else {
            std::vector<double> row;
            for (const auto& c : cells) row.push_back(std::stod(c));
            csv.rows.push_back(std::move(row));
        }
    }
    return csv;
}

void test_state() {
    const RunResult fan = run("state --kind fan --k 2 --xi 0.5");
    CHECK(fan.exit_code == 0, "state fan exits 0");
    const Csv csv = parse_csv(fan.out);
    CHECK(csv.header == std::vector<std::string>({"n", "re_amp", "im_amp", "p"}),
          "state CSV header");
    CHECK(!csv.rows.empty(), "state rows present");
    for (const auto& row : csv.rows) {
        const int n = static_cast<int>(row[0]);
        if (n % 4 != 0) {
            CHECK(row[3] == 0.0, "fan P(n) = 0 off the 2K lattice");
        }
    }
    CHECK(csv.rows[0][3] > 0.9, "fan P(0) dominates at small xi");

    // determinism: identical invocations produce identical bytes
    const RunResult again = run("state --kind fan --k 2 --xi 0.5");
    CHECK(fan.out == again.out, "byte-identical reruns");

    // Poisson column for the coherent case
    const RunResult cs = run("state --kind kncs --k 1 --j 0 --xi 0.5");
    CHECK(cs.exit_code == 0, "state kncs exits 0");
    const Csv pcsv = parse_csv(cs.out);
    for (const auto& row : pcsv.rows) {
        const int n = static_cast<int>(row[0]);
        const double want = std::exp(-0.25 + 2.0 * n * std::log(0.5) - std::lgamma(n + 1.0));
        CHECK(std::abs(row[3] - want) < 1e-12, "Poisson weight in the CSV");
    }

    // xi = 0 collapses to the single vacuum row; --k defaults to 1
    const RunResult vac = run("state --xi 0");
    const Csv vcsv = parse_csv(vac.out);
    CHECK(vac.exit_code == 0, "state works without --k");
    CHECK(vcsv.rows.size() == 1 && vcsv.rows[0][0] == 0.0 && vcsv.rows[0][3] == 1.0,
          "xi = 0 emits one row with P = 1");

    // JSON variant
    const RunResult js = run("state --kind fan --k 2 --xi 0.5 --format json");
    const json j = json::parse(js.out);
    CHECK(j["schema_version"] == 1, "state JSON schema version");
    CHECK(j["command"] == "state" && j["rows"].is_array() && !j["rows"].empty(),
          "state JSON rows");
}

void test_squeeze() {
    const RunResult flat = run("squeeze --k 2 --n 2 --xi 0.7 --grid 16");
    CHECK(flat.exit_code == 0, "squeeze exits 0");
    const Csv csv = parse_csv(flat.out);
    CHECK(csv.header.size() == 3 && csv.header[2] == "s_analytic",
          "dual columns for a supported pair");
    double lo = 1e300, hi = -1e300;
    for (const auto& row : csv.rows) {
        lo = std::min(lo, row[1]);
        hi = std::max(hi, row[1]);
        CHECK(std::abs(row[1] - row[2]) < 1e-9, "numeric and analytic columns agree");
    }
    CHECK(hi - lo < 1e-10 && lo > 0.0, "N = 2 column constant and positive");

    const RunResult cs = run("squeeze --k 1 --n 4 --xi 0.5 --kind coherent --grid 8");
    for (const auto& row : parse_csv(cs.out).rows) {
        CHECK(std::abs(row[1]) < 1e-10, "coherent squeeze column is zero");
    }

    // minima of the (4,8) scan at odd multiples of pi/8 (indices 4, 12, ... on
    // a 64 grid)
    const RunResult f48 = run("squeeze --k 4 --n 8 --xi 0.754939 --grid 64");
    const Csv s48 = parse_csv(f48.out);
    for (int idx : {4, 12, 20, 28, 36, 44, 52, 60}) {
        const double here = s48.rows[idx][1];
        CHECK(here < s48.rows[(idx + 63) % 64][1] && here < s48.rows[(idx + 1) % 64][1],
              "scan minimum at odd pi/8");
        CHECK(here < 0.0, "squeezed at the minimum");
    }

    // degrees flag rescales the angle column
    const RunResult deg = run("squeeze --k 2 --n 2 --xi 0.7 --grid 16 --degrees");
    const Csv dcsv = parse_csv(deg.out);
    CHECK(std::abs(dcsv.rows[1][0] - 22.5) < 1e-12, "degrees on the wire when asked");
}

void test_report() {
    const RunResult rep = run("report --k 2 --n 4");
    CHECK(rep.exit_code == 0, "report exits 0");
    const json j = json::parse(rep.out);
    CHECK(j["schema_version"] == 1, "report schema version");
    CHECK(std::abs(j["xi_c"].get<double>() - 0.796541) < 1e-4, "report xi_c");
    CHECK(std::abs(j["xi_m"].get<double>() - 0.669272) < 1e-4, "report xi_m");
    CHECK(j["s_min"].get<double>() < 0.0, "report s_min");
    CHECK(j["directions_sq"].size() == 4 && j["directions_st"].size() == 4,
          "report directions");
    CHECK(j["meta"]["route"] == "reference", "report route metadata");

    const RunResult none = run("report --k 2 --n 2");
    CHECK(none.exit_code == 4, "no squeezing for N < 2K exits 4");

    const RunResult num = run("report --k 2 --n 4 --numeric");
    const json jn = json::parse(num.out);
    CHECK(jn["meta"]["route"] == "moments", "numeric flag forces the moments route");
    CHECK(std::abs(jn["xi_c"].get<double>() - j["xi_c"].get<double>()) < 1e-6,
          "routes agree for (2,4)");

    const RunResult r48 = run("report --k 4 --n 8");
    const json j48 = json::parse(r48.out);
    CHECK(std::abs(j48["xi_m"].get<double>() - 0.754939) < 1e-4, "(4,8) report xi_m");
    CHECK(j48["directions_sq"].size() == 8, "(4,8) has 8 squeezing directions");
}

void test_area_geometry_flower() {
    const RunResult area = run("area --k 2 --n 6 --xi 0.659657 --format json");
    CHECK(area.exit_code == 0, "area exits 0");
    const json ja = json::parse(area.out);
    const double circle = kPi * std::pow(15.0 / 8.0, 2);
    CHECK(ja["area_analytic"].get<double>() > circle, "fan area exceeds the circle");
    CHECK(std::abs(ja["area_analytic"].get<double>() - ja["area_numeric"].get<double>()) <
              1e-6 * ja["area_analytic"].get<double>(),
          "area columns agree");
    CHECK(std::abs(ja["circle_area"].get<double>() - circle) < 1e-12, "circle area column");

    const RunResult geo = run("geometry --mode xiq --k 8 --xi 1");
    const Csv gcsv = parse_csv(geo.out);
    CHECK(gcsv.rows.size() == 8, "8 fan points");
    for (const auto& row : gcsv.rows) {
        const double angle = std::atan2(row[2], row[1]);
        const double want = kPi * row[0] / 8.0;
        CHECK(std::abs(angle - want) < 1e-12, "fan point angles step pi/8");
    }

    const RunResult fl = run("flower --k 2 --n 6 --xi 0.659657 --grid 512");
    double hi = -1e300;
    for (const auto& row : parse_csv(fl.out).rows) hi = std::max(hi, row[1]);
    CHECK(std::abs(hi - 1.07) < 0.01, "big-wing radius 1.07");

    const RunResult flc = run("flower --kind coherent --n 4 --xi 0.7 --grid 64");
    for (const auto& row : parse_csv(flc.out).rows) {
        CHECK(std::abs(row[1]) < 1e-10, "coherent flower collapses to the origin");
    }
}

void test_errors_and_out() {
    CHECK(run("definitely-not-a-command").exit_code == 2, "unknown command exits 2");
    CHECK(run("squeeze --k 2 --xi 0.5").exit_code == 2, "missing --n exits 2");
    CHECK(run("state --k 2 --kind fan --xi 1.2 --cutoff 5").exit_code == 3,
          "overtight cutoff exits 3");
    CHECK(run("state --k 2 --kind fan --xi 0.5 --bogus 1").exit_code == 2,
          "unknown flag exits 2");
    CHECK(run("report --k 3 --n 6").exit_code == 2, "odd K exits 2");

    const auto path = std::filesystem::temp_directory_path() / "fansq_cli_out_test.csv";
    std::filesystem::remove(path);
    const RunResult direct = run("geometry --mode chi --k 4 --xi 1");
    const RunResult filed = run("geometry --mode chi --k 4 --xi 1 --out " + path.string());
    CHECK(filed.exit_code == 0 && filed.out.empty(), "--out writes no stdout");
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == direct.out, "--out file matches stdout bytes");
    std::filesystem::remove(path);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-fansq-binary>\n";
        return 2;
    }
    g_bin = argv[1];
    test_state();
    test_squeeze();
    test_report();
    test_area_geometry_flower();
    test_errors_and_out();
    return testkit::summary("cli");
}
