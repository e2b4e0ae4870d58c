// fansq: fan-state squeezing toolbox.
//
// Subcommands emit machine-readable scan data, landmark reports and
// plot-ready polar profiles as CSV or JSON. All diagnostics go to stderr;
// exit codes: 0 success, 2 usage/validation, 3 numeric failure,
// 4 empty result (no squeezing).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fansq/analysis.hpp"
#include "fansq/errors.hpp"
#include "fansq/fock.hpp"
#include "fansq/squeezing.hpp"
#include "fansq/states.hpp"
#include "fansq/uncertainty.hpp"

namespace {

using json = nlohmann::json;
using namespace fansq;

constexpr double kPi = std::numbers::pi;
constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Args {
    std::map<std::string, std::string> kv;
    std::set<std::string> flags;

    std::string str(const std::string& k, const std::string& dflt) const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }

    double real(const std::string& k, std::optional<double> dflt = {}) const {
        auto it = kv.find(k);
        if (it == kv.end()) {
            if (dflt) return *dflt;
            throw UsageError("missing required flag --" + k);
        }
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw UsageError("--" + k + ": expected a real number, got '" + it->second + "'");
        }
    }

    int integer(const std::string& k, std::optional<int> dflt = {}) const {
        auto it = kv.find(k);
        if (it == kv.end()) {
            if (dflt) return *dflt;
            throw UsageError("missing required flag --" + k);
        }
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw UsageError("--" + k + ": expected an integer, got '" + it->second + "'");
        }
    }
};

const std::set<std::string> kBoolFlags = {"degrees", "numeric"};

Args parse_args(int argc, char** argv, int first) {
    Args a;
    for (int i = first; i < argc; ++i) {
        std::string tok = argv[i];
        if (tok.rfind("--", 0) != 0 || tok.size() <= 2) {
            throw UsageError("unexpected argument '" + tok + "'");
        }
        const std::string key = tok.substr(2);
        if (kBoolFlags.count(key)) {
            a.flags.insert(key);
            continue;
        }
        if (i + 1 >= argc) throw UsageError("flag --" + key + " needs a value");
        a.kv[key] = argv[++i];
    }
    return a;
}

void check_known(const Args& a, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : a.kv) {
        if (!allowed.count(k)) throw UsageError("unknown flag --" + k);
    }
    for (const auto& k : a.flags) {
        if (!allowed.count(k)) throw UsageError("unknown flag --" + k);
    }
}

NonlinearFn nonlinearity_from(const Args& a) {
    const std::string name = a.str("f", "unit");
    auto f = named_nonlinearity(name);
    if (!f) throw UsageError("unknown nonlinearity '" + name + "' (use unit or inv-sqrt)");
    return *f;
}

CutoffPolicy cutoff_from(const Args& a, int headroom) {
    const std::string c = a.str("cutoff", "auto");
    if (c == "auto") return CutoffPolicy::automatic(headroom);
    try {
        std::size_t pos = 0;
        const int v = std::stoi(c, &pos);
        if (pos != c.size() || v < 0) throw std::invalid_argument("");
        return CutoffPolicy::exact(v);
    } catch (const std::exception&) {
        throw UsageError("--cutoff: expected a nonnegative integer or 'auto'");
    }
}

SqueezeRoute route_from(const Args& a) {
    if (a.flags.count("numeric")) return SqueezeRoute::moments;
    const std::string r = a.str("route", "reference");
    if (r == "reference") return SqueezeRoute::reference;
    if (r == "closed-form") return SqueezeRoute::closed_form;
    if (r == "moments") return SqueezeRoute::moments;
    throw UsageError("unknown route '" + r + "' (reference, closed-form, moments)");
}

const char* route_name(SqueezeRoute r) {
    switch (r) {
        case SqueezeRoute::reference: return "reference";
        case SqueezeRoute::closed_form: return "closed-form";
        case SqueezeRoute::moments: return "moments";
    }
    return "?";
}

std::string format_from(const Args& a) {
    const std::string f = a.str("format", "csv");
    if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
    return f;
}

void emit(const Args& a, const std::string& payload) {
    if (a.kv.count("out")) {
        std::ofstream out(a.kv.at("out"), std::ios::binary);
        if (!out) throw UsageError("cannot open output file '" + a.kv.at("out") + "'");
        out << payload;
    } else {
        std::cout << payload;
    }
}

double angle_out(const Args& a, double radians) {
    return a.flags.count("degrees") ? radians * 180.0 / kPi : radians;
}

FockVector build_state_kind(const std::string& kind, double xi, int K, int j,
                            const NonlinearFn& f, const CutoffPolicy& pol) {
    if (kind == "kncs") {
        KncsSpec spec;
        spec.xi = xi;
        spec.K = K;
        spec.j = j;
        spec.f = f;
        spec.cutoff = pol;
        return build_kncs(spec);
    }
    if (kind == "sekncs") return build_sekncs(xi, K, f, pol);
    if (kind == "fan") return build_fan(xi, K, f, pol);
    if (kind == "coherent") return build_coherent(xi, pol);
    throw UsageError("unknown kind '" + kind + "' (kncs, sekncs, fan, coherent)");
}

// ---------------------------------------------------------------------------

int cmd_state(const Args& a) {
    check_known(a, {"kind", "k", "j", "xi", "f", "cutoff", "format", "out"});
    const std::string kind = a.str("kind", "kncs");
    const double xi = a.real("xi");
    const int K = a.integer("k", 1);
    const int j = a.integer("j", 0);
    if (xi < 0.0) throw UsageError("--xi must be nonnegative");
    const FockVector v = build_state_kind(kind, xi, K, j, nonlinearity_from(a), cutoff_from(a, 12));

    int last = 0;
    for (int n = 0; n <= v.n_max; ++n) {
        if (std::abs(v.amps[n]) > 0.0) last = n;
    }
    const auto p = number_distribution(v);

    if (format_from(a) == "csv") {
        std::ostringstream os;
        os << "n,re_amp,im_amp,p\n";
        for (int n = 0; n <= last; ++n) {
            os << n << ',' << fmt17(v.amps[n].real()) << ',' << fmt17(v.amps[n].imag()) << ','
               << fmt17(p[n]) << '\n';
        }
        emit(a, os.str());
    } else {
        json rows = json::array();
        for (int n = 0; n <= last; ++n) {
            rows.push_back({{"n", n},
                            {"re_amp", v.amps[n].real()},
                            {"im_amp", v.amps[n].imag()},
                            {"p", p[n]}});
        }
        json out = {{"schema_version", kSchemaVersion}, {"command", "state"}, {"kind", kind},
                    {"k", K},  {"j", j},  {"xi", xi},   {"n_max", v.n_max},   {"rows", rows}};
        emit(a, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_squeeze(const Args& a) {
    check_known(a, {"kind", "k", "j", "n", "xi", "f", "grid", "cutoff", "format", "out",
                    "degrees"});
    const std::string kind = a.str("kind", "fan");
    const int N = a.integer("n");
    const double xi = a.real("xi");
    const int grid = a.integer("grid", 64);
    if (grid < 8) throw UsageError("--grid must be >= 8");
    if (xi < 0.0) throw UsageError("--xi must be nonnegative");
    const NonlinearFn f = nonlinearity_from(a);

    std::vector<double> phis, s_num;
    std::optional<std::vector<double>> s_ana;
    if (kind == "fan") {
        const int K = a.integer("k");
        const auto samples = squeeze_scan(K, N, xi, grid, f);
        const bool dual = samples.size() == 2 * static_cast<std::size_t>(grid);
        if (dual) s_ana.emplace();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (samples[i].source == SqueezeSample::Source::numeric) {
                phis.push_back(samples[i].phi);
                s_num.push_back(samples[i].S);
            } else {
                s_ana->push_back(samples[i].S);
            }
        }
    } else {
        const int K = a.integer("k", 1);
        const int j = a.integer("j", 0);
        const FockVector v =
            build_state_kind(kind, xi, K, j, f, cutoff_from(a, std::max(12, N + 4)));
        for (int i = 0; i < grid; ++i) {
            const double phi = 2.0 * kPi * i / grid;
            phis.push_back(phi);
            s_num.push_back(squeeze_numeric(v, phi, N));
        }
    }

    if (format_from(a) == "csv") {
        std::ostringstream os;
        os << "phi,s_numeric" << (s_ana ? ",s_analytic" : "") << '\n';
        for (std::size_t i = 0; i < phis.size(); ++i) {
            os << fmt17(angle_out(a, phis[i])) << ',' << fmt17(s_num[i]);
            if (s_ana) os << ',' << fmt17((*s_ana)[i]);
            os << '\n';
        }
        emit(a, os.str());
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < phis.size(); ++i) {
            json row = {{"phi", angle_out(a, phis[i])}, {"s_numeric", s_num[i]}};
            if (s_ana) row["s_analytic"] = (*s_ana)[i];
            rows.push_back(row);
        }
        json out = {{"schema_version", kSchemaVersion},
                    {"command", "squeeze"},
                    {"kind", kind},
                    {"n", N},
                    {"xi", xi},
                    {"rows", rows}};
        emit(a, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_report(const Args& a) {
    check_known(a, {"k", "n", "bracket-lo", "bracket-hi", "route", "numeric", "format", "out",
                    "degrees"});
    if (a.str("format", "json") != "json") {
        throw UsageError("report emits JSON only");
    }
    const int K = a.integer("k");
    const int N = a.integer("n");
    const double lo = a.real("bracket-lo", 0.01);
    const double hi = a.real("bracket-hi", 2.0);
    const SqueezeRoute route = route_from(a);

    const CriticalReport rep = critical_report(K, N, route, {lo, hi});

    json sq = json::array(), st = json::array();
    for (double d : rep.directions_sq) sq.push_back(angle_out(a, d));
    for (double d : rep.directions_st) st.push_back(angle_out(a, d));
    json out = {{"schema_version", kSchemaVersion},
                {"command", "report"},
                {"k", rep.K},
                {"n", rep.N},
                {"xi_c", rep.xi_c},
                {"xi_m", rep.xi_m},
                {"s_min", rep.s_min},
                {"directions_sq", sq},
                {"directions_st", st},
                {"meta",
                 {{"bracket", {rep.bracket_lo, rep.bracket_hi}},
                  {"xi_tol", rep.xi_tol},
                  {"cutoff_used", rep.cutoff_used},
                  {"route", route_name(rep.route)}}}};
    emit(a, out.dump(2) + "\n");
    return 0;
}

int cmd_flower(const Args& a) {
    check_known(a, {"kind", "k", "n", "xi", "grid", "route", "numeric", "format", "out",
                    "degrees"});
    const std::string kind = a.str("kind", "fan");
    const int N = a.integer("n");
    const double xi = a.real("xi");
    const int grid = a.integer("grid", 256);
    if (xi < 0.0) throw UsageError("--xi must be nonnegative");

    std::vector<std::pair<double, double>> prof;
    if (kind == "fan") {
        prof = flower_profile(a.integer("k"), N, xi, grid, route_from(a));
    } else if (kind == "coherent") {
        prof = flower_profile(build_coherent(xi, CutoffPolicy::automatic(N + 4)), N, grid);
    } else {
        throw UsageError("flower supports kind fan or coherent");
    }

    if (format_from(a) == "csv") {
        std::ostringstream os;
        os << "phi,s\n";
        for (const auto& [phi, s] : prof) os << fmt17(angle_out(a, phi)) << ',' << fmt17(s) << '\n';
        emit(a, os.str());
    } else {
        json rows = json::array();
        for (const auto& [phi, s] : prof) rows.push_back({{"phi", angle_out(a, phi)}, {"s", s}});
        json out = {{"schema_version", kSchemaVersion}, {"command", "flower"}, {"kind", kind},
                    {"n", N},  {"xi", xi},  {"rows", rows}};
        emit(a, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_area(const Args& a) {
    check_known(a, {"k", "n", "xi", "f", "grid", "cutoff", "format", "out"});
    const int K = a.integer("k");
    const int N = a.integer("n");
    const double xi = a.real("xi");
    const int grid = a.integer("grid", 1024);
    if (xi < 0.0) throw UsageError("--xi must be nonnegative");
    const FockVector fan =
        build_fan(xi, K, nonlinearity_from(a), cutoff_from(a, std::max(12, N + 4)));
    const AreaReport rep = area_report(fan, K, N, xi, grid);

    if (format_from(a) == "csv") {
        std::ostringstream os;
        os << "k,n,xi,area_analytic,area_numeric,circle_area\n";
        os << rep.K << ',' << rep.N << ',' << fmt17(rep.xi_abs) << ','
           << fmt17(rep.area_analytic) << ',' << fmt17(rep.area_numeric) << ','
           << fmt17(rep.circle_area) << '\n';
        emit(a, os.str());
    } else {
        json out = {{"schema_version", kSchemaVersion},
                    {"command", "area"},
                    {"k", rep.K},
                    {"n", rep.N},
                    {"xi", rep.xi_abs},
                    {"area_analytic", rep.area_analytic},
                    {"area_numeric", rep.area_numeric},
                    {"circle_area", rep.circle_area}};
        emit(a, out.dump(2) + "\n");
    }
    return 0;
}

int cmd_geometry(const Args& a) {
    check_known(a, {"mode", "k", "xi", "format", "out"});
    const std::string mode = a.str("mode", "chi");
    const int K = a.integer("k");
    const double xi = a.real("xi", 1.0);
    GeometryMode gm;
    if (mode == "chi") {
        gm = GeometryMode::chi;
    } else if (mode == "xiq") {
        gm = GeometryMode::xiq;
    } else {
        throw UsageError("--mode must be chi or xiq");
    }
    const auto pts = geometry_points(xi, K, gm);

    if (format_from(a) == "csv") {
        std::ostringstream os;
        os << "idx,re,im\n";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            os << i << ',' << fmt17(pts[i].real()) << ',' << fmt17(pts[i].imag()) << '\n';
        }
        emit(a, os.str());
    } else {
        json rows = json::array();
        for (const auto& p : pts) rows.push_back({{"re", p.real()}, {"im", p.imag()}});
        json out = {{"schema_version", kSchemaVersion}, {"command", "geometry"},
                    {"mode", mode},  {"k", K},  {"xi", xi},  {"points", rows}};
        emit(a, out.dump(2) + "\n");
    }
    return 0;
}

void print_usage(std::ostream& os) {
    os << "usage: fansq <command> [flags]\n"
          "commands:\n"
          "  state     --kind kncs|sekncs|fan|coherent --xi X --k K [--j J] [--f NAME] [--cutoff C]\n"
          "  squeeze   --k K --n N --xi X [--kind fan|coherent] [--grid G] [--f NAME]\n"
          "  report    --k K --n N [--bracket-lo A --bracket-hi B] [--route R | --numeric]\n"
          "  flower    --k K --n N --xi X [--grid G] [--kind fan|coherent] [--route R]\n"
          "  area      --k K --n N --xi X [--grid G] [--f NAME]\n"
          "  geometry  --mode chi|xiq --k K [--xi X]\n"
          "common flags: --format csv|json, --out PATH, --degrees\n"
          "routes: reference (default), closed-form, moments\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage(std::cerr);
        return 2;
    }
    const std::string cmd = argv[1];
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
        print_usage(std::cout);
        return 0;
    }
    try {
        const Args a = parse_args(argc, argv, 2);
        if (cmd == "state") return cmd_state(a);
        if (cmd == "squeeze") return cmd_squeeze(a);
        if (cmd == "report") return cmd_report(a);
        if (cmd == "flower") return cmd_flower(a);
        if (cmd == "area") return cmd_area(a);
        if (cmd == "geometry") return cmd_geometry(a);
        throw UsageError("unknown command '" + cmd + "'");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
