// cubicurve: command-line front end for the escape-region library.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubicurve/dynamics.hpp"
#include "cubicurve/errors.hpp"
#include "cubicurve/finder.hpp"
#include "cubicurve/geometry.hpp"
#include "cubicurve/grid.hpp"
#include "cubicurve/quadratic.hpp"
#include "cubicurve/realcurve.hpp"
#include "cubicurve/solver.hpp"

using namespace cubicurve;
using nlohmann::ordered_json;

namespace {

// Malformed flag values; reported like parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

cplx parse_complex(const std::string& text) {
    std::istringstream in(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw UsageError("expected re,im but got '" + text + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) throw UsageError("expected re,im but got '" + text + "'");
    }
    if (in >> comma) throw UsageError("trailing characters in '" + text + "'");
    return {re, im};
}

Kneading parse_kneading(const std::string& text) {
    try {
        return Kneading::parse(text);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

void round_floats(ordered_json& j) {
    if (j.is_number_float()) j = round12(j.get<double>());
    else if (j.is_structured())
        for (auto& x : j) round_floats(x);
}

// Components below 1e-13 of the modulus are rounding noise and print as 0.
ordered_json cjson(cplx z) {
    auto clean = [&](double x) { return std::abs(x) <= 1e-13 * std::abs(z) ? 0.0 : x; };
    return ordered_json::array({clean(z.real()), clean(z.imag())});
}

ordered_json mjson(const Monomial& m) { return {{"coeff", cjson(m.coeff)}, {"exp", to_string(m.exp)}}; }

std::string cstr(cplx z) {
    std::ostringstream s;
    s << std::setprecision(6) << round12(z.real());
    if (z.imag() != 0.0) s << std::showpos << round12(z.imag()) << "i";
    return s.str();
}

// Cell text for the human tables.
std::string cell(const ordered_json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) {
        std::ostringstream s;
        s << std::setprecision(8) << j.get<double>();
        return s.str();
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cstr({j[0].get<double>(), j[1].get<double>()});
    if (j.is_array()) {
        std::string out;
        for (const auto& x : j) out += (out.empty() ? "" : " ") + cell(x);
        return out;
    }
    if (j.is_object() && j.contains("coeff") && j.contains("exp"))
        return "(" + cell(j["coeff"]) + ")x^" + j["exp"].get<std::string>();
    return j.dump();
}

// Display width in code points.
size_t columns(const std::string& s) {
    return std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; });
}

void print_table(std::ostream& out, const ordered_json& rows) {
    std::vector<std::string> keys;
    for (const auto& r : rows)
        for (auto it = r.begin(); it != r.end(); ++it)
            if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) keys.push_back(it.key());
    std::vector<std::vector<std::string>> text;
    std::vector<size_t> width;
    for (const auto& k : keys) width.push_back(k.size());
    for (const auto& r : rows) {
        std::vector<std::string> line;
        for (size_t c = 0; c < keys.size(); ++c) {
            line.push_back(r.contains(keys[c]) ? cell(r[keys[c]]) : "");
            width[c] = std::max(width[c], columns(line.back()));
        }
        text.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
        for (size_t c = 0; c < line.size(); ++c) out << line[c] << std::string(width[c] + 2 - columns(line[c]), ' ');
        out << "\n";
    };
    emit(keys);
    for (const auto& line : text) emit(line);
}

void print_pretty(std::ostream& out, const ordered_json& j) {
    if (j.is_array() && !j.empty() && j[0].is_object()) {
        print_table(out, j);
        return;
    }
    if (!j.is_object()) {
        out << cell(j) << "\n";
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!(it->is_array() && !it->empty() && (*it)[0].is_object())) out << it.key() << ": " << cell(*it) << "\n";
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it->is_array() && !it->empty() && (*it)[0].is_object()) {
            out << "\n" << it.key() << "\n";
            print_table(out, *it);
        }
}

struct Output {
    bool pretty = false;
    std::string path;

    void write(ordered_json j) const {
        round_floats(j);
        std::ostringstream s;
        if (pretty) print_pretty(s, j);
        else s << j.dump() << "\n";
        if (path.empty()) {
            std::cout << s.str();
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw InvalidArgument("cannot open " + path);
        f << s.str();
    }
};

int thread_count() {
    if (const char* env = std::getenv("CUBICURVE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ordered_json region_json(const RegionDescriptor& r) { return ordered_json::parse(to_json(r).dump()); }

// First two nonzero terms of a series.
ordered_json two_terms(const PuiseuxSeries& u) {
    ordered_json out = ordered_json::array();
    for (const auto& [k, c] : u.terms()) {
        if (std::abs(c) < 1e-12) continue;
        out.push_back(mjson({c, Rational(k, u.mu())}));
        if (out.size() == 2) break;
    }
    return out;
}

ordered_json primitive_table(int trunc) {
    ordered_json rows = ordered_json::array();
    for (int p = 2; p <= 4; ++p) {
        for (const auto& k : all_kneadings(p)) {
            if (k.trivial()) continue;
            std::map<std::string, std::vector<SolutionVector>> groups;
            std::vector<std::string> order;
            for (auto& s : solve_primitive(k, trunc)) {
                auto label = region_label(k, s.monomials());
                if (!groups.count(label)) order.push_back(label);
                groups[label].push_back(std::move(s));
            }
            for (const auto& label : order) {
                const auto& g = groups[label];
                ordered_json row;
                row["label"] = label;
                row["#"] = g.size();
                row["mu"] = g.front().mu();
                for (int j = 1; j < p; ++j) row["u" + std::to_string(j)] = two_terms(g.front().u(j));
                rows.push_back(row);
            }
        }
    }
    return rows;
}

ordered_json nontrivial_table(int trunc) {
    ordered_json rows = ordered_json::array();
    for (int p = 2; p <= 4; ++p) {
        std::map<std::string, std::vector<RegionDescriptor>> groups;
        std::vector<std::string> order;
        for (auto& r : solved_regions(p, trunc)) {
            if (r.kneading.trivial()) continue;
            if (!groups.count(r.label)) order.push_back(r.label);
            groups[r.label].push_back(std::move(r));
        }
        for (const auto& label : order) {
            const auto& g = groups[label];
            const auto& r = g.front();
            ordered_json row;
            row["label"] = label;
            for (int j = 1; j <= 3; ++j) row["m" + std::to_string(j)] = j < p ? mjson(r.monomials[j - 1]) : ordered_json(nullptr);
            row["nu"] = r.nu;
            row["mu"] = r.mu;
            row["#"] = g.size();
            auto tl = t_leading(r);
            row["t"] = mjson(tl.t);
            rows.push_back(row);
        }
    }
    return rows;
}

ordered_json quadratic_table() {
    ordered_json rows = ordered_json::array();
    for (int r = 1; r <= 4; ++r)
        for (const auto& q : centers(r)) {
            if (q.c.imag() < -1e-12) continue;
            rows.push_back({{"r", r}, {"c", cjson(q.c)}, {"psi", cjson(q.psi())}});
        }
    return rows;
}

ordered_json euler_table(bool enumerate) {
    ordered_json rows = ordered_json::array();
    for (int p = 1; p <= 4; ++p) {
        ordered_json row{{"p", p}};
        ordered_json data = to_json(euler_row(p, enumerate));
        for (auto& [k, v] : data.items()) row[k] = v;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Escape regions of the period-p curves of cubic polynomials"};
    app.require_subcommand(1);
    app.fallthrough();

    Output out;
    std::uint64_t seed = 0;
    app.add_flag("--pretty", out.pretty, "human-readable tables instead of JSON");
    app.add_option("-o,--output", out.path, "write to this path instead of stdout");
    app.add_option("--seed", seed, "seed for root-finder starting points");

    int p = 0, trunc = kDefaultTrunc;
    std::string kneading_text, signs_text;
    auto* solve = app.add_subcommand("solve-series", "Puiseux solutions for one kneading sequence");
    solve->add_option("--kneading", kneading_text, "bit string ending in 0")->required();
    solve->add_option("--signs", signs_text, "one + or - per zero bit before the last");
    solve->add_option("--trunc", trunc, "truncation in powers of xi")->check(CLI::Range(2, 64));

    EnumerateOptions eopt;
    auto* enumerate = app.add_subcommand("enumerate-regions", "regions found from fibers of the marked return map");
    enumerate->add_option("-p", p, "period")->required()->check(CLI::Range(1, 6));
    enumerate->add_option("--r1", eopt.r1, "inner radius");
    enumerate->add_option("--r2", eopt.r2, "outer radius");

    auto* gridcheck = app.add_subcommand("grid-check", "orders, grid rules and round trips for every solved region");
    gridcheck->add_option("-p", p, "period")->required()->check(CLI::Range(1, 6));
    gridcheck->add_option("--trunc", trunc)->check(CLI::Range(2, 64));

    int r = 0;
    auto* cent = app.add_subcommand("centers", "centers of the quadratic family and their psi values");
    cent->add_option("-r", r, "period")->required()->check(CLI::Range(1, 12));

    bool by_enumeration = false;
    auto* euler = app.add_subcommand("euler", "degree, Euler characteristics and genus");
    euler->add_option("-p", p, "period; all of 1..4 when omitted")->check(CLI::Range(1, 6));
    euler->add_flag("--enumerate", by_enumeration, "count regions from fibers instead of the series solver");

    std::string base_file, a_text, v_text, center_text = "0,0", size_text = "400x400";
    double scale = 0.002;
    int steps_per_unit = 512;
    auto* render_cmd = app.add_subcommand("render", "t-plane picture around a base point (binary PPM)");
    render_cmd->add_option("-p", p, "period")->required()->check(CLI::Range(1, 6));
    render_cmd->add_option("--base-file", base_file, "JSON with a, v as [re, im]");
    render_cmd->add_option("-a", a_text, "base a as re,im");
    render_cmd->add_option("--v", v_text, "base v as re,im");
    render_cmd->add_option("--center", center_text, "t offset as re,im");
    render_cmd->add_option("--scale", scale, "t units per pixel")->check(CLI::PositiveNumber);
    render_cmd->add_option("--size", size_text, "WIDTHxHEIGHT");
    render_cmd->add_option("--steps-per-unit", steps_per_unit)->check(CLI::PositiveNumber);

    double radius = 40.0;
    int samples = 720;
    auto* residue = app.add_subcommand("residue", "loop integral of dt around every ideal point");
    residue->add_option("-p", p, "period")->required()->check(CLI::Range(1, 5));
    residue->add_option("--r2", radius, "loop radius in a")->check(CLI::PositiveNumber);
    residue->add_option("--samples", samples)->check(CLI::Range(8, 1 << 20));

    std::string v0_text;
    double tol = 1e-12;
    int max_sweeps = 500;
    bool from_series = false;
    auto* findv = app.add_subcommand("find-v", "Gauss-Seidel search for v with a given kneading");
    findv->add_option("-p", p, "period, must match the kneading");
    findv->add_option("-a", a_text, "a as re,im")->required();
    findv->add_option("--kneading", kneading_text)->required();
    findv->add_option("--v0", v0_text, "starting v as re,im");
    findv->add_flag("--from-series", from_series, "start from every solved series of this kneading");
    findv->add_option("--tol", tol)->check(CLI::PositiveNumber);
    findv->add_option("--max-sweeps", max_sweeps)->check(CLI::PositiveNumber);

    std::string orientation = "both";
    bool mod_involution = false, circles = false;
    auto* real = app.add_subcommand("real-components", "components of the real and imaginary loci");
    real->add_option("-p", p, "period")->required()->check(CLI::Range(1, 9));
    real->add_option("--orientation", orientation)->check(CLI::IsMember({"plus", "minus", "both", "+", "-"}));
    real->add_flag("--mod-involution", mod_involution, "one model per pair P, I(P)");
    real->add_flag("--circles", circles, "assemble the components into circles through ideal points (p <= 5)");

    std::string which = "all";
    auto* tables = app.add_subcommand("reproduce-tables", "tables of regions, quadratic centers and Euler data");
    tables->add_option("--which", which)->check(CLI::IsMember({"primitive", "nontrivial", "quadratic", "euler", "all"}));
    tables->add_option("--trunc", trunc)->check(CLI::Range(2, 64));

    if (argc < 2) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*solve) {
            Kneading k = parse_kneading(kneading_text);
            ordered_json list = ordered_json::array();
            if (!signs_text.empty()) {
                if (static_cast<int>(signs_text.size()) != k.free_bits())
                    throw UsageError("kneading " + k.str() + " takes " + std::to_string(k.free_bits()) + " signs");
                std::vector<int> signs;
                for (char c : signs_text) {
                    if (c != '+' && c != '-') throw UsageError("signs are + or -");
                    signs.push_back(c == '+' ? 1 : -1);
                }
                auto b = branch_sweep(k, signs);
                if (!b.converged) throw NoProgress("sign sweep did not stabilise");
                list.push_back(region_json(describe(solve_graded(b.w, trunc))));
            } else {
                for (const auto& reg : solved_regions(k, trunc)) list.push_back(region_json(reg));
            }
            out.write(list);
        } else if (*enumerate) {
            eopt.seed = seed;
            ordered_json list = ordered_json::array();
            for (const auto& reg : enumerate_regions(p, eopt)) {
                ordered_json j{{"label", reg.label}, {"kneading", reg.kneading.str()}, {"mu", reg.mu}, {"nu", reg.nu}};
                ordered_json m = ordered_json::array();
                for (const auto& x : reg.monomials) m.push_back(mjson(x));
                j["monomials"] = m;
                list.push_back(j);
            }
            out.write(list);
        } else if (*gridcheck) {
            ordered_json list = ordered_json::array();
            bool all_ok = true;
            for (const auto& reg : solved_regions(p, trunc)) {
                auto orders = reg.series.orders();
                bool match = true;
                for (int j = 1; j < p; ++j) match = match && ord_from_grid(reg.grid, j) == orders[j - 1];
                bool round_trip = grid_from_orders(orders, reg.kneading) == reg.grid;
                auto rules = validate_rules(reg.grid);
                all_ok = all_ok && match && round_trip && rules.ok;
                ordered_json depths = ordered_json::array();
                for (int d : reg.grid.depths()) depths.push_back(d == kInfiniteDepth ? ordered_json("inf") : ordered_json(d));
                list.push_back({{"label", reg.label}, {"depths", depths}, {"orders_match", match},
                                {"round_trip", round_trip}, {"rules", rules.ok ? "ok" : rules.str()}});
            }
            out.write(list);
            if (!all_ok) {
                std::cerr << "Inconsistent: some grid failed a check\n";
                return 1;
            }
        } else if (*cent) {
            ordered_json list = ordered_json::array();
            for (const auto& q : centers(r)) list.push_back({{"r", r}, {"c", cjson(q.c)}, {"psi", cjson(q.psi())}});
            out.write(list);
        } else if (*euler) {
            if (p > 0) out.write(to_json(euler_row(p, by_enumeration)));
            else out.write(euler_table(by_enumeration));
            (out.pretty ? std::cout : std::cerr) << "note: " << kConnectivityCaveat << "\n";
        } else if (*render_cmd) {
            if (out.path.empty()) throw UsageError("render needs -o for the PPM file");
            CurvePoint base{10.0, 0.0, p};
            if (!base_file.empty()) {
                std::ifstream f(base_file);
                if (!f) throw UsageError("cannot read " + base_file);
                auto j = nlohmann::json::parse(f);
                base.a = {j.at("a").at(0).get<double>(), j.at("a").at(1).get<double>()};
                base.v = {j.at("v").at(0).get<double>(), j.at("v").at(1).get<double>()};
                if (j.contains("p") && j["p"].get<int>() != p) throw UsageError("base file has a different period");
            } else if (!a_text.empty() && !v_text.empty()) {
                base.a = parse_complex(a_text);
                base.v = parse_complex(v_text);
            } else {
                base.v = fiber_roots(p, base.a, true, seed).front();
            }
            TPlaneView view;
            char x = 0;
            std::istringstream size_in(size_text);
            if (!(size_in >> view.width >> x >> view.height) || x != 'x' || view.width < 1 || view.height < 1)
                throw UsageError("size must look like 800x600");
            view.center = parse_complex(center_text);
            view.scale = scale;
            view.steps_per_unit = steps_per_unit;
            auto img = render(base, view, thread_count());
            std::ofstream f(out.path, std::ios::binary);
            if (!f) throw InvalidArgument("cannot open " + out.path);
            f << to_ppm(img);
            std::map<int, int> hist;
            for (auto c : img.pixels) ++hist[c];
            ordered_json counts = ordered_json::object();
            for (auto [c, n] : hist) counts[std::to_string(c)] = n;
            ordered_json summary{{"output", out.path}, {"width", view.width}, {"height", view.height},
                                 {"base", {{"a", cjson(img.base.a)}, {"v", cjson(img.base.v)}, {"p", p}}},
                                 {"codes", counts}};
            round_floats(summary);
            std::cout << (out.pretty ? summary.dump(2) : summary.dump()) << "\n";
        } else if (*residue) {
            ordered_json list = ordered_json::array();
            for (const auto& reg : solved_regions(p)) {
                auto res = residue_at_ideal(reg, radius, samples);
                list.push_back({{"label", reg.label}, {"mu", reg.mu}, {"turns", res.turns},
                                {"residue", cjson(res.residue)}, {"abs", std::abs(res.residue)}});
            }
            out.write(list);
        } else if (*findv) {
            Kneading k = parse_kneading(kneading_text);
            if (p > 0 && p != k.p()) throw UsageError("-p does not match the kneading length");
            FinderConfig cfg{parse_complex(a_text), k, tol, max_sweeps};
            std::vector<FinderResult> results;
            if (from_series) {
                for (const auto& reg : solved_regions(k, kDefaultTrunc)) {
                    cplx root = std::pow(1.0 / (3.0 * cfg.a), 1.0 / reg.mu);
                    results.push_back(find_w(cfg, series_start(reg.series, root)));
                }
            } else {
                if (v0_text.empty()) throw UsageError("find-v needs --v0 or --from-series");
                results.push_back(find_v(cfg, parse_complex(v0_text)));
            }
            ordered_json list = ordered_json::array();
            for (const auto& res : results) {
                ordered_json j{{"status", to_string(res.status)}, {"a", cjson(res.a)}, {"v", cjson(res.v)},
                               {"sweeps", res.sweeps}, {"step", res.step}, {"residual", res.residual}};
                j["found"] = res.found ? ordered_json(res.found->str()) : ordered_json(nullptr);
                j["failed_at"] = res.failed_at ? ordered_json(*res.failed_at) : ordered_json(nullptr);
                j["warnings"] = res.warnings;
                list.push_back(j);
            }
            out.write(results.size() == 1 ? list[0] : list);
        } else if (*real) {
            std::vector<Orientation> which_o;
            if (orientation != "minus" && orientation != "-") which_o.push_back(Orientation::Plus);
            if (orientation != "plus" && orientation != "+") which_o.push_back(Orientation::Minus);
            ordered_json comps = ordered_json::array();
            for (auto o : which_o) {
                auto models = enumerate_components(p, o);
                if (mod_involution) models = modulo_involution(models);
                for (const auto& m : models) comps.push_back(to_json(m));
            }
            ordered_json j{{"p", p}, {"orientation", orientation}, {"mod_involution", mod_involution},
                           {"count", comps.size()}, {"components", comps}};
            if (circles) {
                if (p > 5) throw UsageError("--circles needs the solved regions, available for p <= 5");
                ordered_json cs = ordered_json::array();
                for (const auto& c : real_circles(p))
                    cs.push_back({{"edges", c.edges.size()}, {"vertices", c.vertices}});
                j["circles"] = cs;
            }
            out.write(j);
        } else if (*tables) {
            ordered_json j = ordered_json::object();
            if (which == "primitive" || which == "all") j["primitive"] = primitive_table(trunc);
            if (which == "nontrivial" || which == "all") j["nontrivial"] = nontrivial_table(trunc);
            if (which == "quadratic" || which == "all") j["quadratic"] = quadratic_table();
            if (which == "euler" || which == "all") j["euler"] = euler_table(false);
            out.write(which == "all" ? j : j[which]);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "InvalidArgument: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
