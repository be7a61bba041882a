// Command-line front end: run configuration, CSV/JSON export of projected
// point sets and diagnostics, deterministic SVG rendering.
//
// Exit codes: 0 success, 2 configuration error, 3 resource error
// (insufficient depth / node budget) with a machine-readable error.json,
// 4 consistency-check failure in `check`.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypercut/cut_project.hpp"
#include "hypercut/side_walk.hpp"

using namespace hypercut;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": not an integer: '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": not a number: '" + s + "'");
    }
}

// Raw options as given (config file merged with flag overrides; flags win).
struct RawConfig {
    std::string sig = "6,6,3";
    std::string domain = "hex";
    std::string rho = "0.8i";
    std::string geodesic;  // empty: seed:<seed>
    std::string window = "-10,10";
    std::optional<double> depth;
    std::string out_dir = ".";
    int seed = 1;
    int max_word = 4;
    int samples = 12;
    int svg_size = 800;
    double svg_stroke = 1.0;  // px
    double tile_radius = 3.5;
    std::string layers = "tiling,tube,geodesic,orbit,points,feet";
};

struct FlagOverrides {
    std::optional<std::string> config_path, sig, domain, rho, geodesic, window,
        out_dir, layers;
    std::optional<double> depth, svg_stroke, tile_radius;
    std::optional<int> seed, max_word, samples, svg_size;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--sig", f.sig, "signature m1,m2,m3");
    cmd->add_option("--domain", f.domain, "quad|hex");
    cmd->add_option("--rho", f.rho,
                    "tube half-width: value, fraction with 'i' suffix "
                    "(e.g. 0.9i = 0.9*inradius), or 'auto'");
    cmd->add_option("--geodesic", f.geodesic,
                    "seed:<n>|side:<i>|axis:<w1,w2,..>|endpoints:<th1,th2>");
    cmd->add_option("--window", f.window, "t_min,t_max");
    cmd->add_option("--depth", f.depth, "orbit search radius");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--seed", f.seed, "run seed");
    cmd->add_option("--max-word", f.max_word, "spectrum word bound");
    cmd->add_option("--samples", f.samples, "sample count for rho auto");
    cmd->add_option("--svg-size", f.svg_size, "SVG size in px");
    cmd->add_option("--svg-stroke", f.svg_stroke, "SVG stroke width in px");
    cmd->add_option("--tile-radius", f.tile_radius, "tiling render radius");
    cmd->add_option("--layers", f.layers,
                    "comma list of tiling,tube,geodesic,orbit,points,feet "
                    "or 'none'");
}

RawConfig merge_config(const FlagOverrides& f) {
    RawConfig raw;
    if (f.config_path) {
        std::ifstream in(*f.config_path);
        if (!in) throw ConfigError("config: cannot open " + *f.config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        const auto str = [&](const char* k, std::string& dst) {
            if (j.contains(k)) dst = j.at(k).get<std::string>();
        };
        try {
            if (j.contains("sig")) {
                if (j["sig"].is_array()) {
                    std::string s;
                    for (const auto& v : j["sig"])
                        s += (s.empty() ? "" : ",") +
                             std::to_string(v.get<int>());
                    raw.sig = s;
                } else {
                    raw.sig = j["sig"].get<std::string>();
                }
            }
            str("domain", raw.domain);
            if (j.contains("rho")) {
                if (j["rho"].is_number())
                    raw.rho = fmt17(j["rho"].get<double>());
                else
                    raw.rho = j["rho"].get<std::string>();
            }
            str("geodesic", raw.geodesic);
            if (j.contains("window")) {
                const auto w = j["window"];
                raw.window = fmt17(w.at(0).get<double>()) + "," +
                             fmt17(w.at(1).get<double>());
            }
            if (j.contains("depth")) raw.depth = j["depth"].get<double>();
            str("out", raw.out_dir);
            if (j.contains("seed")) raw.seed = j["seed"].get<int>();
            if (j.contains("max_word")) raw.max_word = j["max_word"].get<int>();
            if (j.contains("samples")) raw.samples = j["samples"].get<int>();
            if (j.contains("svg")) {
                const auto& s = j["svg"];
                if (s.contains("size")) raw.svg_size = s["size"].get<int>();
                if (s.contains("stroke"))
                    raw.svg_stroke = s["stroke"].get<double>();
                if (s.contains("tile_radius"))
                    raw.tile_radius = s["tile_radius"].get<double>();
                if (s.contains("layers")) {
                    std::string l;
                    for (const auto& v : s["layers"])
                        l += (l.empty() ? "" : ",") + v.get<std::string>();
                    raw.layers = l.empty() ? "none" : l;
                }
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config: bad field: ") + e.what());
        }
    }
    if (f.sig) raw.sig = *f.sig;
    if (f.domain) raw.domain = *f.domain;
    if (f.rho) raw.rho = *f.rho;
    if (f.geodesic) raw.geodesic = *f.geodesic;
    if (f.window) raw.window = *f.window;
    if (f.depth) raw.depth = *f.depth;
    if (f.out_dir) raw.out_dir = *f.out_dir;
    if (f.seed) raw.seed = *f.seed;
    if (f.max_word) raw.max_word = *f.max_word;
    if (f.samples) raw.samples = *f.samples;
    if (f.svg_size) raw.svg_size = *f.svg_size;
    if (f.svg_stroke) raw.svg_stroke = *f.svg_stroke;
    if (f.tile_radius) raw.tile_radius = *f.tile_radius;
    if (f.layers) raw.layers = *f.layers;
    return raw;
}

// Resolved run: everything a command needs, in geometric terms.
struct Run {
    RawConfig raw;
    FundamentalDomain dom;
    std::pair<double, double> window;
    std::size_t budget;
};

Signature parse_signature(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw ConfigError("--sig: expected m1,m2,m3");
    return Signature(parse_int(parts[0], "--sig"), parse_int(parts[1], "--sig"),
                     parse_int(parts[2], "--sig"));
}

DomainKind parse_domain(const std::string& s) {
    if (s == "quad") return DomainKind::Quadrilateral;
    if (s == "hex") return DomainKind::Hexagonal;
    throw ConfigError("--domain: expected quad or hex, got '" + s + "'");
}

Run resolve_run(const RawConfig& raw) {
    const Signature sig = parse_signature(raw.sig);
    const DomainKind kind = parse_domain(raw.domain);
    FundamentalDomain dom = build_domain(sig, kind);

    const auto w = split(raw.window, ',');
    if (w.size() != 2) throw ConfigError("--window: expected a,b");
    const double t0 = parse_double(w[0], "--window");
    const double t1 = parse_double(w[1], "--window");
    if (!(t0 < t1)) throw ConfigError("--window: t_min must be below t_max");

    return Run{raw, std::move(dom), {t0, t1}, orbit_budget_from_env()};
}

struct RhoChoice {
    double value;
    std::string mode;  // absolute | fraction | auto
    std::optional<RhoSearchReport> search;
};

RhoChoice resolve_rho(const Run& run) {
    RhoChoice c;
    const std::string& s = run.raw.rho;
    if (s == "auto") {
        c.mode = "auto";
        c.search = find_rho(run.dom, run.raw.samples, run.raw.seed, run.budget);
        c.value = c.search->rho;
    } else if (!s.empty() && (s.back() == 'i' || s.back() == '%')) {
        c.mode = "fraction";
        std::string frac = s.substr(0, s.size() - 1);
        if (!frac.empty() && frac.back() == '%') frac.pop_back();
        c.value = parse_double(frac, "--rho") * run.dom.inradius;
    } else {
        c.mode = "absolute";
        c.value = parse_double(s, "--rho");
    }
    if (!(c.value > 0.0) || !(c.value < run.dom.inradius))
        throw ConfigError("--rho: must resolve into (0, inradius = " +
                          fmt17(run.dom.inradius) + "), got " + fmt17(c.value));
    return c;
}

TubeSpec resolve_tube(const Run& run, double rho) {
    std::string spec = run.raw.geodesic;
    if (spec.empty()) spec = "seed:" + std::to_string(run.raw.seed);
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("--geodesic: expected kind:args, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);

    if (kind == "seed")
        return {geodesic_sampler(run.dom, parse_int(args, "--geodesic seed")),
                rho};
    if (kind == "side") {
        const int i = parse_int(args, "--geodesic side");
        if (i < 0 || i >= static_cast<int>(run.dom.sides.size()))
            throw ConfigError("--geodesic side: index out of range");
        return extended_side_tube(run.dom, i, rho);
    }
    if (kind == "axis") {
        std::vector<int> word;
        for (const auto& p : split(args, ','))
            word.push_back(parse_int(p, "--geodesic axis"));
        if (word.empty()) throw ConfigError("--geodesic axis: empty word");
        try {
            return axis_tube(run.dom, word, rho);
        } catch (const NotHyperbolic& e) {
            throw ConfigError(std::string("--geodesic axis: ") + e.what());
        }
    }
    if (kind == "endpoints") {
        const auto p = split(args, ',');
        if (p.size() != 2)
            throw ConfigError("--geodesic endpoints: expected th1,th2");
        const double a1 = parse_double(p[0], "--geodesic endpoints");
        const double a2 = parse_double(p[1], "--geodesic endpoints");
        return {Geodesic::from_endpoints(std::polar(1.0, a1),
                                         std::polar(1.0, a2)),
                rho};
    }
    throw ConfigError("--geodesic: unknown kind '" + kind + "'");
}

double auto_depth(const TubeSpec& tube, const DiscPoint& x,
                  std::pair<double, double> window) {
    const GeodesicCoords c = tube.geodesic.coords(x);
    const auto d = [&](double t) {
        return std::acosh(std::cosh(c.s) * std::cosh(c.t - t));
    };
    return std::max(d(window.first), d(window.second)) + tube.rho + 1.0;
}

std::filesystem::path out_path(const Run& run, const std::string& name) {
    std::filesystem::create_directories(run.raw.out_dir);
    return std::filesystem::path(run.raw.out_dir) / name;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << body;
}

void write_json(const std::filesystem::path& p, const json& j) {
    write_text(p, j.dump(2) + "\n");
}

json word_json(const std::vector<int>& w) {
    return json(w);
}

json meta_json(const Run& run, const RhoChoice& rho, double depth,
               const CutProjectSet& s) {
    json j{{"schema", 1},
           {"tool", "hypercut"},
           {"version", kToolVersion},
           {"signature", {s.meta.m1, s.meta.m2, s.meta.m3}},
           {"domain", run.raw.domain},
           {"rho", rho.value},
           {"rho_mode", rho.mode},
           {"rho_spec", run.raw.rho},
           {"geodesic", run.raw.geodesic.empty()
                            ? "seed:" + std::to_string(run.raw.seed)
                            : run.raw.geodesic},
           {"seed", run.raw.seed},
           {"window", {s.t_min, s.t_max}},
           {"depth", depth},
           {"base", {s.meta.base_re, s.meta.base_im}},
           {"count", s.points.size()},
           {"empty", s.points.empty()}};
    if (rho.search) {
        json ladder = json::array();
        for (const auto& e : rho.search->ladder)
            ladder.push_back({{"rho", e.rho}, {"samples_hit", e.samples_hit}});
        j["rho_search"] = {{"inradius", rho.search->inradius},
                           {"n_samples", rho.search->n_samples},
                           {"seed", rho.search->seed},
                           {"ladder", ladder}};
    }
    return j;
}

std::string points_csv(const std::vector<double>& pts) {
    std::string body;
    for (double t : pts) body += fmt17(t) + "\n";
    return body;
}

int cmd_generate(const Run& run) {
    const RhoChoice rho = resolve_rho(run);
    const TubeSpec tube = resolve_tube(run, rho.value);
    const double depth = run.raw.depth
                             ? *run.raw.depth
                             : auto_depth(tube, run.dom.center, run.window);
    const CutProjectSet s = cut_project(run.dom, run.dom.center, tube,
                                        run.window, depth, run.budget);
    write_text(out_path(run, "points.csv"), points_csv(s.points));
    write_json(out_path(run, "meta.json"), meta_json(run, rho, depth, s));
    return 0;
}

// ---- check ----------------------------------------------------------------

int cmd_check(const Run& run) {
    const FundamentalDomain& dom = run.dom;
    bool ok = true;
    json j{{"schema", 1}, {"tool", "hypercut"}, {"version", kToolVersion}};
    j["signature"] = {dom.signature.m1(), dom.signature.m2(),
                      dom.signature.m3()};
    j["domain"] = run.raw.domain;

    const Chaoticity verdict = chaotic_certificate(dom.signature, dom.kind);
    j["chaotic_certificate"] =
        verdict == Chaoticity::Chaotic ? "chaotic" : "not-chaotic";

    json sides = json::array();
    bool all_hit = true;
    for (int i = 0; i < static_cast<int>(dom.sides.size()); ++i) {
        const SideWalkResult r = extended_side_hits_interior(dom, i);
        all_hit = all_hit && r.hit;
        json side{{"side", i}, {"hit", r.hit}};
        side["witness"] = r.witness ? word_json(*r.witness) : json(nullptr);
        side["boundary_cycle"] = r.cycle ? word_json(*r.cycle) : json(nullptr);
        sides.push_back(side);
    }
    j["sides"] = sides;
    j["all_sides_hit"] = all_hit;

    // Parity vs search: the certificate must predict the side-extension
    // outcome (hexagons are always chaotic and must be all-hit).
    const bool parity_ok = (verdict == Chaoticity::Chaotic) == all_hit;
    j["parity_consistent"] = parity_ok;
    ok = ok && parity_ok;

    const double inj = injectivity_radius(dom, dom.center, run.budget);
    j["inradius"] = dom.inradius;
    j["injectivity_radius"] = inj;
    const bool tangency_ok = std::abs(dom.inradius - inj) < 1e-6;
    j["tangency_consistent"] = tangency_ok;
    ok = ok && tangency_ok;

    // Run-dependent sections; skipped when no tube width is available
    // (e.g. rho auto on a domain whose projections are all empty).
    json run_section = nullptr;
    try {
        const RhoChoice rho = resolve_rho(run);
        const TubeSpec tube = resolve_tube(run, rho.value);
        const double depth = run.raw.depth
                                 ? *run.raw.depth
                                 : auto_depth(tube, dom.center, run.window);
        const CutProjectSet s =
            cut_project(dom, dom.center, tube, run.window, depth, run.budget);
        run_section = json{{"rho", rho.value}, {"count", s.points.size()}};

        if (s.points.size() >= 2) {
            const DeloneReport d = delone_stats(s, inj, rho.value);
            const bool sep_ok = d.min_gap >= d.separation_bound - 1e-6;
            run_section["delone"] = {{"count", d.count},
                                     {"min_gap", d.min_gap},
                                     {"max_gap", d.max_gap},
                                     {"separation_bound", d.separation_bound},
                                     {"separation_ok", sep_ok}};
            ok = ok && sep_ok;

            // Periodic reference: axis of a shortest hyperbolic word.
            const auto spec = length_spectrum_entries(dom, 3);
            if (!spec.empty()) {
                const auto& word = spec.front().witness;
                const auto [ref, period] = periodic_reference(
                    dom, dom.center, word, rho.value, run.window, run.budget);
                run_section["reference"] = {{"word", word_json(word)},
                                            {"period", period},
                                            {"count", ref.points.size()}};
                json nr = json::array();
                for (double r : {1.0, 2.0, 5.0, 10.0}) {
                    std::optional<double> good_shift;
                    for (double a : s.points) {
                        for (double b : ref.points) {
                            const double shift = a - b;
                            std::vector<double> shifted;
                            for (double t : ref.points)
                                shifted.push_back(t + shift);
                            if (nr_test(s.points, shifted, r)) {
                                good_shift = shift;
                                break;
                            }
                        }
                        if (good_shift) break;
                    }
                    nr.push_back(
                        {{"r", r},
                         {"pass", good_shift.has_value()},
                         {"shift",
                          good_shift ? json(*good_shift) : json(nullptr)}});
                }
                run_section["nr"] = nr;
            }

            // Tile-length tables at the configured window and a quarter of it.
            json tiles = json::array();
            const double mid = 0.5 * (run.window.first + run.window.second);
            const double half = 0.5 * (run.window.second - run.window.first);
            for (double h : {0.25 * half, half}) {
                const std::pair<double, double> w{mid - h, mid + h};
                const CutProjectSet sw =
                    cut_project(dom, dom.center, tube, w,
                                auto_depth(tube, dom.center, w), run.budget);
                json table = json::array();
                int distinct = 0;
                if (sw.points.size() >= 2) {
                    for (const auto& [len, mult] : tile_lengths(sw)) {
                        table.push_back({{"length", len}, {"count", mult}});
                        ++distinct;
                    }
                }
                tiles.push_back({{"window", {w.first, w.second}},
                                 {"distinct", distinct},
                                 {"table", table}});
            }
            run_section["tile_lengths"] = tiles;
        }
    } catch (const SideExtensionObstruction& e) {
        run_section = json{{"skipped", e.what()}};
    } catch (const TooFewPoints& e) {
        run_section["skipped"] = e.what();
    }
    j["run"] = run_section;
    j["consistent"] = ok;

    write_json(out_path(run, "diagnostics.json"), j);
    return ok ? 0 : 4;
}

// ---- render ---------------------------------------------------------------

// Circular arc from z1 to z3 through zmid, as an SVG path segment in disc
// coordinates. Near-collinear triples degrade to a line.
std::string arc_path(Complex z1, Complex zmid, Complex z3) {
    const Complex d1 = zmid - z1, d2 = z3 - zmid;
    const double cross = d1.real() * d2.imag() - d1.imag() * d2.real();
    const std::string head =
        "M " + fmt17(z1.real()) + " " + fmt17(z1.imag()) + " ";
    const std::string tail = fmt17(z3.real()) + " " + fmt17(z3.imag());
    if (std::abs(cross) < 1e-12 * std::abs(d1) * std::abs(d2) ||
        std::abs(cross) < 1e-300)
        return head + "L " + tail;

    // Circumcenter of the three points.
    const double a2 = std::norm(z1), b2 = std::norm(zmid), c2 = std::norm(z3);
    const double det = 2.0 * ((zmid.real() - z1.real()) * (z3.imag() - z1.imag()) -
                              (zmid.imag() - z1.imag()) * (z3.real() - z1.real()));
    const double ux = ((b2 - a2) * (z3.imag() - z1.imag()) -
                       (c2 - a2) * (zmid.imag() - z1.imag())) /
                      det;
    const double uy = ((c2 - a2) * (zmid.real() - z1.real()) -
                       (b2 - a2) * (z3.real() - z1.real())) /
                      det;
    const Complex c(ux, uy);
    const double r = std::abs(z1 - c);
    if (!std::isfinite(r) || r > 1e4) return head + "L " + tail;

    const double t1 = std::arg(z1 - c), tm = std::arg(zmid - c),
                 t3 = std::arg(z3 - c);
    const auto ccw = [](double from, double to) {
        double d = to - from;
        while (d < 0.0) d += 2.0 * M_PI;
        return d;
    };
    const bool mid_on_ccw = ccw(t1, tm) <= ccw(t1, t3);
    const double span = mid_on_ccw ? ccw(t1, t3) : 2.0 * M_PI - ccw(t1, t3);
    const int sweep = mid_on_ccw ? 1 : 0;
    const int large = span > M_PI ? 1 : 0;
    return head + "A " + fmt17(r) + " " + fmt17(r) + " 0 " +
           std::to_string(large) + " " + std::to_string(sweep) + " " + tail;
}

// Point at tube coordinates (t, s) relative to a geodesic.
Complex offset_point(const Geodesic& k, double t, double s) {
    const Mobius slide = Mobius::translation_to(
        DiscPoint(std::tanh(t / 2.0), 0.0));
    return k.frame().apply(slide.apply(DiscPoint(0.0, std::tanh(s / 2.0))))
        .value();
}

int cmd_render(const Run& run) {
    const RhoChoice rho = resolve_rho(run);
    const TubeSpec tube = resolve_tube(run, rho.value);
    const double depth = run.raw.depth
                             ? *run.raw.depth
                             : auto_depth(tube, run.dom.center, run.window);
    const CutProjectSet s = cut_project(run.dom, run.dom.center, tube,
                                        run.window, depth, run.budget);

    std::set<std::string> layers;
    if (run.raw.layers != "none")
        for (const auto& l : split(run.raw.layers, ','))
            if (!l.empty()) layers.insert(l);
    const auto on = [&](const char* l) { return layers.count(l) > 0; };

    const int size = run.raw.svg_size;
    const double scale = size / 2.2;
    const double sw = run.raw.svg_stroke / scale;
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(size) + "\" height=\"" + std::to_string(size) +
           "\" viewBox=\"0 0 " + std::to_string(size) + " " +
           std::to_string(size) + "\">\n";
    svg += "<g transform=\"translate(" + fmt17(size / 2.0) + " " +
           fmt17(size / 2.0) + ") scale(" + fmt17(scale) + " " +
           fmt17(-scale) + ")\" fill=\"none\" stroke-width=\"" + fmt17(sw) +
           "\">\n";
    svg += "<circle cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#000000\"/>\n";

    if (on("tiling")) {
        svg += "<g stroke=\"#c8c8c8\">\n";
        OrbitOptions opts;
        opts.max_radius = run.raw.tile_radius;
        opts.node_budget = run.budget;
        std::vector<Complex> mids;
        for (const Side& side : run.dom.sides)
            mids.push_back(side.carrier.point(side.length / 2.0).value());
        for (const auto& rec :
             enumerate_orbit(run.dom, run.dom.center, run.raw.tile_radius,
                             opts)) {
            const int n = static_cast<int>(run.dom.vertices.size());
            for (int i = 0; i < n; ++i) {
                const Complex a =
                    rec.mobius.apply(run.dom.vertices[i]).value();
                const Complex b =
                    rec.mobius.apply(run.dom.vertices[(i + 1) % n]).value();
                const Complex m =
                    rec.mobius.apply(DiscPoint(mids[i])).value();
                svg += "<path d=\"" + arc_path(a, m, b) + "\"/>\n";
            }
        }
        svg += "</g>\n";
    }

    const Geodesic& k = tube.geodesic;
    const double t_mid = k.coords(DiscPoint()).t;
    if (on("tube")) {
        svg += "<g stroke=\"#d08020\">\n";
        for (double band : {rho.value, -rho.value})
            svg += "<path d=\"" +
                   arc_path(k.xi_minus(), offset_point(k, t_mid, band),
                            k.xi_plus()) +
                   "\"/>\n";
        svg += "</g>\n";
    }
    if (on("geodesic"))
        svg += "<path stroke=\"#2040c0\" d=\"" +
               arc_path(k.xi_minus(), k.point(t_mid).value(), k.xi_plus()) +
               "\"/>\n";

    if (on("orbit")) {
        svg += "<g fill=\"#909090\">\n";
        OrbitOptions opts;
        opts.max_radius = run.raw.tile_radius;
        opts.node_budget = run.budget;
        for (const auto& rec :
             enumerate_orbit(run.dom, run.dom.center, run.raw.tile_radius,
                             opts)) {
            const Complex z = rec.image_of_base.value();
            svg += "<circle cx=\"" + fmt17(z.real()) + "\" cy=\"" +
                   fmt17(z.imag()) + "\" r=\"" + fmt17(2.0 * sw) + "\"/>\n";
        }
        svg += "</g>\n";
    }

    if (on("points")) {
        // Orbit points inside the tube, over the window.
        // Everything past radius 8 is sub-pixel against the boundary.
        svg += "<g fill=\"#c02020\">\n";
        OrbitOptions opts;
        opts.max_radius = std::min(depth, 8.0);
        opts.node_budget = run.budget;
        for (const auto& rec : enumerate_orbit(run.dom, run.dom.center,
                                               opts.max_radius, opts)) {
            const GeodesicCoords c = k.coords(rec.image_of_base);
            if (c.t < s.t_min || c.t > s.t_max) continue;
            if (tube_side_of(c.s, rho.value) == TubeSide::Outside) continue;
            const Complex z = rec.image_of_base.value();
            svg += "<circle cx=\"" + fmt17(z.real()) + "\" cy=\"" +
                   fmt17(z.imag()) + "\" r=\"" + fmt17(3.0 * sw) + "\"/>\n";
        }
        svg += "</g>\n";
    }

    if (on("feet")) {
        svg += "<g fill=\"#106010\">\n";
        for (double t : s.points) {
            const Complex z = k.point(t).value();
            svg += "<circle cx=\"" + fmt17(z.real()) + "\" cy=\"" +
                   fmt17(z.imag()) + "\" r=\"" + fmt17(3.0 * sw) + "\"/>\n";
        }
        svg += "</g>\n";
    }

    svg += "</g>\n</svg>\n";
    write_text(out_path(run, "render.svg"), svg);
    return 0;
}

// ---- spectrum ---------------------------------------------------------------

int cmd_spectrum(const Run& run) {
    std::string spec_csv;
    for (const auto& e : length_spectrum_entries(run.dom, run.raw.max_word)) {
        spec_csv += fmt17(e.length) + ",";
        for (std::size_t i = 0; i < e.witness.size(); ++i)
            spec_csv += (i ? " " : "") + std::to_string(e.witness[i]);
        spec_csv += "\n";
    }
    write_text(out_path(run, "spectrum.csv"), spec_csv);

    const RhoChoice rho = resolve_rho(run);
    const TubeSpec tube = resolve_tube(run, rho.value);
    std::string tiles_csv;
    const double mid = 0.5 * (run.window.first + run.window.second);
    const double half = 0.5 * (run.window.second - run.window.first);
    for (double h : {half, 4.0 * half}) {
        const std::pair<double, double> w{mid - h, mid + h};
        const CutProjectSet s =
            cut_project(run.dom, run.dom.center, tube, w,
                        auto_depth(tube, run.dom.center, w), run.budget);
        if (s.points.size() < 2) continue;
        for (const auto& [len, mult] : tile_lengths(s))
            tiles_csv += fmt17(len) + "," + std::to_string(mult) + "," +
                         fmt17(w.first) + "," + fmt17(w.second) + "\n";
    }
    write_text(out_path(run, "tiles.csv"), tiles_csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic cut-and-project point sets"};
    app.require_subcommand(1);
    FlagOverrides f;
    CLI::App* generate =
        app.add_subcommand("generate", "points CSV + meta JSON");
    CLI::App* check = app.add_subcommand("check", "diagnostics JSON");
    CLI::App* render = app.add_subcommand("render", "deterministic SVG");
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "length + tile-length CSVs");
    for (CLI::App* c : {generate, check, render, spectrum})
        add_common_flags(c, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    std::optional<Run> run;
    try {
        const RawConfig raw = merge_config(f);
        run.emplace(resolve_run(raw));
        if (generate->parsed()) return cmd_generate(*run);
        if (check->parsed()) return cmd_check(*run);
        if (render->parsed()) return cmd_render(*run);
        return cmd_spectrum(*run);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidSignature& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NoCandidateFound& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SideExtensionObstruction& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientDepth& e) {
        if (run)
            write_json(out_path(*run, "error.json"),
                       json{{"schema", 1},
                            {"error", {{"type", "insufficient_depth"},
                                       {"message", e.what()}}}});
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const BudgetExceeded& e) {
        if (run)
            write_json(out_path(*run, "error.json"),
                       json{{"schema", 1},
                            {"error", {{"type", "budget_exceeded"},
                                       {"message", e.what()}}}});
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
