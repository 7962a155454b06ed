#include "cli.hpp"

#include "torus/errors.hpp"
#include "torus/growth.hpp"
#include "torus/hypo.hpp"
#include "torus/mizohata.hpp"
#include "torus/sections.hpp"
#include "torus/series_io.hpp"
#include "torus/space_tag.hpp"
#include "torus/torus_operator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace torus::cli {

namespace {

using nlohmann::json;

/// Malformed or unreadable input, reported with exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Text, Json, Csv };

struct Options {
    Format format = Format::Text;
    unsigned precision = 20;
    std::string out_path;
    unsigned threads = 1;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw InputError("cannot write '" + path + "'");
    o << content;
}

bool looks_like_json(const std::string& s) {
    const auto p = s.find_first_not_of(" \t\r\n");
    return p != std::string::npos && s[p] == '{';
}

TrigSeries read_series(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return looks_like_json(text) ? series_from_json(json::parse(text)) : parse_series_text(text);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
}

TorusOperator read_operator(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return operator_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
}

template <typename T, typename F>
T parse_arg(const std::string& what, const std::string& text, F&& f) {
    try {
        return f(text);
    } catch (const ParseError& e) {
        throw InputError(what + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(what + ": " + e.what());
    }
}

EnvelopeExpr parse_env_arg(const std::string& what, const std::string& text) {
    return parse_arg<EnvelopeExpr>(what, text, [](const std::string& t) { return parse_envelope(t); });
}

HomogeneousPoly parse_poly_arg(const std::string& text) {
    return parse_arg<HomogeneousPoly>("--poly", text, [](const std::string& t) { return HomogeneousPoly::parse(t); });
}

Box box_arg(const std::vector<long>& r) {
    if (r.size() != 2 || r[0] < 0 || r[1] < 0) throw InputError("--box takes two nonnegative radii");
    return Box::centered(r[0], r[1]);
}

json box_json(const Box& b) { return json::array({b.n1_min, b.n1_max, b.n2_min, b.n2_max}); }

std::string series_csv(const TrigSeries& u, unsigned precision) {
    std::string s = "k1,k2,abs_sq\n";
    for (const auto& [k, c] : u.coeffs())
        s += std::to_string(k.k1) + "," + std::to_string(k.k2) + "," + to_decimal(c.norm_sq(), precision) + "\n";
    return s;
}

std::string render_series(const TrigSeries& u, const Options& o) {
    switch (o.format) {
        case Format::Json: return series_to_json(u).dump(2) + "\n";
        case Format::Csv: return series_csv(u, o.precision);
        case Format::Text: break;
    }
    return write_series_text(u);
}

/// Operator selection shared by apply-op, reconstruct and section image/solve.
struct OperatorArgs {
    std::string op_path;
    std::string symbol;
    bool mizohata = false;

    void attach(CLI::App* app) {
        app->add_option("--op", op_path, "operator document (JSON)");
        app->add_option("--symbol", symbol, "constant-coefficient symbol P(xi) as 'c a1 a2, ...'");
        app->add_flag("--mizohata", mizohata, "d_x1 + i sin(x1) d_x2");
    }

    TorusOperator resolve(bool default_mizohata) const {
        const int given = (!op_path.empty()) + (!symbol.empty()) + (mizohata ? 1 : 0);
        if (given > 1) throw InputError("give at most one of --op, --symbol, --mizohata");
        if (!op_path.empty()) return read_operator(op_path);
        if (!symbol.empty())
            return TorusOperator::from_symbol(parse_arg<SymbolPolynomial>("--symbol", symbol, [](const std::string& t) { return parse_symbol(t); }));
        if (mizohata || default_mizohata) return TorusOperator::mizohata();
        throw InputError("an operator is required: --op, --symbol or --mizohata");
    }
};

json fit_json(const ModelFit& f) {
    json j = {{"model", f.model}, {"slope", f.slope}, {"intercept", f.intercept}, {"rel_residual", f.rel_residual}, {"passed", f.passed}};
    j["tag"] = f.tag ? json(f.tag->str()) : json(nullptr);
    return j;
}

json scan_json(const EmpiricalScan& s) {
    json shells = json::array();
    for (const auto& m : s.shells)
        shells.push_back({{"shell", m.shell},
                          {"min_abs", to_pair_string(m.min_abs)},
                          {"argmin", {m.argmin.k1, m.argmin.k2}},
                          {"argmin_norm_sq", m.argmin_norm_sq}});
    json j = {{"max_radius", s.max_radius}, {"fit_valid", s.fit_valid}, {"shells", shells}};
    j["k1_fit"] = s.fit_valid ? json(s.k1_fit) : json(nullptr);
    j["zero_witness"] = s.zero_witness ? json({s.zero_witness->k1, s.zero_witness->k2}) : json(nullptr);
    return j;
}

json hypo_json(const HomogeneousPoly& p, const HypoReport& r, const std::optional<SobolevGain>& gain) {
    json j;
    j["polynomial"] = p.term_list();
    j["verdict"] = to_string(r.verdict);
    j["branch"] = r.branch;
    j["degree"] = r.degree;
    j["restricted"] = r.restricted.str();
    json rays = json::array();
    for (const auto& z : r.zero_rays) rays.push_back({z.k1, z.k2});
    j["zero_rays"] = rays;
    j["witness"] = r.witness ? json({r.witness->k1, r.witness->k2}) : json(nullptr);
    j["kernel_witness"] = r.kernel_witness ? series_to_json(*r.kernel_witness) : json(nullptr);
    json certs = json::array();
    for (const auto& c : r.certificates)
        certs.push_back({{"interval", {to_pair_string(c.interval.lo), to_pair_string(c.interval.hi)}},
                         {"multiplicity", c.multiplicity},
                         {"minimal_degree", c.minimal_degree},
                         {"minimal_polynomial", c.minimal_polynomial.str()},
                         {"liouville_exponent", c.liouville_exponent},
                         {"roth_applies", c.roth_applies}});
    j["certificates"] = certs;
    j["max_multiplicity"] = r.max_multiplicity;
    j["certified_k1"] = r.certified_k1 ? json(to_pair_string(*r.certified_k1)) : json(nullptr);
    j["empirical"] = r.empirical ? scan_json(*r.empirical) : json(nullptr);
    if (gain) {
        j["sobolev_gain"] = {{"paper_offset", to_pair_string(gain->paper_offset)},
                             {"epsilon_vanishes", gain->epsilon_vanishes},
                             {"paper_index", gain->paper_index},
                             {"empirical_gain", gain->empirical_gain},
                             {"certified_gain", gain->certified_gain ? json(to_pair_string(*gain->certified_gain)) : json(nullptr)},
                             {"discrepancy", gain->discrepancy},
                             {"note", gain->note}};
    } else {
        j["sobolev_gain"] = nullptr;
    }
    return j;
}

std::string hypo_text(const HomogeneousPoly& p, const HypoReport& r, const std::optional<SobolevGain>& gain) {
    std::ostringstream s;
    s << "polynomial " << p.term_list() << "\n";
    s << "verdict " << to_string(r.verdict) << "\n";
    s << "branch " << r.branch << "\n";
    s << "degree " << r.degree << "\n";
    s << "restricted " << r.restricted.str() << "\n";
    for (const auto& z : r.zero_rays) s << "zero_ray " << z.str() << "\n";
    if (r.witness) s << "witness " << r.witness->str() << "\n";
    for (const auto& c : r.certificates)
        s << "root (" << to_string(c.interval.lo) << ", " << to_string(c.interval.hi) << "] multiplicity " << c.multiplicity
          << " degree " << c.minimal_degree << " liouville " << c.liouville_exponent << (c.roth_applies ? " roth" : "") << "\n";
    s << "max_multiplicity " << r.max_multiplicity << "\n";
    if (r.certified_k1) s << "certified_k1 " << to_string(*r.certified_k1) << "\n";
    if (r.empirical && r.empirical->fit_valid) s << "k1_fit " << r.empirical->k1_fit << "\n";
    if (gain) {
        s << "paper_index " << gain->paper_index << "\n";
        s << "empirical_gain " << gain->empirical_gain << "\n";
        s << "discrepancy " << (gain->discrepancy ? "yes" : "no") << "\n";
    }
    return s.str();
}

unsigned threads_from_env() {
    const char* v = std::getenv("TORUS_SPEC_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end || n < 1 || n > 1024) throw InputError("TORUS_SPEC_THREADS must be an integer in [1, 1024], got '" + std::string(v) + "'");
    return static_cast<unsigned>(n);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact spectral toolkit for operators on the 2-torus", "torus-spec"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    std::string format = "text";
    app.add_option("--output", format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--precision", opt.precision, "decimal digits in CSV exports")->check(CLI::Range(0U, 1000U));
    app.add_option("-o,--out", opt.out_path, "write the main output to a file instead of stdout");

    std::function<int(std::string&)> action;

    // solve-mizohata
    std::string f_path, solution_path;
    std::vector<long> box_r;
    auto* solve = app.add_subcommand("solve-mizohata", "odd solution of the periodic Mizohata equation");
    solve->add_option("--f", f_path, "right-hand side series")->required();
    solve->add_option("--box", box_r, "radii R1 R2 of the solve box")->expected(2)->required();
    solve->add_option("--solution", solution_path, "write the solution series here");
    solve->callback([&] {
        action = [&](std::string& o) {
            const Box box = box_arg(box_r);
            const TrigSeries f = read_series(f_path);
            const MizohataSolution sol = solve_odd(f, box);
            if (!solution_path.empty()) write_file(solution_path, write_series_text(sol.u));
            if (opt.format == Format::Csv) {
                o = series_csv(sol.u, opt.precision);
            } else if (opt.format == Format::Json) {
                json j = {{"box", box_json(box)},
                          {"residual_box", box_json(sol.residual_box)},
                          {"residual_verified", true},
                          {"growth_constant", to_pair_string(sol.growth_constant)},
                          {"growth_constant_sq", to_pair_string(sol.growth_constant_sq)}};
                j["solution"] = solution_path.empty() ? series_to_json(sol.u) : json(solution_path);
                o = j.dump(2) + "\n";
            } else {
                o = "box " + box.str() + "\nresidual_box " + sol.residual_box.str() + "\nresidual_verified true\ngrowth_constant " +
                    to_string(sol.growth_constant) + "\ngrowth_constant_sq " + to_string(sol.growth_constant_sq) + "\n";
                if (solution_path.empty()) o += "\n" + write_series_text(sol.u);
            }
            return int(kOk);
        };
    });

    // reconstruct
    std::vector<std::string> col_paths, row_paths;
    std::string rhs_path;
    std::vector<long> rbox;
    long max_width = 64;
    OperatorArgs rec_op;
    auto* rec = app.add_subcommand("reconstruct", "solution from trace data");
    rec->add_option("--col", col_paths, "column traces <u, e^{ipx1}>_x1, p = 0, 1, ... (series files)")->required();
    rec->add_option("--row", row_paths, "row traces <u, e^{iqx2}>_x2, q = 0, 1, ... (series files)")->required();
    rec->add_option("--box", rbox, "radii R1 R2")->expected(2)->required();
    rec->add_option("--f", rhs_path, "right-hand side (default 0)");
    rec->add_option("--max-width", max_width, "box width cap");
    rec_op.attach(rec);
    rec->callback([&] {
        action = [&](std::string& o) {
            const TorusOperator l = rec_op.resolve(true);
            TraceData t;
            for (const auto& p : col_paths) t.col_traces.push_back(read_series(p));
            for (const auto& p : row_paths) t.row_traces.push_back(read_series(p));
            std::optional<TrigSeries> f;
            if (!rhs_path.empty()) f = read_series(rhs_path);
            const GeneralSolution g = reconstruct_general(l, t, box_arg(rbox), f, max_width);
            if (opt.format == Format::Json) {
                o = json({{"unique", g.unique}, {"rank", g.rank}, {"unknowns", g.unknowns}, {"solution", series_to_json(g.u)}}).dump(2) + "\n";
            } else if (opt.format == Format::Csv) {
                o = series_csv(g.u, opt.precision);
            } else {
                o = std::string("unique ") + (g.unique ? "true" : "false") + "\nrank " + std::to_string(g.rank) + "/" +
                    std::to_string(g.unknowns) + "\n\n" + write_series_text(g.u);
            }
            return int(kOk);
        };
    });

    // apply-op
    std::string series_path;
    OperatorArgs apply_op;
    auto* app_op = app.add_subcommand("apply-op", "apply an operator to a series");
    app_op->add_option("--series", series_path, "input series")->required();
    apply_op.attach(app_op);
    app_op->callback([&] {
        action = [&](std::string& o) {
            o = render_series(apply(apply_op.resolve(false), read_series(series_path)), opt);
            return int(kOk);
        };
    });

    // hypo classify | scan
    std::string poly_text;
    int radius = 0, kernel_terms = 4, degree_cap = 8, gain_radius = 256;
    auto* hypo = app.add_subcommand("hypo", "hypoellipticity of homogeneous constant-coefficient operators");
    hypo->require_subcommand(1);
    auto* classify_cmd = hypo->add_subcommand("classify", "certified verdict with certificates");
    classify_cmd->add_option("--poly", poly_text, "P(x1,x2) as 'c a1 a2, ...'")->required();
    classify_cmd->add_option("--radius", radius, "attach an empirical shell scan of this radius (0 = none)");
    classify_cmd->add_option("--kernel-terms", kernel_terms, "J in the kernel witness");
    classify_cmd->add_option("--degree-cap", degree_cap, "largest factor degree searched");
    classify_cmd->add_option("--gain-radius", gain_radius, "scan radius behind the empirical Sobolev gain");
    classify_cmd->callback([&] {
        action = [&](std::string& o) {
            const HomogeneousPoly p = parse_poly_arg(poly_text);
            if (radius != 0 && radius < 8) throw InputError("--radius must be 0 or >= 8");
            if (gain_radius < 8) throw InputError("--gain-radius must be >= 8");
            ClassifyOptions co;
            co.degree_cap = degree_cap;
            co.kernel_terms = kernel_terms;
            co.empirical_radius = radius;
            co.threads = opt.threads;
            const HypoReport r = classify(p, co);
            std::optional<SobolevGain> gain;
            if (r.verdict == HypoVerdict::HypoellipticCertified) gain = sobolev_gain(p, r, gain_radius);
            if (opt.format == Format::Csv) throw InputError("hypo classify has no CSV form; use hypo scan");
            o = opt.format == Format::Json ? hypo_json(p, r, gain).dump(2) + "\n" : hypo_text(p, r, gain);
            const bool decided = r.verdict == HypoVerdict::HypoellipticCertified || r.verdict == HypoVerdict::NotHypoelliptic;
            return int(decided ? kOk : kInconclusive);
        };
    });
    auto* scan_cmd = hypo->add_subcommand("scan", "exact shell minima of |P(n)|");
    scan_cmd->add_option("--poly", poly_text, "P(x1,x2) as 'c a1 a2, ...'")->required();
    scan_cmd->add_option("--radius", radius, "scan radius (>= 8)")->required();
    scan_cmd->callback([&] {
        action = [&](std::string& o) {
            const HomogeneousPoly p = parse_poly_arg(poly_text);
            if (radius < 8) throw InputError("--radius must be >= 8");
            const EmpiricalScan s = empirical_exponent(p, radius, opt.threads);
            if (opt.format == Format::Json) {
                o = scan_json(s).dump(2) + "\n";
            } else if (opt.format == Format::Csv) {
                o = "shell,n1,n2,norm_sq,min_abs_sq\n";
                for (const auto& m : s.shells)
                    o += std::to_string(m.shell) + "," + std::to_string(m.argmin.k1) + "," + std::to_string(m.argmin.k2) + "," +
                         std::to_string(m.argmin_norm_sq) + "," + to_decimal(m.min_abs * m.min_abs, opt.precision) + "\n";
            } else {
                for (const auto& m : s.shells)
                    o += "shell " + std::to_string(m.shell) + " min " + to_string(m.min_abs) + " at " + m.argmin.str() + "\n";
                o += s.fit_valid ? "k1_fit " + std::to_string(s.k1_fit) + "\n" : "k1_fit none (zero minimum at " + s.zero_witness->str() + ")\n";
            }
            return int(kOk);
        };
    });

    // growth classify
    int min_shells = 8;
    auto* growth = app.add_subcommand("growth", "growth classification of series (heuristic)");
    growth->require_subcommand(1);
    auto* gclass = growth->add_subcommand("classify", "smallest space tag whose growth test passes");
    gclass->add_option("--series", series_path, "input series")->required();
    gclass->add_option("--min-shells", min_shells, "minimum number of complete shells");
    gclass->callback([&] {
        action = [&](std::string& o) {
            GrowthOptions go;
            go.min_shells = min_shells;
            const GrowthReport g = classify_growth(read_series(series_path), go);
            if (opt.format == Format::Csv) {
                o = "shell,log_max\n";
                for (std::size_t i = 0; i < g.shell_log_max.size(); ++i) {
                    std::ostringstream v;
                    v.precision(static_cast<int>(std::min(opt.precision, 17U)));
                    v << g.shell_log_max[i];
                    o += std::to_string(i) + "," + v.str() + "\n";
                }
            } else if (opt.format == Format::Json) {
                json fits = json::array();
                for (const auto& f : g.fits) fits.push_back(fit_json(f));
                json j = {{"model", g.model}, {"exponent", g.exponent}, {"shells", g.shells}, {"heuristic", true}, {"fits", fits}};
                j["tag"] = g.tag ? json(g.tag->str()) : json(nullptr);
                o = j.dump(2) + "\n";
            } else {
                std::ostringstream s;
                s << "tag " << (g.tag ? g.tag->str() : "none") << "\nmodel " << g.model << "\nexponent " << g.exponent << "\nshells "
                  << g.shells << "\nHEURISTIC\n";
                o = s.str();
            }
            return int(kOk);
        };
    });

    // section sup | inf | leq | image | solve
    std::string env_a, env_b;
    OperatorArgs sec_op;
    auto* section = app.add_subcommand("section", "linear sections given by envelope expressions");
    section->require_subcommand(1);
    auto section_out = [&](const std::string& expr, nlohmann::ordered_json extra) {
        if (opt.format == Format::Json) {
            extra["section"] = expr;
            return extra.dump(2) + "\n";
        }
        std::string s = expr + "\n";
        for (const auto& [k, v] : extra.items()) s += k + " " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
        return s;
    };
    for (const char* name : {"sup", "inf", "leq"}) {
        auto* sub = section->add_subcommand(name, std::string(name) + " of two sections");
        sub->add_option("--a", env_a, "envelope expression")->required();
        sub->add_option("--b", env_b, "envelope expression")->required();
        sub->callback([&, n = std::string(name)] {
            action = [&, n](std::string& o) {
                const Section a{parse_env_arg("--a", env_a)}, b{parse_env_arg("--b", env_b)};
                if (n == "leq") {
                    const Comparison c = section_leq(a, b);
                    o = opt.format == Format::Json ? json({{"leq", to_string(c)}}).dump(2) + "\n" : to_string(c) + "\n";
                    return int(c == Comparison::Unknown ? kInconclusive : kOk);
                }
                o = section_out((n == "sup" ? section_sup(a, b) : section_inf(a, b)).str(), nlohmann::ordered_json::object());
                return int(kOk);
            };
        });
    }
    auto* image = section->add_subcommand("image", "image of a section under an operator");
    image->add_option("--s", env_a, "envelope expression")->required();
    sec_op.attach(image);
    image->callback([&] {
        action = [&](std::string& o) {
            o = section_out(operator_image(sec_op.resolve(false), Section{parse_env_arg("--s", env_a)}).str(), nlohmann::ordered_json::object());
            return int(kOk);
        };
    });
    auto* ssolve = section->add_subcommand("solve", "solution section of L u = G");
    ssolve->add_option("--g", env_a, "envelope expression of G")->required();
    sec_op.attach(ssolve);
    ssolve->callback([&] {
        action = [&](std::string& o) {
            const SolutionSection s = solution_section(sec_op.resolve(false), Section{parse_env_arg("--g", env_a)});
            nlohmann::ordered_json extra = {{"provenance", to_string(s.provenance)}};
            extra["containment"] = s.containment ? nlohmann::ordered_json(s.containment->str()) : nlohmann::ordered_json(nullptr);
            extra["note"] = s.note;
            o = section_out(s.section.str(), extra);
            return int(kOk);
        };
    });

    // norm
    std::string m_text;
    unsigned bits = 64;
    auto* norm = app.add_subcommand("norm", "squared Sobolev norm sum (1+k.k)^m |u_k|^2");
    norm->add_option("--series", series_path, "input series")->required();
    norm->add_option("--m", m_text, "Sobolev index (rational)")->required();
    norm->add_option("--bits", bits, "enclosure precision for non-integer m");
    norm->callback([&] {
        action = [&](std::string& o) {
            const Rational m = parse_arg<Rational>("--m", m_text, [](const std::string& t) { return parse_rational(t); });
            const RationalInterval v = sobolev_norm_sq(read_series(series_path), m, bits);
            if (opt.format == Format::Json) {
                o = json({{"exact", v.exact()}, {"lo", to_pair_string(v.lo)}, {"hi", to_pair_string(v.hi)}}).dump(2) + "\n";
            } else if (opt.format == Format::Csv) {
                o = "lo,hi\n" + to_decimal(v.lo, opt.precision) + "," + to_decimal(v.hi, opt.precision) + "\n";
            } else {
                o = v.exact() ? to_string(v.lo) + "\n" : "[" + to_string(v.lo) + ", " + to_string(v.hi) + "]\n";
            }
            return int(kOk);
        };
    });

    std::vector<std::string> argv_store{"torus-spec"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? int(kOk) : int(kInputError);
    }

    try {
        opt.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;
        opt.threads = threads_from_env();
        std::string output;
        const int code = action(output);
        if (opt.out_path.empty())
            out << output;
        else
            write_file(opt.out_path, output);
        return code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const ContractViolation& e) {
        err << "contract violation: " << e.what() << "\n";
        return kContractViolation;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::out_of_range& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace torus::cli
