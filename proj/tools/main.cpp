#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "freegrass/algebra.hpp"
#include "freegrass/freeprob.hpp"
#include "freegrass/ncpoly.hpp"
#include "freegrass/report.hpp"
#include "freegrass/suites.hpp"

using namespace freegrass;
using freegrass::cli::ConfigError;
using freegrass::cli::RunConfig;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Flags {
    std::optional<std::string> algebra, ladder, poly, output, format, config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> E, samples, degree, depth, points, instances;
};

BaseAlgebra parse_algebra(const std::string& s) {
    try {
        return BaseAlgebra::parse(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad algebra spec: ") + e.what());
    }
}

NCPoly load_poly(const std::string& path) {
    const json j = cli::read_json_file(path);
    try {
        return NCPoly::from_json(j);
    } catch (const std::exception& e) {
        throw ConfigError("'" + path + "' is not a polynomial: " + e.what());
    }
}

RunConfig resolve(const Flags& f, const std::string& command, const std::string& target) {
    RunConfig cfg;
    if (f.config) cli::apply_json(cfg, cli::read_json_file(*f.config));
    cfg.command = command;
    cfg.target = target;
    if (f.algebra) cfg.algebra = *f.algebra;
    if (f.seed) cfg.seed = *f.seed;
    if (f.E) cfg.E = *f.E;
    if (f.ladder) cfg.ladder = cli::parse_ladder(*f.ladder);
    if (f.samples) cfg.samples = *f.samples;
    if (f.instances) cfg.instances = *f.instances;
    if (f.poly) cfg.poly = *f.poly;
    if (f.degree) cfg.degree = *f.degree;
    if (f.depth) cfg.depth = *f.depth;
    if (f.points) cfg.points = *f.points;
    if (f.output) cfg.output = *f.output;
    if (f.format) cfg.format = *f.format;
    if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "csv")
        throw ConfigError("format must be json or csv");
    return cfg;
}

Tolerances tolerances(const RunConfig& cfg) {
    try {
        return Tolerances::from_json(cfg.tolerances);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SuiteOptions suite_options(const RunConfig& cfg) {
    SuiteOptions o;
    if (cfg.algebra) o.algebras = {parse_algebra(*cfg.algebra)};
    o.seed = cfg.seed;
    o.instances = cfg.instances;
    o.E = cfg.E;
    o.max_degree = cfg.degree;
    o.tol = tolerances(cfg);
    if (o.E && !o.algebras.empty() && o.algebras[0].kind == AlgebraKind::FullMatrix && o.E % o.algebras[0].k)
        throw ConfigError("E must be a multiple of k for M_k");
    return o;
}

McConfig mc_config(const RunConfig& cfg) {
    McConfig mc;
    mc.alg = parse_algebra(cfg.algebra.value_or("m2"));
    mc.ladder = cfg.ladder.empty() ? std::vector<std::size_t>{20, 50, 100, 150} : cfg.ladder;
    mc.samples = cfg.samples ? cfg.samples : 40;
    mc.seed = cfg.seed;
    try {
        mc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return mc;
}

void write_checks_csv(std::ostream& os, const Report& r) {
    os << "identity,anchor,instances,value,relation,bound,pass\n";
    os.precision(12);
    for (const auto& c : r.checks())
        os << c.name << ',' << c.anchor << ',' << c.instances << ',' << c.value << ',' << c.relation << ',' << c.bound
           << ',' << (c.pass ? "true" : "false") << '\n';
}

void emit(const RunConfig& cfg, const std::string& payload) {
    if (cfg.output.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + cfg.output + "'");
    out << payload;
}

int finish(const RunConfig& cfg, const Report& r, const std::string* csv_payload) {
    const std::string fmt = cfg.format.empty() ? (csv_payload ? "csv" : "json") : cfg.format;
    if (fmt == "csv") {
        if (csv_payload) {
            emit(cfg, *csv_payload);
        } else {
            std::ostringstream os;
            write_checks_csv(os, r);
            emit(cfg, os.str());
        }
    } else {
        json j = r.to_json();
        j["run"] = cfg.to_json();
        j["run"].erase("output");
        emit(cfg, j.dump(2) + "\n");
    }
    std::cerr << r.suite() << ": " << (r.pass() ? "PASS" : "FAIL") << '\n' << r.summary();
    return r.pass() ? kExitPass : kExitFail;
}

int run(const RunConfig& cfg) {
    const std::string& cmd = cfg.command;
    if (cmd == "verify") {
        const SuiteOptions o = suite_options(cfg);
        Report r = [&] {
            if (cfg.target == "sphere-duality") {
                SphereOptions so;
                so.points = cfg.points;
                so.tol = o.tol.sphere;
                return run_sphere(so);
            }
            return run_verify(cfg.target, o);
        }();
        return finish(cfg, r, nullptr);
    }
    if (cmd == "mc") {
        const McConfig mc = mc_config(cfg);
        std::ostringstream csv;
        if (cfg.target == "orthogonality") {
            const Report r = run_mc_orthogonality(mc, cfg.degree ? cfg.degree : 3, &csv);
            const std::string s = csv.str();
            return finish(cfg, r, &s);
        }
        if (cfg.target == "coefficients") {
            std::optional<NCPoly> p;
            if (cfg.poly) p = load_poly(*cfg.poly);
            const std::size_t deg = cfg.degree ? cfg.degree : (p ? p->degree() : 2);
            const Report r = run_mc_coefficients(mc, p, deg, &csv);
            const std::string s = csv.str();
            return finish(cfg, r, &s);
        }
        if (cfg.target == "rtransform-additivity") {
            RTransformOptions ro;
            ro.seed = cfg.seed;
            ro.max_degree = cfg.degree ? cfg.degree : 5;
            ro.tol = tolerances(cfg);
            const Report r = run_rtransform(ro, &csv);
            const std::string s = csv.str();
            return finish(cfg, r, &s);
        }
        throw ConfigError("unknown experiment '" + cfg.target + "'");
    }
    if (cmd == "pathological") {
        PathologicalOptions po;
        po.algebra = parse_algebra(cfg.algebra.value_or("c2"));
        if (po.algebra.dim() < 2) throw ConfigError("the construction needs dim B > 1");
        po.depth = cfg.depth;
        if (po.depth < 1 || po.depth > 3) throw ConfigError("depth must be 1, 2 or 3");
        po.seed = cfg.seed;
        po.tol = tolerances(cfg).vanishing;
        json table;
        Report r = run_pathological(po, &table);
        if (cfg.format == "csv") {
            std::ostringstream os;
            os << "j,p,vanish_level,witness_level,monomial_degree,lambda,radius,witness_point_norm,witness_norm\n";
            os.precision(12);
            for (const auto& row : table)
                os << row["j"] << ',' << row["p"] << ',' << row["vanish_level"] << ',' << row["witness_level"] << ','
                   << row["monomial_degree"] << ',' << row["lambda"].get<double>() << ','
                   << row["radius"].get<double>() << ',' << row["witness_point_norm"].get<double>() << ','
                   << row["witness_norm"].get<double>() << '\n';
            const std::string s = os.str();
            return finish(cfg, r, &s);
        }
        return finish(cfg, r, nullptr);
    }
    if (cmd == "series") {
        SeriesOptions so;
        so.base = suite_options(cfg);
        if (cfg.poly) so.poly = load_poly(*cfg.poly);
        if (cfg.degree) so.extraction_degree = cfg.degree;
        if (cfg.target == "roundtrip") {
            so.composition_pairs = 0;
            so.truncation_max = 0;
        } else if (cfg.target == "composition") {
            so.truncation_max = 0;
        } else if (cfg.target == "truncation") {
            so.composition_pairs = 0;
        } else if (cfg.target != "all") {
            throw ConfigError("unknown series mode '" + cfg.target + "'");
        }
        return finish(cfg, run_series(so), nullptr);
    }
    if (cmd == "sphere") {
        SphereOptions so;
        so.points = cfg.points;
        if (so.points < 8) throw ConfigError("points must be >= 8");
        so.tol = tolerances(cfg).sphere;
        return finish(cfg, run_sphere(so), nullptr);
    }
    throw ConfigError("no command given");
}

void add_common(CLI::App& app, Flags& f) {
    app.add_option("--algebra", f.algebra, "Base algebra: c, cK (C^K) or mK (M_K)");
    app.add_option("--seed", f.seed, "RNG seed");
    app.add_option("--E", f.E, "Size d of E = M_d");
    app.add_option("--N", f.ladder, "N-ladder, comma separated");
    app.add_option("--samples", f.samples, "Samples per N");
    app.add_option("--instances", f.instances, "Random instances per configuration");
    app.add_option("--poly", f.poly, "Polynomial JSON file");
    app.add_option("--degree", f.degree, "Maximal degree (word length)");
    app.add_option("--depth", f.depth, "Depth of the unbounded construction");
    app.add_option("--points", f.points, "Quadrature points");
    app.add_option("--config", f.config, "JSON config file; flags override it");
    app.add_option("--output", f.output, "Output path (default stdout)");
    app.add_option("--format", f.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free analysis verification suites and experiments", "freegrass"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    Flags flags;
    std::string target;

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", target, "Suite name")
        ->required()
        ->check(CLI::IsMember(verify_suite_names()));
    auto* mc = app.add_subcommand("mc", "Run a Monte Carlo experiment");
    mc->add_option("experiment", target, "orthogonality | coefficients | rtransform-additivity")
        ->required()
        ->check(CLI::IsMember({"orthogonality", "coefficients", "rtransform-additivity"}));
    auto* path = app.add_subcommand("pathological", "Witness table of the unbounded construction");
    auto* series = app.add_subcommand("series", "Coefficient extraction, composition and truncation");
    series->add_option("mode", target, "all | roundtrip | composition | truncation")
        ->check(CLI::IsMember({"all", "roundtrip", "composition", "truncation"}));
    auto* sphere = app.add_subcommand("sphere", "Duality on the Riemann sphere");
    for (CLI::App* sub : {verify, mc, path, series, sphere}) add_common(*sub, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "series" && target.empty()) target = "all";
    try {
        return run(resolve(flags, command, target));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
}
