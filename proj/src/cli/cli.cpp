#include "riesz/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "context.hpp"
#include "riesz/energy_mc.hpp"
#include "riesz/ensembles.hpp"
#include "riesz/errors.hpp"
#include "riesz/kappa.hpp"
#include "riesz/minimize.hpp"
#include "riesz/riesz_coeffs.hpp"
#include "riesz/sphere.hpp"

namespace riesz::cli {
namespace {

using nlohmann::json;

struct KernelArgs {
    std::string name = "log-chordal";
    std::optional<double> s;
    double radius = 0.5;
    std::string counting = "unordered";
};

sphere::PairCounting parse_counting(const std::string& c) {
    if (c == "ordered") return sphere::PairCounting::ordered;
    if (c == "unordered") return sphere::PairCounting::unordered;
    throw InvalidArgument("--counting must be ordered or unordered");
}

sphere::Kernel make_kernel(const KernelArgs& k, const sphere::SphereConfig& cfg) {
    const auto counting = parse_counting(k.counting);
    if (k.name == "log-chordal") return sphere::Kernel::log_chordal(counting);
    if (k.name == "log-geodesic") return sphere::Kernel::log_geodesic(counting);
    if (k.name == "green") return sphere::Kernel::green(cfg, counting);
    if (k.name == "riesz") {
        if (!k.s) throw InvalidArgument("--kernel riesz needs --s");
        return sphere::Kernel::riesz(*k.s, counting);
    }
    throw InvalidArgument("unknown kernel '" + k.name + "'");
}

json kernel_json(const KernelArgs& k) {
    json j = {{"kernel", k.name}, {"radius", k.radius}, {"counting", k.counting}};
    if (k.name == "riesz" && k.s) j["s"] = *k.s;
    return j;
}

void add_kernel_options(CLI::App* app, KernelArgs& k) {
    app->add_option("--kernel", k.name, "log-chordal | log-geodesic | riesz | green")
        ->capture_default_str();
    app->add_option("--s", k.s, "Riesz exponent for --kernel riesz");
    app->add_option("--radius", k.radius, "sphere radius, 0.5 or 1")->capture_default_str();
    app->add_option("--counting", k.counting, "ordered | unordered")->capture_default_str();
}

json quad_json(const coeffs::QuadResult& r) {
    return {{"value", r.value},
            {"error_estimate", r.error_estimate},
            {"tail_bound", r.tail_bound},
            {"truncation_radius", r.truncation_radius},
            {"subdivisions", r.subdivisions}};
}

// kappa --------------------------------------------------------------------

struct KappaArgs {
    int m = 1;
    double rmin = 0.0;
    double rmax = 5.0;
    int points = 500;
    int precision = 16;
    bool log_grid = false;
};

void cmd_kappa(const KappaArgs& a, Context& ctx) {
    if (a.points < 1) throw InvalidArgument("--points must be positive");
    if (!(a.rmax >= a.rmin && a.rmin >= 0.0)) throw InvalidArgument("need 0 <= rmin <= rmax");
    if (a.log_grid && !(a.rmin > 0.0)) throw InvalidArgument("--log-grid needs rmin > 0");
    ctx.config.update({{"m", a.m}, {"rmin", a.rmin}, {"rmax", a.rmax}, {"points", a.points},
                       {"precision", a.precision}, {"log_grid", a.log_grid}});
    kappa::EvalPolicy policy;
    policy.direct_precision = a.precision;
    Table t{{"r", "kappa", "kappa_minus_1", "term1", "term2", "term3"}, {}};
    for (int i = 0; i < a.points; ++i) {
        const double u = a.points == 1 ? 0.0 : static_cast<double>(i) / (a.points - 1);
        const double r = a.log_grid ? a.rmin * std::pow(a.rmax / a.rmin, u)
                                    : a.rmin + (a.rmax - a.rmin) * u;
        const kappa::KappaQuery q{a.m, r, policy};
        // the decomposition is undefined at r = 0
        double terms[3] = {NAN, NAN, NAN};
        if (r > 0.0) {
            const auto d = kappa::kappa_decompose(q);
            terms[0] = d.term_one;
            terms[1] = d.term_two;
            terms[2] = d.term_three;
        }
        t.rows.push_back({r, kappa::kappa_mm(q), kappa::kappa_minus_one(q), terms[0], terms[1],
                          terms[2]});
    }
    ctx.emit_table("kappa_m" + std::to_string(a.m), t);
}

// coeff --------------------------------------------------------------------

struct CoeffArgs {
    int m = 1;
    std::optional<double> s;
    bool log = false;
    bool identity = false;
    bool s_star = false;
    bool residue = false;
    double tol = 1e-9;
};

void cmd_coeff(const CoeffArgs& a, Context& ctx) {
    const int modes = (a.s ? 1 : 0) + (a.log ? 1 : 0) + (a.identity ? 1 : 0) +
                      (a.s_star ? 1 : 0) + (a.residue ? 1 : 0);
    if (modes != 1) {
        throw InvalidArgument("choose exactly one of --s, --log, --identity, --s-star, --residue");
    }
    ctx.config.update({{"m", a.m}, {"tol", a.tol}});
    json result = {{"m", a.m}, {"tol", a.tol}};
    coeffs::QuadResult r;
    if (a.s_star || a.residue) {
        // bisection width and limit value carry no quadrature error fields
        result["quantity"] = a.s_star ? "s_star" : "residue_at_4";
        ctx.config["quantity"] = result["quantity"];
        result["value"] = a.s_star ? coeffs::s_star(a.m, a.tol) : coeffs::residue_at_4(a.m);
        result["error_estimate"] = a.s_star ? a.tol : 0.0;
        result["tail_bound"] = 0.0;
        ctx.emit_object("coeff", result);
        return;
    }
    if (a.identity) {
        r = coeffs::normalization_identity(a.m, a.tol);
        result["quantity"] = "normalization_identity";
        ctx.config["quantity"] = "identity";
    } else if (a.log) {
        r = coeffs::c_m_log(a.m, a.tol);
        result["quantity"] = "c_m_log";
        ctx.config["quantity"] = "log";
    } else {
        r = coeffs::c_m_s({a.m, *a.s, a.tol});
        result["quantity"] = "c_m_s";
        result["s"] = *a.s;
        ctx.config["s"] = *a.s;
    }
    result.update(quad_json(r));
    ctx.emit_object("coeff", result);
}

struct ScanArgs {
    int m = 2;
    double smin = 0.05;
    double smax = 3.95;
    int points = 40;
    double tol = 1e-8;
};

void cmd_coeff_scan(const ScanArgs& a, Context& ctx) {
    ctx.config.update({{"m", a.m}, {"smin", a.smin}, {"smax", a.smax}, {"points", a.points},
                       {"tol", a.tol}});
    Table t{{"s", "c_m_s"}, {}};
    for (const auto& p : coeffs::c_m_scan(a.m, a.smin, a.smax, a.points, a.tol)) {
        t.rows.push_back({p.s, p.value});
    }
    ctx.emit_table("coeff_scan_m" + std::to_string(a.m), t);
}

// sample -------------------------------------------------------------------

struct SampleArgs {
    int degree = 10;
    std::size_t trials = 1;
    double radius = 0.5;
};

void cmd_sample(const SampleArgs& a, Context& ctx) {
    if (a.trials < 1) throw InvalidArgument("--trials must be positive");
    ctx.config.update({{"degree", a.degree}, {"trials", a.trials}, {"radius", a.radius}});
    const sphere::SphereConfig cfg(a.radius);
    std::string csv = "trial,re,im,x,y,z\n";
    for (std::size_t t = 0; t < a.trials; ++t) {
        ensembles::RngStream rng(ctx.seed, t);
        const auto roots = ensembles::find_roots(ensembles::sample_polynomial(a.degree, rng));
        for (const auto& z : roots.roots) {
            const auto p = sphere::stereographic_to_sphere(z, cfg);
            const double re = z ? z->real() : INFINITY;
            const double im = z ? z->imag() : INFINITY;
            csv += std::to_string(t) + "," + format_number(re) + "," + format_number(im) + "," +
                   format_number(p.x()) + "," + format_number(p.y()) + "," +
                   format_number(p.z()) + "\n";
        }
    }
    ctx.emit("zeros.csv", csv);
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
    int degree = 10;
    std::size_t trials = 10000;
    KernelArgs kernel;
};

void cmd_simulate(const SimulateArgs& a, Context& ctx) {
    const sphere::SphereConfig cfg(a.kernel.radius);
    const auto kernel = make_kernel(a.kernel, cfg);
    ctx.config.update(kernel_json(a.kernel));
    ctx.config.update({{"degree", a.degree}, {"trials", a.trials}});

    energy::McOptions opt;
    opt.sphere = cfg;
    opt.threads = ctx.threads;
    const auto stats = energy::mc_expected_energy(a.degree, kernel, a.trials, ctx.seed, opt);

    json result = kernel_json(a.kernel);
    result.update({{"degree", a.degree},
                   {"trials", stats.trials},
                   {"seed", stats.seed},
                   {"mean", stats.mean},
                   {"std_error", stats.std_error},
                   {"failures", stats.failures}});
    const double pairs = a.degree * (a.degree - 1.0) / 2.0;
    const double pair_factor = kernel.counting == sphere::PairCounting::ordered ? 2.0 : 1.0;
    try {
        result["uniform_baseline"] = pair_factor * pairs * sphere::a1_sphere(kernel, cfg);
    } catch (const DomainError&) {
        result["uniform_baseline"] = nullptr;
    }
    if (a.kernel.name == "log-chordal") {
        const double prediction = pair_factor * energy::predict_sphere_log(a.degree, cfg.radius());
        result["prediction"] = prediction;
        result["prediction_kind"] = "exact expected log-chordal energy";
        result["discrepancy_sigmas"] = (stats.mean - prediction) / stats.std_error;
    } else {
        result["prediction"] = nullptr;
        result["discrepancy_sigmas"] = nullptr;
    }
    ctx.emit_object("simulate", result);
}

// paircorr -----------------------------------------------------------------

struct PairCorrArgs {
    int degree = 200;
    std::size_t trials = 2000;
    int bins = 25;
    double rmax = 5.0;
    std::string source = "zeros";
};

void cmd_paircorr(const PairCorrArgs& a, Context& ctx) {
    energy::PairCorrOptions opt;
    if (a.source == "uniform") {
        opt.source = energy::PointSource::uniform;
    } else if (a.source != "zeros") {
        throw InvalidArgument("--source must be zeros or uniform");
    }
    opt.threads = ctx.threads;
    ctx.config.update({{"degree", a.degree}, {"trials", a.trials}, {"bins", a.bins},
                       {"rmax", a.rmax}, {"source", a.source}});
    const auto h = energy::empirical_pair_correlation(a.degree, a.trials, a.bins, a.rmax,
                                                      ctx.seed, opt);
    for (const auto& w : h.warnings) *ctx.err << "warning: " << w << "\n";
    Table t{{"r_mid", "density", "kappa11", "stderr"}, {}};
    for (std::size_t b = 0; b < h.density.size(); ++b) {
        t.rows.push_back({h.bin_mid(b), h.density[b], h.kappa11[b], h.std_error[b]});
    }
    ctx.emit_table("paircorr", t);
}

// minimize -----------------------------------------------------------------

struct MinimizeArgs {
    int n = 10;
    int restarts = 8;
    int max_iterations = 5000;
    KernelArgs kernel;
};

void cmd_minimize(const MinimizeArgs& a, Context& ctx) {
    const sphere::SphereConfig cfg(a.kernel.radius);
    const auto kernel = make_kernel(a.kernel, cfg);
    ctx.config.update(kernel_json(a.kernel));
    ctx.config.update({{"n", a.n}, {"restarts", a.restarts}, {"max_iterations", a.max_iterations}});

    minimize::OptimizerConfig opt;
    opt.restarts = a.restarts;
    opt.max_iterations = a.max_iterations;
    opt.threads = ctx.threads;
    const auto res = minimize::minimize_energy(a.n, kernel, opt, ctx.seed, cfg);

    json result = kernel_json(a.kernel);
    result.update({{"n", a.n},
                   {"seed", ctx.seed},
                   {"restarts", a.restarts},
                   {"energy", res.energy},
                   {"gradient_norm", res.gradient_norm},
                   {"gradient_tolerance", opt.tolerance_for(static_cast<std::size_t>(a.n))},
                   {"iterations", res.iterations},
                   {"restart_index", res.restart_index},
                   {"converged", res.converged}});
    if (a.kernel.name == "log-chordal" && cfg.radius() == 1.0 &&
        kernel.counting == sphere::PairCounting::unordered) {
        result["c_n"] = minimize::c_n_extract(res);
        result["elkies_lower_bound"] = energy::elkies_lower_bound(a.n);
        result["rsz_upper_constant"] = energy::rsz_upper_constant();
    }
    json pts = json::array();
    for (const auto& p : res.config.points) pts.push_back({p.x(), p.y(), p.z()});
    result["points"] = pts;
    ctx.emit_object("minimize", result);
}

std::string join_args(const std::vector<std::string>& args) {
    std::string out = "riesz-zeros";
    for (const auto& a : args) out += " " + a;
    return out;
}

}  // namespace

void Context::emit(const std::string& filename, const std::string& payload) {
    if (!out_dir) {
        *out << payload;
        return;
    }
    write_atomic(*out_dir / filename, payload);
    outputs.push_back({filename, sha256_hex(payload)});
}

void Context::emit_table(const std::string& stem, const Table& table) {
    if (format_given && format == Format::json) {
        emit(stem + ".json", table_to_json(table).dump(2) + "\n");
    } else {
        emit(stem + ".csv", render_csv(table));
    }
}

void Context::emit_object(const std::string& stem, const nlohmann::json& obj) {
    if (format_given && format == Format::csv) {
        emit(stem + ".csv", render_scalar_csv(obj));
    } else {
        emit(stem + ".json", obj.dump(2) + "\n");
    }
}

void Context::finish() {
    if (!out_dir) return;
    RunManifest m;
    m.command_line = command_line;
    m.master_seed = seed;
    m.tool_version = kToolVersion;
    m.timestamp = utc_timestamp();
    m.input_digest = sha256_hex(config.dump());
    m.outputs = outputs;
    write_atomic(*out_dir / "manifest.json", m.to_json().dump(2) + "\n");
}

unsigned resolve_threads(const std::string& flag, const std::optional<std::string>& env) {
    const std::string& value = env && !env->empty() ? *env : flag;
    if (value == "auto") return std::max(1u, std::thread::hardware_concurrency());
    std::size_t used = 0;
    long parsed = 0;
    try {
        parsed = std::stol(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || parsed < 1) {
        throw InvalidArgument("threads must be 'auto' or a positive integer, got '" + value + "'");
    }
    return static_cast<unsigned>(parsed);
}

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> names = {"kappa-figures", "coeff-scan",
                                                   "identity-table", "sphere-energy",
                                                   "paircorr", "minimize-table"};
    return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Riesz energies of zeros of random polynomials: kernels, coefficients, "
                 "Monte Carlo and minimization.",
                 "riesz-zeros"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = kDefaultSeed;
    std::string out_dir;
    std::string format;
    std::string threads = "1";
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--out", out_dir, "output directory (stdout when omitted)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads: integer or auto")->capture_default_str();

    KappaArgs kappa_args;
    auto* kappa_cmd = app.add_subcommand("kappa", "tabulate kappa_mm(r)");
    kappa_cmd->add_option("--m", kappa_args.m)->required();
    kappa_cmd->add_option("--rmin", kappa_args.rmin)->capture_default_str();
    kappa_cmd->add_flag("--log-grid", kappa_args.log_grid, "geometric spacing in r");
    kappa_cmd->add_option("--rmax", kappa_args.rmax)->capture_default_str();
    kappa_cmd->add_option("--points", kappa_args.points)->capture_default_str();
    kappa_cmd->add_option("--precision", kappa_args.precision, "decimal digits; > 16 uses 50")
        ->capture_default_str();

    CoeffArgs coeff_args;
    auto* coeff_cmd = app.add_subcommand("coeff", "single coefficient integral");
    coeff_cmd->add_option("--m", coeff_args.m)->required();
    coeff_cmd->add_option("--s", coeff_args.s, "Riesz exponent in (0, min(2m, 4))");
    coeff_cmd->add_flag("--log", coeff_args.log, "logarithmic coefficient");
    coeff_cmd->add_flag("--identity", coeff_args.identity, "normalization identity (-1)");
    coeff_cmd->add_flag("--s-star", coeff_args.s_star, "smallest sign change of c_m(s)");
    coeff_cmd->add_flag("--residue", coeff_args.residue, "limit of (4 - s) c_m(s) as s -> 4");
    coeff_cmd->add_option("--tol", coeff_args.tol)->capture_default_str();

    ScanArgs scan_args;
    auto* scan_cmd = app.add_subcommand("coeff-scan", "c_m(s) over a grid of s");
    scan_cmd->add_option("--m", scan_args.m)->required();
    scan_cmd->add_option("--smin", scan_args.smin)->capture_default_str();
    scan_cmd->add_option("--smax", scan_args.smax)->capture_default_str();
    scan_cmd->add_option("--points", scan_args.points)->capture_default_str();
    scan_cmd->add_option("--tol", scan_args.tol)->capture_default_str();

    SampleArgs sample_args;
    auto* sample_cmd = app.add_subcommand("sample", "zeros of random SU(2) polynomials");
    sample_cmd->add_option("--degree", sample_args.degree)->required();
    sample_cmd->add_option("--trials", sample_args.trials)->capture_default_str();
    sample_cmd->add_option("--radius", sample_args.radius)->capture_default_str();

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo expected energy of zeros");
    sim_cmd->add_option("--degree", sim_args.degree)->required();
    sim_cmd->add_option("--trials", sim_args.trials)->capture_default_str();
    add_kernel_options(sim_cmd, sim_args.kernel);

    PairCorrArgs pc_args;
    auto* pc_cmd = app.add_subcommand("paircorr", "rescaled pair correlation of zeros");
    pc_cmd->add_option("--degree", pc_args.degree)->capture_default_str();
    pc_cmd->add_option("--trials", pc_args.trials)->capture_default_str();
    pc_cmd->add_option("--bins", pc_args.bins)->capture_default_str();
    pc_cmd->add_option("--rmax", pc_args.rmax)->capture_default_str();
    pc_cmd->add_option("--source", pc_args.source, "zeros | uniform")->capture_default_str();

    MinimizeArgs min_args;
    auto* min_cmd = app.add_subcommand("minimize", "minimize the energy of n points");
    min_cmd->add_option("--n", min_args.n)->required();
    min_cmd->add_option("--restarts", min_args.restarts)->capture_default_str();
    min_cmd->add_option("--max-iterations", min_args.max_iterations)->capture_default_str();
    add_kernel_options(min_cmd, min_args.kernel);

    ReportSpec report_spec;
    std::vector<std::string> experiments;
    auto* report_cmd = app.add_subcommand("report", "run the experiment battery");
    report_cmd->add_option("--experiments", experiments, "subset of experiments")
        ->delimiter(',')
        ->check(CLI::IsMember(known_experiments()));
    report_cmd->add_option("--trials", report_spec.mc_trials, "Monte Carlo trials per degree")
        ->capture_default_str();
    report_cmd->add_option("--paircorr-trials", report_spec.paircorr_trials)
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    Context ctx;
    ctx.out = &out;
    ctx.err = &err;
    ctx.seed = seed;
    ctx.command_line = join_args(args);
    if (!out_dir.empty()) ctx.out_dir = out_dir;
    if (!format.empty()) {
        ctx.format_given = true;
        ctx.format = format == "csv" ? Format::csv : Format::json;
    }

    try {
        const char* env = std::getenv("RIESZ_ZEROS_THREADS");
        ctx.threads = resolve_threads(threads, env ? std::optional<std::string>(env) : std::nullopt);
        ctx.config = {{"seed", seed}, {"format", format}};
        int code = 0;
        if (kappa_cmd->parsed()) {
            ctx.config["command"] = "kappa";
            cmd_kappa(kappa_args, ctx);
        } else if (coeff_cmd->parsed()) {
            ctx.config["command"] = "coeff";
            cmd_coeff(coeff_args, ctx);
        } else if (scan_cmd->parsed()) {
            ctx.config["command"] = "coeff-scan";
            cmd_coeff_scan(scan_args, ctx);
        } else if (sample_cmd->parsed()) {
            ctx.config["command"] = "sample";
            cmd_sample(sample_args, ctx);
        } else if (sim_cmd->parsed()) {
            ctx.config["command"] = "simulate";
            cmd_simulate(sim_args, ctx);
        } else if (pc_cmd->parsed()) {
            ctx.config["command"] = "paircorr";
            cmd_paircorr(pc_args, ctx);
        } else if (min_cmd->parsed()) {
            ctx.config["command"] = "minimize";
            cmd_minimize(min_args, ctx);
        } else if (report_cmd->parsed()) {
            ctx.config["command"] = "report";
            report_spec.experiments = experiments.empty() ? known_experiments() : experiments;
            ctx.config.update({{"experiments", report_spec.experiments},
                               {"trials", report_spec.mc_trials},
                               {"paircorr_trials", report_spec.paircorr_trials}});
            if (!ctx.out_dir) ctx.out_dir = "report";
            code = run_report(report_spec, ctx);
        }
        ctx.finish();
        return code;
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace riesz::cli
