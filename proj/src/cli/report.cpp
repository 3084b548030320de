#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "context.hpp"
#include "riesz/energy_mc.hpp"
#include "riesz/kappa.hpp"
#include "riesz/minimize.hpp"
#include "riesz/riesz_coeffs.hpp"
#include "riesz/sphere.hpp"

namespace riesz::cli {
namespace {

struct Check {
    std::string experiment;
    std::string name;
    double value;
    std::string bound;
    bool pass;
};

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

class Battery {
public:
    Battery(const ReportSpec& spec, Context& ctx) : spec_(spec), ctx_(ctx) {}

    void run(const std::string& name) {
        try {
            if (name == "kappa-figures") kappa_figures();
            if (name == "coeff-scan") coeff_scan();
            if (name == "identity-table") identity_table();
            if (name == "sphere-energy") sphere_energy();
            if (name == "paircorr") paircorr();
            if (name == "minimize-table") minimize_table();
        } catch (const std::exception& e) {
            checks_.push_back({name, std::string("error: ") + e.what(), NAN, "completes", false});
        }
    }

    [[nodiscard]] const std::vector<Check>& checks() const { return checks_; }

private:
    void add(const std::string& experiment, const std::string& name, double value,
             const std::string& bound, bool pass) {
        checks_.push_back({experiment, name, value, bound, pass});
    }

    void kappa_figures() {
        for (int m : {2, 3, 4}) {
            Table t{{"r", "kappa"}, {}};
            for (int i = 0; i < 300; ++i) {
                const double r = 0.02 + (6.0 - 0.02) * i / 299.0;
                t.rows.push_back({r, kappa::kappa_mm(m, r)});
            }
            ctx_.emit("kappa_m" + std::to_string(m) + ".csv", render_csv(t));
        }
        const double gap = std::abs(kappa::kappa_mm(2, 1e-4) - 0.75);
        add("kappa-figures", "|kappa_22(1e-4) - 3/4|", gap, "< 1e-6", gap < 1e-6);
        for (int m : {3, 4, 5, 6}) {
            const double lo = kappa::positivity_threshold(m);
            double worst = INFINITY;
            for (int i = 0; i < 200; ++i) {
                worst = std::min(worst, kappa::kappa_minus_one(m, lo + (20.0 - lo) * i / 199.0));
            }
            add("kappa-figures", "min kappa_" + std::to_string(m) + std::to_string(m) +
                                     " - 1 beyond sqrt(2m+3)",
                worst, "> 0", worst > 0.0);
        }
    }

    void coeff_scan() {
        for (int m : {2, 3, 4}) {
            Table t{{"s", "c_m_s"}, {}};
            for (const auto& p : coeffs::c_m_scan(m, 0.05, 3.95, 40, 1e-8)) {
                t.rows.push_back({p.s, p.value});
            }
            ctx_.emit("coeff_scan_m" + std::to_string(m) + ".csv", render_csv(t));
            for (double s : {0.1, 0.25, 0.5}) {
                const double c = coeffs::c_m_s({m, s, 1e-9}).value;
                add("coeff-scan", "c_" + std::to_string(m) + "(" + label(s) + ")", c,
                    "< 0", c < 0.0);
            }
        }
        for (int m : {3, 4}) {
            for (double s : {3.9, 3.95, 3.99}) {
                const double c = coeffs::c_m_s({m, s, 1e-9}).value;
                add("coeff-scan", "c_" + std::to_string(m) + "(" + label(s) + ")", c,
                    "> 0", c > 0.0);
            }
        }
        const std::map<int, double> target = {{2, -1.0}, {3, 6.0}};
        for (const auto& [m, want] : target) {
            const double scaled = 0.01 * coeffs::c_m_s({m, 3.99, 1e-9}).value;
            add("coeff-scan", "(4 - s) c_" + std::to_string(m) + "(3.99)", scaled,
                "within 5% of " + label(want),
                std::abs(scaled - want) <= 0.05 * std::abs(want));
        }
    }

    void identity_table() {
        Table t{{"m", "value", "error_estimate"}, {}};
        for (int m = 1; m <= 5; ++m) {
            const auto r = coeffs::normalization_identity(m, 1e-9);
            t.rows.push_back({static_cast<double>(m), r.value, r.error_estimate});
            add("identity-table", "identity m=" + std::to_string(m), r.value, "-1 +- 1e-6",
                std::abs(r.value + 1.0) <= 1e-6);
        }
        ctx_.emit("identity.csv", render_csv(t));
    }

    void sphere_energy() {
        Table t{{"degree", "mean", "std_error", "prediction", "sigmas"}, {}};
        energy::McOptions opt;
        opt.threads = ctx_.threads;
        for (int n : {5, 10, 20, 50}) {
            const auto st = energy::mc_expected_energy(n, sphere::Kernel::log_chordal(),
                                                       spec_.mc_trials, ctx_.seed, opt);
            const double pred = energy::predict_sphere_log(n, 0.5);
            const double sigmas = (st.mean - pred) / st.std_error;
            mc_means_[n] = st.mean;
            t.rows.push_back({static_cast<double>(n), st.mean, st.std_error, pred, sigmas});
            add("sphere-energy", "N=" + std::to_string(n) + " mean vs exact (sigmas)", sigmas,
                "|.| <= 3", std::abs(sigmas) <= 3.0);
        }
        ctx_.emit("sphere_energy.csv", render_csv(t));
    }

    void paircorr() {
        energy::PairCorrOptions opt;
        opt.threads = ctx_.threads;
        const auto h = energy::empirical_pair_correlation(200, spec_.paircorr_trials, 25, 5.0,
                                                          ctx_.seed, opt);
        opt.source = energy::PointSource::uniform;
        const auto c = energy::empirical_pair_correlation(200, spec_.paircorr_trials, 25, 5.0,
                                                          ctx_.seed, opt);
        Table t{{"r_mid", "density", "kappa11", "stderr", "control", "control_stderr"}, {}};
        double worst = 0.0;
        double worst_control = 0.0;
        for (std::size_t b = 0; b < h.density.size(); ++b) {
            const double mid = h.bin_mid(b);
            t.rows.push_back({mid, h.density[b], h.kappa11[b], h.std_error[b], c.density[b],
                              c.std_error[b]});
            if (mid >= 0.5 && mid <= 3.0) {
                worst = std::max(worst, std::abs(h.density[b] - h.kappa11[b]) /
                                            std::max(0.05, 3.0 * h.std_error[b]));
            }
            worst_control = std::max(worst_control, std::abs(c.density[b] - 1.0) /
                                                        (3.0 * c.std_error[b]));
        }
        ctx_.emit("paircorr.csv", render_csv(t));
        add("paircorr", "max |density - kappa_11| / max(0.05, 3 se), r in [0.5, 3]", worst,
            "<= 1", worst <= 1.0);
        add("paircorr", "Poisson control max |density - 1| / (3 se)", worst_control, "<= 1",
            worst_control <= 1.0);
    }

    void minimize_table() {
        minimize::OptimizerConfig opt;
        opt.threads = ctx_.threads;
        const auto half = sphere::SphereConfig::half();
        const auto unit = sphere::SphereConfig::unit();
        Table t{{"n", "energy_half", "mc_mean_half", "energy_unit", "c_n", "elkies"}, {}};
        energy::McOptions mc;
        mc.threads = ctx_.threads;
        for (int n : {10, 20, 50}) {
            if (!mc_means_.count(n)) {
                mc_means_[n] = energy::mc_expected_energy(n, sphere::Kernel::log_chordal(),
                                                          std::min<std::size_t>(spec_.mc_trials, 2000),
                                                          ctx_.seed, mc)
                                   .mean;
            }
            const auto half_min =
                minimize::minimize_energy(n, sphere::Kernel::log_chordal(), opt, ctx_.seed, half);
            const auto unit_min =
                minimize::minimize_energy(n, sphere::Kernel::log_chordal(), opt, ctx_.seed, unit);
            const double elkies = energy::elkies_lower_bound(n);
            t.rows.push_back({static_cast<double>(n), half_min.energy, mc_means_[n],
                              unit_min.energy, minimize::c_n_extract(unit_min), elkies});
            add("minimize-table", "n=" + std::to_string(n) + " minimized - MC mean",
                half_min.energy - mc_means_[n], "< 0", half_min.energy < mc_means_[n]);
            add("minimize-table", "n=" + std::to_string(n) + " minimized - Elkies bound",
                unit_min.energy - elkies, ">= 0", unit_min.energy >= elkies);
        }
        ctx_.emit("minimize.csv", render_csv(t));

        const auto tetra = minimize::minimize_energy(4, sphere::Kernel::riesz(1.0), opt, ctx_.seed);
        double lo = INFINITY;
        double hi = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                const double d =
                    sphere::geodesic_distance(tetra.config.points[i], tetra.config.points[j], half);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
        }
        add("minimize-table", "n=4 s=1 pairwise distance spread", hi - lo, "<= 1e-6",
            hi - lo <= 1e-6);
    }

    const ReportSpec& spec_;
    Context& ctx_;
    std::vector<Check> checks_;
    std::map<int, double> mc_means_;
};

}  // namespace

int run_report(const ReportSpec& spec, Context& ctx) {
    Battery battery(spec, ctx);
    for (const auto& name : spec.experiments) battery.run(name);

    std::string csv = "experiment,check,value,bound,status\n";
    bool all_pass = true;
    for (const auto& c : battery.checks()) {
        csv += csv_escape(c.experiment) + "," + csv_escape(c.name) + "," + format_number(c.value) +
               "," + csv_escape(c.bound) + "," + (c.pass ? "pass" : "FAIL") + "\n";
        *ctx.out << (c.pass ? "pass  " : "FAIL  ") << c.experiment << ": " << c.name << " = "
                 << format_number(c.value) << " (" << c.bound << ")\n";
        all_pass = all_pass && c.pass;
    }
    ctx.emit("summary.csv", csv);
    return all_pass ? 0 : 1;
}

}  // namespace riesz::cli
