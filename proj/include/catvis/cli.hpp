/**
 * Copyright 2026 The catvis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Every flag can also be set through an environment
// variable CATVIS_<FLAG>, upper-cased with dashes turned into underscores.

#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catvis/experiment.hpp"
#include "catvis/heisenberg.hpp"
#include "catvis/params.hpp"
#include "catvis/phase_space.hpp"
#include "catvis/report.hpp"

namespace catvis {

struct RunConfig {
    std::string subcommand;
    double R = 0.0;
    double abs_alpha0 = 2.0;
    double alpha0_phase = kPi / 2.0;
    double phi = kPi / 4.0;
    double theta = 0.0;
    bool degrees = false;
    std::size_t cutoff_a = 0;
    std::size_t cutoff_b = 0;
    double grid_half_width = 6.0;
    double grid_spacing = 0.1;
    std::string format = "csv";
    std::string output;
    bool verbose = false;

    bool brute_force = false;
    bool fringe = false;
    std::size_t n_theta = 16;

    std::string state = "cat";
    std::string stage = "output";
    std::string marginal = "A";

    std::vector<double> R_values{0.05, 0.1, 0.2, 0.3, 0.5};
    std::vector<double> alpha0_values{0.5, 1.0, 2.0, 3.0};
    std::vector<double> phi_values{kPi / 6.0, kPi / 4.0, kPi / 2.0};
    unsigned threads = 0;

    /// Converts the angles for which given(flag) holds from degrees to radians.
    /// Defaults are already in radians and are left alone.
    template <class Given>
    void normalize_angles(Given given) {
        if (!degrees) return;
        const double k = kPi / 180.0;
        if (given("--phi")) phi *= k;
        if (given("--theta")) theta *= k;
        if (given("--alpha0-phase")) alpha0_phase *= k;
        if (given("--phi-values")) {
            for (auto& p : phi_values) p *= k;
        }
        degrees = false;
    }

    void normalize_angles() {
        normalize_angles([](const char*) { return true; });
    }

    ExperimentParams params() const {
        ExperimentParams p;
        p.alpha0 = std::polar(abs_alpha0, alpha0_phase);
        p.phi = phi;
        p.R = R;
        p.theta = theta;
        p.cutoff_a = cutoff_a;
        p.cutoff_b = cutoff_b;
        p.grid.half_width = grid_half_width;
        p.grid.spacing = grid_spacing;
        return p;
    }
};

namespace detail {

inline std::string env_name(const std::string& flag) {
    std::string s = "CATVIS_";
    for (char ch : flag) s += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

inline void add_common(CLI::App* sub, RunConfig& cfg) {
    auto finite = CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                std::size_t pos = 0;
                const double v = std::stod(s, &pos);
                if (pos != s.size() || !std::isfinite(v)) return "must be a finite real number";
            } catch (const std::exception&) {
                return "must be a finite real number";
            }
            return {};
        },
        "FINITE");
    auto real = [&](const std::string& flag, double& target, const std::string& help) {
        sub->add_option("--" + flag, target, help)->capture_default_str()->check(finite)->envname(env_name(flag));
    };
    real("R", cfg.R, "beam-splitter reflection coefficient, 0 <= R < 1");
    real("alpha0", cfg.abs_alpha0, "cat amplitude |alpha0|");
    real("alpha0-phase", cfg.alpha0_phase, "phase of alpha0");
    real("phi", cfg.phi, "Kerr phase shift phi");
    real("theta", cfg.theta, "single-photon phase theta");
    real("grid-half-width", cfg.grid_half_width, "phase-space grid half-width per plane");
    real("grid-spacing", cfg.grid_spacing, "phase-space grid spacing");
    sub->add_flag("--degrees", cfg.degrees, "read angles in degrees")->envname(env_name("degrees"));
    sub->add_option("--cutoff-a", cfg.cutoff_a, "Fock cutoff of mode A (0 = automatic)")
        ->capture_default_str()
        ->envname(env_name("cutoff-a"));
    sub->add_option("--cutoff-b", cfg.cutoff_b, "Fock cutoff of mode B (0 = automatic)")
        ->capture_default_str()
        ->envname(env_name("cutoff-b"));
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str()
        ->envname(env_name("format"));
    sub->add_option("-o,--output", cfg.output, "output file (default stdout)")->envname(env_name("output"));
    sub->add_flag("-v,--verbose", cfg.verbose, "progress messages on stderr")->envname(env_name("verbose"));
}

inline void echo_params(Report& r, const RunConfig& c) {
    r.params = {{"R", c.R},
                {"alpha0", c.abs_alpha0},
                {"alpha0_phase", c.alpha0_phase},
                {"phi", c.phi},
                {"theta", c.theta},
                {"cutoff_a", static_cast<double>(c.cutoff_a)},
                {"cutoff_b", static_cast<double>(c.cutoff_b)},
                {"grid_half_width", c.grid_half_width},
                {"grid_spacing", c.grid_spacing}};
}

inline Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

inline std::vector<std::string> sweep_columns(bool brute, bool fringe) {
    std::vector<std::string> cols{"R", "abs_alpha0", "phi", "nu_analytic", "nu_oracle"};
    if (brute) cols.push_back("nu_brute");
    if (fringe) cols.push_back("nu_fringe");
    for (const char* c : {"T", "mean_ratio", "var_out", "error"}) cols.push_back(c);
    return cols;
}

inline std::vector<Cell> sweep_cells(const SweepRow& row, bool brute, bool fringe) {
    std::vector<Cell> cells{row.R, row.abs_alpha0, row.phi, row.nu_analytic, row.nu_oracle};
    if (brute) cells.push_back(opt_cell(row.nu_brute));
    if (fringe) cells.push_back(opt_cell(row.nu_fringe));
    if (row.error.empty()) {
        cells.insert(cells.end(), {row.T, row.mean_ratio, row.var_out, std::string{}});
    } else {
        cells.insert(cells.end(), {Cell{}, Cell{}, Cell{}, row.error});
    }
    return cells;
}

inline int cmd_visibility(const RunConfig& c, Report& r) {
    SweepOptions opt;
    opt.base = c.params();
    opt.brute_force = c.brute_force;
    opt.fringe = c.fringe;
    opt.n_theta = c.n_theta;
    opt.threads = 1;
    const SweepRow row = sweep_row(c.R, c.abs_alpha0, c.phi, opt);
    r.columns = sweep_columns(c.brute_force, c.fringe);
    r.rows.push_back(sweep_cells(row, c.brute_force, c.fringe));
    if (row.error.empty()) {
        const ContrastReport cr = contrast_report(opt.base);
        r.meta.push_back({"var_in", cr.var_in});
        if (auto w = detail::component_overlap_warning(opt.base); !w.empty() && c.fringe) r.warnings.push_back(w);
    }
    return row.error.empty() ? 0 : 1;
}

inline int cmd_fringe(const RunConfig& c, Report& r) {
    const ExperimentParams p = c.params();
    const FringeScan scan = fringe_scan(p, c.n_theta);
    const FringeFit fit = extract_visibility(scan);
    r.columns = {"theta", "P"};
    for (std::size_t k = 0; k < scan.thetas.size(); ++k) r.rows.push_back({scan.thetas[k], scan.rates[k]});
    r.warnings = scan.warnings;
    r.meta = {{"fit_a", fit.a},
              {"fit_b", fit.b},
              {"fit_delta", fit.delta},
              {"nu", fit.visibility},
              {"nu_maxmin", fit.visibility_maxmin},
              {"nu_analytic", visibility_analytic(p)},
              {"fit_residual_rms", fit.residual_rms},
              {"period", fit.period}};
    return 0;
}

inline int cmd_qfunction(const RunConfig& c, Report& r) {
    const ExperimentParams p = c.params();
    p.validate();
    std::vector<BranchTerm> terms;
    if (c.state == "cat") {
        if (c.stage == "input") terms = initial_terms(p.cat());
        else if (c.stage == "output") terms = output_terms(p);
        else terms = post_selected_terms(p);
    } else {
        if (c.stage == "postselected") throw std::invalid_argument("qfunction: --stage postselected needs --state cat");
        BranchTerm t;
        t.weight = 1.0;
        t.ket_a = t.bra_a = c.state == "coherent" ? CoherentLabel(p.alpha0) : CoherentLabel{};
        if (c.stage == "output") t = propagate(t, p.beam_splitter());
        terms.push_back(t);
    }
    const QGrid g = covering_grid(terms, p.grid);
    const long n = std::lround(g.half_width / g.spacing);
    const double h = g.spacing;
    auto node = [&](Complex center, long i, long j) {
        return center + Complex(static_cast<double>(i) * h, static_cast<double>(j) * h);
    };

    double integral = 0.0;
    double edge = 0.0;
    double peak = 0.0;
    auto track = [&](double q, bool on_edge) {
        peak = std::max(peak, std::abs(q));
        if (on_edge) edge = std::max(edge, std::abs(q));
    };
    if (c.marginal == "none") {
        const double points = std::pow(2.0 * static_cast<double>(n) + 1.0, 4);
        if (points > 5e7) {
            throw std::invalid_argument("qfunction: full two-mode grid has " + format_number(points) +
                                        " points; use --marginal or a coarser grid");
        }
        r.columns = {"re_alpha", "im_alpha", "re_beta", "im_beta", "Q"};
        for (long i = -n; i <= n; ++i)
            for (long j = -n; j <= n; ++j)
                for (long k = -n; k <= n; ++k)
                    for (long l = -n; l <= n; ++l) {
                        const Complex a = node(g.center_a, i, j);
                        const Complex b = node(g.center_b, k, l);
                        const double q = q_full(terms, a, b);
                        integral += q * h * h * h * h;
                        track(q, std::abs(i) == n || std::abs(j) == n || std::abs(k) == n || std::abs(l) == n);
                        r.rows.push_back({a.real(), a.imag(), b.real(), b.imag(), q});
                    }
    } else {
        const bool mode_a = c.marginal == "A";
        const Complex center = mode_a ? g.center_a : g.center_b;
        r.columns = mode_a ? std::vector<std::string>{"re_alpha", "im_alpha", "Q_A"}
                           : std::vector<std::string>{"re_beta", "im_beta", "Q_B"};
        for (long i = -n; i <= n; ++i)
            for (long j = -n; j <= n; ++j) {
                const Complex z = node(center, i, j);
                const double q = mode_a ? q_marginal_a(terms, z) : q_marginal_b(terms, z);
                integral += q * h * h;
                track(q, std::abs(i) == n || std::abs(j) == n);
                r.rows.push_back({z.real(), z.imag(), q});
            }
    }
    r.meta = {{"state", c.state}, {"stage", c.stage}, {"marginal", c.marginal}, {"sampling", std::string("nodes")},
              {"normalization_integral", integral}};
    if (peak > 0.0 && edge / peak > p.tol.boundary) {
        r.warnings.push_back("Q grid under-covers the distribution (edge/peak = " + format_number(edge / peak) + ")");
    }
    return 0;
}

inline int cmd_sweep(const RunConfig& c, Report& r) {
    SweepOptions opt;
    opt.base = c.params();
    opt.brute_force = c.brute_force;
    opt.fringe = c.fringe;
    opt.n_theta = c.n_theta;
    opt.threads = c.threads;
    const auto rows = sweep({c.R_values, c.alpha0_values, c.phi_values}, opt);
    r.columns = sweep_columns(c.brute_force, c.fringe);
    int status = 0;
    for (const auto& row : rows) {
        r.rows.push_back(sweep_cells(row, c.brute_force, c.fringe));
        if (!row.error.empty()) status = 1;
    }
    return status;
}

}  // namespace detail

/// Runs an already-parsed configuration (angles in radians) and writes its report.
inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Report report;
    report.command = cfg.subcommand;
    detail::echo_params(report, cfg);
    int status = 0;
    try {
        if (!(cfg.R >= 0.0 && cfg.R < 1.0)) throw std::invalid_argument("--R must lie in [0, 1)");
        if (cfg.verbose) err << kToolName << ": running " << cfg.subcommand << '\n';
        if (cfg.subcommand == "visibility") status = detail::cmd_visibility(cfg, report);
        else if (cfg.subcommand == "fringe") status = detail::cmd_fringe(cfg, report);
        else if (cfg.subcommand == "qfunction") status = detail::cmd_qfunction(cfg, report);
        else status = detail::cmd_sweep(cfg, report);
    } catch (const std::exception& e) {
        err << kToolName << ": error: " << e.what() << '\n';
        return 2;
    }
    for (const auto& w : report.warnings) err << kToolName << ": warning: " << w << '\n';
    for (const auto& row : report.rows) {
        if (!row.empty() && std::holds_alternative<std::string>(row.back()) && !std::get<std::string>(row.back()).empty()) {
            err << kToolName << ": error: " << std::get<std::string>(row.back()) << '\n';
        }
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.output.empty()) {
        file.open(cfg.output, std::ios::binary);
        if (!file) {
            err << kToolName << ": error: cannot open " << cfg.output << '\n';
            return 2;
        }
        sink = &file;
    }
    if (cfg.format == "json") write_json(*sink, report);
    else write_csv(*sink, report);
    return status;
}

/// Parses argv, runs one subcommand and writes its report. Returns the exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig cfg;
    CLI::App app{"Cat-state interference visibility after a beam splitter", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    auto* vis = app.add_subcommand("visibility", "closed-form, oracle and optional Fock/fringe visibility");
    detail::add_common(vis, cfg);
    vis->add_flag("--brute-force", cfg.brute_force, "add the Fock-space brute-force visibility");
    vis->add_flag("--fringe", cfg.fringe, "add the fitted fringe visibility");
    vis->add_option("--n-theta", cfg.n_theta, "fringe samples")->capture_default_str()->envname("CATVIS_N_THETA");

    auto* qf = app.add_subcommand("qfunction", "Husimi Q-function on a phase-space grid");
    detail::add_common(qf, cfg);
    qf->add_option("--state", cfg.state)->check(CLI::IsMember({"vacuum", "coherent", "cat"}))->capture_default_str()->envname("CATVIS_STATE");
    qf->add_option("--stage", cfg.stage, "input, after the beam splitter, or after post-selection")
        ->check(CLI::IsMember({"input", "output", "postselected"}))
        ->capture_default_str()
        ->envname("CATVIS_STAGE");
    qf->add_option("--marginal", cfg.marginal, "integrate out the other mode, or none for the full grid")
        ->check(CLI::IsMember({"A", "B", "none"}))
        ->capture_default_str()
        ->envname("CATVIS_MARGINAL");

    auto* fr = app.add_subcommand("fringe", "post-selected fringe P(theta) and its fitted visibility");
    detail::add_common(fr, cfg);
    fr->add_option("--n-theta", cfg.n_theta, "theta samples over one period")->capture_default_str()->envname("CATVIS_N_THETA");

    auto* sw = app.add_subcommand("sweep", "visibility table over R x |alpha0| x phi");
    detail::add_common(sw, cfg);
    sw->add_option("--R-values", cfg.R_values)->delimiter(',')->capture_default_str()->envname("CATVIS_R_VALUES");
    sw->add_option("--alpha0-values", cfg.alpha0_values)->delimiter(',')->capture_default_str()->envname("CATVIS_ALPHA0_VALUES");
    sw->add_option("--phi-values", cfg.phi_values)->delimiter(',')->capture_default_str()->envname("CATVIS_PHI_VALUES");
    sw->add_flag("--brute-force", cfg.brute_force, "add the Fock-space brute-force column");
    sw->add_flag("--fringe", cfg.fringe, "add the fitted fringe column");
    sw->add_option("--n-theta", cfg.n_theta)->capture_default_str()->envname("CATVIS_N_THETA");
    sw->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->envname("CATVIS_THREADS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    cfg.normalize_angles([sub](const char* flag) {
        const auto* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    });
    return execute(cfg, out, err);
}

}  // namespace catvis
