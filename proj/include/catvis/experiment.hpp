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

// Fringe scans, visibility extraction and the independent visibility oracles.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "catvis/fock.hpp"
#include "catvis/heisenberg.hpp"
#include "catvis/operators.hpp"
#include "catvis/params.hpp"
#include "catvis/phase_space.hpp"

namespace catvis {

/// Post-selected relative counting rate against the single-photon phase.
struct FringeScan {
    std::vector<double> thetas;
    std::vector<double> rates;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string component_overlap_warning(const ExperimentParams& p) {
    const double ov = cat_component_overlap(p);
    if (ov < p.tol.component_overlap) return {};
    return "cat components overlap (|<+|->| = " + std::to_string(ov) +
           "); the post-selected fringe is only an approximation to the measured one";
}

}  // namespace detail

/// Post-selected rate at one theta: sum of the four kept Q-term integrals, each on its own default grid.
inline QIntegral fringe_rate(const ExperimentParams& p, double theta) {
    QIntegral total;
    for (const auto& t : output_terms(p)) {
        const BranchTerm sel = post_select(t, theta, p.phi);
        const QIntegral r = integrate_q_term(sel, default_grid(sel, p.grid), p.tol.boundary);
        total.value += r.value;
        total.boundary_ratio = std::max(total.boundary_ratio, r.boundary_ratio);
    }
    total.covered = total.boundary_ratio <= p.tol.boundary;
    return total;
}

/// P(theta) on n_theta equally spaced phases in [0, 2 pi).
inline FringeScan fringe_scan(const ExperimentParams& p, std::size_t n_theta) {
    p.validate();
    if (n_theta < 8) throw std::invalid_argument("fringe_scan: need at least 8 theta samples");
    FringeScan scan;
    if (auto w = detail::component_overlap_warning(p); !w.empty()) scan.warnings.push_back(w);

    double worst_boundary = 0.0;
    for (std::size_t k = 0; k < n_theta; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_theta);
        const QIntegral r = fringe_rate(p, theta);
        worst_boundary = std::max(worst_boundary, r.boundary_ratio);
        scan.thetas.push_back(theta);
        scan.rates.push_back(std::max(0.0, r.value.real()));
    }
    if (worst_boundary > p.tol.boundary) {
        scan.warnings.push_back("Q grid under-covers the integrand support (edge/peak = " +
                                std::to_string(worst_boundary) + ")");
    }
    return scan;
}

/// Least-squares fit of a + b cos(theta - delta).
struct FringeFit {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;
    double visibility = 0.0;         ///< b / a
    double visibility_maxmin = 0.0;  ///< (max - min)/(max + min) of the raw samples
    double residual_rms = 0.0;
    double period = 2.0 * kPi;       ///< 2 pi / (dominant harmonic of the samples)
};

inline FringeFit extract_visibility(const FringeScan& scan) {
    const std::size_t n = scan.thetas.size();
    if (n != scan.rates.size()) throw std::invalid_argument("extract_visibility: length mismatch");
    if (n < 3) throw std::invalid_argument("extract_visibility: need at least 3 samples");

    // Normal equations for rate = a + c cos(theta) + s sin(theta).
    double m[3][3] = {};
    double rhs[3] = {};
    for (std::size_t k = 0; k < n; ++k) {
        const double f[3] = {1.0, std::cos(scan.thetas[k]), std::sin(scan.thetas[k])};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += f[i] * scan.rates[k];
            for (int j = 0; j < 3; ++j) m[i][j] += f[i] * f[j];
        }
    }
    // Gaussian elimination with partial pivoting.
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[perm[r]][col]) > std::abs(m[perm[piv]][col])) piv = r;
        }
        std::swap(perm[col], perm[piv]);
        const double d = m[perm[col]][col];
        if (std::abs(d) < 1e-300) throw std::invalid_argument("extract_visibility: scan does not cover a period");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[perm[r]][col] / d;
            for (int j = col; j < 3; ++j) m[perm[r]][j] -= f * m[perm[col]][j];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    double x[3];
    for (int i = 2; i >= 0; --i) {
        double s = rhs[perm[i]];
        for (int j = i + 1; j < 3; ++j) s -= m[perm[i]][j] * x[j];
        x[i] = s / m[perm[i]][i];
    }

    FringeFit fit;
    fit.a = x[0];
    if (!(fit.a > 0.0)) throw std::invalid_argument("extract_visibility: fitted mean rate is not positive");
    fit.b = std::hypot(x[1], x[2]);
    fit.delta = fit.b > 0.0 ? std::atan2(x[2], x[1]) : 0.0;
    fit.visibility = fit.b / fit.a;

    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double model = fit.a + fit.b * std::cos(scan.thetas[k] - fit.delta);
        ss += (scan.rates[k] - model) * (scan.rates[k] - model);
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));

    const auto [lo, hi] = std::minmax_element(scan.rates.begin(), scan.rates.end());
    fit.visibility_maxmin = (*hi + *lo) > 0.0 ? (*hi - *lo) / (*hi + *lo) : 0.0;

    // Dominant non-constant harmonic over the sampled phases.
    double best = 0.0;
    int best_k = 1;
    for (int h = 1; h <= static_cast<int>(n / 2); ++h) {
        Complex s{};
        for (std::size_t k = 0; k < n; ++k) s += scan.rates[k] * std::polar(1.0, -h * scan.thetas[k]);
        if (std::abs(s) > best * (1.0 + 1e-9)) {
            best = std::abs(s);
            best_k = h;
        }
    }
    fit.period = 2.0 * kPi / best_k;
    return fit;
}

/// |<i R e^{-i phi} alpha0 | i R e^{i phi} alpha0>|: overlap of the which-path records left in mode B.
inline double environment_overlap_oracle(const ExperimentParams& p) {
    const BeamSplitter bs = p.beam_splitter();
    const CatSpec cat = p.cat();
    const CoherentLabel env_plus = bs_coherent_map(bs, cat.plus()).second;
    const CoherentLabel env_minus = bs_coherent_map(bs, cat.minus()).second;
    return std::abs(coherent_overlap(env_minus, env_plus));
}

inline constexpr std::size_t kMaxBruteForceCutoff = 2048;

/// Visibility from explicit Fock-space states, with no coherent-state shortcuts.
///
/// Each cat component is expanded in number states, sent through the factored
/// beam splitter, and the cross term Tr_B |psi_+><psi_-| is formed. The kept
/// interferometer branches act as Phi_- on the ket and Phi_+ on the bra; the
/// visibility is the trace of the result normalized by the component norms.
inline double fock_brute_force_visibility(const ExperimentParams& p) {
    p.validate();
    const std::size_t ca = p.resolved_cutoff_a();
    const std::size_t cb = p.resolved_cutoff_b();
    if (ca > kMaxBruteForceCutoff || cb > kMaxBruteForceCutoff) {
        throw TruncationError("fock_brute_force_visibility: required cutoff exceeds " +
                                  std::to_string(kMaxBruteForceCutoff),
                              std::max(ca, cb));
    }
    const BeamSplitter bs = p.beam_splitter();
    const CatSpec cat = p.cat();
    const ModeState vac = ModeState::vacuum(cb);
    const TwoModeState psi_plus = bs_fock_apply(bs, TwoModeState::product(coherent_fock(cat.plus(), ca, p.tol.tail), vac),
                                                p.tol.leakage);
    const TwoModeState psi_minus = bs_fock_apply(
        bs, TwoModeState::product(coherent_fock(cat.minus(), ca, p.tol.tail), vac), p.tol.leakage);

    const ModeOperator cross = partial_trace_b(psi_plus, psi_minus);
    Complex interference{};
    for (std::size_t n = 0; n < ca; ++n) {
        // Phi_- on the ket, Phi_+^dagger = Phi_- on the bra side.
        interference += std::polar(1.0, -2.0 * p.phi * static_cast<double>(n)) * cross(n, n);
    }
    const double norms = std::sqrt(psi_plus.norm2() * psi_minus.norm2());
    return std::abs(interference) / norms;
}

/// Visibility from the (+,-) post-selected Q-term integral, |int Q_{+-}| / c_n^2.
inline QIntegral q_integral_visibility(const ExperimentParams& p) {
    p.validate();
    const auto terms = post_selected_terms(p);
    const BranchTerm& t = find_term(terms, PhaseTag{+1, -1});
    QIntegral r = integrate_q_term(t, default_grid(t, p.grid), p.tol.boundary);
    const double cn = p.cat().norm_const;
    r.value /= cn * cn;
    return r;
}

/// Values swept over: Cartesian product in R-major, then |alpha0|, then phi order.
struct SweepRanges {
    std::vector<double> R;
    std::vector<double> abs_alpha0;
    std::vector<double> phi;
};

struct SweepOptions {
    ExperimentParams base{};  ///< template for phase of alpha0, grid and tolerances
    bool brute_force = false;
    bool fringe = false;
    std::size_t n_theta = 16;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct SweepRow {
    double R = 0.0;
    double abs_alpha0 = 0.0;
    double phi = 0.0;
    double nu_analytic = 0.0;
    double nu_oracle = 0.0;
    std::optional<double> nu_brute;
    std::optional<double> nu_fringe;
    double T = 1.0;
    double mean_ratio = 1.0;
    double var_out = 0.25;
    std::string error;
};

inline SweepRow sweep_row(double R, double abs_alpha0, double phi, const SweepOptions& opt) {
    SweepRow row;
    row.R = R;
    row.abs_alpha0 = abs_alpha0;
    row.phi = phi;
    try {
        ExperimentParams p = opt.base;
        p.R = R;
        p.phi = phi;
        const double phase = std::abs(opt.base.alpha0) > 0.0 ? std::arg(opt.base.alpha0) : kPi / 2.0;
        p.alpha0 = std::polar(abs_alpha0, phase);
        p.validate();
        row.nu_analytic = visibility_analytic(p);
        row.nu_oracle = environment_overlap_oracle(p);
        const ContrastReport c = contrast_report(p);
        row.T = c.T;
        row.mean_ratio = c.mean_ratio;
        row.var_out = c.var_out;
        if (opt.brute_force) row.nu_brute = fock_brute_force_visibility(p);
        if (opt.fringe) row.nu_fringe = extract_visibility(fringe_scan(p, opt.n_theta)).visibility;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

/// Rows are computed concurrently and returned in deterministic lexicographic order.
inline std::vector<SweepRow> sweep(const SweepRanges& ranges, const SweepOptions& opt = {}) {
    struct Key {
        double R, a, phi;
    };
    std::vector<Key> keys;
    for (double r : ranges.R) {
        for (double a : ranges.abs_alpha0) {
            for (double ph : ranges.phi) keys.push_back({r, a, ph});
        }
    }
    std::vector<SweepRow> rows(keys.size());
    unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, keys.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < keys.size(); i = next++) {
            rows[i] = sweep_row(keys[i].R, keys[i].a, keys[i].phi, opt);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace catvis
