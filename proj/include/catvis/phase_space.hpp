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

// Two-mode Husimi Q-function of coherent-superposition states.
//
// A pure superposition of coherent products has a density operator that splits
// into outer products w |a_k>|b_k><a_b|<b_b|. Every such term has the Q-function
//
//     Q(alpha', beta') = w/pi^2 <alpha'|a_k><beta'|b_k> conj(<alpha'|a_b><beta'|b_b>)
//
// which is a product of one factor per mode; the phase-space integrals below use
// that to evaluate the four-dimensional Riemann sum as a product of two planar sums.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "catvis/fock.hpp"
#include "catvis/operators.hpp"
#include "catvis/params.hpp"

namespace catvis {

/// Which cat component sits on the ket and bra side: +1 for e^{+i phi} alpha0, -1 for e^{-i phi} alpha0.
struct PhaseTag {
    int ket_sign = +1;
    int bra_sign = +1;

    friend bool operator==(const PhaseTag&, const PhaseTag&) = default;
};

/// weight * |ket_a>|ket_b> <bra_a|<bra_b| over coherent labels.
struct BranchTerm {
    Complex weight{1.0, 0.0};
    CoherentLabel ket_a, ket_b, bra_a, bra_b;
    PhaseTag tag{};
};

/// The four terms rho_{++}, rho_{+-}, rho_{-+}, rho_{--} of cat (x) vacuum.
inline std::vector<BranchTerm> initial_terms(const CatSpec& cat) {
    std::vector<BranchTerm> terms;
    const double w = cat.norm_const * cat.norm_const;
    for (int ks : {+1, -1}) {
        for (int bs : {+1, -1}) {
            BranchTerm t;
            t.weight = w;
            t.ket_a = ks > 0 ? cat.plus() : cat.minus();
            t.bra_a = bs > 0 ? cat.plus() : cat.minus();
            t.ket_b = t.bra_b = CoherentLabel{};
            t.tag = {ks, bs};
            terms.push_back(t);
        }
    }
    return terms;
}

/// U |a>|b> = |T a + i R b>|i R a + T b> on both sides of the term.
inline BranchTerm propagate(const BranchTerm& term, const BeamSplitter& bs) {
    auto map = [&](CoherentLabel a, CoherentLabel b) {
        return std::pair{CoherentLabel(bs.T() * a.alpha + kI * bs.R() * b.alpha),
                         CoherentLabel(kI * bs.R() * a.alpha + bs.T() * b.alpha)};
    };
    BranchTerm out = term;
    std::tie(out.ket_a, out.ket_b) = map(term.ket_a, term.ket_b);
    std::tie(out.bra_a, out.bra_b) = map(term.bra_a, term.bra_b);
    return out;
}

/// Keeps the interferometer branch that rotates each component back onto the
/// other: Phi_- on the + component, e^{i theta} Phi_+ on the - component.
/// Bra sides receive the adjoint, so (+,-) picks up e^{-i theta}.
inline BranchTerm post_select(const BranchTerm& term, double theta, double phi) {
    BranchTerm out = term;
    out.ket_a = phase_shift_label(term.ket_a, -term.tag.ket_sign * phi);
    out.bra_a = phase_shift_label(term.bra_a, -term.tag.bra_sign * phi);
    if (term.tag.ket_sign < 0) out.weight *= std::polar(1.0, theta);
    if (term.tag.bra_sign < 0) out.weight *= std::polar(1.0, -theta);
    return out;
}

/// Terms after the beam splitter, before the interferometer.
inline std::vector<BranchTerm> output_terms(const ExperimentParams& p) {
    std::vector<BranchTerm> terms;
    const BeamSplitter bs = p.beam_splitter();
    for (const auto& t : initial_terms(p.cat())) terms.push_back(propagate(t, bs));
    return terms;
}

/// Terms after the beam splitter and the post-selected interferometer branch.
inline std::vector<BranchTerm> post_selected_terms(const ExperimentParams& p) {
    std::vector<BranchTerm> terms;
    for (const auto& t : output_terms(p)) terms.push_back(post_select(t, p.theta, p.phi));
    return terms;
}

inline const BranchTerm& find_term(std::span<const BranchTerm> terms, PhaseTag tag) {
    for (const auto& t : terms) {
        if (t.tag == tag) return t;
    }
    throw std::invalid_argument("find_term: no term with the requested phase tag");
}

/// f_+ = <e^{i phi} alpha'|<beta'| U |e^{i phi} alpha0>|0>
///     = e^{-R^2|alpha0|^2/2} e^{i R conj(beta') alpha0 e^{i phi}} <e^{i phi} alpha'|e^{i phi} T alpha0> <beta'|0>
inline Complex f_plus(CoherentLabel alpha_p, CoherentLabel beta_p, const ExperimentParams& p) {
    if (!(p.R < 1.0)) throw std::invalid_argument("f_plus: R must be below 1");
    const Complex a0 = p.alpha0;
    const Complex rot = std::polar(1.0, p.phi);
    return std::exp(-0.5 * p.R * p.R * std::norm(a0)) * std::exp(kI * p.R * std::conj(beta_p.alpha) * a0 * rot) *
           coherent_overlap(rot * alpha_p.alpha, rot * p.T() * a0) * coherent_overlap(beta_p, CoherentLabel{});
}

/// f_+ with phi -> -phi.
inline Complex f_minus(CoherentLabel alpha_p, CoherentLabel beta_p, const ExperimentParams& p) {
    ExperimentParams q = p;
    q.phi = -p.phi;
    return f_plus(alpha_p, beta_p, q);
}

/// Q of one branch term at (alpha', beta').
inline Complex q_term(const BranchTerm& term, CoherentLabel alpha_p, CoherentLabel beta_p) {
    const Complex ket = coherent_overlap(alpha_p, term.ket_a) * coherent_overlap(beta_p, term.ket_b);
    const Complex bra = coherent_overlap(alpha_p, term.bra_a) * coherent_overlap(beta_p, term.bra_b);
    return term.weight / (kPi * kPi) * ket * std::conj(bra);
}

/// Closed form of the post-selected (+,-) term, obtained by multiplying out f_+ conj(f_-):
///
///   Q_{+-} = c_n^2 e^{-i theta}/pi^2 exp(-(|alpha0|^2 + |alpha'|^2 + |beta'|^2))
///            exp(T (conj(alpha') alpha0 + conj(alpha0) alpha'))
///            exp(i R e^{i phi} (conj(beta') alpha0 - conj(alpha0) beta'))
///
/// The e^{i phi} multiplies the whole bracket of the last exponent.
inline Complex q_plus_minus_closed_form(CoherentLabel alpha_p, CoherentLabel beta_p, const ExperimentParams& p) {
    const Complex a0 = p.alpha0;
    const Complex a = alpha_p.alpha;
    const Complex b = beta_p.alpha;
    const double cn = cat_norm_constant(a0, p.phi);
    const Complex expo = -(std::norm(a0) + std::norm(a) + std::norm(b)) +
                         p.T() * (std::conj(a) * a0 + std::conj(a0) * a) +
                         kI * p.R * std::polar(1.0, p.phi) * (std::conj(b) * a0 - std::conj(a0) * b);
    return cn * cn * std::polar(1.0, -p.theta) / (kPi * kPi) * std::exp(expo);
}

/// Q of a Hermitian term set. Negative values beyond `tolerance` mean the set is broken.
inline double q_full(std::span<const BranchTerm> terms, CoherentLabel alpha_p, CoherentLabel beta_p,
                     double tolerance = 1e-12) {
    Complex s{};
    for (const auto& t : terms) s += q_term(t, alpha_p, beta_p);
    if (s.real() < -tolerance) {
        throw Error("q_full: negative Q value " + std::to_string(s.real()) + "; term set is not Hermitian/positive");
    }
    return s.real();
}

/// Midpoint-rule grid over the alpha' and beta' planes.
struct QGrid {
    Complex center_a{};
    Complex center_b{};
    double half_width = 6.0;
    double spacing = 0.1;

    void validate() const {
        if (!(spacing > 0.0)) throw std::invalid_argument("QGrid: spacing must be positive");
        if (half_width < 6.0 * spacing) throw std::invalid_argument("QGrid: half-width must be at least 6 spacings");
    }

    std::size_t cells() const { return static_cast<std::size_t>(std::llround(2.0 * half_width / spacing)); }

    /// Coordinate of cell index i along one axis, relative to the plane center.
    double offset(std::size_t i) const { return -half_width + (static_cast<double>(i) + 0.5) * spacing; }

    Complex point_a(std::size_t i, std::size_t j) const { return center_a + Complex(offset(i), offset(j)); }
    Complex point_b(std::size_t i, std::size_t j) const { return center_b + Complex(offset(i), offset(j)); }
};

/// Grid centered where the term's integrand peaks: the ket/bra midpoint in each plane.
inline QGrid default_grid(const BranchTerm& term, const GridSpec& spec = {}) {
    QGrid g;
    g.center_a = 0.5 * (term.ket_a.alpha + term.bra_a.alpha);
    g.center_b = 0.5 * (term.ket_b.alpha + term.bra_b.alpha);
    g.half_width = spec.half_width;
    g.spacing = spec.spacing;
    return g;
}

/// One grid holding every term: centered on the label centroid and widened to reach all labels.
inline QGrid covering_grid(std::span<const BranchTerm> terms, const GridSpec& spec = {}) {
    if (terms.empty()) throw std::invalid_argument("covering_grid: empty term set");
    Complex ca{}, cb{};
    for (const auto& t : terms) {
        ca += t.ket_a.alpha + t.bra_a.alpha;
        cb += t.ket_b.alpha + t.bra_b.alpha;
    }
    ca /= 2.0 * static_cast<double>(terms.size());
    cb /= 2.0 * static_cast<double>(terms.size());
    double reach = 0.0;
    for (const auto& t : terms) {
        for (Complex z : {t.ket_a.alpha, t.bra_a.alpha}) reach = std::max({reach, std::abs(z.real() - ca.real()), std::abs(z.imag() - ca.imag())});
        for (Complex z : {t.ket_b.alpha, t.bra_b.alpha}) reach = std::max({reach, std::abs(z.real() - cb.real()), std::abs(z.imag() - cb.imag())});
    }
    QGrid g;
    g.center_a = ca;
    g.center_b = cb;
    g.spacing = spec.spacing;
    g.half_width = spec.spacing * std::ceil((spec.half_width + reach) / spec.spacing);
    return g;
}

/// Result of a phase-space integral plus its coverage diagnostic.
struct QIntegral {
    Complex value{};
    double boundary_ratio = 0.0;  ///< largest |integrand| on the grid edge over the peak
    bool covered = true;          ///< boundary_ratio below the requested threshold
};

namespace detail {

struct PlaneSum {
    Complex sum{};
    double peak = 0.0;
    double edge = 0.0;
};

// Sum over one plane of <z|ket> conj(<z|bra>) dA, tracking edge and peak magnitudes.
inline PlaneSum plane_sum(const QGrid& g, Complex center, CoherentLabel ket, CoherentLabel bra) {
    PlaneSum ps;
    const std::size_t n = g.cells();
    const double area = g.spacing * g.spacing;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex z = center + Complex(g.offset(i), g.offset(j));
            const Complex v = coherent_overlap(z, ket) * std::conj(coherent_overlap(z, bra));
            ps.sum += v * area;
            const double m = std::abs(v);
            ps.peak = std::max(ps.peak, m);
            if (i == 0 || j == 0 || i + 1 == n || j + 1 == n) ps.edge = std::max(ps.edge, m);
        }
    }
    return ps;
}

}  // namespace detail

/// Midpoint Riemann sum of Q_term over d^2alpha' d^2beta', with d^2z = dRe(z) dIm(z).
inline QIntegral integrate_q_term(const BranchTerm& term, const QGrid& grid, double boundary_threshold = 1e-10) {
    grid.validate();
    const auto pa = detail::plane_sum(grid, grid.center_a, term.ket_a, term.bra_a);
    const auto pb = detail::plane_sum(grid, grid.center_b, term.ket_b, term.bra_b);
    QIntegral r;
    r.value = term.weight / (kPi * kPi) * pa.sum * pb.sum;
    const double ra = pa.peak > 0.0 ? pa.edge / pa.peak : 0.0;
    const double rb = pb.peak > 0.0 ? pb.edge / pb.peak : 0.0;
    r.boundary_ratio = std::max(ra, rb);
    r.covered = r.boundary_ratio <= boundary_threshold;
    return r;
}

/// Integral of the full Q over one shared grid.
inline QIntegral integrate_q_full(std::span<const BranchTerm> terms, const QGrid& grid,
                                  double boundary_threshold = 1e-10) {
    QIntegral total;
    for (const auto& t : terms) {
        const auto r = integrate_q_term(t, grid, boundary_threshold);
        total.value += r.value;
        total.boundary_ratio = std::max(total.boundary_ratio, r.boundary_ratio);
    }
    total.covered = total.boundary_ratio <= boundary_threshold;
    return total;
}

/// Q integrated over beta': sum_terms w/pi <alpha'|a_k> conj(<alpha'|a_b>) <b_b|b_k>.
inline double q_marginal_a(std::span<const BranchTerm> terms, CoherentLabel alpha_p) {
    Complex s{};
    for (const auto& t : terms) {
        s += t.weight / kPi * coherent_overlap(alpha_p, t.ket_a) * std::conj(coherent_overlap(alpha_p, t.bra_a)) *
             coherent_overlap(t.bra_b, t.ket_b);
    }
    return s.real();
}

/// Q integrated over alpha'.
inline double q_marginal_b(std::span<const BranchTerm> terms, CoherentLabel beta_p) {
    Complex s{};
    for (const auto& t : terms) {
        s += t.weight / kPi * coherent_overlap(beta_p, t.ket_b) * std::conj(coherent_overlap(beta_p, t.bra_b)) *
             coherent_overlap(t.bra_a, t.ket_a);
    }
    return s.real();
}

/// nu = exp(-2 R^2 sin^2(phi) |alpha0|^2).
inline double visibility_analytic(double R, double abs_alpha0, double phi) {
    const double s = std::sin(phi);
    return std::exp(-2.0 * R * R * s * s * abs_alpha0 * abs_alpha0);
}

inline double visibility_analytic(const ExperimentParams& p) { return visibility_analytic(p.R, std::abs(p.alpha0), p.phi); }

/// |<e^{i phi} alpha0|e^{-i phi} alpha0>|; the fringe picture assumes this is negligible.
inline double cat_component_overlap(const ExperimentParams& p) {
    const CatSpec cat = p.cat();
    return std::abs(coherent_overlap(cat.plus(), cat.minus()));
}

}  // namespace catvis
