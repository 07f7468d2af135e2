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

#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "catvis/fock.hpp"
#include "catvis/operators.hpp"
#include "catvis/params.hpp"
#include "catvis/phase_space.hpp"

namespace catvis {

namespace detail {

// Raw moments <pi^k> of the vacuum quadrature, k = 0..4.
inline constexpr std::array<double, 5> kVacuumMoments{1.0, 0.0, 0.25, 0.0, 3.0 / 16.0};

inline constexpr std::array<std::array<double, 5>, 5> kBinomial{{
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
}};

}  // namespace detail

/// Propagates quadrature moments through x'_A = T x_A - R pi_B with mode B in vacuum.
///
/// x_A and pi_B are independent, so <x'^k> = sum_j C(k,j) T^j <x^j> (-R)^(k-j) <pi^(k-j)>_vac.
/// Third and fourth moments are carried only when the input has them.
inline QuadratureStats output_quadrature_stats(const QuadratureStats& in, const BeamSplitter& bs) {
    const double t = bs.T();
    const double r = bs.R();
    QuadratureStats out;
    out.mean_x = t * in.mean_x;
    out.var_x = t * t * in.var_x + r * r * 0.25;
    if (in.raw3 && in.raw4) {
        const double m2 = in.var_x + in.mean_x * in.mean_x;
        const std::array<double, 5> x{1.0, in.mean_x, m2, *in.raw3, *in.raw4};
        auto raw = [&](int k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) {
                s += detail::kBinomial[k][j] * std::pow(t, j) * x[j] * std::pow(-r, k - j) *
                     detail::kVacuumMoments[k - j];
            }
            return s;
        };
        out.raw3 = raw(3);
        out.raw4 = raw(4);
    }
    return out;
}

/// Quadrature moments of a cat state from coherent-label algebra.
///
/// <u|x^k|v> = M_k(z) <u|v> with z = (conj(u) + v)/2, where M_k are the moments of a
/// Gaussian with mean z and variance 1/4.
inline QuadratureStats cat_quadrature_stats(const CatSpec& cat) {
    const std::array<CoherentLabel, 2> comps{cat.plus(), cat.minus()};
    std::array<Complex, 5> raw{};
    for (const auto& u : comps) {
        for (const auto& v : comps) {
            const Complex z = 0.5 * (std::conj(u.alpha) + v.alpha);
            const Complex ov = coherent_overlap(u, v);
            const Complex z2 = z * z;
            raw[0] += ov;
            raw[1] += z * ov;
            raw[2] += (z2 + 0.25) * ov;
            raw[3] += (z2 * z + 0.75 * z) * ov;
            raw[4] += (z2 * z2 + 1.5 * z2 + 3.0 / 16.0) * ov;
        }
    }
    const double n = raw[0].real();
    QuadratureStats s;
    s.mean_x = raw[1].real() / n;
    s.var_x = raw[2].real() / n - s.mean_x * s.mean_x;
    s.raw3 = raw[3].real() / n;
    s.raw4 = raw[4].real() / n;
    return s;
}

/// Side-by-side Heisenberg-picture and Schrodinger-picture figures of merit.
struct ContrastReport {
    double T = 1.0;
    double mean_ratio = 1.0;  ///< <x'_A>/<x_A>
    double var_in = 0.25;
    double var_out = 0.25;
    double visibility = 1.0;
};

inline ContrastReport contrast_report(const ExperimentParams& p) {
    const BeamSplitter bs = p.beam_splitter();
    const QuadratureStats in = cat_quadrature_stats(p.cat());
    const QuadratureStats out = output_quadrature_stats(in, bs);
    ContrastReport r;
    r.T = bs.T();
    r.mean_ratio = bs.T();
    r.var_in = in.var_x;
    r.var_out = out.var_x;
    r.visibility = visibility_analytic(p);
    return r;
}

}  // namespace catvis
