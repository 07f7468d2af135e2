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

#include <gtest/gtest.h>

#include <random>

#include "catvis/heisenberg.hpp"
#include "oracles.hpp"

using namespace catvis;

namespace {

ExperimentParams make(double R, Complex alpha0, double phi) {
    ExperimentParams p;
    p.R = R;
    p.alpha0 = alpha0;
    p.phi = phi;
    return p;
}

QuadratureStats reduced_output_moments(const ModeState& a, double R) {
    const std::size_t cb = a.cutoff();
    const TwoModeState out = bs_fock_apply(BeamSplitter(R), TwoModeState::product(a, ModeState::vacuum(cb)));
    return quadrature_moments(partial_trace_b(out));
}

}  // namespace

TEST(OutputQuadratureStats, Examples) {
    QuadratureStats in;
    in.mean_x = 0.7;
    in.var_x = 1.3;
    const auto same = output_quadrature_stats(in, BeamSplitter(0.0));
    EXPECT_EQ(same.mean_x, 0.7);
    EXPECT_EQ(same.var_x, 1.3);

    for (double R : {0.1, 0.5, 0.9}) {
        const auto v = output_quadrature_stats(QuadratureStats{}, BeamSplitter(R));
        EXPECT_NEAR(v.mean_x, 0.0, 1e-15);
        EXPECT_NEAR(v.var_x, 0.25, 1e-15);
    }

    const auto coh = quadrature_moments(coherent_fock(2.0, 40));
    const BeamSplitter bs(0.6, 0.8);
    const auto out = output_quadrature_stats(coh, bs);
    EXPECT_NEAR(out.mean_x, 1.6, 1e-10);
    EXPECT_NEAR(out.var_x, 0.25, 1e-10);
    const auto label_track = quadrature_moments(coherent_fock(bs_coherent_map(bs, 2.0).first, 40));
    EXPECT_NEAR(out.mean_x, label_track.mean_x, 1e-10);
    EXPECT_NEAR(out.var_x, label_track.var_x, 1e-10);
}

TEST(OutputQuadratureStats, AgreesWithFockTrackReducedState) {
    std::mt19937_64 rng(19);
    std::vector<ModeState> inputs{coherent_fock(Complex(1.5, -0.8), 40), cat_fock(CatSpec(Complex(0.0, 2.0), kPi / 4.0), 40),
                                  cat_fock(CatSpec(Complex(1.0, 1.0), kPi / 2.0), 40), oracle::random_state(rng, 40, 6)};
    for (const auto& a : inputs) {
        for (double R : {0.05, 0.3, 0.6}) {
            const auto predicted = output_quadrature_stats(quadrature_moments(a), BeamSplitter(R));
            const auto measured = reduced_output_moments(a, R);
            EXPECT_NEAR(predicted.mean_x, measured.mean_x, 1e-8);
            EXPECT_NEAR(predicted.var_x, measured.var_x, 1e-8);
            EXPECT_NEAR(*predicted.raw3, *measured.raw3, 1e-8);
            EXPECT_NEAR(*predicted.raw4, *measured.raw4, 1e-8);
        }
    }
}

TEST(CatQuadratureStats, MatchesFockTrack) {
    for (const auto& spec : {CatSpec(Complex(0.0, 2.0), kPi / 4.0), CatSpec(Complex(1.2, 0.5), 1.1), CatSpec(0.3, 0.2)}) {
        const auto label = cat_quadrature_stats(spec);
        const auto fock = quadrature_moments(cat_fock(spec, 40));
        EXPECT_NEAR(label.mean_x, fock.mean_x, 1e-10);
        EXPECT_NEAR(label.var_x, fock.var_x, 1e-10);
        EXPECT_NEAR(*label.raw3, *fock.raw3, 1e-10);
        EXPECT_NEAR(*label.raw4, *fock.raw4, 1e-10);
    }
}

TEST(ContrastReport, LargeCatSmallReflectivity) {
    const auto r = contrast_report(make(0.1, Complex(0.0, 20.0), kPi / 2.0));
    EXPECT_NEAR(r.mean_ratio, 0.99498743710662, 1e-12);
    EXPECT_NEAR(r.T, 0.99498743710662, 1e-12);
    EXPECT_NEAR(r.visibility, 3.3546262790251185e-4, 1e-16);
    EXPECT_NEAR(r.var_out, 0.99 * r.var_in + 0.01 * 0.25, 1e-9);
}

TEST(ContrastReport, NoReflection) {
    const auto r = contrast_report(make(0.0, Complex(0.0, 3.0), 0.8));
    EXPECT_EQ(r.mean_ratio, 1.0);
    EXPECT_EQ(r.visibility, 1.0);
    EXPECT_NEAR(r.var_out, r.var_in, 1e-15);
}

TEST(ContrastReport, ModerateCase) {
    const auto p = make(0.5, Complex(0.0, 1.0), kPi / 6.0);
    const auto r = contrast_report(p);
    EXPECT_NEAR(r.visibility, 0.8824969025845955, 1e-15);
    EXPECT_NEAR(r.mean_ratio, 0.8660254037844386, 1e-15);
    // Fock-track check of the variance at cutoff 30.
    const auto measured = reduced_output_moments(cat_fock(p.cat(), 30), 0.5);
    EXPECT_NEAR(r.var_out, measured.var_x, 1e-10);
}

TEST(ContrastReport, LogVisibilityIsLinearInRSquared) {
    const double a = 2.5, phi = 1.1;
    std::vector<double> x, y;
    for (int k = 1; k <= 12; ++k) {
        const double R = 0.07 * k;
        x.push_back(R * R);
        y.push_back(-std::log(contrast_report(make(R, Complex(0.0, a), phi)).visibility));
    }
    // least-squares line through the points
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], slope * x[i] + icpt, 1e-10 * std::abs(y[i]));
    EXPECT_NEAR(slope, 2.0 * std::pow(std::sin(phi), 2) * a * a, 1e-10 * slope);
}

TEST(ContrastReport, QuadratureChangeIsSecondOrderInR) {
    const auto p = make(0.0, Complex(0.0, 2.0), kPi / 3.0);
    const double var0 = contrast_report(p).var_in;
    for (double R : {1e-2, 1e-3}) {
        auto q = p;
        q.R = R;
        const auto r = contrast_report(q);
        EXPECT_NEAR(1.0 - r.mean_ratio, R * R / 2.0, R * R * R * R);
        EXPECT_NEAR(std::abs(r.var_out - var0), R * R * std::abs(var0 - 0.25), 1e-12);
    }
}
