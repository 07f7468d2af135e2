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

// Test-only reference computations. Each one takes a route that does not go
// through the library function it is used to check.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "catvis/catvis.hpp"

namespace oracle {

using catvis::Complex;

/// sum_{n >= cutoff} e^{-m} m^n / n!, evaluated term by term in long double.
inline long double poisson_tail(long double mean, std::size_t cutoff, std::size_t terms = 2000) {
    long double s = 0.0L;
    for (std::size_t n = cutoff; n < cutoff + terms; ++n) {
        s += std::exp(-mean + n * std::log(mean) - std::lgamma(static_cast<long double>(n) + 1.0L));
    }
    return s;
}

/// e^{-|a|^2/2} a^n / sqrt(n!) straight from the series, n < 170.
inline Complex coherent_amplitude(Complex a, std::size_t n) {
    return std::exp(-0.5 * std::norm(a)) * std::pow(a, static_cast<double>(n)) /
           std::sqrt(std::tgamma(static_cast<double>(n) + 1.0));
}

/// Beam splitter through the mode transformation a^dag -> T a^dag + i R b^dag,
/// b^dag -> i R a^dag + T b^dag acting on (a^dag)^na (b^dag)^nb / sqrt(na! nb!) |0,0>.
inline std::vector<Complex> bs_by_mode_transform(double R, const catvis::TwoModeState& in) {
    const double T = std::sqrt(1.0 - R * R);
    const std::size_t ca = in.cutoff_a(), cb = in.cutoff_b();
    std::vector<Complex> out(ca * cb);
    auto fact = [](std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); };
    auto binom = [&](std::size_t n, std::size_t k) { return fact(n) / (fact(k) * fact(n - k)); };
    for (std::size_t na = 0; na < ca; ++na) {
        for (std::size_t nb = 0; nb < cb; ++nb) {
            const Complex amp = in(na, nb);
            if (amp == Complex{}) continue;
            // (T a + iR b)^na = sum_j C(na,j) T^(na-j) (iR)^j a^(na-j) b^j
            // (iR a + T b)^nb = sum_k C(nb,k) (iR)^(nb-k) T^k a^(nb-k) b^k
            for (std::size_t j = 0; j <= na; ++j) {
                for (std::size_t k = 0; k <= nb; ++k) {
                    const std::size_t p = na - j + nb - k;
                    const std::size_t q = j + k;
                    if (p >= ca || q >= cb) continue;
                    const Complex c = binom(na, j) * std::pow(T, double(na - j)) * std::pow(Complex(0, R), double(j)) *
                                      binom(nb, k) * std::pow(Complex(0, R), double(nb - k)) * std::pow(T, double(k));
                    out[p * cb + q] += amp * c * std::sqrt(fact(p) * fact(q) / (fact(na) * fact(nb)));
                }
            }
        }
    }
    return out;
}

/// Dense x = (a + a^dag)/2 on `dim` levels.
inline std::vector<double> x_matrix(std::size_t dim) {
    std::vector<double> x(dim * dim);
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        x[n * dim + n + 1] = 0.5 * std::sqrt(double(n + 1));
        x[(n + 1) * dim + n] = 0.5 * std::sqrt(double(n + 1));
    }
    return x;
}

/// <psi|x^k|psi>/<psi|psi> by repeated dense matrix-vector products on a padded space.
inline double quadrature_raw_moment(const catvis::ModeState& s, int k) {
    const std::size_t dim = s.cutoff() + k + 1;
    const auto x = x_matrix(dim);
    std::vector<Complex> v(dim);
    for (std::size_t n = 0; n < s.cutoff(); ++n) v[n] = s[n];
    std::vector<Complex> w = v;
    for (int p = 0; p < k; ++p) {
        std::vector<Complex> t(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) t[i] += x[i * dim + j] * w[j];
        w = t;
    }
    Complex num{}, den{};
    for (std::size_t n = 0; n < dim; ++n) {
        num += std::conj(v[n]) * w[n];
        den += std::conj(v[n]) * v[n];
    }
    return num.real() / den.real();
}

/// Plain four-dimensional midpoint sum of q_term, one point at a time.
inline Complex q_term_sum_4d(const catvis::BranchTerm& t, const catvis::QGrid& g) {
    const std::size_t n = g.cells();
    const double h4 = std::pow(g.spacing, 4);
    Complex s{};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) s += catvis::q_term(t, g.point_a(i, j), g.point_b(k, l)) * h4;
    return s;
}

/// Random normalized state whose amplitudes live on the lowest `support` levels.
inline catvis::ModeState random_state(std::mt19937_64& rng, std::size_t cutoff, std::size_t support) {
    std::normal_distribution<double> g;
    std::vector<Complex> a(cutoff);
    double s = 0.0;
    for (std::size_t n = 0; n < std::min(support, cutoff); ++n) {
        a[n] = Complex(g(rng), g(rng));
        s += std::norm(a[n]);
    }
    for (auto& x : a) x /= std::sqrt(s) * (1.0 + 1e-15);
    return catvis::ModeState(std::move(a));
}

inline catvis::TwoModeState random_two_mode(std::mt19937_64& rng, std::size_t ca, std::size_t cb, std::size_t sa,
                                            std::size_t sb) {
    std::normal_distribution<double> g;
    std::vector<Complex> a(ca * cb);
    double s = 0.0;
    for (std::size_t i = 0; i < sa; ++i)
        for (std::size_t j = 0; j < sb; ++j) {
            a[i * cb + j] = Complex(g(rng), g(rng));
            s += std::norm(a[i * cb + j]);
        }
    for (auto& x : a) x /= std::sqrt(s) * (1.0 + 1e-15);
    return catvis::TwoModeState(ca, cb, std::move(a));
}

}  // namespace oracle
