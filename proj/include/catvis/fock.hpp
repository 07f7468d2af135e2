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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catvis {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a photon-number cutoff cannot hold a state to the requested tolerance.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::size_t recommended_cutoff = 0)
        : Error(what), recommended_cutoff_(recommended_cutoff) {}

    /// Smallest cutoff that would satisfy the tolerance, 0 when unknown.
    std::size_t recommended_cutoff() const noexcept { return recommended_cutoff_; }

private:
    std::size_t recommended_cutoff_;
};

/// Complex amplitude labelling an untruncated coherent state |alpha>.
struct CoherentLabel {
    Complex alpha{};

    constexpr CoherentLabel() = default;
    constexpr CoherentLabel(Complex a) : alpha(a) {}  // NOLINT: implicit by intent
    constexpr CoherentLabel(double re, double im = 0.0) : alpha(re, im) {}

    friend bool operator==(const CoherentLabel&, const CoherentLabel&) = default;
};

inline constexpr double kNormSlack = 1e-12;
inline constexpr double kDefaultTailTolerance = 1e-12;

/// Truncated single-mode state: amplitudes over photon numbers 0..cutoff-1.
///
/// Sub-normalized states are allowed (post-selected branches); states whose
/// squared norm exceeds one are rejected.
class ModeState {
public:
    explicit ModeState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.empty()) {
            throw std::invalid_argument("ModeState: cutoff must be at least 1");
        }
        if (norm2() > 1.0 + kNormSlack) {
            throw std::invalid_argument("ModeState: squared norm exceeds 1");
        }
    }

    static ModeState vacuum(std::size_t cutoff) {
        std::vector<Complex> a(cutoff);
        if (!a.empty()) a[0] = 1.0;
        return ModeState(std::move(a));
    }

    static ModeState number(std::size_t n, std::size_t cutoff) {
        if (n >= cutoff) throw std::invalid_argument("ModeState::number: n must be below cutoff");
        std::vector<Complex> a(cutoff);
        a[n] = 1.0;
        return ModeState(std::move(a));
    }

    std::size_t cutoff() const noexcept { return amps_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    const Complex& operator[](std::size_t n) const { return amps_[n]; }

    double norm2() const noexcept {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    /// Squared amplitude mass in the top 10% of the index range (at least one level).
    double top_band_mass() const noexcept {
        const std::size_t band = std::max<std::size_t>(1, amps_.size() / 10);
        double s = 0.0;
        for (std::size_t n = amps_.size() - band; n < amps_.size(); ++n) s += std::norm(amps_[n]);
        return s;
    }

private:
    std::vector<Complex> amps_;
};

/// <u|v> on the common truncated support.
inline Complex fock_inner(const ModeState& u, const ModeState& v) {
    Complex s{};
    const std::size_t n = std::min(u.cutoff(), v.cutoff());
    for (std::size_t k = 0; k < n; ++k) s += std::conj(u[k]) * v[k];
    return s;
}

namespace detail {

// Poisson tail P(N >= cutoff) for mean |alpha|^2, summed upward from the cutoff.
inline double poisson_tail(double mean, std::size_t cutoff) {
    if (mean == 0.0) return cutoff == 0 ? 1.0 : 0.0;
    // log of the first term e^{-mean} mean^c / c!
    const double c = static_cast<double>(cutoff);
    double term = std::exp(-mean + c * std::log(mean) - std::lgamma(c + 1.0));
    double sum = 0.0;
    for (std::size_t k = cutoff; term > 0.0; ++k) {
        sum += term;
        term *= mean / static_cast<double>(k + 1);
        if (k > cutoff + 100000 || (static_cast<double>(k) > mean && term < 1e-30 * sum)) break;
    }
    return sum;
}

inline std::size_t top_band(std::size_t cutoff) { return std::max<std::size_t>(1, cutoff / 10); }

// Smallest cutoff whose top 10% band and everything above it hold less than the tolerance.
inline std::size_t cutoff_for_tail(double mean, double tail_tolerance) {
    std::size_t c = 1;
    while (poisson_tail(mean, c - top_band(c)) >= tail_tolerance) ++c;
    return c;
}

}  // namespace detail

/// ceil(|alpha|^2 + 8|alpha| + 10), raised where needed so the top 10% of the
/// levels carries less than the default tail tolerance.
inline std::size_t default_cutoff(double abs_alpha) {
    const auto formula = static_cast<std::size_t>(std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha + 10.0));
    return std::max(formula, detail::cutoff_for_tail(abs_alpha * abs_alpha, kDefaultTailTolerance));
}

/// Number-state expansion of |alpha> truncated to `cutoff` levels.
///
/// Amplitudes follow the recurrence a[n] = a[n-1] * alpha / sqrt(n), so no
/// factorial is ever formed. When `tail_tolerance` is positive, the Poisson mass
/// in the top 10% of the levels and beyond must stay below it.
inline ModeState coherent_fock(CoherentLabel label, std::size_t cutoff, double tail_tolerance = 0.0) {
    if (cutoff < 1) throw std::invalid_argument("coherent_fock: cutoff must be at least 1");
    const Complex alpha = label.alpha;
    const double mean = std::norm(alpha);
    if (tail_tolerance > 0.0 && detail::poisson_tail(mean, cutoff - detail::top_band(cutoff)) >= tail_tolerance) {
        const std::size_t need = detail::cutoff_for_tail(mean, tail_tolerance);
        throw TruncationError("coherent_fock: cutoff " + std::to_string(cutoff) +
                                  " leaves tail mass above tolerance; need at least " + std::to_string(need),
                              need);
    }
    std::vector<Complex> a(cutoff);
    a[0] = std::exp(-0.5 * mean);
    for (std::size_t n = 1; n < cutoff; ++n) a[n] = a[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return ModeState(std::move(a));
}

/// <alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta).
inline Complex coherent_overlap(CoherentLabel alpha, CoherentLabel beta) {
    const Complex a = alpha.alpha;
    const Complex b = beta.alpha;
    return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

/// c_n in c_n(|e^{i phi} alpha0> + |e^{-i phi} alpha0>).
inline double cat_norm_constant(Complex alpha0, double phi) {
    const Complex plus = std::polar(1.0, phi) * alpha0;
    const Complex minus = std::polar(1.0, -phi) * alpha0;
    return 1.0 / std::sqrt(2.0 + 2.0 * coherent_overlap(plus, minus).real());
}

/// Even superposition of the coherent states e^{+i phi} alpha0 and e^{-i phi} alpha0.
struct CatSpec {
    Complex alpha0{};
    double phi = 0.0;
    double norm_const = 0.5;

    CatSpec() = default;
    CatSpec(Complex a0, double ph) : alpha0(a0), phi(ph), norm_const(cat_norm_constant(a0, ph)) {}

    CoherentLabel plus() const { return std::polar(1.0, phi) * alpha0; }
    CoherentLabel minus() const { return std::polar(1.0, -phi) * alpha0; }
};

inline ModeState cat_fock(const CatSpec& spec, std::size_t cutoff, double tail_tolerance = 0.0) {
    const ModeState p = coherent_fock(spec.plus(), cutoff, tail_tolerance);
    const ModeState m = coherent_fock(spec.minus(), cutoff, tail_tolerance);
    std::vector<Complex> a(cutoff);
    for (std::size_t n = 0; n < cutoff; ++n) a[n] = spec.norm_const * (p[n] + m[n]);
    return ModeState(std::move(a));
}

}  // namespace catvis
