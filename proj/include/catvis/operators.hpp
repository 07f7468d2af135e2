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
#include <cstdio>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "catvis/fock.hpp"

namespace catvis {

/// Lossless beam splitter with real reflection/transmission coefficients.
///
/// Reflection carries a factor i: |alpha>_A |0>_B -> |T alpha>_A |i R alpha>_B.
class BeamSplitter {
public:
    explicit BeamSplitter(double reflectivity)
        : BeamSplitter(reflectivity, std::sqrt(std::max(0.0, 1.0 - reflectivity * reflectivity))) {}

    BeamSplitter(double reflectivity, double transmissivity) : r_(reflectivity), t_(transmissivity) {
        if (!(r_ >= 0.0 && r_ < 1.0)) throw std::invalid_argument("BeamSplitter: R must lie in [0, 1)");
        if (!(t_ > 0.0 && t_ <= 1.0)) throw std::invalid_argument("BeamSplitter: T must lie in (0, 1]");
        if (std::abs(r_ * r_ + t_ * t_ - 1.0) > 1e-12) {
            throw std::invalid_argument("BeamSplitter: R^2 + T^2 must equal 1");
        }
    }

    double R() const noexcept { return r_; }
    double T() const noexcept { return t_; }

private:
    double r_;
    double t_;
};

/// Joint state of modes A and B, row-major over (n_A, n_B).
class TwoModeState {
public:
    TwoModeState(std::size_t cutoff_a, std::size_t cutoff_b, std::vector<Complex> amplitudes)
        : ca_(cutoff_a), cb_(cutoff_b), amps_(std::move(amplitudes)) {
        if (ca_ < 1 || cb_ < 1) throw std::invalid_argument("TwoModeState: cutoffs must be at least 1");
        if (amps_.size() != ca_ * cb_) throw std::invalid_argument("TwoModeState: amplitude count mismatch");
        if (norm2() > 1.0 + kNormSlack) throw std::invalid_argument("TwoModeState: squared norm exceeds 1");
    }

    static TwoModeState product(const ModeState& a, const ModeState& b) {
        std::vector<Complex> amps(a.cutoff() * b.cutoff());
        for (std::size_t i = 0; i < a.cutoff(); ++i) {
            for (std::size_t j = 0; j < b.cutoff(); ++j) amps[i * b.cutoff() + j] = a[i] * b[j];
        }
        return TwoModeState(a.cutoff(), b.cutoff(), std::move(amps));
    }

    std::size_t cutoff_a() const noexcept { return ca_; }
    std::size_t cutoff_b() const noexcept { return cb_; }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    const Complex& operator()(std::size_t na, std::size_t nb) const { return amps_[na * cb_ + nb]; }

    double norm2() const noexcept {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

private:
    std::size_t ca_;
    std::size_t cb_;
    std::vector<Complex> amps_;
};

inline Complex fock_inner(const TwoModeState& u, const TwoModeState& v) {
    if (u.cutoff_a() != v.cutoff_a() || u.cutoff_b() != v.cutoff_b()) {
        throw std::invalid_argument("fock_inner: cutoff mismatch");
    }
    Complex s{};
    const auto a = u.amplitudes();
    const auto b = v.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

/// Square operator on one truncated mode, row-major.
class ModeOperator {
public:
    explicit ModeOperator(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    std::size_t dim() const noexcept { return dim_; }
    Complex& operator()(std::size_t m, std::size_t n) { return data_[m * dim_ + n]; }
    const Complex& operator()(std::size_t m, std::size_t n) const { return data_[m * dim_ + n]; }

    Complex trace() const {
        Complex s{};
        for (std::size_t n = 0; n < dim_; ++n) s += (*this)(n, n);
        return s;
    }

private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

/// Tr_B |ket><bra|. With ket == bra this is the reduced density operator of mode A.
inline ModeOperator partial_trace_b(const TwoModeState& ket, const TwoModeState& bra) {
    if (ket.cutoff_a() != bra.cutoff_a() || ket.cutoff_b() != bra.cutoff_b()) {
        throw std::invalid_argument("partial_trace_b: cutoff mismatch");
    }
    ModeOperator rho(ket.cutoff_a());
    for (std::size_t m = 0; m < ket.cutoff_a(); ++m) {
        for (std::size_t n = 0; n < ket.cutoff_a(); ++n) {
            Complex s{};
            for (std::size_t k = 0; k < ket.cutoff_b(); ++k) s += ket(m, k) * std::conj(bra(n, k));
            rho(m, n) = s;
        }
    }
    return rho;
}

inline ModeOperator partial_trace_b(const TwoModeState& state) { return partial_trace_b(state, state); }

/// (T alpha, i R alpha): exact image of |alpha>_A |0>_B.
inline std::pair<CoherentLabel, CoherentLabel> bs_coherent_map(const BeamSplitter& bs, CoherentLabel alpha) {
    return {CoherentLabel(bs.T() * alpha.alpha), CoherentLabel(kI * bs.R() * alpha.alpha)};
}

inline constexpr double kDefaultLeakageTolerance = 1e-10;

namespace detail {

inline double leaked(const TwoModeState& state, const std::vector<Complex>& out) {
    double out2 = 0.0;
    for (const auto& a : out) out2 += std::norm(a);
    return state.norm2() - out2;
}

inline void check_leakage(double leak, double tolerance) {
    if (std::abs(leak) > tolerance) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", leak);
        throw TruncationError(std::string("bs_fock_apply: truncation leakage ") + buf +
                              " exceeds tolerance; raise the cutoffs");
    }
}

// The three factors applied right to left. The middle state is held with an
// enlarged A range so nothing is lost before the final factor.
inline std::vector<Complex> bs_factored(const BeamSplitter& bs, const TwoModeState& state) {
    const std::size_t ca = state.cutoff_a();
    const std::size_t cb = state.cutoff_b();
    const std::size_t wide = ca + cb - 1;
    const Complex c = kI * bs.R() / bs.T();

    // exp(c a^dag b): (n_A, n_B) -> (n_A + j, n_B - j)
    std::vector<Complex> mid(wide * cb);
    for (std::size_t na = 0; na < ca; ++na) {
        for (std::size_t nb = 0; nb < cb; ++nb) {
            const Complex amp = state(na, nb);
            if (amp == Complex{}) continue;
            Complex coef = 1.0;
            for (std::size_t j = 0; j <= nb; ++j) {
                if (j > 0) {
                    coef *= c / static_cast<double>(j) * std::sqrt(static_cast<double>(nb - j + 1)) *
                            std::sqrt(static_cast<double>(na + j));
                }
                mid[(na + j) * cb + (nb - j)] += coef * amp;
            }
        }
    }

    // T^(n_A - n_B)
    for (std::size_t m = 0; m < wide; ++m) {
        for (std::size_t k = 0; k < cb; ++k) {
            mid[m * cb + k] *= std::pow(bs.T(), static_cast<double>(m) - static_cast<double>(k));
        }
    }

    // exp(c a b^dag): (m_A, m_B) -> (m_A - k, m_B + k)
    std::vector<Complex> out(ca * cb);
    for (std::size_t ma = 0; ma < wide; ++ma) {
        for (std::size_t mb = 0; mb < cb; ++mb) {
            const Complex amp = mid[ma * cb + mb];
            if (amp == Complex{}) continue;
            Complex coef = 1.0;
            for (std::size_t k = 0; k <= ma && mb + k < cb; ++k) {
                if (k > 0) {
                    coef *= c / static_cast<double>(k) * std::sqrt(static_cast<double>(ma - k + 1)) *
                            std::sqrt(static_cast<double>(mb + k));
                }
                if (ma - k < ca) out[(ma - k) * cb + (mb + k)] += coef * amp;
            }
        }
    }

    return out;
}

}  // namespace detail

/// Applies U = exp(i R a b^dag / T) T^(n_A - n_B) exp(i R a^dag b / T), right to left.
///
/// Each exponential is summed as a terminating series on its fixed-photon-number
/// sector; amplitudes that land outside the output cutoffs are dropped and counted
/// as leakage. The series cancel badly once R/T > 1, so there the splitter is
/// rewritten as U(R,T) = S P_A(pi/2) P_B(-pi/2) U(T,R) P_B(pi), with S the mode swap
/// and P_X(chi) = e^{i chi n_X}, and the factored form runs with ratio T/R.
inline TwoModeState bs_fock_apply(const BeamSplitter& bs, const TwoModeState& state,
                                  double leakage_tolerance = kDefaultLeakageTolerance) {
    const std::size_t ca = state.cutoff_a();
    const std::size_t cb = state.cutoff_b();
    if (bs.R() <= bs.T()) {
        auto out = detail::bs_factored(bs, state);
        detail::check_leakage(detail::leaked(state, out), leakage_tolerance);
        return TwoModeState(ca, cb, std::move(out));
    }

    // Square working space so the swap stays inside it.
    const std::size_t m = std::max(ca, cb);
    std::vector<Complex> in(m * m);
    for (std::size_t na = 0; na < ca; ++na) {
        for (std::size_t nb = 0; nb < cb; ++nb) in[na * m + nb] = (nb % 2 ? -1.0 : 1.0) * state(na, nb);
    }
    const auto mid = detail::bs_factored(BeamSplitter(bs.T(), bs.R()), TwoModeState(m, m, std::move(in)));
    std::vector<Complex> out(ca * cb);
    for (std::size_t na = 0; na < ca; ++na) {
        for (std::size_t nb = 0; nb < cb; ++nb) {
            // after the swap, (na, nb) holds what sat at (nb, na); i^nb (-i)^na from the phases
            const std::size_t k = (nb + 3 * na) % 4;
            const Complex ph = k == 0 ? Complex(1, 0) : k == 1 ? kI : k == 2 ? Complex(-1, 0) : -kI;
            out[na * cb + nb] = ph * mid[nb * m + na];
        }
    }
    detail::check_leakage(detail::leaked(state, out), leakage_tolerance);
    return TwoModeState(ca, cb, std::move(out));
}

/// e^{i chi} alpha.
inline CoherentLabel phase_shift_label(CoherentLabel alpha, double chi) {
    return CoherentLabel(std::polar(1.0, chi) * alpha.alpha);
}

/// exp(i chi n) applied to a Fock vector.
inline ModeState phase_shift_fock(const ModeState& state, double chi) {
    std::vector<Complex> a(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t n = 0; n < a.size(); ++n) a[n] *= std::polar(1.0, chi * static_cast<double>(n));
    return ModeState(std::move(a));
}

/// Post-selected interferometer map (e^{i theta} Phi_+ + Phi_-) / 2.
inline ModeState apply_V(const ModeState& state, double theta, double phi) {
    const Complex w = std::polar(1.0, theta);
    std::vector<Complex> a(state.cutoff());
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double k = static_cast<double>(n);
        a[n] = 0.5 * (w * std::polar(1.0, phi * k) + std::polar(1.0, -phi * k)) * state[n];
    }
    return ModeState(std::move(a));
}

/// Moments of the quadrature x = (a + a^dag)/2. Vacuum variance is 1/4.
struct QuadratureStats {
    double mean_x = 0.0;
    double var_x = 0.25;
    std::optional<double> raw3;  ///< <x^3>
    std::optional<double> raw4;  ///< <x^4>
};

namespace detail {

// x|psi> on a vector that grows by one level so the ladder action is exact.
inline std::vector<Complex> apply_x(std::span<const Complex> psi) {
    std::vector<Complex> out(psi.size() + 1);
    for (std::size_t n = 0; n < psi.size(); ++n) {
        const double k = static_cast<double>(n);
        if (n > 0) out[n - 1] += 0.5 * std::sqrt(k) * psi[n];
        out[n + 1] += 0.5 * std::sqrt(k + 1.0) * psi[n];
    }
    return out;
}

inline Complex dot(std::span<const Complex> u, std::span<const Complex> v) {
    Complex s{};
    for (std::size_t n = 0; n < std::min(u.size(), v.size()); ++n) s += std::conj(u[n]) * v[n];
    return s;
}

inline QuadratureStats stats_from_raw(double m1, double m2, double m3, double m4) {
    QuadratureStats s;
    s.mean_x = m1;
    s.var_x = m2 - m1 * m1;
    s.raw3 = m3;
    s.raw4 = m4;
    return s;
}

}  // namespace detail

/// Quadrature moments of a pure state, taken on the normalized state.
inline QuadratureStats quadrature_moments(const ModeState& state) {
    const double n2 = state.norm2();
    if (!(n2 > 0.0)) throw std::invalid_argument("quadrature_moments: zero-norm state");
    const auto psi = state.amplitudes();
    const auto x1 = detail::apply_x(psi);
    const auto x2 = detail::apply_x(x1);
    const double m1 = detail::dot(psi, x1).real() / n2;
    const double m2 = detail::dot(x1, x1).real() / n2;
    const double m3 = detail::dot(x1, x2).real() / n2;
    const double m4 = detail::dot(x2, x2).real() / n2;
    return detail::stats_from_raw(m1, m2, m3, m4);
}

/// Quadrature moments Tr(rho x^k) / Tr(rho) of a reduced density operator.
inline QuadratureStats quadrature_moments(const ModeOperator& rho) {
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) throw std::invalid_argument("quadrature_moments: zero-trace operator");
    const std::size_t d = rho.dim();
    double raw[5] = {0, 0, 0, 0, 0};
    // Tr(rho x^k) = sum_n <n| x^k rho |n> = sum_n <x^k n | rho column n> for Hermitian x.
    for (std::size_t n = 0; n < d; ++n) {
        std::vector<Complex> col(d);
        for (std::size_t m = 0; m < d; ++m) col[m] = rho(m, n);
        std::vector<Complex> basis(d);
        basis[n] = 1.0;
        std::vector<Complex> xk = basis;
        for (int k = 1; k <= 4; ++k) {
            xk = detail::apply_x(xk);
            raw[k] += detail::dot(xk, col).real();
        }
    }
    return detail::stats_from_raw(raw[1] / tr, raw[2] / tr, raw[3] / tr, raw[4] / tr);
}

}  // namespace catvis
