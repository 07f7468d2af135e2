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

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

#include "catvis/fock.hpp"
#include "catvis/operators.hpp"

namespace catvis {

struct Tolerances {
    double tail = kDefaultTailTolerance;
    double leakage = kDefaultLeakageTolerance;
    double boundary = 1e-10;         // boundary sample / peak ratio of a Q grid
    double component_overlap = 1e-3; // cat components must be this close to orthogonal
    double negativity = 1e-12;
};

/// Phase-space grid resolution; plane centers are picked per integrand.
struct GridSpec {
    double half_width = 6.0;
    double spacing = 0.1;
};

/// Cat amplitude, Kerr phase, single-photon phase, reflectivity and numerical controls.
struct ExperimentParams {
    Complex alpha0{0.0, 1.0};
    double phi = kPi / 4.0;
    double R = 0.0;
    double theta = 0.0;
    std::size_t cutoff_a = 0;  // 0 selects default_cutoff(|alpha0|)
    std::size_t cutoff_b = 0;  // 0 selects default_cutoff(R |alpha0|)
    GridSpec grid{};
    Tolerances tol{};

    double T() const { return std::sqrt(1.0 - R * R); }
    BeamSplitter beam_splitter() const { return BeamSplitter(R); }
    CatSpec cat() const { return CatSpec(alpha0, phi); }

    std::size_t resolved_cutoff_a() const { return cutoff_a ? cutoff_a : default_cutoff(std::abs(alpha0)); }
    std::size_t resolved_cutoff_b() const {
        return cutoff_b ? cutoff_b : default_cutoff(std::abs(R) * std::abs(alpha0));
    }

    void validate() const {
        if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()) || !std::isfinite(phi) ||
            !std::isfinite(theta) || !std::isfinite(R)) {
            throw std::invalid_argument("ExperimentParams: non-finite parameter");
        }
        if (!(R >= 0.0 && R < 1.0)) throw std::invalid_argument("ExperimentParams: R must lie in [0, 1)");
        if (!(grid.spacing > 0.0)) throw std::invalid_argument("ExperimentParams: grid spacing must be positive");
        if (grid.half_width < 6.0 * grid.spacing) {
            throw std::invalid_argument("ExperimentParams: grid half-width must be at least 6 spacings");
        }
    }
};

}  // namespace catvis
