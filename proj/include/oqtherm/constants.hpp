// Copyright 2026 The oqtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace oqtherm {

// Unit conventions used throughout the library:
//   energies    peV
//   times       s
//   rates       Hz (s^-1)
//   superoperators  rad/s
struct PhysicalConstants {
    double hbar_eV_s = 6.578e-16;    // reduced Planck constant, eV*s
    double kB_eV_per_K = 8.619e-5;   // Boltzmann constant, eV/K

    double hbar_peV_s() const { return hbar_eV_s * 1e12; }
};

inline const PhysicalConstants kDefaultConstants{};

}  // namespace oqtherm
