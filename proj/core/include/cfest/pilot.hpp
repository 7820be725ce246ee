// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The cfest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfest/channel.hpp"
#include "cfest/geometry.hpp"
#include "cfest/rng.hpp"

namespace cfest {

enum class PilotScheme { Random, Dft, ExtendedDft };
enum class PilotAssignment { RoundRobin, MaxMinDistance };

std::string_view to_string(PilotScheme scheme) noexcept;
PilotScheme parse_pilot_scheme(std::string_view text);  // random | dft | dft_ext
std::string_view to_string(PilotAssignment assignment) noexcept;
PilotAssignment parse_pilot_assignment(std::string_view text);  // round_robin | maxmin_distance

struct PilotOptions {
  int phase_levels = 8;  // P, random scheme only
  PilotAssignment assignment = PilotAssignment::RoundRobin;
  std::span<const Point> ue_positions;  // required for MaxMinDistance
  std::vector<int> explicit_assignment;  // overrides `assignment` when non-empty
};

/// Per-UE pilot rows. DFT-family rows are [Phi]_m, cyclically extended by
/// tau_ex for the extended scheme; random rows carry i.i.d. P-ary phases.
struct PilotBook {
  PilotScheme scheme = PilotScheme::Dft;
  int tau_p = 0;
  int tau_ex = 0;
  int phase_levels = 8;
  std::vector<int> assignment;  // UE -> pilot index in [0, tau_p)
  std::vector<CRow> sequences;  // length tau_p + tau_ex
  std::vector<std::string> warnings;

  int length() const noexcept { return tau_p + tau_ex; }
  int ue_count() const noexcept { return static_cast<int>(sequences.size()); }
  /// First tau_p entries of UE u's row (zeta_u).
  CRow base(int u) const { return sequences.at(static_cast<std::size_t>(u)).head(tau_p); }
  bool co_pilot(int u, int v) const;
  bool is_dft_family() const noexcept { return scheme != PilotScheme::Random; }
};

/// e^{j 2 pi m n / tau_p}, n = 0 .. length-1.
CRow dft_row(int m, int tau_p, int length);

std::vector<int> assign_round_robin(int ue_count, int tau_p);

/// Greedy: each UE in index order takes the pilot whose nearest existing
/// holder is farthest away (an unused pilot counts as infinitely far).
std::vector<int> assign_maxmin_distance(std::span<const Point> ue_positions, int tau_p);

PilotBook make_pilot_book(PilotScheme scheme, int tau_p, int tau_ex, int ue_count, Rng& rng,
                          const PilotOptions& options = {});

/// Zero-padded matched-filter row for UE u at AP r, length
/// book.length() + t_max_r, holding zeta_u starting at window_start.
struct MfSequence {
  CRow row;
  int window_start = 0;
};

/// window_start = t_ur for random/DFT, t_w,r for the extended scheme (where
/// u must be served by r).
MfSequence make_mf_sequence(const PilotBook& book, const NetworkRealization& net, int r, int u);

/// Closed-form correlation between DFT rows m (matched filter, earlier) and
/// n (interferer, later) overlapping on `overlap` samples:
/// w^{m(tau_p - overlap)} (w^{(m-n) overlap} - 1) / (w^{m-n} - 1), w = e^{-j2pi/tau_p}.
/// The m == n (mod tau_p) limit is w^{m(tau_p - overlap)} * overlap. Zero when overlap <= 0.
std::complex<double> dft_cross_inner(int m, int n, int tau_p, int overlap);

/// sin^2(pi (m-n) overlap / tau_p) / sin^2(pi (m-n) / tau_p). Requires m != n (mod tau_p).
double dft_cross_power_factor(int m, int n, int tau_p, int overlap);

/// Same factor in the (1 - cos) / (1 - cos) form.
double dft_cross_power_factor_cosine(int m, int n, int tau_p, int overlap);

}  // namespace cfest
