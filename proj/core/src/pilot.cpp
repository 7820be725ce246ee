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


#include "cfest/pilot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cfest/errors.hpp"

namespace cfest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int k, int n) {
  const int m = k % n;
  return m < 0 ? m + n : m;
}

}  // namespace

std::string_view to_string(PilotScheme scheme) noexcept {
  switch (scheme) {
    case PilotScheme::Random: return "random";
    case PilotScheme::Dft: return "dft";
    case PilotScheme::ExtendedDft: return "dft_ext";
  }
  return "?";
}

PilotScheme parse_pilot_scheme(std::string_view text) {
  if (text == "random") return PilotScheme::Random;
  if (text == "dft") return PilotScheme::Dft;
  if (text == "dft_ext") return PilotScheme::ExtendedDft;
  throw ConfigError("pilot.scheme", "unknown scheme '" + std::string(text) + "'");
}

std::string_view to_string(PilotAssignment assignment) noexcept {
  return assignment == PilotAssignment::RoundRobin ? "round_robin" : "maxmin_distance";
}

PilotAssignment parse_pilot_assignment(std::string_view text) {
  if (text == "round_robin") return PilotAssignment::RoundRobin;
  if (text == "maxmin_distance") return PilotAssignment::MaxMinDistance;
  throw ConfigError("pilot.assignment", "unknown assignment '" + std::string(text) + "'");
}

bool PilotBook::co_pilot(int u, int v) const {
  return is_dft_family() && assignment.at(static_cast<std::size_t>(u)) ==
                                assignment.at(static_cast<std::size_t>(v));
}

CRow dft_row(int m, int tau_p, int length) {
  CRow row(length);
  for (int n = 0; n < length; ++n) {
    // Reduce m*n first so the phase stays exact for long rows.
    const int k = wrap(m * n, tau_p);
    row(n) = std::polar(1.0, kTwoPi * k / tau_p);
  }
  return row;
}

std::vector<int> assign_round_robin(int ue_count, int tau_p) {
  std::vector<int> out(static_cast<std::size_t>(ue_count));
  for (int u = 0; u < ue_count; ++u) out[u] = u % tau_p;
  return out;
}

std::vector<int> assign_maxmin_distance(std::span<const Point> ue_positions, int tau_p) {
  const int n = static_cast<int>(ue_positions.size());
  std::vector<int> out(static_cast<std::size_t>(n), 0);
  std::vector<double> nearest(static_cast<std::size_t>(tau_p));
  for (int u = 0; u < n; ++u) {
    std::fill(nearest.begin(), nearest.end(), std::numeric_limits<double>::infinity());
    for (int v = 0; v < u; ++v) {
      double& d = nearest[out[v]];
      d = std::min(d, distance(ue_positions[u], ue_positions[v]));
    }
    out[u] = static_cast<int>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
  }
  return out;
}

PilotBook make_pilot_book(PilotScheme scheme, int tau_p, int tau_ex, int ue_count, Rng& rng,
                          const PilotOptions& options) {
  if (tau_p < 1) throw ConfigError("pilot.tau_p", "pilot length must be >= 1");
  if (tau_ex < 0) throw ConfigError("pilot.tau_ex", "extension must be >= 0");
  if (tau_ex > 0 && scheme != PilotScheme::ExtendedDft)
    throw ConfigError("pilot.tau_ex", "a cyclic extension requires the dft_ext scheme");
  if (ue_count < 1) throw std::invalid_argument("make_pilot_book: no UEs");
  if (scheme == PilotScheme::Random && options.phase_levels < 1)
    throw ConfigError("pilot.P", "phase levels must be >= 1");

  PilotBook book;
  book.scheme = scheme;
  book.tau_p = tau_p;
  book.tau_ex = tau_ex;
  book.phase_levels = options.phase_levels;

  if (!options.explicit_assignment.empty()) {
    if (static_cast<int>(options.explicit_assignment.size()) != ue_count)
      throw std::invalid_argument("make_pilot_book: explicit assignment size != UE count");
    book.assignment = options.explicit_assignment;
    for (int& m : book.assignment) m = wrap(m, tau_p);
  } else if (options.assignment == PilotAssignment::MaxMinDistance) {
    if (static_cast<int>(options.ue_positions.size()) != ue_count)
      throw std::invalid_argument("make_pilot_book: maxmin assignment needs every UE position");
    book.assignment = assign_maxmin_distance(options.ue_positions, tau_p);
  } else {
    book.assignment = assign_round_robin(ue_count, tau_p);
  }

  if (scheme == PilotScheme::ExtendedDft && tau_ex >= tau_p) {
    book.warnings.push_back("tau_ex >= tau_p: extension wraps the base sequence more than once");
  }

  book.sequences.reserve(static_cast<std::size_t>(ue_count));
  if (scheme == PilotScheme::Random) {
    std::uniform_int_distribution<int> level(0, options.phase_levels - 1);
    for (int u = 0; u < ue_count; ++u) {
      CRow row(tau_p);
      for (int i = 0; i < tau_p; ++i)
        row(i) = std::polar(1.0, kTwoPi * level(rng) / options.phase_levels);
      book.sequences.push_back(std::move(row));
    }
  } else {
    for (int u = 0; u < ue_count; ++u)
      book.sequences.push_back(dft_row(book.assignment[u], tau_p, tau_p + tau_ex));
  }
  return book;
}

MfSequence make_mf_sequence(const PilotBook& book, const NetworkRealization& net, int r, int u) {
  MfSequence mf;
  if (book.scheme == PilotScheme::ExtendedDft) {
    if (!net.serves(r, u))
      throw std::invalid_argument("make_mf_sequence: extended MF window needs a served UE");
    mf.window_start = net.t_window[r];
  } else {
    mf.window_start = net.delay(r, u);
  }
  mf.row = CRow::Zero(book.length() + net.t_max[r]);
  mf.row.segment(mf.window_start, book.tau_p) = book.base(u);
  return mf;
}

std::complex<double> dft_cross_inner(int m, int n, int tau_p, int overlap) {
  if (overlap <= 0) return {0.0, 0.0};
  if (overlap > tau_p) throw std::invalid_argument("dft_cross_inner: overlap exceeds tau_p");
  const auto w_pow = [tau_p](long long k) {
    return std::polar(1.0, -kTwoPi * static_cast<double>(wrap(static_cast<int>(k % tau_p), tau_p)) / tau_p);
  };
  const std::complex<double> lead = w_pow(static_cast<long long>(m) * (tau_p - overlap));
  const int k = wrap(m - n, tau_p);
  if (k == 0) return lead * static_cast<double>(overlap);
  const std::complex<double> num = w_pow(static_cast<long long>(k) * overlap) - 1.0;
  const std::complex<double> den = w_pow(k) - 1.0;
  return lead * num / den;
}

double dft_cross_power_factor(int m, int n, int tau_p, int overlap) {
  const int k = wrap(m - n, tau_p);
  if (k == 0) throw std::invalid_argument("dft_cross_power_factor: co-pilot pair, use overlap^2");
  if (overlap <= 0) return 0.0;
  const double num = std::sin(std::numbers::pi * wrap(k * overlap, tau_p) / tau_p);
  const double den = std::sin(std::numbers::pi * k / tau_p);
  return (num * num) / (den * den);
}

double dft_cross_power_factor_cosine(int m, int n, int tau_p, int overlap) {
  const int k = wrap(m - n, tau_p);
  if (k == 0) throw std::invalid_argument("dft_cross_power_factor_cosine: co-pilot pair");
  if (overlap <= 0) return 0.0;
  const double num = 1.0 - std::cos(kTwoPi * wrap(k * overlap, tau_p) / tau_p);
  const double den = 1.0 - std::cos(kTwoPi * k / tau_p);
  return num / den;
}

}  // namespace cfest
