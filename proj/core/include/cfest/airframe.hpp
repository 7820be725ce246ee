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

#include <span>
#include <string_view>
#include <vector>

#include "cfest/channel.hpp"
#include "cfest/geometry.hpp"
#include "cfest/pilot.hpp"
#include "cfest/rng.hpp"

namespace cfest {

/// UPG: guard time after the pilot, tails are zero. UPNG: tails carry
/// uplink data that leaks into other UEs' MF windows.
enum class Regime { Upg, Upng };

std::string_view to_string(Regime regime) noexcept;
Regime parse_regime(std::string_view text);  // upg | upng

/// Unit-magnitude data symbols per UE, drawn uniformly from {1, j, -1, -j}.
/// The same sequence is seen (with its own delay) at every AP.
struct UplinkData {
  std::vector<CRow> symbols;
};

UplinkData draw_uplink_data(int ue_count, int length, Rng& rng);

/// Longest tail any AP can need for this realization.
int uplink_data_length(const NetworkRealization& net);

/// [0^{t_ur}, phi_u, tail], length book.length() + t_max_r. The tail has
/// t_max_r - t_ur entries: zeros under UPG, data symbols under UPNG.
CRow build_augmented_sequence(const PilotBook& book, const NetworkRealization& net, Regime regime,
                              int r, int u, const UplinkData& data);

/// Convenience overload drawing a fresh data tail from `rng`.
CRow build_augmented_sequence(const PilotBook& book, const NetworkRealization& net, Regime regime,
                              int r, int u, Rng& rng);

/// Noiseless unit-power received block at AP r: sum over UEs of h_ru x_{u,r,aug}.
/// `ues` restricts the sum (all UEs when empty).
CMatrix synthesize_signal(const PilotBook& book, const NetworkRealization& net,
                          const ChannelMatrixSet& chan, Regime regime, int r,
                          const UplinkData& data, std::span<const int> ues = {});

/// i.i.d. CN(0, noise_power) entries.
CMatrix draw_noise(int rows, int cols, double noise_power, Rng& rng);

/// Y_r = sqrt(p_ul) sum_u h_ru x_{u,r,aug} + Z_r for every AP.
struct ReceivedFrame {
  std::vector<CMatrix> y;  // per AP, M x (L + t_max_r)
  double p_ul = 0.0;
  double noise_power = 0.0;
  int pilot_length = 0;  // L = tau_p + tau_ex
};

ReceivedFrame synthesize_frame(const PilotBook& book, const NetworkRealization& net,
                               const ChannelMatrixSet& chan, Regime regime, double p_ul, Rng& rng);

/// Same, with the data and noise supplied by the caller.
ReceivedFrame assemble_frame(const PilotBook& book, const NetworkRealization& net,
                             const ChannelMatrixSet& chan, Regime regime, double p_ul,
                             const UplinkData& data, std::span<const CMatrix> noise);

}  // namespace cfest
