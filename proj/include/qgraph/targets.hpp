// Copyright 2026 The qgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QGRAPH_TARGETS_HPP
#define QGRAPH_TARGETS_HPP

#include <string>
#include <string_view>

#include "qgraph/state.hpp"

namespace qgraph {

/// A normalized state with a human-readable label such as "GHZ(n=4,d=3)".
struct TargetState {
    QuantumState state;
    std::string label;

    /// Normalizes `state`; throws StateVanishes for a zero state.
    static TargetState from_state(const QuantumState &state, std::string label);
};

/// (1/sqrt d) sum_j |j...j> over n sites.
TargetState ghz_state(int n, int d);

/// (1/sqrt d) sum_j |jj>.
TargetState bell_pair(int d);

/// n_pairs copies of bell_pair(d). Site k is paired with site k + n_pairs:
/// party A holds sites [0, n_pairs), party B holds [n_pairs, 2 n_pairs).
TargetState multi_pair_swap_target(int n_pairs, int d);

/// Parses "ghz:n,d", "bell:d" or "swap:n,d"; throws std::invalid_argument otherwise.
TargetState parse_target_spec(std::string_view spec);

}  // namespace qgraph

#endif
