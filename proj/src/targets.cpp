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

#include "qgraph/targets.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qgraph {

TargetState TargetState::from_state(const QuantumState &state, std::string label) {
    return TargetState{normalize_state(state), std::move(label)};
}

TargetState ghz_state(int n, int d) {
    if (n < 2) throw std::invalid_argument("ghz_state: need at least 2 particles");
    if (d < 2) throw std::invalid_argument("ghz_state: need dimension at least 2");
    QuantumState s(std::vector<int>(static_cast<std::size_t>(n), d));
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) s.set(Ket(static_cast<std::size_t>(n), j), amp);
    return TargetState{std::move(s), "GHZ(n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")"};
}

TargetState bell_pair(int d) {
    if (d < 2) throw std::invalid_argument("bell_pair: need dimension at least 2");
    auto t = ghz_state(2, d);
    t.label = "Bell(d=" + std::to_string(d) + ")";
    return t;
}

TargetState multi_pair_swap_target(int n_pairs, int d) {
    if (n_pairs < 1) throw std::invalid_argument("multi_pair_swap_target: need at least one pair");
    if (d < 2) throw std::invalid_argument("multi_pair_swap_target: need dimension at least 2");
    auto np = static_cast<std::size_t>(n_pairs);
    QuantumState s(std::vector<int>(2 * np, d));
    double amp = std::pow(static_cast<double>(d), -0.5 * n_pairs);
    std::size_t total = 1;
    for (std::size_t k = 0; k < np; ++k) total *= static_cast<std::size_t>(d);
    // Party A's modes are the base-d digits of idx; party B mirrors them.
    for (std::size_t idx = 0; idx < total; ++idx) {
        Ket ket(2 * np);
        std::size_t rest = idx;
        for (std::size_t k = np; k-- > 0;) {
            ket[k] = ket[k + np] = static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
        }
        s.set(ket, amp);
    }
    std::string label = n_pairs == 1 ? "Bell(d=" + std::to_string(d) + ")"
                                     : "Swap(pairs=" + std::to_string(n_pairs) + ",d=" + std::to_string(d) + ")";
    return TargetState{std::move(s), std::move(label)};
}

namespace {

std::vector<int> parse_ints(std::string_view text, std::string_view spec) {
    std::vector<int> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto part = text.substr(0, comma);
        int value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
            throw std::invalid_argument("bad target spec '" + std::string(spec) + "'");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

TargetState parse_target_spec(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument("bad target spec '" + std::string(spec) + "': expected ghz:n,d | bell:d | swap:n,d");
    }
    auto kind = spec.substr(0, colon);
    auto args = parse_ints(spec.substr(colon + 1), spec);
    if (kind == "ghz" && args.size() == 2) return ghz_state(args[0], args[1]);
    if (kind == "bell" && args.size() == 1) return bell_pair(args[0]);
    if (kind == "swap" && args.size() == 2) return multi_pair_swap_target(args[0], args[1]);
    throw std::invalid_argument("bad target spec '" + std::string(spec) + "': expected ghz:n,d | bell:d | swap:n,d");
}

}  // namespace qgraph
