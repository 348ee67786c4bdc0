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

#ifndef QGRAPH_STATE_HPP
#define QGRAPH_STATE_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

/// One mode index per site.
using Ket = std::vector<int>;

/// Renders a ket as one symbol per site: 0-9, then a-z for modes 10..35.
std::string ket_to_string(const Ket &ket);
/// Inverse of ket_to_string; throws std::invalid_argument on unknown symbols.
Ket ket_from_string(std::string_view text);

/// Raised when a state with zero norm is normalized (every term cancelled).
class StateVanishes : public std::runtime_error {
   public:
    StateVanishes() : std::runtime_error("state vanishes: all terms cancel") {}
};

/// Sparse pure state over `dims.size()` sites. Zero amplitudes are not stored.
struct QuantumState {
    std::vector<int> dims;
    std::map<Ket, Amplitude> amplitudes;

    QuantumState() = default;
    explicit QuantumState(std::vector<int> site_dims) : dims(std::move(site_dims)) {}

    std::size_t num_sites() const { return dims.size(); }
    bool empty() const { return amplitudes.empty(); }

    /// Amplitude of `ket`, 0 when absent.
    Amplitude amplitude(const Ket &ket) const;
    /// Stores `value` (erasing the ket if value is exactly 0); validates the ket against dims.
    void set(const Ket &ket, Amplitude value);
    void add(const Ket &ket, Amplitude value);

    double norm_squared() const;
    bool fits(const Ket &ket) const;
};

/// Divides by the norm; throws StateVanishes for zero norm.
QuantumState normalize_state(const QuantumState &state);

/// <a|b> = sum conj(a_k) b_k. Throws std::invalid_argument when shapes differ.
Amplitude inner_product(const QuantumState &a, const QuantumState &b);

/// |<target|psi>|^2 / (<psi|psi> <target|target>); 0 for a vanishing psi.
double fidelity(const QuantumState &psi, const QuantumState &target);

/// Entry-wise complex conjugate.
QuantumState conjugate(const QuantumState &state);

/// True when both states agree on every ket within `tol` (absolute).
bool approx_equal(const QuantumState &a, const QuantumState &b, double tol = kAmplitudeTolerance);

}  // namespace qgraph

#endif
