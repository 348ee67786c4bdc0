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

#include "qgraph/state.hpp"

#include <cmath>

namespace qgraph {

namespace {

void require_same_shape(const QuantumState &a, const QuantumState &b, const char *what) {
    if (a.dims != b.dims) throw std::invalid_argument(std::string(what) + ": states have different site dimensions");
}

}  // namespace

std::string ket_to_string(const Ket &ket) {
    std::string out;
    out.reserve(ket.size());
    for (int m : ket) {
        if (m < 0 || m >= 36) throw std::invalid_argument("ket_to_string: mode " + std::to_string(m) + " unprintable");
        out.push_back(m < 10 ? static_cast<char>('0' + m) : static_cast<char>('a' + (m - 10)));
    }
    return out;
}

Ket ket_from_string(std::string_view text) {
    Ket out;
    out.reserve(text.size());
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            out.push_back(c - '0');
        } else if (c >= 'a' && c <= 'z') {
            out.push_back(10 + (c - 'a'));
        } else {
            throw std::invalid_argument("ket_from_string: invalid symbol '" + std::string(1, c) + "'");
        }
    }
    return out;
}

Amplitude QuantumState::amplitude(const Ket &ket) const {
    auto it = amplitudes.find(ket);
    return it == amplitudes.end() ? Amplitude{} : it->second;
}

bool QuantumState::fits(const Ket &ket) const {
    if (ket.size() != dims.size()) return false;
    for (std::size_t i = 0; i < ket.size(); ++i) {
        if (ket[i] < 0 || ket[i] >= dims[i]) return false;
    }
    return true;
}

void QuantumState::set(const Ket &ket, Amplitude value) {
    if (!fits(ket)) throw std::invalid_argument("ket " + ket_to_string(ket) + " does not fit the state dimensions");
    if (value == Amplitude{}) {
        amplitudes.erase(ket);
    } else {
        amplitudes[ket] = value;
    }
}

void QuantumState::add(const Ket &ket, Amplitude value) { set(ket, amplitude(ket) + value); }

double QuantumState::norm_squared() const {
    double total = 0.0;
    for (const auto &[ket, amp] : amplitudes) total += std::norm(amp);
    return total;
}

QuantumState normalize_state(const QuantumState &state) {
    double n2 = state.norm_squared();
    if (!(n2 > 0.0)) throw StateVanishes();
    double scale = 1.0 / std::sqrt(n2);
    QuantumState out(state.dims);
    for (const auto &[ket, amp] : state.amplitudes) out.amplitudes.emplace(ket, amp * scale);
    return out;
}

Amplitude inner_product(const QuantumState &a, const QuantumState &b) {
    require_same_shape(a, b, "inner_product");
    Amplitude total{};
    const auto &small = a.amplitudes.size() <= b.amplitudes.size() ? a.amplitudes : b.amplitudes;
    const auto &large = &small == &a.amplitudes ? b.amplitudes : a.amplitudes;
    for (const auto &[ket, amp] : small) {
        auto it = large.find(ket);
        if (it == large.end()) continue;
        total += &small == &a.amplitudes ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return total;
}

double fidelity(const QuantumState &psi, const QuantumState &target) {
    require_same_shape(psi, target, "fidelity");
    double np = psi.norm_squared();
    double nt = target.norm_squared();
    if (!(np > 0.0) || !(nt > 0.0)) return 0.0;
    double f = std::norm(inner_product(target, psi)) / (np * nt);
    return std::min(1.0, std::max(0.0, f));
}

QuantumState conjugate(const QuantumState &state) {
    QuantumState out(state.dims);
    for (const auto &[ket, amp] : state.amplitudes) out.amplitudes.emplace(ket, std::conj(amp));
    return out;
}

bool approx_equal(const QuantumState &a, const QuantumState &b, double tol) {
    if (a.dims != b.dims) return false;
    for (const auto &[ket, amp] : a.amplitudes) {
        if (std::abs(amp - b.amplitude(ket)) > tol) return false;
    }
    for (const auto &[ket, amp] : b.amplitudes) {
        if (std::abs(amp - a.amplitude(ket)) > tol) return false;
    }
    return true;
}

}  // namespace qgraph
