// Copyright 2026 The qbackflow Authors
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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "backflow/pauli.hpp"
#include "backflow/statevector.hpp"

namespace backflow {

/// Ordered gate list on a fixed register.
class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }
    [[nodiscard]] bool empty() const noexcept { return gates_.empty(); }

    /// Validates the gate against the register before appending.
    Circuit &append(const Gate &gate);
    Circuit &append(const Circuit &other);

    bool operator==(const Circuit &) const = default;

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
};

/// Applies every gate of `circuit` to `state` in order.
Statevector run_circuit(const Circuit &circuit, Statevector state);

/// Runs `circuit` on |0...0>.
Statevector simulate(const Circuit &circuit);

enum class Basis : std::uint8_t { Z, X };

/// Per-qubit measurement basis. X positions get a Hadamard before the
/// Z-basis readout.
class MeasurementSetting {
  public:
    explicit MeasurementSetting(std::vector<Basis> bases);
    static MeasurementSetting uniform(std::size_t n_qubits, Basis basis);
    /// Parses a word over {X, Z}, S1 first.
    static MeasurementSetting from_word(std::string_view word);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return bases_.size(); }
    [[nodiscard]] Basis basis(std::size_t position) const { return bases_.at(position); }
    [[nodiscard]] std::string word() const;

    /// Every X letter sits on an X position and every Z letter on a Z
    /// position; identities are free. Y letters are never assignable.
    [[nodiscard]] bool accepts(const PauliString &term) const;

    auto operator<=>(const MeasurementSetting &) const = default;

  private:
    std::vector<Basis> bases_;
};

/// A setting together with the terms estimated from its outcomes.
struct SettingGroup {
    MeasurementSetting setting;
    std::vector<PauliString> terms;
};

/// A synthesized state-preparation circuit and the analytic angles behind it.
struct PreparationCircuit {
    Circuit circuit;
    /// N = 1: {alpha}. N = 2: {alpha0, theta1} where theta1 is the angle of
    /// the controlled RY in this library's RY convention.
    std::vector<double> angles;
    /// Human-readable statement of the rotation and control conventions.
    std::string convention;
};

/// Synthesizes a circuit preparing the real amplitudes `target` (length 2 or
/// 4) from |0...0>. The two-qubit path is RY(alpha0) on S1, CNOT(S1 -> S2)
/// and a controlled RY on S1 controlled by S2, which requires
/// target[0b10] == 0. Angles are normalized to [0, 4pi). With
/// expand_controlled the controlled RY becomes RY(theta/2), CNOT,
/// RY(-theta/2), CNOT.
PreparationCircuit synthesize_preparation(std::span<const double> target,
                                          bool expand_controlled = true);

/// Preparation circuit for the backflowing state; N must be 1 or 2.
PreparationCircuit prepare_backflow(std::size_t n_qubits, bool expand_controlled = true);
Circuit prepare_backflow_circuit(std::size_t n_qubits);

/// One Hadamard per X-basis position.
Circuit measurement_circuit(const MeasurementSetting &setting);

/// Setting that measures exactly the letters of `term`: X positions in the
/// X basis, everything else in the Z basis.
MeasurementSetting setting_for(const PauliString &term);

/// Groups the terms of a sum whose strings are over {I, X, Z} with at most
/// one Z. The all-X setting takes every Z-free term; for each position p
/// that carries a Z somewhere, the setting with Z at p and X elsewhere takes
/// the terms whose Z sits at p. Settings are returned all-X first, then by
/// Z position. Throws InvalidArgument on Y letters or multiple Z letters.
std::vector<SettingGroup> group_terms(const WeightedPauliSum &sum);

/// One setting per term, in term order: one circuit per V_k.
std::vector<SettingGroup> per_term_settings(const WeightedPauliSum &sum);

/// (-1)^(sum of outcome bits on the non-identity positions of `term`).
int parity_sign(const PauliString &term, std::uint64_t outcome);
int parity_sign(const PauliString &term, std::string_view outcome_bits);

} // namespace backflow
