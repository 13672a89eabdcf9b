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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "backflow/pauli.hpp"

namespace backflow {

using Complex = std::complex<double>;

/// Largest register the engine will allocate (2^30 amplitudes = 16 GiB).
inline constexpr std::size_t kMaxStatevectorQubits = 30;

/// Name of the generator behind sample(); recorded in experiment reports.
inline constexpr std::string_view kRngName = "mt19937_64";

enum class GateKind { RY, H, X, Z, CNOT, CRY };

std::string_view gate_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);

/// One gate of a circuit. Qubit 0 is S1, the most significant bit of the
/// basis index. RY(theta) = [[cos theta/2, -sin theta/2], [sin theta/2, cos theta/2]].
struct Gate {
    GateKind kind;
    std::size_t target;
    std::optional<std::size_t> control;
    double angle = 0.0;

    static Gate ry(std::size_t target, double angle) { return {GateKind::RY, target, {}, angle}; }
    static Gate h(std::size_t target) { return {GateKind::H, target, {}, 0.0}; }
    static Gate x(std::size_t target) { return {GateKind::X, target, {}, 0.0}; }
    static Gate z(std::size_t target) { return {GateKind::Z, target, {}, 0.0}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control, 0.0};
    }
    static Gate cry(std::size_t control, std::size_t target, double angle) {
        return {GateKind::CRY, target, control, angle};
    }

    [[nodiscard]] bool is_controlled() const noexcept {
        return kind == GateKind::CNOT || kind == GateKind::CRY;
    }

    /// Throws InvalidArgument if indices fall outside n_qubits or the
    /// control/target structure is inconsistent with the kind.
    void validate(std::size_t n_qubits) const;

    bool operator==(const Gate &) const = default;
};

class Statevector {
  public:
    /// |index> on n_qubits.
    static Statevector basis(std::size_t n_qubits, std::uint64_t index);

    /// Loads amplitudes and rescales them to unit norm. Throws on a wrong
    /// length, non-finite entries or the zero vector.
    static Statevector from_amplitudes(std::size_t n_qubits, std::span<const Complex> amps);
    static Statevector from_amplitudes(std::size_t n_qubits, std::span<const double> amps);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Complex amplitude(std::uint64_t index) const { return amps_.at(index); }
    [[nodiscard]] double norm_squared() const noexcept;

    /// In-place gate application via strided amplitude-pair updates.
    void apply(const Gate &gate);

  private:
    Statevector(std::size_t n_qubits, std::vector<Complex> amps)
        : n_qubits_(n_qubits), amps_(std::move(amps)) {}

    void check_norm(const char *context) const;

    std::size_t n_qubits_;
    std::vector<Complex> amps_;
};

Statevector init_basis(std::size_t n_qubits, std::uint64_t index);
Statevector init_amplitudes(std::size_t n_qubits, std::span<const Complex> amps);
Statevector apply_gate(Statevector state, const Gate &gate);

/// <psi|P|psi> for a single string with unit weight (the string's own
/// coefficient is ignored), by direct application of the string.
Complex expectation_string(const Statevector &state, const PauliString &term);

/// <psi|V_k|psi> for every term of `sum`, in term order.
///
/// Terms are grouped by Z mask. Small groups apply each string directly;
/// large groups get every X-mask correlation at once from a Walsh-Hadamard
/// transform, which keeps the 2^N + N 2^{N-1} - 1 term current tractable.
std::vector<double> term_expectations(const Statevector &state, const WeightedPauliSum &sum);

/// lambda0 + sum_k lambda_k <V_k>.
double expectation_pauli(const Statevector &state, const WeightedPauliSum &sum);

std::vector<double> z_probabilities(const Statevector &state);

/// Bitstring of a basis index, S1 first.
std::string to_bitstring(std::uint64_t index, std::size_t n_qubits);
std::uint64_t parse_bitstring(std::string_view bits, std::size_t n_qubits);

struct OutcomeCounts {
    std::size_t n_qubits = 0;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> counts; // basis index -> count

    /// counts / shots.
    [[nodiscard]] std::map<std::uint64_t, double> frequencies() const;
};

/// Multinomial Z-basis sampling, reproducible for a given seed. Each
/// outcome bit is then flipped independently with probability readout_flip.
OutcomeCounts sample(const Statevector &state, std::uint64_t shots, std::uint64_t seed,
                     double readout_flip = 0.0);

/// Same draw from an explicit distribution over 2^n_qubits outcomes.
OutcomeCounts sample_distribution(std::span<const double> probabilities, std::size_t n_qubits,
                                  std::uint64_t shots, std::uint64_t seed,
                                  double readout_flip = 0.0);

/// Deterministic per-task seed derived from a base seed and a task index.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

} // namespace backflow
