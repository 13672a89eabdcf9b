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

#include "backflow/circuit.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "backflow/backflow_state.hpp"

namespace backflow {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kFidelityFloor = 1.0 - 1e-10;

// RY has period 4pi.
double wrap_angle(double angle) {
    double out = std::fmod(angle, kFourPi);
    if (out < 0.0) {
        out += kFourPi;
    }
    return out;
}

double fidelity(const Statevector &state, std::span<const double> target) {
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        overlap += target[i] * state.amplitude(i);
    }
    return std::norm(overlap);
}

constexpr const char *kConvention =
    "RY(t) = exp(-i t Y/2) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]; qubit 0 = S1 is the "
    "most significant bit; CRY(control S2, target S1, t) applies RY(t) to S1 when S2 = 1 and "
    "is expanded as RY(t/2) on S1, CNOT(S2 -> S1), RY(-t/2) on S1, CNOT(S2 -> S1); the same "
    "rotation quoted in the opposite sense has angle 4pi - t";

} // namespace

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxStatevectorQubits) {
        throw InvalidArgument("circuit needs between 1 and " +
                              std::to_string(kMaxStatevectorQubits) + " qubits");
    }
}

Circuit &Circuit::append(const Gate &gate) {
    gate.validate(n_qubits_);
    gates_.push_back(gate);
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw InvalidArgument("cannot concatenate circuits on different registers");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

Statevector run_circuit(const Circuit &circuit, Statevector state) {
    if (state.n_qubits() != circuit.n_qubits()) {
        throw InvalidArgument("circuit and state have different qubit counts");
    }
    for (const Gate &g : circuit.gates()) {
        state.apply(g);
    }
    return state;
}

Statevector simulate(const Circuit &circuit) {
    return run_circuit(circuit, Statevector::basis(circuit.n_qubits(), 0));
}

MeasurementSetting::MeasurementSetting(std::vector<Basis> bases) : bases_(std::move(bases)) {
    if (bases_.empty() || bases_.size() > kMaxPauliQubits) {
        throw InvalidArgument("measurement setting needs between 1 and 63 qubits");
    }
}

MeasurementSetting MeasurementSetting::uniform(std::size_t n_qubits, Basis basis) {
    return MeasurementSetting(std::vector<Basis>(n_qubits, basis));
}

MeasurementSetting MeasurementSetting::from_word(std::string_view word) {
    std::vector<Basis> bases;
    bases.reserve(word.size());
    for (char c : word) {
        if (c == 'X') {
            bases.push_back(Basis::X);
        } else if (c == 'Z') {
            bases.push_back(Basis::Z);
        } else {
            throw InvalidArgument("basis word '" + std::string(word) +
                                  "' may only contain X and Z");
        }
    }
    return MeasurementSetting(std::move(bases));
}

std::string MeasurementSetting::word() const {
    std::string out;
    out.reserve(bases_.size());
    for (Basis b : bases_) {
        out += b == Basis::X ? 'X' : 'Z';
    }
    return out;
}

bool MeasurementSetting::accepts(const PauliString &term) const {
    if (term.n_qubits() != bases_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < bases_.size(); ++i) {
        switch (term.letter(i)) {
        case Pauli::I:
            break;
        case Pauli::X:
            if (bases_[i] != Basis::X) {
                return false;
            }
            break;
        case Pauli::Z:
            if (bases_[i] != Basis::Z) {
                return false;
            }
            break;
        case Pauli::Y:
            return false;
        }
    }
    return true;
}

PreparationCircuit synthesize_preparation(std::span<const double> target, bool expand_controlled) {
    double norm2 = 0.0;
    for (double a : target) {
        if (!std::isfinite(a)) {
            throw InvalidArgument("target amplitudes must be finite");
        }
        norm2 += a * a;
    }
    if (std::fabs(norm2 - 1.0) > 1e-9) {
        throw InvalidArgument("target amplitudes are not normalized");
    }

    PreparationCircuit out{Circuit(target.size() == 4 ? 2 : 1), {}, kConvention};
    if (target.size() == 2) {
        const double alpha = wrap_angle(2.0 * std::atan2(target[1], target[0]));
        out.circuit.append(Gate::ry(0, alpha));
        out.angles = {alpha};
    } else if (target.size() == 4) {
        if (std::fabs(target[0b10]) > 1e-12) {
            throw InvalidArgument("the two-qubit preparation circuit cannot reach a state with "
                                  "weight on |10>");
        }
        // After RY(alpha0) and CNOT(S1 -> S2): cos(alpha0/2)|00> + s|11> with
        // s = sin(alpha0/2). The controlled RY then splits s|11> into
        // -s sin(theta/2)|01> + s cos(theta/2)|11>. We take the branch s <= 0.
        const double s = -std::hypot(target[0b01], target[0b11]);
        const double alpha0 = wrap_angle(2.0 * std::atan2(s, target[0b00]));
        const double theta = s == 0.0
                                 ? 0.0
                                 : wrap_angle(2.0 * std::atan2(-target[0b01] / s, target[0b11] / s));
        out.circuit.append(Gate::ry(0, alpha0));
        out.circuit.append(Gate::cnot(0, 1));
        if (expand_controlled) {
            out.circuit.append(Gate::ry(0, theta / 2.0));
            out.circuit.append(Gate::cnot(1, 0));
            out.circuit.append(Gate::ry(0, -theta / 2.0));
            out.circuit.append(Gate::cnot(1, 0));
        } else {
            out.circuit.append(Gate::cry(1, 0, theta));
        }
        out.angles = {alpha0, theta};
    } else {
        throw InvalidArgument("circuit synthesis supports one or two qubits; load larger states "
                              "with init_amplitudes");
    }

    const double f = fidelity(simulate(out.circuit), target);
    if (f < kFidelityFloor) {
        throw InternalError("synthesized preparation reaches fidelity " + std::to_string(f));
    }
    return out;
}

PreparationCircuit prepare_backflow(std::size_t n_qubits, bool expand_controlled) {
    if (n_qubits != 1 && n_qubits != 2) {
        throw InvalidArgument("gate synthesis of the backflowing state supports N = 1 or 2, got " +
                              std::to_string(n_qubits));
    }
    const auto coeffs = backflow_coefficients(n_qubits);
    return synthesize_preparation(coeffs.a, expand_controlled);
}

Circuit prepare_backflow_circuit(std::size_t n_qubits) {
    return prepare_backflow(n_qubits).circuit;
}

Circuit measurement_circuit(const MeasurementSetting &setting) {
    Circuit out(setting.n_qubits());
    for (std::size_t q = 0; q < setting.n_qubits(); ++q) {
        if (setting.basis(q) == Basis::X) {
            out.append(Gate::h(q));
        }
    }
    return out;
}

MeasurementSetting setting_for(const PauliString &term) {
    std::vector<Basis> bases(term.n_qubits(), Basis::Z);
    for (std::size_t q = 0; q < term.n_qubits(); ++q) {
        const Pauli p = term.letter(q);
        if (p == Pauli::Y) {
            throw InvalidArgument("no single-basis setting measures the Y letter of " +
                                  term.word());
        }
        if (p == Pauli::X) {
            bases[q] = Basis::X;
        }
    }
    return MeasurementSetting(std::move(bases));
}

std::vector<SettingGroup> group_terms(const WeightedPauliSum &sum) {
    const std::size_t n = sum.n_qubits();
    std::vector<PauliString> z_free;
    std::vector<std::vector<PauliString>> by_z_position(n);
    for (const auto &term : sum.terms()) {
        if (term.count(Pauli::Y) > 0) {
            throw InvalidArgument("grouping does not support Y letters (" + term.word() + ")");
        }
        const std::size_t zs = term.count(Pauli::Z);
        if (zs > 1) {
            throw InvalidArgument("grouping supports at most one Z letter (" + term.word() + ")");
        }
        if (zs == 0) {
            z_free.push_back(term);
            continue;
        }
        const auto position =
            static_cast<std::size_t>(std::countl_zero(term.z_mask())) - (64 - n);
        by_z_position[position].push_back(term);
    }

    std::vector<SettingGroup> out;
    if (!z_free.empty()) {
        out.push_back({MeasurementSetting::uniform(n, Basis::X), std::move(z_free)});
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (by_z_position[p].empty()) {
            continue;
        }
        std::vector<Basis> bases(n, Basis::X);
        bases[p] = Basis::Z;
        out.push_back({MeasurementSetting(std::move(bases)), std::move(by_z_position[p])});
    }
    return out;
}

std::vector<SettingGroup> per_term_settings(const WeightedPauliSum &sum) {
    std::vector<SettingGroup> out;
    out.reserve(sum.size());
    for (const auto &term : sum.terms()) {
        out.push_back({setting_for(term), {term}});
    }
    return out;
}

int parity_sign(const PauliString &term, std::uint64_t outcome) {
    return (std::popcount(term.support_mask() & outcome) & 1) ? -1 : 1;
}

int parity_sign(const PauliString &term, std::string_view outcome_bits) {
    return parity_sign(term, parse_bitstring(outcome_bits, term.n_qubits()));
}

} // namespace backflow
