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

#include "backflow/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace backflow {

namespace {

constexpr double kNormDriftLimit = 1e-9;
constexpr double kImaginaryResidueLimit = 1e-10;

void check_register_size(std::size_t n_qubits) {
    if (n_qubits < 1) {
        throw InvalidArgument("statevector needs at least one qubit");
    }
    if (n_qubits > kMaxStatevectorQubits) {
        throw DimensionTooLarge("statevector is limited to " +
                                std::to_string(kMaxStatevectorQubits) + " qubits, got " +
                                std::to_string(n_qubits));
    }
}

std::uint64_t qubit_bit(std::size_t n_qubits, std::size_t qubit) {
    return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

// Real 2x2 matrix applied to every (i0, i1) pair of the target qubit whose
// control bit (if any) is set.
void apply_real_2x2(std::vector<Complex> &amps, std::uint64_t target_bit,
                    std::uint64_t control_bit, double m00, double m01, double m10, double m11) {
    const std::uint64_t dim = amps.size();
    for (std::uint64_t base = 0; base < dim; base += 2 * target_bit) {
        for (std::uint64_t k = 0; k < target_bit; ++k) {
            const std::uint64_t i0 = base + k;
            if ((i0 & control_bit) != control_bit) {
                continue;
            }
            const std::uint64_t i1 = i0 | target_bit;
            const Complex a0 = amps[i0];
            const Complex a1 = amps[i1];
            amps[i0] = m00 * a0 + m01 * a1;
            amps[i1] = m10 * a0 + m11 * a1;
        }
    }
}

void swap_pairs(std::vector<Complex> &amps, std::uint64_t target_bit, std::uint64_t control_bit) {
    const std::uint64_t dim = amps.size();
    for (std::uint64_t base = 0; base < dim; base += 2 * target_bit) {
        for (std::uint64_t k = 0; k < target_bit; ++k) {
            const std::uint64_t i0 = base + k;
            if ((i0 & control_bit) == control_bit) {
                std::swap(amps[i0], amps[i0 | target_bit]);
            }
        }
    }
}

// Unnormalized in-place Walsh-Hadamard transform.
template <class T> void walsh_hadamard(std::vector<T> &v) {
    const std::size_t dim = v.size();
    for (std::size_t half = 1; half < dim; half <<= 1) {
        for (std::size_t base = 0; base < dim; base += 2 * half) {
            for (std::size_t k = base; k < base + half; ++k) {
                const T a = v[k];
                const T b = v[k + half];
                v[k] = a + b;
                v[k + half] = a - b;
            }
        }
    }
}

Complex i_power(int y) {
    switch (y & 3) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

double sign_of(std::uint64_t z_mask, std::uint64_t index) {
    return (std::popcount(z_mask & index) & 1) ? -1.0 : 1.0;
}

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::RY:
        return "RY";
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    case GateKind::Z:
        return "Z";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CRY:
        return "CRY";
    }
    return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
    for (GateKind k : {GateKind::RY, GateKind::H, GateKind::X, GateKind::Z, GateKind::CNOT,
                       GateKind::CRY}) {
        if (gate_name(k) == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown gate kind '" + std::string(name) + "'");
}

void Gate::validate(std::size_t n_qubits) const {
    if (target >= n_qubits) {
        throw InvalidArgument("gate target " + std::to_string(target) + " out of range for " +
                              std::to_string(n_qubits) + " qubits");
    }
    if (is_controlled() != control.has_value()) {
        throw InvalidArgument(std::string(gate_name(kind)) +
                              (is_controlled() ? " needs a control qubit" : " takes no control"));
    }
    if (control) {
        if (*control >= n_qubits) {
            throw InvalidArgument("gate control out of range");
        }
        if (*control == target) {
            throw InvalidArgument("gate control equals target");
        }
    }
    if (!std::isfinite(angle)) {
        throw InvalidArgument("gate angle must be finite");
    }
}

Statevector Statevector::basis(std::size_t n_qubits, std::uint64_t index) {
    check_register_size(n_qubits);
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    if (index >= dim) {
        throw InvalidArgument("basis index " + std::to_string(index) + " out of range for " +
                              std::to_string(n_qubits) + " qubits");
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return {n_qubits, std::move(amps)};
}

Statevector Statevector::from_amplitudes(std::size_t n_qubits, std::span<const Complex> amps) {
    check_register_size(n_qubits);
    if (amps.size() != (std::size_t{1} << n_qubits)) {
        throw InvalidArgument("expected " + std::to_string(std::size_t{1} << n_qubits) +
                              " amplitudes, got " + std::to_string(amps.size()));
    }
    double norm2 = 0.0;
    for (const Complex &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw InvalidArgument("amplitudes must be finite");
        }
        norm2 += std::norm(a);
    }
    if (norm2 == 0.0) {
        throw InvalidArgument("cannot normalize the zero vector");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    std::vector<Complex> out(amps.begin(), amps.end());
    for (Complex &a : out) {
        a *= scale;
    }
    return {n_qubits, std::move(out)};
}

Statevector Statevector::from_amplitudes(std::size_t n_qubits, std::span<const double> amps) {
    std::vector<Complex> c(amps.begin(), amps.end());
    return from_amplitudes(n_qubits, c);
}

double Statevector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const Complex &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

void Statevector::check_norm(const char *context) const {
    const double drift = std::fabs(norm_squared() - 1.0);
    if (drift > kNormDriftLimit) {
        throw InternalError(std::string("norm drift ") + std::to_string(drift) + " after " +
                            context);
    }
}

void Statevector::apply(const Gate &gate) {
    gate.validate(n_qubits_);
    const std::uint64_t t = qubit_bit(n_qubits_, gate.target);
    const std::uint64_t c = gate.control ? qubit_bit(n_qubits_, *gate.control) : 0;
    switch (gate.kind) {
    case GateKind::RY:
    case GateKind::CRY: {
        const double co = std::cos(gate.angle / 2);
        const double si = std::sin(gate.angle / 2);
        apply_real_2x2(amps_, t, c, co, -si, si, co);
        break;
    }
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        apply_real_2x2(amps_, t, 0, r, r, r, -r);
        break;
    }
    case GateKind::X:
    case GateKind::CNOT:
        swap_pairs(amps_, t, c);
        break;
    case GateKind::Z:
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (i & t) {
                amps_[i] = -amps_[i];
            }
        }
        break;
    }
    check_norm(gate_name(gate.kind).data());
}

Statevector init_basis(std::size_t n_qubits, std::uint64_t index) {
    return Statevector::basis(n_qubits, index);
}

Statevector init_amplitudes(std::size_t n_qubits, std::span<const Complex> amps) {
    return Statevector::from_amplitudes(n_qubits, amps);
}

Statevector apply_gate(Statevector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

namespace {

using Wide = std::complex<long double>;

Wide wide_phase(const PauliString &term) {
    const Complex p = i_power(std::popcount(term.x_mask() & term.z_mask()));
    return {p.real(), p.imag()};
}

// <psi|P|psi> without rounding back to double.
Wide string_expectation_wide(std::span<const Complex> amps, const PauliString &term) {
    const std::uint64_t x = term.x_mask();
    const std::uint64_t z = term.z_mask();
    Wide acc = 0.0L;
    for (std::uint64_t j = 0; j < amps.size(); ++j) {
        const Wide left(amps[j ^ x].real(), -amps[j ^ x].imag());
        const Wide right(amps[j].real(), amps[j].imag());
        acc += left * (static_cast<long double>(sign_of(z, j)) * right);
    }
    return wide_phase(term) * acc;
}

long double real_checked(Wide value, const PauliString &term) {
    if (std::fabs(static_cast<double>(value.imag())) > kImaginaryResidueLimit) {
        throw InternalError("expectation of " + term.word() + " has imaginary residue " +
                            std::to_string(static_cast<double>(value.imag())));
    }
    return value.real();
}

// The current's weights reach 2^N and its terms cancel heavily, so values
// stay in extended precision until the weighted sum is formed.
std::vector<long double> term_values_wide(const Statevector &state, const WeightedPauliSum &sum) {
    if (sum.n_qubits() != state.n_qubits()) {
        throw InvalidArgument("operator acts on " + std::to_string(sum.n_qubits()) +
                              " qubits but the state has " + std::to_string(state.n_qubits()));
    }
    const auto terms = sum.terms();
    std::map<std::uint64_t, std::vector<std::size_t>> by_z;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        by_z[terms[k].z_mask()].push_back(k);
    }

    std::vector<long double> out(terms.size());
    const auto amps = state.amplitudes();
    const std::size_t dim = amps.size();
    std::vector<Wide> conj_spectrum;

    for (const auto &[z, members] : by_z) {
        if (members.size() <= state.n_qubits()) {
            for (std::size_t k : members) {
                out[k] = real_checked(string_expectation_wide(amps, terms[k]), terms[k]);
            }
            continue;
        }
        if (conj_spectrum.empty()) {
            conj_spectrum.resize(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                conj_spectrum[j] = Wide(amps[j].real(), -amps[j].imag());
            }
            walsh_hadamard(conj_spectrum);
        }
        // corr[x] = sum_k conj(psi_k) (-1)^{z.(k^x)} psi_{k^x}: an XOR
        // convolution, diagonal in the Walsh-Hadamard basis.
        std::vector<Wide> corr(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            corr[j] = static_cast<long double>(sign_of(z, j)) * Wide(amps[j].real(), amps[j].imag());
        }
        walsh_hadamard(corr);
        for (std::size_t j = 0; j < dim; ++j) {
            corr[j] *= conj_spectrum[j];
        }
        walsh_hadamard(corr);
        const long double inv_dim = 1.0L / static_cast<long double>(dim);
        for (std::size_t k : members) {
            const PauliString &t = terms[k];
            out[k] = real_checked(wide_phase(t) * (corr[t.x_mask()] * inv_dim), t);
        }
    }
    return out;
}

} // namespace

Complex expectation_string(const Statevector &state, const PauliString &term) {
    if (term.n_qubits() != state.n_qubits()) {
        throw InvalidArgument("Pauli string and state act on different qubit counts");
    }
    const Wide v = string_expectation_wide(state.amplitudes(), term);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

std::vector<double> term_expectations(const Statevector &state, const WeightedPauliSum &sum) {
    const auto wide = term_values_wide(state, sum);
    return {wide.begin(), wide.end()};
}

double expectation_pauli(const Statevector &state, const WeightedPauliSum &sum) {
    if (sum.n_qubits() != state.n_qubits()) {
        throw InvalidArgument("operator acts on " + std::to_string(sum.n_qubits()) +
                              " qubits but the state has " + std::to_string(state.n_qubits()));
    }
    const auto terms = sum.terms();
    std::map<std::uint64_t, std::vector<std::size_t>> by_z;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        by_z[terms[k].z_mask()].push_back(k);
    }
    const auto amps = state.amplitudes();
    const std::size_t dim = amps.size();
    std::vector<Wide> conj_spectrum;
    Wide acc = static_cast<long double>(sum.identity_weight());

    // sum_x w_x corr[x] = (1/dim) sum_j WHT(w)_j P_j with P the pointwise
    // spectrum product. Transforming the weights rather than the
    // correlations avoids a second transform of the data, which would cost
    // several digits at large N.
    for (const auto &[z, members] : by_z) {
        if (members.size() <= state.n_qubits()) {
            for (std::size_t k : members) {
                acc += static_cast<long double>(terms[k].coefficient()) *
                       string_expectation_wide(amps, terms[k]);
            }
            continue;
        }
        if (conj_spectrum.empty()) {
            conj_spectrum.resize(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                conj_spectrum[j] = Wide(amps[j].real(), -amps[j].imag());
            }
            walsh_hadamard(conj_spectrum);
        }
        std::vector<Wide> spectrum(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            spectrum[j] = static_cast<long double>(sign_of(z, j)) * Wide(amps[j].real(), amps[j].imag());
        }
        walsh_hadamard(spectrum);
        std::vector<Wide> weights(dim);
        for (std::size_t k : members) {
            weights[terms[k].x_mask()] +=
                static_cast<long double>(terms[k].coefficient()) * wide_phase(terms[k]);
        }
        walsh_hadamard(weights);
        Wide group = 0.0L;
        for (std::size_t j = 0; j < dim; ++j) {
            group += weights[j] * (conj_spectrum[j] * spectrum[j]);
        }
        acc += group / static_cast<long double>(dim);
    }
    if (std::fabs(static_cast<double>(acc.imag())) >
        kImaginaryResidueLimit * std::max(1.0, std::fabs(static_cast<double>(acc.real())))) {
        throw InternalError("expectation has imaginary residue " +
                            std::to_string(static_cast<double>(acc.imag())));
    }
    return static_cast<double>(acc.real());
}

std::vector<double> z_probabilities(const Statevector &state) {
    std::vector<double> out(state.dim());
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::norm(amps[i]);
    }
    return out;
}

std::string to_bitstring(std::uint64_t index, std::size_t n_qubits) {
    std::string out(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if (index & qubit_bit(n_qubits, q)) {
            out[q] = '1';
        }
    }
    return out;
}

std::uint64_t parse_bitstring(std::string_view bits, std::size_t n_qubits) {
    if (bits.size() != n_qubits) {
        throw InvalidArgument("bitstring '" + std::string(bits) + "' does not have " +
                              std::to_string(n_qubits) + " bits");
    }
    std::uint64_t index = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw InvalidArgument("bitstring '" + std::string(bits) + "' has a non-binary digit");
        }
        index = (index << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return index;
}

std::map<std::uint64_t, double> OutcomeCounts::frequencies() const {
    std::map<std::uint64_t, double> out;
    for (const auto &[index, n] : counts) {
        out[index] = static_cast<double>(n) / static_cast<double>(shots);
    }
    return out;
}

OutcomeCounts sample(const Statevector &state, std::uint64_t shots, std::uint64_t seed,
                     double readout_flip) {
    const auto probs = z_probabilities(state);
    return sample_distribution(probs, state.n_qubits(), shots, seed, readout_flip);
}

OutcomeCounts sample_distribution(std::span<const double> probabilities, std::size_t n_qubits,
                                  std::uint64_t shots, std::uint64_t seed, double readout_flip) {
    if (shots < 1) {
        throw InvalidArgument("shots must be at least 1");
    }
    if (!(readout_flip >= 0.0 && readout_flip < 0.5)) {
        throw InvalidArgument("readout flip probability must lie in [0, 0.5)");
    }
    if (probabilities.size() != (std::size_t{1} << n_qubits)) {
        throw InvalidArgument("distribution length does not match the qubit count");
    }
    std::vector<double> cdf(probabilities.size());
    double total = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (!(probabilities[i] >= 0.0) || !std::isfinite(probabilities[i])) {
            throw InvalidArgument("probabilities must be finite and nonnegative");
        }
        total += probabilities[i];
        cdf[i] = total;
    }
    if (total <= 0.0) {
        throw InvalidArgument("distribution has zero total mass");
    }

    std::mt19937_64 rng(seed);
    OutcomeCounts out{n_qubits, shots, {}};
    const std::uint64_t last = probabilities.size() - 1;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform01(rng) * total;
        auto index = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                                cdf.begin());
        index = std::min(index, last);
        if (readout_flip > 0.0) {
            for (std::size_t q = 0; q < n_qubits; ++q) {
                if (uniform01(rng) < readout_flip) {
                    index ^= qubit_bit(n_qubits, q);
                }
            }
        }
        ++out.counts[index];
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    // splitmix64 finalizer
    std::uint64_t z = base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace backflow
