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

#include "backflow/backflow_state.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "backflow/errors.hpp"

namespace backflow {

namespace {

// 2^N amplitudes of doubles; well beyond anything the engine can hold.
constexpr std::size_t kMaxCoefficientQubits = 30;

} // namespace

BackflowCoefficients backflow_coefficients(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxCoefficientQubits) {
        throw InvalidArgument("backflow state needs between 1 and 30 qubits, got " +
                              std::to_string(n_qubits));
    }
    const double p = std::ldexp(1.0, static_cast<int>(n_qubits));
    const double denom = std::sqrt((2.0 * p + 1.0) * (p - 1.0) * (p / 2.0));
    BackflowCoefficients out{n_qubits, std::vector<double>(static_cast<std::size_t>(p))};
    for (std::size_t m = 0; m < out.a.size(); ++m) {
        out.a[m] = (3.0 * static_cast<double>(m) - 2.0 * (p - 1.0)) / denom;
    }
    return out;
}

double exact_current(std::span<const std::complex<double>> coeffs, double theta0) {
    if (coeffs.empty() || !std::has_single_bit(coeffs.size())) {
        throw InvalidArgument("coefficient array length must be a power of two");
    }
    if (!std::isfinite(theta0)) {
        throw InvalidArgument("theta0 must be finite");
    }
    double norm2 = 0.0;
    for (const auto &a : coeffs) {
        norm2 += std::norm(a);
    }
    if (!(std::fabs(norm2 - 1.0) <= 1e-9)) {
        throw InvalidArgument("coefficients are not normalized (sum |a|^2 = " +
                              std::to_string(norm2) + ")");
    }
    // sum_{m,n} conj(a_m) n a_n e^{i(n-m)theta0}
    //   = conj(sum_m a_m e^{i m theta0}) * (sum_n n a_n e^{i n theta0})
    // Both sums cancel heavily for backflowing states, hence long double.
    std::complex<long double> left = 0.0L;
    std::complex<long double> right = 0.0L;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        const long double md = static_cast<long double>(m);
        std::complex<long double> term(coeffs[m].real(), coeffs[m].imag());
        if (theta0 != 0.0) {
            term *= std::polar(1.0L, md * static_cast<long double>(theta0));
        }
        left += term;
        right += md * term;
    }
    const long double j = (std::conj(left) * right).real() / (2.0L * std::numbers::pi_v<long double>);
    return static_cast<double>(j);
}

double exact_current(std::span<const double> coeffs, double theta0) {
    std::vector<std::complex<double>> c(coeffs.begin(), coeffs.end());
    return exact_current(std::span<const std::complex<double>>(c), theta0);
}

double closed_form_current(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > 60) {
        throw InvalidArgument("closed-form current is evaluated for 1 <= N <= 60");
    }
    const long double p = std::ldexp(1.0L, static_cast<int>(n_qubits));
    return static_cast<double>(-(p * (p - 1.0L) / (2.0L * p + 1.0L)) /
                               (4.0L * std::numbers::pi_v<long double>));
}

double relative_error(double observed, double theory) {
    if (theory == 0.0) {
        throw InvalidArgument("relative error against a zero reference");
    }
    return std::fabs(observed - theory) / std::fabs(theory);
}

} // namespace backflow
