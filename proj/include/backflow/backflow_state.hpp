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
#include <span>
#include <vector>

namespace backflow {

/// Amplitudes a_m (m = 0 .. 2^N - 1) of the backflowing state:
///     a_m = (3m - 2(2^N - 1)) / sqrt((2^{N+1} + 1)(2^N - 1) 2^{N-1}).
/// They are affine in m and normalized.
struct BackflowCoefficients {
    std::size_t n_qubits = 0;
    std::vector<double> a;
};

BackflowCoefficients backflow_coefficients(std::size_t n_qubits);

/// Probability current at angle theta0 on the ring for a state with
/// angular-momentum amplitudes `coeffs` (index = m):
///     J = (1/2pi) Re sum_{m,n} conj(a_m) n a_n e^{i(n-m) theta0}.
/// Evaluated as a product of two single sums. Rejects arrays whose norm
/// differs from 1 by more than 1e-9 or whose length is not a power of two.
double exact_current(std::span<const std::complex<double>> coeffs, double theta0 = 0.0);
double exact_current(std::span<const double> coeffs, double theta0 = 0.0);

/// J = -(1/4pi) 2^N (2^N - 1) / (2^{N+1} + 1) for the backflowing state.
double closed_form_current(std::size_t n_qubits);

/// |observed - theory| / |theory|; throws InvalidArgument when theory == 0.
double relative_error(double observed, double theory);

} // namespace backflow
