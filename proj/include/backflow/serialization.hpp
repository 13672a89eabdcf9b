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

#include <string>

#include "json.hpp"

#include "backflow/circuit.hpp"
#include "backflow/experiment.hpp"
#include "backflow/pauli.hpp"
#include "backflow/statevector.hpp"

namespace backflow {

using Json = nlohmann::ordered_json;

/// {"n", "lambda0", "terms": [{"coeff", "word"}]}
Json sum_to_json(const WeightedPauliSum &sum);
WeightedPauliSum sum_from_json(const Json &j);

/// {"shots", "counts": {"bitstring": n}}, bitstrings S1 first.
Json counts_to_json(const OutcomeCounts &counts);

/// [{"kind", "target", "control"?, "angle"?}]
Json circuit_to_json(const Circuit &circuit);
Circuit circuit_from_json(std::size_t n_qubits, const Json &j);

Json report_to_json(const ExperimentReport &report);

/// Reads {n, settings: [{basis_word, probabilities | counts, shots?, terms?}]}
/// or {n, expectations: [{word, value}]}. Counts are normalized and their
/// total becomes the shot count. Throws DataError on malformed input.
MeasuredData measured_data_from_json(const Json &j);
MeasuredData load_measured_data(const std::string &path);

/// One row per term: word,lambda,setting,expectation,standard_error.
std::string report_to_csv(const ExperimentReport &report);

} // namespace backflow
