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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "backflow/backflow_state.hpp"
#include "backflow/circuit.hpp"
#include "backflow/pauli.hpp"

namespace backflow {

enum class RunMode { Exact, Shots, Ingest };

std::string_view mode_name(RunMode mode);
RunMode mode_from_name(std::string_view name);

inline constexpr std::uint64_t kDefaultShotsPerSetting = 8000;

struct TermRecord {
    std::string word;
    double lambda = 0.0;
    /// Basis word of the setting the estimate came from; empty when exact.
    std::string setting;
    double expectation = 0.0;
    /// sqrt((1 - <V>^2) / shots); absent when the shot count is unknown.
    std::optional<double> standard_error;
};

struct SettingRecord {
    std::string basis_word;
    std::vector<std::string> terms;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    /// Outcome index (S1 = most significant bit) -> probability.
    std::map<std::uint64_t, double> probabilities;
};

struct PreparationRecord {
    /// "circuit" (gate synthesis) or "amplitude_load".
    std::string method;
    std::vector<double> angles;
    std::string convention;
};

struct ExperimentReport {
    std::size_t n_qubits = 0;
    RunMode mode = RunMode::Exact;
    bool grouped = true;
    bool exact_probabilities = false;
    std::optional<std::uint64_t> shots_per_setting;
    std::optional<std::uint64_t> seed;
    std::string rng;
    double readout_flip = 0.0;
    /// Angle at which j_exact is evaluated. The decomposition, and hence
    /// j_estimate, always refers to theta0 = 0.
    double theta0 = 0.0;
    std::optional<PreparationRecord> preparation;
    double lambda0 = 0.0;
    std::vector<TermRecord> terms;
    std::vector<SettingRecord> settings;
    double j_estimate = 0.0;
    std::optional<double> j_standard_error;
    double j_exact = 0.0;
    double j_closed_form = 0.0;
    /// |j_estimate - j_closed_form| / |j_closed_form|.
    double relative_error = 0.0;
};

/// (lambda0 + sum_k lambda_k <V_k>) / (4 pi), summed in record order.
double assemble_current(double lambda0, std::span<const TermRecord> terms);

struct SimulationConfig {
    std::size_t n_qubits = 1;
    std::uint64_t shots_per_setting = kDefaultShotsPerSetting;
    std::uint64_t seed = 0;
    /// Grouped settings (at most N + 1 circuits) or one circuit per term.
    bool grouped = true;
    double readout_flip = 0.0;
    /// Use exact outcome probabilities instead of sampling (the
    /// infinite-shot limit). shots_per_setting is then ignored.
    bool exact_probabilities = false;
};

/// Prepares the backflowing state (gate synthesis for N <= 2, amplitude
/// load above), rotates into each measurement setting, samples, and
/// estimates every term from parity averages. Setting i is sampled with
/// derive_seed(seed, i).
ExperimentReport run_simulation(const SimulationConfig &config);

/// Exact per-term expectations of the backflowing state; j_exact is
/// evaluated at theta0. j_estimate is the extended-precision weighted sum
/// and can differ from re-summing the recorded (double) term values by
/// about 1e-7 at N = 16.
ExperimentReport run_exact(std::size_t n_qubits, double theta0 = 0.0);

/// Outcome distribution after an independent classical bit flip with
/// probability `flip` on every qubit.
std::map<std::uint64_t, double> apply_readout_noise(const std::map<std::uint64_t, double> &probs,
                                                    std::size_t n_qubits, double flip);

struct MeasuredSetting {
    MeasurementSetting setting;
    std::map<std::uint64_t, double> probabilities;
    std::optional<std::uint64_t> shots;
    /// Words estimated from this setting. Empty: every term not claimed by
    /// an explicit list goes to the first setting that accepts it.
    std::vector<std::string> terms;
};

/// Externally measured data: either per-setting outcome distributions or
/// directly supplied term expectations.
struct MeasuredData {
    std::size_t n_qubits = 0;
    std::vector<MeasuredSetting> settings;
    std::vector<std::pair<std::string, double>> expectations;
};

/// Recombines measured data with the current decomposition. Pure
/// arithmetic, no simulation. Throws DataError on inconsistent input.
ExperimentReport ingest_measurements(const MeasuredData &data);

/// The distributions and assignments a report was computed from, in a
/// form ingest_measurements accepts.
MeasuredData measured_data_from(const ExperimentReport &report);

} // namespace backflow
