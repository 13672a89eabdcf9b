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

#include "backflow/experiment.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "backflow/statevector.hpp"

namespace backflow {

namespace {

constexpr double kProbabilitySumTolerance = 1e-6;

struct SettingEstimate {
    std::vector<double> expectations;
    /// Per-shot variance of sum_k lambda_k * parity_k over the setting's terms.
    double weighted_variance = 0.0;
};

SettingEstimate estimate_setting(std::span<const PauliString> terms,
                                 const std::map<std::uint64_t, double> &probs) {
    SettingEstimate out{std::vector<double>(terms.size(), 0.0), 0.0};
    double mean = 0.0;
    double second = 0.0;
    for (const auto &[outcome, p] : probs) {
        double f = 0.0;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const int s = parity_sign(terms[k], outcome);
            out.expectations[k] += p * s;
            f += terms[k].coefficient() * s;
        }
        mean += p * f;
        second += p * f * f;
    }
    out.weighted_variance = std::max(0.0, second - mean * mean);
    return out;
}

double binomial_standard_error(double expectation, std::uint64_t shots) {
    return std::sqrt(std::max(0.0, 1.0 - expectation * expectation) / static_cast<double>(shots));
}

std::map<std::uint64_t, double> nonzero_distribution(std::span<const double> probs) {
    std::map<std::uint64_t, double> out;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] != 0.0) {
            out.emplace(i, probs[i]);
        }
    }
    return out;
}

void fill_reference_values(ExperimentReport &report) {
    const auto coeffs = backflow_coefficients(report.n_qubits);
    report.j_exact = exact_current(coeffs.a, report.theta0);
    report.j_closed_form = closed_form_current(report.n_qubits);
    report.j_estimate = assemble_current(report.lambda0, report.terms);
    report.relative_error = relative_error(report.j_estimate, report.j_closed_form);
}

std::vector<TermRecord> blank_records(const WeightedPauliSum &sum) {
    std::vector<TermRecord> out;
    out.reserve(sum.size());
    for (const auto &t : sum.terms()) {
        out.push_back({t.word(), t.coefficient(), "", 0.0, std::nullopt});
    }
    return out;
}

std::size_t term_index(const WeightedPauliSum &sum, const std::string &word) {
    const std::size_t k = sum.find(word);
    if (k == sum.size()) {
        throw DataError("'" + word + "' is not a term of the " + std::to_string(sum.n_qubits()) +
                        "-qubit current decomposition");
    }
    return k;
}

void check_distribution(const std::map<std::uint64_t, double> &probs, std::size_t n_qubits,
                        const std::string &label) {
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    double total = 0.0;
    for (const auto &[outcome, p] : probs) {
        if (outcome >= dim) {
            throw DataError("setting " + label + " has an outcome outside " +
                            std::to_string(n_qubits) + " qubits");
        }
        if (!std::isfinite(p) || p < 0.0) {
            throw DataError("setting " + label + " has a negative or non-finite probability");
        }
        total += p;
    }
    if (std::fabs(total - 1.0) > kProbabilitySumTolerance) {
        throw DataError("probabilities of setting " + label + " sum to " + std::to_string(total));
    }
}

void check_qubit_count(std::size_t n_qubits) {
    if (n_qubits < 1) {
        throw DataError("measured data must name a qubit count n >= 1");
    }
    if (n_qubits > 20) {
        throw DataError("measured data for more than 20 qubits is not supported");
    }
}

} // namespace

std::string_view mode_name(RunMode mode) {
    switch (mode) {
    case RunMode::Exact:
        return "exact";
    case RunMode::Shots:
        return "shots";
    case RunMode::Ingest:
        return "ingest";
    }
    return "?";
}

RunMode mode_from_name(std::string_view name) {
    for (RunMode m : {RunMode::Exact, RunMode::Shots, RunMode::Ingest}) {
        if (mode_name(m) == name) {
            return m;
        }
    }
    throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

double assemble_current(double lambda0, std::span<const TermRecord> terms) {
    long double acc = lambda0;
    for (const auto &t : terms) {
        acc += static_cast<long double>(t.lambda) * t.expectation;
    }
    return static_cast<double>(acc / (4.0L * std::numbers::pi_v<long double>));
}

std::map<std::uint64_t, double> apply_readout_noise(const std::map<std::uint64_t, double> &probs,
                                                    std::size_t n_qubits, double flip) {
    if (!(flip >= 0.0 && flip < 0.5)) {
        throw InvalidArgument("readout flip probability must lie in [0, 0.5)");
    }
    if (flip == 0.0) {
        return probs;
    }
    std::vector<double> dense(std::size_t{1} << n_qubits, 0.0);
    for (const auto &[outcome, p] : probs) {
        dense.at(outcome) = p;
    }
    for (std::size_t q = 0; q < n_qubits; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
        for (std::uint64_t i = 0; i < dense.size(); ++i) {
            if (i & bit) {
                continue;
            }
            const double p0 = dense[i];
            const double p1 = dense[i | bit];
            dense[i] = (1.0 - flip) * p0 + flip * p1;
            dense[i | bit] = flip * p0 + (1.0 - flip) * p1;
        }
    }
    return nonzero_distribution(dense);
}

ExperimentReport run_simulation(const SimulationConfig &config) {
    if (config.n_qubits < 1 || config.n_qubits > 20) {
        throw InvalidArgument("simulation supports 1 <= N <= 20");
    }
    if (!config.exact_probabilities && config.shots_per_setting < 1) {
        throw InvalidArgument("shots per setting must be at least 1");
    }
    if (!(config.readout_flip >= 0.0 && config.readout_flip < 0.5)) {
        throw InvalidArgument("readout flip probability must lie in [0, 0.5)");
    }

    const std::size_t n = config.n_qubits;
    const WeightedPauliSum sum = current_decomposition(n);
    const BackflowCoefficients coeffs = backflow_coefficients(n);

    ExperimentReport report;
    report.n_qubits = n;
    report.mode = RunMode::Shots;
    report.grouped = config.grouped;
    report.exact_probabilities = config.exact_probabilities;
    if (!config.exact_probabilities) {
        report.shots_per_setting = config.shots_per_setting;
        report.seed = config.seed;
        report.rng = std::string(kRngName);
    }
    report.readout_flip = config.readout_flip;
    report.lambda0 = sum.identity_weight();
    report.terms = blank_records(sum);

    std::optional<Statevector> state;
    if (n <= 2) {
        PreparationCircuit prep = prepare_backflow(n);
        state = simulate(prep.circuit);
        report.preparation = PreparationRecord{"circuit", prep.angles, prep.convention};
    } else {
        state = Statevector::from_amplitudes(n, std::span<const double>(coeffs.a));
        report.preparation = PreparationRecord{"amplitude_load", {}, ""};
    }

    const auto groups = config.grouped ? group_terms(sum) : per_term_settings(sum);
    double variance = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const SettingGroup &group = groups[i];
        const Statevector rotated = run_circuit(measurement_circuit(group.setting), *state);

        SettingRecord record;
        record.basis_word = group.setting.word();
        if (config.exact_probabilities) {
            record.probabilities = apply_readout_noise(
                nonzero_distribution(z_probabilities(rotated)), n, config.readout_flip);
        } else {
            record.seed = derive_seed(config.seed, i);
            record.shots = config.shots_per_setting;
            record.probabilities =
                sample(rotated, config.shots_per_setting, *record.seed, config.readout_flip)
                    .frequencies();
        }

        const SettingEstimate est = estimate_setting(group.terms, record.probabilities);
        for (std::size_t k = 0; k < group.terms.size(); ++k) {
            const std::string word = group.terms[k].word();
            TermRecord &t = report.terms[sum.find(word)];
            t.setting = record.basis_word;
            t.expectation = est.expectations[k];
            if (record.shots) {
                t.standard_error = binomial_standard_error(t.expectation, *record.shots);
            }
            record.terms.push_back(word);
        }
        if (record.shots) {
            variance += est.weighted_variance / static_cast<double>(*record.shots);
        }
        report.settings.push_back(std::move(record));
    }
    if (!config.exact_probabilities) {
        report.j_standard_error = std::sqrt(variance) / (4.0 * std::numbers::pi);
    }
    fill_reference_values(report);
    return report;
}

ExperimentReport run_exact(std::size_t n_qubits, double theta0) {
    if (n_qubits < 1 || n_qubits > 20) {
        throw InvalidArgument("exact evaluation supports 1 <= N <= 20");
    }
    if (!std::isfinite(theta0)) {
        throw InvalidArgument("theta0 must be finite");
    }
    const WeightedPauliSum sum = current_decomposition(n_qubits);
    const BackflowCoefficients coeffs = backflow_coefficients(n_qubits);
    const Statevector state =
        Statevector::from_amplitudes(n_qubits, std::span<const double>(coeffs.a));

    ExperimentReport report;
    report.n_qubits = n_qubits;
    report.mode = RunMode::Exact;
    report.theta0 = theta0;
    report.preparation = PreparationRecord{"amplitude_load", {}, ""};
    report.lambda0 = sum.identity_weight();
    report.terms = blank_records(sum);
    const auto values = term_expectations(state, sum);
    for (std::size_t k = 0; k < values.size(); ++k) {
        report.terms[k].expectation = values[k];
    }
    fill_reference_values(report);
    // Re-summing the double-rounded term values loses about 1e-7 at N = 16;
    // the weighted sum is formed in extended precision instead.
    report.j_estimate = expectation_pauli(state, sum) / (4.0 * std::numbers::pi);
    report.relative_error = relative_error(report.j_estimate, report.j_closed_form);
    return report;
}

ExperimentReport ingest_measurements(const MeasuredData &data) {
    check_qubit_count(data.n_qubits);
    const bool have_settings = !data.settings.empty();
    const bool have_expectations = !data.expectations.empty();
    if (have_settings == have_expectations) {
        throw DataError("measured data must contain either settings or expectations");
    }

    const std::size_t n = data.n_qubits;
    const WeightedPauliSum sum = current_decomposition(n);

    ExperimentReport report;
    report.n_qubits = n;
    report.mode = RunMode::Ingest;
    report.lambda0 = sum.identity_weight();
    report.terms = blank_records(sum);

    if (have_expectations) {
        std::vector<bool> seen(sum.size(), false);
        for (const auto &[word, value] : data.expectations) {
            const std::size_t k = term_index(sum, word);
            if (seen[k]) {
                throw DataError("duplicate expectation for " + word);
            }
            if (!std::isfinite(value) || std::fabs(value) > 1.0 + 1e-9) {
                throw DataError("expectation of " + word + " lies outside [-1, 1]");
            }
            seen[k] = true;
            report.terms[k].expectation = value;
        }
        for (std::size_t k = 0; k < seen.size(); ++k) {
            if (!seen[k]) {
                throw DataError("no expectation supplied for " + report.terms[k].word);
            }
        }
        fill_reference_values(report);
        return report;
    }

    // Resolve which setting estimates which term.
    constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> owner(sum.size(), kUnassigned);
    for (std::size_t s = 0; s < data.settings.size(); ++s) {
        const MeasuredSetting &ms = data.settings[s];
        if (ms.setting.n_qubits() != n) {
            throw DataError("setting " + ms.setting.word() + " does not have " +
                            std::to_string(n) + " qubits");
        }
        check_distribution(ms.probabilities, n, ms.setting.word());
        for (const auto &word : ms.terms) {
            const std::size_t k = term_index(sum, word);
            if (!ms.setting.accepts(sum.terms()[k])) {
                throw DataError("setting " + ms.setting.word() + " cannot measure " + word);
            }
            if (owner[k] != kUnassigned) {
                throw DataError("term " + word + " is assigned to two settings");
            }
            owner[k] = s;
        }
    }
    for (std::size_t k = 0; k < sum.size(); ++k) {
        if (owner[k] != kUnassigned) {
            continue;
        }
        for (std::size_t s = 0; s < data.settings.size(); ++s) {
            if (data.settings[s].terms.empty() && data.settings[s].setting.accepts(sum.terms()[k])) {
                owner[k] = s;
                break;
            }
        }
        if (owner[k] == kUnassigned) {
            throw DataError("no setting measures term " + report.terms[k].word);
        }
    }

    double variance = 0.0;
    bool all_shots_known = true;
    for (std::size_t s = 0; s < data.settings.size(); ++s) {
        const MeasuredSetting &ms = data.settings[s];
        std::vector<PauliString> terms;
        for (std::size_t k = 0; k < sum.size(); ++k) {
            if (owner[k] == s) {
                terms.push_back(sum.terms()[k]);
            }
        }
        SettingRecord record;
        record.basis_word = ms.setting.word();
        record.shots = ms.shots;
        record.probabilities = ms.probabilities;
        const SettingEstimate est = estimate_setting(terms, ms.probabilities);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string word = terms[i].word();
            TermRecord &t = report.terms[sum.find(word)];
            t.setting = record.basis_word;
            t.expectation = est.expectations[i];
            if (ms.shots) {
                t.standard_error = binomial_standard_error(t.expectation, *ms.shots);
            }
            record.terms.push_back(word);
        }
        if (ms.shots) {
            variance += est.weighted_variance / static_cast<double>(*ms.shots);
        } else if (!terms.empty()) {
            all_shots_known = false;
        }
        report.settings.push_back(std::move(record));
    }
    if (all_shots_known) {
        report.j_standard_error = std::sqrt(variance) / (4.0 * std::numbers::pi);
    }
    fill_reference_values(report);
    return report;
}

MeasuredData measured_data_from(const ExperimentReport &report) {
    MeasuredData out;
    out.n_qubits = report.n_qubits;
    if (report.settings.empty()) {
        for (const auto &t : report.terms) {
            out.expectations.emplace_back(t.word, t.expectation);
        }
        return out;
    }
    for (const auto &s : report.settings) {
        out.settings.push_back(
            {MeasurementSetting::from_word(s.basis_word), s.probabilities, s.shots, s.terms});
    }
    return out;
}

} // namespace backflow
