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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "backflow/backflow_state.hpp"
#include "backflow/serialization.hpp"
#include "oracles.hpp"

using namespace backflow;

namespace {

constexpr double kPi = std::numbers::pi;

std::string data_file(const char *name) { return std::string(BACKFLOW_DATA_DIR) + "/" + name; }

MeasuredSetting measured(const char *word, std::map<std::uint64_t, double> probs,
                         std::optional<std::uint64_t> shots = std::nullopt,
                         std::vector<std::string> terms = {}) {
    return {MeasurementSetting::from_word(word), std::move(probs), shots, std::move(terms)};
}

} // namespace

TEST(BackflowState, Coefficients) {
    const auto one = backflow_coefficients(1).a;
    ASSERT_EQ(one.size(), 2u);
    EXPECT_NEAR(one[0], -2.0 / std::sqrt(5.0), 1e-15);
    EXPECT_NEAR(one[1], 1.0 / std::sqrt(5.0), 1e-15);

    const auto two = backflow_coefficients(2).a;
    const double s6 = std::sqrt(6.0);
    const std::vector<double> want = {-2 / s6, -1 / s6, 0.0, 1 / s6};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(two[i], want[i], 1e-15);
    }

    const auto three = backflow_coefficients(3).a;
    EXPECT_NEAR(three[0], -0.641688947919748, 1e-14);
    EXPECT_NEAR(three[7], 0.320844473959874, 1e-14);
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto a = backflow_coefficients(n).a;
        double norm = 0.0;
        for (double x : a) {
            norm += x * x;
        }
        EXPECT_NEAR(norm, 1.0, 1e-12) << n;
    }
    EXPECT_THROW(backflow_coefficients(0), InvalidArgument);
}

TEST(BackflowState, ExactCurrentExamples) {
    for (std::size_t m = 0; m < 8; ++m) {
        std::vector<double> a(8, 0.0);
        a[m] = 1.0;
        EXPECT_NEAR(exact_current(a), static_cast<double>(m) / (2 * kPi), 1e-15);
    }
    const std::vector<double> uniform(4, 0.5);
    EXPECT_NEAR(exact_current(uniform), 12.0 / (4 * kPi), 1e-15);

    const std::vector<double> unnormalized = {1.0, 1.0};
    EXPECT_THROW(exact_current(unnormalized), InvalidArgument);
    const std::vector<double> three = {1.0, 0.0, 0.0};
    EXPECT_THROW(exact_current(three), InvalidArgument);
}

TEST(BackflowState, ExactCurrentMatchesBruteForce) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto psi = oracle::random_state(n, rng);
        const std::vector<Complex> a(psi.begin(), psi.end());
        for (int rep = 0; rep < 4; ++rep) {
            const double t = rep == 0 ? 0.0 : angle(rng);
            EXPECT_NEAR(exact_current(a, t), oracle::brute_current(psi, t), 1e-12) << n;
        }
    }
}

TEST(BackflowState, ClosedFormAgreesWithExact) {
    EXPECT_NEAR(closed_form_current(1), -0.03183098861837907, 1e-16);
    EXPECT_NEAR(closed_form_current(2), -0.1061032953945969, 1e-16);
    EXPECT_NEAR(closed_form_current(10), -40.68401145578359, 1e-12);
    for (std::size_t n = 1; n <= 14; ++n) {
        const double exact = exact_current(backflow_coefficients(n).a);
        EXPECT_NEAR(exact, closed_form_current(n), 1e-12 * std::abs(closed_form_current(n))) << n;
    }
}

TEST(BackflowState, CurrentGrowsMoreNegative) {
    for (std::size_t n = 1; n < 30; ++n) {
        EXPECT_LT(closed_form_current(n + 1), closed_form_current(n)) << n;
    }
}

TEST(BackflowState, EigenstatesNeverFlowBackward) {
    for (std::size_t m = 0; m < 16; ++m) {
        std::vector<double> a(16, 0.0);
        a[m] = 1.0;
        for (int k = 0; k < 32; ++k) {
            EXPECT_GE(exact_current(a, 2 * kPi * k / 32), 0.0);
        }
    }
}

TEST(BackflowState, RelativeError) {
    EXPECT_NEAR(relative_error(-0.09, -0.1), 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(relative_error(-0.1, -0.1), 0.0);
    EXPECT_THROW(relative_error(1.0, 0.0), InvalidArgument);
}

TEST(Experiment, ModeNames) {
    for (RunMode m : {RunMode::Exact, RunMode::Shots, RunMode::Ingest}) {
        EXPECT_EQ(mode_from_name(mode_name(m)), m);
    }
    EXPECT_THROW(mode_from_name("both"), InvalidArgument);
}

TEST(Experiment, AssembleCurrent) {
    std::vector<TermRecord> terms = {{"X", 1.0, "X", -0.8, {}}, {"Z", -1.0, "Z", 0.6, {}}};
    EXPECT_NEAR(assemble_current(1.0, terms), (1.0 - 0.8 - 0.6) / (4 * kPi), 1e-16);
}

TEST(Experiment, ExactRunMatchesClosedForm) {
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto r = run_exact(n);
        EXPECT_EQ(r.terms.size(), term_count(n));
        EXPECT_NEAR(r.j_estimate, r.j_closed_form, 1e-12 * std::abs(r.j_closed_form)) << n;
        EXPECT_NEAR(r.j_exact, r.j_closed_form, 1e-12 * std::abs(r.j_closed_form)) << n;
        std::vector<TermRecord> copy = r.terms;
        EXPECT_NEAR(assemble_current(r.lambda0, copy), r.j_estimate, 1e-14 * (1u << n));
    }
}

TEST(Experiment, ExactRunAtOtherAngle) {
    const auto r = run_exact(2, kPi / 3);
    const auto a = backflow_coefficients(2).a;
    const std::vector<oracle::C> psi(a.begin(), a.end());
    EXPECT_NEAR(r.j_exact, oracle::brute_current(psi, kPi / 3), 1e-14);
}

TEST(Experiment, GroupedAndPerTermAgreeWithExactProbabilities) {
    for (std::size_t n = 1; n <= 6; ++n) {
        SimulationConfig cfg;
        cfg.n_qubits = n;
        cfg.exact_probabilities = true;
        const auto grouped = run_simulation(cfg);
        cfg.grouped = false;
        const auto per_term = run_simulation(cfg);
        EXPECT_LE(grouped.settings.size(), n + 1);
        EXPECT_EQ(per_term.settings.size(), term_count(n));
        EXPECT_NEAR(grouped.j_estimate, per_term.j_estimate, 1e-12);
        EXPECT_NEAR(grouped.j_estimate, closed_form_current(n), 1e-12 * (1u << n));
    }
}

TEST(Experiment, ShotRunIsReproducibleAndStatisticallySound) {
    SimulationConfig cfg;
    cfg.n_qubits = 2;
    cfg.seed = 2026;
    const auto a = run_simulation(cfg);
    const auto b = run_simulation(cfg);
    EXPECT_EQ(a.j_estimate, b.j_estimate);
    EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
    cfg.seed = 2027;
    EXPECT_NE(run_simulation(cfg).j_estimate, a.j_estimate);

    ASSERT_TRUE(a.j_standard_error.has_value());
    EXPECT_GT(*a.j_standard_error, 0.0);
    EXPECT_LE(std::abs(a.j_estimate - a.j_closed_form), 5 * *a.j_standard_error);
    for (const auto &t : a.terms) {
        ASSERT_TRUE(t.standard_error.has_value());
        EXPECT_NEAR(*t.standard_error,
                    std::sqrt((1 - t.expectation * t.expectation) / kDefaultShotsPerSetting),
                    1e-15);
    }
    ASSERT_TRUE(a.preparation.has_value());
    EXPECT_EQ(a.preparation->method, "circuit");
}

TEST(Experiment, ReadoutNoise) {
    const std::map<std::uint64_t, double> p = {{0b00, 1.0}};
    const auto noisy = apply_readout_noise(p, 2, 0.1);
    EXPECT_NEAR(noisy.at(0b00), 0.81, 1e-15);
    EXPECT_NEAR(noisy.at(0b01), 0.09, 1e-15);
    EXPECT_NEAR(noisy.at(0b11), 0.01, 1e-15);

    SimulationConfig cfg;
    cfg.n_qubits = 1;
    cfg.exact_probabilities = true;
    cfg.readout_flip = 0.05;
    // Every parity contracts by (1 - 2f) per measured qubit.
    const auto r = run_simulation(cfg);
    const double want = (1.0 + 0.9 * (-0.8) - 0.9 * 0.6) / (4 * kPi);
    EXPECT_NEAR(r.j_estimate, want, 1e-14);
}

TEST(Ingest, OneQubitProbabilities) {
    const auto r = ingest_measurements(load_measured_data(data_file("hardware_n1_probabilities.json")));
    EXPECT_EQ(r.mode, RunMode::Ingest);
    EXPECT_NEAR(r.j_estimate, -0.031452995628535825, 1e-15);
    EXPECT_NEAR(r.relative_error, 0.011875, 1e-8);
    EXPECT_NEAR(r.j_closed_form, -1.0 / (10 * kPi), 1e-16);
    ASSERT_TRUE(r.j_standard_error.has_value());
}

TEST(Ingest, TwoQubitExpectations) {
    const auto r = ingest_measurements(load_measured_data(data_file("hardware_n2_expectations.json")));
    EXPECT_NEAR(r.j_estimate, -0.10278902633382736, 1e-15);
    EXPECT_NEAR(r.relative_error, 0.03123625, 1e-8);
    EXPECT_FALSE(r.j_standard_error.has_value());
}

TEST(Ingest, CertainOutcomes) {
    MeasuredData d{1, {measured("X", {{0, 1.0}}), measured("Z", {{0, 1.0}})}, {}};
    EXPECT_NEAR(ingest_measurements(d).j_estimate, 1.0 / (4 * kPi), 1e-16);
}

TEST(Ingest, ReportRoundTripThroughJson) {
    for (bool grouped : {true, false}) {
        SimulationConfig cfg;
        cfg.n_qubits = 3;
        cfg.seed = 5;
        cfg.grouped = grouped;
        const auto r = run_simulation(cfg);
        const auto text = report_to_json(r).dump();
        const auto back = ingest_measurements(measured_data_from_json(Json::parse(text)));
        EXPECT_NEAR(back.j_estimate, r.j_estimate, 1e-15);
        const auto direct = ingest_measurements(measured_data_from(r));
        EXPECT_NEAR(direct.j_estimate, r.j_estimate, 1e-15);
        ASSERT_TRUE(back.j_standard_error && r.j_standard_error);
        EXPECT_NEAR(*back.j_standard_error, *r.j_standard_error, 1e-15);
    }
}

TEST(Ingest, RejectsInconsistentData) {
    // Missing Z term.
    EXPECT_THROW(ingest_measurements({1, {measured("X", {{0, 1.0}})}, {}}), DataError);
    // Probabilities off by more than 1e-6.
    EXPECT_THROW(ingest_measurements({1, {measured("X", {{0, 0.5}}), measured("Z", {{0, 1.0}})}, {}}),
                 DataError);
    // Explicit term the setting cannot measure.
    EXPECT_THROW(ingest_measurements(
                     {1, {measured("X", {{0, 1.0}}, {}, {"Z"}), measured("Z", {{0, 1.0}})}, {}}),
                 DataError);
    // Duplicate and unknown words among expectations.
    EXPECT_THROW(ingest_measurements({1, {}, {{"X", 0.1}, {"X", 0.2}, {"Z", 0.0}}}), DataError);
    EXPECT_THROW(ingest_measurements({1, {}, {{"X", 0.1}, {"Y", 0.2}, {"Z", 0.0}}}), DataError);
    EXPECT_THROW(ingest_measurements({1, {}, {{"X", 1.5}, {"Z", 0.0}}}), DataError);
    EXPECT_THROW(ingest_measurements({1, {}, {{"X", 0.5}}}), DataError);
}

TEST(Ingest, JsonErrors) {
    EXPECT_THROW(measured_data_from_json(Json::parse("[]")), DataError);
    EXPECT_THROW(measured_data_from_json(Json::parse(R"({"n": 1})")), DataError);
    EXPECT_THROW(measured_data_from_json(Json::parse(
                     R"({"n": 1, "settings": [{"basis_word": "XX", "probabilities": {"0": 1}}]})")),
                 DataError);
    EXPECT_THROW(measured_data_from_json(Json::parse(
                     R"({"n": 1, "settings": [{"basis_word": "X", "counts": {"0": 3}, "shots": 4}]})")),
                 DataError);
    EXPECT_THROW(load_measured_data(data_file("does_not_exist.json")), DataError);
}

TEST(Ingest, CountsAreNormalized) {
    const auto d = measured_data_from_json(Json::parse(
        R"({"n": 1, "settings": [{"basis_word": "X", "counts": {"0": 1, "1": 3}},
                                  {"basis_word": "Z", "counts": {"0": 4}}]})"));
    ASSERT_EQ(d.settings.size(), 2u);
    EXPECT_EQ(d.settings[0].shots, 4u);
    EXPECT_DOUBLE_EQ(d.settings[0].probabilities.at(1), 0.75);
    const auto r = ingest_measurements(d);
    EXPECT_NEAR(r.j_estimate, (1.0 - 0.5 - 1.0) / (4 * kPi), 1e-16);
}

TEST(Experiment, ExactRunHoldsPrecisionAtSixteenQubits) {
    const auto r = run_exact(16);
    EXPECT_NEAR(r.j_estimate, r.j_closed_form, 1e-9);
    EXPECT_NEAR(r.j_exact, r.j_closed_form, 1e-9);
}
