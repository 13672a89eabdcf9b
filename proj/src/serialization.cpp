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

#include "backflow/serialization.hpp"

#include <fstream>
#include <sstream>

namespace backflow {

namespace {

template <class T> Json optional_json(const std::optional<T> &v) {
    return v ? Json(*v) : Json(nullptr);
}

std::uint64_t parse_outcome(const std::string &bits, std::size_t n_qubits) {
    try {
        return parse_bitstring(bits, n_qubits);
    } catch (const InvalidArgument &e) {
        throw DataError(e.what());
    }
}

MeasuredSetting parse_setting(const Json &js, std::size_t n_qubits) {
    if (!js.is_object() || !js.contains("basis_word") || !js["basis_word"].is_string()) {
        throw DataError("each setting needs a string basis_word");
    }
    const std::string word = js["basis_word"].get<std::string>();
    MeasuredSetting out{MeasurementSetting::uniform(1, Basis::Z), {}, std::nullopt, {}};
    try {
        out.setting = MeasurementSetting::from_word(word);
    } catch (const InvalidArgument &e) {
        throw DataError(e.what());
    }
    if (out.setting.n_qubits() != n_qubits) {
        throw DataError("basis word '" + word + "' does not have " + std::to_string(n_qubits) +
                        " letters");
    }
    if (js.contains("shots") && !js["shots"].is_null()) {
        if (!js["shots"].is_number_unsigned() || js["shots"].get<std::uint64_t>() == 0) {
            throw DataError("shots must be a positive integer");
        }
        out.shots = js["shots"].get<std::uint64_t>();
    }

    const bool has_probs = js.contains("probabilities");
    const bool has_counts = js.contains("counts");
    if (has_probs == has_counts) {
        throw DataError("setting " + word + " needs exactly one of probabilities or counts");
    }
    if (has_probs) {
        const Json &probs = js["probabilities"];
        if (!probs.is_object()) {
            throw DataError("probabilities of setting " + word + " must be an object");
        }
        for (const auto &[bits, p] : probs.items()) {
            if (!p.is_number()) {
                throw DataError("probability of outcome " + bits + " is not a number");
            }
            out.probabilities[parse_outcome(bits, n_qubits)] += p.get<double>();
        }
    } else {
        const Json &counts = js["counts"];
        if (!counts.is_object()) {
            throw DataError("counts of setting " + word + " must be an object");
        }
        std::map<std::uint64_t, std::uint64_t> raw;
        std::uint64_t total = 0;
        for (const auto &[bits, c] : counts.items()) {
            if (!c.is_number_unsigned()) {
                throw DataError("count of outcome " + bits + " is not a nonnegative integer");
            }
            raw[parse_outcome(bits, n_qubits)] += c.get<std::uint64_t>();
            total += c.get<std::uint64_t>();
        }
        if (total == 0) {
            throw DataError("setting " + word + " has no counts");
        }
        if (out.shots && *out.shots != total) {
            throw DataError("setting " + word + " declares " + std::to_string(*out.shots) +
                            " shots but its counts add up to " + std::to_string(total));
        }
        out.shots = total;
        for (const auto &[outcome, c] : raw) {
            out.probabilities[outcome] = static_cast<double>(c) / static_cast<double>(total);
        }
    }

    if (js.contains("terms")) {
        if (!js["terms"].is_array()) {
            throw DataError("terms of setting " + word + " must be an array of words");
        }
        for (const auto &t : js["terms"]) {
            if (!t.is_string()) {
                throw DataError("terms of setting " + word + " must be strings");
            }
            out.terms.push_back(t.get<std::string>());
        }
    }
    return out;
}

} // namespace

Json sum_to_json(const WeightedPauliSum &sum) {
    Json terms = Json::array();
    for (const auto &t : sum.terms()) {
        terms.push_back({{"coeff", t.coefficient()}, {"word", t.word()}});
    }
    return {{"n", sum.n_qubits()}, {"lambda0", sum.identity_weight()}, {"terms", terms}};
}

WeightedPauliSum sum_from_json(const Json &j) {
    std::vector<PauliString> terms;
    for (const auto &t : j.at("terms")) {
        terms.push_back(
            PauliString::from_word(t.at("word").get<std::string>(), t.at("coeff").get<double>()));
    }
    return WeightedPauliSum::from_terms(j.at("n").get<std::size_t>(),
                                        j.at("lambda0").get<double>(), std::move(terms));
}

Json counts_to_json(const OutcomeCounts &counts) {
    Json c = Json::object();
    for (const auto &[index, n] : counts.counts) {
        c[to_bitstring(index, counts.n_qubits)] = n;
    }
    return {{"shots", counts.shots}, {"counts", c}};
}

Json circuit_to_json(const Circuit &circuit) {
    Json out = Json::array();
    for (const Gate &g : circuit.gates()) {
        Json jg = {{"kind", gate_name(g.kind)}, {"target", g.target}};
        if (g.control) {
            jg["control"] = *g.control;
        }
        if (g.kind == GateKind::RY || g.kind == GateKind::CRY) {
            jg["angle"] = g.angle;
        }
        out.push_back(std::move(jg));
    }
    return out;
}

Circuit circuit_from_json(std::size_t n_qubits, const Json &j) {
    Circuit out(n_qubits);
    for (const auto &jg : j) {
        Gate g{gate_kind_from_name(jg.at("kind").get<std::string>()),
               jg.at("target").get<std::size_t>(), std::nullopt, jg.value("angle", 0.0)};
        if (jg.contains("control")) {
            g.control = jg.at("control").get<std::size_t>();
        }
        out.append(g);
    }
    return out;
}

Json report_to_json(const ExperimentReport &report) {
    Json out;
    out["n"] = report.n_qubits;
    out["mode"] = mode_name(report.mode);
    out["grouped"] = report.grouped;
    out["exact_probabilities"] = report.exact_probabilities;
    out["shots_per_setting"] = optional_json(report.shots_per_setting);
    out["seed"] = optional_json(report.seed);
    out["rng"] = report.rng.empty() ? Json(nullptr) : Json(report.rng);
    out["readout_flip"] = report.readout_flip;
    out["theta0"] = report.theta0;
    if (report.preparation) {
        out["preparation"] = {{"method", report.preparation->method},
                              {"angles", report.preparation->angles},
                              {"convention", report.preparation->convention}};
    } else {
        out["preparation"] = nullptr;
    }
    out["lambda0"] = report.lambda0;

    Json terms = Json::array();
    for (const auto &t : report.terms) {
        terms.push_back({{"word", t.word},
                         {"lambda", t.lambda},
                         {"setting", t.setting.empty() ? Json(nullptr) : Json(t.setting)},
                         {"expectation", t.expectation},
                         {"standard_error", optional_json(t.standard_error)}});
    }
    out["terms"] = std::move(terms);

    Json settings = Json::array();
    for (const auto &s : report.settings) {
        Json probs = Json::object();
        for (const auto &[outcome, p] : s.probabilities) {
            probs[to_bitstring(outcome, report.n_qubits)] = p;
        }
        settings.push_back({{"basis_word", s.basis_word},
                            {"terms", s.terms},
                            {"seed", optional_json(s.seed)},
                            {"shots", optional_json(s.shots)},
                            {"probabilities", std::move(probs)}});
    }
    out["settings"] = std::move(settings);

    out["j_estimate"] = report.j_estimate;
    out["j_standard_error"] = optional_json(report.j_standard_error);
    out["j_exact"] = report.j_exact;
    out["j_closed_form"] = report.j_closed_form;
    out["relative_error"] = report.relative_error;
    return out;
}

MeasuredData measured_data_from_json(const Json &j) {
    if (!j.is_object()) {
        throw DataError("measured data must be a JSON object");
    }
    if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() < 1) {
        throw DataError("measured data needs a positive integer field n");
    }
    MeasuredData out;
    out.n_qubits = j["n"].get<std::size_t>();
    if (out.n_qubits > 20) {
        throw DataError("measured data for more than 20 qubits is not supported");
    }
    const bool has_settings = j.contains("settings");
    const bool has_expectations = j.contains("expectations");
    if (has_settings == has_expectations) {
        throw DataError("measured data needs exactly one of settings or expectations");
    }
    if (has_settings) {
        if (!j["settings"].is_array() || j["settings"].empty()) {
            throw DataError("settings must be a non-empty array");
        }
        for (const auto &js : j["settings"]) {
            out.settings.push_back(parse_setting(js, out.n_qubits));
        }
    } else {
        if (!j["expectations"].is_array() || j["expectations"].empty()) {
            throw DataError("expectations must be a non-empty array");
        }
        for (const auto &je : j["expectations"]) {
            if (!je.is_object() || !je.contains("word") || !je["word"].is_string() ||
                !je.contains("value") || !je["value"].is_number()) {
                throw DataError("each expectation needs a string word and a numeric value");
            }
            out.expectations.emplace_back(je["word"].get<std::string>(),
                                          je["value"].get<double>());
        }
    }
    return out;
}

MeasuredData load_measured_data(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw DataError("cannot parse " + path + ": " + e.what());
    }
    return measured_data_from_json(j);
}

std::string report_to_csv(const ExperimentReport &report) {
    std::ostringstream out;
    out.precision(17);
    out << "word,lambda,setting,expectation,standard_error\n";
    for (const auto &t : report.terms) {
        out << t.word << ',' << t.lambda << ',' << t.setting << ',' << t.expectation << ',';
        if (t.standard_error) {
            out << *t.standard_error;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace backflow
