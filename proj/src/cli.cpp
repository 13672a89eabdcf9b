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

#include "backflow/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "backflow/backflow_state.hpp"
#include "backflow/circuit.hpp"
#include "backflow/experiment.hpp"
#include "backflow/pauli.hpp"
#include "backflow/serialization.hpp"

namespace backflow::cli {

namespace {

constexpr std::size_t kMaxCliQubits = 20;
constexpr std::size_t kMaxDenseDump = 8;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed command line.
struct RunConfig {
    std::string command;
    std::optional<std::size_t> n_qubits;
    std::string range;
    std::string mode = "exact";
    std::uint64_t shots = kDefaultShotsPerSetting;
    std::uint64_t seed = 0;
    bool per_term = false;
    bool exact_probabilities = false;
    double readout_flip = 0.0;
    std::optional<double> theta0;
    std::string input;
    std::string output;
    std::string format = "json";
    bool dense = false;
    bool single_cry = false;
    bool omit_terms = false;
};

std::string number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::pair<std::size_t, std::size_t> parse_range(const std::string &text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        throw UsageError("--range expects FIRST..LAST, got '" + text + "'");
    }
    std::size_t lo = 0;
    std::size_t hi = 0;
    const char *b = text.data();
    const auto r1 = std::from_chars(b, b + dots, lo);
    const auto r2 = std::from_chars(b + dots + 2, b + text.size(), hi);
    if (r1.ec != std::errc() || r1.ptr != b + dots || r2.ec != std::errc() ||
        r2.ptr != b + text.size()) {
        throw UsageError("--range expects FIRST..LAST, got '" + text + "'");
    }
    if (lo < 1 || hi < lo || hi > kMaxCliQubits) {
        throw UsageError("--range must satisfy 1 <= FIRST <= LAST <= 20");
    }
    return {lo, hi};
}

void validate(const RunConfig &cfg) {
    if (cfg.command == "current") {
        if (cfg.n_qubits.has_value() == !cfg.range.empty()) {
            throw UsageError("current needs exactly one of --n or --range");
        }
        if (cfg.mode != "exact" && cfg.mode != "shots") {
            throw UsageError("--mode must be exact or shots");
        }
        if (cfg.theta0 && cfg.mode != "exact") {
            throw UsageError("--theta0 applies to exact mode only");
        }
        if (cfg.mode == "exact" && (cfg.readout_flip != 0.0 || cfg.exact_probabilities)) {
            throw UsageError("--readout-flip and --exact-probabilities need --mode shots");
        }
        if (!(cfg.readout_flip >= 0.0 && cfg.readout_flip < 0.5)) {
            throw UsageError("--readout-flip must lie in [0, 0.5)");
        }
        if (cfg.shots < 1) {
            throw UsageError("--shots must be at least 1");
        }
    }
    if (cfg.command == "decompose" && cfg.dense && *cfg.n_qubits > kMaxDenseDump) {
        throw UsageError("--dense is limited to n <= 8");
    }
    if (cfg.command == "prepare" && *cfg.n_qubits > 2) {
        throw UsageError("prepare synthesizes circuits for n = 1 or 2 only");
    }
}

void emit(const RunConfig &cfg, const std::string &text, std::ostream &out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.output);
    if (!file) {
        throw Error("cannot write " + cfg.output);
    }
    file << text;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

std::string do_decompose(const RunConfig &cfg) {
    const std::size_t n = *cfg.n_qubits;
    const WeightedPauliSum sum = current_decomposition(n);
    std::optional<IntegerOperator> dense;
    if (cfg.dense) {
        dense = realize_dense_integer(sum);
    }
    if (cfg.format == "json") {
        Json j = sum_to_json(sum);
        if (dense) {
            Json rows = Json::array();
            for (std::size_t r = 0; r < dense->dim(); ++r) {
                Json row = Json::array();
                for (std::size_t c = 0; c < dense->dim(); ++c) {
                    row.push_back((*dense)(r, c));
                }
                rows.push_back(std::move(row));
            }
            j["dense"] = std::move(rows);
        }
        return dump(j);
    }
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "word,coeff\n" << std::string(n, 'I') << ',' << number(sum.identity_weight()) << '\n';
        for (const auto &t : sum.terms()) {
            os << t.word() << ',' << number(t.coefficient()) << '\n';
        }
    } else {
        os << sum.str() << '\n';
    }
    if (dense) {
        for (std::size_t r = 0; r < dense->dim(); ++r) {
            for (std::size_t c = 0; c < dense->dim(); ++c) {
                os << (c ? (cfg.format == "csv" ? "," : " ") : "") << (*dense)(r, c);
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string do_prepare(const RunConfig &cfg) {
    const PreparationCircuit prep = prepare_backflow(*cfg.n_qubits, !cfg.single_cry);
    const Statevector state = simulate(prep.circuit);
    if (cfg.format == "json") {
        Json amps = Json::array();
        for (const Complex &a : state.amplitudes()) {
            amps.push_back(a.real());
        }
        Json j = {{"n", *cfg.n_qubits},
                  {"angles", prep.angles},
                  {"convention", prep.convention},
                  {"gates", circuit_to_json(prep.circuit)},
                  {"amplitudes", amps}};
        return dump(j);
    }
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "kind,target,control,angle\n";
        for (const Gate &g : prep.circuit.gates()) {
            os << gate_name(g.kind) << ',' << g.target << ','
               << (g.control ? std::to_string(*g.control) : "") << ',' << number(g.angle) << '\n';
        }
        return os.str();
    }
    for (const Gate &g : prep.circuit.gates()) {
        os << gate_name(g.kind);
        if (g.control) {
            os << " control=" << *g.control;
        }
        os << " target=" << g.target;
        if (g.kind == GateKind::RY || g.kind == GateKind::CRY) {
            os << " angle=" << number(g.angle);
        }
        os << '\n';
    }
    return os.str();
}

ExperimentReport run_one(const RunConfig &cfg, std::size_t n) {
    if (cfg.mode == "exact") {
        return run_exact(n, cfg.theta0.value_or(0.0));
    }
    SimulationConfig sim;
    sim.n_qubits = n;
    sim.shots_per_setting = cfg.shots;
    sim.seed = cfg.seed;
    sim.grouped = !cfg.per_term;
    sim.readout_flip = cfg.readout_flip;
    sim.exact_probabilities = cfg.exact_probabilities;
    return run_simulation(sim);
}

std::string report_table(const ExperimentReport &r) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "n                 " << r.n_qubits << '\n'
       << "mode              " << mode_name(r.mode) << '\n';
    if (r.shots_per_setting) {
        os << "shots/setting     " << *r.shots_per_setting << '\n'
           << "seed              " << *r.seed << " (" << r.rng << ")\n"
           << "settings          " << r.settings.size() << (r.grouped ? " grouped" : " per-term")
           << '\n';
    }
    os << "terms             " << r.terms.size() << '\n'
       << "j_estimate        " << r.j_estimate << '\n';
    if (r.j_standard_error) {
        os << "j_standard_error  " << *r.j_standard_error << '\n';
    }
    os << "j_exact           " << r.j_exact << '\n'
       << "j_closed_form     " << r.j_closed_form << '\n'
       << "relative_error    " << r.relative_error << '\n';
    return os.str();
}

std::string render_report(const RunConfig &cfg, ExperimentReport report) {
    if (cfg.format == "csv") {
        return report_to_csv(report);
    }
    if (cfg.format == "table") {
        return report_table(report);
    }
    if (cfg.omit_terms) {
        report.terms.clear();
        report.settings.clear();
    }
    return dump(report_to_json(report));
}

std::string do_current(const RunConfig &cfg) {
    if (cfg.n_qubits) {
        return render_report(cfg, run_one(cfg, *cfg.n_qubits));
    }
    const auto [lo, hi] = parse_range(cfg.range);
    std::vector<ExperimentReport> rows;
    for (std::size_t n = lo; n <= hi; ++n) {
        rows.push_back(run_one(cfg, n));
    }
    if (cfg.format == "json") {
        Json arr = Json::array();
        for (const auto &r : rows) {
            arr.push_back({{"n", r.n_qubits},
                           {"j_estimate", r.j_estimate},
                           {"j_standard_error",
                            r.j_standard_error ? Json(*r.j_standard_error) : Json(nullptr)},
                           {"j_exact", r.j_exact},
                           {"j_closed_form", r.j_closed_form}});
        }
        return dump(arr);
    }
    std::ostringstream os;
    os << std::setprecision(17);
    if (cfg.format == "csv") {
        os << "n,j_estimate,j_standard_error,j_exact,j_closed_form\n";
        for (const auto &r : rows) {
            os << r.n_qubits << ',' << r.j_estimate << ','
               << (r.j_standard_error ? number(*r.j_standard_error) : "") << ',' << r.j_exact
               << ',' << r.j_closed_form << '\n';
        }
    } else {
        os << std::setprecision(10) << std::left << std::setw(4) << "n" << std::setw(20)
           << "j_estimate" << std::setw(20) << "j_exact"
           << "j_closed_form" << '\n';
        for (const auto &r : rows) {
            os << std::setw(4) << r.n_qubits << std::setw(20) << r.j_estimate << std::setw(20)
               << r.j_exact << r.j_closed_form << '\n';
        }
    }
    return os.str();
}

std::string do_analyze(const RunConfig &cfg) {
    return render_report(cfg, ingest_measurements(load_measured_data(cfg.input)));
}

constexpr const char *kFooter = R"(Exit status:
  0  success
  2  usage error (invalid flags or flag combinations)
  3  engine error (simulation or numerical failure)
  4  data error (missing, empty or malformed input file)

Environment overrides (flags win): BACKFLOW_SHOTS, BACKFLOW_SEED,
BACKFLOW_FORMAT, BACKFLOW_READOUT_FLIP.)";

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum backflow on a ring: current-operator Pauli decomposition, "
                 "state preparation, exact and shot-based current estimation"};
    app.footer(kFooter);
    app.require_subcommand(1);

    RunConfig cfg;
    const std::vector<std::string> formats = {"json", "csv", "table"};

    auto add_format = [&](CLI::App *sub) {
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember(formats))
            ->envname("BACKFLOW_FORMAT")
            ->capture_default_str();
        sub->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    };

    auto *decompose = app.add_subcommand("decompose", "Print the Pauli decomposition of J_N");
    decompose->add_option("--n", cfg.n_qubits, "Number of qubits N")
        ->required()
        ->check(CLI::Range(std::size_t{1}, kMaxCliQubits));
    decompose->add_flag("--dense", cfg.dense, "Also dump the dense matrix (n <= 8)");
    add_format(decompose);

    auto *prepare = app.add_subcommand("prepare", "Print the state-preparation circuit (n = 1, 2)");
    prepare->add_option("--n", cfg.n_qubits, "Number of qubits N")
        ->required()
        ->check(CLI::Range(std::size_t{1}, kMaxCliQubits));
    prepare->add_flag("--single-cry", cfg.single_cry,
                      "Keep the controlled RY as one gate instead of RY/CNOT pairs");
    add_format(prepare);

    auto *current = app.add_subcommand("current", "Compute the probability current J");
    current->add_option("--n", cfg.n_qubits, "Number of qubits N")
        ->check(CLI::Range(std::size_t{1}, kMaxCliQubits));
    current->add_option("--range", cfg.range, "Sweep N over FIRST..LAST (table of J vs N)");
    current->add_option("--mode", cfg.mode, "exact or shots")->capture_default_str();
    current->add_option("--shots", cfg.shots, "Shots per measurement setting")
        ->envname("BACKFLOW_SHOTS")
        ->capture_default_str();
    current->add_option("--seed", cfg.seed, "Base RNG seed")
        ->envname("BACKFLOW_SEED")
        ->capture_default_str();
    auto *grouped = current->add_flag("--grouped", "Grouped measurement settings (default)");
    auto *per_term = current->add_flag("--per-term", cfg.per_term, "One circuit per Pauli term");
    grouped->excludes(per_term);
    current->add_option("--readout-flip", cfg.readout_flip,
                        "Classical per-bit readout flip probability")
        ->envname("BACKFLOW_READOUT_FLIP")
        ->capture_default_str();
    current->add_flag("--exact-probabilities", cfg.exact_probabilities,
                      "Use exact outcome probabilities (infinite-shot limit)");
    current->add_option("--theta0", cfg.theta0, "Ring angle for j_exact (exact mode only)");
    current->add_flag("--omit-terms", cfg.omit_terms,
                      "Leave per-term and per-setting records out of JSON output");
    add_format(current);

    auto *analyze = app.add_subcommand("analyze", "Recombine externally measured data");
    analyze->add_option("--input", cfg.input, "Measured-data JSON file")->required();
    add_format(analyze);

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, err, err);
        return kUsage;
    }

    for (auto *sub : {decompose, prepare, current, analyze}) {
        if (sub->parsed()) {
            cfg.command = sub->get_name();
        }
    }

    try {
        validate(cfg);
        std::string text;
        if (cfg.command == "decompose") {
            text = do_decompose(cfg);
        } else if (cfg.command == "prepare") {
            text = do_prepare(cfg);
        } else if (cfg.command == "current") {
            text = do_current(cfg);
        } else {
            text = do_analyze(cfg);
        }
        emit(cfg, text, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError &e) {
        err << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kEngine;
    }
    return kOk;
}

} // namespace backflow::cli
