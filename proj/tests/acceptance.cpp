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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion carries its own tolerance and wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "backflow/backflow_state.hpp"
#include "backflow/circuit.hpp"
#include "backflow/experiment.hpp"
#include "backflow/pauli.hpp"
#include "backflow/serialization.hpp"
#include "backflow/statevector.hpp"
#include "oracles.hpp"

using namespace backflow;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && ok) {
            detail = what;
        }
        ok = ok && cond;
    }
};

std::string fmt(const char *f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Outcome decomposition() {
    Outcome r;
    for (std::size_t n = 1; n <= 8; ++n) {
        r.require(realize_dense_integer(current_decomposition(n)) == dense_current_matrix(n),
                  "dense mismatch at N=" + std::to_string(n));
    }
    r.require(current_decomposition(1).str() == "1 +1*X -1*Z", "N=1 terms");
    const auto two = current_decomposition(2);
    const std::map<std::string, double> want = {{"IX", 3},  {"XI", 3},  {"XX", 3}, {"ZI", -2},
                                                {"ZX", -2}, {"IZ", -1}, {"XZ", -1}};
    bool same = two.identity_weight() == 3.0 && two.size() == want.size();
    for (const auto &t : two.terms()) {
        same = same && want.contains(t.word()) && want.at(t.word()) == t.coefficient();
    }
    r.require(same, "N=2 terms");
    return r;
}

Outcome closed_form() {
    Outcome r;
    const double j1 = closed_form_current(1);
    const double j2 = closed_form_current(2);
    r.require(std::abs(j1 + 1.0 / (10 * kPi)) <= 1e-12, fmt("J1=%.12g", j1));
    r.require(std::abs(j1 - -0.0318310) <= 1e-7, fmt("J1=%.12g", j1));
    r.require(std::abs(j2 - -0.106103) <= 5e-7, fmt("J2=%.12g", j2));
    for (std::size_t n = 1; n <= 14; ++n) {
        const double exact = exact_current(backflow_coefficients(n).a, 0.0);
        const double cf = closed_form_current(n);
        r.require(std::abs(exact - cf) <= 1e-12 * std::max(1.0, std::abs(cf)),
                  fmt("N=%g diff=%.3g", static_cast<double>(n), exact - cf));
    }
    return r;
}

Outcome preparation() {
    Outcome r;
    const auto s1 = simulate(prepare_backflow(1).circuit);
    r.require(std::abs(s1.amplitude(0).real() - -0.894427) <= 1e-6 &&
                  std::abs(s1.amplitude(1).real() - 0.447214) <= 1e-6,
              fmt("N=1 amplitudes %.9f %.9f", s1.amplitude(0).real(), s1.amplitude(1).real()));
    const auto p = z_probabilities(simulate(prepare_backflow(2).circuit));
    const double want[4] = {2.0 / 3.0, 1.0 / 6.0, 0.0, 1.0 / 6.0};
    for (std::size_t i = 0; i < 4; ++i) {
        r.require(std::abs(p[i] - want[i]) <= 1e-10,
                  fmt("N=2 P[%g]=%.12g", static_cast<double>(i), p[i]));
    }
    return r;
}

Outcome ingestion() {
    Outcome r;
    const std::string dir = BACKFLOW_DATA_DIR;
    const auto one = ingest_measurements(load_measured_data(dir + "/hardware_n1_probabilities.json"));
    r.require(std::abs(one.j_estimate - -0.031453) <= 1e-5, fmt("N=1 J=%.9f", one.j_estimate));
    const auto two = ingest_measurements(load_measured_data(dir + "/hardware_n2_expectations.json"));
    r.require(std::abs(two.j_estimate - -0.102789) <= 1e-5, fmt("N=2 J=%.9f", two.j_estimate));
    return r;
}

Outcome shot_noise() {
    Outcome r;
    for (std::size_t n = 1; n <= 2; ++n) {
        int passes = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SimulationConfig cfg;
            cfg.n_qubits = n;
            cfg.shots_per_setting = 8000;
            cfg.seed = seed;
            const auto rep = run_simulation(cfg);
            if (rep.j_standard_error &&
                std::abs(rep.j_estimate - rep.j_exact) <= 5 * *rep.j_standard_error) {
                ++passes;
            }
        }
        r.require(passes >= 19, fmt("N=%g passes=%g/20", static_cast<double>(n), passes));
    }
    return r;
}

Outcome properties() {
    Outcome r;
    std::mt19937_64 rng(20261016);

    // Gate inverses and norm preservation.
    for (int rep = 0; rep < 20; ++rep) {
        const auto psi = oracle::random_state(4, rng);
        const auto start = Statevector::from_amplitudes(4, std::span<const Complex>(psi));
        std::uniform_real_distribution<double> ang(-2 * kPi, 2 * kPi);
        const std::vector<Gate> gates = {Gate::ry(rep % 4, ang(rng)), Gate::h((rep + 1) % 4),
                                         Gate::cnot(rep % 4, (rep + 2) % 4), Gate::x(3),
                                         Gate::cry((rep + 3) % 4, rep % 4, ang(rng)), Gate::z(0)};
        auto s = start;
        for (const auto &g : gates) {
            s.apply(g);
            r.require(std::abs(s.norm_squared() - 1.0) <= 1e-12, "norm drift");
        }
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
            Gate inv = *it;
            inv.angle = -inv.angle;
            s.apply(inv);
        }
        for (std::size_t i = 0; i < s.dim(); ++i) {
            r.require(std::abs(s.amplitude(i) - start.amplitude(i)) <= 1e-12, "inverse round-trip");
        }
    }

    // H Z H = X on every qubit of random states.
    for (int rep = 0; rep < 10; ++rep) {
        const auto psi = oracle::random_state(3, rng);
        const auto s = Statevector::from_amplitudes(3, std::span<const Complex>(psi));
        for (std::size_t q = 0; q < 3; ++q) {
            std::string xw(3, 'I'), zw(3, 'I');
            xw[q] = 'X';
            zw[q] = 'Z';
            const double x = expectation_string(s, PauliString::from_word(xw)).real();
            const double z =
                expectation_string(apply_gate(s, Gate::h(q)), PauliString::from_word(zw)).real();
            r.require(std::abs(x - z) <= 1e-12, "HZH != X");
        }
    }

    // Decomposition vs dense oracle on random states.
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rep % 6;
        const auto psi = oracle::random_state(n, rng);
        const auto s = Statevector::from_amplitudes(n, std::span<const Complex>(psi));
        const double got = expectation_pauli(s, current_decomposition(n));
        const double want = oracle::quadratic_form(oracle::current_matrix(n), psi).real();
        r.require(std::abs(got - want) <= 1e-10, fmt("oracle diff %.3g at N=%g", got - want,
                                                     static_cast<double>(n)));
    }

    // Eigenstates never show backflow.
    for (std::size_t m = 0; m < 32; ++m) {
        std::vector<double> a(32, 0.0);
        a[m] = 1.0;
        for (int k = 0; k < 64; ++k) {
            r.require(exact_current(a, 2 * kPi * k / 64) >= 0.0, "negative eigenstate current");
        }
    }

    for (std::size_t n = 1; n < 30; ++n) {
        r.require(closed_form_current(n + 1) < closed_form_current(n), "closed form not monotone");
    }

    // Grouped vs per-term in the infinite-shot limit.
    for (std::size_t n = 1; n <= 6; ++n) {
        SimulationConfig cfg;
        cfg.n_qubits = n;
        cfg.exact_probabilities = true;
        const double grouped = run_simulation(cfg).j_estimate;
        cfg.grouped = false;
        const double per_term = run_simulation(cfg).j_estimate;
        r.require(std::abs(grouped - per_term) <= 1e-12,
                  fmt("grouped-per_term=%.3g at N=%g", grouped - per_term, static_cast<double>(n)));
    }
    return r;
}

Outcome scale() {
    Outcome r;
    const std::size_t n = 16;
    const auto a = backflow_coefficients(n).a;
    const auto state = Statevector::from_amplitudes(n, std::span<const double>(a));
    const double j = expectation_pauli(state, current_decomposition(n)) / (4 * kPi);
    const double cf = closed_form_current(n);
    r.require(std::abs(j - cf) <= 1e-9, fmt("J=%.15g closed form=%.15g", j, cf));
    return r;
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {"decomposition correctness", 5.0, decomposition},
        {"closed-form reproduction", 1.0, closed_form},
        {"state preparation", 1.0, preparation},
        {"measured-data arithmetic", 1.0, ingestion},
        {"shot-noise statistics", 30.0, shot_noise},
        {"property suite", 60.0, properties},
        {"scale check N=16", 10.0, scale},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto &c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && secs >= c.budget_s) {
            o.ok = false;
            o.detail = fmt("over budget (%.2f s >= %.0f s)", secs, c.budget_s);
        }
        failures += o.ok ? 0 : 1;
        std::printf("[%s] criterion %zu: %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", i + 1,
                    c.name, secs, o.ok ? "" : ": ", o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
