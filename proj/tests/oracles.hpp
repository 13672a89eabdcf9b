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

// Independent reference computations for the test suites. Nothing here
// calls into the code paths it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace backflow::oracle {

using C = std::complex<double>;

/// Row-major dense complex matrix.
struct Matrix {
    std::size_t dim = 0;
    std::vector<C> e;
    C &at(std::size_t r, std::size_t c) { return e[r * dim + c]; }
    const C &at(std::size_t r, std::size_t c) const { return e[r * dim + c]; }
};

inline Matrix letter_matrix(char letter) {
    Matrix m{2, std::vector<C>(4)};
    switch (letter) {
    case 'I':
        m.e = {1.0, 0.0, 0.0, 1.0};
        break;
    case 'X':
        m.e = {0.0, 1.0, 1.0, 0.0};
        break;
    case 'Y':
        m.e = {0.0, C(0, -1), C(0, 1), 0.0};
        break;
    case 'Z':
        m.e = {1.0, 0.0, 0.0, -1.0};
        break;
    }
    return m;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out{a.dim * b.dim, std::vector<C>(a.dim * b.dim * a.dim * b.dim)};
    for (std::size_t i = 0; i < a.dim; ++i)
        for (std::size_t j = 0; j < a.dim; ++j)
            for (std::size_t k = 0; k < b.dim; ++k)
                for (std::size_t l = 0; l < b.dim; ++l)
                    out.at(i * b.dim + k, j * b.dim + l) = a.at(i, j) * b.at(k, l);
    return out;
}

/// Kronecker product of the letters, leftmost letter outermost.
inline Matrix word_matrix(const std::string &word) {
    Matrix m = letter_matrix(word[0]);
    for (std::size_t i = 1; i < word.size(); ++i) {
        m = kron(m, letter_matrix(word[i]));
    }
    return m;
}

/// lambda0 I + sum coeff * word, by explicit Kronecker products.
inline Matrix dense_sum(std::size_t n, double lambda0,
                        const std::vector<std::pair<std::string, double>> &terms) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix out{dim, std::vector<C>(dim * dim)};
    for (std::size_t i = 0; i < dim; ++i) {
        out.at(i, i) = lambda0;
    }
    for (const auto &[word, coeff] : terms) {
        const Matrix w = word_matrix(word);
        for (std::size_t i = 0; i < dim * dim; ++i) {
            out.e[i] += coeff * w.e[i];
        }
    }
    return out;
}

/// Direct expansion of
///   (2^N - 1)(I + X)^{(x)N} - sum_n 2^n (I + X)^{(x)(N-1-n)} (x) Z (x) (I + X)^{(x)n}
/// by enumerating every {I, X} choice. Returns word -> coefficient; the
/// all-identity word is included.
inline std::map<std::string, long long> closed_form_terms(std::size_t n) {
    std::map<std::string, long long> out;
    const long long full = (1LL << n) - 1;
    for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
        std::string w(n, 'I');
        for (std::size_t p = 0; p < n; ++p) {
            if (bits >> p & 1) {
                w[p] = 'X';
            }
        }
        out[w] += full;
    }
    for (std::size_t zpos = 0; zpos < n; ++zpos) {
        const long long weight = 1LL << (n - 1 - zpos);
        for (std::uint64_t bits = 0; bits < (1ULL << (n - 1)); ++bits) {
            std::string w(n, 'I');
            std::size_t b = 0;
            for (std::size_t p = 0; p < n; ++p) {
                if (p == zpos) {
                    w[p] = 'Z';
                } else if (bits >> (b++) & 1) {
                    w[p] = 'X';
                }
            }
            out[w] -= weight;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second == 0 ? out.erase(it) : std::next(it);
    }
    return out;
}

/// J = (1/2pi) Re sum_{m,n} conj(a_m) n a_n e^{i(n-m) theta0}, O(4^N).
inline double brute_current(const std::vector<C> &a, double theta0) {
    C acc = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m)
        for (std::size_t n = 0; n < a.size(); ++n)
            acc += std::conj(a[m]) * static_cast<double>(n) * a[n] *
                   std::polar(1.0, (static_cast<double>(n) - static_cast<double>(m)) * theta0);
    return acc.real() / (2.0 * std::numbers::pi);
}

/// <psi| M |psi> for a dense matrix.
inline C quadratic_form(const Matrix &m, const std::vector<C> &psi) {
    C acc = 0.0;
    for (std::size_t r = 0; r < m.dim; ++r)
        for (std::size_t c = 0; c < m.dim; ++c)
            acc += std::conj(psi[r]) * m.at(r, c) * psi[c];
    return acc;
}

/// Integer matrix with entries m + n.
inline Matrix current_matrix(std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    Matrix out{dim, std::vector<C>(dim * dim)};
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            out.at(r, c) = static_cast<double>(r + c);
    return out;
}

/// Haar-ish random state: normalized complex Gaussian vector.
inline std::vector<C> random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<C> psi(std::size_t{1} << n);
    double norm2 = 0.0;
    for (auto &a : psi) {
        a = C(g(rng), g(rng));
        norm2 += std::norm(a);
    }
    for (auto &a : psi) {
        a /= std::sqrt(norm2);
    }
    return psi;
}

} // namespace backflow::oracle
