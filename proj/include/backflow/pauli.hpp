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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "backflow/errors.hpp"

namespace backflow {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Letters are packed into bit masks, so a string holds at most this many.
inline constexpr std::size_t kMaxPauliQubits = 63;

/// Dense realizations refuse to allocate above this many qubits unless the
/// caller passes a different cap.
inline constexpr std::size_t kDefaultDenseCap = 16;

/// A weighted tensor product of single-qubit Pauli operators.
///
/// Position 0 is the leftmost tensor factor, i.e. qubit S1, which is the
/// most significant bit of a computational-basis index. The x/z masks use
/// that same bit layout: position p lives at bit (n - 1 - p), so a string
/// acts on a basis index j as  P|j> = i^{|x&z|} (-1)^{popcount(z&j)} |j^x>.
class PauliString {
  public:
    explicit PauliString(std::size_t n_qubits, double coefficient = 1.0);

    /// Builds a string from a letter word such as "IXZ".
    static PauliString from_word(std::string_view word, double coefficient = 1.0);

    /// Parses the text form produced by str(): "+3*IX", "-1.5*XZ", "-IX",
    /// "+3.0*IX" or a bare word.
    static PauliString parse(std::string_view text);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] double coefficient() const noexcept { return coefficient_; }
    [[nodiscard]] std::uint64_t x_mask() const noexcept { return x_mask_; }
    [[nodiscard]] std::uint64_t z_mask() const noexcept { return z_mask_; }

    [[nodiscard]] Pauli letter(std::size_t position) const;
    void set_letter(std::size_t position, Pauli p);

    [[nodiscard]] bool is_identity() const noexcept { return (x_mask_ | z_mask_) == 0; }
    /// Number of non-identity letters.
    [[nodiscard]] std::size_t weight() const noexcept;
    [[nodiscard]] std::size_t count(Pauli p) const noexcept;
    /// Bit mask (basis-index layout) of the non-identity positions.
    [[nodiscard]] std::uint64_t support_mask() const noexcept { return x_mask_ | z_mask_; }

    [[nodiscard]] std::string word() const;
    [[nodiscard]] std::string str() const;

    [[nodiscard]] PauliString with_coefficient(double c) const;

    [[nodiscard]] bool same_word(const PauliString &other) const noexcept {
        return n_qubits_ == other.n_qubits_ && x_mask_ == other.x_mask_ &&
               z_mask_ == other.z_mask_;
    }

    /// Lexicographic order on the letter word with I < X < Y < Z.
    [[nodiscard]] std::strong_ordering compare_word(const PauliString &other) const noexcept;

    bool operator==(const PauliString &other) const noexcept {
        return same_word(other) && coefficient_ == other.coefficient_;
    }

  private:
    friend PauliString tensor(const PauliString &left, const PauliString &right);

    [[nodiscard]] std::uint64_t bit(std::size_t position) const noexcept {
        return std::uint64_t{1} << (n_qubits_ - 1 - position);
    }

    std::size_t n_qubits_;
    double coefficient_;
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
};

/// Kronecker product; the left operand occupies the leading positions.
PauliString tensor(const PauliString &left, const PauliString &right);

/// lambda0 * I + sum_k lambda_k * V_k with like terms merged.
///
/// Terms are kept sorted by word, never contain the all-identity word and
/// never carry an exact-zero coefficient.
class WeightedPauliSum {
  public:
    explicit WeightedPauliSum(std::size_t n_qubits, double identity_weight = 0.0);

    /// Merges like words, folds identity words into lambda0 and sorts.
    static WeightedPauliSum from_terms(std::size_t n_qubits, double identity_weight,
                                       std::vector<PauliString> terms);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] double identity_weight() const noexcept { return identity_weight_; }
    [[nodiscard]] std::span<const PauliString> terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    /// Index of the term with the given word, or size() if absent.
    [[nodiscard]] std::size_t find(std::string_view word) const;

    /// "lambda0 +c1*W1 -c2*W2 ..." in canonical order.
    [[nodiscard]] std::string str() const;

    WeightedPauliSum &operator+=(const WeightedPauliSum &other);
    friend WeightedPauliSum operator+(WeightedPauliSum a, const WeightedPauliSum &b) {
        a += b;
        return a;
    }
    friend WeightedPauliSum operator*(double scale, const WeightedPauliSum &sum);

    bool operator==(const WeightedPauliSum &other) const = default;

  private:
    void canonicalize();

    std::size_t n_qubits_;
    double identity_weight_;
    std::vector<PauliString> terms_;
};

WeightedPauliSum tensor(const WeightedPauliSum &left, const WeightedPauliSum &right);

/// Row-major 2^N x 2^N matrix.
template <class T> class DenseOperator {
  public:
    explicit DenseOperator(std::size_t n_qubits)
        : n_qubits_(n_qubits), dim_(std::size_t{1} << n_qubits), entries_(dim_ * dim_, T{}) {}

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    T &operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const T &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    [[nodiscard]] std::span<const T> entries() const noexcept { return entries_; }

    [[nodiscard]] bool is_symmetric() const {
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = r + 1; c < dim_; ++c) {
                if ((*this)(r, c) != (*this)(c, r)) {
                    return false;
                }
            }
        }
        return true;
    }

    [[nodiscard]] T trace() const {
        T acc{};
        for (std::size_t i = 0; i < dim_; ++i) {
            acc += (*this)(i, i);
        }
        return acc;
    }

    bool operator==(const DenseOperator &other) const = default;

  private:
    std::size_t n_qubits_;
    std::size_t dim_;
    std::vector<T> entries_;
};

using IntegerOperator = DenseOperator<std::int64_t>;
using RealOperator = DenseOperator<double>;

/// The scaled probability-current operator: entry (m, n) = m + n.
IntegerOperator dense_current_matrix(std::size_t n_qubits,
                                     std::size_t max_qubits = kDefaultDenseCap);

/// Expanded Pauli decomposition of the current operator, built with the
/// block recursion  J_N = C_1 (x) J_{N-1} + 2^{N-1} J_1 (x) C_1^{(x)(N-1)},
/// where J_1 = I + X - Z and C_1 = I + X.
WeightedPauliSum current_decomposition(std::size_t n_qubits);

/// Closed-form number of non-identity terms in current_decomposition(N):
/// 2^N + N 2^{N-1} - 1.
std::uint64_t term_count(std::size_t n_qubits);

/// lambda0 I + sum_k lambda_k V_k as a dense real matrix. Throws
/// InvalidArgument if some term has imaginary entries (odd number of Y).
RealOperator realize_dense(const WeightedPauliSum &sum, std::size_t max_qubits = kDefaultDenseCap);

/// Exact integer realization. Throws InvalidArgument unless every
/// coefficient is an integer and every term is real.
IntegerOperator realize_dense_integer(const WeightedPauliSum &sum,
                                      std::size_t max_qubits = kDefaultDenseCap);

} // namespace backflow
