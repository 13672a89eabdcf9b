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

#include "backflow/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <string>

namespace backflow {

namespace {

constexpr std::size_t kMaxDecompositionQubits = 20;

// I < X < Y < Z
int letter_rank(bool x, bool z) {
    if (!x && !z) {
        return 0;
    }
    if (x && !z) {
        return 1;
    }
    return x ? 2 : 3;
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string signed_coefficient(double c) {
    std::string out = std::signbit(c) ? "-" : "+";
    out += format_number(std::fabs(c));
    return out;
}

void check_dense_cap(std::size_t n_qubits, std::size_t max_qubits) {
    if (n_qubits < 1) {
        throw InvalidArgument("dense operator needs at least one qubit");
    }
    if (n_qubits > max_qubits) {
        throw DimensionTooLarge("dense operator on " + std::to_string(n_qubits) +
                                " qubits exceeds the cap of " + std::to_string(max_qubits));
    }
}

// Nonzero entry of a Pauli string in column `col`: row col^x, value
// i^{|x&z|} (-1)^{popcount(z&col)}. Only the real part is returned; callers
// reject strings with an odd Y count beforehand.
int real_phase(const PauliString &p, std::uint64_t col) {
    const int y = std::popcount(p.x_mask() & p.z_mask());
    const int sign_bits = std::popcount(p.z_mask() & col) + y / 2;
    return (sign_bits & 1) ? -1 : 1;
}

template <class T, class Coeff>
DenseOperator<T> realize(const WeightedPauliSum &sum, std::size_t max_qubits, Coeff coeff_of) {
    check_dense_cap(sum.n_qubits(), max_qubits);
    for (const auto &term : sum.terms()) {
        if (term.count(Pauli::Y) % 2 != 0) {
            throw InvalidArgument("term " + term.word() + " has imaginary matrix entries");
        }
    }
    DenseOperator<T> out(sum.n_qubits());
    const std::size_t dim = out.dim();
    const T lambda0 = coeff_of(sum.identity_weight());
    for (std::size_t i = 0; i < dim; ++i) {
        out(i, i) = lambda0;
    }
    for (const auto &term : sum.terms()) {
        const T c = coeff_of(term.coefficient());
        for (std::uint64_t col = 0; col < dim; ++col) {
            const std::uint64_t row = col ^ term.x_mask();
            out(row, col) += real_phase(term, col) * c;
        }
    }
    return out;
}

} // namespace

char to_char(Pauli p) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    return kLetters[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
    case 'I':
    case '_':
        return Pauli::I;
    case 'X':
        return Pauli::X;
    case 'Y':
        return Pauli::Y;
    case 'Z':
        return Pauli::Z;
    default:
        throw InvalidArgument(std::string("not a Pauli letter: '") + c + "'");
    }
}

PauliString::PauliString(std::size_t n_qubits, double coefficient)
    : n_qubits_(n_qubits), coefficient_(coefficient) {
    if (n_qubits < 1 || n_qubits > kMaxPauliQubits) {
        throw InvalidArgument("Pauli string length must be in [1, 63], got " +
                              std::to_string(n_qubits));
    }
    if (!std::isfinite(coefficient)) {
        throw InvalidArgument("Pauli string coefficient must be finite");
    }
}

PauliString PauliString::from_word(std::string_view word, double coefficient) {
    PauliString p(word.size(), coefficient);
    for (std::size_t i = 0; i < word.size(); ++i) {
        p.set_letter(i, pauli_from_char(word[i]));
    }
    return p;
}

PauliString PauliString::parse(std::string_view text) {
    const auto star = text.find('*');
    if (star == std::string_view::npos) {
        double sign = 1.0;
        if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
            sign = text.front() == '-' ? -1.0 : 1.0;
            text.remove_prefix(1);
        }
        return from_word(text, sign);
    }
    std::string_view number = text.substr(0, star);
    double sign = 1.0;
    if (!number.empty() && (number.front() == '+' || number.front() == '-')) {
        sign = number.front() == '-' ? -1.0 : 1.0;
        number.remove_prefix(1);
    }
    double magnitude = 0.0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), magnitude);
    if (ec != std::errc() || ptr != number.data() + number.size() || number.empty()) {
        throw InvalidArgument("cannot parse coefficient in '" + std::string(text) + "'");
    }
    return from_word(text.substr(star + 1), sign * magnitude);
}

Pauli PauliString::letter(std::size_t position) const {
    if (position >= n_qubits_) {
        throw InvalidArgument("letter position out of range");
    }
    const bool x = (x_mask_ & bit(position)) != 0;
    const bool z = (z_mask_ & bit(position)) != 0;
    if (x) {
        return z ? Pauli::Y : Pauli::X;
    }
    return z ? Pauli::Z : Pauli::I;
}

void PauliString::set_letter(std::size_t position, Pauli p) {
    if (position >= n_qubits_) {
        throw InvalidArgument("letter position out of range");
    }
    const std::uint64_t b = bit(position);
    x_mask_ &= ~b;
    z_mask_ &= ~b;
    if (p == Pauli::X || p == Pauli::Y) {
        x_mask_ |= b;
    }
    if (p == Pauli::Z || p == Pauli::Y) {
        z_mask_ |= b;
    }
}

std::size_t PauliString::weight() const noexcept {
    return static_cast<std::size_t>(std::popcount(x_mask_ | z_mask_));
}

std::size_t PauliString::count(Pauli p) const noexcept {
    switch (p) {
    case Pauli::I:
        return n_qubits_ - weight();
    case Pauli::X:
        return static_cast<std::size_t>(std::popcount(x_mask_ & ~z_mask_));
    case Pauli::Y:
        return static_cast<std::size_t>(std::popcount(x_mask_ & z_mask_));
    case Pauli::Z:
        return static_cast<std::size_t>(std::popcount(z_mask_ & ~x_mask_));
    }
    return 0;
}

std::string PauliString::word() const {
    std::string out(n_qubits_, 'I');
    for (std::size_t i = 0; i < n_qubits_; ++i) {
        out[i] = to_char(letter(i));
    }
    return out;
}

std::string PauliString::str() const { return signed_coefficient(coefficient_) + "*" + word(); }

PauliString PauliString::with_coefficient(double c) const {
    PauliString out = *this;
    if (!std::isfinite(c)) {
        throw InvalidArgument("Pauli string coefficient must be finite");
    }
    out.coefficient_ = c;
    return out;
}

std::strong_ordering PauliString::compare_word(const PauliString &other) const noexcept {
    if (n_qubits_ != other.n_qubits_) {
        return n_qubits_ <=> other.n_qubits_;
    }
    const std::uint64_t diff = (x_mask_ ^ other.x_mask_) | (z_mask_ ^ other.z_mask_);
    if (diff == 0) {
        return std::strong_ordering::equal;
    }
    // Highest differing bit is the leftmost differing position.
    const std::uint64_t b = std::uint64_t{1} << (63 - std::countl_zero(diff));
    const int mine = letter_rank((x_mask_ & b) != 0, (z_mask_ & b) != 0);
    const int theirs = letter_rank((other.x_mask_ & b) != 0, (other.z_mask_ & b) != 0);
    return mine <=> theirs;
}

PauliString tensor(const PauliString &left, const PauliString &right) {
    PauliString out(left.n_qubits() + right.n_qubits(),
                    left.coefficient() * right.coefficient());
    const auto shift = static_cast<int>(right.n_qubits());
    out.x_mask_ = (left.x_mask_ << shift) | right.x_mask_;
    out.z_mask_ = (left.z_mask_ << shift) | right.z_mask_;
    return out;
}

WeightedPauliSum::WeightedPauliSum(std::size_t n_qubits, double identity_weight)
    : n_qubits_(n_qubits), identity_weight_(identity_weight) {
    if (n_qubits < 1 || n_qubits > kMaxPauliQubits) {
        throw InvalidArgument("Pauli sum needs between 1 and 63 qubits");
    }
    if (!std::isfinite(identity_weight)) {
        throw InvalidArgument("identity weight must be finite");
    }
}

WeightedPauliSum WeightedPauliSum::from_terms(std::size_t n_qubits, double identity_weight,
                                              std::vector<PauliString> terms) {
    WeightedPauliSum out(n_qubits, identity_weight);
    for (const auto &t : terms) {
        if (t.n_qubits() != n_qubits) {
            throw InvalidArgument("term " + t.word() + " does not act on " +
                                  std::to_string(n_qubits) + " qubits");
        }
    }
    out.terms_ = std::move(terms);
    out.canonicalize();
    return out;
}

void WeightedPauliSum::canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const PauliString &a, const PauliString &b) {
        return a.compare_word(b) < 0;
    });
    std::vector<PauliString> merged;
    merged.reserve(terms_.size());
    for (const auto &t : terms_) {
        if (t.is_identity()) {
            identity_weight_ += t.coefficient();
            continue;
        }
        if (!merged.empty() && merged.back().same_word(t)) {
            merged.back() = merged.back().with_coefficient(merged.back().coefficient() +
                                                           t.coefficient());
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const PauliString &t) { return t.coefficient() == 0.0; });
    terms_ = std::move(merged);
}

std::size_t WeightedPauliSum::find(std::string_view word) const {
    if (word.size() != n_qubits_) {
        return terms_.size();
    }
    const PauliString probe = PauliString::from_word(word);
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), probe,
        [](const PauliString &a, const PauliString &b) { return a.compare_word(b) < 0; });
    if (it != terms_.end() && it->same_word(probe)) {
        return static_cast<std::size_t>(it - terms_.begin());
    }
    return terms_.size();
}

std::string WeightedPauliSum::str() const {
    std::string out = format_number(identity_weight_);
    for (const auto &t : terms_) {
        out += ' ';
        out += t.str();
    }
    return out;
}

WeightedPauliSum &WeightedPauliSum::operator+=(const WeightedPauliSum &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw InvalidArgument("cannot add Pauli sums on different qubit counts");
    }
    identity_weight_ += other.identity_weight_;
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
}

WeightedPauliSum operator*(double scale, const WeightedPauliSum &sum) {
    std::vector<PauliString> terms;
    terms.reserve(sum.size());
    for (const auto &t : sum.terms()) {
        terms.push_back(t.with_coefficient(scale * t.coefficient()));
    }
    return WeightedPauliSum::from_terms(sum.n_qubits(), scale * sum.identity_weight(),
                                        std::move(terms));
}

WeightedPauliSum tensor(const WeightedPauliSum &left, const WeightedPauliSum &right) {
    const auto with_identity = [](const WeightedPauliSum &s) {
        std::vector<PauliString> all;
        all.reserve(s.size() + 1);
        if (s.identity_weight() != 0.0) {
            all.emplace_back(s.n_qubits(), s.identity_weight());
        }
        all.insert(all.end(), s.terms().begin(), s.terms().end());
        return all;
    };
    const auto lhs = with_identity(left);
    const auto rhs = with_identity(right);
    std::vector<PauliString> products;
    products.reserve(lhs.size() * rhs.size());
    for (const auto &a : lhs) {
        for (const auto &b : rhs) {
            products.push_back(tensor(a, b));
        }
    }
    return WeightedPauliSum::from_terms(left.n_qubits() + right.n_qubits(), 0.0,
                                        std::move(products));
}

IntegerOperator dense_current_matrix(std::size_t n_qubits, std::size_t max_qubits) {
    check_dense_cap(n_qubits, max_qubits);
    IntegerOperator out(n_qubits);
    for (std::size_t m = 0; m < out.dim(); ++m) {
        for (std::size_t n = 0; n < out.dim(); ++n) {
            out(m, n) = static_cast<std::int64_t>(m + n);
        }
    }
    return out;
}

WeightedPauliSum current_decomposition(std::size_t n_qubits) {
    if (n_qubits < 1) {
        throw InvalidArgument("current decomposition needs at least one qubit");
    }
    if (n_qubits > kMaxDecompositionQubits) {
        throw DimensionTooLarge("current decomposition is limited to " +
                                std::to_string(kMaxDecompositionQubits) + " qubits");
    }
    const WeightedPauliSum ones = WeightedPauliSum::from_terms(1, 1.0, {PauliString::from_word("X")});
    const WeightedPauliSum j1 = WeightedPauliSum::from_terms(
        1, 1.0, {PauliString::from_word("X"), PauliString::from_word("Z", -1.0)});

    WeightedPauliSum current = j1;
    WeightedPauliSum ones_power = ones; // C_1^{(x)(N-1)}
    for (std::size_t n = 2; n <= n_qubits; ++n) {
        const double block_shift = std::ldexp(1.0, static_cast<int>(n - 1));
        current = tensor(ones, current) + block_shift * tensor(j1, ones_power);
        if (n < n_qubits) {
            ones_power = tensor(ones, ones_power);
        }
    }
    return current;
}

std::uint64_t term_count(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxPauliQubits - 6) {
        throw InvalidArgument("term_count is defined for 1 <= N <= 57");
    }
    const std::uint64_t p = std::uint64_t{1} << n_qubits;
    return p + n_qubits * (p >> 1) - 1;
}

RealOperator realize_dense(const WeightedPauliSum &sum, std::size_t max_qubits) {
    return realize<double>(sum, max_qubits, [](double c) { return c; });
}

IntegerOperator realize_dense_integer(const WeightedPauliSum &sum, std::size_t max_qubits) {
    const auto to_integer = [](double c) {
        if (c != std::nearbyint(c) || std::fabs(c) > 9.0e15) {
            throw InvalidArgument("coefficient is not an exactly representable integer");
        }
        return static_cast<std::int64_t>(c);
    };
    to_integer(sum.identity_weight());
    for (const auto &t : sum.terms()) {
        to_integer(t.coefficient());
    }
    return realize<std::int64_t>(sum, max_qubits, to_integer);
}

} // namespace backflow
