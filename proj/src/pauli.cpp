// Copyright 2026 The symflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "symflow/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace symflow {

namespace {

constexpr std::size_t kMaxQubits = 30;

void check_word(std::string_view word, std::size_t n_qubits) {
    if (word.size() != n_qubits) {
        throw SpecError("Pauli word '" + std::string(word) + "' has length " +
                        std::to_string(word.size()) + ", expected " + std::to_string(n_qubits));
    }
    for (char c : word) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw SpecError("invalid Pauli letter '" + std::string(1, c) + "' in word '" +
                            std::string(word) + "'");
        }
    }
}

complex_t i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

std::size_t qubits_for_dim(Eigen::Index d, const char *what) {
    if (d <= 0 || (static_cast<std::uint64_t>(d) & (static_cast<std::uint64_t>(d) - 1)) != 0) {
        throw ShapeError(std::string(what) + ": dimension " + std::to_string(d) +
                         " is not a power of 2");
    }
    return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(d)));
}

} // namespace

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > kMaxQubits) {
        throw ShapeError("PauliSum: too many qubits");
    }
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
    if (n_qubits > kMaxQubits) {
        throw ShapeError("PauliSum: too many qubits");
    }
    for (const auto &t : terms_) {
        check_word(t.word, n_qubits_);
    }
    canonicalize();
}

void PauliSum::canonicalize() {
    std::map<std::string, complex_t> merged;
    for (const auto &t : terms_) {
        merged[t.word] += t.coeff;
    }
    terms_.clear();
    for (const auto &[word, coeff] : merged) {
        if (coeff != complex_t(0.0, 0.0)) {
            terms_.push_back({coeff, word});
        }
    }
}

bool PauliSum::is_hermitian(double tol) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const PauliTerm &t) { return std::abs(t.coeff.imag()) <= tol; });
}

bool PauliSum::is_skew_hermitian(double tol) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const PauliTerm &t) { return std::abs(t.coeff.real()) <= tol; });
}

PauliSum PauliSum::scaled(complex_t factor) const {
    std::vector<PauliTerm> terms = terms_;
    for (auto &t : terms) {
        t.coeff *= factor;
    }
    return PauliSum(n_qubits_, std::move(terms));
}

PauliSum &PauliSum::operator+=(const PauliSum &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw ShapeError("PauliSum addition: qubit counts differ");
    }
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
}

WordMasks word_masks(std::string_view word) {
    WordMasks m;
    const std::size_t n = word.size();
    for (std::size_t q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (word[q]) {
        case 'X':
            m.x |= bit;
            break;
        case 'Y':
            m.x |= bit;
            m.z |= bit;
            ++m.n_y;
            break;
        case 'Z':
            m.z |= bit;
            break;
        default:
            break;
        }
    }
    return m;
}

namespace {

class Parser {
  public:
    Parser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

    PauliSum parse() {
        skip_ws();
        if (pos_ == text_.size()) {
            return PauliSum(n_);
        }
        std::vector<PauliTerm> terms;
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = take() == '-' ? -1.0 : 1.0;
        }
        while (true) {
            terms.push_back(parse_term(sign));
            skip_ws();
            if (pos_ == text_.size()) {
                break;
            }
            const char c = take();
            if (c != '+' && c != '-') {
                fail("expected '+' or '-'");
            }
            sign = c == '-' ? -1.0 : 1.0;
        }
        return PauliSum(n_, std::move(terms));
    }

  private:
    PauliTerm parse_term(double sign) {
        skip_ws();
        complex_t coeff{sign, 0.0};
        bool have_coeff = false;
        const char c0 = peek();
        if ((c0 >= '0' && c0 <= '9') || c0 == '.') {
            double value = 0.0;
            const char *begin = text_.data() + pos_;
            const char *end = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || !std::isfinite(value)) {
                fail("malformed coefficient");
            }
            pos_ += static_cast<std::size_t>(ptr - begin);
            have_coeff = true;
            if (peek() == 'i' || peek() == 'j') {
                ++pos_;
                coeff = complex_t(0.0, sign * value);
            } else {
                coeff = complex_t(sign * value, 0.0);
            }
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            }
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_letter(text_[pos_])) {
            ++pos_;
        }
        if (pos_ == start) {
            fail(have_coeff ? "coefficient without a Pauli word" : "expected a term");
        }
        const std::string_view word = text_.substr(start, pos_ - start);
        check_word(word, n_);
        return {coeff, std::string(word)};
    }

    static bool is_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }
    [[noreturn]] void fail(const std::string &msg) const {
        throw SpecError("Pauli sum parse error at position " + std::to_string(pos_) + " in '" +
                        std::string(text_) + "': " + msg);
    }

    std::string_view text_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

std::string format_number(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

} // namespace

PauliSum parse_pauli_sum(std::string_view text, std::size_t n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw SpecError("parse_pauli_sum: invalid qubit count " + std::to_string(n_qubits));
    }
    const auto first = text.find_first_not_of(" \t");
    const auto last = text.find_last_not_of(" \t");
    if (first != std::string_view::npos && text.substr(first, last - first + 1) == "0") {
        return PauliSum(n_qubits, {});
    }
    return Parser(text, n_qubits).parse();
}

std::string format_pauli_sum(const PauliSum &p, int precision) {
    std::string out;
    auto emit = [&](double value, bool imaginary, const std::string &word) {
        const bool negative = std::signbit(value);
        if (out.empty()) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        out += format_number(std::abs(value), precision);
        if (imaginary) {
            out += "i";
        }
        out += "*";
        out += word;
    };
    for (const auto &t : p.terms()) {
        if (t.coeff.real() != 0.0) {
            emit(t.coeff.real(), false, t.word);
        }
        if (t.coeff.imag() != 0.0) {
            emit(t.coeff.imag(), true, t.word);
        }
    }
    return out.empty() ? std::string("0") : out;
}

ComplexMatrix pauli_word_matrix(std::string_view word) {
    const std::size_t n = word.size();
    const std::uint64_t d = std::uint64_t{1} << n;
    const WordMasks m = word_masks(word);
    const complex_t base = i_power(m.n_y);
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::uint64_t b = 0; b < d; ++b) {
        const double sign = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
        out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) = base * sign;
    }
    return out;
}

ComplexMatrix to_matrix(const PauliSum &p) {
    const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << p.n_qubits());
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto &t : p.terms()) {
        const WordMasks m = word_masks(t.word);
        const complex_t base = t.coeff * i_power(m.n_y);
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(d); ++b) {
            const double sign = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
            out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) += base * sign;
        }
    }
    return out;
}

ComplexVector apply_pauli_sum(const PauliSum &p, const ComplexVector &v) {
    const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << p.n_qubits());
    if (v.size() != d) {
        throw ShapeError("apply_pauli_sum: vector length " + std::to_string(v.size()) +
                         " does not match 2^" + std::to_string(p.n_qubits()));
    }
    ComplexVector out = ComplexVector::Zero(d);
    for (const auto &t : p.terms()) {
        const WordMasks m = word_masks(t.word);
        const complex_t base = t.coeff * i_power(m.n_y);
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(d); ++b) {
            const double sign = (std::popcount(b & m.z) & 1) ? -1.0 : 1.0;
            out(static_cast<Eigen::Index>(b ^ m.x)) += base * sign * v(static_cast<Eigen::Index>(b));
        }
    }
    return out;
}

complex_t expectation(const PauliSum &p, const ComplexVector &v) {
    return v.dot(apply_pauli_sum(p, v));
}

std::string pauli_word_from_index(std::size_t index, std::size_t n_qubits) {
    static constexpr char letters[4] = {'I', 'X', 'Y', 'Z'};
    std::string word(n_qubits, 'I');
    for (std::size_t q = n_qubits; q-- > 0;) {
        word[q] = letters[index & 3U];
        index >>= 2U;
    }
    return word;
}

ComplexVector pauli_coefficients(const ComplexMatrix &m) {
    require_square(m, "pauli_decompose");
    const std::size_t n = qubits_for_dim(m.rows(), "pauli_decompose");
    const std::uint64_t d = std::uint64_t{1} << n;
    const std::size_t n_words = std::size_t{1} << (2 * n);
    ComplexVector out(static_cast<Eigen::Index>(n_words));
    for (std::size_t w = 0; w < n_words; ++w) {
        // Word index digits: I=0, X=1, Y=2, Z=3 per qubit, most significant first.
        std::uint64_t xm = 0;
        std::uint64_t zm = 0;
        int ny = 0;
        for (std::size_t q = 0; q < n; ++q) {
            const auto digit = (w >> (2 * (n - 1 - q))) & 3U;
            const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
            if (digit == 1 || digit == 2) {
                xm |= bit;
            }
            if (digit == 2 || digit == 3) {
                zm |= bit;
            }
            ny += digit == 2 ? 1 : 0;
        }
        // tr(P m) = sum_c P_{c^x, c} m_{c, c^x}
        complex_t acc{0.0, 0.0};
        for (std::uint64_t c = 0; c < d; ++c) {
            const double sign = (std::popcount(c & zm) & 1) ? -1.0 : 1.0;
            acc += sign * m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ xm));
        }
        out(static_cast<Eigen::Index>(w)) = i_power(ny) * acc / static_cast<double>(d);
    }
    return out;
}

PauliSum pauli_decompose(const ComplexMatrix &m, double prune) {
    const ComplexVector coeffs = pauli_coefficients(m);
    const std::size_t n = qubits_for_dim(m.rows(), "pauli_decompose");
    std::vector<PauliTerm> terms;
    for (Eigen::Index w = 0; w < coeffs.size(); ++w) {
        complex_t c = coeffs(w);
        const double re = std::abs(c.real()) < prune ? 0.0 : c.real();
        const double im = std::abs(c.imag()) < prune ? 0.0 : c.imag();
        if (re != 0.0 || im != 0.0) {
            terms.push_back({complex_t(re, im), pauli_word_from_index(static_cast<std::size_t>(w), n)});
        }
    }
    return PauliSum(n, std::move(terms));
}

ComplexMatrix UnitaryDecomposition::reconstruct() const {
    if (terms.empty()) {
        return ComplexMatrix(0, 0);
    }
    ComplexMatrix out = terms.front().chi * to_matrix(terms.front().w);
    for (std::size_t k = 1; k < terms.size(); ++k) {
        out += terms[k].chi * to_matrix(terms[k].w);
    }
    return out;
}

UnitaryDecomposition unitary_decomposition(const ComplexMatrix &z) {
    require_square(z, "unitary_decomposition");
    const std::size_t n = qubits_for_dim(z.rows(), "unitary_decomposition");
    const double magnitude = std::max(1.0, z.cwiseAbs().maxCoeff());
    if (skew_defect(z) > kSkewTol * magnitude) {
        throw ContractViolation("unitary_decomposition: input is not skew-Hermitian");
    }
    // z = i h with h Hermitian; chi_l = i * (real coefficient of h).
    const PauliSum h = pauli_decompose(complex_t(0.0, -1.0) * z);
    UnitaryDecomposition out;
    for (const auto &t : h.terms()) {
        if (std::abs(t.coeff.real()) < kPruneTol) {
            continue;
        }
        out.terms.push_back({complex_t(0.0, t.coeff.real()), PauliSum(n, {{complex_t(1.0, 0.0), t.word}})});
    }
    return out;
}

PauliSum embed_pauli_sum(const PauliSum &local, const std::vector<int> &wires,
                         std::size_t n_qubits) {
    if (local.n_qubits() != wires.size()) {
        throw ShapeError("embed_pauli_sum: " + std::to_string(local.n_qubits()) +
                         "-qubit sum placed on " + std::to_string(wires.size()) + " wires");
    }
    std::vector<PauliTerm> terms;
    terms.reserve(local.terms().size());
    for (const auto &t : local.terms()) {
        std::string word(n_qubits, 'I');
        for (std::size_t k = 0; k < wires.size(); ++k) {
            const int w = wires[k];
            if (w < 0 || static_cast<std::size_t>(w) >= n_qubits) {
                throw ShapeError("embed_pauli_sum: wire " + std::to_string(w) + " out of range");
            }
            word[static_cast<std::size_t>(w)] = t.word[k];
        }
        terms.push_back({t.coeff, std::move(word)});
    }
    return PauliSum(n_qubits, std::move(terms));
}

} // namespace symflow
