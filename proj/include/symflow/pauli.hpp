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
#pragma once
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "symflow/nummat.hpp"

namespace symflow {

struct PauliTerm {
    complex_t coeff;
    std::string word;
};

/**
 * @brief Linear combination of Pauli words on a fixed number of qubits.
 *
 * Terms are kept in canonical form: unique words sorted lexicographically
 * with I < X < Y < Z, zero coefficients removed. Word position 0 is the most
 * significant qubit of the matrix index.
 */
class PauliSum {
  public:
    PauliSum() = default;
    explicit PauliSum(std::size_t n_qubits);
    PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    [[nodiscard]] bool is_hermitian(double tol = kSkewTol) const;
    [[nodiscard]] bool is_skew_hermitian(double tol = kSkewTol) const;

    [[nodiscard]] PauliSum scaled(complex_t factor) const;
    PauliSum &operator+=(const PauliSum &other);
    friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
    friend bool operator==(const PauliSum &a, const PauliSum &b) {
        if (a.n_qubits_ != b.n_qubits_ || a.terms_.size() != b.terms_.size()) {
            return false;
        }
        for (std::size_t k = 0; k < a.terms_.size(); ++k) {
            if (a.terms_[k].word != b.terms_[k].word || a.terms_[k].coeff != b.terms_[k].coeff) {
                return false;
            }
        }
        return true;
    }

  private:
    void canonicalize();

    std::size_t n_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Bit masks of a Pauli word: P|b> = i^{n_y} (-1)^{popcount(b & z)} |b ^ x>.
struct WordMasks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int n_y = 0;
};
WordMasks word_masks(std::string_view word);

/// "0" parses to the empty sum, which is also how format_pauli_sum prints it.
PauliSum parse_pauli_sum(std::string_view text, std::size_t n_qubits);
std::string format_pauli_sum(const PauliSum &p, int precision = 17);

ComplexMatrix to_matrix(const PauliSum &p);
ComplexMatrix pauli_word_matrix(std::string_view word);
/// p applied to a statevector without forming the matrix.
ComplexVector apply_pauli_sum(const PauliSum &p, const ComplexVector &v);
/// <v|p|v>
complex_t expectation(const PauliSum &p, const ComplexVector &v);

/// Pauli coefficients tr(P m)/d for every word; coefficients below prune are dropped.
PauliSum pauli_decompose(const ComplexMatrix &m, double prune = kPruneTol);
/// Dense coefficient vector tr(P m)/d over all 4^n words in canonical order.
ComplexVector pauli_coefficients(const ComplexMatrix &m);
/// Word for a canonical index in [0, 4^n).
std::string pauli_word_from_index(std::size_t index, std::size_t n_qubits);

struct UnitaryTerm {
    complex_t chi;
    PauliSum w;
};

/// z = sum chi_l w_l with each w_l a single Pauli word.
struct UnitaryDecomposition {
    std::vector<UnitaryTerm> terms;
    [[nodiscard]] ComplexMatrix reconstruct() const;
};

UnitaryDecomposition unitary_decomposition(const ComplexMatrix &z);

/// Places a Pauli sum on `wires` of an n-qubit register (identity elsewhere).
PauliSum embed_pauli_sum(const PauliSum &local, const std::vector<int> &wires,
                         std::size_t n_qubits);

} // namespace symflow
