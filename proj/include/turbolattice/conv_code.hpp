/*
   Copyright 2026 The turbolattice Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TURBOLATTICE_CONV_CODE_HPP
#define TURBOLATTICE_CONV_CODE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "turbolattice/bits.hpp"
#include "turbolattice/gf2_poly.hpp"

namespace turbolattice {

/// Systematic feed-back encoder G(x) = [I_K | q_{i,j}(x) / r_i(x)].
///
/// Row i has one feed-back polynomial r_i and N-K feed-forward polynomials
/// q_{i,j}, with r_i(0) = 1. Entries need not be in lowest terms: a common factor
/// of q_{i,j} and r_i changes the encoder but not the tail-bitten block code.
class RationalGeneratorMatrix {
   public:
    /// `numerators[i][j]` is q_{i,K+1+j}; `denominators[i]` is r_i.
    RationalGeneratorMatrix(std::vector<std::vector<BinaryPolynomial>> numerators,
                            std::vector<BinaryPolynomial> denominators);

    /// Text form: one line per row, entries "q/r" in the low-to-high bit string
    /// format, separated by whitespace. Every entry of a row shares its r.
    static RationalGeneratorMatrix parse(std::string_view text);
    std::string to_text() const;

    /// True iff every nonzero q_{i,j} is coprime to r_i.
    bool reduced() const;

    std::size_t inputs() const noexcept { return r_.size(); }             ///< K
    std::size_t outputs() const noexcept { return inputs() + parities(); }  ///< N
    std::size_t parities() const noexcept { return q_.empty() ? 0 : q_.front().size(); }

    const BinaryPolynomial& feedback(std::size_t i) const { return r_.at(i); }
    const BinaryPolynomial& feedforward(std::size_t i, std::size_t j) const { return q_.at(i).at(j); }

    /// m = max deg r_i.
    std::size_t memory() const noexcept;
    /// Register length of input i in controller form: max(deg r_i, deg q_{i,j}).
    std::size_t register_length(std::size_t i) const;
    /// nu: total number of state bits.
    std::size_t constraint_length() const noexcept;

   private:
    std::vector<std::vector<BinaryPolynomial>> q_;
    std::vector<BinaryPolynomial> r_;
};

/// Binary state-transition matrix of the observer canonical realization of 1/r(x):
/// ones on the subdiagonal and (r_m, ..., r_1) down the last column.
BitMatrix observer_state_matrix(const BinaryPolynomial& r);

/// True iff gcd(r, x^L - 1) = 1.
bool tailbiting_feasible(const BinaryPolynomial& r, std::size_t length);

enum class BlockForm { tail_biting, terminated };

/// Block code obtained from a convolutional encoder.
///
/// Columns are stream-major: the LK information columns first (an identity
/// block, input i at time t in column i*L + t), then for terminated codes the
/// K*m systematic tail columns, then each parity stream j over all `steps()`
/// time steps.
struct BlockGenerator {
    BitMatrix bits;
    BlockForm form = BlockForm::tail_biting;
    std::size_t inputs = 0;        ///< K
    std::size_t outputs = 0;       ///< N
    std::size_t length = 0;        ///< L
    std::size_t tail = 0;          ///< m for terminated codes, 0 for tail-biting

    std::size_t rows() const noexcept { return bits.rows(); }
    std::size_t cols() const noexcept { return bits.cols(); }
    std::size_t steps() const noexcept { return length + tail; }
    /// Systematic columns (information plus systematic tail).
    std::size_t systematic_columns() const noexcept { return inputs * steps(); }
    std::size_t parity_columns() const noexcept { return (outputs - inputs) * steps(); }
    /// Column carrying parity stream j at time step t.
    std::size_t parity_column(std::size_t j, std::size_t t) const noexcept {
        return systematic_columns() + j * steps() + t;
    }
    /// Column carrying systematic stream i at step t (t >= L addresses the tail).
    std::size_t systematic_column(std::size_t i, std::size_t t) const noexcept {
        return t < length ? i * length + t : inputs * length + i * tail + (t - length);
    }
    BitMatrix parity_part() const { return bits.block(0, systematic_columns(), rows(), parity_columns()); }
};

/// [I_LK | F] with F block (i, j) = circulant(solve_f(q_ij, r_i, L)).
/// Throws NotCoprime naming the first infeasible row.
BlockGenerator tailbite(const RationalGeneratorMatrix& g, std::size_t length);

/// Zero-tail block code: L information steps followed by m flush steps that
/// drive every register back to zero. Codeword length N(L + m).
BlockGenerator terminate(const RationalGeneratorMatrix& g, std::size_t length);

/// u·B over GF(2).
BitVector encode_block(const BlockGenerator& b, const BitVector& u);

/// Shift-register encoder in controller canonical form (one feed-back register per input).
///
/// The state packs the registers of all inputs; bit d of input i's register
/// holds w_i[t-1-d].
class ConvolutionalEncoder {
   public:
    explicit ConvolutionalEncoder(const RationalGeneratorMatrix& g);

    std::size_t state_bits() const noexcept { return total_bits_; }
    std::uint32_t state_count() const noexcept { return std::uint32_t{1} << total_bits_; }

    struct Step {
        std::uint32_t next_state;
        std::uint32_t parity;  ///< bit j = parity stream j
    };
    /// One clock with input symbol `input` (bit i = input stream i).
    Step step(std::uint32_t state, std::uint32_t input) const;
    /// Input that zeroes the register feed-back for every stream (used to flush).
    std::uint32_t flush_input(std::uint32_t state) const;

   private:
    struct Stream {
        std::size_t offset;  // first state bit of this input's register
        std::size_t length;
        std::vector<std::uint8_t> r;                  // r_0..r_len
        std::vector<std::vector<std::uint8_t>> q;     // per parity: q_0..q_len
    };
    std::uint32_t feedback_bit(const Stream& s, std::uint32_t state) const;

    std::vector<Stream> streams_;
    std::size_t parities_ = 0;
    std::size_t total_bits_ = 0;
};

enum class TrellisMode { zero_terminated, tail_biting };

/// Time-invariant trellis of a convolutional encoder over `sections()` steps.
///
/// Zero-terminated trellises have L information sections followed by m tail
/// sections in which only the flush edge leaving each state is allowed.
class Trellis {
   public:
    struct Edge {
        std::uint32_t next;
        std::uint32_t input;   ///< K information bits
        std::uint32_t output;  ///< N bits: inputs in bits 0..K-1, parities above
    };

    std::size_t inputs() const noexcept { return inputs_; }
    std::size_t outputs() const noexcept { return outputs_; }
    std::uint32_t states() const noexcept { return states_; }
    std::size_t state_bits() const noexcept { return state_bits_; }
    std::size_t length() const noexcept { return length_; }
    std::size_t tail() const noexcept { return tail_; }
    std::size_t sections() const noexcept { return length_ + tail_; }
    TrellisMode mode() const noexcept { return mode_; }
    std::uint32_t edges_per_state() const noexcept { return std::uint32_t{1} << inputs_; }

    const Edge& edge(std::uint32_t state, std::uint32_t input) const { return edges_[state * edges_per_state() + input]; }
    const Edge& flush_edge(std::uint32_t state) const { return edge(state, flush_[state]); }
    bool is_tail_section(std::size_t t) const noexcept { return t >= length_; }

   private:
    friend Trellis build_trellis(const RationalGeneratorMatrix&, std::size_t, TrellisMode);

    std::size_t inputs_ = 0;
    std::size_t outputs_ = 0;
    std::size_t state_bits_ = 0;
    std::uint32_t states_ = 0;
    std::size_t length_ = 0;
    std::size_t tail_ = 0;
    TrellisMode mode_ = TrellisMode::zero_terminated;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> flush_;
};

/// Throws NotCoprime for an infeasible tail-biting length.
Trellis build_trellis(const RationalGeneratorMatrix& g, std::size_t length, TrellisMode mode);

}  // namespace turbolattice

#endif
