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

#ifndef TURBOLATTICE_BITS_HPP
#define TURBOLATTICE_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace turbolattice {

/// Packed vector over GF(2).
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(std::size_t size);
    /// Parses a string of '0'/'1' characters, index 0 first.
    static BitVector from_string(std::string_view bits);
    static BitVector from_bytes(std::span<const std::uint8_t> bits);
    static BitVector unit(std::size_t size, std::size_t index);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool operator[](std::size_t i) const noexcept { return get(i); }
    void set(std::size_t i, bool value = true) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    std::size_t weight() const noexcept;
    bool is_zero() const noexcept;
    /// Concatenation `*this | tail`.
    BitVector concat(const BitVector& tail) const;
    BitVector slice(std::size_t first, std::size_t count) const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::vector<std::uint8_t> to_bytes() const;
    std::string to_string() const;

   private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Dense matrix over GF(2), stored as packed rows.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);
    static BitMatrix identity(std::size_t n);
    /// One string of '0'/'1' per row; all rows must have equal length.
    static BitMatrix from_strings(const std::vector<std::string>& rows);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const noexcept { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool value = true) noexcept { rows_[r].set(c, value); }
    const BitVector& row(std::size_t r) const noexcept { return rows_[r]; }
    BitVector& row(std::size_t r) noexcept { return rows_[r]; }

    /// Row vector times matrix: XOR of the rows selected by `u`.
    BitVector left_multiply(const BitVector& u) const;
    BitMatrix operator*(const BitMatrix& rhs) const;
    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

    BitMatrix transpose() const;
    BitMatrix power(std::uint64_t exponent) const;
    BitMatrix top_rows(std::size_t count) const;
    BitMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
    BitMatrix hstack(const BitMatrix& right) const;
    BitMatrix vstack(const BitMatrix& below) const;
    void place(const BitMatrix& src, std::size_t row0, std::size_t col0);

    std::size_t rank() const;
    /// GF(2) determinant of a square matrix.
    bool determinant() const;
    /// True iff every row of `other` lies in the row space of `*this`.
    bool row_space_contains(const BitMatrix& other) const;

    std::vector<std::string> to_strings() const;

   private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Reduced row echelon form; pivots are chosen leftmost first.
struct Echelon {
    BitMatrix reduced;                ///< rank × cols, rows ordered by pivot column
    std::vector<std::size_t> pivots;  ///< pivot column of each reduced row
};
Echelon row_echelon(const BitMatrix& m);

/// Recovers the message u of a codeword c = u·G for a full-row-rank G.
class MessageRecovery {
   public:
    MessageRecovery() = default;
    explicit MessageRecovery(const BitMatrix& generator);

    std::size_t message_length() const noexcept { return columns_.size(); }
    /// Information set: columns where G restricted is invertible.
    const std::vector<std::size_t>& columns() const noexcept { return columns_; }
    BitVector recover(const BitVector& codeword) const;

   private:
    std::vector<std::size_t> columns_;
    BitMatrix inverse_;  // inverse of G restricted to `columns_`
};

}  // namespace turbolattice

#endif
