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

#include "turbolattice/bits.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "turbolattice/errors.hpp"

namespace turbolattice {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

BitVector::BitVector(std::size_t size) : size_(size), words_(word_count(size), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i);
        else if (bits[i] != '0')
            throw InvalidArgument("bit string contains '" + std::string(1, bits[i]) + "'");
    }
    return v;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] != 0) v.set(i);
    return v;
}

BitVector BitVector::unit(std::size_t size, std::size_t index) {
    BitVector v(size);
    v.set(index);
    return v;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw InvalidArgument("BitVector size mismatch in xor");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

std::size_t BitVector::weight() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool BitVector::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

BitVector BitVector::concat(const BitVector& tail) const {
    BitVector out(size_ + tail.size_);
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) out.set(i);
    for (std::size_t i = 0; i < tail.size_; ++i)
        if (tail.get(i)) out.set(size_ + i);
    return out;
}

BitVector BitVector::slice(std::size_t first, std::size_t count) const {
    if (first + count > size_) throw InvalidArgument("BitVector slice out of range");
    BitVector out(count);
    for (std::size_t i = 0; i < count; ++i)
        if (get(first + i)) out.set(i);
    return out;
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = get(i) ? 1 : 0;
    return out;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    if (rows.empty()) return {};
    BitMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) throw InvalidArgument("matrix rows have unequal length");
        m.rows_[r] = BitVector::from_string(rows[r]);
    }
    return m;
}

BitVector BitMatrix::left_multiply(const BitVector& u) const {
    if (u.size() != rows()) throw InvalidArgument("message length does not match generator rows");
    BitVector out(cols_);
    for (std::size_t r = 0; r < rows(); ++r)
        if (u.get(r)) out ^= rows_[r];
    return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
    if (cols_ != rhs.rows()) throw InvalidArgument("matrix product dimension mismatch");
    BitMatrix out(rows(), rhs.cols());
    for (std::size_t r = 0; r < rows(); ++r) out.rows_[r] = rhs.left_multiply(rows_[r]);
    return out;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c)) t.set(c, r);
    return t;
}

BitMatrix BitMatrix::power(std::uint64_t exponent) const {
    if (rows() != cols_) throw InvalidArgument("power of a non-square matrix");
    BitMatrix result = identity(cols_);
    BitMatrix base = *this;
    while (exponent != 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1;
        if (exponent != 0) base = base * base;
    }
    return result;
}

BitMatrix BitMatrix::top_rows(std::size_t count) const { return block(0, 0, count, cols_); }

BitMatrix BitMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
    if (row0 + nrows > rows() || col0 + ncols > cols_) throw InvalidArgument("matrix block out of range");
    BitMatrix out(nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r) out.rows_[r] = rows_[row0 + r].slice(col0, ncols);
    return out;
}

BitMatrix BitMatrix::hstack(const BitMatrix& right) const {
    if (rows() != right.rows()) throw InvalidArgument("hstack row count mismatch");
    BitMatrix out(rows(), cols_ + right.cols_);
    for (std::size_t r = 0; r < rows(); ++r) out.rows_[r] = rows_[r].concat(right.rows_[r]);
    return out;
}

BitMatrix BitMatrix::vstack(const BitMatrix& below) const {
    if (rows() != 0 && below.rows() != 0 && cols_ != below.cols_)
        throw InvalidArgument("vstack column count mismatch");
    BitMatrix out = rows() == 0 ? below : *this;
    if (rows() != 0)
        for (const auto& r : below.rows_) out.rows_.push_back(r);
    return out;
}

void BitMatrix::place(const BitMatrix& src, std::size_t row0, std::size_t col0) {
    if (row0 + src.rows() > rows() || col0 + src.cols() > cols_) throw InvalidArgument("place out of range");
    for (std::size_t r = 0; r < src.rows(); ++r)
        for (std::size_t c = 0; c < src.cols(); ++c) set(row0 + r, col0 + c, src.get(r, c));
}

Echelon row_echelon(const BitMatrix& m) {
    std::vector<BitVector> work;
    work.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) work.push_back(m.row(r));

    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < work.size(); ++c) {
        std::size_t sel = rank;
        while (sel < work.size() && !work[sel].get(c)) ++sel;
        if (sel == work.size()) continue;
        std::swap(work[rank], work[sel]);
        for (std::size_t r = 0; r < work.size(); ++r)
            if (r != rank && work[r].get(c)) work[r] ^= work[rank];
        pivots.push_back(c);
        ++rank;
    }
    Echelon e{BitMatrix(rank, m.cols()), std::move(pivots)};
    for (std::size_t r = 0; r < rank; ++r) e.reduced.row(r) = work[r];
    return e;
}

std::size_t BitMatrix::rank() const { return row_echelon(*this).pivots.size(); }

bool BitMatrix::determinant() const {
    if (rows() != cols_) throw InvalidArgument("determinant of a non-square matrix");
    return rank() == cols_;
}

bool BitMatrix::row_space_contains(const BitMatrix& other) const {
    if (other.rows() == 0) return true;
    if (other.cols() != cols_) throw InvalidArgument("row space comparison with different lengths");
    return rank() == vstack(other).rank();
}

std::vector<std::string> BitMatrix::to_strings() const {
    std::vector<std::string> out;
    out.reserve(rows());
    for (const auto& r : rows_) out.push_back(r.to_string());
    return out;
}

MessageRecovery::MessageRecovery(const BitMatrix& generator) {
    const Echelon e = row_echelon(generator);
    if (e.pivots.size() != generator.rows()) throw InvalidArgument("generator matrix is not full row rank");
    columns_ = e.pivots;
    const std::size_t k = columns_.size();

    // Invert G restricted to the pivot columns by Gauss-Jordan on [G_J | I].
    std::vector<BitVector> left(k, BitVector(k));
    std::vector<BitVector> right(k, BitVector(k));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < k; ++j)
            if (generator.get(r, columns_[j])) left[r].set(j);
        right[r].set(r);
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t sel = c;
        while (!left[sel].get(c)) ++sel;
        std::swap(left[c], left[sel]);
        std::swap(right[c], right[sel]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r != c && left[r].get(c)) {
                left[r] ^= left[c];
                right[r] ^= right[c];
            }
        }
    }
    inverse_ = BitMatrix(k, k);
    for (std::size_t r = 0; r < k; ++r) inverse_.row(r) = right[r];
}

BitVector MessageRecovery::recover(const BitVector& codeword) const {
    const std::size_t k = columns_.size();
    BitVector restricted(k);
    for (std::size_t j = 0; j < k; ++j)
        if (codeword.get(columns_[j])) restricted.set(j);
    return inverse_.left_multiply(restricted);
}

}  // namespace turbolattice
