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

#include "turbolattice/conv_code.hpp"

#include <algorithm>
#include <sstream>

#include "turbolattice/errors.hpp"

namespace turbolattice {

RationalGeneratorMatrix::RationalGeneratorMatrix(std::vector<std::vector<BinaryPolynomial>> numerators,
                                                 std::vector<BinaryPolynomial> denominators)
    : q_(std::move(numerators)), r_(std::move(denominators)) {
    if (r_.empty()) throw InvalidArgument("generator matrix needs at least one row");
    if (q_.size() != r_.size()) throw InvalidArgument("numerator and denominator row counts differ");
    const std::size_t p = q_.front().size();
    for (std::size_t i = 0; i < r_.size(); ++i) {
        if (q_[i].size() != p) throw InvalidArgument("generator rows have different numbers of parity entries");
        if (!r_[i].coefficient(0)) throw InvalidArgument("feed-back polynomial of row " + std::to_string(i + 1) + " has r(0) = 0");
    }
}

bool RationalGeneratorMatrix::reduced() const {
    for (std::size_t i = 0; i < r_.size(); ++i)
        for (const auto& q : q_[i])
            if (!q.is_zero() && poly_gcd(q, r_[i]) != BinaryPolynomial{0}) return false;
    return true;
}

RationalGeneratorMatrix RationalGeneratorMatrix::parse(std::string_view text) {
    std::vector<std::vector<BinaryPolynomial>> q;
    std::vector<BinaryPolynomial> r;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string entry;
        std::vector<BinaryPolynomial> row;
        std::optional<BinaryPolynomial> den;
        while (fields >> entry) {
            const auto slash = entry.find('/');
            BinaryPolynomial num = BinaryPolynomial::from_string(entry.substr(0, slash));
            BinaryPolynomial d = slash == std::string::npos ? BinaryPolynomial{0}
                                                            : BinaryPolynomial::from_string(entry.substr(slash + 1));
            if (den && *den != d) throw InvalidArgument("entries of one row must share a feed-back polynomial: " + line);
            den = d;
            row.push_back(std::move(num));
        }
        if (row.empty()) continue;
        q.push_back(std::move(row));
        r.push_back(*den);
    }
    return RationalGeneratorMatrix(std::move(q), std::move(r));
}

std::string RationalGeneratorMatrix::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < r_.size(); ++i) {
        for (std::size_t j = 0; j < q_[i].size(); ++j) {
            if (j != 0) out += ' ';
            out += q_[i][j].to_string() + "/" + r_[i].to_string();
        }
        out += '\n';
    }
    return out;
}

std::size_t RationalGeneratorMatrix::memory() const noexcept {
    std::size_t m = 0;
    for (const auto& r : r_) m = std::max(m, r.degree().value_or(0));
    return m;
}

std::size_t RationalGeneratorMatrix::register_length(std::size_t i) const {
    std::size_t len = r_.at(i).degree().value_or(0);
    for (const auto& q : q_.at(i)) len = std::max(len, q.degree().value_or(0));
    return len;
}

std::size_t RationalGeneratorMatrix::constraint_length() const noexcept {
    std::size_t nu = 0;
    for (std::size_t i = 0; i < r_.size(); ++i) nu += register_length(i);
    return nu;
}

BitMatrix observer_state_matrix(const BinaryPolynomial& r) {
    const auto deg = r.degree();
    if (!deg || *deg == 0) throw InvalidArgument("observer form needs deg r >= 1");
    const std::size_t m = *deg;
    BitMatrix a(m, m);
    for (std::size_t i = 1; i < m; ++i) a.set(i, i - 1);
    for (std::size_t i = 0; i < m; ++i) a.set(i, m - 1, r.coefficient(m - i));
    return a;
}

bool tailbiting_feasible(const BinaryPolynomial& r, std::size_t length) {
    if (length == 0) throw InvalidArgument("tail-biting length must be positive");
    return poly_gcd(r, BinaryPolynomial::cyclic_modulus(length)) == BinaryPolynomial{0};
}

BlockGenerator tailbite(const RationalGeneratorMatrix& g, std::size_t length) {
    if (length == 0) throw InvalidArgument("tail-biting length must be positive");
    const std::size_t k = g.inputs();
    const std::size_t p = g.parities();
    BlockGenerator b;
    b.form = BlockForm::tail_biting;
    b.inputs = k;
    b.outputs = g.outputs();
    b.length = length;
    b.tail = 0;
    b.bits = BitMatrix(k * length, g.outputs() * length);
    b.bits.place(BitMatrix::identity(k * length), 0, 0);
    for (std::size_t i = 0; i < k; ++i) {
        BinaryPolynomial inverse;
        try {
            inverse = poly_inverse_mod(g.feedback(i), length);
        } catch (const NotCoprime& e) {
            throw NotCoprime("row " + std::to_string(i + 1) + ": " + e.what(), i);
        }
        for (std::size_t j = 0; j < p; ++j) {
            const BinaryPolynomial f = poly_mul_mod(g.feedforward(i, j), inverse, length);
            b.bits.place(circulant(f, length).to_matrix(), i * length, k * length + j * length);
        }
    }
    return b;
}

ConvolutionalEncoder::ConvolutionalEncoder(const RationalGeneratorMatrix& g) : parities_(g.parities()) {
    for (std::size_t i = 0; i < g.inputs(); ++i) {
        Stream s;
        s.offset = total_bits_;
        s.length = g.register_length(i);
        s.r.assign(s.length + 1, 0);
        for (std::size_t d = 0; d <= s.length; ++d) s.r[d] = g.feedback(i).coefficient(d);
        for (std::size_t j = 0; j < parities_; ++j) {
            std::vector<std::uint8_t> q(s.length + 1, 0);
            for (std::size_t d = 0; d <= s.length; ++d) q[d] = g.feedforward(i, j).coefficient(d);
            s.q.push_back(std::move(q));
        }
        total_bits_ += s.length;
        streams_.push_back(std::move(s));
    }
    if (total_bits_ > 24) throw InvalidArgument("encoder has more than 2^24 states");
}

std::uint32_t ConvolutionalEncoder::feedback_bit(const Stream& s, std::uint32_t state) const {
    std::uint32_t fb = 0;
    for (std::size_t d = 1; d <= s.length; ++d)
        if (s.r[d]) fb ^= (state >> (s.offset + d - 1)) & 1u;
    return fb;
}

ConvolutionalEncoder::Step ConvolutionalEncoder::step(std::uint32_t state, std::uint32_t input) const {
    Step out{0, 0};
    for (std::size_t i = 0; i < streams_.size(); ++i) {
        const Stream& s = streams_[i];
        const std::uint32_t w = ((input >> i) & 1u) ^ feedback_bit(s, state);
        for (std::size_t j = 0; j < parities_; ++j) {
            std::uint32_t bit = s.q[j][0] ? w : 0;
            for (std::size_t d = 1; d <= s.length; ++d)
                if (s.q[j][d]) bit ^= (state >> (s.offset + d - 1)) & 1u;
            out.parity ^= bit << j;
        }
        if (s.length == 0) continue;
        const std::uint32_t mask = ((std::uint32_t{1} << s.length) - 1) << s.offset;
        const std::uint32_t reg = (state & mask) >> s.offset;
        const std::uint32_t shifted = ((reg << 1) | w) & ((std::uint32_t{1} << s.length) - 1);
        out.next_state |= shifted << s.offset;
    }
    return out;
}

std::uint32_t ConvolutionalEncoder::flush_input(std::uint32_t state) const {
    std::uint32_t input = 0;
    for (std::size_t i = 0; i < streams_.size(); ++i) input |= feedback_bit(streams_[i], state) << i;
    return input;
}

BlockGenerator terminate(const RationalGeneratorMatrix& g, std::size_t length) {
    if (length == 0) throw InvalidArgument("block length must be positive");
    const ConvolutionalEncoder enc(g);
    std::size_t tail = 0;
    for (std::size_t i = 0; i < g.inputs(); ++i) tail = std::max(tail, g.register_length(i));

    BlockGenerator b;
    b.form = BlockForm::terminated;
    b.inputs = g.inputs();
    b.outputs = g.outputs();
    b.length = length;
    b.tail = tail;
    b.bits = BitMatrix(g.inputs() * length, g.outputs() * b.steps());

    // The code is linear, so row (i, t0) is the response to a single impulse.
    for (std::size_t i = 0; i < g.inputs(); ++i) {
        for (std::size_t t0 = 0; t0 < length; ++t0) {
            const std::size_t row = i * length + t0;
            std::uint32_t state = 0;
            for (std::size_t t = 0; t < b.steps(); ++t) {
                std::uint32_t input = 0;
                if (t < length) {
                    input = t == t0 ? (std::uint32_t{1} << i) : 0;
                } else {
                    input = enc.flush_input(state);
                }
                for (std::size_t s = 0; s < g.inputs(); ++s)
                    if ((input >> s) & 1u) b.bits.set(row, b.systematic_column(s, t));
                const auto st = enc.step(state, input);
                for (std::size_t j = 0; j < g.parities(); ++j)
                    if ((st.parity >> j) & 1u) b.bits.set(row, b.parity_column(j, t));
                state = st.next_state;
            }
        }
    }
    return b;
}

BitVector encode_block(const BlockGenerator& b, const BitVector& u) {
    if (u.size() != b.rows())
        throw InvalidArgument("message has " + std::to_string(u.size()) + " bits, generator has " +
                              std::to_string(b.rows()) + " rows");
    return b.bits.left_multiply(u);
}

Trellis build_trellis(const RationalGeneratorMatrix& g, std::size_t length, TrellisMode mode) {
    if (length == 0) throw InvalidArgument("trellis length must be positive");
    if (mode == TrellisMode::tail_biting) {
        for (std::size_t i = 0; i < g.inputs(); ++i)
            if (!tailbiting_feasible(g.feedback(i), length))
                throw NotCoprime("tail-biting infeasible for row " + std::to_string(i + 1) + " at L = " + std::to_string(length), i);
    }
    const ConvolutionalEncoder enc(g);
    Trellis t;
    t.inputs_ = g.inputs();
    t.outputs_ = g.outputs();
    t.state_bits_ = enc.state_bits();
    t.states_ = enc.state_count();
    t.length_ = length;
    t.mode_ = mode;
    if (mode == TrellisMode::zero_terminated) {
        for (std::size_t i = 0; i < g.inputs(); ++i) t.tail_ = std::max(t.tail_, g.register_length(i));
    }
    const std::uint32_t fan = t.edges_per_state();
    t.edges_.resize(static_cast<std::size_t>(t.states_) * fan);
    t.flush_.resize(t.states_);
    for (std::uint32_t s = 0; s < t.states_; ++s) {
        for (std::uint32_t u = 0; u < fan; ++u) {
            const auto st = enc.step(s, u);
            t.edges_[s * fan + u] = {st.next_state, u, u | (st.parity << g.inputs())};
        }
        t.flush_[s] = enc.flush_input(s);
    }
    return t;
}

}  // namespace turbolattice
