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

#ifndef TURBOLATTICE_INTERLEAVER_HPP
#define TURBOLATTICE_INTERLEAVER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "turbolattice/bits.hpp"
#include "turbolattice/errors.hpp"

namespace turbolattice {

/// Nesting chain (k_a, ..., k_1): strictly increasing prefix sizes ending at the full size.
using NestingChain = std::vector<std::size_t>;

/// Permutation x -> pi(x) of {0, ..., k-1}, stored 0-based.
///
/// Applying it to a vector v gives w[i] = v[pi(i)], which is u·P for the
/// permutation matrix with P[pi(i)][i] = 1.
class Interleaver {
   public:
    Interleaver() = default;
    /// Validates that `map` is a bijection.
    explicit Interleaver(std::vector<std::size_t> map, std::optional<NestingChain> chain = std::nullopt);
    static Interleaver identity(std::size_t size);
    /// From 1-based images, as in two-row notation.
    static Interleaver from_one_based(const std::vector<std::size_t>& images);

    /// File format: first line k, second line the k images of 1..k (1-based).
    static Interleaver parse(std::string_view text);
    std::string to_text() const;

    std::size_t size() const noexcept { return map_.size(); }
    std::size_t operator()(std::size_t x) const { return map_.at(x); }
    const std::vector<std::size_t>& map() const noexcept { return map_; }
    const std::optional<NestingChain>& chain() const noexcept { return chain_; }

    Interleaver inverse() const;
    /// Permutation matrix P (k×k) with u·P = apply(*this, u).
    BitMatrix matrix() const;

    friend bool operator==(const Interleaver& a, const Interleaver& b) { return a.map_ == b.map_; }

   private:
    std::vector<std::size_t> map_;
    std::optional<NestingChain> chain_;
};

/// Throws InvalidArgument unless 0 < k_a < ... < k_1 = size.
void validate_chain(const NestingChain& chain, std::size_t size);

/// True iff every prefix block {1..k_l} is mapped into itself.
bool is_nested(const Interleaver& pi, const NestingChain& chain);

/// Smallest |pi(i) - pi(j)| over pairs with 0 < |i - j| <= spread (infinity-like size() when vacuous).
std::size_t minimum_spread_distance(const Interleaver& pi, std::size_t spread);
/// True iff |i - j| <= S implies |pi(i) - pi(j)| > S.
bool satisfies_spread(const Interleaver& pi, std::size_t spread);

struct SRandomOptions {
    std::size_t max_restarts = 100;
};

/// S-random permutation by sequential rejection sampling with restarts.
/// Deterministic for a given seed. Throws ConstructionFailed after the restart budget.
Interleaver s_random(std::size_t size, std::size_t spread, std::uint64_t seed, SRandomOptions options = {});

/// Block-diagonal concatenation; the result is nested for the prefix sums of the part sizes.
Interleaver append(std::span<const Interleaver> parts);

template <class T>
std::vector<T> apply(const Interleaver& pi, std::span<const T> v) {
    if (v.size() != pi.size()) throw InvalidArgument("interleaver length mismatch");
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[pi(i)];
    return out;
}
template <class T>
std::vector<T> apply(const Interleaver& pi, const std::vector<T>& v) {
    return apply(pi, std::span<const T>(v));
}
/// Inverse of apply: out[pi(i)] = v[i].
template <class T>
std::vector<T> apply_inverse(const Interleaver& pi, std::span<const T> v) {
    if (v.size() != pi.size()) throw InvalidArgument("interleaver length mismatch");
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[pi(i)] = v[i];
    return out;
}
template <class T>
std::vector<T> apply_inverse(const Interleaver& pi, const std::vector<T>& v) {
    return apply_inverse(pi, std::span<const T>(v));
}
BitVector apply(const Interleaver& pi, const BitVector& v);

}  // namespace turbolattice

#endif
