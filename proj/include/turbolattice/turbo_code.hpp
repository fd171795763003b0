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

#ifndef TURBOLATTICE_TURBO_CODE_HPP
#define TURBOLATTICE_TURBO_CODE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/rational.hpp>

#include "turbolattice/bits.hpp"
#include "turbolattice/conv_code.hpp"
#include "turbolattice/interleaver.hpp"

namespace turbolattice {

using Rational = boost::rational<std::int64_t>;

/// Parallel concatenation [S | F | P_1 F | ... | P_{b-1} F] of one component block code.
///
/// S holds the systematic columns of the component (identity plus, for
/// terminated components, the first encoder's systematic tail). Every branch
/// contributes only its parity columns.
class TurboGenerator {
   public:
    TurboGenerator(BlockGenerator component, std::vector<Interleaver> interleavers);

    const BitMatrix& bits() const noexcept { return bits_; }
    std::size_t k() const noexcept { return bits_.rows(); }
    std::size_t n() const noexcept { return bits_.cols(); }
    std::size_t branches() const noexcept { return interleavers_.size() + 1; }
    const BlockGenerator& component() const noexcept { return component_; }
    const std::vector<Interleaver>& interleavers() const noexcept { return interleavers_; }
    BlockForm form() const noexcept { return component_.form; }

    /// Column of parity stream j at step t in branch `branch` (0 = uninterleaved).
    std::size_t parity_column(std::size_t branch, std::size_t j, std::size_t t) const noexcept {
        return component_.systematic_columns() + branch * component_.parity_columns() + j * component_.steps() + t;
    }

   private:
    BlockGenerator component_;
    std::vector<Interleaver> interleavers_;
    BitMatrix bits_;
};

/// Throws InvalidArgument on interleaver size mismatch.
TurboGenerator build_pccc(const BlockGenerator& component, std::vector<Interleaver> interleavers);

/// u·G_TC; the first k output bits equal u.
BitVector encode(const TurboGenerator& t, const BitVector& u);

/// Nested linear codes C_1 ⊇ ... ⊇ C_a given by row prefixes of one generator.
///
/// `chain` is (k_a, ..., k_1) in increasing order; level l (1-based) is
/// generated by the first k_l rows.
class NestedCodeFamily {
   public:
    NestedCodeFamily(BitMatrix generator, NestingChain chain);

    std::size_t n() const noexcept { return generator_.cols(); }
    std::size_t levels() const noexcept { return chain_.size(); }
    /// k_l for level l in 1..a.
    std::size_t dimension(std::size_t level) const { return chain_.at(chain_.size() - level); }
    const NestingChain& chain() const noexcept { return chain_; }
    const BitMatrix& generator() const noexcept { return generator_; }
    BitMatrix level_generator(std::size_t level) const { return generator_.top_rows(dimension(level)); }

   private:
    BitMatrix generator_;
    NestingChain chain_;
};

/// A turbo code with a nested interleaver and the codes TC_1 ⊇ ... ⊇ TC_a it induces.
class NestedTurboFamily {
   public:
    NestedTurboFamily(TurboGenerator base, NestingChain chain);

    const TurboGenerator& base() const noexcept { return base_; }
    const NestedCodeFamily& codes() const noexcept { return codes_; }
    std::size_t levels() const noexcept { return codes_.levels(); }
    std::size_t n() const noexcept { return codes_.n(); }
    const NestingChain& chain() const noexcept { return codes_.chain(); }

   private:
    TurboGenerator base_;
    NestedCodeFamily codes_;
};

/// Throws InvalidArgument when an interleaver is not nested for `chain`, or when a
/// terminated turbo code is asked for more than one level.
NestedTurboFamily nested_family(const TurboGenerator& t, NestingChain chain);

/// R_l = k_l / n for l = 1..a.
std::vector<Rational> rates(const NestedCodeFamily& f);
inline std::vector<Rational> rates(const NestedTurboFamily& f) { return rates(f.codes()); }
/// k_l / (n - k_1 + k_l): the rate once the all-zero columns of G_l are punctured.
std::vector<Rational> actual_rates(const NestedCodeFamily& f);
inline std::vector<Rational> actual_rates(const NestedTurboFamily& f) { return actual_rates(f.codes()); }

/// Weight distribution of a linear code.
struct WeightSpectrum {
    std::map<std::size_t, std::uint64_t> counts;  ///< nonzero weights only
    bool exact = true;                            ///< false for partial (low-weight input) searches

    /// Least nonzero weight present; 0 for the zero code.
    std::size_t min_distance() const noexcept { return counts.empty() ? 0 : counts.begin()->first; }
    std::uint64_t count(std::size_t weight) const {
        auto it = counts.find(weight);
        return it == counts.end() ? 0 : it->second;
    }
    std::uint64_t total() const noexcept;
};

inline constexpr std::size_t kSpectrumBudget = 24;

/// Exact spectrum by enumerating all 2^k - 1 nonzero messages (Gray code order).
/// Throws BudgetExceeded beyond k = 24 and InvalidArgument for rank-deficient G.
WeightSpectrum weight_spectrum(const BitMatrix& generator, std::size_t max_dimension = kSpectrumBudget);

/// Codewords of all messages with at most `max_input_weight` ones. The result is
/// flagged inexact: its d_min is an upper bound and its counts are lower bounds.
WeightSpectrum low_input_weight_spectrum(const BitMatrix& generator, std::size_t max_input_weight);

}  // namespace turbolattice

#endif
