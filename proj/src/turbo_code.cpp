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

#include "turbolattice/turbo_code.hpp"

#include <bit>

#include "turbolattice/errors.hpp"

namespace turbolattice {

TurboGenerator::TurboGenerator(BlockGenerator component, std::vector<Interleaver> interleavers)
    : component_(std::move(component)), interleavers_(std::move(interleavers)) {
    for (const auto& pi : interleavers_)
        if (pi.size() != component_.rows())
            throw InvalidArgument("interleaver size " + std::to_string(pi.size()) + " differs from component dimension " +
                                  std::to_string(component_.rows()));
    const BitMatrix parity = component_.parity_part();
    bits_ = component_.bits.block(0, 0, component_.rows(), component_.systematic_columns()).hstack(parity);
    for (const auto& pi : interleavers_) bits_ = bits_.hstack(pi.matrix() * parity);
}

TurboGenerator build_pccc(const BlockGenerator& component, std::vector<Interleaver> interleavers) {
    return TurboGenerator(component, std::move(interleavers));
}

BitVector encode(const TurboGenerator& t, const BitVector& u) {
    if (u.size() != t.k())
        throw InvalidArgument("message has " + std::to_string(u.size()) + " bits, turbo code has k = " + std::to_string(t.k()));
    return t.bits().left_multiply(u);
}

NestedCodeFamily::NestedCodeFamily(BitMatrix generator, NestingChain chain)
    : generator_(std::move(generator)), chain_(std::move(chain)) {
    validate_chain(chain_, generator_.rows());
    if (generator_.rank() != generator_.rows()) throw InvalidArgument("nested family generator is not full rank");
}

NestedTurboFamily::NestedTurboFamily(TurboGenerator base, NestingChain chain)
    : base_(std::move(base)), codes_(base_.bits(), std::move(chain)) {}

NestedTurboFamily nested_family(const TurboGenerator& t, NestingChain chain) {
    validate_chain(chain, t.k());
    if (chain.size() > 1 && t.form() == BlockForm::terminated)
        throw InvalidArgument("terminated turbo codes have unequal subcode lengths; use a single level");
    for (const auto& pi : t.interleavers())
        if (!is_nested(pi, chain)) throw InvalidArgument("interleaver is not nested for the requested chain");
    return NestedTurboFamily(t, std::move(chain));
}

std::vector<Rational> rates(const NestedCodeFamily& f) {
    std::vector<Rational> out;
    for (std::size_t l = 1; l <= f.levels(); ++l)
        out.emplace_back(static_cast<std::int64_t>(f.dimension(l)), static_cast<std::int64_t>(f.n()));
    return out;
}

std::vector<Rational> actual_rates(const NestedCodeFamily& f) {
    std::vector<Rational> out;
    const auto k = static_cast<std::int64_t>(f.dimension(1));
    for (std::size_t l = 1; l <= f.levels(); ++l) {
        const auto kl = static_cast<std::int64_t>(f.dimension(l));
        out.emplace_back(kl, static_cast<std::int64_t>(f.n()) - k + kl);
    }
    return out;
}

std::uint64_t WeightSpectrum::total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& [w, c] : counts) sum += c;
    return sum;
}

WeightSpectrum weight_spectrum(const BitMatrix& generator, std::size_t max_dimension) {
    const std::size_t k = generator.rows();
    if (k > max_dimension)
        throw BudgetExceeded("exhaustive spectrum of a rank-" + std::to_string(k) + " code exceeds the 2^" +
                             std::to_string(max_dimension) + " budget");
    if (generator.rank() != k) throw InvalidArgument("weight spectrum needs a full-rank generator");

    std::vector<std::uint64_t> histogram(generator.cols() + 1, 0);
    BitVector word(generator.cols());
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t i = 1; i < total; ++i) {
        // Gray code: step i flips the message bit at the position of its lowest set bit.
        word ^= generator.row(static_cast<std::size_t>(std::countr_zero(i)));
        ++histogram[word.weight()];
    }
    WeightSpectrum s;
    for (std::size_t w = 1; w < histogram.size(); ++w)
        if (histogram[w] != 0) s.counts[w] = histogram[w];
    return s;
}

namespace {

void enumerate_low_weight(const BitMatrix& g, std::size_t start, std::size_t remaining, BitVector& word,
                          std::vector<std::uint64_t>& histogram) {
    for (std::size_t r = start; r < g.rows(); ++r) {
        word ^= g.row(r);
        ++histogram[word.weight()];
        if (remaining > 1) enumerate_low_weight(g, r + 1, remaining - 1, word, histogram);
        word ^= g.row(r);
    }
}

}  // namespace

WeightSpectrum low_input_weight_spectrum(const BitMatrix& generator, std::size_t max_input_weight) {
    std::vector<std::uint64_t> histogram(generator.cols() + 1, 0);
    BitVector word(generator.cols());
    if (max_input_weight > 0) enumerate_low_weight(generator, 0, max_input_weight, word, histogram);
    WeightSpectrum s;
    s.exact = max_input_weight >= generator.rows();
    for (std::size_t w = 1; w < histogram.size(); ++w)
        if (histogram[w] != 0) s.counts[w] = histogram[w];
    return s;
}

}  // namespace turbolattice
