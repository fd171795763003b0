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

#ifndef TURBOLATTICE_TESTS_SUPPORT_HPP
#define TURBOLATTICE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <numeric>
#include <random>

#include "turbolattice/bits.hpp"
#include "turbolattice/turbo_code.hpp"

namespace turbolattice::testing {

inline BitVector random_bits(std::size_t n, std::mt19937_64& gen) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, gen() & 1);
    return v;
}

inline BitMatrix hamming_7_4() { return BitMatrix::from_strings({"1000110", "0100011", "0010111", "0001101"}); }

/// Systematic generator [I_k | A] with its columns shuffled, split into `levels` nested prefixes.
inline NestedCodeFamily random_nested_family(std::mt19937_64& gen, std::size_t n, std::size_t levels) {
    std::uniform_int_distribution<std::size_t> kdist(levels, n - 1);
    const std::size_t k = kdist(gen);
    BitMatrix g(k, n);
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    std::shuffle(cols.begin(), cols.end(), gen);
    for (std::size_t r = 0; r < k; ++r) {
        g.set(r, cols[r]);
        for (std::size_t c = k; c < n; ++c) g.set(r, cols[c], gen() & 1);
    }
    NestingChain chain;
    std::vector<std::size_t> cut(k - 1);
    std::iota(cut.begin(), cut.end(), std::size_t{1});
    std::shuffle(cut.begin(), cut.end(), gen);
    chain.assign(cut.begin(), cut.begin() + static_cast<std::ptrdiff_t>(levels - 1));
    chain.push_back(k);
    std::sort(chain.begin(), chain.end());
    return NestedCodeFamily(std::move(g), std::move(chain));
}

}  // namespace turbolattice::testing

#endif
