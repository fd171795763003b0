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

#include "turbolattice/interleaver.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "turbolattice/rng.hpp"

namespace turbolattice {

Interleaver::Interleaver(std::vector<std::size_t> map, std::optional<NestingChain> chain)
    : map_(std::move(map)), chain_(std::move(chain)) {
    std::vector<bool> seen(map_.size(), false);
    for (auto image : map_) {
        if (image >= map_.size() || seen[image]) throw InvalidArgument("interleaver map is not a bijection");
        seen[image] = true;
    }
    if (chain_ && !is_nested(*this, *chain_)) throw InvalidArgument("interleaver is not nested for its attached chain");
}

Interleaver Interleaver::identity(std::size_t size) {
    std::vector<std::size_t> map(size);
    std::iota(map.begin(), map.end(), std::size_t{0});
    return Interleaver(std::move(map));
}

Interleaver Interleaver::from_one_based(const std::vector<std::size_t>& images) {
    std::vector<std::size_t> map;
    map.reserve(images.size());
    for (auto image : images) {
        if (image == 0) throw InvalidArgument("interleaver images are 1-based");
        map.push_back(image - 1);
    }
    return Interleaver(std::move(map));
}

Interleaver Interleaver::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::size_t k = 0;
    if (!(in >> k)) throw InvalidArgument("interleaver file must start with its size");
    std::vector<std::size_t> images(k);
    for (auto& image : images)
        if (!(in >> image)) throw InvalidArgument("interleaver file lists fewer than " + std::to_string(k) + " images");
    std::size_t extra = 0;
    if (in >> extra) throw InvalidArgument("interleaver file lists more than " + std::to_string(k) + " images");
    return from_one_based(images);
}

std::string Interleaver::to_text() const {
    std::ostringstream out;
    out << map_.size() << '\n';
    for (std::size_t i = 0; i < map_.size(); ++i) out << (i ? " " : "") << map_[i] + 1;
    out << '\n';
    return out.str();
}

Interleaver Interleaver::inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return Interleaver(std::move(inv), chain_);
}

BitMatrix Interleaver::matrix() const {
    BitMatrix p(size(), size());
    for (std::size_t i = 0; i < size(); ++i) p.set(map_[i], i);
    return p;
}

void validate_chain(const NestingChain& chain, std::size_t size) {
    if (chain.empty()) throw InvalidArgument("nesting chain is empty");
    if (chain.front() == 0) throw InvalidArgument("nesting chain entries must be positive");
    for (std::size_t i = 1; i < chain.size(); ++i)
        if (chain[i] <= chain[i - 1]) throw InvalidArgument("nesting chain must be strictly increasing");
    if (chain.back() != size)
        throw InvalidArgument("nesting chain must end at the interleaver size " + std::to_string(size));
}

bool is_nested(const Interleaver& pi, const NestingChain& chain) {
    validate_chain(chain, pi.size());
    for (auto prefix : chain)
        for (std::size_t x = 0; x < prefix; ++x)
            if (pi(x) >= prefix) return false;
    return true;
}

std::size_t minimum_spread_distance(const Interleaver& pi, std::size_t spread) {
    std::size_t best = pi.size();
    for (std::size_t i = 0; i < pi.size(); ++i) {
        for (std::size_t j = i + 1; j < pi.size() && j - i <= spread; ++j) {
            const std::size_t a = pi(i), b = pi(j);
            best = std::min(best, a > b ? a - b : b - a);
        }
    }
    return best;
}

bool satisfies_spread(const Interleaver& pi, std::size_t spread) {
    return spread == 0 || minimum_spread_distance(pi, spread) > spread;
}

namespace {

std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// True iff position p has no spread conflict with its neighbours within `spread`.
bool position_ok(const std::vector<std::size_t>& map, std::size_t p, std::size_t spread) {
    const std::size_t lo = p >= spread ? p - spread : 0;
    const std::size_t hi = std::min(map.size() - 1, p + spread);
    for (std::size_t q = lo; q <= hi; ++q)
        if (q != p && distance(map[p], map[q]) <= spread) return false;
    return true;
}

// Swap-based repair of the positions a greedy pass left in conflict.
bool repair(std::vector<std::size_t>& map, std::size_t spread, std::mt19937_64& gen) {
    const std::size_t k = map.size();
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::size_t pass = 0; pass < 20; ++pass) {
        bool clean = true;
        for (std::size_t p = 0; p < k; ++p) {
            if (position_ok(map, p, spread)) continue;
            clean = false;
            for (std::size_t tries = 0; tries < 4 * k; ++tries) {
                const std::size_t q = pick(gen);
                if (q == p) continue;
                std::swap(map[p], map[q]);
                if (position_ok(map, p, spread) && position_ok(map, q, spread)) break;
                std::swap(map[p], map[q]);
            }
        }
        if (clean) return true;
    }
    for (std::size_t p = 0; p < k; ++p)
        if (!position_ok(map, p, spread)) return false;
    return true;
}

}  // namespace

Interleaver s_random(std::size_t size, std::size_t spread, std::uint64_t seed, SRandomOptions options) {
    if (size == 0) throw InvalidArgument("interleaver size must be positive");
    for (std::size_t attempt = 0; attempt <= options.max_restarts; ++attempt) {
        std::mt19937_64 gen(stream_seed(seed, attempt));
        std::vector<std::size_t> remaining(size);
        std::iota(remaining.begin(), remaining.end(), std::size_t{0});
        std::shuffle(remaining.begin(), remaining.end(), gen);

        // Greedy first fit; candidates that fit nowhere are appended and repaired afterwards.
        std::vector<std::size_t> map;
        map.reserve(size);
        while (!remaining.empty()) {
            auto pick = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t candidate) {
                const std::size_t i = map.size();
                for (std::size_t back = 1; back <= spread && back <= i; ++back)
                    if (distance(candidate, map[i - back]) <= spread) return false;
                return true;
            });
            if (pick == remaining.end()) pick = remaining.begin();
            map.push_back(*pick);
            remaining.erase(pick);
        }
        if (repair(map, spread, gen)) return Interleaver(std::move(map));
    }
    throw ConstructionFailed("no spread-" + std::to_string(spread) + " permutation of size " + std::to_string(size) +
                             " found in " + std::to_string(options.max_restarts + 1) + " attempts");
}

Interleaver append(std::span<const Interleaver> parts) {
    if (parts.empty()) throw InvalidArgument("append needs at least one interleaver");
    std::vector<std::size_t> map;
    NestingChain chain;
    std::size_t offset = 0;
    for (const auto& part : parts) {
        for (std::size_t x = 0; x < part.size(); ++x) map.push_back(offset + part(x));
        offset += part.size();
        chain.push_back(offset);
    }
    return Interleaver(std::move(map), std::move(chain));
}

BitVector apply(const Interleaver& pi, const BitVector& v) {
    if (v.size() != pi.size()) throw InvalidArgument("interleaver length mismatch");
    BitVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.get(pi(i))) out.set(i);
    return out;
}

}  // namespace turbolattice
