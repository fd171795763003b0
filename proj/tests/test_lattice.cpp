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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "turbolattice/errors.hpp"
#include "turbolattice/lattice.hpp"

using namespace turbolattice;
using turbolattice::testing::hamming_7_4;

namespace {

LatticeBasis integer_lattice(std::size_t n) { return construction_a(BitMatrix::identity(n)); }

// Brute-force minimum over small integer coefficient boxes; independent of the Fincke-Pohst code.
ShortestVectors brute_force_shortest(const LatticeBasis& b, std::int64_t box) {
    const std::size_t n = b.n();
    IntVector z(n, -box);
    ShortestVectors best{Rational(1000), 0};
    const std::int64_t denom = std::int64_t{1} << (2 * b.scale_exponent());
    while (true) {
        bool zero = std::all_of(z.begin(), z.end(), [](auto v) { return v == 0; });
        if (!zero) {
            std::int64_t sum = 0;
            for (std::size_t c = 0; c < n; ++c) {
                std::int64_t x = 0;
                for (std::size_t i = 0; i < n; ++i) x += z[i] * b.integer_rows()[i][c];
                sum += x * x;
            }
            const Rational norm(sum, denom);
            if (norm < best.d_min_squared) best = {norm, 1};
            else if (norm == best.d_min_squared) ++best.kissing;
        }
        std::size_t i = 0;
        while (i < n && z[i] == box) z[i++] = -box;
        if (i == n) break;
        ++z[i];
    }
    return best;
}

}  // namespace

TEST_CASE("construction A of trivial codes") {
    const auto zn = integer_lattice(5);
    CHECK(zn.log2_volume() == 0);
    CHECK(exact_log2_volume(zn) == 0);
    const auto two = construction_a(BitMatrix(0, 4));
    CHECK(two.log2_volume() == 4);
    CHECK(exact_log2_volume(two) == 4);
    CHECK_THROWS_AS(construction_a(BitMatrix::from_strings({"11", "11"})), InvalidArgument);
}

TEST_CASE("Hamming Construction A lattice") {
    const auto b = construction_a(hamming_7_4());
    CHECK(b.log2_volume() == 3);
    CHECK(exact_log2_volume(b) == 3);
    const auto sv = shortest_vectors(b);
    CHECK(sv.d_min_squared == Rational(3));
    CHECK(sv.kissing == 56);
    CHECK(enumerate_short_vectors(b, Rational(3)).size() == 56);

    const auto f = figures_construction_a(hamming_7_4(), weight_spectrum(hamming_7_4()));
    CHECK(f.d_min_squared == Rational(3));
    CHECK(f.kissing == doctest::Approx(56));
    CHECK_FALSE(f.kissing_is_bound);
    CHECK(f.coding_gain == doctest::Approx(3.0 / 4.0 * std::pow(4.0, 4.0 / 7.0)));
    REQUIRE(f.coding_gain_alternative.has_value());
    CHECK(*f.coding_gain_alternative == doctest::Approx(2.0 * f.coding_gain));
}

TEST_CASE("Construction A kissing number cases") {
    const auto trivial = figures_construction_a(6, 6, {1, 6, true});
    CHECK(trivial.d_min_squared == Rational(1));
    CHECK(trivial.kissing == doctest::Approx(12));
    CHECK(trivial.coding_gain == doctest::Approx(1.0));
    CHECK(figures_construction_a(8, 4, {4, 14, true}).kissing == doctest::Approx(16 + 16 * 14));
    CHECK(figures_construction_a(10, 1, {10, 1, true}).kissing == doctest::Approx(20));
}

TEST_CASE("short vectors of simple lattices") {
    CHECK(enumerate_short_vectors(integer_lattice(4), Rational(1)).size() == 8);
    CHECK(enumerate_short_vectors(construction_a(BitMatrix(0, 3)), Rational(4)).size() == 6);
    CHECK_THROWS_AS(enumerate_short_vectors(integer_lattice(17), Rational(1)), BudgetExceeded);
    CHECK_THROWS_AS(enumerate_short_vectors(integer_lattice(3), Rational(9)), BudgetExceeded);
}

TEST_CASE("enumeration agrees with a brute-force box search") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 12; ++trial) {
        const auto fam = turbolattice::testing::random_nested_family(gen, 5, 1 + trial % 2);
        const auto b = construction_d(fam);
        const auto fp = shortest_vectors(b);
        const auto bf = brute_force_shortest(b, 3);
        CHECK(fp.d_min_squared == bf.d_min_squared);
        CHECK(fp.kissing == bf.kissing);
    }
}

TEST_CASE("three-level turbo lattice basis layout") {
    const auto g = RationalGeneratorMatrix::parse("11011/10101\n10011/10101\n11101/10101\n");
    const std::vector<Interleaver> parts{s_random(8, 1, 1), s_random(8, 1, 2), s_random(8, 1, 3)};
    const auto pi = append(parts);
    const auto t = build_pccc(tailbite(g, 8), {pi});
    const auto fam = nested_family(t, {8, 16, 24});
    const auto b = construction_d(fam);
    CHECK(b.n() == 40);
    CHECK(b.scale_exponent() == 2);
    for (std::size_t r = 0; r < 24; ++r)
        for (std::size_t c = 0; c < 40; ++c) {
            const Rational factor = r < 8 ? Rational(1, 4) : r < 16 ? Rational(1, 2) : Rational(1);
            CHECK(b.entry(r, c) == factor * Rational(t.bits().get(r, c)));
        }
    for (std::size_t r = 24; r < 40; ++r)
        for (std::size_t c = 0; c < 40; ++c) CHECK(b.entry(r, c) == Rational(c == r ? 2 : 0));
    CHECK(b.log2_volume() == 40 - 48);
    CHECK(exact_log2_volume(b) == -8);
}

TEST_CASE("one-level Construction D equals Construction A") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto fam = turbolattice::testing::random_nested_family(gen, 7, 1);
        const auto d = construction_d(fam);
        const auto a = construction_a(fam.generator());
        CHECK(d.log2_volume() == a.log2_volume());
        // Same lattice: every basis vector of one is a lattice point of the other.
        for (const auto& row : d.integer_rows()) CHECK(lattice_coordinates(a, row).has_value());
        for (const auto& row : a.integer_rows()) CHECK(lattice_coordinates(d, row).has_value());
    }
}

TEST_CASE("Construction D rejects non-unimodular pivot blocks") {
    // The circulant pivot block with top row 1110 is invertible over GF(2) but has integer determinant 3.
    const NestedCodeFamily fam(BitMatrix::from_strings({"11101", "01111", "10111", "11011"}), {4});
    CHECK_THROWS_AS(construction_d(fam), ConstructionFailed);
}

TEST_CASE("membership") {
    const auto b = construction_a(hamming_7_4());
    CHECK(lattice_coordinates(b, IntVector{1, 0, 0, 0, 1, 1, 0}).has_value());
    CHECK(lattice_coordinates(b, IntVector{3, 0, -2, 0, 1, 1, 0}).has_value());
    CHECK_FALSE(lattice_coordinates(b, IntVector{1, 0, 0, 0, 0, 0, 0}).has_value());
    CHECK_THROWS_AS(lattice_coordinates(b, IntVector{1, 0}), InvalidArgument);
}

TEST_CASE("Construction D figures from supplied distances") {
    const std::vector<Rational> rates{Rational(1, 2), Rational(1, 3)};
    const std::vector<LevelDistance> levels{{13, 0, true}, {28, 0, true}};
    const auto f = figures_construction_d(2000, rates, levels);
    CHECK(f.d_min_squared == Rational(4));
    CHECK(f.coding_gain == doctest::Approx(std::pow(4.0, 5.0 / 6.0)));
    CHECK(f.coding_gain_db == doctest::Approx(5.017).epsilon(1e-3));
    CHECK(f.kissing == doctest::Approx(4000));
    CHECK(f.normalized_kissing == doctest::Approx(2));

    const std::vector<Rational> one{Rational(1)};
    const std::vector<LevelDistance> unit{{1, 5, true}};
    const auto zn = figures_construction_d(5, one, unit);
    CHECK(zn.d_min_squared == Rational(1));
    CHECK(zn.coding_gain == doctest::Approx(1.0));
}

TEST_CASE("coding gain identity and the classical bound") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 30; ++trial) {
        const auto fam = turbolattice::testing::random_nested_family(gen, 6 + trial % 5, 1 + trial % 2);
        std::vector<WeightSpectrum> spectra;
        for (std::size_t l = 1; l <= fam.levels(); ++l) spectra.push_back(weight_spectrum(fam.level_generator(l)));
        const auto f = figures_construction_d(fam, spectra);
        double rate_sum = 0, k_sum = 0;
        for (auto r : rates(fam)) rate_sum += boost::rational_cast<double>(r);
        for (std::size_t l = 1; l <= fam.levels(); ++l) k_sum += static_cast<double>(fam.dimension(l));
        const double d2 = boost::rational_cast<double>(f.d_min_squared);
        CHECK(f.coding_gain == doctest::Approx(std::pow(4.0, rate_sum - 1.0) * d2));
        // d^(l) >= 4^l / beta for all l implies gamma >= 4^(sum k / n) / beta.
        for (double beta : {1.0, 2.0}) {
            bool holds = true;
            for (std::size_t l = 1; l <= fam.levels(); ++l)
                holds = holds && static_cast<double>(spectra[l - 1].min_distance()) >= std::pow(4.0, double(l)) / beta;
            if (holds) CHECK(f.coding_gain >= std::pow(4.0, k_sum / static_cast<double>(fam.n())) / beta - 1e-12);
        }
    }
}

TEST_CASE("scaling a lattice scales its minimum") {
    const auto b = construction_a(hamming_7_4());
    IntMatrix doubled = b.integer_rows();
    for (auto& row : doubled)
        for (auto& v : row) v *= 2;
    const LatticeBasis scaled(doubled, 0, b.ranks(), b.row_levels());
    CHECK(enumerate_short_vectors(scaled, Rational(8)).empty());
    const auto sv = enumerate_short_vectors(LatticeBasis(b.integer_rows(), 1, b.ranks(), b.row_levels()), Rational(3, 4));
    CHECK(sv.size() == 56);
}

TEST_CASE("volume-to-noise ratio") {
    const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
    CHECK(vnr_to_sigma(integer_lattice(3), 0.0) == doctest::Approx(std::sqrt(1.0 / two_pi_e)));
    CHECK(vnr_to_sigma(3.0, 7, 0.0) == doctest::Approx(std::sqrt(std::pow(4.0, 3.0 / 7.0) / two_pi_e)));
    CHECK(vnr_to_sigma(0.0, 1, 10.0) == doctest::Approx(std::sqrt(1.0 / (10.0 * two_pi_e))));
}
