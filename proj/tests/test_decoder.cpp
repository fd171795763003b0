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
#include <limits>
#include <optional>
#include <random>

#include "support.hpp"
#include "turbolattice/decoder.hpp"
#include "turbolattice/errors.hpp"

using namespace turbolattice;
using turbolattice::testing::random_bits;

namespace {

const char* kRsc = "101/111";

double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    double s = 0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

BitVector message_of(std::uint64_t bits, std::size_t k) {
    BitVector u(k);
    for (std::size_t i = 0; i < k; ++i) u.set(i, (bits >> i) & 1);
    return u;
}

// Per-section channel layout of a block code: systematic then parity outputs.
std::vector<double> section_channel(const BlockGenerator& b, const std::vector<double>& llr) {
    std::vector<double> out;
    for (std::size_t t = 0; t < b.steps(); ++t) {
        for (std::size_t i = 0; i < b.inputs; ++i) out.push_back(llr[b.systematic_column(i, t)]);
        for (std::size_t j = 0; j + b.inputs < b.outputs; ++j) out.push_back(llr[b.parity_column(j, t)]);
    }
    return out;
}

// Brute-force bitwise MAP LLRs over all messages.
std::vector<double> brute_map(const BlockGenerator& b, const std::vector<double>& llr, const std::vector<double>& apriori) {
    const std::size_t k = b.rows();
    std::vector<std::vector<double>> zero(k), one(k);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
        const auto u = message_of(m, k);
        const auto c = b.bits.left_multiply(u);
        double metric = 0;
        for (std::size_t j = 0; j < c.size(); ++j) metric += c.get(j) ? -0.5 * llr[j] : 0.5 * llr[j];
        for (std::size_t i = 0; i < k; ++i) metric += u.get(i) ? -0.5 * apriori[i] : 0.5 * apriori[i];
        for (std::size_t i = 0; i < k; ++i) (u.get(i) ? one : zero)[i].push_back(metric);
    }
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = log_sum_exp(zero[i]) - log_sum_exp(one[i]);
    return out;
}

std::vector<double> bpsk_llr(const BitVector& c, double sigma, std::mt19937_64& gen) {
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> llr(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double y = (c.get(j) ? -1.0 : 1.0) + noise(gen);
        llr[j] = 2.0 * y / (sigma * sigma);
    }
    return llr;
}

std::vector<double> noiseless_llr(const BitVector& c) {
    std::vector<double> llr(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) llr[j] = c.get(j) ? -20.0 : 20.0;
    return llr;
}

double distance_squared(std::span<const double> r, std::span<const std::int64_t> scaled, std::size_t exponent) {
    double s = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double d = r[j] - std::ldexp(static_cast<double>(scaled[j]), -static_cast<int>(exponent));
        s += d * d;
    }
    return s;
}

// Random lattice point of a basis, returned as 2^scale_exponent * x.
std::vector<std::int64_t> random_point(const LatticeBasis& basis, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> coef(-2, 2);
    std::vector<std::int64_t> x(basis.n(), 0);
    for (const auto& row : basis.integer_rows()) {
        const int z = coef(gen);
        for (std::size_t c = 0; c < row.size(); ++c) x[c] += z * row[c];
    }
    return x;
}

}  // namespace

TEST_CASE("mod-2 metric") {
    const std::vector<double> r{0.3, 1.7, -0.2, 1.0, 3.0, -1.0};
    const auto m = mod2_metric(r);
    CHECK(m.t[0] == doctest::Approx(0.4));
    CHECK(m.s[0] == doctest::Approx(0.3));
    CHECK(m.t[1] == doctest::Approx(0.4));
    CHECK(m.s[1] == doctest::Approx(1.7));
    CHECK(m.even[1] == 2);
    CHECK(m.odd[1] == 1);
    CHECK(m.t[2] == doctest::Approx(0.6));
    CHECK(m.s[2] == doctest::Approx(1.8));
    // Ties go toward -infinity.
    CHECK(m.even[3] == 0);
    CHECK(m.odd[3] == 1);
    CHECK(m.t[3] == doctest::Approx(-1.0));
    CHECK(m.odd[4] == 3);
    CHECK(m.even[4] == 2);
    CHECK(m.even[5] == -2);
    CHECK(m.odd[5] == -1);

    CHECK(mod2_metric(std::vector<double>{0.5}).t[0] == doctest::Approx(0.0));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(gen);
        const auto mm = mod2_metric(std::span<const double>(&x, 1));
        const double de = std::abs(x - std::round(x / 2) * 2);
        double dodd = 2;
        for (int k = -7; k <= 7; k += 2) dodd = std::min(dodd, std::abs(x - k));
        CHECK((mm.t[0] > 0) == (de < dodd));
        CHECK(std::abs(x - static_cast<double>(mm.even[0])) == doctest::Approx(de));
        CHECK(mm.s[0] >= 0.0);
        CHECK(mm.s[0] < 2.0);
    }
}

TEST_CASE("exhaustive ML decoding") {
    const auto g = testing::hamming_7_4();
    MlDecoder ml(g);
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = g.left_multiply(random_bits(4, gen));
        CHECK(ml.decode(noiseless_llr(c)) == c);
        // Any single flipped hard decision is corrected.
        auto llr = noiseless_llr(c);
        llr[trial % 7] = -llr[trial % 7] * 0.5;
        CHECK(ml.decode(llr) == c);
    }
    CHECK_THROWS_AS(MlDecoder(BitMatrix(17, 20)), BudgetExceeded);
    CHECK_THROWS_AS(ml.decode(std::vector<double>(6, 1.0)), InvalidArgument);
}

TEST_CASE("forward-backward equals brute-force MAP on a terminated trellis") {
    const auto g = RationalGeneratorMatrix::parse(kRsc);
    const auto b = terminate(g, 4);
    Bcjr bcjr(build_trellis(g, 4, TrellisMode::zero_terminated));
    std::mt19937_64 gen(7);
    std::normal_distribution<double> n(0.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> llr(b.cols()), apriori(4);
        for (auto& v : llr) v = n(gen);
        for (auto& v : apriori) v = n(gen) * 0.5;
        std::vector<double> app, ext;
        bcjr.run(section_channel(b, llr), apriori, {}, app, ext);
        const auto expect = brute_map(b, llr, apriori);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(app[i] == doctest::Approx(expect[i]).epsilon(1e-9));
            CHECK(ext[i] == doctest::Approx(expect[i] - apriori[i] - llr[b.systematic_column(0, i)]).epsilon(1e-9));
        }
    }
}

TEST_CASE("forced-zero bits restrict the trellis to a subcode") {
    const auto g = RationalGeneratorMatrix::parse(kRsc);
    const auto b = terminate(g, 4);
    Bcjr bcjr(build_trellis(g, 4, TrellisMode::zero_terminated));
    std::mt19937_64 gen(8);
    std::normal_distribution<double> n(0.0, 1.5);
    std::vector<double> llr(b.cols());
    for (auto& v : llr) v = n(gen);
    const std::vector<std::uint8_t> forced{0, 0, 1, 1};
    std::vector<double> app, ext;
    bcjr.run(section_channel(b, llr), std::vector<double>(4, 0.0), forced, app, ext);
    // Brute force over the messages with the last two bits zero.
    std::vector<std::vector<double>> zero(2), one(2);
    for (std::uint64_t m = 0; m < 4; ++m) {
        const auto u = message_of(m, 4);
        const auto c = b.bits.left_multiply(u);
        double metric = 0;
        for (std::size_t j = 0; j < c.size(); ++j) metric += c.get(j) ? -0.5 * llr[j] : 0.5 * llr[j];
        for (std::size_t i = 0; i < 2; ++i) (u.get(i) ? one : zero)[i].push_back(metric);
    }
    for (std::size_t i = 0; i < 2; ++i) CHECK(app[i] == doctest::Approx(log_sum_exp(zero[i]) - log_sum_exp(one[i])));
    CHECK(ext[2] == 0.0);
    CHECK(ext[3] == 0.0);
}

TEST_CASE("tail-biting forward-backward tracks the MAP decisions") {
    const auto g = RationalGeneratorMatrix::parse(kRsc);
    const auto b = tailbite(g, 8);
    Bcjr bcjr(build_trellis(g, 8, TrellisMode::tail_biting));
    std::mt19937_64 gen(9);
    std::size_t agree = 0, total = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = b.bits.left_multiply(random_bits(8, gen));
        const auto llr = bpsk_llr(c, 0.8, gen);
        std::vector<double> app, ext;
        bcjr.run(section_channel(b, llr), {}, {}, app, ext);
        const auto expect = brute_map(b, llr, std::vector<double>(8, 0.0));
        for (std::size_t i = 0; i < 8; ++i, ++total) agree += (app[i] < 0) == (expect[i] < 0);
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) > 0.97);

    // Noiseless tail-biting words decode exactly.
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_bits(8, gen);
        std::vector<double> app, ext;
        bcjr.run(section_channel(b, noiseless_llr(b.bits.left_multiply(u))), {}, {}, app, ext);
        for (std::size_t i = 0; i < 8; ++i) CHECK((app[i] < 0) == u.get(i));
    }
}

TEST_CASE("turbo decoding") {
    const auto g = RationalGeneratorMatrix::parse(kRsc);
    std::mt19937_64 gen(11);

    SUBCASE("noiseless words are returned, twice the same") {
        const auto t = build_pccc(terminate(g, 32), {s_random(32, 3, 1)});
        CHECK(t.n() == 102);
        TurboDecoder dec(g, t);
        for (int trial = 0; trial < 10; ++trial) {
            const auto u = random_bits(32, gen);
            const auto c = encode(t, u);
            CHECK(dec.decode(noiseless_llr(c)) == c);
            CHECK(dec.last_message() == u);
        }
        const auto llr = bpsk_llr(encode(t, random_bits(32, gen)), 0.9, gen);
        CHECK(dec.decode(llr) == dec.decode(llr));
    }

    SUBCASE("agrees with ML on a small code") {
        const auto t = build_pccc(terminate(g, 12), {s_random(12, 2, 2)});
        TurboDecoder turbo(g, t);
        MlDecoder ml(t.bits());
        int same = 0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            const auto llr = bpsk_llr(encode(t, random_bits(12, gen)), 0.8, gen);
            same += turbo.decode(llr) == ml.decode(llr);
        }
        CHECK(same > trials * 9 / 10);
    }

    SUBCASE("known-zero rows select a subcode") {
        const auto b = tailbite(g, 8);
        const std::vector<Interleaver> parts{s_random(4, 0, 21), s_random(4, 0, 22)};
        const auto t = build_pccc(b, {append(parts)});
        TurboDecoder sub(g, t, 4);
        for (int trial = 0; trial < 10; ++trial) {
            BitVector u(8);
            for (std::size_t i = 0; i < 4; ++i) u.set(i, gen() & 1);
            const auto c = encode(t, u);
            CHECK(sub.decode(noiseless_llr(c)) == c);
            auto llr = bpsk_llr(c, 0.7, gen);
            const auto out = sub.decode(llr);
            BitMatrix word(1, out.size());
            for (std::size_t j = 0; j < out.size(); ++j) word.set(0, j, out.get(j));
            CHECK(t.bits().top_rows(4).row_space_contains(word));
        }
        CHECK_THROWS_AS(TurboDecoder(g, t, 0), InvalidArgument);
    }
}

TEST_CASE("single-level decoding") {
    const auto g = testing::hamming_7_4();
    MlDecoder ml(g);
    std::mt19937_64 gen(13);
    std::normal_distribution<double> n(0.0, 0.1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = g.left_multiply(random_bits(4, gen));
        std::vector<double> r(7);
        std::vector<std::int64_t> x(7);
        for (std::size_t j = 0; j < 7; ++j) {
            x[j] = static_cast<std::int64_t>(c.get(j)) + 2 * static_cast<std::int64_t>(gen() % 7) - 6;
            r[j] = static_cast<double>(x[j]) + n(gen);
        }
        const auto res = decode_level(ml, r, 0.5);
        CHECK(res.codeword == c);
        CHECK(res.point == x);
    }
    CHECK_THROWS_AS(decode_level(ml, std::vector<double>(7, 0.0), 0.0), InvalidArgument);
}

TEST_CASE("a one-level decoder is the exact nearest point of C + 2Z^n") {
    const auto g = testing::hamming_7_4();
    std::vector<std::unique_ptr<CodewordDecoder>> decs;
    decs.push_back(std::make_unique<MlDecoder>(g));
    MultistageDecoder dec(NestedCodeFamily(g, {4}), std::move(decs));
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> r(7);
        for (auto& v : r) v = u(gen);
        const auto res = dec.decode(r, 0.7);
        // Oracle: the closest point in each coset, minimised over all codewords.
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t m = 0; m < 16; ++m) {
            const auto c = g.left_multiply(message_of(m, 4));
            double s = 0;
            for (std::size_t j = 0; j < 7; ++j) {
                const double p = c.get(j) ? 1.0 : 0.0;
                const double d = r[j] - (p + 2.0 * std::round((r[j] - p) / 2.0));
                s += d * d;
            }
            best = std::min(best, s);
        }
        CHECK(distance_squared(r, res.scaled, 0) == doctest::Approx(best));
    }
}

TEST_CASE("multistage decoding of small nested families") {
    std::mt19937_64 gen(19);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::size_t tested = 0;
    while (tested < 12) {
        const std::size_t n = 6 + gen() % 5, a = 2 + gen() % 2;
        auto family = testing::random_nested_family(gen, n, a);
        std::optional<LatticeBasis> built;
        try {
            built = construction_d(family);
        } catch (const ConstructionFailed&) {
            continue;
        }
        const LatticeBasis& basis = *built;
        ++tested;
        const auto shortest = shortest_vectors(basis);
        const double dmin2 = boost::rational_cast<double>(shortest.d_min_squared);
        MultistageDecoder dec(family, make_ml_decoders(family));

        for (int trial = 0; trial < 100; ++trial) {
            const auto x = random_point(basis, gen);
            std::vector<double> r(n);
            for (std::size_t j = 0; j < n; ++j) r[j] = std::ldexp(static_cast<double>(x[j]), -static_cast<int>(a - 1));

            // Exact input.
            auto res = dec.decode(r, 0.3);
            CHECK(res.scaled == x);

            // Inside the guarantee ball, with the stage inputs recorded.
            std::vector<double> e(n);
            double norm = 0;
            for (auto& v : e) norm += (v = gauss(gen)) * v;
            const double radius = 0.999 * std::sqrt(dmin2) / 2.0 * std::pow(std::uniform_real_distribution<double>(0, 1)(gen), 1.0 / n);
            std::vector<double> noisy = r;
            for (std::size_t j = 0; j < n; ++j) noisy[j] += e[j] / std::sqrt(norm) * radius;
            res = dec.decode(noisy, 0.3, true);
            CHECK(res.scaled == x);
            REQUIRE(res.inputs.size() == a);

            // Far away: the output still lies in the lattice.
            std::vector<double> far(n);
            for (auto& v : far) v = 3.0 * gauss(gen);
            res = dec.decode(far, 1.0);
            CHECK(lattice_coordinates(basis, res.scaled).has_value());
        }
        CHECK(dec.component_calls() == 300 * a);
    }
}

TEST_CASE("stage inputs follow the level scaling identity") {
    std::mt19937_64 gen(23);
    const auto family = testing::random_nested_family(gen, 10, 3);
    MultistageDecoder dec(family, make_ml_decoders(family));
    std::normal_distribution<double> noise(0.0, 0.02);
    std::vector<double> r(10);
    for (auto& v : r) v = noise(gen);
    const auto res = dec.decode(r, 0.02, true);
    REQUIRE(std::all_of(res.scaled.begin(), res.scaled.end(), [](auto v) { return v == 0; }));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 10; ++j) CHECK(res.inputs[i][j] == doctest::Approx(res.inputs[0][j] / std::ldexp(1.0, static_cast<int>(i))));
    for (std::size_t j = 0; j < 10; ++j) CHECK(res.inputs[0][j] == doctest::Approx(4.0 * r[j]));
}

TEST_CASE("multistage decoding of a nested turbo lattice") {
    const auto g = RationalGeneratorMatrix::parse(kRsc);
    const std::vector<Interleaver> parts{s_random(4, 0, 31), s_random(4, 0, 32)};
    const auto t = build_pccc(tailbite(g, 8), {append(parts)});
    const auto fam = nested_family(t, {4, 8});
    const auto basis = construction_d(fam);
    MultistageDecoder dec(fam.codes(), make_turbo_decoders(g, fam));
    std::mt19937_64 gen(29);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_point(basis, gen);
        std::vector<double> r(basis.n());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = static_cast<double>(x[j]) / 2.0 + noise(gen);
        const auto res = dec.decode(r, 0.05);
        CHECK(res.scaled == x);
    }
}
