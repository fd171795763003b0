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
#include <sstream>

#include "turbolattice/errors.hpp"
#include "turbolattice/rng.hpp"
#include "turbolattice/sim.hpp"

using namespace turbolattice;
using nlohmann::json;

namespace {

json small_config() {
    return json::parse(R"({
        "lattice": {"component": "101/111", "length": 8, "form": "terminated",
                    "interleaver": {"spread": 1, "seed": 4}, "construction": "A"},
        "grid_db": [1.0, 2.0],
        "stopping": {"min_errors": 30, "max_symbols": 200000},
        "seed": 9, "batch": 16, "deterministic": true
    })");
}

std::string csv_of(const SimConfig& cfg, const LatticeBundle& lattice) {
    std::ostringstream os;
    write_csv_header(os);
    sweep(cfg, lattice, [&](const SerRow& r) { write_csv_row(os, r); });
    return os.str();
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("Gaussian samples") {
    std::mt19937_64 a(stream_seed(5, {1, 2})), b(stream_seed(5, {1, 2}));
    CHECK(awgn_sample(16, 0.7, a) == awgn_sample(16, 0.7, b));

    std::mt19937_64 gen(11);
    const std::size_t n = 1'000'000;
    const double sigma = 0.8;
    const auto v = awgn_sample(n, sigma, gen);
    double mean = 0, sq = 0;
    for (double x : v) {
        mean += x;
        sq += x * x;
    }
    mean /= n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 3 * sigma / std::sqrt(n));
    // The variance estimator has standard error sigma^2 sqrt(2/n).
    CHECK(std::abs(var - sigma * sigma) < 3 * sigma * sigma * std::sqrt(2.0 / n));

    const auto tiny = awgn_sample(8, 1e-12, gen);
    for (double x : tiny) CHECK(std::abs(x) < 1e-9);
    CHECK_THROWS_AS(awgn_sample(4, 0.0, gen), InvalidArgument);
}

TEST_CASE("configuration validation") {
    CHECK_NOTHROW(parse_config(small_config()));
    auto bad = small_config();
    bad["grid_db"] = json::array();
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_config();
    bad["stopping"]["min_errors"] = 0;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_config();
    bad["lattice"]["form"] = "circular";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad = small_config();
    bad["lattice"]["length"] = "eight";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

    auto multi = small_config();
    multi["lattice"]["component"] = json::array({"1111/1011", "111/1011"});
    multi["lattice"]["form"] = "tail_biting";
    multi["lattice"]["length"] = 7;
    multi["lattice"]["construction"] = "D";
    const auto cfg = parse_config(multi);
    CHECK(cfg.lattice->component == "1111/1011\n111/1011\n");
    CHECK_THROWS_AS(LatticeBundle(*cfg.lattice), NotCoprime);
}

TEST_CASE("lattice bundles") {
    const auto cfg = parse_config(small_config());
    const LatticeBundle lattice(*cfg.lattice);
    CHECK(lattice.n() == 30);
    CHECK(lattice.code().k() == 8);
    CHECK(lattice.log2_volume() == 22);
    CHECK(lattice.basis().log2_volume() == lattice.log2_volume());

    auto nested = small_config();
    nested["lattice"]["form"] = "tail_biting";
    nested["lattice"]["construction"] = "D";
    nested["lattice"]["chain"] = {4, 8};
    const LatticeBundle two(*parse_config(nested).lattice);
    CHECK(two.family().levels() == 2);
    CHECK(two.basis().scale_exponent() == 1);
    CHECK(two.log2_volume() == 24 - 12);
    for (const auto& pi : two.code().interleavers()) CHECK(is_nested(pi, {4, 8}));

    nested["lattice"]["construction"] = "A";
    CHECK_THROWS_AS(LatticeBundle(*parse_config(nested).lattice), ConfigError);
}

TEST_CASE("sweeps are reproducible") {
    auto doc = small_config();
    const auto cfg = parse_config(doc);
    const LatticeBundle lattice(*cfg.lattice);
    const auto first = csv_of(cfg, lattice);
    CHECK(first == csv_of(cfg, lattice));
    CHECK(first.rfind("alpha2_db,sigma,symbols,symbol_errors,ser,block_errors,blocks,seconds,budget_capped\n", 0) == 0);

    doc["threads"] = 3;
    CHECK(csv_of(parse_config(doc), lattice) == first);

    const auto rows = sweep(cfg, lattice);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.ser == doctest::Approx(static_cast<double>(r.symbol_errors) / static_cast<double>(r.symbols)));
        CHECK(r.symbols == r.blocks * 30);
        CHECK(r.block_errors <= r.blocks);
        CHECK((r.symbol_errors >= cfg.min_errors || r.budget_capped));
    }
    CHECK(rows[0].ser >= rows[1].ser);
}

TEST_CASE("stopping rule and interruption") {
    auto doc = small_config();
    doc["stopping"]["max_symbols"] = 3000;
    const auto cfg = parse_config(doc);
    const LatticeBundle lattice(*cfg.lattice);
    const auto quiet = run_point(cfg, lattice, 0, 30.0);
    CHECK(quiet.symbol_errors == 0);
    CHECK(quiet.ser == 0.0);
    CHECK(quiet.budget_capped);
    CHECK(quiet.symbols >= 3000);

    StopFlag stop{true};
    const auto none = run_point(cfg, lattice, 0, 1.0, &stop);
    CHECK(none.blocks == 0);
    CHECK(sweep(cfg, lattice, {}, &stop).empty());
}

TEST_CASE("zero and random transmitted points give the same error rate") {
    auto doc = small_config();
    doc["stopping"] = {{"min_errors", 1'000'000}, {"max_symbols", 300'000}};
    doc["decoder"] = {{"kind", "ml"}};
    const auto zero_cfg = parse_config(doc);
    doc["transmit"] = "random";
    doc["seed"] = 10;
    const auto random_cfg = parse_config(doc);
    const LatticeBundle lattice(*zero_cfg.lattice);
    const auto a = run_point(zero_cfg, lattice, 0, 1.5);
    const auto b = run_point(random_cfg, lattice, 0, 1.5);
    REQUIRE(a.symbols == b.symbols);
    const double p = (a.ser + b.ser) / 2;
    const double se = std::sqrt(2 * p * (1 - p) / static_cast<double>(a.symbols));
    CHECK(std::abs(a.ser - b.ser) < 3 * se);
}

TEST_CASE("the lattice 2Z meets its closed-form error rate") {
    PointModel model;
    model.n = 1;
    model.log2_volume = 1;
    model.make_decoder = [] {
        return PointDecoder([](std::span<const double> r, double) {
            return std::vector<std::int64_t>{2 * static_cast<std::int64_t>(std::round(r[0] / 2))};
        });
    };
    SimConfig cfg;
    cfg.min_errors = 1'000'000;
    cfg.max_symbols = 20'000;
    cfg.batch = 1000;
    for (double sigma : {0.3, 0.5}) {
        // Invert sigma^2 = 2^(2 log2 V / n) / (2 pi e alpha^2) for the VNR.
        const double alpha2 = 4.0 / (2 * std::numbers::pi * std::numbers::e * sigma * sigma);
        const auto row = run_point(cfg, model, 0, 10 * std::log10(alpha2));
        CHECK(row.sigma == doctest::Approx(sigma));
        const double p = 2 * q_function(1 / sigma);
        CHECK(std::abs(row.ser - p) < 3 * std::sqrt(p * (1 - p) / static_cast<double>(row.symbols)));
    }
}

TEST_CASE("analysis reports") {
    DesignSpec design{2000, {Rational(1, 2), Rational(1, 3)}, {{13, 0, false}, {28, 0, false}}};
    const auto d = analyze(design);
    CHECK(d.figures.coding_gain_db >= 5.0);
    CHECK(d.figures.normalized_kissing <= 2.0);
    CHECK(to_text(d).find("coding_gain_db") != std::string::npos);
    CHECK(to_json(d)["levels"].size() == 2);

    // Small two-level lattice: exhaustive spectra and enumeration agree on the minimum.
    auto doc = small_config();
    doc["lattice"]["form"] = "tail_biting";
    doc["lattice"]["length"] = 4;
    doc["lattice"]["construction"] = "D";
    doc["lattice"]["chain"] = {2, 4};
    doc["lattice"]["interleaver"]["spread"] = 0;
    const LatticeBundle lattice(*parse_config(doc).lattice);
    REQUIRE(lattice.n() == 12);
    const auto r = analyze(lattice);
    REQUIRE(r.enumerated);
    CHECK(r.enumerated->d_min_squared == r.figures.d_min_squared);
    CHECK(static_cast<double>(r.enumerated->kissing) <= r.figures.kissing);
    CHECK(r.exact_log2_volume == lattice.log2_volume());
    CHECK(to_json(r)["enumerated_kissing"] == r.enumerated->kissing);

    auto big = small_config();
    big["lattice"]["length"] = 40;
    const LatticeBundle wide(*parse_config(big).lattice);
    CHECK_THROWS_AS(analyze(wide), BudgetExceeded);
    const auto bounded = analyze(wide, 2);
    CHECK_FALSE(bounded.distances[0].exact);
}
