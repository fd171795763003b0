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

#ifndef TURBOLATTICE_SIM_HPP
#define TURBOLATTICE_SIM_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "turbolattice/conv_code.hpp"
#include "turbolattice/decoder.hpp"
#include "turbolattice/lattice.hpp"
#include "turbolattice/turbo_code.hpp"

namespace turbolattice {

enum class ConstructionKind { a, d };
enum class DecoderKind { turbo, ml };
enum class TransmitMode { zero, random_point };

/// Everything needed to build one turbo lattice.
struct LatticeSpec {
    std::string component;                 ///< generator text, one row per line
    std::size_t length = 0;                ///< L
    BlockForm form = BlockForm::tail_biting;
    std::size_t branches = 2;
    std::size_t spread = 0;                ///< S of each S-random interleaver
    std::uint64_t interleaver_seed = 1;
    NestingChain chain;                    ///< information-row counts k_a < ... < k_1; empty means {k}
    ConstructionKind construction = ConstructionKind::d;
    /// Per-level distances to use instead of exhaustive spectra (index l-1).
    std::vector<LevelDistance> distances;
};

/// A design given only by its parameters, for analysis without building it.
struct DesignSpec {
    std::size_t n = 0;
    std::vector<Rational> rates;
    std::vector<LevelDistance> distances;
};

struct SimConfig {
    std::optional<LatticeSpec> lattice;
    std::optional<DesignSpec> design;
    std::vector<double> grid_db;
    DecoderKind decoder = DecoderKind::turbo;
    std::size_t iterations = 10;
    std::uint64_t min_errors = 100;
    std::uint64_t max_symbols = 10'000'000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::size_t batch = 64;                ///< blocks per stopping-rule check
    TransmitMode transmit = TransmitMode::zero;
    bool deterministic = false;            ///< write 0 for wall time so output bytes depend only on the config
};

/// Parses a JSON configuration; throws ConfigError with the offending field.
SimConfig parse_config(const nlohmann::json& doc);
SimConfig load_config(const std::string& path);
LatticeSpec parse_lattice_spec(const nlohmann::json& doc);

/// Constructed lattice with its code family.
class LatticeBundle {
   public:
    explicit LatticeBundle(LatticeSpec spec);

    const LatticeSpec& spec() const noexcept { return spec_; }
    const RationalGeneratorMatrix& component() const noexcept { return component_; }
    const TurboGenerator& code() const noexcept { return *code_; }
    const NestedTurboFamily& family() const noexcept { return *family_; }
    /// Built on first use; large lattices never need it for simulation.
    const LatticeBasis& basis() const;
    std::size_t n() const noexcept { return code_->n(); }
    /// n - sum k_l, known without building the basis.
    std::int64_t log2_volume() const noexcept;

    /// A fresh decoder; one per thread.
    MultistageDecoder make_decoder(DecoderKind kind, std::size_t iterations) const;

   private:
    LatticeSpec spec_;
    RationalGeneratorMatrix component_;
    std::optional<TurboGenerator> code_;
    std::optional<NestedTurboFamily> family_;
    mutable std::unique_ptr<std::once_flag> basis_once_ = std::make_unique<std::once_flag>();
    mutable std::optional<LatticeBasis> basis_;
};

/// i.i.d. N(0, sigma^2) coordinates.
std::vector<double> awgn_sample(std::size_t n, double sigma, std::mt19937_64& stream);

/// Random lattice point zB with z uniform in {0, 1}^n, scaled by 2^scale_exponent.
std::vector<std::int64_t> random_lattice_point(const LatticeBasis& basis, std::mt19937_64& stream);

struct SerRow {
    double alpha2_db = 0;
    double sigma = 0;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;
    double ser = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t blocks = 0;
    double seconds = 0;
    bool budget_capped = false;  ///< stopped before reaching min_errors
};

/// Set asynchronously (e.g. by a signal handler) to stop at the next batch boundary.
using StopFlag = std::atomic<bool>;

/// Maps a received vector to 2^scale_exponent times the decoded lattice point.
using PointDecoder = std::function<std::vector<std::int64_t>(std::span<const double> r, double sigma)>;

/// What the Monte Carlo loop needs to know about a lattice.
struct PointModel {
    std::size_t n = 0;
    double log2_volume = 0;
    std::size_t scale_exponent = 0;
    std::function<PointDecoder()> make_decoder;  ///< called once per worker thread
    /// Random lattice point (scaled); may be empty when only the zero point is sent.
    std::function<std::vector<std::int64_t>(std::mt19937_64&)> random_point;
};

/// The bundle must outlive the model.
PointModel point_model(const LatticeBundle& lattice, DecoderKind kind, std::size_t iterations);

/// Monte Carlo at one VNR. Block t of point p draws from stream (seed, p, t).
SerRow run_point(const SimConfig& cfg, const LatticeBundle& lattice, std::size_t point_index, double alpha2_db,
                 const StopFlag* stop = nullptr);
SerRow run_point(const SimConfig& cfg, const PointModel& model, std::size_t point_index, double alpha2_db,
                 const StopFlag* stop = nullptr);

/// One row per grid value; `emit` sees each row as soon as it is final.
std::vector<SerRow> sweep(const SimConfig& cfg, const LatticeBundle& lattice, const std::function<void(const SerRow&)>& emit = {},
                          const StopFlag* stop = nullptr);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SerRow& row);

/// Figures of merit and code parameters of a lattice.
struct AnalysisReport {
    std::size_t n = 0;
    ConstructionKind construction = ConstructionKind::d;
    std::vector<std::size_t> dimensions;   ///< k_l, level 1 first; empty for designs
    std::vector<Rational> rates;
    std::vector<Rational> actual_rates;
    std::vector<LevelDistance> distances;
    LatticeFigures figures;
    std::optional<std::int64_t> exact_log2_volume;
    std::optional<ShortestVectors> enumerated;  ///< when n is small enough
};

/// Uses exhaustive spectra where affordable, else the spec's supplied distances,
/// else (when `max_input_weight` is set) spectra of messages of at most that
/// weight, whose minimum is only an upper bound on d_min. Throws
/// BudgetExceeded when none of these applies.
AnalysisReport analyze(const LatticeBundle& lattice, std::optional<std::size_t> max_input_weight = std::nullopt);
AnalysisReport analyze(const DesignSpec& design);

std::string to_text(const AnalysisReport& report);
nlohmann::json to_json(const AnalysisReport& report);

}  // namespace turbolattice

#endif
