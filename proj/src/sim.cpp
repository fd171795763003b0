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

#include "turbolattice/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "turbolattice/errors.hpp"
#include "turbolattice/interleaver.hpp"
#include "turbolattice/rng.hpp"

namespace turbolattice {

using nlohmann::json;

namespace {

template <class T>
T field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

Rational parse_rational(const json& v) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string()) throw ConfigError("rates must be integers or strings \"p/q\"");
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ConfigError("malformed rate '" + s + "'");
    }
}

std::vector<LevelDistance> parse_distances(const json& v) {
    std::vector<LevelDistance> out;
    if (!v.is_array()) throw ConfigError("'distances' must be an array");
    for (const auto& item : v) {
        LevelDistance d;
        if (item.is_number_unsigned()) {
            d.d_min = item.get<std::size_t>();
        } else if (item.is_object()) {
            d.d_min = field<std::size_t>(item, "d", 0);
            d.multiplicity = field<std::uint64_t>(item, "A", 0);
        } else {
            throw ConfigError("each distance is a number or {\"d\": .., \"A\": ..}");
        }
        if (d.d_min == 0) throw ConfigError("distances must be positive");
        // Supplied values are taken on trust; the multiplicity may be unknown.
        d.exact = false;
        out.push_back(d);
    }
    return out;
}

std::string component_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_array()) throw ConfigError("'component' must be a string or an array of rows");
    std::string text;
    for (const auto& row : v) {
        if (!row.is_string()) throw ConfigError("'component' rows must be strings");
        text += row.get<std::string>() + "\n";
    }
    return text;
}

std::string format_double(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

std::string rational_text(const Rational& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

LatticeSpec parse_lattice_spec(const json& doc) {
    if (!doc.is_object()) throw ConfigError("'lattice' must be an object");
    LatticeSpec s;
    if (!doc.contains("component")) throw ConfigError("'lattice.component' is required");
    s.component = component_text(doc.at("component"));
    s.length = field<std::size_t>(doc, "length", 0);
    if (s.length == 0) throw ConfigError("'lattice.length' must be positive");
    const auto form = field<std::string>(doc, "form", "tail_biting");
    if (form == "tail_biting" || form == "tail-biting") {
        s.form = BlockForm::tail_biting;
    } else if (form == "terminated") {
        s.form = BlockForm::terminated;
    } else {
        throw ConfigError("'lattice.form' must be tail_biting or terminated");
    }
    s.branches = field<std::size_t>(doc, "branches", 2);
    if (s.branches < 1) throw ConfigError("'lattice.branches' must be at least 1");
    if (doc.contains("interleaver")) {
        const auto& il = doc.at("interleaver");
        s.spread = field<std::size_t>(il, "spread", 0);
        s.interleaver_seed = field<std::uint64_t>(il, "seed", 1);
    }
    s.chain = field<NestingChain>(doc, "chain", {});
    const auto kind = field<std::string>(doc, "construction", "D");
    if (kind == "A" || kind == "a") {
        s.construction = ConstructionKind::a;
    } else if (kind == "D" || kind == "d") {
        s.construction = ConstructionKind::d;
    } else {
        throw ConfigError("'lattice.construction' must be A or D");
    }
    if (doc.contains("distances")) s.distances = parse_distances(doc.at("distances"));
    return s;
}

SimConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    SimConfig c;
    if (doc.contains("lattice")) c.lattice = parse_lattice_spec(doc.at("lattice"));
    if (doc.contains("design")) {
        const auto& d = doc.at("design");
        DesignSpec design;
        design.n = field<std::size_t>(d, "n", 0);
        if (design.n == 0) throw ConfigError("'design.n' must be positive");
        if (!d.contains("rates") || !d.at("rates").is_array()) throw ConfigError("'design.rates' must be an array");
        for (const auto& r : d.at("rates")) design.rates.push_back(parse_rational(r));
        if (d.contains("distances")) design.distances = parse_distances(d.at("distances"));
        if (design.distances.size() != design.rates.size())
            throw ConfigError("'design' needs one distance per rate");
        c.design = std::move(design);
    }
    if (!c.lattice && !c.design) throw ConfigError("configuration needs a 'lattice' or a 'design'");

    c.grid_db = field<std::vector<double>>(doc, "grid_db", {});
    if (doc.contains("grid_db") && c.grid_db.empty()) throw ConfigError("'grid_db' must not be empty");
    if (doc.contains("decoder")) {
        const auto& d = doc.at("decoder");
        const auto kind = field<std::string>(d, "kind", "turbo");
        if (kind == "turbo") {
            c.decoder = DecoderKind::turbo;
        } else if (kind == "ml") {
            c.decoder = DecoderKind::ml;
        } else {
            throw ConfigError("'decoder.kind' must be turbo or ml");
        }
        c.iterations = field<std::size_t>(d, "iterations", c.iterations);
    }
    if (doc.contains("stopping")) {
        const auto& s = doc.at("stopping");
        c.min_errors = field<std::uint64_t>(s, "min_errors", c.min_errors);
        c.max_symbols = field<std::uint64_t>(s, "max_symbols", c.max_symbols);
    }
    if (c.min_errors == 0 || c.max_symbols == 0) throw ConfigError("stopping thresholds must be positive");
    if (c.iterations == 0) throw ConfigError("'decoder.iterations' must be positive");
    c.seed = field<std::uint64_t>(doc, "seed", c.seed);
    c.threads = field<std::size_t>(doc, "threads", c.threads);
    if (c.threads == 0) c.threads = std::max(1u, std::thread::hardware_concurrency());
    c.batch = field<std::size_t>(doc, "batch", c.batch);
    if (c.batch == 0) throw ConfigError("'batch' must be positive");
    const auto transmit = field<std::string>(doc, "transmit", "zero");
    if (transmit == "zero") {
        c.transmit = TransmitMode::zero;
    } else if (transmit == "random") {
        c.transmit = TransmitMode::random_point;
    } else {
        throw ConfigError("'transmit' must be zero or random");
    }
    c.deterministic = field<bool>(doc, "deterministic", false);
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
    return parse_config(doc);
}

LatticeBundle::LatticeBundle(LatticeSpec spec)
    : spec_(std::move(spec)), component_(RationalGeneratorMatrix::parse(spec_.component)) {
    const BlockGenerator block =
        spec_.form == BlockForm::tail_biting ? tailbite(component_, spec_.length) : terminate(component_, spec_.length);
    const std::size_t k = block.rows();
    NestingChain chain = spec_.chain.empty() ? NestingChain{k} : spec_.chain;
    if (spec_.construction == ConstructionKind::a && chain.size() != 1)
        throw ConfigError("Construction A takes a single level");
    try {
        validate_chain(chain, k);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("'lattice.chain': ") + e.what());
    }

    // Each branch permutes every chain segment within itself, so the interleavers are nested.
    std::vector<Interleaver> interleavers;
    for (std::size_t branch = 1; branch < spec_.branches; ++branch) {
        std::vector<Interleaver> parts;
        std::size_t start = 0;
        for (std::size_t seg = 0; seg < chain.size(); ++seg) {
            parts.push_back(s_random(chain[seg] - start, spec_.spread, stream_seed(spec_.interleaver_seed, {branch, seg})));
            start = chain[seg];
        }
        interleavers.push_back(append(parts));
    }
    code_.emplace(build_pccc(block, std::move(interleavers)));
    family_.emplace(nested_family(*code_, chain));
}

const LatticeBasis& LatticeBundle::basis() const {
    std::call_once(*basis_once_, [this] {
        basis_.emplace(spec_.construction == ConstructionKind::a ? construction_a(code_->bits()) : construction_d(*family_));
    });
    return *basis_;
}

std::int64_t LatticeBundle::log2_volume() const noexcept {
    const auto& codes = family_->codes();
    std::int64_t v = static_cast<std::int64_t>(codes.n());
    for (std::size_t l = 1; l <= codes.levels(); ++l) v -= static_cast<std::int64_t>(codes.dimension(l));
    return v;
}

MultistageDecoder LatticeBundle::make_decoder(DecoderKind kind, std::size_t iterations) const {
    auto decoders = kind == DecoderKind::ml ? make_ml_decoders(family_->codes())
                                            : make_turbo_decoders(component_, *family_, TurboDecoderOptions{iterations});
    return MultistageDecoder(family_->codes(), std::move(decoders));
}

std::vector<double> awgn_sample(std::size_t n, double sigma, std::mt19937_64& stream) {
    if (!(sigma > 0)) throw InvalidArgument("noise deviation must be positive");
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<double> v(n);
    for (auto& x : v) x = gauss(stream);
    return v;
}

std::vector<std::int64_t> random_lattice_point(const LatticeBasis& basis, std::mt19937_64& stream) {
    std::vector<std::int64_t> x(basis.n(), 0);
    for (const auto& row : basis.integer_rows()) {
        if ((stream() & 1) == 0) continue;
        for (std::size_t c = 0; c < row.size(); ++c) x[c] += row[c];
    }
    return x;
}

namespace {

struct Counts {
    std::uint64_t symbol_errors = 0;
    std::uint64_t block_errors = 0;
};

Counts run_block(const SimConfig& cfg, const PointModel& model, const PointDecoder& decoder, std::size_t point,
                 std::uint64_t block, double sigma) {
    std::mt19937_64 gen(stream_seed(cfg.seed, {point, block}));
    std::vector<std::int64_t> x(model.n, 0);
    if (cfg.transmit == TransmitMode::random_point) {
        if (!model.random_point) throw ConfigError("this lattice supports only the all-zero transmit mode");
        x = model.random_point(gen);
    }
    auto r = awgn_sample(model.n, sigma, gen);
    const double unit = std::ldexp(1.0, -static_cast<int>(model.scale_exponent));
    for (std::size_t j = 0; j < model.n; ++j) r[j] += static_cast<double>(x[j]) * unit;
    const auto decoded = decoder(r, sigma);
    Counts c;
    for (std::size_t j = 0; j < model.n; ++j) c.symbol_errors += decoded[j] != x[j];
    c.block_errors = c.symbol_errors != 0;
    return c;
}

}  // namespace

PointModel point_model(const LatticeBundle& lattice, DecoderKind kind, std::size_t iterations) {
    PointModel m;
    m.n = lattice.n();
    m.log2_volume = static_cast<double>(lattice.log2_volume());
    m.scale_exponent = lattice.family().levels() - 1;
    m.make_decoder = [&lattice, kind, iterations]() -> PointDecoder {
        auto dec = std::make_shared<MultistageDecoder>(lattice.make_decoder(kind, iterations));
        return [dec](std::span<const double> r, double sigma) { return dec->decode(r, sigma).scaled; };
    };
    m.random_point = [&lattice](std::mt19937_64& gen) { return random_lattice_point(lattice.basis(), gen); };
    return m;
}

SerRow run_point(const SimConfig& cfg, const LatticeBundle& lattice, std::size_t point_index, double alpha2_db,
                 const StopFlag* stop) {
    return run_point(cfg, point_model(lattice, cfg.decoder, cfg.iterations), point_index, alpha2_db, stop);
}

SerRow run_point(const SimConfig& cfg, const PointModel& model, std::size_t point_index, double alpha2_db,
                 const StopFlag* stop) {
    const auto start = std::chrono::steady_clock::now();
    SerRow row;
    row.alpha2_db = alpha2_db;
    row.sigma = vnr_to_sigma(model.log2_volume, model.n, alpha2_db);
    const std::size_t n = model.n;
    const std::size_t threads = std::max<std::size_t>(1, cfg.threads);

    std::vector<PointDecoder> decoders;
    for (std::size_t i = 0; i < threads; ++i) decoders.push_back(model.make_decoder());

    std::uint64_t next_block = 0;
    std::vector<Counts> partial(threads);
    // The stopping rule is checked only between whole batches, so results do not depend on threads.
    while (row.symbol_errors < cfg.min_errors && row.symbols < cfg.max_symbols) {
        if (stop && stop->load()) break;
        const std::uint64_t first = next_block;
        const std::uint64_t count = cfg.batch;
        std::fill(partial.begin(), partial.end(), Counts{});
        auto work = [&](std::size_t t) {
            for (std::uint64_t b = first + t; b < first + count; b += threads) {
                const auto c = run_block(cfg, model, decoders[t], point_index, b, row.sigma);
                partial[t].symbol_errors += c.symbol_errors;
                partial[t].block_errors += c.block_errors;
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
        }
        for (const auto& p : partial) {
            row.symbol_errors += p.symbol_errors;
            row.block_errors += p.block_errors;
        }
        row.blocks += count;
        row.symbols += count * n;
        next_block += count;
    }
    row.ser = row.symbols == 0 ? 0.0 : static_cast<double>(row.symbol_errors) / static_cast<double>(row.symbols);
    row.budget_capped = row.symbol_errors < cfg.min_errors;
    row.seconds = cfg.deterministic ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<SerRow> sweep(const SimConfig& cfg, const LatticeBundle& lattice, const std::function<void(const SerRow&)>& emit,
                          const StopFlag* stop) {
    if (cfg.grid_db.empty()) throw ConfigError("'grid_db' must not be empty");
    std::vector<SerRow> rows;
    for (std::size_t p = 0; p < cfg.grid_db.size(); ++p) {
        if (stop && stop->load()) break;
        rows.push_back(run_point(cfg, lattice, p, cfg.grid_db[p], stop));
        if (emit) emit(rows.back());
    }
    return rows;
}

void write_csv_header(std::ostream& out) {
    out << "alpha2_db,sigma,symbols,symbol_errors,ser,block_errors,blocks,seconds,budget_capped\n";
}

void write_csv_row(std::ostream& out, const SerRow& row) {
    std::ostringstream ser;
    ser << std::scientific << std::setprecision(6) << row.ser;
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(3) << row.seconds;
    out << format_double(row.alpha2_db, 6) << ',' << format_double(row.sigma, 9) << ',' << row.symbols << ','
        << row.symbol_errors << ',' << ser.str() << ',' << row.block_errors << ',' << row.blocks << ',' << secs.str() << ','
        << (row.budget_capped ? 1 : 0) << '\n';
    out.flush();
}

AnalysisReport analyze(const LatticeBundle& lattice, std::optional<std::size_t> max_input_weight) {
    const auto& spec = lattice.spec();
    const auto& codes = lattice.family().codes();
    AnalysisReport rep;
    rep.n = lattice.n();
    rep.construction = spec.construction;
    for (std::size_t l = 1; l <= codes.levels(); ++l) rep.dimensions.push_back(codes.dimension(l));
    rep.rates = rates(codes);
    rep.actual_rates = actual_rates(codes);

    std::vector<WeightSpectrum> spectra;
    for (std::size_t l = 1; l <= codes.levels(); ++l) {
        if (codes.dimension(l) <= kSpectrumBudget) {
            const auto s = weight_spectrum(codes.level_generator(l));
            rep.distances.push_back({s.min_distance(), s.count(s.min_distance()), true});
        } else if (spec.distances.size() == codes.levels()) {
            rep.distances.push_back(spec.distances[l - 1]);
        } else if (max_input_weight) {
            const auto s = low_input_weight_spectrum(codes.level_generator(l), *max_input_weight);
            rep.distances.push_back({s.min_distance(), s.count(s.min_distance()), s.exact});
        } else {
            throw BudgetExceeded("level " + std::to_string(l) + " has dimension " + std::to_string(codes.dimension(l)) +
                                 "; supply 'lattice.distances' or an input-weight limit");
        }
    }
    if (spec.construction == ConstructionKind::a) {
        rep.figures = figures_construction_a(codes.n(), codes.dimension(1), rep.distances.front());
    } else {
        rep.figures = figures_construction_d(codes.n(), rep.rates, rep.distances);
    }
    if (rep.n <= 400) rep.exact_log2_volume = exact_log2_volume(lattice.basis());
    if (rep.n <= kEnumerationMaxDimension) rep.enumerated = shortest_vectors(lattice.basis());
    return rep;
}

AnalysisReport analyze(const DesignSpec& design) {
    AnalysisReport rep;
    rep.n = design.n;
    rep.rates = design.rates;
    rep.distances = design.distances;
    rep.figures = figures_construction_d(design.n, design.rates, design.distances);
    return rep;
}

std::string to_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "n                 " << r.n << '\n';
    os << "construction      " << (r.construction == ConstructionKind::a ? "A" : "D") << '\n';
    os << "levels            " << r.rates.size() << '\n';
    for (std::size_t l = 0; l < r.rates.size(); ++l) {
        os << "  level " << l + 1 << ":";
        if (!r.dimensions.empty()) os << " k=" << r.dimensions[l];
        os << " rate=" << rational_text(r.rates[l]);
        if (!r.actual_rates.empty()) os << " actual_rate=" << rational_text(r.actual_rates[l]);
        const auto& d = r.distances[l];
        os << " d=" << d.d_min;
        if (d.multiplicity != 0) os << " A=" << d.multiplicity;
        if (!d.exact) os << " (not exhaustive)";
        os << '\n';
    }
    const auto& f = r.figures;
    os << "log2_volume       " << format_double(f.log2_volume, 10) << '\n';
    if (r.exact_log2_volume) os << "log2_volume_exact " << *r.exact_log2_volume << '\n';
    os << "d_min_squared     " << rational_text(f.d_min_squared) << '\n';
    os << "coding_gain       " << format_double(f.coding_gain, 8) << '\n';
    os << "coding_gain_db    " << format_double(f.coding_gain_db, 6) << '\n';
    if (f.coding_gain_alternative)
        os << "coding_gain_alt   " << format_double(*f.coding_gain_alternative, 8) << " (d^2/2 * 4^(k/n))\n";
    os << "kissing           " << format_double(f.kissing, 10) << (f.kissing_is_bound ? " (upper bound)" : "") << '\n';
    os << "kissing_per_dim   " << format_double(f.normalized_kissing, 8) << '\n';
    if (r.enumerated) {
        os << "enumerated_d2     " << rational_text(r.enumerated->d_min_squared) << '\n';
        os << "enumerated_kiss   " << r.enumerated->kissing << '\n';
    }
    return os.str();
}

json to_json(const AnalysisReport& r) {
    json levels = json::array();
    for (std::size_t l = 0; l < r.rates.size(); ++l) {
        json lv{{"rate", rational_text(r.rates[l])},
                {"d_min", r.distances[l].d_min},
                {"multiplicity", r.distances[l].multiplicity},
                {"exact", r.distances[l].exact}};
        if (!r.dimensions.empty()) lv["k"] = r.dimensions[l];
        if (!r.actual_rates.empty()) lv["actual_rate"] = rational_text(r.actual_rates[l]);
        levels.push_back(lv);
    }
    const auto& f = r.figures;
    json out{{"n", r.n},
             {"construction", r.construction == ConstructionKind::a ? "A" : "D"},
             {"levels", levels},
             {"log2_volume", f.log2_volume},
             {"d_min_squared", rational_text(f.d_min_squared)},
             {"coding_gain", f.coding_gain},
             {"coding_gain_db", f.coding_gain_db},
             {"kissing", f.kissing},
             {"kissing_is_bound", f.kissing_is_bound},
             {"normalized_kissing", f.normalized_kissing}};
    if (f.coding_gain_alternative) out["coding_gain_alternative"] = *f.coding_gain_alternative;
    if (r.exact_log2_volume) out["log2_volume_exact"] = *r.exact_log2_volume;
    if (r.enumerated) {
        out["enumerated_d_min_squared"] = rational_text(r.enumerated->d_min_squared);
        out["enumerated_kissing"] = r.enumerated->kissing;
    }
    return out;
}

}  // namespace turbolattice
