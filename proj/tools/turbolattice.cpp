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

// Command-line front end: construct, analyze, encode, decode, simulate, sweep.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "turbolattice/errors.hpp"
#include "turbolattice/sim.hpp"

using namespace turbolattice;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kInfeasible = 3, kBudget = 4, kInterrupted = 130 };

StopFlag g_stop{false};

extern "C" void on_interrupt(int) { g_stop.store(true); }

std::vector<double> read_reals(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::vector<double> v;
    double x;
    while (in >> x) v.push_back(x);
    if (!in.eof()) throw ConfigError("'" + path + "' holds a non-numeric token");
    return v;
}

std::vector<std::int64_t> parse_integers(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::int64_t> v;
    std::int64_t x;
    while (in >> x) v.push_back(x);
    if (!in.eof()) throw ConfigError("coefficients must be integers");
    return v;
}

LatticeBundle bundle_of(const SimConfig& cfg) {
    if (!cfg.lattice) throw ConfigError("this command needs a 'lattice' section");
    return LatticeBundle(*cfg.lattice);
}

void print_point(const std::vector<std::int64_t>& scaled, std::size_t exponent) {
    const std::int64_t den = std::int64_t{1} << exponent;
    for (std::size_t j = 0; j < scaled.size(); ++j) {
        const Rational v(scaled[j], den);
        std::cout << (j ? " " : "") << v.numerator();
        if (v.denominator() != 1) std::cout << '/' << v.denominator();
    }
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Turbo lattices: construction, analysis and AWGN simulation"};
    app.require_subcommand(1);
    std::string config_path;

    auto* construct = app.add_subcommand("construct", "Build a lattice and print its basis");
    std::string basis_out;
    construct->add_option("-c,--config", config_path, "JSON configuration")->required();
    construct->add_option("-o,--output", basis_out, "write the basis here instead of stdout");

    auto* analyze_cmd = app.add_subcommand("analyze", "Print dimension, volume, minimum distance, coding gain and kissing number");
    bool as_json = false;
    analyze_cmd->add_option("-c,--config", config_path, "JSON configuration")->required();
    analyze_cmd->add_flag("--json", as_json, "JSON output");
    std::size_t input_weight = 0;
    auto* weight_opt = analyze_cmd->add_option("--input-weight", input_weight,
                                               "for large codes, search messages up to this weight (distances become bounds)");

    auto* encode_cmd = app.add_subcommand("encode", "Map a message to a codeword or coefficients to a lattice point");
    std::string message, coefficients;
    encode_cmd->add_option("-c,--config", config_path, "JSON configuration")->required();
    auto* msg_opt = encode_cmd->add_option("-m,--message", message, "information bits of the turbo code, e.g. 0110...");
    auto* coef_opt = encode_cmd->add_option("-z,--coefficients", coefficients, "integer coefficients, space separated");
    msg_opt->excludes(coef_opt);

    auto* decode_cmd = app.add_subcommand("decode", "Decode one received vector");
    std::string input_path;
    double alpha2_db = 0;
    double sigma = 0;
    decode_cmd->add_option("-c,--config", config_path, "JSON configuration")->required();
    decode_cmd->add_option("-i,--input", input_path, "file of whitespace-separated reals")->required();
    auto* vnr_opt = decode_cmd->add_option("--alpha2-db", alpha2_db, "noise level as a VNR in dB");
    auto* sigma_opt = decode_cmd->add_option("--sigma", sigma, "noise deviation");
    vnr_opt->excludes(sigma_opt);

    auto* simulate_cmd = app.add_subcommand("simulate", "Estimate the symbol error rate at one VNR");
    simulate_cmd->add_option("-c,--config", config_path, "JSON configuration")->required();
    simulate_cmd->add_option("--alpha2-db", alpha2_db, "VNR in dB")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Estimate the symbol error rate over the configured grid");
    std::string csv_out;
    sweep_cmd->add_option("-c,--config", config_path, "JSON configuration")->required();
    sweep_cmd->add_option("-o,--output", csv_out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        const SimConfig cfg = load_config(config_path);

        if (construct->parsed()) {
            const auto lattice = bundle_of(cfg);
            const auto text = lattice.basis().to_text();
            if (basis_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream(basis_out) << text;
                std::cerr << "basis of dimension " << lattice.n() << " written to " << basis_out << '\n';
            }
            std::cerr << "n=" << lattice.n() << " levels=" << lattice.family().levels()
                      << " log2_volume=" << lattice.basis().log2_volume() << '\n';
        } else if (analyze_cmd->parsed()) {
            const auto report = cfg.design && !cfg.lattice ? analyze(*cfg.design) : analyze(bundle_of(cfg), *weight_opt ? std::optional<std::size_t>(input_weight) : std::nullopt);
            if (as_json) {
                std::cout << to_json(report).dump(2) << '\n';
            } else {
                std::cout << to_text(report);
            }
        } else if (encode_cmd->parsed()) {
            const auto lattice = bundle_of(cfg);
            if (!message.empty()) {
                std::cout << encode(lattice.code(), BitVector::from_string(message)).to_string() << '\n';
            } else if (!coefficients.empty()) {
                const auto z = parse_integers(coefficients);
                if (z.size() != lattice.n()) throw ConfigError("expected " + std::to_string(lattice.n()) + " coefficients");
                std::vector<std::int64_t> x(lattice.n(), 0);
                const auto& rows = lattice.basis().integer_rows();
                for (std::size_t i = 0; i < z.size(); ++i)
                    for (std::size_t c = 0; c < x.size(); ++c) x[c] += z[i] * rows[i][c];
                print_point(x, lattice.basis().scale_exponent());
            } else {
                throw ConfigError("give --message or --coefficients");
            }
        } else if (decode_cmd->parsed()) {
            const auto lattice = bundle_of(cfg);
            const auto r = read_reals(input_path);
            if (r.size() != lattice.n()) throw ConfigError("input has " + std::to_string(r.size()) + " values, lattice has n = " +
                                                           std::to_string(lattice.n()));
            const double s = *sigma_opt ? sigma : vnr_to_sigma(static_cast<double>(lattice.log2_volume()), lattice.n(), *vnr_opt ? alpha2_db : 0.0);
            auto decoder = lattice.make_decoder(cfg.decoder, cfg.iterations);
            const auto res = decoder.decode(r, s);
            print_point(res.scaled, res.scale_exponent);
        } else if (simulate_cmd->parsed()) {
            const auto lattice = bundle_of(cfg);
            std::signal(SIGINT, on_interrupt);
            const auto row = run_point(cfg, lattice, 0, alpha2_db, &g_stop);
            write_csv_header(std::cout);
            write_csv_row(std::cout, row);
            if (g_stop.load()) return kInterrupted;
        } else if (sweep_cmd->parsed()) {
            const auto lattice = bundle_of(cfg);
            if (cfg.grid_db.empty()) throw ConfigError("'grid_db' must not be empty");
            std::ofstream file;
            if (!csv_out.empty()) {
                file.open(csv_out);
                if (!file) throw ConfigError("cannot write '" + csv_out + "'");
            }
            std::ostream& out = csv_out.empty() ? std::cout : file;
            std::signal(SIGINT, on_interrupt);
            write_csv_header(out);
            const auto rows = sweep(cfg, lattice, [&](const SerRow& row) { write_csv_row(out, row); }, &g_stop);
            if (g_stop.load()) {
                std::cerr << "interrupted after " << rows.size() << " of " << cfg.grid_db.size() << " points\n";
                return kInterrupted;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const NotCoprime& e) {
        std::cerr << "construction infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const ConstructionFailed& e) {
        std::cerr << "construction infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kOk;
}
