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

#include "turbolattice/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "turbolattice/errors.hpp"

namespace turbolattice {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double max_star(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

// Nearest integer of the given parity (0 even, 1 odd), ties toward -infinity.
std::int64_t nearest_with_parity(double r, int parity) {
    return 2 * static_cast<std::int64_t>(std::ceil((r - parity) / 2.0 - 0.5)) + parity;
}

void normalize(std::span<double> v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf) return;
    for (double& x : v) x -= m;
}

}  // namespace

Mod2Metric mod2_metric(std::span<const double> r) {
    Mod2Metric m;
    m.t.resize(r.size());
    m.s.resize(r.size());
    m.even.resize(r.size());
    m.odd.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double x = r[j];
        const std::int64_t e = nearest_with_parity(x, 0), o = nearest_with_parity(x, 1);
        const double de = x - static_cast<double>(e), dO = x - static_cast<double>(o);
        m.even[j] = e;
        m.odd[j] = o;
        m.t[j] = dO * dO - de * de;
        m.s[j] = x - 2.0 * std::floor(x / 2.0);
    }
    return m;
}

MlDecoder::MlDecoder(BitMatrix generator) : generator_(std::move(generator)) {
    if (generator_.rows() > kMlMaxDimension)
        throw BudgetExceeded("exhaustive ML decoding is limited to k <= " + std::to_string(kMlMaxDimension));
    if (generator_.rank() != generator_.rows()) throw InvalidArgument("ML decoder needs a full-rank generator");
    for (std::size_t r = 0; r < generator_.rows(); ++r) {
        std::vector<std::size_t> s;
        for (std::size_t c = 0; c < generator_.cols(); ++c)
            if (generator_.get(r, c)) s.push_back(c);
        supports_.push_back(std::move(s));
    }
}

BitVector MlDecoder::decode(std::span<const double> llr) {
    if (llr.size() != length()) throw InvalidArgument("LLR vector length differs from the code length");
    // Minimise sum_j c_j llr_j over codewords, walking them in Gray-code order.
    BitVector word(length());
    double cost = 0, best_cost = 0;
    BitVector best = word;
    const std::uint64_t total = std::uint64_t{1} << generator_.rows();
    for (std::uint64_t i = 1; i < total; ++i) {
        const auto row = static_cast<std::size_t>(std::countr_zero(i));
        for (auto c : supports_[row]) {
            cost += word.get(c) ? -llr[c] : llr[c];
            word.flip(c);
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = word;
        }
    }
    return best;
}

Bcjr::Bcjr(Trellis trellis) : trellis_(std::move(trellis)) {
    const std::size_t sections = trellis_.sections();
    alpha_.assign((sections + 1) * trellis_.states(), 0.0);
    beta_.assign((sections + 1) * trellis_.states(), 0.0);
}

double Bcjr::edge_metric(std::size_t section, const Trellis::Edge& e, std::span<const double> channel,
                         std::span<const double> apriori) const {
    const std::size_t nout = trellis_.outputs(), k = trellis_.inputs();
    double m = 0;
    const double* ch = channel.data() + section * nout;
    for (std::size_t b = 0; b < nout; ++b) m += ((e.output >> b) & 1) ? -0.5 * ch[b] : 0.5 * ch[b];
    if (!trellis_.is_tail_section(section) && !apriori.empty())
        for (std::size_t i = 0; i < k; ++i) {
            const double la = apriori[i * trellis_.length() + section];
            m += ((e.input >> i) & 1) ? -0.5 * la : 0.5 * la;
        }
    return m;
}

bool Bcjr::edge_allowed(std::size_t section, std::uint32_t input, std::span<const std::uint8_t> forced_zero) const {
    if (forced_zero.empty() || trellis_.is_tail_section(section)) return true;
    for (std::size_t i = 0; i < trellis_.inputs(); ++i)
        if (((input >> i) & 1) && forced_zero[i * trellis_.length() + section]) return false;
    return true;
}

void Bcjr::forward(std::span<const double> channel, std::span<const double> apriori, std::span<const std::uint8_t> forced) {
    const std::uint32_t states = trellis_.states();
    const std::size_t sections = trellis_.sections();
    for (std::size_t t = 0; t < sections; ++t) {
        double* next = alpha_.data() + (t + 1) * states;
        const double* cur = alpha_.data() + t * states;
        std::fill(next, next + states, kNegInf);
        for (std::uint32_t s = 0; s < states; ++s) {
            if (cur[s] == kNegInf) continue;
            auto visit = [&](const Trellis::Edge& e) {
                next[e.next] = max_star(next[e.next], cur[s] + edge_metric(t, e, channel, apriori));
            };
            if (trellis_.is_tail_section(t)) {
                visit(trellis_.flush_edge(s));
                continue;
            }
            for (std::uint32_t in = 0; in < trellis_.edges_per_state(); ++in)
                if (edge_allowed(t, in, forced)) visit(trellis_.edge(s, in));
        }
        normalize({next, states});
    }
}

void Bcjr::backward(std::span<const double> channel, std::span<const double> apriori, std::span<const std::uint8_t> forced) {
    const std::uint32_t states = trellis_.states();
    for (std::size_t t = trellis_.sections(); t-- > 0;) {
        double* cur = beta_.data() + t * states;
        const double* next = beta_.data() + (t + 1) * states;
        for (std::uint32_t s = 0; s < states; ++s) {
            double acc = kNegInf;
            auto visit = [&](const Trellis::Edge& e) {
                if (next[e.next] != kNegInf) acc = max_star(acc, next[e.next] + edge_metric(t, e, channel, apriori));
            };
            if (trellis_.is_tail_section(t)) {
                visit(trellis_.flush_edge(s));
            } else {
                for (std::uint32_t in = 0; in < trellis_.edges_per_state(); ++in)
                    if (edge_allowed(t, in, forced)) visit(trellis_.edge(s, in));
            }
            cur[s] = acc;
        }
        normalize({cur, states});
    }
}

void Bcjr::run(std::span<const double> channel, std::span<const double> apriori, std::span<const std::uint8_t> forced_zero,
               std::vector<double>& aposteriori, std::vector<double>& extrinsic) {
    const std::uint32_t states = trellis_.states();
    const std::size_t sections = trellis_.sections(), length = trellis_.length(), k = trellis_.inputs();
    if (channel.size() != sections * trellis_.outputs()) throw InvalidArgument("channel LLR count does not match the trellis");
    if (!apriori.empty() && apriori.size() != info_bits()) throw InvalidArgument("a-priori LLR count does not match the trellis");
    if (!forced_zero.empty() && forced_zero.size() != info_bits()) throw InvalidArgument("forced-bit mask size mismatch");

    auto alpha0 = std::span<double>(alpha_.data(), states);
    auto beta_end = std::span<double>(beta_.data() + sections * states, states);
    if (trellis_.mode() == TrellisMode::tail_biting) {
        // Calibration: start uniform, then restart from the boundary distribution reached.
        std::fill(alpha0.begin(), alpha0.end(), 0.0);
        forward(channel, apriori, forced_zero);
        std::copy_n(alpha_.data() + sections * states, states, alpha0.begin());
        forward(channel, apriori, forced_zero);
        std::fill(beta_end.begin(), beta_end.end(), 0.0);
        backward(channel, apriori, forced_zero);
        std::copy_n(beta_.data(), states, beta_end.begin());
        backward(channel, apriori, forced_zero);
    } else {
        std::fill(alpha0.begin(), alpha0.end(), kNegInf);
        alpha0[0] = 0.0;
        forward(channel, apriori, forced_zero);
        std::fill(beta_end.begin(), beta_end.end(), kNegInf);
        beta_end[0] = 0.0;
        backward(channel, apriori, forced_zero);
    }

    aposteriori.assign(info_bits(), 0.0);
    extrinsic.assign(info_bits(), 0.0);
    std::vector<double> zero(k), one(k);
    for (std::size_t t = 0; t < length; ++t) {
        std::fill(zero.begin(), zero.end(), kNegInf);
        std::fill(one.begin(), one.end(), kNegInf);
        const double* a = alpha_.data() + t * states;
        const double* b = beta_.data() + (t + 1) * states;
        for (std::uint32_t s = 0; s < states; ++s) {
            if (a[s] == kNegInf) continue;
            for (std::uint32_t in = 0; in < trellis_.edges_per_state(); ++in) {
                if (!edge_allowed(t, in, forced_zero)) continue;
                const auto& e = trellis_.edge(s, in);
                if (b[e.next] == kNegInf) continue;
                const double m = a[s] + edge_metric(t, e, channel, apriori) + b[e.next];
                for (std::size_t i = 0; i < k; ++i) {
                    double& slot = ((in >> i) & 1) ? one[i] : zero[i];
                    slot = max_star(slot, m);
                }
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t bit = i * length + t;
            if (!forced_zero.empty() && forced_zero[bit]) {
                aposteriori[bit] = std::numeric_limits<double>::infinity();
                extrinsic[bit] = 0.0;
                continue;
            }
            aposteriori[bit] = zero[i] - one[i];
            const double la = apriori.empty() ? 0.0 : apriori[bit];
            extrinsic[bit] = aposteriori[bit] - la - channel[t * trellis_.outputs() + i];
        }
    }
}

TurboDecoder::TurboDecoder(const RationalGeneratorMatrix& component, const TurboGenerator& code, std::size_t active_rows,
                           TurboDecoderOptions options)
    : code_(code),
      active_(active_rows),
      options_(options),
      bcjr_(build_trellis(component, code.component().length,
                          code.form() == BlockForm::tail_biting ? TrellisMode::tail_biting : TrellisMode::zero_terminated)),
      forced_(code.k(), 0),
      message_(code.k()) {
    const auto& b = code.component();
    if (component.inputs() != b.inputs || component.outputs() != b.outputs)
        throw InvalidArgument("component generator does not match the turbo code");
    if (active_rows == 0 || active_rows > code.k()) throw InvalidArgument("active row count out of range");
    for (std::size_t x = active_rows; x < code.k(); ++x) forced_[x] = 1;
}

void TurboDecoder::branch_channel(std::size_t branch, std::span<const double> llr, std::vector<double>& out) const {
    const auto& b = code_.component();
    const std::size_t steps = b.steps(), nout = b.outputs, k = b.inputs, length = b.length;
    out.assign(steps * nout, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t i = 0; i < k; ++i) {
            double v = 0.0;
            if (branch == 0) {
                v = llr[b.systematic_column(i, t)];
            } else if (t < length) {
                v = llr[code_.interleavers()[branch - 1](i * length + t)];
            }
            out[t * nout + i] = v;
        }
        for (std::size_t j = 0; j + k < nout; ++j) out[t * nout + k + j] = llr[code_.parity_column(branch, j, t)];
    }
}

BitVector TurboDecoder::decode(std::span<const double> llr) {
    if (llr.size() != length()) throw InvalidArgument("LLR vector length differs from the code length");
    const std::size_t k = code_.k(), branches = code_.branches();
    std::vector<std::vector<double>> channel(branches);
    for (std::size_t br = 0; br < branches; ++br) branch_channel(br, llr, channel[br]);

    // Extrinsic information in natural order, one vector per branch.
    std::vector<std::vector<double>> ext(branches, std::vector<double>(k, 0.0));
    std::vector<std::vector<std::uint8_t>> forced(branches);
    auto image = [&](std::size_t br, std::size_t x) { return br == 0 ? x : code_.interleavers()[br - 1](x); };
    for (std::size_t br = 0; br < branches; ++br) {
        forced[br].resize(k);
        for (std::size_t x = 0; x < k; ++x) forced[br][x] = forced_[image(br, x)];
    }
    std::vector<double> apriori(k), app, out;
    for (std::size_t it = 0; it < options_.iterations; ++it) {
        for (std::size_t br = 0; br < branches; ++br) {
            for (std::size_t x = 0; x < k; ++x) {
                double sum = 0;
                for (std::size_t other = 0; other < branches; ++other)
                    if (other != br) sum += ext[other][image(br, x)];
                apriori[x] = sum;
            }
            bcjr_.run(channel[br], apriori, forced[br], app, out);
            for (std::size_t x = 0; x < k; ++x) ext[br][image(br, x)] = out[x];
        }
    }
    message_ = BitVector(k);
    const auto& b = code_.component();
    for (std::size_t y = 0; y < k; ++y) {
        if (forced_[y]) continue;
        double total = llr[b.systematic_column(y / b.length, y % b.length)];
        for (std::size_t br = 0; br < branches; ++br) total += ext[br][y];
        if (total < 0) message_.set(y);
    }
    return code_.bits().left_multiply(message_);
}

LevelDecodeResult decode_level(CodewordDecoder& decoder, std::span<const double> r, double sigma) {
    if (r.size() != decoder.length()) throw InvalidArgument("received vector length differs from the code length");
    if (!(sigma > 0)) throw InvalidArgument("noise deviation must be positive");
    const auto m = mod2_metric(r);
    std::vector<double> llr(r.size());
    const double scale = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t j = 0; j < r.size(); ++j) llr[j] = m.t[j] * scale;
    LevelDecodeResult out;
    out.codeword = decoder.decode(llr);
    out.point.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) out.point[j] = out.codeword.get(j) ? m.odd[j] : m.even[j];
    return out;
}

MultistageDecoder::MultistageDecoder(NestedCodeFamily family, std::vector<std::unique_ptr<CodewordDecoder>> level_decoders)
    : family_(std::move(family)), decoders_(std::move(level_decoders)) {
    if (decoders_.size() != family_.levels()) throw InvalidArgument("need one component decoder per level");
    for (std::size_t l = 1; l <= family_.levels(); ++l) {
        if (!decoders_[l - 1] || decoders_[l - 1]->length() != family_.n())
            throw InvalidArgument("component decoder length differs from the lattice dimension");
        recovery_.emplace_back(family_.level_generator(l));
    }
}

MultiStageResult MultistageDecoder::decode(std::span<const double> r, double sigma, bool keep_inputs) {
    const std::size_t n = family_.n(), a = family_.levels();
    if (r.size() != n) throw InvalidArgument("received vector length differs from the lattice dimension");
    MultiStageResult res;
    res.scale_exponent = a - 1;
    res.scaled.assign(n, 0);

    const double top = std::ldexp(1.0, static_cast<int>(a - 1));
    std::vector<double> residual(r.begin(), r.end());
    for (auto& v : residual) v *= top;
    double level_sigma = sigma * top;

    for (std::size_t l = a; l >= 1; --l) {
        if (keep_inputs) res.inputs.push_back(residual);
        auto level = decode_level(*decoders_[l - 1], residual, level_sigma);
        ++calls_;
        // Integer lift of the decoded codeword through the rows of G_l.
        const BitVector message = recovery_[l - 1].recover(level.codeword);
        std::vector<std::int64_t> lift(n, 0);
        const BitMatrix& g = family_.generator();
        for (std::size_t row = 0; row < message.size(); ++row) {
            if (!message.get(row)) continue;
            for (std::size_t c = 0; c < n; ++c) lift[c] += g.get(row, c);
        }
        const std::int64_t weight = std::int64_t{1} << (a - l);
        for (std::size_t c = 0; c < n; ++c) {
            res.scaled[c] += weight * lift[c];
            residual[c] = (residual[c] - static_cast<double>(lift[c])) / 2.0;
        }
        level_sigma /= 2.0;
        res.levels.push_back(std::move(level));
        res.lifts.push_back(std::move(lift));
    }
    // After the last stage the residual approximates w / 2 with w even.
    res.w.resize(n);
    const std::int64_t top_weight = std::int64_t{1} << (a - 1);
    for (std::size_t c = 0; c < n; ++c) {
        res.w[c] = 2 * static_cast<std::int64_t>(std::ceil(residual[c] - 0.5));
        res.scaled[c] += top_weight * res.w[c];
    }
    return res;
}

std::vector<std::unique_ptr<CodewordDecoder>> make_ml_decoders(const NestedCodeFamily& family) {
    std::vector<std::unique_ptr<CodewordDecoder>> out;
    for (std::size_t l = 1; l <= family.levels(); ++l) out.push_back(std::make_unique<MlDecoder>(family.level_generator(l)));
    return out;
}

std::vector<std::unique_ptr<CodewordDecoder>> make_turbo_decoders(const RationalGeneratorMatrix& component,
                                                                  const NestedTurboFamily& family,
                                                                  TurboDecoderOptions options) {
    std::vector<std::unique_ptr<CodewordDecoder>> out;
    for (std::size_t l = 1; l <= family.levels(); ++l)
        out.push_back(std::make_unique<TurboDecoder>(component, family.base(), family.codes().dimension(l), options));
    return out;
}

}  // namespace turbolattice
