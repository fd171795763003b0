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

#ifndef TURBOLATTICE_DECODER_HPP
#define TURBOLATTICE_DECODER_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "turbolattice/bits.hpp"
#include "turbolattice/conv_code.hpp"
#include "turbolattice/lattice.hpp"
#include "turbolattice/turbo_code.hpp"

namespace turbolattice {

/// Per-coordinate parity metric of a real vector against C + 2Z^n.
struct Mod2Metric {
    std::vector<double> t;             ///< (r - o)^2 - (r - e)^2; positive favours the even anchor
    std::vector<double> s;             ///< r mod 2 in [0, 2)
    std::vector<std::int64_t> even;    ///< nearest even integer (ties toward -infinity)
    std::vector<std::int64_t> odd;     ///< nearest odd integer (ties toward -infinity)
};
Mod2Metric mod2_metric(std::span<const double> r);

/// Soft-in, hard-out decoder of one binary linear code.
/// LLRs are log P(bit = 0) / P(bit = 1); the result is a codeword.
class CodewordDecoder {
   public:
    virtual ~CodewordDecoder() = default;
    virtual std::size_t length() const = 0;
    virtual BitVector decode(std::span<const double> llr) = 0;
};

inline constexpr std::size_t kMlMaxDimension = 16;

/// Exhaustive maximum-likelihood decoding over all 2^k codewords (k <= 16).
class MlDecoder final : public CodewordDecoder {
   public:
    explicit MlDecoder(BitMatrix generator);
    std::size_t length() const override { return generator_.cols(); }
    BitVector decode(std::span<const double> llr) override;

   private:
    BitMatrix generator_;
    std::vector<std::vector<std::size_t>> supports_;
};

/// Log-domain forward-backward decoder on a convolutional trellis.
///
/// Channel LLRs are given per section as `outputs()` consecutive values
/// (systematic bits first). A-priori and a-posteriori values are indexed by
/// information bit i*L + t. Tail-biting trellises use a circular boundary
/// estimated by one calibration pass in each direction.
class Bcjr {
   public:
    explicit Bcjr(Trellis trellis);

    const Trellis& trellis() const noexcept { return trellis_; }
    std::size_t info_bits() const noexcept { return trellis_.length() * trellis_.inputs(); }

    /// `forced_zero` (optional, per information bit) removes every edge setting that bit to 1.
    /// Extrinsic = a-posteriori - a-priori - systematic channel LLR; it is 0 for forced bits.
    void run(std::span<const double> channel, std::span<const double> apriori, std::span<const std::uint8_t> forced_zero,
             std::vector<double>& aposteriori, std::vector<double>& extrinsic);

   private:
    double edge_metric(std::size_t section, const Trellis::Edge& e, std::span<const double> channel,
                       std::span<const double> apriori) const;
    bool edge_allowed(std::size_t section, std::uint32_t input, std::span<const std::uint8_t> forced_zero) const;
    void forward(std::span<const double> channel, std::span<const double> apriori, std::span<const std::uint8_t> forced);
    void backward(std::span<const double> channel, std::span<const double> apriori, std::span<const std::uint8_t> forced);

    Trellis trellis_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
};

struct TurboDecoderOptions {
    std::size_t iterations = 10;
};

/// Iterative decoder for a parallel concatenation, optionally restricted to the
/// subcode generated by its first `active_rows` rows (the other information
/// bits are known to be zero).
class TurboDecoder final : public CodewordDecoder {
   public:
    TurboDecoder(const RationalGeneratorMatrix& component, const TurboGenerator& code, std::size_t active_rows,
                 TurboDecoderOptions options = {});
    TurboDecoder(const RationalGeneratorMatrix& component, const TurboGenerator& code, TurboDecoderOptions options = {})
        : TurboDecoder(component, code, code.k(), options) {}

    std::size_t length() const override { return code_.n(); }
    BitVector decode(std::span<const double> llr) override;
    /// Information bits decided by the last call.
    const BitVector& last_message() const noexcept { return message_; }

   private:
    void branch_channel(std::size_t branch, std::span<const double> llr, std::vector<double>& out) const;

    TurboGenerator code_;
    std::size_t active_;
    TurboDecoderOptions options_;
    Bcjr bcjr_;
    std::vector<std::uint8_t> forced_;
    BitVector message_;
};

/// Outcome of decoding r against C_l + 2Z^n.
struct LevelDecodeResult {
    std::vector<std::int64_t> point;  ///< x_l: the even or odd anchor per coordinate
    BitVector codeword;               ///< x_l mod 2
};

/// mod-2 metric, LLR = t / (2 sigma^2), component decode, anchors per decoded bit.
LevelDecodeResult decode_level(CodewordDecoder& decoder, std::span<const double> r, double sigma);

/// Result of the multistage decoder. The decoded point is x = scaled / 2^(a-1).
struct MultiStageResult {
    std::vector<std::int64_t> scaled;              ///< 2^(a-1) x
    std::size_t scale_exponent = 0;                ///< a - 1
    std::vector<LevelDecodeResult> levels;         ///< levels[0] is level a (decoded first)
    std::vector<std::vector<std::int64_t>> lifts;  ///< integer row combinations of G_l, same order
    std::vector<std::int64_t> w;                   ///< even vector
    std::vector<std::vector<double>> inputs;       ///< residual r_l seen by each stage, same order

    double coordinate(std::size_t j) const {
        return static_cast<double>(scaled[j]) / static_cast<double>(std::int64_t{1} << scale_exponent);
    }
};

/// Multistage decoder for Lambda = C_1 + C_2/2 + ... + C_a/2^(a-1) + 2Z^n.
///
/// Stage l decodes C_l + 2Z^n on the residual, subtracts the integer lift of
/// the decoded codeword through the rows of G_l and halves. The final residual
/// is rounded to the even vector w. The output always lies in the lattice.
class MultistageDecoder {
   public:
    /// `level_decoders[l-1]` decodes C_l.
    MultistageDecoder(NestedCodeFamily family, std::vector<std::unique_ptr<CodewordDecoder>> level_decoders);

    const NestedCodeFamily& family() const noexcept { return family_; }
    MultiStageResult decode(std::span<const double> r, double sigma, bool keep_inputs = false);
    /// Component decodes performed so far (exactly a per call).
    std::uint64_t component_calls() const noexcept { return calls_; }

   private:
    NestedCodeFamily family_;
    std::vector<std::unique_ptr<CodewordDecoder>> decoders_;
    std::vector<MessageRecovery> recovery_;
    std::uint64_t calls_ = 0;
};

/// Exhaustive ML decoders for every level (k_1 <= 16).
std::vector<std::unique_ptr<CodewordDecoder>> make_ml_decoders(const NestedCodeFamily& family);
/// Turbo decoders for every level of a nested turbo family.
std::vector<std::unique_ptr<CodewordDecoder>> make_turbo_decoders(const RationalGeneratorMatrix& component,
                                                                  const NestedTurboFamily& family,
                                                                  TurboDecoderOptions options = {});

}  // namespace turbolattice

#endif
