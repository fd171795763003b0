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

#ifndef TURBOLATTICE_LATTICE_HPP
#define TURBOLATTICE_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "turbolattice/bits.hpp"
#include "turbolattice/turbo_code.hpp"

namespace turbolattice {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;
using BigInt = boost::multiprecision::cpp_int;

/// Full-rank lattice basis with power-of-two denominators.
///
/// Basis row i is integer_rows()[i] / 2^scale_exponent(). For Construction D
/// the rows of level l carry the factor 2^(1-l), so scale_exponent() = a - 1.
class LatticeBasis {
   public:
    LatticeBasis(IntMatrix rows, std::size_t scale_exponent, std::vector<std::size_t> ranks,
                 std::vector<std::size_t> row_levels);

    std::size_t n() const noexcept { return rows_.size(); }
    std::size_t levels() const noexcept { return ranks_.size(); }
    /// (k_1, ..., k_a).
    const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
    const IntMatrix& integer_rows() const noexcept { return rows_; }
    std::size_t scale_exponent() const noexcept { return scale_; }
    /// Level of each row: l in 1..a for code rows, 0 for the 2e_i completions.
    const std::vector<std::size_t>& row_levels() const noexcept { return row_levels_; }

    Rational entry(std::size_t row, std::size_t col) const;
    /// log2 |det B| = n - sum k_l for Construction A and D.
    std::int64_t log2_volume() const noexcept;
    double volume() const;

    /// One row per line, entries "p/q" (or "p" when integral), separated by spaces.
    std::string to_text() const;

   private:
    IntMatrix rows_;
    std::size_t scale_;
    std::vector<std::size_t> ranks_;
    std::vector<std::size_t> row_levels_;
};

/// Lattice C + 2Z^n: reduced echelon rows of C followed by 2e_i on its non-pivot columns.
/// Throws InvalidArgument for a rank-deficient generator.
LatticeBasis construction_a(const BitMatrix& generator);

/// Lattice spanned by the rows of G_1 with levels l scaled by 2^(1-l), plus 2e_i on
/// the non-pivot columns of G_1.
///
/// Throws ConstructionFailed when G_1 restricted to its pivot columns is not
/// unimodular over the integers; then the rows and completions do not span a
/// lattice containing 2Z^n and the volume formula does not apply.
LatticeBasis construction_d(const NestedCodeFamily& family);
inline LatticeBasis construction_d(const NestedTurboFamily& family) { return construction_d(family.codes()); }

/// Exact determinant of an integer matrix (Bareiss elimination on big integers).
BigInt determinant(const IntMatrix& m);
/// log2 |det B| computed from the basis entries; throws unless |det B| is a power of two.
std::int64_t exact_log2_volume(const LatticeBasis& basis);

/// Coefficient vector z with x = zB when x lies in the lattice; x is given as
/// integers scaled by 2^scale_exponent().
std::optional<IntVector> lattice_coordinates(const LatticeBasis& basis, std::span<const std::int64_t> scaled_point);

/// Per-level code parameters feeding the figure formulas.
struct LevelDistance {
    std::size_t d_min = 0;
    std::uint64_t multiplicity = 0;  ///< A_{d_min}
    bool exact = true;
};

struct LatticeFigures {
    std::size_t n = 0;
    Rational d_min_squared;
    double log2_volume = 0;          ///< may be fractional for designs given by rates
    double coding_gain = 0;          ///< d_min^2 / volume^(2/n)
    double coding_gain_db = 0;
    double kissing = 0;              ///< tau, exact or an upper bound
    bool kissing_is_bound = false;
    double normalized_kissing = 0;   ///< tau / n
    bool exact = true;               ///< false when some input distance was only a bound
    /// Construction A only: the alternative closed form (d^2/2) 4^(k/n) quoted for d < 4.
    std::optional<double> coding_gain_alternative;
};

double to_db(double linear);

/// Construction A figures from the code's exact d_min and A_{d_min}.
LatticeFigures figures_construction_a(std::size_t n, std::size_t k, const LevelDistance& code);
LatticeFigures figures_construction_a(const BitMatrix& generator, const WeightSpectrum& spectrum);

/// Construction D figures from per-level distances and rates R_l.
LatticeFigures figures_construction_d(std::size_t n, std::span<const Rational> rates, std::span<const LevelDistance> levels);
LatticeFigures figures_construction_d(const NestedCodeFamily& family, std::span<const WeightSpectrum> spectra);

/// A nonzero lattice vector found by enumeration.
struct ShortVector {
    IntVector coefficients;  ///< z with x = zB
    IntVector scaled;        ///< 2^scale_exponent * x
    Rational norm;           ///< ||x||^2
};

inline constexpr std::size_t kEnumerationMaxDimension = 16;

/// Every nonzero v in the lattice with ||v||^2 <= radius_squared (Fincke-Pohst).
/// Throws BudgetExceeded beyond n = 16 or radius^2 = 8.
std::vector<ShortVector> enumerate_short_vectors(const LatticeBasis& basis, Rational radius_squared);

/// Exact minimum squared norm and number of minimal vectors, for lattices containing 2Z^n.
struct ShortestVectors {
    Rational d_min_squared;
    std::uint64_t kissing = 0;
};
ShortestVectors shortest_vectors(const LatticeBasis& basis);

/// Noise deviation for a VNR given in dB: sigma^2 = volume^(2/n) / (2 pi e alpha^2).
double vnr_to_sigma(double log2_volume, std::size_t n, double alpha2_db);
inline double vnr_to_sigma(const LatticeBasis& basis, double alpha2_db) {
    return vnr_to_sigma(static_cast<double>(basis.log2_volume()), basis.n(), alpha2_db);
}

}  // namespace turbolattice

#endif
