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

#include "turbolattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "turbolattice/errors.hpp"

namespace turbolattice {

namespace {

using BigRational = boost::multiprecision::cpp_rational;

// Peels columns holding a single 1 among the active rows; each peel is a cofactor
// expansion with a +-1 pivot, so det U = +-det(remaining block).
bool unimodular(const BitMatrix& u) {
    const std::size_t k = u.rows();
    std::vector<bool> row_alive(k, true), col_alive(k, true);
    std::size_t alive = k;
    for (bool progress = true; progress && alive > 0;) {
        progress = false;
        for (std::size_t c = 0; c < k; ++c) {
            if (!col_alive[c]) continue;
            std::size_t count = 0, where = 0;
            for (std::size_t r = 0; r < k && count < 2; ++r)
                if (row_alive[r] && u.get(r, c)) {
                    ++count;
                    where = r;
                }
            if (count == 0) return false;
            if (count == 1) {
                row_alive[where] = false;
                col_alive[c] = false;
                --alive;
                progress = true;
            }
        }
    }
    if (alive == 0) return true;
    if (alive > 400) throw ConstructionFailed("cannot certify unimodularity of a " + std::to_string(alive) + "x" +
                                              std::to_string(alive) + " pivot block");
    IntMatrix rest;
    for (std::size_t r = 0; r < k; ++r) {
        if (!row_alive[r]) continue;
        IntVector row;
        for (std::size_t c = 0; c < k; ++c)
            if (col_alive[c]) row.push_back(u.get(r, c));
        rest.push_back(std::move(row));
    }
    return abs(determinant(rest)) == 1;
}

std::string format_rational(std::int64_t num, std::size_t scale) {
    const Rational q(num, std::int64_t{1} << scale);
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

LatticeFigures finish(LatticeFigures f) {
    const double d2 = boost::rational_cast<double>(f.d_min_squared);
    f.coding_gain = d2 / std::exp2(2.0 * f.log2_volume / static_cast<double>(f.n));
    f.coding_gain_db = to_db(f.coding_gain);
    f.normalized_kissing = f.kissing / static_cast<double>(f.n);
    return f;
}

}  // namespace

LatticeBasis::LatticeBasis(IntMatrix rows, std::size_t scale_exponent, std::vector<std::size_t> ranks,
                           std::vector<std::size_t> row_levels)
    : rows_(std::move(rows)), scale_(scale_exponent), ranks_(std::move(ranks)), row_levels_(std::move(row_levels)) {
    for (const auto& r : rows_)
        if (r.size() != rows_.size()) throw InvalidArgument("lattice basis must be square");
    if (row_levels_.size() != rows_.size()) throw InvalidArgument("one level tag per basis row is required");
    if (scale_ > 60) throw InvalidArgument("too many Construction D levels for 64-bit entries");
}

Rational LatticeBasis::entry(std::size_t row, std::size_t col) const {
    return Rational(rows_.at(row).at(col), std::int64_t{1} << scale_);
}

std::int64_t LatticeBasis::log2_volume() const noexcept {
    std::int64_t v = static_cast<std::int64_t>(n());
    for (auto k : ranks_) v -= static_cast<std::int64_t>(k);
    return v;
}

double LatticeBasis::volume() const { return std::exp2(static_cast<double>(log2_volume())); }

std::string LatticeBasis::to_text() const {
    std::ostringstream out;
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << format_rational(row[c], scale_);
        out << '\n';
    }
    return out.str();
}

LatticeBasis construction_a(const BitMatrix& generator) {
    const std::size_t n = generator.cols();
    const auto e = row_echelon(generator);
    if (e.reduced.rows() != generator.rows()) throw InvalidArgument("Construction A needs a full-rank generator");
    std::vector<bool> pivot(n, false);
    for (auto p : e.pivots) pivot[p] = true;

    IntMatrix rows;
    std::vector<std::size_t> levels;
    for (std::size_t r = 0; r < e.reduced.rows(); ++r) {
        IntVector row(n);
        for (std::size_t c = 0; c < n; ++c) row[c] = e.reduced.get(r, c);
        rows.push_back(std::move(row));
        levels.push_back(1);
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (pivot[c]) continue;
        IntVector row(n, 0);
        row[c] = 2;
        rows.push_back(std::move(row));
        levels.push_back(0);
    }
    return LatticeBasis(std::move(rows), 0, {generator.rows()}, std::move(levels));
}

LatticeBasis construction_d(const NestedCodeFamily& family) {
    const BitMatrix& g = family.generator();
    const std::size_t n = family.n(), a = family.levels(), k = g.rows();
    const auto e = row_echelon(g);
    std::vector<bool> pivot(n, false);
    for (auto p : e.pivots) pivot[p] = true;

    BitMatrix u(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t i = 0; i < k; ++i) u.set(r, i, g.get(r, e.pivots[i]));
    if (!unimodular(u))
        throw ConstructionFailed("G_1 restricted to its pivot columns is not unimodular; the scaled rows do not generate 2Z^n");

    IntMatrix rows;
    std::vector<std::size_t> levels;
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t level = 1;
        while (level < a && r < family.dimension(level + 1)) ++level;
        const std::int64_t weight = std::int64_t{1} << (a - level);
        IntVector row(n);
        for (std::size_t c = 0; c < n; ++c) row[c] = g.get(r, c) ? weight : 0;
        rows.push_back(std::move(row));
        levels.push_back(level);
    }
    const std::int64_t two = std::int64_t{1} << a;
    for (std::size_t c = 0; c < n; ++c) {
        if (pivot[c]) continue;
        IntVector row(n, 0);
        row[c] = two;
        rows.push_back(std::move(row));
        levels.push_back(0);
    }
    std::vector<std::size_t> ranks;
    for (std::size_t l = 1; l <= a; ++l) ranks.push_back(family.dimension(l));
    return LatticeBasis(std::move(rows), a - 1, std::move(ranks), std::move(levels));
}

BigInt determinant(const IntMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw InvalidArgument("determinant of a non-square matrix");
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    }
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::int64_t exact_log2_volume(const LatticeBasis& basis) {
    BigInt det = abs(determinant(basis.integer_rows()));
    if (det == 0) throw InvalidArgument("lattice basis is singular");
    const auto bits = static_cast<std::int64_t>(msb(det));
    if (det != (BigInt(1) << static_cast<unsigned>(bits))) throw InvalidArgument("lattice volume is not a power of two");
    return bits - static_cast<std::int64_t>(basis.scale_exponent() * basis.n());
}

std::optional<IntVector> lattice_coordinates(const LatticeBasis& basis, std::span<const std::int64_t> scaled_point) {
    const std::size_t n = basis.n();
    if (scaled_point.size() != n) throw InvalidArgument("point dimension differs from the lattice dimension");
    // Solve z M = v, i.e. M^T z^T = v^T, by exact elimination on the augmented system.
    std::vector<std::vector<BigRational>> a(n, std::vector<BigRational>(n + 1));
    const auto& m = basis.integer_rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[j][i];
        a[i][n] = scaled_point[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw InvalidArgument("lattice basis is singular");
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const BigRational factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    IntVector z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const BigRational zi = a[i][n] / a[i][i];
        if (denominator(zi) != 1) return std::nullopt;
        z[i] = static_cast<std::int64_t>(numerator(zi));
    }
    return z;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

LatticeFigures figures_construction_a(std::size_t n, std::size_t k, const LevelDistance& code) {
    if (k > n) throw InvalidArgument("code dimension exceeds its length");
    LatticeFigures f;
    f.n = n;
    f.log2_volume = static_cast<double>(n - k);
    f.exact = code.exact;
    const std::size_t d = k == 0 ? SIZE_MAX : code.d_min;
    f.d_min_squared = Rational(static_cast<std::int64_t>(std::min<std::size_t>(d, 4)));
    const auto twice_n = 2.0 * static_cast<double>(n);
    if (d < 4) {
        f.kissing = std::exp2(static_cast<double>(d)) * static_cast<double>(code.multiplicity);
        f.coding_gain_alternative = static_cast<double>(d) / 2.0 * std::pow(4.0, static_cast<double>(k) / n);
    } else if (d == 4) {
        f.kissing = twice_n + 16.0 * static_cast<double>(code.multiplicity);
    } else {
        f.kissing = twice_n;
    }
    f.kissing_is_bound = !code.exact;
    return finish(f);
}

LatticeFigures figures_construction_a(const BitMatrix& generator, const WeightSpectrum& spectrum) {
    const LevelDistance d{spectrum.min_distance(), spectrum.count(spectrum.min_distance()), spectrum.exact};
    return figures_construction_a(generator.cols(), generator.rows(), d);
}

LatticeFigures figures_construction_d(std::size_t n, std::span<const Rational> rates, std::span<const LevelDistance> levels) {
    if (rates.size() != levels.size() || rates.empty())
        throw InvalidArgument("need one rate and one distance per level");
    LatticeFigures f;
    f.n = n;
    double rate_sum = 0;
    for (const auto& r : rates) rate_sum += boost::rational_cast<double>(r);
    f.log2_volume = static_cast<double>(n) * (1.0 - rate_sum);
    f.d_min_squared = Rational(4);
    f.kissing = 2.0 * static_cast<double>(n);
    f.kissing_is_bound = true;
    for (std::size_t l = 1; l <= levels.size(); ++l) {
        const auto& lv = levels[l - 1];
        f.exact = f.exact && lv.exact;
        const std::int64_t four_pow = std::int64_t{1} << (2 * (l - 1));
        f.d_min_squared = std::min(f.d_min_squared, Rational(static_cast<std::int64_t>(lv.d_min), four_pow));
        if (static_cast<double>(lv.d_min) <= std::pow(4.0, static_cast<double>(l)))
            f.kissing += std::exp2(static_cast<double>(lv.d_min)) * static_cast<double>(lv.multiplicity);
    }
    return finish(f);
}

LatticeFigures figures_construction_d(const NestedCodeFamily& family, std::span<const WeightSpectrum> spectra) {
    if (spectra.size() != family.levels()) throw InvalidArgument("need one weight spectrum per level");
    std::vector<LevelDistance> levels;
    for (const auto& s : spectra) levels.push_back({s.min_distance(), s.count(s.min_distance()), s.exact});
    const auto r = rates(family);
    auto f = figures_construction_d(family.n(), r, levels);
    return f;
}

std::vector<ShortVector> enumerate_short_vectors(const LatticeBasis& basis, Rational radius_squared) {
    const std::size_t n = basis.n();
    if (n > kEnumerationMaxDimension)
        throw BudgetExceeded("short-vector enumeration is limited to dimension " + std::to_string(kEnumerationMaxDimension));
    if (radius_squared > Rational(8)) throw BudgetExceeded("short-vector enumeration is limited to radius^2 <= 8");

    const auto& m = basis.integer_rows();
    const double unit = std::exp2(-static_cast<double>(basis.scale_exponent()));
    std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t c = 0; c < n; ++c) s += static_cast<double>(m[i][c]) * static_cast<double>(m[j][c]);
            gram[i][j] = s * unit * unit;
        }
    // Q(z) = sum_i q[i][i] (z_i + sum_{j>i} q[i][j] z_j)^2.
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double d = gram[i][i];
        for (std::size_t k = 0; k < i; ++k) d -= q[k][k] * q[k][i] * q[k][i];
        q[i][i] = d;
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = gram[i][j];
            for (std::size_t k = 0; k < i; ++k) s -= q[k][k] * q[k][i] * q[k][j];
            q[i][j] = s / d;
        }
    }

    const double radius = boost::rational_cast<double>(radius_squared);
    const double slack = 1e-9 * (1.0 + radius);
    const std::int64_t denom = std::int64_t{1} << (2 * basis.scale_exponent());
    std::vector<ShortVector> out;
    IntVector z(n, 0);

    auto emit = [&] {
        IntVector scaled(n, 0);
        bool zero = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (z[i] == 0) continue;
            zero = false;
            for (std::size_t c = 0; c < n; ++c) scaled[c] += z[i] * m[i][c];
        }
        if (zero) return;
        std::int64_t sum = 0;
        for (auto v : scaled) sum += v * v;
        const Rational norm(sum, denom);
        if (norm <= radius_squared) out.push_back({z, std::move(scaled), norm});
    };

    auto recurse = [&](auto&& self, std::size_t level, double remaining) -> void {
        const std::size_t i = level - 1;
        double center = 0;
        for (std::size_t j = i + 1; j < n; ++j) center -= q[i][j] * static_cast<double>(z[j]);
        const double half = std::sqrt(std::max(0.0, (remaining + slack) / q[i][i]));
        const auto lo = static_cast<std::int64_t>(std::ceil(center - half - 1e-9));
        const auto hi = static_cast<std::int64_t>(std::floor(center + half + 1e-9));
        for (std::int64_t v = lo; v <= hi; ++v) {
            const double t = static_cast<double>(v) - center;
            const double left = remaining - q[i][i] * t * t;
            if (left < -slack) continue;
            z[i] = v;
            if (i == 0)
                emit();
            else
                self(self, i, left);
        }
        z[i] = 0;
    };
    recurse(recurse, n, radius);
    return out;
}

ShortestVectors shortest_vectors(const LatticeBasis& basis) {
    // Every basis built here contains 2Z^n, so the minimum is at most 4.
    const auto all = enumerate_short_vectors(basis, Rational(4));
    if (all.empty()) throw InvalidArgument("no lattice vector within radius^2 4");
    ShortestVectors s;
    s.d_min_squared = all.front().norm;
    for (const auto& v : all) s.d_min_squared = std::min(s.d_min_squared, v.norm);
    for (const auto& v : all) s.kissing += v.norm == s.d_min_squared;
    return s;
}

double vnr_to_sigma(double log2_volume, std::size_t n, double alpha2_db) {
    const double alpha2 = std::pow(10.0, alpha2_db / 10.0);
    const double normalized = std::exp2(2.0 * log2_volume / static_cast<double>(n));
    return std::sqrt(normalized / (2.0 * std::numbers::pi * std::numbers::e * alpha2));
}

}  // namespace turbolattice
