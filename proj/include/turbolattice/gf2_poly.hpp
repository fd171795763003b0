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

#ifndef TURBOLATTICE_GF2_POLY_HPP
#define TURBOLATTICE_GF2_POLY_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "turbolattice/bits.hpp"

namespace turbolattice {

/// Polynomial over GF(2). Coefficient i is the coefficient of x^i.
///
/// Values are kept canonical: the highest stored coefficient is 1, so the zero
/// polynomial stores nothing and has no degree.
class BinaryPolynomial {
   public:
    BinaryPolynomial() = default;
    /// From exponents, e.g. {0, 2, 4} = 1 + x^2 + x^4. Repeated exponents cancel.
    BinaryPolynomial(std::initializer_list<std::size_t> exponents);
    explicit BinaryPolynomial(std::vector<std::uint8_t> coefficients);

    static BinaryPolynomial monomial(std::size_t exponent);
    /// x^L - 1 (which equals x^L + 1 over GF(2)).
    static BinaryPolynomial cyclic_modulus(std::size_t length);
    /// Parses the low-to-high bit string form, e.g. "10101" = 1 + x^2 + x^4.
    static BinaryPolynomial from_string(std::string_view bits);

    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// nullopt for the zero polynomial.
    std::optional<std::size_t> degree() const noexcept;
    bool coefficient(std::size_t i) const noexcept { return i < coeffs_.size() && coeffs_[i] != 0; }
    const std::vector<std::uint8_t>& coefficients() const noexcept { return coeffs_; }

    /// Coefficients padded to `length` entries (throws if the degree does not fit).
    BitVector to_bits(std::size_t length) const;
    /// Low-to-high bit string; "0" for the zero polynomial.
    std::string to_string() const;
    /// Human-readable form such as "1+x^2+x^4".
    std::string to_algebraic() const;

    friend bool operator==(const BinaryPolynomial&, const BinaryPolynomial&) = default;

   private:
    void normalize();
    std::vector<std::uint8_t> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const BinaryPolynomial& p);

BinaryPolynomial poly_add(const BinaryPolynomial& a, const BinaryPolynomial& b);
BinaryPolynomial poly_mul(const BinaryPolynomial& a, const BinaryPolynomial& b);
/// Quotient and remainder of a / b; b must be nonzero.
std::pair<BinaryPolynomial, BinaryPolynomial> poly_divmod(const BinaryPolynomial& a, const BinaryPolynomial& b);
/// p reduced modulo x^L - 1 (exponents folded mod L).
BinaryPolynomial poly_mod_cyclic(const BinaryPolynomial& p, std::size_t length);
/// a·b reduced modulo x^L - 1; result has degree < L.
BinaryPolynomial poly_mul_mod(const BinaryPolynomial& a, const BinaryPolynomial& b, std::size_t length);
/// Monic gcd by Euclid's algorithm; rejects gcd(0, 0).
BinaryPolynomial poly_gcd(const BinaryPolynomial& a, const BinaryPolynomial& b);

struct ExtendedGcd {
    BinaryPolynomial gcd;
    BinaryPolynomial s;  ///< s·a + t·b = gcd
    BinaryPolynomial t;
};
ExtendedGcd poly_extended_gcd(const BinaryPolynomial& a, const BinaryPolynomial& b);

/// Inverse of r modulo x^L - 1. Throws NotCoprime when gcd(r, x^L - 1) != 1.
BinaryPolynomial poly_inverse_mod(const BinaryPolynomial& r, std::size_t length);

/// The unique f with deg f < L and f·r = q (mod x^L - 1).
/// Throws NotCoprime when r is not invertible modulo x^L - 1.
BinaryPolynomial solve_f(const BinaryPolynomial& q, const BinaryPolynomial& r, std::size_t length);

/// L×L circulant matrix over GF(2); row i is the top row cyclically shifted right by i.
class CirculantMatrix {
   public:
    CirculantMatrix(std::size_t size, BitVector top_row);

    std::size_t size() const noexcept { return size_; }
    const BitVector& top_row() const noexcept { return top_row_; }
    bool get(std::size_t row, std::size_t col) const noexcept { return top_row_.get((col + size_ - row) % size_); }
    BinaryPolynomial polynomial() const;
    BitMatrix to_matrix() const;

    CirculantMatrix operator*(const CirculantMatrix& rhs) const;
    friend bool operator==(const CirculantMatrix&, const CirculantMatrix&) = default;

   private:
    std::size_t size_;
    BitVector top_row_;
};

/// Circulant with top row = coefficients of f padded to L. Rejects deg f >= L.
CirculantMatrix circulant(const BinaryPolynomial& f, std::size_t length);

}  // namespace turbolattice

#endif
