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

#include "turbolattice/gf2_poly.hpp"

#include <algorithm>

#include "turbolattice/errors.hpp"

namespace turbolattice {

BinaryPolynomial::BinaryPolynomial(std::initializer_list<std::size_t> exponents) {
    for (auto e : exponents) {
        if (e >= coeffs_.size()) coeffs_.resize(e + 1, 0);
        coeffs_[e] ^= 1;
    }
    normalize();
}

BinaryPolynomial::BinaryPolynomial(std::vector<std::uint8_t> coefficients) : coeffs_(std::move(coefficients)) {
    for (auto& c : coeffs_) c = c != 0 ? 1 : 0;
    normalize();
}

BinaryPolynomial BinaryPolynomial::monomial(std::size_t exponent) {
    std::vector<std::uint8_t> c(exponent + 1, 0);
    c[exponent] = 1;
    return BinaryPolynomial(std::move(c));
}

BinaryPolynomial BinaryPolynomial::cyclic_modulus(std::size_t length) {
    if (length == 0) throw InvalidArgument("cyclic modulus needs L >= 1");
    return BinaryPolynomial{0, length};
}

BinaryPolynomial BinaryPolynomial::from_string(std::string_view bits) {
    std::vector<std::uint8_t> c;
    c.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw InvalidArgument("polynomial bit string contains '" + std::string(1, ch) + "'");
        c.push_back(ch == '1' ? 1 : 0);
    }
    return BinaryPolynomial(std::move(c));
}

void BinaryPolynomial::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<std::size_t> BinaryPolynomial::degree() const noexcept {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
}

BitVector BinaryPolynomial::to_bits(std::size_t length) const {
    if (coeffs_.size() > length) throw InvalidArgument("polynomial degree does not fit in " + std::to_string(length) + " bits");
    BitVector v(length);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i]) v.set(i);
    return v;
}

std::string BinaryPolynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (auto c : coeffs_) s.push_back(c ? '1' : '0');
    return s;
}

std::string BinaryPolynomial::to_algebraic() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (!coeffs_[i]) continue;
        if (!s.empty()) s += "+";
        if (i == 0)
            s += "1";
        else if (i == 1)
            s += "x";
        else
            s += "x^" + std::to_string(i);
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const BinaryPolynomial& p) { return os << p.to_algebraic(); }

BinaryPolynomial poly_add(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    std::vector<std::uint8_t> out(std::max(ca.size(), cb.size()), 0);
    for (std::size_t i = 0; i < ca.size(); ++i) out[i] ^= ca[i];
    for (std::size_t i = 0; i < cb.size(); ++i) out[i] ^= cb[i];
    return BinaryPolynomial(std::move(out));
}

BinaryPolynomial poly_mul(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    std::vector<std::uint8_t> out(ca.size() + cb.size() - 1, 0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!ca[i]) continue;
        for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] ^= cb[j];
    }
    return BinaryPolynomial(std::move(out));
}

std::pair<BinaryPolynomial, BinaryPolynomial> poly_divmod(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
    const std::size_t db = *b.degree();
    std::vector<std::uint8_t> rem = a.coefficients();
    if (rem.size() <= db) return {BinaryPolynomial{}, a};
    std::vector<std::uint8_t> quot(rem.size() - db, 0);
    const auto& cb = b.coefficients();
    for (std::size_t i = rem.size(); i-- > db;) {
        if (!rem[i]) continue;
        const std::size_t shift = i - db;
        quot[shift] = 1;
        for (std::size_t j = 0; j <= db; ++j) rem[shift + j] ^= cb[j];
    }
    return {BinaryPolynomial(std::move(quot)), BinaryPolynomial(std::move(rem))};
}

BinaryPolynomial poly_mod_cyclic(const BinaryPolynomial& p, std::size_t length) {
    if (length == 0) throw InvalidArgument("cyclic reduction needs L >= 1");
    std::vector<std::uint8_t> out(length, 0);
    const auto& c = p.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) out[i % length] ^= c[i];
    return BinaryPolynomial(std::move(out));
}

BinaryPolynomial poly_mul_mod(const BinaryPolynomial& a, const BinaryPolynomial& b, std::size_t length) {
    return poly_mod_cyclic(poly_mul(a, b), length);
}

BinaryPolynomial poly_gcd(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    if (a.is_zero() && b.is_zero()) throw InvalidArgument("gcd(0, 0) is undefined");
    BinaryPolynomial x = a;
    BinaryPolynomial y = b;
    while (!y.is_zero()) {
        BinaryPolynomial r = poly_divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x;  // every nonzero polynomial over GF(2) is monic
}

ExtendedGcd poly_extended_gcd(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    if (a.is_zero() && b.is_zero()) throw InvalidArgument("gcd(0, 0) is undefined");
    BinaryPolynomial r0 = a, r1 = b;
    BinaryPolynomial s0{0}, s1;
    BinaryPolynomial t0, t1{0};
    while (!r1.is_zero()) {
        auto [q, r] = poly_divmod(r0, r1);
        BinaryPolynomial s2 = poly_add(s0, poly_mul(q, s1));
        BinaryPolynomial t2 = poly_add(t0, poly_mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    return {r0, s0, t0};
}

BinaryPolynomial poly_inverse_mod(const BinaryPolynomial& r, std::size_t length) {
    const BinaryPolynomial modulus = BinaryPolynomial::cyclic_modulus(length);
    const BinaryPolynomial reduced = poly_mod_cyclic(r, length);
    if (reduced.is_zero())
        throw NotCoprime("r(x) = " + r.to_algebraic() + " vanishes modulo x^" + std::to_string(length) + "-1");
    const ExtendedGcd e = poly_extended_gcd(reduced, modulus);
    if (e.gcd != BinaryPolynomial{0})
        throw NotCoprime("gcd(" + r.to_algebraic() + ", x^" + std::to_string(length) + "-1) = " + e.gcd.to_algebraic());
    return poly_mod_cyclic(e.s, length);
}

BinaryPolynomial solve_f(const BinaryPolynomial& q, const BinaryPolynomial& r, std::size_t length) {
    if (q.degree() && *q.degree() >= length)
        throw InvalidArgument("deg q must be below the tail-biting length");
    return poly_mul_mod(q, poly_inverse_mod(r, length), length);
}

CirculantMatrix::CirculantMatrix(std::size_t size, BitVector top_row) : size_(size), top_row_(std::move(top_row)) {
    if (size_ == 0) throw InvalidArgument("circulant of size 0");
    if (top_row_.size() != size_) throw InvalidArgument("circulant top row length differs from its size");
}

BinaryPolynomial CirculantMatrix::polynomial() const { return BinaryPolynomial(top_row_.to_bytes()); }

BitMatrix CirculantMatrix::to_matrix() const {
    BitMatrix m(size_, size_);
    for (std::size_t r = 0; r < size_; ++r)
        for (std::size_t c = 0; c < size_; ++c)
            if (get(r, c)) m.set(r, c);
    return m;
}

CirculantMatrix CirculantMatrix::operator*(const CirculantMatrix& rhs) const {
    if (rhs.size_ != size_) throw InvalidArgument("circulant size mismatch");
    return circulant(poly_mul_mod(polynomial(), rhs.polynomial(), size_), size_);
}

CirculantMatrix circulant(const BinaryPolynomial& f, std::size_t length) {
    return CirculantMatrix(length, f.to_bits(length));
}

}  // namespace turbolattice
