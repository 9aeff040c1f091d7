#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "afllab/field.hpp"
#include "afllab/rng.hpp"

namespace afl {

// F_{q^2} arithmetic on (a, b) pairs representing a + b*w, w^2 = u mod p.
FqElement fq_make(const ArithContext& ctx, long a, long b = 0);
FqElement fq_add(const FqElement& x, const FqElement& y);
FqElement fq_sub(const FqElement& x, const FqElement& y);
FqElement fq_neg(const FqElement& x);
FqElement fq_mul(const FqElement& x, const FqElement& y);
FqElement fq_inv(const FqElement& x);
// The q-power Frobenius, which on F_{q^2} is (a, b) -> (a, -b).
FqElement fq_conj(const FqElement& x);
FqElement fq_pow(FqElement x, unsigned long long e);

// Polynomial over F_{q^2}, coefficients lowest degree first, no trailing
// zeros (the zero polynomial has an empty coefficient vector).
class FqPolynomial {
public:
    FqPolynomial() = default;
    FqPolynomial(std::vector<FqElement> coeffs);

    static FqPolynomial zero() { return FqPolynomial(); }
    static FqPolynomial constant(const FqElement& c);
    static FqPolynomial monomial(const FqElement& c, std::size_t degree);
    // T - r
    static FqPolynomial linear_root(const FqElement& r);

    bool is_zero() const { return coeffs_.empty(); }
    long long degree() const { return static_cast<long long>(coeffs_.size()) - 1; }
    const std::vector<FqElement>& coeffs() const { return coeffs_; }
    const FqElement& coeff(std::size_t i) const { return coeffs_[i]; }
    const FqElement& leading() const { return coeffs_.back(); }
    bool is_monic() const { return !is_zero() && leading().a == 1 && leading().b == 0; }

    FqPolynomial operator+(const FqPolynomial& o) const;
    FqPolynomial operator-(const FqPolynomial& o) const;
    FqPolynomial operator*(const FqPolynomial& o) const;
    FqPolynomial scaled(const FqElement& c) const;
    FqPolynomial monic() const;
    FqPolynomial derivative() const;
    FqElement evaluate(const FqElement& x) const;

    // Coefficient-wise Frobenius conjugation.
    FqPolynomial conj() const;

    bool operator==(const FqPolynomial& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const FqPolynomial& o) const { return !(*this == o); }
    // Canonical order: by degree, then lexicographic on coefficient pairs.
    bool operator<(const FqPolynomial& o) const;

    std::string str() const;

private:
    std::vector<FqElement> coeffs_;
    void trim();
};

std::pair<FqPolynomial, FqPolynomial> fq_divmod(const FqPolynomial& num,
                                                const FqPolynomial& den);
FqPolynomial fq_gcd(FqPolynomial a, FqPolynomial b);
FqPolynomial fq_powmod(const FqPolynomial& base, const Int& exp,
                       const FqPolynomial& mod);

// Complete monic factorization: square-free split, distinct-degree split,
// then Cantor-Zassenhaus equal-degree splitting driven by the caller's rng.
// Output is canonically ordered (degree, then coefficient order).
std::vector<std::pair<FqPolynomial, int>> factor_monic(const FqPolynomial& f,
                                                       Rng& rng);

bool is_irreducible(const FqPolynomial& f);

// R*(T) = (a_0^c)^{-1} T^k R(1/T)^c; requires R(0) != 0.
FqPolynomial reciprocal(const FqPolynomial& r);
bool is_self_reciprocal(const FqPolynomial& r);

// Irreducible factors of a self-reciprocal polynomial, split into
// self-reciprocal factors and orbits {R, R*} of non-self-reciprocal ones.
struct FactorClassification {
    std::vector<std::pair<FqPolynomial, int>> sr;
    // (R, R*, common multiplicity), R < R* canonically.
    std::vector<std::tuple<FqPolynomial, FqPolynomial, int>> nsr;
};

FactorClassification classify(const FqPolynomial& f, Rng& rng);

// deg Q * (m(Q)+1)/2 * prod(1 + m(R)) when exactly one self-reciprocal factor
// Q has odd multiplicity; 0 otherwise.
long long closed_formula(const FactorClassification& c);

} // namespace afl
