#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

#include "afllab/errors.hpp"

namespace afl {

using Rat = mpq_class;
using Int = mpz_class;

// Valuations are integers extended by +infinity (the valuation of 0).
inline constexpr long long kValInf = std::numeric_limits<long long>::max();

// p-adic valuation of a nonzero integer.
long long val_p_int(const Int& n, unsigned long p);

// p-adic valuation of a rational; kValInf for 0.
long long val_p_rat(const Rat& x, unsigned long p);

// Inverse of a mod m (m a prime power, gcd(a, m) = 1).
Int mod_inverse(const Int& a, const Int& m);

// Canonical representative of a rational class x + p^k Z_(p): the unique
// fraction m / p^e with e = max(0, -val_p(x)) and 0 <= m < p^(k+e).
// Requires val_p(x) < k to be meaningful; returns 0 when val_p(x) >= k.
Rat reduce_mod_pk(const Rat& x, unsigned long p, long long k);

// The ambient arithmetic: F = Q with the p-adic valuation and its unramified
// quadratic extension E = Q(sqrt(u)), where u is the smallest positive
// quadratic non-residue mod p. p must be an odd prime, so p stays inert in E
// and the residue field of E is F_{p^2}.
class ArithContext {
public:
    explicit ArithContext(unsigned long p);
    ArithContext(unsigned long p, unsigned long u);

    unsigned long p() const { return p_; }
    unsigned long u() const { return u_; }
    // Residue cardinality of F.
    unsigned long q() const { return p_; }

    bool operator==(const ArithContext& other) const {
        return p_ == other.p_ && u_ == other.u_;
    }

private:
    unsigned long p_;
    unsigned long u_;
};

bool is_prime(unsigned long n);
bool is_quadratic_residue(unsigned long a, unsigned long p);
unsigned long smallest_nonresidue(unsigned long p);

// An element a + b*sqrt(u) of E, held exactly. The nonresidue u rides along
// so that arithmetic needs no context lookups; elements from different
// contexts must not be mixed.
class FieldElement {
public:
    FieldElement() : a_(0), b_(0), u_(0) {}
    FieldElement(Rat a, Rat b, unsigned long u)
        : a_(std::move(a)), b_(std::move(b)), u_(u) {
        a_.canonicalize();
        b_.canonicalize();
    }

    static FieldElement from_rational(Rat a, unsigned long u) {
        return FieldElement(std::move(a), Rat(0), u);
    }
    static FieldElement zero(unsigned long u) { return FieldElement(Rat(0), Rat(0), u); }
    static FieldElement one(unsigned long u) { return FieldElement(Rat(1), Rat(0), u); }

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    unsigned long u() const { return u_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    FieldElement conj() const { return FieldElement(a_, -b_, u_); }
    // norm = a^2 - u b^2, an element of F.
    Rat norm() const { return a_ * a_ - Rat(static_cast<long>(u_)) * b_ * b_; }
    Rat trace() const { return 2 * a_; }

    FieldElement operator-() const { return FieldElement(-a_, -b_, u_); }
    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement inverse() const;

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    bool operator==(const FieldElement& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    Rat a_;
    Rat b_;
    unsigned long u_;

    void check_compatible(const FieldElement& o) const {
        if (u_ != o.u_ && !is_zero() && !o.is_zero())
            raise(ErrorCode::invalid_argument, "mixed field contexts");
    }
};

// Residue-field element of F_{q^2} = F_p[w], w^2 = u. Defined here because
// the residue map lands in it; polynomial arithmetic lives in finitefield.
struct FqElement {
    unsigned long a = 0;
    unsigned long b = 0;
    unsigned long p = 0;
    unsigned long u = 0;

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const FqElement& o) const { return a == o.a && b == o.b; }
    bool operator!=(const FqElement& o) const { return !(*this == o); }
    // Lexicographic order on (a, b); used for canonical factor ordering.
    bool operator<(const FqElement& o) const {
        return a != o.a ? a < o.a : b < o.b;
    }
};

// Operations tied to the context (valuation, sign character, residue map).
long long ee_val(const ArithContext& ctx, const FieldElement& x);
int mu_sign(const ArithContext& ctx, const FieldElement& x);
FqElement residue(const ArithContext& ctx, const FieldElement& x);

FieldElement make_fe(const ArithContext& ctx, long a_num, long a_den = 1,
                     long b_num = 0, long b_den = 1);

} // namespace afl
