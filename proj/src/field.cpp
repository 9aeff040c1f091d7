#include "afllab/field.hpp"

#include <sstream>

namespace afl {

long long val_p_int(const Int& n, unsigned long p) {
    if (n == 0) return kValInf;
    mpz_class tmp;
    mpz_class pz(static_cast<unsigned long>(p));
    return static_cast<long long>(
        mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

long long val_p_rat(const Rat& x, unsigned long p) {
    if (x == 0) return kValInf;
    return val_p_int(x.get_num(), p) - val_p_int(x.get_den(), p);
}

Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        raise(ErrorCode::internal, "element not invertible modulo " + m.get_str());
    return r;
}

Rat reduce_mod_pk(const Rat& x, unsigned long p, long long k) {
    const long long v = val_p_rat(x, p);
    if (v >= k) return Rat(0);
    Rat xc = x;
    xc.canonicalize();
    const long long e = v < 0 ? -v : 0;
    // x = n / (p^e * d') with p not dividing d'; reduce n * d'^{-1} mod p^{k+e}.
    Int pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e));
    Int modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), p, static_cast<unsigned long>(k + e));
    Int num = xc.get_num();
    Int den = xc.get_den();
    Int dprime = den / pe; // exact: e accounts for all p's in the denominator
    Int m = (num % modulus) * mod_inverse(dprime % modulus, modulus) % modulus;
    if (m < 0) m += modulus;
    Rat out(m, pe);
    out.canonicalize();
    return out;
}

bool is_prime(unsigned long n) {
    mpz_class z(n);
    return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

bool is_quadratic_residue(unsigned long a, unsigned long p) {
    mpz_class az(a), pz(p);
    return mpz_legendre(az.get_mpz_t(), pz.get_mpz_t()) == 1;
}

unsigned long smallest_nonresidue(unsigned long p) {
    for (unsigned long u = 2; u < p; ++u) {
        if (!is_quadratic_residue(u % p, p)) return u;
    }
    raise(ErrorCode::invalid_argument, "no quadratic non-residue found (p must be an odd prime)");
}

ArithContext::ArithContext(unsigned long p) : p_(p), u_(0) {
    if (p < 3 || !is_prime(p))
        raise(ErrorCode::invalid_argument, "p must be an odd prime");
    u_ = smallest_nonresidue(p);
}

ArithContext::ArithContext(unsigned long p, unsigned long u) : p_(p), u_(u) {
    if (p < 3 || !is_prime(p))
        raise(ErrorCode::invalid_argument, "p must be an odd prime");
    if (u == 0 || is_quadratic_residue(u % p, p))
        raise(ErrorCode::invalid_argument, "u must be a quadratic non-residue mod p");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_compatible(o);
    return FieldElement(a_ + o.a_, b_ + o.b_, u_ ? u_ : o.u_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_compatible(o);
    return FieldElement(a_ - o.a_, b_ - o.b_, u_ ? u_ : o.u_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_compatible(o);
    const unsigned long u = u_ ? u_ : o.u_;
    const Rat uu(static_cast<long>(u));
    return FieldElement(a_ * o.a_ + uu * b_ * o.b_, a_ * o.b_ + b_ * o.a_, u);
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) raise(ErrorCode::division_by_zero, "inverse of zero");
    const Rat n = norm();
    return FieldElement(a_ / n, -b_ / n, u_);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    if (o.is_zero()) raise(ErrorCode::division_by_zero, "division by zero");
    return *this * o.inverse();
}

std::string FieldElement::str() const {
    std::ostringstream os;
    os << a_.get_str();
    if (b_ != 0) os << (b_ > 0 ? "+" : "") << b_.get_str() << "*w";
    return os.str();
}

long long ee_val(const ArithContext& ctx, const FieldElement& x) {
    const long long va = val_p_rat(x.a(), ctx.p());
    const long long vb = val_p_rat(x.b(), ctx.p());
    return va < vb ? va : vb;
}

int mu_sign(const ArithContext& ctx, const FieldElement& x) {
    if (x.is_zero()) raise(ErrorCode::zero_argument, "mu_sign of zero");
    return (ee_val(ctx, x) % 2 == 0) ? 1 : -1;
}

FqElement residue(const ArithContext& ctx, const FieldElement& x) {
    if (ee_val(ctx, x) < 0)
        raise(ErrorCode::not_integral, "residue of a non-integral element");
    const Int pz(ctx.p());
    auto red = [&](const Rat& r) -> unsigned long {
        Int num = r.get_num() % pz;
        Int den = r.get_den() % pz;
        Int m = num * mod_inverse(den, pz) % pz;
        if (m < 0) m += pz;
        return m.get_ui();
    };
    return FqElement{red(x.a()), red(x.b()), ctx.p(), ctx.u()};
}

FieldElement make_fe(const ArithContext& ctx, long a_num, long a_den,
                     long b_num, long b_den) {
    return FieldElement(Rat(a_num, a_den), Rat(b_num, b_den), ctx.u());
}

} // namespace afl
