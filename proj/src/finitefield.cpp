#include "afllab/finitefield.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace afl {

namespace {

unsigned long addm(unsigned long x, unsigned long y, unsigned long p) {
    return (x + y) % p;
}
unsigned long subm(unsigned long x, unsigned long y, unsigned long p) {
    return (x + p - y % p) % p;
}
unsigned long mulm(unsigned long x, unsigned long y, unsigned long p) {
    return (x * y) % p; // p < 2^16 in practice, no overflow
}

unsigned long inv_mod_p(unsigned long x, unsigned long p) {
    // Fermat: x^(p-2)
    unsigned long r = 1, b = x % p, e = p - 2;
    while (e) {
        if (e & 1) r = mulm(r, b, p);
        b = mulm(b, b, p);
        e >>= 1;
    }
    return r;
}

void check_ctx(const FqElement& x, const FqElement& y) {
    if (x.p != y.p || x.u != y.u)
        raise(ErrorCode::invalid_argument, "mixed residue fields");
}

} // namespace

FqElement fq_make(const ArithContext& ctx, long a, long b) {
    const long p = static_cast<long>(ctx.p());
    const long am = ((a % p) + p) % p;
    const long bm = ((b % p) + p) % p;
    return FqElement{static_cast<unsigned long>(am), static_cast<unsigned long>(bm),
                     ctx.p(), ctx.u()};
}

FqElement fq_add(const FqElement& x, const FqElement& y) {
    check_ctx(x, y);
    return FqElement{addm(x.a, y.a, x.p), addm(x.b, y.b, x.p), x.p, x.u};
}

FqElement fq_sub(const FqElement& x, const FqElement& y) {
    check_ctx(x, y);
    return FqElement{subm(x.a, y.a, x.p), subm(x.b, y.b, x.p), x.p, x.u};
}

FqElement fq_neg(const FqElement& x) {
    return FqElement{(x.p - x.a) % x.p, (x.p - x.b) % x.p, x.p, x.u};
}

FqElement fq_mul(const FqElement& x, const FqElement& y) {
    check_ctx(x, y);
    const unsigned long p = x.p;
    // (a + bw)(c + dw) = ac + u bd + (ad + bc) w
    const unsigned long a = addm(mulm(x.a, y.a, p), mulm(x.u % p, mulm(x.b, y.b, p), p), p);
    const unsigned long b = addm(mulm(x.a, y.b, p), mulm(x.b, y.a, p), p);
    return FqElement{a, b, p, x.u};
}

FqElement fq_inv(const FqElement& x) {
    if (x.is_zero()) raise(ErrorCode::division_by_zero, "inverse of zero in F_q^2");
    const unsigned long p = x.p;
    // 1/(a+bw) = (a-bw)/(a^2 - u b^2)
    const unsigned long n =
        subm(mulm(x.a, x.a, p), mulm(x.u % p, mulm(x.b, x.b, p), p), p);
    const unsigned long ninv = inv_mod_p(n, p);
    return FqElement{mulm(x.a, ninv, p), mulm((p - x.b) % p, ninv, p), p, x.u};
}

FqElement fq_conj(const FqElement& x) {
    return FqElement{x.a, (x.p - x.b) % x.p, x.p, x.u};
}

FqElement fq_pow(FqElement x, unsigned long long e) {
    FqElement r{1, 0, x.p, x.u};
    while (e) {
        if (e & 1) r = fq_mul(r, x);
        x = fq_mul(x, x);
        e >>= 1;
    }
    return r;
}

FqPolynomial::FqPolynomial(std::vector<FqElement> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

void FqPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FqPolynomial FqPolynomial::constant(const FqElement& c) {
    return FqPolynomial({c});
}

FqPolynomial FqPolynomial::monomial(const FqElement& c, std::size_t degree) {
    std::vector<FqElement> v(degree + 1, FqElement{0, 0, c.p, c.u});
    v[degree] = c;
    return FqPolynomial(std::move(v));
}

FqPolynomial FqPolynomial::linear_root(const FqElement& r) {
    return FqPolynomial({fq_neg(r), FqElement{1, 0, r.p, r.u}});
}

FqPolynomial FqPolynomial::operator+(const FqPolynomial& o) const {
    std::vector<FqElement> v(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i < coeffs_.size() && i < o.coeffs_.size())
            v[i] = fq_add(coeffs_[i], o.coeffs_[i]);
        else if (i < coeffs_.size())
            v[i] = coeffs_[i];
        else
            v[i] = o.coeffs_[i];
    }
    return FqPolynomial(std::move(v));
}

FqPolynomial FqPolynomial::operator-(const FqPolynomial& o) const {
    std::vector<FqElement> v(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i < coeffs_.size() && i < o.coeffs_.size())
            v[i] = fq_sub(coeffs_[i], o.coeffs_[i]);
        else if (i < coeffs_.size())
            v[i] = coeffs_[i];
        else
            v[i] = fq_neg(o.coeffs_[i]);
    }
    return FqPolynomial(std::move(v));
}

FqPolynomial FqPolynomial::operator*(const FqPolynomial& o) const {
    if (is_zero() || o.is_zero()) return FqPolynomial();
    const FqElement z{0, 0, coeffs_[0].p, coeffs_[0].u};
    std::vector<FqElement> v(coeffs_.size() + o.coeffs_.size() - 1, z);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            v[i + j] = fq_add(v[i + j], fq_mul(coeffs_[i], o.coeffs_[j]));
    return FqPolynomial(std::move(v));
}

FqPolynomial FqPolynomial::scaled(const FqElement& c) const {
    std::vector<FqElement> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fq_mul(coeffs_[i], c);
    return FqPolynomial(std::move(v));
}

FqPolynomial FqPolynomial::monic() const {
    if (is_zero()) raise(ErrorCode::zero_polynomial, "monic of zero polynomial");
    return scaled(fq_inv(leading()));
}

FqPolynomial FqPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return FqPolynomial();
    std::vector<FqElement> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        const unsigned long k = static_cast<unsigned long>(i % coeffs_[i].p);
        v[i - 1] = fq_mul(coeffs_[i], FqElement{k, 0, coeffs_[i].p, coeffs_[i].u});
    }
    return FqPolynomial(std::move(v));
}

FqElement FqPolynomial::evaluate(const FqElement& x) const {
    FqElement r{0, 0, x.p, x.u};
    for (std::size_t i = coeffs_.size(); i-- > 0;) r = fq_add(fq_mul(r, x), coeffs_[i]);
    return r;
}

FqPolynomial FqPolynomial::conj() const {
    std::vector<FqElement> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fq_conj(coeffs_[i]);
    return FqPolynomial(std::move(v));
}

bool FqPolynomial::operator<(const FqPolynomial& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return coeffs_.size() < o.coeffs_.size();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != o.coeffs_[i]) return coeffs_[i] < o.coeffs_[i];
    }
    return false;
}

std::string FqPolynomial::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (coeffs_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeffs_[i].a << "," << coeffs_[i].b << ")";
        if (i > 0) os << "T^" << i;
    }
    return os.str();
}

std::pair<FqPolynomial, FqPolynomial> fq_divmod(const FqPolynomial& num,
                                                const FqPolynomial& den) {
    if (den.is_zero()) raise(ErrorCode::division_by_zero, "polynomial division by zero");
    if (num.degree() < den.degree()) return {FqPolynomial(), num};
    const FqElement z{0, 0, den.leading().p, den.leading().u};
    std::vector<FqElement> rem = num.coeffs();
    std::vector<FqElement> quo(num.degree() - den.degree() + 1, z);
    const FqElement linv = fq_inv(den.leading());
    for (long long i = num.degree(); i >= den.degree(); --i) {
        const FqElement c = fq_mul(rem[static_cast<std::size_t>(i)], linv);
        if (c.is_zero()) continue;
        quo[static_cast<std::size_t>(i - den.degree())] = c;
        for (long long j = 0; j <= den.degree(); ++j) {
            auto& r = rem[static_cast<std::size_t>(i - den.degree() + j)];
            r = fq_sub(r, fq_mul(c, den.coeff(static_cast<std::size_t>(j))));
        }
    }
    return {FqPolynomial(std::move(quo)), FqPolynomial(std::move(rem))};
}

FqPolynomial fq_gcd(FqPolynomial a, FqPolynomial b) {
    while (!b.is_zero()) {
        auto [q, r] = fq_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

FqPolynomial fq_powmod(const FqPolynomial& base, const Int& exp,
                       const FqPolynomial& mod) {
    const FqElement one{1, 0, mod.leading().p, mod.leading().u};
    FqPolynomial result = FqPolynomial::constant(one);
    FqPolynomial b = fq_divmod(base, mod).second;
    const std::size_t bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
    for (std::size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(exp.get_mpz_t(), i))
            result = fq_divmod(result * b, mod).second;
        b = fq_divmod(b * b, mod).second;
    }
    return result;
}

namespace {

// f monic square-free; split into products of irreducibles of equal degree d.
std::vector<std::pair<FqPolynomial, long long>> distinct_degree(const FqPolynomial& f) {
    const unsigned long p = f.leading().p;
    const Int q2 = Int(p) * Int(p);
    std::vector<std::pair<FqPolynomial, long long>> out;
    FqPolynomial rest = f;
    const FqElement one{1, 0, p, f.leading().u};
    FqPolynomial x = FqPolynomial::monomial(one, 1);
    FqPolynomial xq = x; // T^(q^(2d)) mod rest, updated incrementally
    for (long long d = 1; rest.degree() > 0; ++d) {
        if (2 * d > rest.degree()) {
            out.emplace_back(rest, rest.degree());
            break;
        }
        xq = fq_powmod(xq, q2, rest);
        const FqPolynomial g = fq_gcd(xq - x, rest);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            rest = fq_divmod(rest, g).first.monic();
            xq = fq_divmod(xq, rest).second;
        }
    }
    return out;
}

// f monic square-free, all factors of degree d; Cantor-Zassenhaus split.
void equal_degree(const FqPolynomial& f, long long d, Rng& rng,
                  std::vector<FqPolynomial>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    const unsigned long p = f.leading().p;
    const unsigned long u = f.leading().u;
    const Int q2 = Int(p) * Int(p);
    Int e;
    mpz_pow_ui(e.get_mpz_t(), q2.get_mpz_t(), static_cast<unsigned long>(d));
    e = (e - 1) / 2;
    const FqElement one{1, 0, p, u};
    for (;;) {
        std::vector<FqElement> rc(static_cast<std::size_t>(f.degree()));
        for (auto& c : rc) {
            c = FqElement{static_cast<unsigned long>(rng.next_below(p)),
                          static_cast<unsigned long>(rng.next_below(p)), p, u};
        }
        FqPolynomial r(std::move(rc));
        if (r.degree() < 1) continue;
        FqPolynomial g = fq_gcd(r, f);
        if (g.degree() == 0) {
            const FqPolynomial s = fq_powmod(r, e, f);
            g = fq_gcd(s - FqPolynomial::constant(one), f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(fq_divmod(f, g).first.monic(), d, rng, out);
            return;
        }
    }
}

} // namespace

namespace {

// Coefficient-wise p-th root of g(T^p); valid since Frobenius on F_{q^2}
// squares to the identity, so c^p is the p-th root of c.
FqPolynomial pth_root_decompose(const FqPolynomial& f) {
    const unsigned long p = f.leading().p;
    std::vector<FqElement> root(static_cast<std::size_t>(f.degree()) / p + 1);
    for (std::size_t i = 0; i < root.size(); ++i)
        root[i] = fq_pow(f.coeff(i * p), p);
    return FqPolynomial(std::move(root));
}

// Product of the distinct monic irreducible factors of f.
FqPolynomial radical(const FqPolynomial& f) {
    if (f.degree() <= 0) return f.monic();
    const FqPolynomial der = f.derivative();
    if (der.is_zero()) return radical(pth_root_decompose(f));
    const FqPolynomial g = fq_gcd(f, der);
    const FqPolynomial r1 = fq_divmod(f, g).first.monic();
    if (g.degree() == 0) return r1;
    // Factors whose multiplicity is divisible by p sit entirely inside g.
    const FqPolynomial r2 = radical(g);
    return r1 * fq_divmod(r2, fq_gcd(r1, r2)).first.monic();
}

} // namespace

std::vector<std::pair<FqPolynomial, int>> factor_monic(const FqPolynomial& f,
                                                       Rng& rng) {
    if (f.is_zero()) raise(ErrorCode::zero_polynomial, "factor of zero polynomial");
    const FqPolynomial fm = f.monic();
    std::map<FqPolynomial, int> found;
    if (fm.degree() == 0) return {};

    // Distinct irreducibles from the radical (square-free by construction),
    // multiplicities recovered by trial division; degrees here are small.
    for (const auto& [block, d] : distinct_degree(radical(fm))) {
        std::vector<FqPolynomial> irreducibles;
        equal_degree(block, d, rng, irreducibles);
        for (const auto& irr : irreducibles) {
            FqPolynomial rest = fm;
            int mult = 0;
            for (;;) {
                auto [quo, rem] = fq_divmod(rest, irr);
                if (!rem.is_zero()) break;
                ++mult;
                rest = quo;
            }
            found[irr] = mult;
        }
    }

    return {found.begin(), found.end()};
}

bool is_irreducible(const FqPolynomial& f) {
    if (f.degree() <= 0) return false;
    if (f.degree() == 1) return true;
    const unsigned long p = f.leading().p;
    const Int q2 = Int(p) * Int(p);
    const FqElement one{1, 0, p, f.leading().u};
    const FqPolynomial x = FqPolynomial::monomial(one, 1);
    const FqPolynomial g = f.monic();
    const long long n = g.degree();
    // T^(q^(2n)) == T mod f, with no collapse at any proper divisor of n.
    FqPolynomial xq = x;
    std::vector<FqPolynomial> powers;
    for (long long d = 1; d <= n; ++d) {
        xq = fq_powmod(xq, q2, g);
        powers.push_back(xq);
    }
    if (!(fq_divmod(powers.back() - x, g).second.is_zero())) return false;
    for (long long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        if (fq_gcd(powers[static_cast<std::size_t>(d - 1)] - x, g).degree() > 0)
            return false;
    }
    return true;
}

FqPolynomial reciprocal(const FqPolynomial& r) {
    if (r.is_zero()) raise(ErrorCode::zero_polynomial, "reciprocal of zero polynomial");
    if (r.coeff(0).is_zero())
        raise(ErrorCode::zero_constant_term, "reciprocal requires nonzero constant term");
    // coefficients reversed, conjugated, normalized by (a_0^c)^{-1}
    std::vector<FqElement> v(r.coeffs().rbegin(), r.coeffs().rend());
    for (auto& c : v) c = fq_conj(c);
    FqPolynomial rev(std::move(v));
    return rev.scaled(fq_inv(fq_conj(r.coeff(0))));
}

bool is_self_reciprocal(const FqPolynomial& r) { return r == reciprocal(r); }

FactorClassification classify(const FqPolynomial& f, Rng& rng) {
    if (f.is_zero() || f.coeff(0).is_zero())
        raise(ErrorCode::zero_polynomial, "classify requires nonzero constant term");
    const FqPolynomial fm = f.monic();
    if (!is_self_reciprocal(fm))
        raise(ErrorCode::not_self_reciprocal, "classify requires a self-reciprocal polynomial");
    auto factors = factor_monic(fm, rng);
    std::map<FqPolynomial, int> mult(factors.begin(), factors.end());

    FactorClassification out;
    for (const auto& [poly, m] : factors) {
        const FqPolynomial rec = reciprocal(poly);
        if (rec == poly) {
            out.sr.emplace_back(poly, m);
        } else if (poly < rec) {
            auto it = mult.find(rec);
            if (it == mult.end() || it->second != m)
                raise(ErrorCode::internal,
                      "reciprocal factor multiplicities disagree on self-reciprocal input");
            out.nsr.emplace_back(poly, rec, m);
        }
    }
    return out;
}

long long closed_formula(const FactorClassification& c) {
    const std::pair<FqPolynomial, int>* unique_odd = nullptr;
    for (const auto& qm : c.sr) {
        if (qm.second % 2 == 1) {
            if (unique_odd) return 0; // two odd-multiplicity self-reciprocal factors
            unique_odd = &qm;
        }
    }
    if (!unique_odd) return 0;
    long long value = unique_odd->first.degree() * ((unique_odd->second + 1) / 2);
    for (const auto& [r, rstar, m] : c.nsr) value *= (1 + m);
    return value;
}

} // namespace afl
