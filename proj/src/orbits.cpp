#include "afllab/orbits.hpp"

#include <algorithm>

namespace afl {

namespace {

void require(bool cond, ErrorCode code, const char* msg) {
    if (!cond) raise(code, msg);
}

std::vector<FieldElement> poly_mul(const std::vector<FieldElement>& a,
                                   const std::vector<FieldElement>& b,
                                   unsigned long u) {
    std::vector<FieldElement> out(a.size() + b.size() - 1, FieldElement::zero(u));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// T^n P^c(1/T) == P(0)^c P(T), and Nm(P(0)) = 1.
bool conj_self_reciprocal(const std::vector<FieldElement>& p) {
    const std::size_t n = p.size() - 1;
    const FieldElement p0c = p[0].conj();
    if (p[0].norm() != Rat(1)) return false;
    for (std::size_t k = 0; k <= n; ++k) {
        if (p[n - k].conj() != p0c * p[k]) return false;
    }
    return true;
}

FieldElement moment(const SymmetricPair& pair, long long i) {
    const EMatrix m = pair.y2 * pair.zeta.pow(i) * pair.y1;
    return m.at(0, 0);
}

EMatrix krylov(const SymmetricPair& pair) {
    EMatrix k(pair.n, pair.n, pair.ctx.u());
    EMatrix v = pair.y1;
    for (std::size_t j = 0; j < pair.n; ++j) {
        for (std::size_t i = 0; i < pair.n; ++i) k.at(i, j) = v.at(i, 0);
        v = pair.zeta * v;
    }
    return k;
}

EMatrix hankel(const SymmetricPair& pair) {
    std::vector<FieldElement> c(2 * pair.n - 1, FieldElement::zero(pair.ctx.u()));
    for (std::size_t m = 0; m < c.size(); ++m) c[m] = moment(pair, static_cast<long long>(m));
    EMatrix h(pair.n, pair.n, pair.ctx.u());
    for (std::size_t i = 0; i < pair.n; ++i)
        for (std::size_t j = 0; j < pair.n; ++j) h.at(i, j) = c[i + j];
    return h;
}

} // namespace

void SymmetricPair::validate() const {
    require(n >= 1 && zeta.rows() == n && zeta.cols() == n && y1.rows() == n &&
                y1.cols() == 1 && y2.rows() == 1 && y2.cols() == n,
            ErrorCode::invalid_argument, "pair shape mismatch");
    require(zeta * zeta.conj() == EMatrix::identity(n, ctx.u()),
            ErrorCode::invalid_argument, "zeta . conj(zeta) != I");
    for (std::size_t i = 0; i < n; ++i) {
        require(y1.at(i, 0).is_rational() && y2.at(0, i).is_rational(),
                ErrorCode::invalid_argument, "y must have entries in F");
    }
}

EMatrix UnitaryModel::x() const {
    EMatrix v(n, 1, ctx.u());
    v.at(0, 0) = FieldElement::one(ctx.u());
    return v;
}

long long UnitaryModel::delta() const { return ee_val(ctx, gram.det()); }

void UnitaryModel::validate() const {
    require(n >= 1 && gram.rows() == n && gram.cols() == n && op.rows() == n &&
                op.cols() == n,
            ErrorCode::invalid_argument, "model shape mismatch");
    require(!gram.det().is_zero(), ErrorCode::not_regular_semisimple,
            "Gram matrix is singular");
    require(gram.conj_transpose() == gram, ErrorCode::invalid_argument,
            "Gram matrix is not hermitian");
    require(op.conj_transpose() * gram * op == gram, ErrorCode::invalid_argument,
            "operator is not unitary for the form");
    const auto p = char_poly(op);
    require(conj_self_reciprocal(p), ErrorCode::invalid_argument,
            "characteristic polynomial is not conjugate-self-reciprocal");
}

bool is_regular_semisimple(const SymmetricPair& pair) {
    pair.validate();
    return !hankel(pair).det().is_zero();
}

bool is_regular_semisimple(const UnitaryModel& model) {
    return !model.gram.det().is_zero();
}

InvariantRecord invariants(const SymmetricPair& pair) {
    if (!is_regular_semisimple(pair))
        raise(ErrorCode::not_regular_semisimple, "pair is not regular semisimple");
    InvariantRecord rec;
    for (std::size_t i = 0; i < pair.n; ++i)
        rec.moments.push_back(moment(pair, static_cast<long long>(i)));
    rec.char_poly = char_poly(pair.zeta);
    rec.v = ee_val(pair.ctx, krylov(pair).det());
    rec.delta_value = hankel(pair).det();
    rec.delta = ee_val(pair.ctx, rec.delta_value);
    rec.omega = rec.v % 2 == 0 ? 1 : -1;
    rec.side = rec.delta % 2 == 0 ? Side::plus : Side::minus;
    return rec;
}

std::map<long long, FieldElement> extend_moments(
    const ArithContext& ctx, const std::vector<FieldElement>& p,
    const std::vector<FieldElement>& moments, long long lo, long long hi) {
    const long long n = static_cast<long long>(p.size()) - 1;
    require(n >= 1 && static_cast<long long>(moments.size()) == n,
            ErrorCode::invalid_argument, "window must hold n moments");
    require(p[static_cast<std::size_t>(n)] == FieldElement::one(ctx.u()),
            ErrorCode::invalid_argument, "characteristic polynomial must be monic");
    require(conj_self_reciprocal(p), ErrorCode::invalid_argument,
            "characteristic polynomial must be conjugate-self-reciprocal");
    require(moments[0].is_rational(), ErrorCode::inconsistent_moments,
            "c_0 = (x, x) must lie in F");

    // Forward values on [0, max(hi, -lo)] by the recursion, negatives by
    // conjugation.
    const long long top = std::max(hi, -lo);
    std::vector<FieldElement> fwd(moments.begin(), moments.end());
    for (long long m = n; m <= top; ++m) {
        FieldElement s = FieldElement::zero(ctx.u());
        for (long long k = 0; k < n; ++k)
            s += p[static_cast<std::size_t>(k)] * fwd[static_cast<std::size_t>(m - n + k)];
        fwd.push_back(-s);
    }
    auto value = [&](long long m) {
        return m >= 0 ? fwd[static_cast<std::size_t>(m)]
                      : fwd[static_cast<std::size_t>(-m)].conj();
    };

    // The recursion must also hold across every window touching negative
    // indices; this is exactly the conjugate-symmetry constraint.
    for (long long m = lo + n; m <= hi; ++m) {
        FieldElement s = FieldElement::zero(ctx.u());
        for (long long k = 0; k <= n; ++k)
            s += p[static_cast<std::size_t>(k)] * value(m - n + k);
        if (!s.is_zero())
            raise(ErrorCode::inconsistent_moments,
                  "moment recursion and conjugate symmetry disagree");
    }

    std::map<long long, FieldElement> out;
    for (long long m = lo; m <= hi; ++m) out.emplace(m, value(m));
    return out;
}

UnitaryModel match_to_unitary(const SymmetricPair& pair) {
    const InvariantRecord rec = invariants(pair);
    const long long n = static_cast<long long>(pair.n);
    const auto ext = extend_moments(pair.ctx, rec.char_poly, rec.moments, -(n - 1), n - 1);
    UnitaryModel model{pair.ctx, pair.n, EMatrix(pair.n, pair.n, pair.ctx.u()),
                       companion(rec.char_poly)};
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j)
            model.gram.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                ext.at(j - i);
    model.validate();
    require(model.delta() == rec.delta, ErrorCode::internal,
            "val det G disagrees with the Hankel valuation");
    // (C^i x, x) = c_i for the matched moments
    for (long long i = 0; i < n; ++i) {
        const EMatrix ci = model.x().conj_transpose() * model.gram *
                           (model.op.pow(i) * model.x());
        require(ci.at(0, 0) == rec.moments[static_cast<std::size_t>(i)],
                ErrorCode::internal, "matched model moment mismatch");
    }
    return model;
}

EMatrix tau_map(const UnitaryModel& model) {
    EMatrix t(model.n, model.n, model.ctx.u());
    const EMatrix cinv = model.op.inverse();
    EMatrix col = model.x();
    for (std::size_t j = 0; j < model.n; ++j) {
        for (std::size_t i = 0; i < model.n; ++i) t.at(i, j) = col.at(i, 0);
        col = cinv * col;
    }
    return t;
}

bool is_minuscule(const UnitaryModel& model) {
    if (!is_regular_semisimple(model))
        raise(ErrorCode::not_regular_semisimple, "model is not regular semisimple");
    if (!model.gram.all_entries_integral(model.ctx)) return false;
    for (long long a : elementary_divisors(model.ctx, model.gram))
        if (a != 0 && a != 1) return false;
    return true;
}

SymmetricPair orbit_act(const SymmetricPair& pair, const EMatrix& g) {
    require(g.is_square() && g.rows() == pair.n, ErrorCode::invalid_argument,
            "acting matrix shape mismatch");
    for (std::size_t i = 0; i < pair.n; ++i)
        for (std::size_t j = 0; j < pair.n; ++j)
            require(g.at(i, j).is_rational(), ErrorCode::invalid_argument,
                    "acting matrix must have entries in F");
    if (g.det().is_zero()) raise(ErrorCode::singular_matrix, "acting matrix is singular");
    const EMatrix ginv = g.inverse();
    return SymmetricPair{pair.ctx, pair.n, ginv * pair.zeta * g, ginv * pair.y1,
                         pair.y2 * g};
}

namespace {

FieldElement random_integral(const ArithContext& ctx, Rng& rng, long max_digit,
                             bool with_sqrt) {
    const long a = rng.next_signed(static_cast<std::uint64_t>(max_digit));
    const long b = with_sqrt ? rng.next_signed(1) : 0;
    return make_fe(ctx, a, 1, b, 1);
}

// Nonzero rational integer with p-valuation <= budget, digit part of
// magnitude up to p^2.
FieldElement random_f_entry(const ArithContext& ctx, Rng& rng, long long budget) {
    const long long e = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(budget) + 1));
    long digit = 0;
    while (digit == 0) digit = rng.next_signed(static_cast<std::uint64_t>(ctx.p() * ctx.p()));
    Int pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), ctx.p(), static_cast<unsigned long>(e));
    return FieldElement(Rat(Int(digit) * pe), Rat(0), ctx.u());
}

EMatrix random_gl_oe(const ArithContext& ctx, Rng& rng, std::size_t n, int retry_cap) {
    for (int t = 0; t < retry_cap; ++t) {
        EMatrix g(n, n, ctx.u());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g.at(i, j) = random_integral(ctx, rng, static_cast<long>(ctx.p()), true);
        const FieldElement d = g.det();
        if (!d.is_zero() && ee_val(ctx, d) == 0) return g;
    }
    raise(ErrorCode::sampling_exhausted, "no unimodular matrix found");
}

FieldElement random_unit(const ArithContext& ctx, Rng& rng, int retry_cap) {
    for (int t = 0; t < retry_cap; ++t) {
        const FieldElement x = random_integral(ctx, rng, static_cast<long>(ctx.p()), true);
        if (!x.is_zero() && ee_val(ctx, x) == 0) return x;
    }
    raise(ErrorCode::sampling_exhausted, "no unit found");
}

} // namespace

SymmetricPair sample_symmetric(const ArithContext& ctx, std::size_t n,
                               std::uint64_t seed, long long val_budget,
                               const SamplerLimits& limits) {
    require(n >= 1, ErrorCode::invalid_argument, "n must be positive");
    require(val_budget >= 0, ErrorCode::invalid_argument, "val_budget must be >= 0");
    Rng rng(seed);
    for (int attempt = 0; attempt < limits.retry_cap; ++attempt) {
        const EMatrix g = random_gl_oe(ctx, rng, n, limits.retry_cap);
        SymmetricPair pair{ctx, n, g * g.conj().inverse(), EMatrix(n, 1, ctx.u()),
                           EMatrix(1, n, ctx.u())};
        for (std::size_t i = 0; i < n; ++i) {
            pair.y1.at(i, 0) = random_f_entry(ctx, rng, val_budget);
            pair.y2.at(0, i) = random_f_entry(ctx, rng, val_budget);
        }
        if (is_regular_semisimple(pair)) return pair;
    }
    raise(ErrorCode::sampling_exhausted, "no regular semisimple pair found");
}

UnitaryModel sample_minuscule(const ArithContext& ctx, std::size_t n,
                              std::uint64_t seed, const SamplerLimits& limits) {
    require(n >= 1, ErrorCode::invalid_argument, "n must be positive");
    Rng rng(seed);
    const unsigned long u = ctx.u();
    for (int attempt = 0; attempt < limits.retry_cap; ++attempt) {
        // P as a product of conjugate-self-reciprocal blocks with unit roots.
        std::vector<FieldElement> p{FieldElement::one(u)};
        std::size_t rem = n;
        while (rem > 0) {
            const FieldElement lam = random_unit(ctx, rng, limits.retry_cap);
            if (rem >= 2 && rng.next_bool()) {
                // (T - lam)(T - (lam^c)^{-1})
                const FieldElement mu = lam.conj().inverse();
                const std::vector<FieldElement> block{lam * mu, -(lam + mu),
                                                      FieldElement::one(u)};
                p = poly_mul(p, block, u);
                rem -= 2;
            } else {
                // T - lam/lam^c
                const std::vector<FieldElement> block{-(lam / lam.conj()),
                                                      FieldElement::one(u)};
                p = poly_mul(p, block, u);
                rem -= 1;
            }
        }
        require(conj_self_reciprocal(p), ErrorCode::internal,
                "sampled blocks are not conjugate-self-reciprocal");

        // Random integral moment window, projected onto the conjugate-symmetric
        // subspace of P-recursive sequences: c -> (c + sigma c)/2 where
        // (sigma c)_m = conj(c_{-m}) and negatives come from the backward
        // recursion (P(0) is a unit, so it is exact and integral).
        std::vector<FieldElement> window(n, FieldElement::zero(u));
        window[0] = FieldElement(
            Rat(static_cast<long>(rng.next_signed(ctx.p() * ctx.p()))), Rat(0), u);
        for (std::size_t i = 1; i < n; ++i)
            window[i] = random_integral(ctx, rng, static_cast<long>(ctx.p()), true);
        if (rng.next_below(3) == 0) window[0] = make_fe(ctx, static_cast<long>(ctx.p()));

        // backward recursion: c_{m} = -(c_{m+n} + sum_{k=1}^{n-1} a_k c_{m+k})/a_0
        std::map<long long, FieldElement> vals;
        for (std::size_t i = 0; i < n; ++i) vals[static_cast<long long>(i)] = window[i];
        for (long long m = -1; m >= -(static_cast<long long>(n) - 1); --m) {
            FieldElement s = vals[m + static_cast<long long>(n)];
            for (long long k = 1; k < static_cast<long long>(n); ++k)
                s += p[static_cast<std::size_t>(k)] * vals[m + k];
            vals[m] = -(s / p[0]);
        }
        const FieldElement half(Rat(1, 2), Rat(0), u);
        std::vector<FieldElement> sym(n);
        for (std::size_t i = 0; i < n; ++i)
            sym[i] = (window[i] + vals[-static_cast<long long>(i)].conj()) * half;

        std::map<long long, FieldElement> ext;
        try {
            ext = extend_moments(ctx, p, sym, -(static_cast<long long>(n) - 1),
                                 static_cast<long long>(n) - 1);
        } catch (const Error&) {
            continue;
        }
        UnitaryModel model{ctx, n, EMatrix(n, n, u), companion(p)};
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            for (long long j = 0; j < static_cast<long long>(n); ++j)
                model.gram.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                    ext.at(j - i);
        if (model.gram.det().is_zero()) continue;
        if (!is_minuscule(model)) continue;
        model.validate();
        return model;
    }
    raise(ErrorCode::sampling_exhausted, "no minuscule model found");
}

EMatrix sample_gl_f(const ArithContext& ctx, std::size_t n, std::uint64_t seed,
                    long long val_budget, const SamplerLimits& limits) {
    Rng rng(seed);
    for (int t = 0; t < limits.retry_cap; ++t) {
        EMatrix g(n, n, ctx.u());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (rng.next_below(4) == 0) {
                    g.at(i, j) = FieldElement::zero(ctx.u());
                } else {
                    g.at(i, j) = random_f_entry(ctx, rng, val_budget);
                }
            }
        const FieldElement d = g.det();
        if (!d.is_zero() && ee_val(ctx, d) <= val_budget * static_cast<long long>(n))
            return g;
    }
    raise(ErrorCode::sampling_exhausted, "no invertible F-matrix found");
}

Lattice model_lattice(const UnitaryModel& model) {
    return Lattice::standard(model.ctx, model.n);
}

Lattice model_dual_lattice(const UnitaryModel& model) {
    return hermitian_dual(model_lattice(model), model.gram);
}

} // namespace afl
