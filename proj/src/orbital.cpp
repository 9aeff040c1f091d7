#include "afllab/orbital.hpp"

#include <algorithm>

namespace afl {

namespace {

FieldElement fe_p_pow(const ArithContext& ctx, long long e) {
    Int pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), ctx.p(), static_cast<unsigned long>(e < 0 ? -e : e));
    return FieldElement(e >= 0 ? Rat(pe) : Rat(1, pe), Rat(0), ctx.u());
}

FieldElement moment(const SymmetricPair& pair, long long i) {
    return (pair.y2 * pair.zeta.pow(i) * pair.y1).at(0, 0);
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

EMatrix moment_row_matrix(const SymmetricPair& pair) {
    EMatrix r(pair.n, pair.n, pair.ctx.u());
    EMatrix row = pair.y2;
    for (std::size_t i = 0; i < pair.n; ++i) {
        for (std::size_t j = 0; j < pair.n; ++j) r.at(i, j) = row.at(0, j);
        row = row * pair.zeta;
    }
    return r;
}

EnumLimits limits_of(const Caps& caps) {
    return EnumLimits{caps.max_module_size, caps.max_submodules};
}

} // namespace

void OrbLaurent::add(long long exponent, long long coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = coeffs_.emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) coeffs_.erase(it);
    }
}

long long OrbLaurent::value_at_zero() const {
    long long s = 0;
    for (const auto& [e, c] : coeffs_) s += c;
    return s;
}

long long OrbLaurent::exponent_weighted_sum() const {
    long long s = 0;
    for (const auto& [e, c] : coeffs_) s += e * c;
    return s;
}

std::vector<long long> count_N(const UnitaryModel& model, const Caps& caps) {
    if (!is_regular_semisimple(model))
        raise(ErrorCode::not_regular_semisimple, "model is not regular semisimple");
    const long long delta = model.delta();
    std::vector<long long> counts(static_cast<std::size_t>(delta) + 1, 0);
    const Lattice l = model_lattice(model);
    const Lattice lstar = model_dual_lattice(model);
    const SemilinearMap tau{tau_map(model)};
    const FiniteModule q = quotient_module(l, lstar, &model.op, &tau);
    for (const auto& sub : enumerate_stable_submodules(q, true, true, false, nullptr,
                                                       limits_of(caps)))
        ++counts[static_cast<std::size_t>(sub.length)];
    return counts;
}

std::vector<long long> count_M(const SymmetricPair& pair, const Caps& caps) {
    const InvariantRecord rec = invariants(pair); // raises on non-rs
    std::vector<long long> counts(static_cast<std::size_t>(rec.delta) + 1, 0);

    // The integral support is empty unless the characteristic polynomial and
    // the moments c_m (|m| < n) are integral; then L1 and the dual of L2 are
    // stable endpoints and every admissible lattice sits between them.
    for (const auto& c : rec.char_poly)
        if (ee_val(pair.ctx, c) < 0) return counts;
    for (long long m = 0; m < static_cast<long long>(pair.n); ++m)
        if (ee_val(pair.ctx, moment(pair, m)) < 0) return counts;

    const Lattice l1 = Lattice::from_generators(pair.ctx, krylov(pair));
    const Lattice upper = sesqui_dual_of_rows(pair.ctx, moment_row_matrix(pair));
    if (!upper.contains(l1)) return counts;

    const SemilinearMap conj_map{EMatrix::identity(pair.n, pair.ctx.u())};
    const FiniteModule q = quotient_module(l1, upper, &pair.zeta, &conj_map);
    for (const auto& sub : enumerate_stable_submodules(q, true, true, false, nullptr,
                                                       limits_of(caps)))
        ++counts[static_cast<std::size_t>(sub.length)];
    return counts;
}

OrbLaurent orb_laurent(const std::vector<long long>& counts_m, long long v) {
    OrbLaurent orb;
    for (std::size_t i = 0; i < counts_m.size(); ++i) {
        const long long e = v - static_cast<long long>(i);
        const long long sign = (e % 2 == 0) ? 1 : -1;
        orb.add(e, sign * counts_m[i]);
    }
    return orb;
}

long long unitary_selfdual_count(const UnitaryModel& model, const Caps& caps) {
    if (!is_regular_semisimple(model))
        raise(ErrorCode::not_regular_semisimple, "model is not regular semisimple");
    if (model.delta() % 2 != 0)
        raise(ErrorCode::wrong_side, "self-dual lattices require even delta");
    const Lattice l = model_lattice(model);
    const Lattice lstar = model_dual_lattice(model);
    const FiniteModule q = quotient_module(l, lstar, &model.op, nullptr);
    return static_cast<long long>(
        enumerate_stable_submodules(q, true, false, true, &model.gram, limits_of(caps))
            .size());
}

namespace {

// det over FqPolynomial entries by subset dynamic programming (division-free).
FqPolynomial poly_matrix_det(const std::vector<std::vector<FqPolynomial>>& m,
                             const ArithContext& ctx) {
    const std::size_t n = m.size();
    const FqPolynomial one = FqPolynomial::constant(fq_make(ctx, 1, 0));
    if (n == 0) return one;
    std::vector<FqPolynomial> dp(static_cast<std::size_t>(1) << n, FqPolynomial::zero());
    dp[0] = one;
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
        int parity = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (1ULL << j))) continue;
            const FqPolynomial term = m[row][j] * dp[mask ^ (1ULL << j)];
            dp[mask] = (parity % 2 == 0) ? dp[mask] + term : dp[mask] - term;
            ++parity;
        }
    }
    return dp.back();
}

} // namespace

FqPolynomial residual_char_poly(const UnitaryModel& model, const Caps& caps) {
    if (!is_minuscule(model))
        raise(ErrorCode::not_minuscule, "residual action needs a minuscule model");
    const Lattice l = model_lattice(model);
    const Lattice lstar = model_dual_lattice(model);
    const FiniteModule q = quotient_module(l, lstar, &model.op, nullptr);
    if (q.element_count() > caps.max_module_size)
        raise(ErrorCode::complexity_exceeded, "quotient module exceeds size cap");
    const std::size_t dim = q.divisors().size();
    const ArithContext& ctx = model.ctx;

    // Matrix of the induced operator in the adapted generator basis; every
    // divisor exponent is 1 here, so coefficients live in F_{q^2}.
    std::vector<std::vector<FqPolynomial>> m(dim, std::vector<FqPolynomial>(dim));
    const FqPolynomial t = FqPolynomial::monomial(fq_make(ctx, 1, 0), 1);
    std::uint64_t stride = 1;
    std::vector<std::uint64_t> strides;
    for (std::size_t j = 0; j < dim; ++j) {
        strides.push_back(stride);
        stride *= ctx.p() * ctx.p();
    }
    for (std::size_t j = 0; j < dim; ++j) {
        const std::uint32_t img =
            q.apply_operator(static_cast<std::uint32_t>(strides[j]));
        std::uint64_t rest = img;
        for (std::size_t i = 0; i < dim; ++i) {
            const unsigned long digit = static_cast<unsigned long>(rest % (ctx.p() * ctx.p()));
            rest /= ctx.p() * ctx.p();
            const FqElement a{digit % ctx.p(), digit / ctx.p(), ctx.p(), ctx.u()};
            // entry of T I - A at (i, j)
            m[i][j] = (i == j ? t : FqPolynomial::zero()) -
                      FqPolynomial::constant(a);
        }
    }
    return poly_matrix_det(m, ctx);
}

long long minuscule_closed_value(const UnitaryModel& model, const Caps& caps) {
    const FqPolynomial pbar = residual_char_poly(model, caps);
    if (pbar.degree() == 0) return 0; // delta = 0: empty product, no odd factor
    Rng rng(0x9d2c5680u); // factorization-internal stream; result is canonical
    return closed_formula(classify(pbar, rng));
}

namespace {

struct CosetBounds {
    long long k_lo, k_hi;       // per-diagonal ranges (shared)
};

bool integral(const ArithContext& ctx, const EMatrix& m) {
    return m.all_entries_integral(ctx);
}

} // namespace

OrbLaurent direct_coset_orb(const SymmetricPair& pair, const Caps& caps) {
    if (pair.n > 2) raise(ErrorCode::unsupported_rank, "coset oracle supports n <= 2");
    const InvariantRecord rec = invariants(pair);
    const ArithContext& ctx = pair.ctx;
    OrbLaurent orb;

    // Empty integral support: no coset can satisfy the indicator conditions.
    for (const auto& c : rec.char_poly)
        if (ee_val(ctx, c) < 0) return orb;
    for (long long m = 0; m < static_cast<long long>(pair.n); ++m)
        if (ee_val(ctx, moment(pair, m)) < 0) return orb;
    const Lattice l1 = Lattice::from_generators(ctx, krylov(pair));
    const Lattice upper = sesqui_dual_of_rows(ctx, moment_row_matrix(pair));
    if (!upper.contains(l1)) return orb;

    // Every surviving coset g has L1 inside g O_E^n inside the dual of L2, so
    // the canonical pivot exponents of those two lattices bound the diagonal
    // exponents of g; a slack of one guards the window independently.
    const auto& lo_piv = upper.pivot_vals();
    const auto& hi_piv = l1.pivot_vals();

    if (pair.n == 1) {
        for (long long k = lo_piv[0] - 1; k <= hi_piv[0] + 1; ++k) {
            EMatrix g(1, 1, ctx.u());
            g.at(0, 0) = fe_p_pow(ctx, k);
            const EMatrix ginv = g.inverse();
            if (!integral(ctx, ginv * pair.y1)) continue;
            if (!integral(ctx, pair.y2 * g)) continue;
            if (!integral(ctx, ginv * pair.zeta * g)) continue;
            orb.add(k, (k % 2 == 0) ? 1 : -1);
        }
        return orb;
    }

    const long long k1_lo = lo_piv[0] - 1, k1_hi = hi_piv[0] + 1;
    const long long k2_lo = lo_piv[1] - 1, k2_hi = hi_piv[1] + 1;
    const long long top_entry_val = ee_val(ctx, upper.basis().at(0, 1));
    const long long c_lo =
        std::min(lo_piv[0], top_entry_val == kValInf ? lo_piv[0] : top_entry_val) - 1;

    // cap check before walking
    std::uint64_t total = 0;
    for (long long k1 = k1_lo; k1 <= k1_hi; ++k1) {
        std::uint64_t digits = 1;
        for (long long e = 0; e < k1 - c_lo; ++e) {
            digits *= ctx.p();
            if (digits > caps.max_cosets) raise(ErrorCode::bound_overflow, "coset digit range too large");
        }
        total += digits * static_cast<std::uint64_t>(k2_hi - k2_lo + 1);
        if (total > caps.max_cosets)
            raise(ErrorCode::bound_overflow, "coset enumeration exceeds cap");
    }

    for (long long k1 = k1_lo; k1 <= k1_hi; ++k1) {
        std::uint64_t digits = 1;
        for (long long e = 0; e < k1 - c_lo; ++e) digits *= ctx.p();
        for (long long k2 = k2_lo; k2 <= k2_hi; ++k2) {
            for (std::uint64_t m = 0; m < digits; ++m) {
                EMatrix g(2, 2, ctx.u());
                g.at(0, 0) = fe_p_pow(ctx, k1);
                g.at(1, 1) = fe_p_pow(ctx, k2);
                g.at(0, 1) = fe_p_pow(ctx, c_lo) *
                             FieldElement(Rat(static_cast<unsigned long>(m)), Rat(0), ctx.u());
                const EMatrix ginv = g.inverse();
                if (!integral(ctx, ginv * pair.y1)) continue;
                if (!integral(ctx, pair.y2 * g)) continue;
                if (!integral(ctx, ginv * pair.zeta * g)) continue;
                const long long e = k1 + k2;
                orb.add(e, (e % 2 == 0) ? 1 : -1);
            }
        }
    }
    return orb;
}

OrbitalReport report_for_pair(const SymmetricPair& pair, const Caps& caps,
                              bool with_oracle) {
    OrbitalReport rep;
    rep.from_pair = true;
    const InvariantRecord rec = invariants(pair);
    rep.invariants = rec;
    rep.delta = rec.delta;

    const UnitaryModel model = match_to_unitary(pair);
    rep.counts_N = count_N(model, caps);
    rep.counts_M = count_M(pair, caps);
    rep.orb = orb_laurent(*rep.counts_M, rec.v);
    rep.orb0_signed = rec.omega * rep.orb->value_at_zero();
    rep.afl_lhs = rec.omega * rep.orb->exponent_weighted_sum();

    bool dual_ok = true;
    for (std::size_t i = 0; i < rep.counts_N.size(); ++i)
        if (rep.counts_N[i] != rep.counts_N[rep.counts_N.size() - 1 - i]) dual_ok = false;
    rep.verdicts.duality = dual_ok;
    rep.verdicts.bijection = (*rep.counts_M == rep.counts_N);
    rep.verdicts.rfl1 = (rec.delta % 2 == 0) || (*rep.orb0_signed == 0);

    if (rec.delta % 2 == 0) {
        rep.unitary_selfdual = unitary_selfdual_count(model, caps);
        rep.verdicts.rfl2 = (*rep.orb0_signed == *rep.unitary_selfdual);
    }
    if (is_minuscule(model)) {
        rep.minuscule_closed = minuscule_closed_value(model, caps);
        if (rec.delta % 2 != 0)
            rep.verdicts.afl_minuscule = (rep.afl_lhs == *rep.minuscule_closed);
    }
    if (with_oracle && pair.n <= 2) {
        const OrbLaurent oracle = direct_coset_orb(pair, caps);
        rep.verdicts.oracle = (oracle == *rep.orb);
    }
    return rep;
}

OrbitalReport report_for_model(const UnitaryModel& model, const Caps& caps) {
    OrbitalReport rep;
    rep.from_pair = false;
    rep.delta = model.delta();
    rep.counts_N = count_N(model, caps);

    // N-form of the derivative: sum (-1)^{i+1} i #N_i (equals the M-form on
    // the odd side, where the value is orbit-intrinsic).
    long long d = 0;
    for (std::size_t i = 0; i < rep.counts_N.size(); ++i) {
        const long long sign = (i % 2 == 0) ? -1 : 1;
        d += sign * static_cast<long long>(i) * rep.counts_N[i];
    }
    rep.afl_lhs = d;

    bool dual_ok = true;
    for (std::size_t i = 0; i < rep.counts_N.size(); ++i)
        if (rep.counts_N[i] != rep.counts_N[rep.counts_N.size() - 1 - i]) dual_ok = false;
    rep.verdicts.duality = dual_ok;

    if (is_minuscule(model)) {
        rep.minuscule_closed = minuscule_closed_value(model, caps);
        if (rep.delta % 2 != 0)
            rep.verdicts.afl_minuscule = (rep.afl_lhs == *rep.minuscule_closed);
    }
    return rep;
}

} // namespace afl
