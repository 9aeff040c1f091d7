#include "doctest.h"

#include "afllab/orbital.hpp"

using namespace afl;

namespace {

SymmetricPair golden_n1(const ArithContext& ctx) {
    SymmetricPair pair{ctx, 1, EMatrix::identity(1, ctx.u()), EMatrix(1, 1, ctx.u()),
                       EMatrix(1, 1, ctx.u())};
    pair.y1.at(0, 0) = make_fe(ctx, 3);
    pair.y2.at(0, 0) = make_fe(ctx, 1);
    return pair;
}

SymmetricPair golden_n2(const ArithContext& ctx) {
    SymmetricPair pair{ctx, 2, EMatrix(2, 2, ctx.u()), EMatrix(2, 1, ctx.u()),
                       EMatrix(1, 2, ctx.u())};
    pair.zeta.at(0, 1) = FieldElement::one(ctx.u());
    pair.zeta.at(1, 0) = FieldElement::one(ctx.u());
    pair.y1.at(0, 0) = make_fe(ctx, 1);
    pair.y2.at(0, 1) = make_fe(ctx, 1);
    return pair;
}

OrbLaurent laurent(std::initializer_list<std::pair<long long, long long>> terms) {
    OrbLaurent o;
    for (const auto& [e, c] : terms) o.add(e, c);
    return o;
}

} // namespace

TEST_CASE("golden n=1 counting") {
    ArithContext ctx(3, 2);
    const SymmetricPair pair = golden_n1(ctx);
    const UnitaryModel model = match_to_unitary(pair);

    CHECK(count_M(pair) == std::vector<long long>{1, 1});
    CHECK(count_N(model) == std::vector<long long>{1, 1});

    const OrbLaurent orb = orb_laurent(count_M(pair), 1);
    CHECK(orb == laurent({{0, 1}, {1, -1}})); // 1 - Q
    CHECK(orb.value_at_zero() == 0);

    const OrbitalReport rep = report_for_pair(pair);
    CHECK(rep.afl_lhs == 1);
    CHECK(*rep.orb0_signed == 0);
    CHECK(*rep.minuscule_closed == 1);
    CHECK(*rep.verdicts.duality);
    CHECK(*rep.verdicts.bijection);
    CHECK(*rep.verdicts.rfl1);
    CHECK(*rep.verdicts.afl_minuscule);
    CHECK(*rep.verdicts.oracle);

    CHECK(direct_coset_orb(pair) == laurent({{0, 1}, {1, -1}}));
}

TEST_CASE("golden n=2 counting") {
    ArithContext ctx(3, 2);
    const SymmetricPair pair = golden_n2(ctx);
    const UnitaryModel model = match_to_unitary(pair);

    CHECK(count_M(pair) == std::vector<long long>{1});
    CHECK(count_N(model) == std::vector<long long>{1});
    CHECK(unitary_selfdual_count(model) == 1);

    const OrbitalReport rep = report_for_pair(pair);
    CHECK(*rep.orb0_signed == 1);
    CHECK(*rep.unitary_selfdual == 1);
    CHECK(*rep.verdicts.rfl2);
    CHECK(*rep.verdicts.oracle);
    CHECK(direct_coset_orb(pair) == laurent({{0, 1}}));
}

TEST_CASE("n=1 coset oracle by hand") {
    ArithContext ctx(3, 2);
    // y = (1, 1): only k = 0 survives
    SymmetricPair pair = golden_n1(ctx);
    pair.y1.at(0, 0) = make_fe(ctx, 1);
    CHECK(direct_coset_orb(pair) == laurent({{0, 1}}));

    // y = (9, 3): k in [-1, 2], Orb = Q^{-1} - 1 + Q - Q^2
    pair.y1.at(0, 0) = make_fe(ctx, 9);
    pair.y2.at(0, 0) = make_fe(ctx, 3);
    CHECK(direct_coset_orb(pair) ==
          laurent({{-1, -1}, {0, 1}, {1, -1}, {2, 1}}));
    // and the lattice path agrees
    const InvariantRecord rec = invariants(pair);
    CHECK(orb_laurent(count_M(pair), rec.v) == direct_coset_orb(pair));
}

TEST_CASE("selfdual count on explicit models") {
    ArithContext ctx(3, 2);
    // G = [9], C = [1]: one self-dual lattice strictly between L and L*
    UnitaryModel m{ctx, 1, EMatrix(1, 1, ctx.u()), EMatrix::identity(1, ctx.u())};
    m.gram.at(0, 0) = make_fe(ctx, 9);
    CHECK(unitary_selfdual_count(m) == 1);

    // delta odd is the wrong side
    m.gram.at(0, 0) = make_fe(ctx, 3);
    CHECK_THROWS_AS(unitary_selfdual_count(m), Error);

    // delta = 0 forces exactly the standard lattice
    m.gram.at(0, 0) = make_fe(ctx, 1);
    CHECK(unitary_selfdual_count(m) == 1);
}

TEST_CASE("oracle equals lattice counting on random small pairs") {
    for (unsigned long p : {3ul, 5ul}) {
        ArithContext ctx(p);
        for (std::size_t n = 1; n <= 2; ++n) {
            int done = 0;
            std::uint64_t seed = 0;
            while (done < 15) {
                const SymmetricPair pair =
                    sample_symmetric(ctx, n, Rng::derive(1234 + p, ++seed), 1);
                try {
                    const InvariantRecord rec = invariants(pair);
                    const OrbLaurent lattice_orb = orb_laurent(count_M(pair), rec.v);
                    const OrbLaurent oracle = direct_coset_orb(pair);
                    CHECK(lattice_orb == oracle);
                    ++done;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::complexity_exceeded &&
                        e.code() != ErrorCode::bound_overflow)
                        throw;
                }
            }
        }
    }
}

TEST_CASE("bijection and duality on random pairs") {
    for (unsigned long p : {3ul, 5ul}) {
        ArithContext ctx(p);
        for (std::size_t n = 1; n <= 3; ++n) {
            int done = 0;
            std::uint64_t seed = 100;
            while (done < 10) {
                const SymmetricPair pair =
                    sample_symmetric(ctx, n, Rng::derive(4321 + p, ++seed), 1);
                try {
                    const UnitaryModel model = match_to_unitary(pair);
                    const auto cm = count_M(pair);
                    const auto cn = count_N(model);
                    CHECK(cm == cn);
                    for (std::size_t i = 0; i < cn.size(); ++i)
                        CHECK(cn[i] == cn[cn.size() - 1 - i]);
                    const InvariantRecord rec = invariants(pair);
                    if (rec.delta % 2 == 1) {
                        const OrbLaurent orb = orb_laurent(cm, rec.v);
                        CHECK(rec.omega * orb.value_at_zero() == 0);
                    }
                    ++done;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::complexity_exceeded) throw;
                }
            }
        }
    }
}

TEST_CASE("minuscule value identity on sampled models") {
    for (unsigned long p : {3ul, 5ul}) {
        ArithContext ctx(p);
        for (std::size_t n = 1; n <= 4; ++n) {
            int done = 0;
            std::uint64_t seed = 0;
            while (done < 8) {
                const UnitaryModel model =
                    sample_minuscule(ctx, n, Rng::derive(555 + 10 * p, ++seed));
                if (model.delta() % 2 == 0) continue;
                const OrbitalReport rep = report_for_model(model);
                REQUIRE(rep.verdicts.afl_minuscule.has_value());
                CHECK(*rep.verdicts.afl_minuscule);
                CHECK(*rep.verdicts.duality);
                ++done;
            }
        }
    }
}

TEST_CASE("residual char poly is self-reciprocal on minuscule models") {
    ArithContext ctx(3, 2);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const UnitaryModel model = sample_minuscule(ctx, 3, Rng::derive(777, seed));
        const FqPolynomial pbar = residual_char_poly(model);
        if (pbar.degree() > 0) CHECK(is_self_reciprocal(pbar));
        CHECK(pbar.degree() == model.delta());
    }
}

TEST_CASE("report derivative forms agree") {
    // M-form vs N-form: they differ by v * (omega Orb(0)), zero on the odd side
    ArithContext ctx(3, 2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SymmetricPair pair = sample_symmetric(ctx, 2, Rng::derive(888, seed), 1);
        try {
            const OrbitalReport rep = report_for_pair(pair, Caps{}, false);
            long long n_form = 0;
            for (std::size_t i = 0; i < rep.counts_N.size(); ++i)
                n_form += (i % 2 == 0 ? -1 : 1) * static_cast<long long>(i) * rep.counts_N[i];
            const long long v = rep.invariants->v;
            CHECK(rep.afl_lhs == n_form + v * *rep.orb0_signed);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::complexity_exceeded) throw;
        }
    }
}
