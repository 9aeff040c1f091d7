#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "afllab/lattice.hpp"
#include "afllab/rng.hpp"

using namespace afl;

namespace {

EMatrix mat(const ArithContext& ctx, std::size_t r, std::size_t c,
            std::initializer_list<long> entries) {
    EMatrix m(r, c, ctx.u());
    auto it = entries.begin();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = make_fe(ctx, *it++);
    return m;
}

EMatrix random_unimodular(const ArithContext& ctx, Rng& rng, std::size_t n) {
    for (;;) {
        EMatrix g(n, n, ctx.u());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                g.at(i, j) = make_fe(ctx, rng.next_signed(8), 1, rng.next_signed(3), 1);
        if (!g.det().is_zero() && ee_val(ctx, g.det()) == 0) return g;
    }
}

// Independent oracle: every submodule of a rank <= 2 quotient is generated by
// at most two elements; close each pair additively (together with sqrt(u)
// multiples) and deduplicate by element set.
std::set<std::set<std::uint32_t>> naive_submodules(const FiniteModule& q) {
    const std::uint64_t size = q.element_count();
    const FieldElement w(Rat(0), Rat(1), q.ctx().u());
    auto sqrtu_mul = [&](std::uint32_t idx) {
        EMatrix v = q.lift(idx);
        for (std::size_t i = 0; i < v.rows(); ++i) v.at(i, 0) = v.at(i, 0) * w;
        return q.index_of(v);
    };
    auto close_pair = [&](std::uint32_t x, std::uint32_t y) {
        std::set<std::uint32_t> s{0};
        const std::vector<std::uint32_t> gens{x, y, sqrtu_mul(x), sqrtu_mul(y)};
        bool grew = true;
        while (grew) {
            grew = false;
            const std::vector<std::uint32_t> cur(s.begin(), s.end());
            for (std::uint32_t e : cur)
                for (std::uint32_t g : gens)
                    if (s.insert(q.add(e, g)).second) grew = true;
        }
        return s;
    };
    std::set<std::set<std::uint32_t>> out;
    for (std::uint32_t x = 0; x < size; ++x)
        for (std::uint32_t y = x; y < size; ++y) out.insert(close_pair(x, y));
    return out;
}

} // namespace

TEST_CASE("canonical basis") {
    ArithContext ctx(3, 2);

    const Lattice id = Lattice::from_generators(ctx, EMatrix::identity(2, ctx.u()));
    CHECK(id == Lattice::standard(ctx, 2));

    // columns {(3,0),(1,1),(0,3)}: spans (1,1) and (0,3) but not (0,1)
    const EMatrix gens = mat(ctx, 2, 3, {3, 1, 0, 0, 1, 3});
    const Lattice lat = Lattice::from_generators(ctx, gens);
    CHECK(lat.det_val() == 1);
    CHECK(lat.contains(mat(ctx, 2, 1, {1, 1})));
    CHECK(lat.contains(mat(ctx, 2, 1, {0, 3})));
    CHECK(lat.contains(mat(ctx, 2, 1, {3, 0})));
    CHECK(!lat.contains(mat(ctx, 2, 1, {0, 1})));
    CHECK(!lat.contains(mat(ctx, 2, 1, {1, 0})));

    // permuted generators give the identical canonical basis
    const EMatrix perm = mat(ctx, 2, 3, {0, 1, 3, 3, 1, 0});
    CHECK(Lattice::from_generators(ctx, perm) == lat);

    // canonicalization is idempotent
    CHECK(Lattice::from_generators(ctx, lat.basis()) == lat);

    CHECK_THROWS_AS(Lattice::from_generators(ctx, mat(ctx, 2, 2, {1, 0, 0, 0})), Error);
}

TEST_CASE("membership agrees with brute force on small instances") {
    ArithContext ctx(3, 2);
    Rng rng(57);
    for (int trial = 0; trial < 20; ++trial) {
        EMatrix g(2, 2, ctx.u());
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                g.at(i, j) = make_fe(ctx, rng.next_signed(6), 1, rng.next_signed(2), 1);
        if (g.det().is_zero()) continue;
        const Lattice lat = Lattice::from_generators(ctx, g);
        // brute force over small O-combinations x*c0 + y*c1 with x,y in a digit box
        std::set<std::string> reachable;
        for (long xa = -4; xa <= 4; ++xa)
            for (long xb = -1; xb <= 1; ++xb)
                for (long ya = -4; ya <= 4; ++ya)
                    for (long yb = -1; yb <= 1; ++yb) {
                        const FieldElement x = make_fe(ctx, xa, 1, xb, 1);
                        const FieldElement y = make_fe(ctx, ya, 1, yb, 1);
                        EMatrix v(2, 1, ctx.u());
                        for (std::size_t i = 0; i < 2; ++i)
                            v.at(i, 0) = x * g.at(i, 0) + y * g.at(i, 1);
                        CHECK(lat.contains(v));
                    }
    }
}

TEST_CASE("elementary divisors") {
    ArithContext ctx(3, 2);
    CHECK(elementary_divisors(ctx, mat(ctx, 2, 2, {1, 0, 0, 3})) ==
          std::vector<long long>{0, 1});
    CHECK(elementary_divisors(ctx, mat(ctx, 2, 2, {9, 0, 0, 3})) ==
          std::vector<long long>{1, 2});
    CHECK(elementary_divisors(ctx, mat(ctx, 2, 2, {0, 1, 1, 0})) ==
          std::vector<long long>{0, 0});
    CHECK_THROWS_AS(elementary_divisors(ctx, mat(ctx, 2, 2, {1, 1, 1, 1})), Error);

    // sum = val(det), invariant under unimodular multipliers
    Rng rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        EMatrix m(3, 3, ctx.u());
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                m.at(i, j) = make_fe(ctx, 3 * rng.next_signed(4), 1, rng.next_signed(4), 1);
        if (m.det().is_zero()) continue;
        const auto divs = elementary_divisors(ctx, m);
        long long total = 0;
        for (long long d : divs) total += d;
        CHECK(total == ee_val(ctx, m.det()));
        CHECK(std::is_sorted(divs.begin(), divs.end()));
        const EMatrix a = random_unimodular(ctx, rng, 3);
        const EMatrix b = random_unimodular(ctx, rng, 3);
        CHECK(elementary_divisors(ctx, a * m * b) == divs);
    }
}

TEST_CASE("hermitian dual") {
    ArithContext ctx(3, 2);
    const Lattice std2 = Lattice::standard(ctx, 2);

    const EMatrix g13 = mat(ctx, 2, 2, {1, 0, 0, 3});
    const Lattice dual = hermitian_dual(std2, g13);
    CHECK(dual.det_val() == -1);
    CHECK(dual.contains(std2));
    EMatrix third(2, 1, ctx.u());
    third.at(1, 0) = FieldElement(Rat(1, 3), Rat(0), ctx.u());
    CHECK(dual.contains(third));
    CHECK(hermitian_dual(dual, g13) == std2); // double dual

    const EMatrix uni = mat(ctx, 2, 2, {0, 1, 1, 0});
    CHECK(hermitian_dual(std2, uni) == std2);

    CHECK_THROWS_AS(hermitian_dual(std2, mat(ctx, 2, 2, {1, 1, 1, 1})), Error);

    // order reversal on random pairs L contained in M
    Rng rng(67);
    for (int trial = 0; trial < 15; ++trial) {
        const EMatrix gm = random_unimodular(ctx, rng, 2);
        EMatrix gram = gm * gm.conj_transpose(); // hermitian, invertible
        const Lattice m = Lattice::from_generators(ctx, random_unimodular(ctx, rng, 2));
        const Lattice l = Lattice::from_generators(ctx, m.basis().scaled(make_fe(ctx, 3)));
        CHECK(m.contains(l));
        CHECK(hermitian_dual(l, gram).contains(hermitian_dual(m, gram)));
    }
}

TEST_CASE("sesquilinear dual") {
    ArithContext ctx(3, 2);
    // row lattice spanned by rows of the identity: dual is the standard lattice
    CHECK(sesqui_dual_of_rows(ctx, EMatrix::identity(2, ctx.u())) ==
          Lattice::standard(ctx, 2));
    // column lattice spanned by (3 e1, e2): dual rows contain (1/3) e1^T
    const Lattice col = Lattice::from_generators(ctx, mat(ctx, 2, 2, {3, 0, 0, 1}));
    const EMatrix rows = sesqui_dual_of_columns(col);
    CHECK(rows.at(0, 0) == FieldElement(Rat(1, 3), Rat(0), ctx.u()));
    // double dual returns the original column lattice
    CHECK(sesqui_dual_of_rows(ctx, rows) == col);
}

TEST_CASE("quotient module decomposition") {
    ArithContext ctx(3, 2);
    const Lattice l = Lattice::standard(ctx, 2);
    const Lattice lp = Lattice::from_generators(
        ctx, EMatrix::identity(2, ctx.u()).scaled(FieldElement(Rat(1, 3), Rat(0), ctx.u())));
    const FiniteModule q = quotient_module(l, lp);
    CHECK(q.divisors() == std::vector<long long>{1, 1});
    CHECK(q.size() == 81);
    CHECK(q.length() == 2);

    const FiniteModule zero = quotient_module(l, l);
    CHECK(zero.divisors().empty());
    CHECK(zero.size() == 1);

    // G = diag(1,3): L*/L has 9 elements
    const EMatrix g13 = mat(ctx, 2, 2, {1, 0, 0, 3});
    const FiniteModule q2 = quotient_module(l, hermitian_dual(l, g13));
    CHECK(q2.divisors() == std::vector<long long>{1});
    CHECK(q2.size() == 9);

    CHECK_THROWS_AS(quotient_module(lp, l), Error); // not contained
}

TEST_CASE("quotient element arithmetic round-trips") {
    ArithContext ctx(3, 2);
    const Lattice l = Lattice::from_generators(ctx, mat(ctx, 2, 2, {3, 0, 0, 9}));
    const Lattice lp = Lattice::standard(ctx, 2);
    const FiniteModule q = quotient_module(l, lp);
    CHECK(q.divisors() == std::vector<long long>{1, 2});
    CHECK(q.size() == 9 * 81);
    const std::uint64_t size = q.element_count();
    for (std::uint32_t i = 0; i < size; i += 7) {
        CHECK(q.index_of(q.lift(i)) == i);
        CHECK(q.add(i, 0) == i);
    }
}

TEST_CASE("submodule enumeration counts") {
    ArithContext ctx(3, 2);
    const Lattice l = Lattice::standard(ctx, 2);

    // (O/w)^2 over F_9: trivial + full + 10 lines = 12 submodules
    const Lattice lp = Lattice::from_generators(
        ctx, EMatrix::identity(2, ctx.u()).scaled(FieldElement(Rat(1, 3), Rat(0), ctx.u())));
    const FiniteModule q = quotient_module(l, lp);
    const auto subs = enumerate_stable_submodules(q, false, false, false);
    CHECK(subs.size() == 12);
    int by_len[3] = {0, 0, 0};
    for (const auto& s : subs) {
        REQUIRE(s.length <= 2);
        ++by_len[s.length];
        CHECK(lp.contains(s.lift));
        CHECK(s.lift.contains(l));
    }
    CHECK(by_len[0] == 1);
    CHECK(by_len[1] == 10);
    CHECK(by_len[2] == 1);

    // zero module
    const auto zero_subs =
        enumerate_stable_submodules(quotient_module(l, l), false, false, false);
    CHECK(zero_subs.size() == 1);
    CHECK(zero_subs[0].length == 0);

    // O/w^2 through the generic walk: 0, wO/w^2O, O/w^2
    const Lattice l1 = Lattice::from_generators(ctx, mat(ctx, 1, 1, {9}));
    const Lattice lp1 = Lattice::standard(ctx, 1);
    const auto chain = enumerate_stable_submodules(quotient_module(l1, lp1), false, false, false);
    CHECK(chain.size() == 3);
    CHECK(chain[0].length == 0);
    CHECK(chain[1].length == 1);
    CHECK(chain[2].length == 2);
}

TEST_CASE("enumeration agrees with the naive two-generator oracle") {
    ArithContext ctx(3, 2);
    const Lattice lp = Lattice::standard(ctx, 2);
    Rng rng(71);
    int done = 0;
    while (done < 6) {
        EMatrix g(2, 2, ctx.u());
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                g.at(i, j) = make_fe(ctx, 3 * rng.next_signed(3), 1, 3 * rng.next_signed(1), 1);
        if (g.det().is_zero()) continue;
        const Lattice l = Lattice::from_generators(ctx, g);
        if (!lp.contains(l)) continue;
        const FiniteModule q = quotient_module(l, lp);
        if (q.size() > 100) continue;
        const auto subs = enumerate_stable_submodules(q, false, false, false);
        const auto naive = naive_submodules(q);
        CHECK(subs.size() == naive.size());
        ++done;
    }
}

TEST_CASE("operator and involution stability filters") {
    ArithContext ctx(3, 2);
    const Lattice l = Lattice::from_generators(ctx, mat(ctx, 1, 1, {3}));
    const Lattice lp = Lattice::standard(ctx, 1);
    const EMatrix id = EMatrix::identity(1, ctx.u());
    const SemilinearMap conj_map{id};
    const FiniteModule q = quotient_module(l, lp, &id, &conj_map);
    // invertible operator on a length-1 module: both {0} and Q survive
    const auto subs = enumerate_stable_submodules(q, true, true, false);
    CHECK(subs.size() == 2);

    const FiniteModule bare = quotient_module(l, lp);
    CHECK_THROWS_AS(enumerate_stable_submodules(bare, true, false, false), Error);

    // operator that does not stabilize the sublattice is rejected
    const EMatrix bad = mat(ctx, 1, 1, {2}).scaled(FieldElement(Rat(1, 3), Rat(0), ctx.u()));
    CHECK_THROWS_AS(quotient_module(l, lp, &bad, nullptr), Error);
}

TEST_CASE("self-dual filter and duality involution") {
    ArithContext ctx(3, 2);
    // G = diag(1, 9): divisors (0, 2), delta = 2; the unique self-dual lattice
    // between L and L* is diag(1, 1/3) scaled appropriately.
    const EMatrix g = mat(ctx, 2, 2, {1, 0, 0, 9});
    const Lattice l = Lattice::standard(ctx, 2);
    const Lattice lstar = hermitian_dual(l, g);
    const FiniteModule q = quotient_module(l, lstar);
    const auto all = enumerate_stable_submodules(q, false, false, false);
    const auto sd = enumerate_stable_submodules(q, false, false, true, &g);
    CHECK(sd.size() == 1);
    CHECK(sd[0].length == 1);
    for (const auto& s : sd) CHECK(hermitian_dual(s.lift, g) == s.lift);

    // duality: lattice duals of the enumerated lifts biject level i <-> delta - i
    std::map<long long, long long> counts, dual_counts;
    for (const auto& s : all) {
        ++counts[s.length];
        const Lattice d = hermitian_dual(s.lift, g);
        ++dual_counts[q.length() - (l.det_val() - d.det_val())];
    }
    CHECK(counts == dual_counts);
}

TEST_CASE("minuscule fast path matches an RREF subspace oracle") {
    // delta = 3 quotient: all subspaces of F_9^3, counted independently by
    // generating every reduced echelon form.
    ArithContext ctx(3, 2);
    const Lattice l = Lattice::from_generators(
        ctx, EMatrix::identity(3, ctx.u()).scaled(make_fe(ctx, 3)));
    const Lattice lp = Lattice::standard(ctx, 3);
    const FiniteModule q = quotient_module(l, lp);
    CHECK(q.divisors() == std::vector<long long>{1, 1, 1});
    const auto subs = enumerate_stable_submodules(q, false, false, false);

    // Gaussian binomial counts over q^2 = 9: dim 0:1, 1:91, 2:91, 3:1
    std::map<long long, long long> counts;
    for (const auto& s : subs) ++counts[s.length];
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 91);
    CHECK(counts[2] == 91);
    CHECK(counts[3] == 1);
    CHECK(subs.size() == 184);
}
