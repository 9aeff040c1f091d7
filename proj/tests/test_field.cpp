#include "doctest.h"

#include "afllab/field.hpp"
#include "afllab/rng.hpp"

using namespace afl;

namespace {

FieldElement random_element(const ArithContext& ctx, Rng& rng, bool unit_only = false) {
    for (;;) {
        const long an = rng.next_signed(20);
        const long bn = rng.next_signed(20);
        const long ad = 1 + static_cast<long>(rng.next_below(5));
        const long bd = 1 + static_cast<long>(rng.next_below(5));
        FieldElement x(Rat(an, ad), Rat(bn, bd), ctx.u());
        if (x.is_zero()) continue;
        if (unit_only && ee_val(ctx, x) != 0) continue;
        return x;
    }
}

} // namespace

TEST_CASE("context picks the smallest nonresidue") {
    CHECK(ArithContext(3).u() == 2);
    CHECK(ArithContext(5).u() == 2);
    CHECK(ArithContext(7).u() == 3);
    CHECK(ArithContext(11).u() == 2);
    CHECK_THROWS_AS(ArithContext(4), Error);
    CHECK_THROWS_AS(ArithContext(2), Error);
    CHECK_THROWS_AS(ArithContext(3, 4), Error); // 4 is a square
}

TEST_CASE("basic arithmetic in Q(sqrt 2)") {
    ArithContext ctx(3, 2);
    const FieldElement x = make_fe(ctx, 1, 1, 1, 1);  // 1 + sqrt2
    const FieldElement y = make_fe(ctx, 1, 1, -1, 1); // 1 - sqrt2
    CHECK((x * y) == make_fe(ctx, -1));
    CHECK((x + FieldElement::zero(ctx.u())) == x);
    // (1+sqrt2)^{-1} = -1+sqrt2, norm is -1
    const FieldElement inv = x.inverse();
    CHECK(inv == make_fe(ctx, -1, 1, 1, 1));
    CHECK((x * inv) == FieldElement::one(ctx.u()));
    CHECK(x.norm() == Rat(-1));
    CHECK(x.trace() == Rat(2));
    CHECK_THROWS_AS(x / FieldElement::zero(ctx.u()), Error);
}

TEST_CASE("valuation on E") {
    ArithContext ctx(3, 2);
    CHECK(ee_val(ctx, make_fe(ctx, 3)) == 1);
    CHECK(ee_val(ctx, make_fe(ctx, 1, 1, 1, 1)) == 0);
    CHECK(ee_val(ctx, make_fe(ctx, 3, 2, 9, 1)) == 1); // 3/2 + 9 sqrt2
    CHECK(ee_val(ctx, make_fe(ctx, 1, 9)) == -2);
    CHECK(ee_val(ctx, FieldElement::zero(ctx.u())) == kValInf);
}

TEST_CASE("valuation is multiplicative and ultrametric") {
    ArithContext ctx(3, 2);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const FieldElement x = random_element(ctx, rng);
        const FieldElement y = random_element(ctx, rng);
        CHECK(ee_val(ctx, x * y) == ee_val(ctx, x) + ee_val(ctx, y));
        if (!(x + y).is_zero()) {
            const long long vs = ee_val(ctx, x + y);
            const long long vm = std::min(ee_val(ctx, x), ee_val(ctx, y));
            CHECK(vs >= vm);
            if (ee_val(ctx, x) != ee_val(ctx, y)) CHECK(vs == vm);
        }
        CHECK(ee_val(ctx, x.conj()) == ee_val(ctx, x));
        const FieldElement n = x * x.conj();
        CHECK(n.b() == 0);
        CHECK(ee_val(ctx, n) == 2 * ee_val(ctx, x));
    }
}

TEST_CASE("mu character") {
    ArithContext ctx(3, 2);
    CHECK(mu_sign(ctx, make_fe(ctx, 3)) == -1);
    CHECK(mu_sign(ctx, make_fe(ctx, 2)) == 1);
    CHECK(mu_sign(ctx, make_fe(ctx, 3, 1, 3, 1)) == -1);
    CHECK_THROWS_AS(mu_sign(ctx, FieldElement::zero(ctx.u())), Error);

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const FieldElement x = random_element(ctx, rng);
        const FieldElement y = random_element(ctx, rng);
        CHECK(mu_sign(ctx, x * y) == mu_sign(ctx, x) * mu_sign(ctx, y));
        // norms of E-units land in the kernel, p times a square does not
        const FieldElement unit = random_element(ctx, rng, true);
        CHECK(mu_sign(ctx, unit * unit.conj()) == 1);
        CHECK(mu_sign(ctx, make_fe(ctx, 3) * unit * unit) == -1);
    }
}

TEST_CASE("residue map") {
    ArithContext ctx(3, 2);
    const FqElement r = residue(ctx, make_fe(ctx, 4, 1, 5, 1));
    CHECK(r.a == 1);
    CHECK(r.b == 2);
    CHECK(residue(ctx, make_fe(ctx, 3)).is_zero());
    const FieldElement x = make_fe(ctx, 1, 1, 1, 1);
    const FqElement cr = residue(ctx, x.conj());
    CHECK(cr.a == 1);
    CHECK(cr.b == 2); // -1 mod 3
    CHECK_THROWS_AS(residue(ctx, make_fe(ctx, 1, 3)), Error);

    // ring homomorphism, commutes with conjugation, on random integral pairs
    Rng rng(7);
    auto rand_integral = [&]() {
        return make_fe(ctx, rng.next_signed(30), 1, rng.next_signed(30), 1);
    };
    for (int i = 0; i < 100; ++i) {
        const FieldElement x2 = rand_integral();
        const FieldElement y2 = rand_integral();
        const FqElement lhs = residue(ctx, x2 * y2);
        // product in F_9: (a1 + b1 w)(a2 + b2 w)
        const FqElement rx = residue(ctx, x2), ry = residue(ctx, y2);
        const unsigned long pa = (rx.a * ry.a + 2 * rx.b * ry.b) % 3;
        const unsigned long pb = (rx.a * ry.b + rx.b * ry.a) % 3;
        CHECK(lhs.a == pa);
        CHECK(lhs.b == pb);
    }
}

TEST_CASE("canonical reduction mod p^k") {
    const unsigned long p = 3;
    CHECK(reduce_mod_pk(Rat(10), p, 2) == Rat(1));
    CHECK(reduce_mod_pk(Rat(9), p, 2) == Rat(0));
    CHECK(reduce_mod_pk(Rat(-1), p, 1) == Rat(2));
    CHECK(reduce_mod_pk(Rat(1, 2), p, 1) == Rat(2));  // 1/2 = 2 mod 3
    CHECK(reduce_mod_pk(Rat(1, 3), p, 1) == Rat(1, 3));
    CHECK(reduce_mod_pk(Rat(4, 3), p, 1) == Rat(4, 3)); // already canonical: 4 in [0,9)
    CHECK(reduce_mod_pk(Rat(10, 3), p, 1) == Rat(1, 3));
    // difference between value and representative is in p^k Z_(p)
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Rat x(static_cast<long>(rng.next_signed(50)),
                    1 + static_cast<long>(rng.next_below(30)));
        const long long k = static_cast<long long>(rng.next_below(4));
        const Rat r = reduce_mod_pk(x, p, k);
        CHECK(val_p_rat(x - r, p) >= k);
        CHECK(reduce_mod_pk(r, p, k) == r);
    }
}
