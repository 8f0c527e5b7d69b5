#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "ws/parse.hpp"
#include "ws/place.hpp"

using namespace ws;
using namespace ws::testutil;

TEST_CASE("valuations") {
    FieldRef L = parse_field("GF(3)(t)");
    FieldRef f3 = L->bottom();
    Place vt = Place::finite_place(L, Poly::variable(f3));
    Place vinf = Place::infinity(L);

    CHECK(valuation(vt, parse_element("t^2/(t+1)", L)) == 2);
    CHECK(valuation(vinf, parse_element("(t^2+1)/t", L)) == -1);

    // unit times uniformizer has valuation 1 (t^2+1 splits over F_5, so the
    // irreducible quadratic t^2+2 plays its role there)
    FieldRef L5 = parse_field("GF(5)(t)");
    Poly t5 = Poly::variable(L5->bottom());
    Place vq5 = Place::finite_place(L5, t5 * t5 + Poly::constant(L5->bottom()->from_int(2)));
    CHECK(valuation(vq5, parse_element("2*(t^2+2)", L5)) == 1);
    Place vq3 = Place::finite_place(L, Poly::variable(f3) * Poly::variable(f3) +
                                           Poly::constant(f3->one()));
    CHECK(valuation(vq3, parse_element("2*(t^2+1)", L)) == 1);

    CHECK_THROWS_WITH_AS(valuation(vt, L->zero()), doctest::Contains("ZeroInput"), Error);
    CHECK_THROWS_WITH_AS(valuation(vt, parse_element("x1", parse_field("GF(3)(x1)"))),
                         doctest::Contains("FieldMismatch"), Error);

    // multiplicativity on random pairs
    std::mt19937_64 rng(seed_from_env());
    for (int i = 0; i < 100; ++i) {
        Element a = rand_elem(L, rng, 3, true);
        Element b = rand_elem(L, rng, 3, true);
        CHECK(valuation(vt, a * b) == valuation(vt, a) + valuation(vt, b));
        CHECK(valuation(vinf, a * b) == valuation(vinf, a) + valuation(vinf, b));
    }
}

TEST_CASE("residues") {
    FieldRef L = parse_field("GF(3)(t)");
    FieldRef f3 = L->bottom();
    Place vt = Place::finite_place(L, Poly::variable(f3));
    Place vinf = Place::infinity(L);

    CHECK(residue(vt, parse_element("(t+1)/(t+2)", L)) == f3->from_int(2));
    CHECK(residue(vinf, parse_element("(t^2+1)/(t^2+t)", L)) == f3->from_int(1));

    FieldRef L2 = parse_field("GF(3)(x1)(x2)");
    FieldRef L1 = L2->base();
    Poly pi = Poly::variable(L1) + Poly::constant(parse_element("x1", L1));
    Place vmix = Place::finite_place(L2, pi);
    CHECK(residue(vmix, parse_element("x2+1", L2)) == parse_element("1-x1", L1));

    CHECK_THROWS_WITH_AS(residue(vt, parse_element("t", L)), doctest::Contains("NonUnit"), Error);
}

TEST_CASE("residue fields") {
    FieldRef L = parse_field("GF(3)(t)");
    FieldRef f3 = L->bottom();

    ResidueField ri = residue_field(Place::infinity(L));
    CHECK(ri.kind == ResidueField::Kind::base);
    CHECK(ri.field->same(*f3));

    Poly t = Poly::variable(f3);
    ResidueField rq = residue_field(
        Place::finite_place(L, t * t + Poly::constant(f3->one())));
    CHECK(rq.kind == ResidueField::Kind::finite_ext);
    CHECK(rq.field->cardinality() == 9);
    CHECK(ff_enumerate(rq.field).size() == 9); // cardinality by enumeration

    FieldRef L2 = parse_field("GF(3)(x1)(x2)");
    Poly pi = Poly::variable(L2->base()) + Poly::constant(parse_element("x1", L2->base()));
    ResidueField rmix = residue_field(Place::finite_place(L2, pi));
    CHECK(rmix.kind == ResidueField::Kind::base);
    CHECK(rmix.field->same(*L2->base()));

    // degree >= 2 over a function-field base: opaque handle with arithmetic
    FieldRef ell = L2->base();
    Element c = parse_element("x1", ell);
    Place vq = Place::quadratic(L2, c);
    ResidueField ro = residue_field(vq);
    CHECK(ro.kind == ResidueField::Kind::opaque);
    CHECK_THROWS_WITH_AS(residue(vq, parse_element("x1", L2)),
                         doctest::Contains("UnsupportedResidueField"), Error);
    // quotient arithmetic still works and multiplies
    Poly r1 = residue_rep(vq, parse_element("x2+1", L2));
    Poly r2 = residue_rep(vq, parse_element("x2+2", L2));
    Poly r12 = residue_rep(vq, parse_element("(x2+1)*(x2+2)", L2));
    CHECK((r1 * r2) % vq.pi() == r12);
}

TEST_CASE("residues over a flattened extension base") {
    // places of GF(3^2)(t) of degree 2 land in GF(3^4) with explicit embedding
    FieldRef f9 = Field::finite_canonical(3, 2);
    FieldRef L9 = Field::rational(f9, "t");
    Element z = Element::ff_make(f9, {0, 1});
    Poly t = Poly::variable(f9);
    Poly pi = t * t + Poly::constant(z); // t^2 + z; irreducible iff -z is a nonsquare
    if (!ff_is_square(-z)) {
        Place v = Place::finite_place(L9, pi);
        ResidueField rf = residue_field(v);
        CHECK(rf.field->cardinality() == 81);
        // homomorphism check on residues
        std::mt19937_64 rng(seed_from_env());
        for (int i = 0; i < 30; ++i) {
            Element a = rand_elem(L9, rng, 2, true);
            Element b = rand_elem(L9, rng, 2, true);
            if (valuation(v, a) != 0 || valuation(v, b) != 0) continue;
            CHECK(residue(v, a, rf) * residue(v, b, rf) == residue(v, a * b, rf));
        }
    }
}

TEST_CASE("support places") {
    FieldRef L = parse_field("GF(3)(t)");
    Support s1 = support_places(parse_form("<1, 1, t>", L));
    CHECK(s1.exact);
    REQUIRE(s1.places.size() == 2);
    CHECK(s1.places[0].str() == "fin(t)");
    CHECK(s1.places[1].str() == "inf(t)");

    FieldRef L2 = parse_field("GF(3)(x1)(x2)");
    Support s2 = support_places(parse_form("<x2+1, -x2-x1, -2, x1, x1*x2>", L2));
    CHECK(s2.exact);
    REQUIRE(s2.places.size() == 4);
    CHECK(s2.places[0].str() == "fin(x2)");
    CHECK(s2.places[1].str() == "fin(x2+1)");
    CHECK(s2.places[2].str() == "fin(x2+x1)");
    CHECK(s2.places[3].str() == "inf(x2)");

    Support s3 = support_places(parse_form("<1, -1>", parse_field("GF(5)(t)")));
    CHECK(s3.places.size() == 1);
    CHECK(s3.places[0].is_infinity());
}

TEST_CASE("support places are sound") {
    std::mt19937_64 rng(seed_from_env());
    FieldRef L = parse_field("GF(3)(t)");
    FieldRef f3 = L->bottom();
    for (int trial = 0; trial < 40; ++trial) {
        QForm q = rand_form(L, rng, 1 + static_cast<int>(rng() % 3), 3, true);
        Support sup = support_places(q);
        CHECK(sup.exact);
        for (const auto& v : sup.places) {
            if (v.is_infinity()) continue;
            bool ramified = false;
            for (const auto& e : q.entries()) ramified = ramified || valuation(v, e) != 0;
            CHECK(ramified);
        }
        // places not in the support have zero valuation on every entry
        for (const auto& pi : {Poly::variable(f3),
                               Poly::variable(f3) + Poly::constant(f3->one()),
                               Poly::variable(f3) + Poly::constant(f3->from_int(2))}) {
            Place v = Place::finite_place(L, pi);
            bool listed = false;
            for (const auto& w : sup.places) listed = listed || w == v;
            if (!listed)
                for (const auto& e : q.entries()) CHECK(valuation(v, e) == 0);
        }
    }
}

TEST_CASE("degree identity over F_q(t)") {
    // sum over all places of valuation * residue-degree vanishes
    std::mt19937_64 rng(seed_from_env());
    for (const char* name : {"GF(3)(t)", "GF(5)(t)"}) {
        FieldRef L = parse_field(name);
        for (int i = 0; i < 100; ++i) {
            Element a = rand_elem(L, rng, 4, true, true);
            Support sup = element_support(a);
            long total = a.den().degree() - a.num().degree(); // infinite place
            for (const auto& v : sup.places) total += valuation(v, a) * v.degree();
            CHECK(total == 0);
        }
    }
}

TEST_CASE("residue multiplicativity at random places") {
    std::mt19937_64 rng(seed_from_env());
    FieldRef L = parse_field("GF(5)(t)");
    FieldRef f5 = L->bottom();
    std::vector<Place> places = {
        Place::finite_place(L, Poly::variable(f5)),
        Place::finite_place(L, Poly::variable(f5) + Poly::constant(f5->from_int(3))),
        Place::finite_place(L, Poly::variable(f5) * Poly::variable(f5) +
                                   Poly::constant(f5->from_int(2))),
        Place::infinity(L),
    };
    for (int i = 0; i < 120; ++i) {
        const Place& v = places[rng() % places.size()];
        Element a = rand_elem(L, rng, 3, true, true);
        Element b = rand_elem(L, rng, 3, true, true);
        if (valuation(v, a) != 0 || valuation(v, b) != 0) continue;
        ResidueField rf = residue_field(v);
        CHECK(residue(v, a, rf) * residue(v, b, rf) == residue(v, a * b, rf));
    }
}

TEST_CASE("place construction guards") {
    FieldRef L2 = parse_field("GF(3)(x1)(x2)");
    FieldRef L1 = L2->base();
    // x2^2 - x1^2 = (x2-x1)(x2+x1) must be refused
    Element x1 = parse_element("x1", L1);
    Poly x2 = Poly::variable(L1);
    CHECK_THROWS_WITH_AS(Place::finite_place(L2, x2 * x2 - Poly::constant(x1 * x1)),
                         doctest::Contains("ReducibleModulus"), Error);
    // quadratic constructor refuses squares: -(-x1^2) = x1^2
    CHECK_THROWS_WITH_AS(Place::quadratic(L2, -(x1 * x1)), doctest::Contains("SquareProduct"),
                         Error);
    // and accepts certified irreducibles
    Place ok = Place::quadratic(L2, x1);
    CHECK(ok.str() == "fin(x2^2+x1)");
    // canonical ordering: by degree then coefficients, infinity last
    Place a = Place::finite_place(L2, x2);
    Place b = Place::finite_place(L2, x2 + Poly::constant(L1->one()));
    CHECK(Place::compare(a, b) < 0);
    CHECK(Place::compare(b, ok) < 0);
    CHECK(Place::compare(ok, Place::infinity(L2)) < 0);
}
