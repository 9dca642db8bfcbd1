#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace kolchin;
using namespace kolchin::testsup;

namespace {

// the Example of section 2: F3(t)(x,y), delta = d/dt with delta(x) = t,
// delta(y) = t+1, sigma(t) = t+1
struct MainexData {
    TowerRef tower;
    Derivation delta;
    Endomorphism sigma;  // x -> y, y -> x (the contradictory extension)
};

MainexData mainex() {
    auto t = Tower::make({3}, {"t"})->extend_transcendental("x")->extend_transcendental("y");
    auto tv = t->sym("t");
    Derivation d = Derivation::define(
        t, {{"t", t->one()}}, {{"x", tv}, {"y", tv + t->one()}});
    Endomorphism s = Endomorphism::define(t, t, {{"t", tv + t->one()}},
                                          {{"x", t->sym("y")}, {"y", t->sym("x")}});
    return {t, d, s};
}

}  // namespace

TEST_CASE("derivation_define examples") {
    SUBCASE("transcendental images are free") {
        auto m = mainex();
        CHECK(m.delta.apply(m.tower->sym("x")) == m.tower->sym("t"));
    }
    SUBCASE("inseparable generator with non-constant minpoly blocks every image") {
        auto k = Tower::make({2}, {"t"});
        auto ctx = make_ctx({"t", "a"});
        MPoly a = MPoly::variable({2}, ctx, "a"), tv = MPoly::variable({2}, ctx, "t");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(2) - tv));
        for (int img = 0; img < 3; ++img) {
            auto r = Derivation::try_define(tw, {{"t", tw->one()}}, {{"a", tw->from_int(img)}});
            auto* v = std::get_if<std::vector<OperatorViolation>>(&r);
            REQUIRE(v != nullptr);
            CHECK((*v)[0].generator == "a");
            CHECK((*v)[0].detail == "1");  // f^delta(a) = -1 = 1 in F2
        }
    }
    SUBCASE("constant coefficients leave the image free") {
        auto k = Tower::make({2}, {"t"});
        auto ctx = make_ctx({"t", "a"});
        MPoly a = MPoly::variable({2}, ctx, "a"), tv = MPoly::variable({2}, ctx, "t");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(2) - tv));
        Derivation d = Derivation::define(tw, {{"t", tw->zero()}}, {{"a", tw->one()}});
        CHECK(d.apply(tw->sym("a")).is_one());
    }
}

TEST_CASE("derivation_apply examples") {
    auto m = mainex();
    auto x = m.tower->sym("x"), y = m.tower->sym("y"), t = m.tower->sym("t");
    SUBCASE("Leibniz on x*y") { CHECK(m.delta.apply(x * y) == t * y + (t + m.tower->one()) * x); }
    SUBCASE("prime field constants") { CHECK(m.delta.apply(m.tower->from_int(2)).is_zero()); }
    SUBCASE("y^3 is a constant in characteristic 3") { CHECK(m.delta.apply(y.pow(3)).is_zero()); }
}

TEST_CASE("derivation_extend_forced examples") {
    SUBCASE("sqrt(t) over Q(t): image 1/(2a)") {
        auto k = Tower::make({0}, {"t"});
        Derivation d = Derivation::define(k, {{"t", k->one()}}, {});
        auto ctx = make_ctx({"t", "a"});
        MPoly a = MPoly::variable({0}, ctx, "a"), tv = MPoly::variable({0}, ctx, "t");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(2) - tv));
        Derivation d2 = d.extend_forced(tw);
        CHECK(d2.image("a") == tw->one() / (tw->from_int(2) * tw->sym("a")));
    }
    SUBCASE("constant coefficients force zero") {
        auto k = Tower::make({0}, {"t"});
        Derivation d = Derivation::define(k, {{"t", k->zero()}}, {});
        auto ctx = make_ctx({"t", "a"});
        MPoly a = MPoly::variable({0}, ctx, "a");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(2) - MPoly::from_int({0}, ctx, 2)));
        CHECK(d.extend_forced(tw).image("a").is_zero());
    }
    SUBCASE("inseparable generator rejected") {
        auto k = Tower::make({2}, {"t"});
        Derivation d = Derivation::define(k, {{"t", k->zero()}}, {});
        auto ctx = make_ctx({"t", "a"});
        MPoly a = MPoly::variable({2}, ctx, "a"), tv = MPoly::variable({2}, ctx, "t");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(2) - tv));
        CHECK_THROWS_AS(d.extend_forced(tw), NotSeparable);
    }
    SUBCASE("forced image satisfies the defining relation and is unique") {
        std::mt19937_64 rng(seed() + 20);
        auto k = Tower::make({0}, {"t"});
        Derivation d = Derivation::define(k, {{"t", k->one()}}, {});
        auto ctx = make_ctx({"t", "a"});
        MPoly a = MPoly::variable({0}, ctx, "a"), tv = MPoly::variable({0}, ctx, "t");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(3) - tv));
        Derivation d2 = d.extend_forced(tw);
        // substituting back: f^delta(a) + f'(a) delta(a) = 0
        Element fd = d2.minpoly_coeff_delta_at(0, tw->sym("a"));
        Element fp = tw->minpoly_derivative_at(0, tw->sym("a"));
        CHECK((fd + fp * d2.image("a")).is_zero());
        for (int i = 0; i < 20; ++i) {
            Element noise = random_element(rng, tw, 1);
            if (noise.is_zero()) continue;
            auto r = Derivation::try_define(tw, {{"t", tw->one()}}, {{"a", d2.image("a") + noise}});
            CHECK(std::holds_alternative<std::vector<OperatorViolation>>(r));
        }
    }
}

TEST_CASE("endo_define examples") {
    SUBCASE("shift on F3(t)") {
        auto k = Tower::make({3}, {"t"});
        Endomorphism s = Endomorphism::define(k, k, {{"t", k->sym("t") + k->one()}}, {});
        CHECK(s.apply(k->sym("t") * k->sym("t")) == (k->sym("t") + k->one()).pow(2));
    }
    SUBCASE("non-surjective base endomorphism") {
        auto k = Tower::make({2}, {"t1", "t2"});
        Endomorphism s =
            Endomorphism::define(k, k, {{"t1", k->sym("t2")}, {"t2", k->sym("t1").pow(2)}}, {});
        CHECK(s.apply(k->sym("t2")) == k->sym("t1").pow(2));
    }
    SUBCASE("minpoly transport violation") {
        auto k = Tower::make({2}, {"t1"});
        auto ctx = make_ctx({"t1", "a"});
        MPoly a = MPoly::variable({2}, ctx, "a"), t1 = MPoly::variable({2}, ctx, "t1");
        auto tw = k->extend_algebraic("a", RatExpr(a.pow(2) - t1));
        auto r = Endomorphism::try_define(tw, tw, {{"t1", tw->sym("t1")}}, {{"a", tw->sym("t1")}});
        auto* v = std::get_if<std::vector<OperatorViolation>>(&r);
        REQUIRE(v != nullptr);
        CHECK((*v)[0].generator == "a");
    }
}

TEST_CASE("commutation_check examples") {
    SUBCASE("mainex yields the t vs t+2 clash at y") {
        auto m = mainex();
        auto res = commutation_check(m.delta, m.sigma);
        REQUIRE(res.violations.size() == 1);
        CHECK(res.violations[0].symbol == "y");
        CHECK(res.violations[0].delta_sigma == m.tower->sym("t"));
        CHECK(res.violations[0].sigma_delta == m.tower->sym("t") + m.tower->from_int(2));
        // x commutes: delta(sigma x) = t+1 = sigma(delta x)
    }
    SUBCASE("trivial derivation commutes with anything") {
        auto k = Tower::make({3}, {"t"});
        Derivation d = Derivation::define(k, {{"t", k->zero()}}, {});
        Endomorphism s = Endomorphism::define(k, k, {{"t", k->sym("t").pow(3)}}, {});
        CHECK(commutation_check(d, s).ok());
    }
    SUBCASE("d/dt with the shift on the base") {
        auto k = Tower::make({3}, {"t"});
        Derivation d = Derivation::define(k, {{"t", k->one()}}, {});
        Endomorphism s = Endomorphism::define(k, k, {{"t", k->sym("t") + k->one()}}, {});
        CHECK(commutation_check(d, s).ok());
    }
}

TEST_CASE("r_map examples") {
    auto k = Tower::make({2}, {"t"});
    SUBCASE("non-constants go to zero") {
        Derivation d = Derivation::define(k, {{"t", k->one()}}, {});
        CHECK(r_map(d, k->sym("t")).is_zero());
    }
    SUBCASE("constant squares have roots") {
        Derivation d = Derivation::define(k, {{"t", k->zero()}}, {});
        CHECK(r_map(d, k->sym("t").pow(2)) == k->sym("t"));
    }
    SUBCASE("constant without presented root") {
        Derivation d = Derivation::define(k, {{"t", k->zero()}}, {});
        CHECK_THROWS_AS(r_map(d, k->sym("t")), PRootMissing);
    }
}

TEST_CASE("derivation apply is additive and Leibniz") {
    std::mt19937_64 rng(seed() + 21);
    auto m = mainex();
    for (int i = 0; i < 100; ++i) {
        Element a = random_element(rng, m.tower), b = random_element(rng, m.tower);
        CHECK(m.delta.apply(a + b) == m.delta.apply(a) + m.delta.apply(b));
        CHECK(m.delta.apply(a * b) == m.delta.apply(a) * b + a * m.delta.apply(b));
    }
}

TEST_CASE("endomorphism apply is a ring homomorphism fixing the prime field") {
    std::mt19937_64 rng(seed() + 22);
    auto m = mainex();
    for (int i = 0; i < 100; ++i) {
        Element a = random_element(rng, m.tower), b = random_element(rng, m.tower);
        CHECK(m.sigma.apply(a + b) == m.sigma.apply(a) + m.sigma.apply(b));
        CHECK(m.sigma.apply(a * b) == m.sigma.apply(a) * m.sigma.apply(b));
    }
    CHECK(m.sigma.apply(m.tower->from_int(2)) == m.tower->from_int(2));
}

TEST_CASE("generator-level commutation lifts to elements") {
    // on towers without inseparable algebraic generators
    std::mt19937_64 rng(seed() + 23);
    auto k = Tower::make({3}, {"t"})->extend_transcendental("x");
    auto tv = k->sym("t");
    Derivation d = Derivation::define(k, {{"t", k->one()}}, {{"x", k->sym("x")}});
    // sigma(t) = t + 1, sigma(x) = 2x: check commutation first
    Endomorphism s =
        Endomorphism::define(k, k, {{"t", tv + k->one()}}, {{"x", k->from_int(2) * k->sym("x")}});
    REQUIRE(commutation_check(d, s).ok());
    for (int i = 0; i < 80; ++i) {
        Element e = random_element(rng, k);
        CHECK(d.apply(s.apply(e)) == s.apply(d.apply(e)));
    }
}

TEST_CASE("derivation_define agrees with the brute-force oracle") {
    std::mt19937_64 rng(seed() + 24);
    int checked = 0;
    for (std::uint64_t p : {std::uint64_t(2), std::uint64_t(3), std::uint64_t(0)}) {
        for (int trial = 0; trial < 25; ++trial) {
            TowerRef t = random_tower(rng, p, 3);
            std::map<std::string, Element> images;
            images.emplace("t", random_element(rng, t, 1, 2));
            for (const auto& g : t->gens()) images.emplace(g.name, random_element(rng, t, 1, 2));
            bool oracle = false, engine = false;
            try {
                oracle = derivation_oracle(t, images);
                std::map<std::string, Element> base{{"t", images.at("t")}};
                std::map<std::string, Element> gens;
                for (const auto& g : t->gens()) gens.emplace(g.name, images.at(g.name));
                engine = std::holds_alternative<Derivation>(Derivation::try_define(t, base, gens));
            } catch (const ReducibleMinPoly&) {
                continue;  // degenerate random instance
            }
            CHECK(oracle == engine);
            ++checked;
        }
    }
    CHECK(checked > 50);
}
