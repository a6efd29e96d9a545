#include "qpb/tensor.hpp"
#include "qpb/random_words.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qpb;

namespace {
AlgebraSpec quiver_q1() {
    AlgebraSpec A;
    A.base.idempotents = {"1", "2"};
    A.generators.push_back(GeneratorDecl{"t", 0, 1, GenKind::Plain, 0, {}});
    A.generators.push_back(GeneratorDecl{"s", 1, 0, GenKind::Plain, 0, {}});
    validate_algebra(A);
    return A;
}
} // namespace

TEST_CASE("outer action dresses the outer slots") {
    AlgebraSpec A = quiver_q1();
    NCPoly t = nc_gen(0), s = nc_gen(1), one = nc_one(A);
    Tensor2 d = t2_of(t, s);
    REQUIRE(outer_act(A, one, d, one) == d);
    // a x (x) y b on simple tensors
    Tensor2 lhs = outer_act(A, s, d, t);
    REQUIRE(lhs == t2_of(mul(A, s, t), mul(A, s, t)));
    // typing: e2 . (t (x) 1) . e1 = (e2 t) (x) ... = 0
    REQUIRE(outer_act(A, nc_idem(1), t2_of(t, one), nc_idem(0)).is_zero());
}

TEST_CASE("inner action crosses the slots") {
    AlgebraSpec A = quiver_q1();
    NCPoly t = nc_gen(0), s = nc_gen(1), one = nc_one(A);
    Tensor2 d = t2_of(t, s);
    REQUIRE(inner_act(A, one, d, one) == d);
    // e1 * (t (x) s) * e2 = (t e2) (x) (e1 s) = t (x) 0 = 0
    REQUIRE(inner_act(A, nc_idem(0), d, nc_idem(1)).is_zero());
    // a * (x (x) y) * b = x b (x) a y
    Tensor2 v = inner_act(A, t, d, s);
    REQUIRE(v == t2_of(mul(A, t, s), mul(A, t, s)));
}

TEST_CASE("flip is an involution and tau has order three") {
    AlgebraSpec A = quiver_q1();
    NCPoly t = nc_gen(0), s = nc_gen(1);
    Tensor2 d = t2_of(t, s) + t2_of(mul(A, t, s), nc_idem(0), Rat(3));
    REQUIRE(flip(flip(d)) == d);
    REQUIRE(flip(Tensor2{}).is_zero());
    REQUIRE(flip(t2_of(t, s)) == t2_of(s, t));

    Tensor3 u = t3_of(t, s, nc_idem(0)) + t3_of(nc_idem(1), t, s, Rat(-2));
    REQUIRE(tau123(tau123(tau123(u))) == u);
    // tau(123): x (x) y (x) z -> z (x) x (x) y
    REQUIRE(tau123(t3_of(t, s, nc_idem(0))) == t3_of(nc_idem(0), t, s));
    REQUIRE(tau_power(t3_of(t, s, nc_idem(0)), 2) == t3_of(s, nc_idem(0), t));
}

TEST_CASE("module action composition laws") {
    AlgebraSpec A = quiver_q1();
    WordSampler sampler(A, 5);
    NCPoly one = nc_one(A);
    for (int i = 0; i < 100; ++i) {
        NCPoly a = sampler.poly(2, 2), b = sampler.poly(2, 2);
        NCPoly c = sampler.poly(2, 2), e = sampler.poly(2, 2);
        Tensor2 d = t2_of(sampler.poly(2, 2), sampler.poly(2, 2));
        REQUIRE(outer_act(A, a, outer_act(A, b, d, c), e) ==
                outer_act(A, mul(A, a, b), d, mul(A, c, e)));
        REQUIRE(inner_act(A, a, inner_act(A, b, d, c), e) ==
                inner_act(A, mul(A, a, b), d, mul(A, c, e)));
        // outer and inner actions commute
        REQUIRE(outer_act(A, a, inner_act(A, b, d, c), e) ==
                inner_act(A, b, outer_act(A, a, d, e), c));
    }
}

TEST_CASE("tensor equality distinguishes slots") {
    AlgebraSpec A = quiver_q1();
    NCPoly t = nc_gen(0), one = nc_one(A);
    REQUIRE(tensor_eq(t2_of(t, one), t2_of(t, one)));
    REQUIRE(tensor_eq(t2_of(t, one) - t2_of(t, one), Tensor2{}));
    REQUIRE(!tensor_eq(t2_of(t, one), t2_of(one, t)));
}
