#include "qpb/compare.hpp"
#include "qpb/json_io.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qpb;

TEST_CASE("algebra serialization round trip") {
    FamilyParams p;
    p.alpha = Rat(1, 2);
    p.gamma = Rat(1);
    p.with_moment_map = true;
    CatalogBundle b = q1(Q1Case::C1b, p);
    json j = algebra_to_json(b.algebra);
    AlgebraSpec back = algebra_from_json(j);
    REQUIRE(back.base.idempotents == b.algebra.base.idempotents);
    REQUIRE(back.num_gen() == b.algebra.num_gen());
    for (std::uint32_t g = 0; g < back.num_gen(); ++g) {
        REQUIRE(back.generators[g].name == b.algebra.generators[g].name);
        REQUIRE(back.generators[g].kind == b.algebra.generators[g].kind);
        REQUIRE(back.generators[g].defining == b.algebra.generators[g].defining);
    }
}

TEST_CASE("kind spellings parse") {
    json j = {{"idempotents", {"1"}},
              {"generators",
               {{{"name", "g"}, {"tail", "1"}, {"head", "1"}, {"kind", "invertible"}},
                {{"name", "c"}, {"tail", "1"}, {"head", "1"}, {"kind", {{"invertible", 2}}}},
                {{"name", "x"}, {"tail", "1"}, {"head", "1"}, {"kind", {{"nilpotent", 3}}}}}}};
    AlgebraSpec A = algebra_from_json(j);
    REQUIRE(A.generators[0].kind == GenKind::Invertible);
    REQUIRE(A.generators[0].order == 0);
    REQUIRE(A.generators[1].order == 2);
    REQUIRE(A.generators[2].kind == GenKind::Nilpotent);
}

TEST_CASE("words parse idempotent references and inverse suffixes") {
    json j = {{"idempotents", {"1", "2"}},
              {"generators",
               {{{"name", "t"}, {"tail", "1"}, {"head", "2"}, {"kind", "plain"}},
                {{"name", "g"}, {"tail", "2"}, {"head", "1"}, {"kind", "invertible"}}}}};
    AlgebraSpec A = algebra_from_json(j);
    Word e2 = word_from_json(A, json::array({"e2"}));
    REQUIRE(e2.is_unit());
    REQUIRE(e2.unit == 1);
    Word w = word_from_json(A, json::array({"t", "g"}));
    REQUIRE(w.atoms.size() == 2);
    Word wi = word_from_json(A, json::array({"g^-1", "t"}));
    REQUIRE(wi.atoms[0].inv);
    REQUIRE_THROWS_AS(word_from_json(A, json::array({"nope"})), StructuralError);
}

TEST_CASE("polynomials and tensors round trip with exact fractions") {
    CatalogBundle b = free2(2, [] {
        FamilyParams p;
        p.mu = Rat(1, 2);
        p.alpha = Rat(-1, 2);
        p.gamma = Rat(22, 7);
        return p;
    }());
    const AlgebraSpec& A = b.algebra;
    NCPoly p = nc_scale(Rat(-3, 4), mul(A, nc_gen(0), nc_gen(1))) + nc_idem(0, Rat(5));
    REQUIRE(poly_from_json(A, poly_to_json(A, p)) == p);
    const Tensor2& v = *b.bracket.find(0, 1);
    REQUIRE(tensor_from_json(A, tensor_to_json(A, v)) == v);
}

TEST_CASE("bundle round trip preserves brackets and moment maps") {
    FamilyParams p;
    p.mu = Rat(1, 2);
    p.alpha = Rat(1, 2);
    p.gamma = Rat(1);
    p.with_moment_map = true;
    CatalogBundle b = free2(2, p);
    json j = bundle_to_json(b);
    CatalogBundle back = bundle_from_json(j);
    REQUIRE(bracket_diff_by_name(b.bracket, back.bracket).empty());
    REQUIRE(moment_map_diff_by_name(b.algebra, *b.moment_map, back.algebra, *back.moment_map)
                .empty());
}

TEST_CASE("single-orientation tables are completed, inconsistent ones reach the checker") {
    CatalogBundle b = q1(Q1Case::C1a, [] {
        FamilyParams p;
        p.delta = 1;
        return p;
    }());
    json j = bracket_to_json(b.bracket);
    // drop the (s,t) orientation; loading restores it by antisymmetry
    json pairs = json::array();
    for (const auto& item : j.at("pairs"))
        if (!(item.at("left") == "s" && item.at("right") == "t")) pairs.push_back(item);
    DoubleBracketSpec loaded = bracket_from_json(b.algebra, json{{"pairs", pairs}});
    REQUIRE(*loaded.find(1, 0) == *b.bracket.find(1, 0));

    // an explicitly inconsistent (but well-typed) table parses and then
    // fails the antisymmetry check
    json broken = bracket_to_json(b.bracket);
    for (auto& item : broken.at("pairs"))
        if (item.at("left") == "s" && item.at("right") == "t")
            item["value"] = tensor_to_json(b.algebra, t2_of(nc_idem(0), nc_idem(1)));
    DoubleBracketSpec bad = bracket_from_json(b.algebra, broken);
    CheckReport rep = check_cyclic_antisymmetry(bad);
    REQUIRE(!rep.passed());
}

TEST_CASE("typing violations are structural errors") {
    CatalogBundle b = q1(Q1Case::C1a, [] {
        FamilyParams p;
        p.delta = 1;
        return p;
    }());
    json j = bracket_to_json(b.bracket);
    for (auto& item : j.at("pairs"))
        if (item.at("left") == "t" && item.at("right") == "s")
            item["value"] =
                tensor_to_json(b.algebra, t2_of(nc_gen(0), nc_gen(0))); // t (x) t is mistyped
    REQUIRE_THROWS_AS(bracket_from_json(b.algebra, j), StructuralError);
}

TEST_CASE("dimension vectors parse from label:size lists") {
    CatalogBundle b = q1(Q1Case::C1a, [] {
        FamilyParams p;
        p.delta = 1;
        return p;
    }());
    DimVector dim = dim_from_string(b.algebra, "1:2,2:1");
    REQUIRE(dim.alpha == std::vector<std::uint32_t>{2, 1});
    REQUIRE_THROWS_AS(dim_from_string(b.algebra, "1:2"), ParameterError);
    REQUIRE_THROWS_AS(dim_from_string(b.algebra, "1:2,2:0"), ParameterError);
}

TEST_CASE("family parameters parse from JSON") {
    FamilyParams p = params_from_json(json::parse(
        R"({"lambda":"0","mu":"1/2","nu":"0","delta":-1,"case":"1b","with_moment_map":true})"));
    REQUIRE(*p.mu == Rat(1, 2));
    REQUIRE(*p.delta == -1);
    REQUIRE(*p.case_tag == "1b");
    REQUIRE(p.with_moment_map);
    REQUIRE(!p.alpha.has_value());
}

TEST_CASE("quiver and surface specs parse") {
    QuiverSpec q = quiver_from_json(json::parse(R"({
        "vertices": ["1","2"],
        "arrows": [{"name":"t","tail":"1","head":"2"}],
        "weights": {"t": "1"},
        "orderings": {"1": ["t"]}
    })"));
    REQUIRE(q.vertices.size() == 2);
    REQUIRE(q.weights.at("t") == 1);
    CatalogBundle b = vdb_quiver(q);
    REQUIRE(check_quasi_poisson(b.bracket).passed());

    SurfaceSpec s = surface_from_json(json::parse(R"({"genus":0,"boundaries":1,"weights":[2]})"));
    REQUIRE(s.weights == std::vector<int>{2});
}
