#pragma once

// The acceptance matrix: eight rows, each exercising one pillar of the
// engine end to end with exact comparisons. Shared between the CLI `suite`
// subcommand and the acceptance test binary.

#include "qpb/catalog.hpp"
#include "qpb/compare.hpp"
#include "qpb/rep.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <sstream>

namespace qpb {

struct RowResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct SuiteRow {
    std::string name;
    std::string description;
    std::function<std::pair<bool, std::string>()> run;
};

namespace suite_detail {

struct Tally {
    std::size_t cases = 0;
    std::ostringstream fail;
    bool ok = true;

    void check(bool cond, const std::string& what) {
        ++cases;
        if (!cond) {
            ok = false;
            fail << (fail.tellp() > 0 ? "; " : "") << what;
        }
    }
    void require(const CheckReport& rep, const std::string& what) {
        cases += rep.checked;
        if (!rep.passed()) {
            ok = false;
            fail << (fail.tellp() > 0 ? "; " : "") << what << " [" << rep.witnesses.size()
                 << " witnesses, first: " << rep.witnesses.front().input << "]";
        }
    }
    std::pair<bool, std::string> done(const std::string& note = {}) {
        std::ostringstream out;
        if (ok)
            out << cases << " checks" << (note.empty() ? "" : ", " + note);
        else
            out << fail.str();
        return {ok, out.str()};
    }
};

inline FamilyParams q1_params(int delta, const Rat& lambda = 0) {
    FamilyParams p;
    p.delta = delta;
    if (lambda != 0) p.lambda = lambda;
    return p;
}

inline FamilyParams q1b_params(const Rat& alpha, const Rat& gamma, const Rat& phi,
                               bool with_mm = false) {
    FamilyParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.phi = phi;
    p.with_moment_map = with_mm;
    return p;
}

inline std::vector<std::pair<std::string, FamilyParams>> free2_grid() {
    std::vector<std::pair<std::string, FamilyParams>> out;
    auto add = [&](int c, FamilyParams p) {
        out.emplace_back("case " + std::to_string(c), std::move(p));
    };
    for (int variant = 0; variant < 2; ++variant) {
        Rat mu = variant == 0 ? Rat(1, 2) : Rat(-1, 2);
        {
            FamilyParams p;
            p.mu = mu;
            p.gamma0 = variant == 0 ? Rat(0) : Rat(2);
            p.gamma1 = variant == 0 ? Rat(0) : Rat(1);
            p.alpha = variant == 0 ? Rat(1, 2) : Rat(3, 2);
            add(1, p);
        }
        {
            FamilyParams p;
            p.mu = mu;
            p.alpha = Rat(1, 2);
            p.gamma = variant == 0 ? Rat(0) : Rat(1);
            add(2, p);
        }
        {
            FamilyParams p;
            p.mu = mu;
            p.m = variant == 0 ? Rat(1, 2) : Rat(-1, 2);
            add(3, p);
        }
        {
            FamilyParams p;
            p.mu = mu;
            p.m = Rat(1, 2);
            p.alpha = variant == 0 ? Rat(1, 2) : Rat(-1, 2);
            add(4, p);
        }
        {
            FamilyParams p;
            p.mu = mu;
            p.alpha = Rat(1, 2);
            p.n = variant == 0 ? Rat(1) : Rat(-2);
            add(5, p);
        }
        {
            FamilyParams p;
            p.mu = mu;
            p.n = variant == 0 ? Rat(1) : Rat(3);
            add(6, p);
        }
        {
            FamilyParams p;
            p.alpha = variant == 0 ? Rat(1, 2) : Rat(-1, 2);
            p.n = Rat(1);
            p.nu = variant == 0 ? Rat(1) : Rat(-1, 2);
            add(7, p);
        }
    }
    return out;
}

/// Two loops and the double one-arrow quiver glued into a two-vertex bundle
/// whose final fusion produces one generator of each type.
inline CatalogBundle four_type_bundle() {
    CatalogBundle loops1 = free1(0, Rat(1, 2), 0);
    loops1.algebra.base.idempotents[0] = "3";
    loops1.algebra.generators[0].name = "p";
    loops1.bracket.algebra = loops1.algebra;
    CatalogBundle loops2 = free1(0, Rat(-1, 2), 0);
    loops2.algebra.base.idempotents[0] = "4";
    loops2.algebra.generators[0].name = "w";
    loops2.bracket.algebra = loops2.algebra;
    CatalogBundle arrows = q1(Q1Case::C1a, q1_params(1));
    CatalogBundle sum = direct_sum_bundle(direct_sum_bundle(arrows, loops1), loops2);
    sum = fuse_bundle(sum, "1", "3");
    sum = fuse_bundle(sum, "2", "4");
    return sum;
}

inline QuiverSpec one_arrow_quiver(const Rat& gamma) {
    QuiverSpec q;
    q.vertices = {"1", "2"};
    q.arrows = {QuiverArrow{"t", "1", "2"}};
    if (gamma != 0) q.weights["t"] = gamma;
    return q;
}

inline QuiverSpec one_loop_quiver(const Rat& gamma) {
    QuiverSpec q;
    q.vertices = {"1"};
    q.arrows = {QuiverArrow{"a", "1", "1"}};
    if (gamma != 0) q.weights["a"] = gamma;
    return q;
}

inline QuiverSpec star_quiver(const Rat& gamma, bool swap_order) {
    QuiverSpec q;
    q.vertices = {"1", "2", "3"};
    q.arrows = {QuiverArrow{"a", "1", "2"}, QuiverArrow{"b", "1", "3"}};
    if (gamma != 0) {
        q.weights["a"] = gamma;
        q.weights["b"] = gamma;
    }
    if (swap_order) q.orderings["1"] = {"b", "a"};
    return q;
}

} // namespace suite_detail

// --- row 1: classification families -----------------------------------------------

inline std::pair<bool, std::string> row_families() {
    using namespace suite_detail;
    Tally t;
    std::vector<std::array<Rat, 3>> grid = {{0, Rat(1, 2), 0},
                                            {0, Rat(-1, 2), 0},
                                            {1, 0, Rat(-1, 4)},
                                            {-2, 0, Rat(1, 8)},
                                            {3, Rat(1, 2), 0}};
    for (const auto& [lambda, mu, nu] : grid) {
        CatalogBundle b = free1(lambda, mu, nu);
        t.require(check_cyclic_antisymmetry(b.bracket), "free1 antisymmetry");
        t.require(check_quasi_poisson(b.bracket), "free1 quasi-Poisson");
    }
    t.check(!check_quasi_poisson(free1_raw(0, Rat(3, 2), 0).bracket).passed(),
            "free1 perturbation must fail");

    // the two-vertex families; case 1a is exactly the two sign choices
    std::vector<std::pair<Q1Case, FamilyParams>> q1grid = {
        {Q1Case::C1a, q1_params(1)},
        {Q1Case::C1a, q1_params(-1)},
        {Q1Case::C1b, q1b_params(Rat(1, 2), 1, 0)},
        {Q1Case::C1b, q1b_params(Rat(1, 2), 0, 0)},
        {Q1Case::C1b, q1b_params(Rat(3, 2), 1, 2)},
        {Q1Case::C2, q1_params(1, 1)},
        {Q1Case::C2, q1_params(-1, 2)},
        {Q1Case::C2, q1_params(1, Rat(-1, 3))},
        {Q1Case::C3, q1_params(1, 1)},
        {Q1Case::C3, q1_params(-1, Rat(5, 2))},
        {Q1Case::C3, q1_params(-1, -1)},
    };
    for (const auto& [c, p] : q1grid) {
        CatalogBundle b = q1(c, p);
        t.require(check_cyclic_antisymmetry(b.bracket), "q1 antisymmetry");
        t.require(check_quasi_poisson(b.bracket), "q1 quasi-Poisson");
    }
    // perturbations: one constrained coefficient moved by +1 per case shape
    t.check(!check_quasi_poisson(q1_raw(0, 0, Rat(3, 2), Rat(-1, 2), 0, 0).bracket).passed(),
            "q1 1a perturbation must fail");
    t.check(!check_quasi_poisson(q1_raw(1, 0, Rat(3, 2), Rat(1, 2), 0, 0).bracket).passed(),
            "q1 1b perturbation must fail");
    {
        // case 2 with the cross coefficient moved off delta/2 by +1
        DoubleBracketSpec br = q1_raw(0, 0, Rat(1, 2), Rat(-1, 2), Rat(1), 0).bracket;
        Tensor2 delta = t2_of(mul(br.algebra, nc_gen(1), nc_gen(0)), nc_idem(0));
        br.values[{0, 1}] += delta;
        br.values[{1, 0}] += t2_scale(Rat(-1), flip(delta));
        t.check(!check_quasi_poisson(br).passed(), "q1 2 perturbation must fail");
    }

    for (const auto& [label, p] : free2_grid()) {
        CatalogBundle b = free2(std::stoi(label.substr(5)), p);
        t.require(check_cyclic_antisymmetry(b.bracket), "free2 " + label + " antisymmetry");
        t.require(check_quasi_poisson(b.bracket), "free2 " + label + " quasi-Poisson");
    }
    // perturbed alpha in the cross bracket of case 4
    t.check(!check_quasi_poisson(free2_raw(0, Rat(1, 2), 0, 0, Rat(1, 2), 0, Rat(3, 2), Rat(3, 2),
                                           Rat(-3, 2), Rat(-3, 2), 0, 0, 0)
                                     .bracket)
                 .passed(),
            "free2 perturbation must fail");
    return t.done();
}

// --- row 2: fusion preserves the quasi-Poisson property ----------------------------

inline std::pair<bool, std::string> row_fusion_qp() {
    using namespace suite_detail;
    Tally t;
    std::set<std::array<int, 3>> classes;

    auto sweep = [&](const CatalogBundle& in, const std::string& kept,
                     const std::string& absorbed, const std::string& label) {
        FusionContext ctx = fuse_algebra(in.algebra, kept, absorbed);
        FusedParts parts = fused_bracket_parts(ctx, in.bracket);
        t.require(check_quasi_poisson(parts.full), label + " fused quasi-Poisson");
        auto gens = core_generators(ctx.result);
        for (auto g : gens)
            for (auto h : gens)
                for (auto k : gens) {
                    std::array<int, 3> cls{static_cast<int>(ctx.types[g]),
                                           static_cast<int>(ctx.types[h]),
                                           static_cast<int>(ctx.types[k])};
                    std::sort(cls.begin(), cls.end());
                    classes.insert(cls);
                    t.check(kappa(parts, nc_gen(g), nc_gen(h), nc_gen(k)).is_zero(),
                            label + " kappa nonzero");
                }
        CatalogBundle out;
        out.algebra = ctx.result;
        out.bracket = parts.full;
        if (in.moment_map) out.moment_map = fused_moment_map(ctx, *in.moment_map);
        return out;
    };

    sweep(q1(Q1Case::C1a, q1_params(1)), "1", "2", "two-vertex 1a");
    sweep(q1(Q1Case::C1b, q1b_params(Rat(1, 2), 1, 0)), "1", "2", "two-vertex 1b");
    sweep(q1(Q1Case::C2, q1_params(1, 1)), "1", "2", "two-vertex 2");
    sweep(q1(Q1Case::C3, q1_params(-1, 2)), "1", "2", "two-vertex 3");

    // two one-arrow quivers glued in two steps
    {
        CatalogBundle qa, qb;
        qa.algebra.base.idempotents = {"1", "2"};
        qa.algebra.generators.push_back(GeneratorDecl{"t", 0, 1, GenKind::Plain, 0, {}});
        qa.bracket.algebra = qa.algebra;
        qa.bracket.set_pair(0, 0, Tensor2{});
        qb.algebra.base.idempotents = {"3", "4"};
        qb.algebra.generators.push_back(GeneratorDecl{"s", 1, 0, GenKind::Plain, 0, {}});
        qb.bracket.algebra = qb.algebra;
        qb.bracket.set_pair(0, 0, Tensor2{});
        CatalogBundle sum = direct_sum_bundle(qa, qb);
        CatalogBundle step1 = sweep(sum, "1", "3", "glued quivers step 1");
        sweep(step1, "2", "4", "glued quivers step 2");
    }

    // truncated polynomial chains
    {
        CatalogBundle b1 = nilpotent_free1(3, Rat(1, 2));
        b1.algebra.generators[0].name = "x1";
        b1.bracket.algebra = b1.algebra;
        CatalogBundle b2 = nilpotent_free1(3, Rat(1, 2));
        b2.algebra.base.idempotents[0] = "2";
        b2.algebra.generators[0].name = "x2";
        b2.bracket.algebra = b2.algebra;
        CatalogBundle b3 = nilpotent_free1(4, Rat(1, 2));
        b3.algebra.base.idempotents[0] = "3";
        b3.algebra.generators[0].name = "x3";
        b3.bracket.algebra = b3.algebra;
        CatalogBundle sum = direct_sum_bundle(direct_sum_bundle(b1, b2), b3);
        CatalogBundle step1 = sweep(sum, "1", "2", "truncated chain step 1");
        sweep(step1, "1", "3", "truncated chain step 2");
    }

    // the weighted quivers and the four-type bundle
    sweep(vdb_quiver(one_arrow_quiver(Rat(1))), "1", "2", "weighted one-arrow");
    sweep(vdb_quiver(star_quiver(Rat(1), false)), "1", "2", "weighted star");
    sweep(four_type_bundle(), "1", "2", "four-type");

    // a surface block pair (handle plus boundary)
    {
        CatalogBundle chain = surface_by_fusion(SurfaceSpec{1, 1, {}});
        t.require(check_quasi_poisson(chain.bracket), "surface chain quasi-Poisson");
    }

    t.check(classes.size() == 20, "expected all 20 type-combination classes, saw " +
                                      std::to_string(classes.size()));
    return t.done("all 20 type classes covered");
}

// --- row 3: the sixteen-case correction table --------------------------------------

inline std::pair<bool, std::string> row_fusion_table() {
    using namespace suite_detail;
    Tally t;
    CatalogBundle sum = four_type_bundle();
    FusionContext ctx = fuse_algebra(sum.algebra, "1", "2");
    std::set<std::pair<FusionType, FusionType>> seen;
    for (auto g : core_generators(ctx.result))
        for (auto h : core_generators(ctx.result)) {
            seen.insert({ctx.types[g], ctx.types[h]});
            t.check(fusion_bracket_term(ctx, g, h) == fusion_bracket_term_bivector(ctx, g, h),
                    "table/bivector mismatch on (" + ctx.result.generators[g].name + "," +
                        ctx.result.generators[h].name + ")");
        }
    t.check(seen.size() == 16, "expected 16 type pairs");
    return t.done("16 type pairs");
}

// --- row 4: fused moment maps --------------------------------------------------------

inline std::pair<bool, std::string> row_fused_moment() {
    using namespace suite_detail;
    Tally t;
    for (Rat gamma : {Rat(0), Rat(1)})
        for (int delta : {1, -1}) {
            CatalogBundle b = q1(Q1Case::C1b, q1b_params(Rat(delta, 2), gamma, 0, true));
            CatalogBundle fused = fuse_bundle(b, "1", "2");
            CheckReport rep =
                moment_map_numeric_check(fused.bracket, *fused.moment_map, DimVector{{2}}, 5, 42);
            t.require(rep, "glued two-generator moment map (gamma=" + rat_str(gamma) +
                               ", delta=" + std::to_string(delta) + ")");
        }
    for (auto [g, r] : {std::pair<int, int>{0, 1}, {1, 0}, {1, 1}, {2, 0}}) {
        CatalogBundle chain = surface_by_fusion(SurfaceSpec{g, r, {}});
        t.require(check_moment_map(chain.bracket, *chain.moment_map),
                  "surface moment map (g=" + std::to_string(g) + ",r=" + std::to_string(r) + ")");
    }
    return t.done();
}

// --- row 5: quiver brackets ----------------------------------------------------------

inline std::pair<bool, std::string> row_quiver() {
    using namespace suite_detail;
    Tally t;
    std::vector<std::pair<std::string, QuiverSpec>> specs = {
        {"one-arrow", one_arrow_quiver(Rat(1))},
        {"one-loop", one_loop_quiver(Rat(1))},
        {"star ab", star_quiver(Rat(1), false)},
        {"star ba", star_quiver(Rat(1), true)},
    };
    for (const auto& [label, q] : specs) {
        CatalogBundle direct = vdb_quiver(q);
        CatalogBundle fused = vdb_quiver_by_fusion(q);
        std::string diff = bracket_diff_by_name(direct.bracket, fused.bracket);
        t.check(diff.empty(), label + " bracket rebuild: " + diff);
        std::string mdiff = moment_map_diff_by_name(direct.algebra, *direct.moment_map,
                                                    fused.algebra, *fused.moment_map);
        t.check(mdiff.empty(), label + " moment rebuild: " + mdiff);
        t.require(check_quasi_poisson(direct.bracket), label + " quasi-Poisson");
    }
    // weight zero: symbolic moment check
    for (const auto& [label, q] :
         {std::pair<std::string, QuiverSpec>{"one-arrow", one_arrow_quiver(Rat(0))},
          {"one-loop", one_loop_quiver(Rat(0))},
          {"star", star_quiver(Rat(0), false)}}) {
        CatalogBundle direct = vdb_quiver(q);
        t.check(bracket_diff_by_name(direct.bracket, vdb_quiver_by_fusion(q).bracket).empty(),
                label + " group-like rebuild");
        t.require(check_moment_map(direct.bracket, *direct.moment_map),
                  label + " group-like symbolic moment map");
    }
    // weight one: numeric moment checks at alpha_s <= 2, 5 seeded trials
    t.require(moment_map_numeric_check(vdb_quiver(one_arrow_quiver(Rat(1))).bracket,
                                       *vdb_quiver(one_arrow_quiver(Rat(1))).moment_map,
                                       DimVector{{2, 2}}, 5, 42),
              "one-arrow numeric moment map");
    t.require(moment_map_numeric_check(vdb_quiver(one_loop_quiver(Rat(1))).bracket,
                                       *vdb_quiver(one_loop_quiver(Rat(1))).moment_map,
                                       DimVector{{2}}, 5, 42),
              "one-loop numeric moment map");
    t.require(moment_map_numeric_check(vdb_quiver(star_quiver(Rat(1), false)).bracket,
                                       *vdb_quiver(star_quiver(Rat(1), false)).moment_map,
                                       DimVector{{2, 1, 2}}, 5, 42),
              "star numeric moment map");
    return t.done();
}

// --- row 6: surface brackets -----------------------------------------------------------

inline std::pair<bool, std::string> row_surface() {
    using namespace suite_detail;
    Tally t;
    for (auto [g, r] : {std::pair<int, int>{0, 1}, {1, 0}, {1, 1}, {2, 0}}) {
        SurfaceSpec spec{g, r, {}};
        CatalogBundle direct = surface(spec);
        CatalogBundle fused = surface_by_fusion(spec);
        std::string label = "(g=" + std::to_string(g) + ",r=" + std::to_string(r) + ")";
        std::string diff = bracket_diff_by_name(direct.bracket, fused.bracket);
        t.check(diff.empty(), label + " bracket rebuild: " + diff);
        t.check(moment_map_diff_by_name(direct.algebra, *direct.moment_map, fused.algebra,
                                        *fused.moment_map)
                    .empty(),
                label + " moment rebuild");
        t.require(check_quasi_poisson(direct.bracket), label + " quasi-Poisson");
        t.require(check_moment_map(direct.bracket, *direct.moment_map),
                  label + " symbolic moment map");
    }
    CatalogBundle weighted = surface(SurfaceSpec{0, 1, {2}});
    t.require(check_quasi_poisson(weighted.bracket), "weighted quasi-Poisson");
    t.require(check_moment_map(weighted.bracket, *weighted.moment_map), "weighted moment map");
    return t.done();
}

// --- row 7: representation spaces ---------------------------------------------------------

inline std::pair<bool, std::string> row_rep_space() {
    using namespace suite_detail;
    Tally t;
    std::vector<std::pair<std::string, CatalogBundle>> fixtures;
    fixtures.emplace_back("truncated", nilpotent_free1(3, Rat(1, 2)));
    {
        FamilyParams p;
        p.mu = Rat(1, 2);
        p.alpha = Rat(1, 2);
        p.gamma = Rat(1);
        fixtures.emplace_back("two-generator case 2", free2(2, p));
    }
    fixtures.emplace_back("fused truncated pair", nilpotent_sum({3, 3}));
    for (const auto& [label, b] : fixtures) {
        t.require(jacobiator_check(b.bracket, DimVector{{2}}), label + " Jacobi at N=2");
        t.require(qp_rep_check(b.bracket, DimVector{{2}}), label + " quasi-Poisson at N=2");
        RepCheckOptions opts; // N=3: 200 seeded samples per generator triple
        t.require(jacobiator_check(b.bracket, DimVector{{3}}, opts), label + " Jacobi at N=3");
        t.require(qp_rep_check(b.bracket, DimVector{{3}}, opts), label + " quasi-Poisson at N=3");
    }
    return t.done();
}

// --- row 8: randomized property sweeps ------------------------------------------------------

inline std::pair<bool, std::string> row_properties() {
    using namespace suite_detail;
    Tally t;
    std::vector<DoubleBracketSpec> brackets;
    brackets.push_back(free1(0, Rat(1, 2), 0).bracket);
    brackets.push_back(q1(Q1Case::C1b, q1b_params(Rat(1, 2), 1, 0)).bracket);
    brackets.push_back(surface(SurfaceSpec{1, 0, {}}).bracket);

    // Leibniz rules, >= 500 cases across the three brackets
    for (const auto& br : brackets) {
        const AlgebraSpec& A = br.algebra;
        WordSampler sampler(A, 42);
        NCPoly one = nc_one(A);
        for (int i = 0; i < 170; ++i) {
            NCPoly a = sampler.word(3), b = sampler.word(2), c = sampler.word(2);
            Tensor2 outer_rule = outer_act(A, one, eval_double(br, a, b), c) +
                                 outer_act(A, b, eval_double(br, a, c), one);
            t.check(eval_double(br, a, mul(A, b, c)) == outer_rule, "outer derivation rule");
            Tensor2 inner_rule = inner_act(A, one, eval_double(br, b, a), c) +
                                 inner_act(A, b, eval_double(br, c, a), one);
            t.check(eval_double(br, mul(A, b, c), a) == inner_rule, "inner derivation rule");
        }
    }

    // cyclic antisymmetry on random word pairs
    for (const auto& br : brackets) {
        SampleOptions opts;
        opts.count = 170;
        t.require(check_cyclic_antisymmetry(br, opts), "cyclic antisymmetry");
    }

    // tau-conjugation invariance of triple brackets
    for (const auto& br : brackets) {
        const AlgebraSpec& A = br.algebra;
        WordSampler sampler(A, 7);
        for (int i = 0; i < 170; ++i) {
            NCPoly a = sampler.word(2), b = sampler.word(2), c = sampler.word(2);
            t.check(tau123(triple_bracket(br, b, c, a)) == triple_bracket(br, a, b, c),
                    "tau invariance");
        }
    }

    // normalization confluence on group-like words up to length 12
    {
        AlgebraSpec A = surface(SurfaceSpec{1, 0, {}}).algebra;
        std::mt19937_64 rng(42);
        for (int trial = 0; trial < 500; ++trial) {
            Word w;
            std::size_t len = 1 + rng() % 12;
            for (std::size_t i = 0; i < len; ++i)
                w.atoms.push_back(Atom{static_cast<std::uint32_t>(rng() % 2), (rng() % 2) != 0});
            NCPoly canonical = normalize(w, A);
            // cancel one random adjacent inverse pair at a time, then normalize
            Word v = w;
            while (true) {
                std::vector<std::size_t> sites;
                for (std::size_t i = 0; i + 1 < v.atoms.size(); ++i)
                    if (v.atoms[i].gen == v.atoms[i + 1].gen &&
                        v.atoms[i].inv != v.atoms[i + 1].inv)
                        sites.push_back(i);
                if (sites.empty()) break;
                std::size_t at = sites[rng() % sites.size()];
                v.atoms.erase(v.atoms.begin() + static_cast<std::ptrdiff_t>(at),
                              v.atoms.begin() + static_cast<std::ptrdiff_t>(at) + 2);
                if (v.atoms.empty()) break;
            }
            NCPoly via_random = v.atoms.empty() ? nc_idem(0) : normalize(v, A);
            t.check(via_random == canonical, "confluence");
        }
    }

    // biderivation and antisymmetry of the induced bracket
    {
        FamilyParams p;
        p.mu = Rat(1, 2);
        p.alpha = Rat(1, 2);
        p.gamma = Rat(1);
        CatalogBundle b = free2(2, p);
        InducedBracket ib(b.bracket, DimVector{{2}});
        std::mt19937_64 rng(42);
        auto rand_var = [&] {
            return VarId{static_cast<std::uint32_t>(rng() % 2),
                         static_cast<std::uint32_t>(rng() % 2),
                         static_cast<std::uint32_t>(rng() % 2)};
        };
        auto rand_poly = [&] {
            CoordPoly q = cp_var(rand_var());
            if (rng() % 2) q = cp_mul(q, cp_var(rand_var()));
            q += cp_scale(Rat(static_cast<long>(rng() % 5) - 2), cp_var(rand_var()));
            return q;
        };
        for (int i = 0; i < 500; ++i) {
            CoordPoly f = rand_poly(), g = rand_poly(), h = rand_poly();
            t.check(ib.bracket(cp_mul(f, g), h) ==
                        cp_mul(f, ib.bracket(g, h)) + cp_mul(ib.bracket(f, h), g),
                    "biderivation");
            t.check(ib.bracket(f, g) == cp_scale(Rat(-1), ib.bracket(g, f)),
                    "induced antisymmetry");
        }
    }
    return t.done();
}

inline std::vector<SuiteRow> acceptance_rows() {
    return {
        {"families", "classification families pass exactly; perturbations fail", row_families},
        {"fusion-qp", "fusion preserves the quasi-Poisson property; kappa vanishes",
         row_fusion_qp},
        {"fusion-table", "correction table equals the gauge-trace bivector on 16 type pairs",
         row_fusion_table},
        {"fused-moment", "fused moment maps verify exactly", row_fused_moment},
        {"quiver", "quiver brackets match their fusion rebuilds; moment maps verify", row_quiver},
        {"surface", "surface brackets match their fusion rebuilds; moment maps verify",
         row_surface},
        {"rep-space", "representation-space identities hold exactly", row_rep_space},
        {"properties", "randomized law sweeps, 500+ cases each", row_properties},
    };
}

/// Rows run concurrently (each works on its own immutable data) and results
/// are assembled in declaration order.
inline std::vector<RowResult> run_suite(const std::string& row_filter = {}) {
    std::vector<SuiteRow> selected;
    for (const auto& row : acceptance_rows())
        if (row_filter.empty() || row.name == row_filter) selected.push_back(row);

    std::vector<std::future<RowResult>> futures;
    for (const auto& row : selected)
        futures.push_back(std::async(std::launch::async, [row] {
            RowResult res;
            res.name = row.name;
            auto start = std::chrono::steady_clock::now();
            try {
                auto [ok, detail] = row.run();
                res.passed = ok;
                res.detail = detail;
            } catch (const std::exception& e) {
                res.passed = false;
                res.detail = std::string("exception: ") + e.what();
            }
            res.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return res;
        }));
    std::vector<RowResult> results;
    for (auto& f : futures) results.push_back(f.get());
    return results;
}

} // namespace qpb
