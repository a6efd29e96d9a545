#pragma once

// Constructors for every concrete bracket family the engine ships: the
// one-generator polynomial family and its nilpotent truncations, the
// two-vertex quiver families, the two-generator free families, quiver
// algebras with their ordered moment maps, surface-group algebras, and the
// iterated-fusion rebuilds of the latter two used as cross-checks.

#include "qpb/fusion.hpp"

#include <optional>

namespace qpb {

struct CatalogBundle {
    AlgebraSpec algebra;
    DoubleBracketSpec bracket;
    std::optional<MomentMapSpec> moment_map;
};

struct FamilyParams {
    std::optional<Rat> lambda, mu, nu, l, m, n, gamma, phi, alpha, alpha2, gamma0, gamma1;
    std::optional<int> delta;
    std::optional<std::string> case_tag;
    bool with_moment_map = false;
};

namespace detail {
inline Rat req(const std::optional<Rat>& v, const char* name) {
    if (!v) throw ParameterError(std::string("missing parameter: ") + name);
    return *v;
}
inline int req_delta(const std::optional<int>& v) {
    if (!v) throw ParameterError("missing parameter: delta");
    if (*v != 1 && *v != -1) throw ParameterError("delta must be +1 or -1");
    return *v;
}
inline Rat req_half(const std::optional<Rat>& v, const char* name) {
    Rat r = req(v, name);
    if (4 * r * r != 1) throw ParameterError(std::string(name) + " must be +1/2 or -1/2");
    return r;
}
inline Rat req_nonzero(const std::optional<Rat>& v, const char* name) {
    Rat r = req(v, name);
    if (r == 0) throw ParameterError(std::string(name) + " must be nonzero");
    return r;
}
} // namespace detail

// --- one generator -----------------------------------------------------------

/// Bracket table for <<t,t>> = lambda (t(x)1 - 1(x)t) + mu (t^2(x)1 - 1(x)t^2)
/// + nu (t^2(x)t - t(x)t^2), with no constraint checking.
inline CatalogBundle free1_raw(const Rat& lambda, const Rat& mu, const Rat& nu) {
    CatalogBundle out;
    out.algebra.base.idempotents = {"1"};
    out.algebra.generators.push_back(GeneratorDecl{"t", 0, 0, GenKind::Plain, 0, {}});
    validate_algebra(out.algebra);
    const AlgebraSpec& A = out.algebra;
    NCPoly one = nc_one(A);
    NCPoly t = nc_gen(0);
    NCPoly t2 = mul(A, t, t);
    Tensor2 v = t2_of(t, one, lambda) - t2_of(one, t, lambda);
    v += t2_of(t2, one, mu) - t2_of(one, t2, mu);
    v += t2_of(t2, t, nu) - t2_of(t, t2, nu);
    out.bracket.algebra = out.algebra;
    out.bracket.set_pair(0, 0, v);
    return out;
}

/// Quasi-Poisson family on one polynomial generator; requires
/// 4(mu^2 - lambda nu) = 1.
inline CatalogBundle free1(const Rat& lambda, const Rat& mu, const Rat& nu) {
    if (4 * (mu * mu - lambda * nu) != 1)
        throw ParameterError("free1 requires 4(mu^2 - lambda*nu) = 1");
    return free1_raw(lambda, mu, nu);
}

/// Same bracket on the truncated algebra k[x]/(x^k); requires k >= 3 and
/// mu = +-1/2.
inline CatalogBundle nilpotent_free1(int k, const Rat& mu) {
    if (k < 3) throw ParameterError("nilpotent_free1 requires k >= 3");
    if (4 * mu * mu != 1) throw ParameterError("nilpotent_free1 requires mu = +1/2 or -1/2");
    CatalogBundle out;
    out.algebra.base.idempotents = {"1"};
    out.algebra.generators.push_back(GeneratorDecl{"x", 0, 0, GenKind::Nilpotent, k, {}});
    validate_algebra(out.algebra);
    const AlgebraSpec& A = out.algebra;
    NCPoly one = nc_one(A);
    NCPoly x = nc_gen(0);
    NCPoly x2 = mul(A, x, x);
    out.bracket.algebra = out.algebra;
    out.bracket.set_pair(0, 0, t2_of(x2, one, mu) - t2_of(one, x2, mu));
    return out;
}

// --- the double one-arrow quiver ----------------------------------------------

enum class Q1Case { C1a, C1b, C2, C3 };

inline Q1Case q1_case_from_tag(const std::string& tag) {
    if (tag == "1a") return Q1Case::C1a;
    if (tag == "1b") return Q1Case::C1b;
    if (tag == "2") return Q1Case::C2;
    if (tag == "3") return Q1Case::C3;
    throw ParameterError("unknown q1 case: " + tag + " (expected 1a|1b|2|3)");
}

/// Value tables on k(double Q1), t: 1 -> 2, s: 2 -> 1, without constraint
/// checking. ts_coeffs = (gamma, phi, a_st_e1, a_e2_ts) in
/// <<t,s>> = gamma e2(x)e1 + phi st(x)ts + a_st_e1 st(x)e1 + a_e2_ts e2(x)ts,
/// tt_lambda scales tst(x)t - t(x)tst, ss_lambda scales sts(x)s - s(x)sts.
inline CatalogBundle q1_raw(const Rat& gamma, const Rat& phi, const Rat& a_st_e1,
                            const Rat& a_e2_ts, const Rat& tt_lambda, const Rat& ss_lambda) {
    CatalogBundle out;
    out.algebra.base.idempotents = {"1", "2"};
    out.algebra.generators.push_back(GeneratorDecl{"t", 0, 1, GenKind::Plain, 0, {}});
    out.algebra.generators.push_back(GeneratorDecl{"s", 1, 0, GenKind::Plain, 0, {}});
    validate_algebra(out.algebra);
    const AlgebraSpec& A = out.algebra;
    NCPoly e1 = nc_idem(0), e2 = nc_idem(1);
    NCPoly t = nc_gen(0), s = nc_gen(1);
    NCPoly st = mul(A, s, t), ts = mul(A, t, s);
    out.bracket.algebra = out.algebra;
    Tensor2 vts = t2_of(e2, e1, gamma) + t2_of(st, ts, phi) + t2_of(st, e1, a_st_e1) +
                  t2_of(e2, ts, a_e2_ts);
    out.bracket.set_pair(0, 1, vts);
    NCPoly tst = mul(A, ts, t), sts = mul(A, st, s);
    out.bracket.set_pair(0, 0, t2_of(tst, t, tt_lambda) - t2_of(t, tst, tt_lambda));
    out.bracket.set_pair(1, 1, t2_of(sts, s, ss_lambda) - t2_of(s, sts, ss_lambda));
    return out;
}

/// The four quasi-Poisson families on the double one-arrow quiver. Case 1b
/// with phi = 0 and alpha = delta/2 optionally carries the localized moment
/// map (formal inverses of delta*gamma e_s + cycle).
inline CatalogBundle q1(Q1Case c, const FamilyParams& p) {
    using detail::req;
    switch (c) {
    case Q1Case::C1a: {
        int d = detail::req_delta(p.delta);
        return q1_raw(0, 0, Rat(d, 2), Rat(-d, 2), 0, 0);
    }
    case Q1Case::C2: {
        int d = detail::req_delta(p.delta);
        Rat lam = detail::req_nonzero(p.lambda, "lambda");
        return q1_raw(0, 0, Rat(d, 2), Rat(-d, 2), lam, 0);
    }
    case Q1Case::C3: {
        int d = detail::req_delta(p.delta);
        Rat lam = detail::req_nonzero(p.lambda, "lambda");
        return q1_raw(0, 0, Rat(d, 2), Rat(-d, 2), 0, lam);
    }
    case Q1Case::C1b: {
        Rat alpha = req(p.alpha, "alpha");
        Rat gamma = p.gamma.value_or(Rat(0));
        Rat phi = p.phi.value_or(Rat(0));
        if (alpha * alpha != Rat(1, 4) + gamma * phi)
            throw ParameterError("q1 case 1b requires alpha^2 = 1/4 + gamma*phi");
        CatalogBundle out = q1_raw(gamma, phi, alpha, alpha, 0, 0);
        if (p.with_moment_map) {
            if (gamma != 0 && phi != 0)
                throw ParameterError("moment maps for case 1b exist when gamma*phi = 0");
            if (4 * alpha * alpha != 1)
                throw ParameterError("moment map for case 1b needs alpha = +1/2 or -1/2");
            int d = alpha > 0 ? 1 : -1;
            AlgebraSpec& A = out.algebra;
            MomentMapSpec mm;
            if (phi == 0) {
                // invert delta*gamma e_s + cycle; Phi = a^delta + b^{-delta}
                NCPoly a_pol = nc_idem(0, Rat(d) * gamma) + mul(A, nc_gen(0), nc_gen(1));
                NCPoly b_pol = nc_idem(1, Rat(d) * gamma) + mul(A, nc_gen(1), nc_gen(0));
                A.generators.push_back(
                    GeneratorDecl{"a_inv", 0, 0, GenKind::FormalInverse, 0, a_pol});
                A.generators.push_back(
                    GeneratorDecl{"b_inv", 1, 1, GenKind::FormalInverse, 0, b_pol});
                validate_algebra(A);
                mm.components[0] = d == 1 ? a_pol : nc_gen(2);
                mm.components[1] = d == 1 ? nc_gen(3) : b_pol;
            } else {
                // gamma = 0: invert the cycles, then delta*phi e_s + cycle^-1;
                // Phi = (delta phi e_1 + (ts)^-1)^{-delta} + (delta phi e_2 + (st)^-1)^{delta}
                A.generators.push_back(GeneratorDecl{"ts_inv", 0, 0, GenKind::FormalInverse, 0,
                                                     mul(A, nc_gen(0), nc_gen(1))});
                A.generators.push_back(GeneratorDecl{"st_inv", 1, 1, GenKind::FormalInverse, 0,
                                                     mul(A, nc_gen(1), nc_gen(0))});
                NCPoly a_pol = nc_idem(0, Rat(d) * phi) + nc_gen(2);
                NCPoly b_pol = nc_idem(1, Rat(d) * phi) + nc_gen(3);
                A.generators.push_back(
                    GeneratorDecl{"a_inv", 0, 0, GenKind::FormalInverse, 0, a_pol});
                A.generators.push_back(
                    GeneratorDecl{"b_inv", 1, 1, GenKind::FormalInverse, 0, b_pol});
                validate_algebra(A);
                mm.components[0] = d == 1 ? nc_gen(4) : a_pol;
                mm.components[1] = d == 1 ? b_pol : nc_gen(5);
            }
            out.bracket.algebra = A;
            out.moment_map = mm;
        }
        return out;
    }
    }
    throw ParameterError("unreachable q1 case");
}

// --- two free generators --------------------------------------------------------

namespace detail {
/// <<g,g>> of the one-generator family shape, on any algebra.
inline Tensor2 self_bracket(const AlgebraSpec& A, const NCPoly& t, const Rat& lambda,
                            const Rat& mu, const Rat& nu) {
    NCPoly one = nc_one(A);
    NCPoly t2 = mul(A, t, t);
    Tensor2 v = t2_of(t, one, lambda) - t2_of(one, t, lambda);
    v += t2_of(t2, one, mu) - t2_of(one, t2, mu);
    v += t2_of(t2, t, nu) - t2_of(t, t2, nu);
    return v;
}
} // namespace detail

/// Value tables on k<t,s> without constraint checking; the cross bracket is
/// c_st st(x)1 + c_ts 1(x)ts + c_t_s t(x)s + c_s_t s(x)t + c_tt t(x)t
/// + c_ss s(x)s + c_11 1(x)1.
inline CatalogBundle free2_raw(const Rat& tt_l, const Rat& tt_m, const Rat& tt_n, const Rat& ss_l,
                               const Rat& ss_m, const Rat& ss_n, const Rat& c_st, const Rat& c_ts,
                               const Rat& c_t_s, const Rat& c_s_t, const Rat& c_tt,
                               const Rat& c_ss, const Rat& c_11) {
    CatalogBundle out;
    out.algebra.base.idempotents = {"1"};
    out.algebra.generators.push_back(GeneratorDecl{"t", 0, 0, GenKind::Plain, 0, {}});
    out.algebra.generators.push_back(GeneratorDecl{"s", 0, 0, GenKind::Plain, 0, {}});
    validate_algebra(out.algebra);
    const AlgebraSpec& A = out.algebra;
    NCPoly one = nc_one(A);
    NCPoly t = nc_gen(0), s = nc_gen(1);
    out.bracket.algebra = out.algebra;
    out.bracket.set_pair(0, 0, detail::self_bracket(A, t, tt_l, tt_m, tt_n));
    out.bracket.set_pair(1, 1, detail::self_bracket(A, s, ss_l, ss_m, ss_n));
    Tensor2 v = t2_of(mul(A, s, t), one, c_st) + t2_of(one, mul(A, t, s), c_ts);
    v += t2_of(t, s, c_t_s) + t2_of(s, t, c_s_t);
    v += t2_of(t, t, c_tt) + t2_of(s, s, c_ss) + t2_of(one, one, c_11);
    out.bracket.set_pair(0, 1, v);
    return out;
}

/// The seven reduced quasi-Poisson families on two free generators. Case 2
/// optionally carries the localized moment map of the a b^-1 shape.
inline CatalogBundle free2(int c, const FamilyParams& p) {
    using detail::req;
    using detail::req_half;
    using detail::req_nonzero;
    switch (c) {
    case 1: {
        Rat mu = req_half(p.mu, "mu");
        Rat g0 = p.gamma0.value_or(Rat(0)), g1 = p.gamma1.value_or(Rat(0));
        Rat alpha = req(p.alpha, "alpha");
        if (alpha * alpha != Rat(1, 4) + g0 * g1)
            throw ParameterError("free2 case 1 requires alpha^2 = 1/4 + gamma0*gamma1");
        return free2_raw(0, mu, 0, 0, mu, 0, mu, -mu, alpha, alpha, g0, g1, 0);
    }
    case 2: {
        Rat mu = req_half(p.mu, "mu");
        Rat alpha = req_half(p.alpha, "alpha");
        Rat gamma = p.gamma.value_or(Rat(0));
        CatalogBundle out =
            free2_raw(0, mu, 0, 0, -mu, 0, alpha, alpha, -mu, mu, 0, 0, gamma);
        if (p.with_moment_map) {
            int d = alpha > 0 ? 1 : -1;
            AlgebraSpec& A = out.algebra;
            NCPoly a_pol = nc_idem(0, Rat(d) * gamma) + mul(A, nc_gen(0), nc_gen(1));
            NCPoly b_pol = nc_idem(0, Rat(d) * gamma) + mul(A, nc_gen(1), nc_gen(0));
            A.generators.push_back(GeneratorDecl{"a_inv", 0, 0, GenKind::FormalInverse, 0, a_pol});
            A.generators.push_back(GeneratorDecl{"b_inv", 0, 0, GenKind::FormalInverse, 0, b_pol});
            validate_algebra(A);
            out.bracket.algebra = A;
            NCPoly phi = mu > 0 ? (d == 1 ? mul(A, a_pol, nc_gen(3)) : mul(A, nc_gen(2), b_pol))
                                : (d == 1 ? mul(A, nc_gen(3), a_pol) : mul(A, b_pol, nc_gen(2)));
            MomentMapSpec mm;
            mm.components[0] = phi;
            out.moment_map = mm;
        }
        return out;
    }
    case 3: {
        Rat mu = req_half(p.mu, "mu");
        Rat m = req_half(p.m, "m");
        return free2_raw(0, mu, 0, 0, m, 0, mu, -mu, -mu, mu, 0, 0, 0);
    }
    case 4: {
        Rat mu = req_half(p.mu, "mu");
        Rat m = req_half(p.m, "m");
        Rat alpha = req_half(p.alpha, "alpha");
        return free2_raw(0, mu, 0, 0, m, 0, alpha, alpha, -alpha, -alpha, 0, 0, 0);
    }
    case 5: {
        Rat mu = req_half(p.mu, "mu");
        Rat alpha = req_half(p.alpha, "alpha");
        Rat n = req_nonzero(p.n, "n");
        return free2_raw(0, mu, 0, Rat(-1) / (4 * n), 0, n, alpha, alpha, -alpha, -alpha, 0, 0,
                         0);
    }
    case 6: {
        Rat mu = req_half(p.mu, "mu");
        Rat n = req_nonzero(p.n, "n");
        return free2_raw(0, mu, 0, Rat(-1) / (4 * n), 0, n, mu, -mu, -mu, mu, 0, 0, 0);
    }
    case 7: {
        Rat alpha = req_half(p.alpha, "alpha");
        Rat n = req_nonzero(p.n, "n");
        Rat nu = req_nonzero(p.nu, "nu");
        return free2_raw(Rat(-1) / (4 * nu), 0, nu, Rat(-1) / (4 * n), 0, n, alpha, alpha,
                         -alpha, -alpha, 0, 0, 0);
    }
    default:
        throw ParameterError("free2 case must be 1..7");
    }
}

// --- quivers ----------------------------------------------------------------------

struct QuiverArrow {
    std::string name, tail, head;
};

struct QuiverSpec {
    std::vector<std::string> vertices;
    std::vector<QuiverArrow> arrows;
    std::map<std::string, Rat> weights; // per original arrow, default 0
    // per-vertex total order on the doubled arrows with that tail; defaults
    // to declaration order (originals first, then stars)
    std::map<std::string, std::vector<std::string>> orderings;
};

namespace detail {

struct DArrow {
    std::string name;
    std::uint32_t tail = 0, head = 0;
    Rat gamma;
    int eps = +1;       // +1 original, -1 star
    std::size_t star = 0; // index of the opposite arrow
};

struct DoubledQuiver {
    std::vector<std::string> vertices;
    std::vector<DArrow> arrows;                 // originals then stars
    std::vector<std::vector<std::size_t>> Ts;   // ordered tails per vertex
    std::vector<std::pair<std::size_t, std::size_t>> pos; // arrow -> (vertex, rank in T)

    int o(std::uint32_t s, std::size_t x, std::size_t y) const {
        if (x == y) return 0;
        if (pos[x].first != s || pos[y].first != s) return 0;
        return pos[x].second < pos[y].second ? +1 : -1;
    }
};

inline DoubledQuiver double_quiver(const QuiverSpec& q) {
    DoubledQuiver dq;
    dq.vertices = q.vertices;
    auto vidx = [&](const std::string& v) -> std::uint32_t {
        for (std::uint32_t i = 0; i < q.vertices.size(); ++i)
            if (q.vertices[i] == v) return i;
        throw StructuralError("quiver arrow references unknown vertex: " + v);
    };
    std::size_t m = q.arrows.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = q.arrows[i];
        Rat gamma = 0;
        if (auto it = q.weights.find(a.name); it != q.weights.end()) gamma = it->second;
        dq.arrows.push_back(DArrow{a.name, vidx(a.tail), vidx(a.head), gamma, +1, m + i});
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = dq.arrows[i];
        dq.arrows.push_back(DArrow{a.name + "*", a.head, a.tail, a.gamma, -1, i});
    }
    dq.Ts.resize(q.vertices.size());
    for (std::size_t i = 0; i < dq.arrows.size(); ++i) dq.Ts[dq.arrows[i].tail].push_back(i);
    for (const auto& [v, names] : q.orderings) {
        std::uint32_t s = vidx(v);
        std::vector<std::size_t> order;
        for (const auto& nm : names) {
            bool found = false;
            for (std::size_t i = 0; i < dq.arrows.size(); ++i)
                if (dq.arrows[i].name == nm && dq.arrows[i].tail == s) {
                    order.push_back(i);
                    found = true;
                    break;
                }
            if (!found) throw StructuralError("ordering at " + v + " names a non-tail arrow: " + nm);
        }
        if (order.size() != dq.Ts[s].size()) {
            std::vector<std::size_t> sorted = order, want = dq.Ts[s];
            throw StructuralError("ordering at " + v + " must list the whole tail set");
        }
        dq.Ts[s] = order;
    }
    dq.pos.resize(dq.arrows.size());
    for (std::uint32_t s = 0; s < dq.Ts.size(); ++s)
        for (std::size_t k = 0; k < dq.Ts[s].size(); ++k) dq.pos[dq.Ts[s][k]] = {s, k};
    return dq;
}

} // namespace detail

/// The quasi-Hamiltonian structure on the (localized) path algebra of a
/// doubled quiver with per-arrow weights and per-vertex orderings. With all
/// weights zero the arrows become invertible symbols and the moment map is a
/// bare word; otherwise the moment factors with negative exponent are formal
/// inverses and the moment map verifies numerically.
inline CatalogBundle vdb_quiver(const QuiverSpec& q) {
    detail::DoubledQuiver dq = detail::double_quiver(q);
    bool group_like = true;
    for (const auto& a : dq.arrows)
        if (a.gamma != 0) group_like = false;

    CatalogBundle out;
    out.algebra.base.idempotents = q.vertices;
    for (const auto& a : dq.arrows)
        out.algebra.generators.push_back(GeneratorDecl{
            a.name, a.tail, a.head, group_like ? GenKind::Invertible : GenKind::Plain, 0, {}});
    validate_algebra(out.algebra);

    // moment factors m_b = gamma_b e_{t(b)} + b b*; formal inverses for the
    // negative-exponent factors when weights are present
    std::vector<NCPoly> factor(dq.arrows.size());
    std::vector<std::int64_t> inv_gen(dq.arrows.size(), -1);
    {
        AlgebraSpec& A = out.algebra;
        for (std::size_t i = 0; i < dq.arrows.size(); ++i) {
            const auto& b = dq.arrows[i];
            factor[i] = nc_idem(b.tail, b.gamma) +
                        mul(A, nc_gen(static_cast<std::uint32_t>(i)),
                            nc_gen(static_cast<std::uint32_t>(b.star)));
        }
        if (!group_like) {
            for (std::size_t i = 0; i < dq.arrows.size(); ++i) {
                if (dq.arrows[i].eps != -1) continue;
                inv_gen[i] = static_cast<std::int64_t>(A.generators.size());
                A.generators.push_back(GeneratorDecl{"inv_" + dq.arrows[i].name, dq.arrows[i].tail,
                                                     dq.arrows[i].tail, GenKind::FormalInverse, 0,
                                                     factor[i]});
            }
            validate_algebra(A);
        }
    }
    const AlgebraSpec& A = out.algebra;

    out.bracket.algebra = A;
    auto arrow_poly = [&](std::size_t i) { return nc_gen(static_cast<std::uint32_t>(i)); };
    for (std::size_t b = 0; b < dq.arrows.size(); ++b) {
        for (std::size_t c = 0; c < dq.arrows.size(); ++c) {
            const auto& db = dq.arrows[b];
            const auto& dc = dq.arrows[c];
            NCPoly pb = arrow_poly(b), pc = arrow_poly(c);
            Tensor2 v;
            if (c == b) {
                int o = dq.o(db.tail, b, db.star);
                if (o != 0) {
                    NCPoly b2 = mul(A, pb, pb);
                    v = t2_of(b2, nc_idem(db.tail), Rat(o, 2)) -
                        t2_of(nc_idem(db.head), b2, Rat(o, 2));
                }
            } else if (c == db.star && db.eps == +1) {
                v = t2_of(nc_idem(db.head), nc_idem(db.tail), db.gamma);
                v += t2_of(mul(A, pc, pb), nc_idem(db.tail), Rat(1, 2));
                v += t2_of(nc_idem(db.head), mul(A, pb, pc), Rat(1, 2));
                int o = dq.o(db.tail, b, db.star);
                if (o != 0) v += t2_of(pc, pb, Rat(o, 2)) - t2_of(pb, pc, Rat(o, 2));
            } else if (c == db.star) {
                continue; // filled by antisymmetry from the original arrow
            } else {
                std::size_t bs = db.star, cs = dc.star;
                int o1 = dq.o(db.tail, b, c);
                if (o1 != 0) v += t2_of(pb, pc, Rat(-o1, 2));
                int o2 = dq.o(db.head, bs, cs);
                if (o2 != 0) v += t2_of(pc, pb, Rat(-o2, 2));
                int o3 = dq.o(db.tail, b, cs);
                if (o3 != 0) v += t2_of(mul(A, pc, pb), nc_idem(db.tail), Rat(o3, 2));
                int o4 = dq.o(db.head, bs, c);
                if (o4 != 0) v += t2_of(nc_idem(db.head), mul(A, pb, pc), Rat(o4, 2));
            }
            out.bracket.set_pair(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c), v);
        }
    }

    MomentMapSpec mm;
    for (std::uint32_t s = 0; s < dq.Ts.size(); ++s) {
        NCPoly phi = nc_idem(s);
        for (std::size_t b : dq.Ts[s]) {
            if (dq.arrows[b].eps == +1) {
                phi = mul(A, phi, factor[b]);
            } else if (group_like) {
                NCPoly inv = mul(A, nc_word(Word::atom(static_cast<std::uint32_t>(dq.arrows[b].star), true)),
                                 nc_word(Word::atom(static_cast<std::uint32_t>(b), true)));
                phi = mul(A, phi, inv);
            } else {
                phi = mul(A, phi, nc_gen(static_cast<std::uint32_t>(inv_gen[b])));
            }
        }
        mm.components[s] = phi;
    }
    out.moment_map = mm;
    return out;
}

// --- surfaces -----------------------------------------------------------------------

struct SurfaceSpec {
    int genus = 0;
    int boundaries = 0;            // r: boundary components beyond the base one
    std::vector<int> weights;      // optional orders n_k, gamma_k^{n_k} = 1
};

namespace detail {
inline Tensor2 commuting_pair_bracket(const AlgebraSpec& A, const NCPoly& x, const NCPoly& y) {
    // (1/2)(y x (x) 1 + 1 (x) x y - x (x) y - y (x) x)
    NCPoly one = nc_one(A);
    Tensor2 v = t2_of(mul(A, y, x), one, Rat(1, 2)) + t2_of(one, mul(A, x, y), Rat(1, 2));
    v += t2_of(x, y, Rat(-1, 2)) + t2_of(y, x, Rat(-1, 2));
    return v;
}
inline Tensor2 half_square_bracket(const AlgebraSpec& A, const NCPoly& x, const Rat& c) {
    NCPoly one = nc_one(A);
    NCPoly x2 = mul(A, x, x);
    return t2_of(x2, one, c) - t2_of(one, x2, c);
}
} // namespace detail

/// The quasi-Hamiltonian structure on the group algebra of a surface group of
/// genus g with r extra boundary components (optionally of finite order).
inline CatalogBundle surface(const SurfaceSpec& spec) {
    if (spec.genus < 0 || spec.boundaries < 0)
        throw ParameterError("surface parameters must be nonnegative");
    if (spec.genus + spec.boundaries < 1)
        throw ParameterError("surface requires g + r >= 1");
    if (spec.weights.size() > static_cast<std::size_t>(spec.boundaries))
        throw ParameterError("more weights than boundary components");
    for (int w : spec.weights)
        if (w < 1) throw ParameterError("weights must be >= 1");

    CatalogBundle out;
    out.algebra.base.idempotents = {"1"};
    int g = spec.genus, r = spec.boundaries;
    for (int i = 1; i <= g; ++i) {
        out.algebra.generators.push_back(
            GeneratorDecl{"a" + std::to_string(i), 0, 0, GenKind::Invertible, 0, {}});
        out.algebra.generators.push_back(
            GeneratorDecl{"b" + std::to_string(i), 0, 0, GenKind::Invertible, 0, {}});
    }
    for (int k = 1; k <= r; ++k) {
        int order = k <= static_cast<int>(spec.weights.size()) ? spec.weights[k - 1] : 0;
        out.algebra.generators.push_back(
            GeneratorDecl{"c" + std::to_string(k), 0, 0, GenKind::Invertible, order, {}});
    }
    validate_algebra(out.algebra);
    const AlgebraSpec& A = out.algebra;

    auto alpha = [&](int i) { return nc_gen(static_cast<std::uint32_t>(2 * (i - 1))); };
    auto beta = [&](int i) { return nc_gen(static_cast<std::uint32_t>(2 * (i - 1) + 1)); };
    auto gam = [&](int k) { return nc_gen(static_cast<std::uint32_t>(2 * g + (k - 1))); };
    auto gen_idx = [&](const NCPoly& p) { return p.terms.begin()->first.atoms[0].gen; };

    out.bracket.algebra = A;
    std::vector<NCPoly> handle; // alpha_1, beta_1, alpha_2, ...
    for (int i = 1; i <= g; ++i) {
        handle.push_back(alpha(i));
        handle.push_back(beta(i));
        out.bracket.set_pair(gen_idx(alpha(i)), gen_idx(alpha(i)),
                             detail::half_square_bracket(A, alpha(i), Rat(1, 2)));
        out.bracket.set_pair(gen_idx(beta(i)), gen_idx(beta(i)),
                             detail::half_square_bracket(A, beta(i), Rat(-1, 2)));
        // (1/2)(ba (x) 1 + 1 (x) ab - a (x) b + b (x) a)
        NCPoly one = nc_one(A);
        Tensor2 v = t2_of(mul(A, beta(i), alpha(i)), one, Rat(1, 2)) +
                    t2_of(one, mul(A, alpha(i), beta(i)), Rat(1, 2));
        v += t2_of(alpha(i), beta(i), Rat(-1, 2)) + t2_of(beta(i), alpha(i), Rat(1, 2));
        out.bracket.set_pair(gen_idx(alpha(i)), gen_idx(beta(i)), v);
    }
    for (int i = 1; i <= g; ++i)
        for (int j = i + 1; j <= g; ++j)
            for (const NCPoly& x : {alpha(i), beta(i)})
                for (const NCPoly& y : {alpha(j), beta(j)})
                    out.bracket.set_pair(gen_idx(x), gen_idx(y),
                                         detail::commuting_pair_bracket(A, x, y));
    for (int i = 1; i <= g; ++i)
        for (int k = 1; k <= r; ++k)
            for (const NCPoly& x : {alpha(i), beta(i)})
                out.bracket.set_pair(gen_idx(x), gen_idx(gam(k)),
                                     detail::commuting_pair_bracket(A, x, gam(k)));
    for (int k = 1; k <= r; ++k) {
        out.bracket.set_pair(gen_idx(gam(k)), gen_idx(gam(k)),
                             detail::half_square_bracket(A, gam(k), Rat(1, 2)));
        for (int l = k + 1; l <= r; ++l)
            out.bracket.set_pair(gen_idx(gam(k)), gen_idx(gam(l)),
                                 detail::commuting_pair_bracket(A, gam(k), gam(l)));
    }

    NCPoly phi = nc_one(A);
    for (int i = 1; i <= g; ++i) {
        Word w;
        std::uint32_t ai = gen_idx(alpha(i)), bi = gen_idx(beta(i));
        w.atoms = {Atom{ai, false}, Atom{bi, false}, Atom{ai, true}, Atom{bi, true}};
        phi = mul(A, phi, normalize(w, A));
    }
    for (int k = 1; k <= r; ++k) phi = mul(A, phi, gam(k));
    MomentMapSpec mm;
    mm.components[0] = phi;
    out.moment_map = mm;
    return out;
}

// --- fusion pipelines ------------------------------------------------------------------

/// One fusion step applied to a whole bundle.
inline CatalogBundle fuse_bundle(const CatalogBundle& in, const std::string& kept,
                                 const std::string& absorbed) {
    FusionContext ctx = fuse_algebra(in.algebra, kept, absorbed);
    CatalogBundle out;
    out.algebra = ctx.result;
    out.bracket = fused_bracket(ctx, in.bracket);
    if (in.moment_map) out.moment_map = fused_moment_map(ctx, *in.moment_map);
    return out;
}

inline CatalogBundle direct_sum_bundle(const CatalogBundle& b1, const CatalogBundle& b2) {
    CatalogBundle out;
    out.bracket = direct_sum(b1.bracket, b2.bracket);
    out.algebra = out.bracket.algebra;
    if (b1.moment_map || b2.moment_map) {
        MomentMapSpec m1 = b1.moment_map.value_or(MomentMapSpec{});
        MomentMapSpec m2 = b2.moment_map.value_or(MomentMapSpec{});
        out.moment_map = direct_sum(m1, m2, b1.algebra);
    }
    return out;
}

/// Sum of truncated one-generator algebras with all units fused onto the
/// first: the free product k<x_1..x_M>/(x_m^{k_m}) with its pairwise brackets.
inline CatalogBundle nilpotent_sum(const std::vector<int>& orders) {
    if (orders.empty()) throw ParameterError("nilpotent_sum needs at least one order");
    auto block = [&](std::size_t m) {
        CatalogBundle b = nilpotent_free1(orders[m], Rat(1, 2));
        b.algebra.base.idempotents[0] = std::to_string(m + 1);
        b.algebra.generators[0].name = "x" + std::to_string(m + 1);
        b.bracket.algebra = b.algebra;
        return b;
    };
    CatalogBundle acc = block(0);
    for (std::size_t m = 1; m < orders.size(); ++m) acc = direct_sum_bundle(acc, block(m));
    for (std::size_t m = 1; m < orders.size(); ++m)
        acc = fuse_bundle(acc, "1", std::to_string(m + 1));
    return acc;
}

/// Rebuilds the quiver structure by fusing per-arrow two-vertex blocks in the
/// declared vertex/ordering sequence. Must agree with vdb_quiver exactly.
inline CatalogBundle vdb_quiver_by_fusion(const QuiverSpec& q) {
    detail::DoubledQuiver dq = detail::double_quiver(q);
    bool group_like = true;
    for (const auto& a : dq.arrows)
        if (a.gamma != 0) group_like = false;

    // label for the separation vertex attached to each doubled arrow: the
    // final vertex label when the arrow is minimal at its tail, otherwise a
    // scratch label
    auto sep_label = [&](std::size_t i) {
        auto [s, k] = dq.pos[i];
        return k == 0 ? q.vertices[s] : q.vertices[s] + "~" + std::to_string(k + 1);
    };

    std::optional<CatalogBundle> acc;
    std::size_t m = q.arrows.size();
    for (std::size_t i = 0; i < m; ++i) {
        const detail::DArrow& b = dq.arrows[i];
        CatalogBundle blk;
        blk.algebra.base.idempotents = {sep_label(i), sep_label(b.star)};
        blk.algebra.generators.push_back(GeneratorDecl{
            b.name, 0, 1, group_like ? GenKind::Invertible : GenKind::Plain, 0, {}});
        blk.algebra.generators.push_back(GeneratorDecl{
            b.name + "*", 1, 0, group_like ? GenKind::Invertible : GenKind::Plain, 0, {}});
        validate_algebra(blk.algebra);
        AlgebraSpec& A = blk.algebra;
        NCPoly pb = nc_gen(0), pbs = nc_gen(1);
        NCPoly m_b = nc_idem(0, b.gamma) + mul(A, pb, pbs);
        NCPoly m_bs = nc_idem(1, b.gamma) + mul(A, pbs, pb);
        NCPoly phi_star;
        if (group_like) {
            phi_star = mul(A, nc_word(Word::atom(0, true)), nc_word(Word::atom(1, true)));
        } else {
            A.generators.push_back(
                GeneratorDecl{"inv_" + b.name + "*", 1, 1, GenKind::FormalInverse, 0, m_bs});
            validate_algebra(A);
            phi_star = nc_gen(2);
        }
        blk.bracket.algebra = A;
        Tensor2 v = t2_of(nc_idem(1), nc_idem(0), b.gamma);
        v += t2_of(mul(A, pbs, pb), nc_idem(0), Rat(1, 2));
        v += t2_of(nc_idem(1), mul(A, pb, pbs), Rat(1, 2));
        blk.bracket.set_pair(0, 1, v);
        blk.bracket.set_pair(0, 0, Tensor2{});
        blk.bracket.set_pair(1, 1, Tensor2{});
        MomentMapSpec mm;
        mm.components[0] = m_b;
        mm.components[1] = phi_star;
        blk.moment_map = mm;
        acc = acc ? direct_sum_bundle(*acc, blk) : blk;
    }
    // vertices with no incident arrow survive as bare idempotent blocks
    for (std::uint32_t s = 0; s < dq.Ts.size(); ++s) {
        if (!dq.Ts[s].empty()) continue;
        CatalogBundle blk;
        blk.algebra.base.idempotents = {q.vertices[s]};
        blk.bracket.algebra = blk.algebra;
        MomentMapSpec mm;
        mm.components[0] = nc_idem(0);
        blk.moment_map = mm;
        acc = acc ? direct_sum_bundle(*acc, blk) : blk;
    }
    if (!acc) throw ParameterError("empty quiver");
    for (std::uint32_t s = 0; s < dq.Ts.size(); ++s)
        for (std::size_t k = 1; k < dq.Ts[s].size(); ++k)
            acc = fuse_bundle(*acc, q.vertices[s], sep_label(dq.Ts[s][k]));
    return *acc;
}

/// Rebuilds the surface structure by fusing g handle blocks and r boundary
/// blocks onto the first unit. Must agree with surface exactly.
inline CatalogBundle surface_by_fusion(const SurfaceSpec& spec) {
    if (spec.genus + spec.boundaries < 1) throw ParameterError("surface requires g + r >= 1");
    int g = spec.genus, r = spec.boundaries;
    std::optional<CatalogBundle> acc;
    for (int i = 1; i <= g; ++i) {
        CatalogBundle blk;
        blk.algebra.base.idempotents = {std::to_string(i)};
        blk.algebra.generators.push_back(
            GeneratorDecl{"a" + std::to_string(i), 0, 0, GenKind::Invertible, 0, {}});
        blk.algebra.generators.push_back(
            GeneratorDecl{"b" + std::to_string(i), 0, 0, GenKind::Invertible, 0, {}});
        validate_algebra(blk.algebra);
        const AlgebraSpec& A = blk.algebra;
        NCPoly a = nc_gen(0), b = nc_gen(1), one = nc_one(A);
        blk.bracket.algebra = A;
        blk.bracket.set_pair(0, 0, detail::half_square_bracket(A, a, Rat(1, 2)));
        blk.bracket.set_pair(1, 1, detail::half_square_bracket(A, b, Rat(-1, 2)));
        Tensor2 v = t2_of(mul(A, b, a), one, Rat(1, 2)) + t2_of(one, mul(A, a, b), Rat(1, 2));
        v += t2_of(a, b, Rat(-1, 2)) + t2_of(b, a, Rat(1, 2));
        blk.bracket.set_pair(0, 1, v);
        Word w;
        w.atoms = {Atom{0, false}, Atom{1, false}, Atom{0, true}, Atom{1, true}};
        MomentMapSpec mm;
        mm.components[0] = normalize(w, A);
        blk.moment_map = mm;
        acc = acc ? direct_sum_bundle(*acc, blk) : blk;
    }
    for (int k = 1; k <= r; ++k) {
        CatalogBundle blk;
        blk.algebra.base.idempotents = {std::to_string(g + k)};
        int order = k <= static_cast<int>(spec.weights.size()) ? spec.weights[k - 1] : 0;
        blk.algebra.generators.push_back(
            GeneratorDecl{"c" + std::to_string(k), 0, 0, GenKind::Invertible, order, {}});
        validate_algebra(blk.algebra);
        const AlgebraSpec& A = blk.algebra;
        blk.bracket.algebra = A;
        blk.bracket.set_pair(0, 0, detail::half_square_bracket(A, nc_gen(0), Rat(1, 2)));
        MomentMapSpec mm;
        mm.components[0] = nc_gen(0);
        blk.moment_map = mm;
        acc = acc ? direct_sum_bundle(*acc, blk) : blk;
    }
    for (int s = 2; s <= g + r; ++s) acc = fuse_bundle(*acc, "1", std::to_string(s));
    // the single remaining unit is relabelled to match surface()
    acc->algebra.base.idempotents[0] = "1";
    acc->bracket.algebra = acc->algebra;
    return *acc;
}

} // namespace qpb
