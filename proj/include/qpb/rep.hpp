#pragma once

// Representation spaces: coordinate rings with one variable per generator
// entry, the induced antisymmetric biderivation, the Jacobi-defect identity
// relating it to triple brackets, and exact pointwise evaluation (rational
// matrices, block-supported, with genuine inversion for localized symbols).

#include "qpb/bracket.hpp"

#include <random>

namespace qpb {

struct DimVector {
    std::vector<std::uint32_t> alpha; // one entry per idempotent, all >= 1

    std::uint32_t total() const {
        std::uint32_t n = 0;
        for (auto a : alpha) n += a;
        return n;
    }
    std::uint32_t offset(std::uint32_t s) const {
        std::uint32_t o = 0;
        for (std::uint32_t i = 0; i < s; ++i) o += alpha[i];
        return o;
    }
};

inline void validate_dim(const AlgebraSpec& A, const DimVector& dim) {
    if (dim.alpha.size() != A.num_idem())
        throw StructuralError("dimension vector must assign every idempotent");
    for (auto a : dim.alpha)
        if (a == 0) throw StructuralError("dimension entries must be >= 1");
}

// --- commutative coordinate polynomials ------------------------------------------

struct VarId {
    std::uint32_t gen = 0;
    std::uint32_t i = 0, j = 0;
    friend auto operator<=>(const VarId&, const VarId&) = default;
};

using Monomial = std::vector<std::pair<VarId, std::uint32_t>>; // sorted, exps >= 1

struct CoordPoly {
    std::map<Monomial, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    CoordPoly& operator+=(const CoordPoly& o) {
        for (const auto& [m, c] : o.terms) {
            auto it = terms.find(m);
            if (it == terms.end()) {
                terms.emplace(m, c);
            } else {
                it->second += c;
                if (it->second == 0) terms.erase(it);
            }
        }
        return *this;
    }
    friend bool operator==(const CoordPoly& a, const CoordPoly& b) { return a.terms == b.terms; }
};

inline CoordPoly cp_const(const Rat& c) {
    CoordPoly p;
    if (c != 0) p.terms.emplace(Monomial{}, c);
    return p;
}
inline CoordPoly cp_var(const VarId& v) {
    CoordPoly p;
    p.terms.emplace(Monomial{{v, 1}}, Rat(1));
    return p;
}
inline CoordPoly cp_scale(const Rat& c, const CoordPoly& p) {
    CoordPoly r;
    if (c == 0) return r;
    for (const auto& [m, k] : p.terms) r.terms.emplace(m, c * k);
    return r;
}
inline CoordPoly operator+(CoordPoly a, const CoordPoly& b) {
    a += b;
    return a;
}
inline CoordPoly operator-(const CoordPoly& a, const CoordPoly& b) {
    return a + cp_scale(Rat(-1), b);
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

inline CoordPoly cp_mul(const CoordPoly& a, const CoordPoly& b) {
    CoordPoly out;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Monomial m = mono_mul(ma, mb);
            Rat c = ca * cb;
            auto it = out.terms.find(m);
            if (it == out.terms.end()) {
                if (c != 0) out.terms.emplace(std::move(m), c);
            } else {
                it->second += c;
                if (it->second == 0) out.terms.erase(it);
            }
        }
    return out;
}

inline CoordPoly cp_derivative(const CoordPoly& p, const VarId& v) {
    CoordPoly out;
    for (const auto& [m, c] : p.terms) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!(m[i].first == v)) continue;
            Monomial d = m;
            Rat coeff = c * Rat(m[i].second);
            if (d[i].second == 1)
                d.erase(d.begin() + static_cast<std::ptrdiff_t>(i));
            else
                d[i].second -= 1;
            auto it = out.terms.find(d);
            if (it == out.terms.end()) {
                out.terms.emplace(std::move(d), coeff);
            } else {
                it->second += coeff;
                if (it->second == 0) out.terms.erase(it);
            }
            break;
        }
    }
    return out;
}

inline std::vector<VarId> cp_variables(const CoordPoly& p) {
    std::vector<VarId> vars;
    for (const auto& [m, c] : p.terms) {
        (void)c;
        for (const auto& [v, e] : m) {
            (void)e;
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
    }
    return vars;
}

// --- coordinate matrices -----------------------------------------------------------

using PolyMat = std::vector<std::vector<CoordPoly>>;

/// Shared word -> coordinate-matrix cache for one (algebra, dimension) pair.
class CoordContext {
public:
    CoordContext(const AlgebraSpec& A, DimVector dim) : A_(A), dim_(std::move(dim)) {
        validate_dim(A, dim_);
    }

    const AlgebraSpec& algebra() const { return A_; }
    const DimVector& dim() const { return dim_; }
    std::uint32_t total() const { return dim_.total(); }

    const PolyMat& matrix(const Word& w) {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(w, compute(w)).first->second;
    }

    PolyMat matrix(const NCPoly& p) {
        std::uint32_t N = total();
        PolyMat out(N, std::vector<CoordPoly>(N));
        for (const auto& [w, c] : p.terms) {
            const PolyMat& M = matrix(w);
            for (std::uint32_t i = 0; i < N; ++i)
                for (std::uint32_t j = 0; j < N; ++j)
                    if (!M[i][j].is_zero()) out[i][j] += cp_scale(c, M[i][j]);
        }
        return out;
    }

private:
    PolyMat compute(const Word& w) {
        std::uint32_t N = total();
        PolyMat out(N, std::vector<CoordPoly>(N));
        if (w.is_unit()) {
            std::uint32_t s = static_cast<std::uint32_t>(w.unit);
            for (std::uint32_t i = dim_.offset(s); i < dim_.offset(s) + dim_.alpha[s]; ++i)
                out[i][i] = cp_const(Rat(1));
            return out;
        }
        out = atom_matrix(w.atoms[0]);
        for (std::size_t k = 1; k < w.atoms.size(); ++k) {
            PolyMat next = atom_matrix(w.atoms[k]);
            PolyMat prod(N, std::vector<CoordPoly>(N));
            for (std::uint32_t i = 0; i < N; ++i)
                for (std::uint32_t l = 0; l < N; ++l) {
                    CoordPoly acc;
                    for (std::uint32_t m = 0; m < N; ++m)
                        if (!out[i][m].is_zero() && !next[m][l].is_zero())
                            acc += cp_mul(out[i][m], next[m][l]);
                    prod[i][l] = std::move(acc);
                }
            out = std::move(prod);
        }
        return out;
    }

    PolyMat atom_matrix(const Atom& a) {
        if (a.inv || A_.generators[a.gen].kind == GenKind::FormalInverse)
            throw DeferToNumericError("coordinate matrices are polynomial; " +
                                      A_.generators[a.gen].name +
                                      (a.inv ? "^-1" : "") + " requires pointwise evaluation");
        std::uint32_t N = total();
        PolyMat out(N, std::vector<CoordPoly>(N));
        std::uint32_t ts = A_.generators[a.gen].tail, hs = A_.generators[a.gen].head;
        for (std::uint32_t i = 0; i < dim_.alpha[ts]; ++i)
            for (std::uint32_t j = 0; j < dim_.alpha[hs]; ++j)
                out[dim_.offset(ts) + i][dim_.offset(hs) + j] =
                    cp_var(VarId{a.gen, dim_.offset(ts) + i, dim_.offset(hs) + j});
        return out;
    }

    const AlgebraSpec& A_;
    DimVector dim_;
    std::map<Word, PolyMat> cache_;
};

inline PolyMat coord_matrix(const AlgebraSpec& A, const NCPoly& p, const DimVector& dim) {
    CoordContext cc(A, dim);
    return cc.matrix(p);
}

inline CoordPoly trace_function(const AlgebraSpec& A, const NCPoly& p, const DimVector& dim) {
    PolyMat M = coord_matrix(A, p, dim);
    CoordPoly tr;
    for (std::size_t i = 0; i < M.size(); ++i) tr += M[i][i];
    return tr;
}

/// Entries of X(Phi) - X(q) for q = sum q_s e_s: the generators of the moment
/// ideal. Requires formal-inverse-free components.
inline std::vector<CoordPoly> moment_ideal_generators(const AlgebraSpec& A,
                                                      const MomentMapSpec& mm,
                                                      const DimVector& dim,
                                                      const std::vector<Rat>& q) {
    if (q.size() != A.num_idem()) throw StructuralError("q must assign every idempotent");
    NCPoly phi;
    for (const auto& [s, comp] : mm.components) phi += comp;
    NCPoly qs;
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) qs += nc_idem(s, q[s]);
    PolyMat M = coord_matrix(A, phi - qs, dim);
    std::vector<CoordPoly> out;
    for (auto& row : M)
        for (auto& e : row)
            if (!e.is_zero()) out.push_back(std::move(e));
    return out;
}

// --- induced biderivation ------------------------------------------------------------

/// The antisymmetric biderivation on the coordinate ring determined by
/// {a_ij, b_kl} = <<a,b>>'_kj <<a,b>>''_il, extended to polynomials by the
/// Leibniz rule in each slot.
class InducedBracket {
public:
    InducedBracket(const DoubleBracketSpec& br, DimVector dim)
        : br_(br), cc_(br.algebra, std::move(dim)) {}

    CoordContext& coords() { return cc_; }

    CoordPoly var_bracket(const VarId& a, const VarId& b) {
        auto key = std::make_pair(a, b);
        auto it = base_.find(key);
        if (it != base_.end()) return it->second;
        Tensor2 v = eval_double(br_, nc_gen(a.gen), nc_gen(b.gen));
        CoordPoly out;
        for (const auto& [k, c] : v.terms) {
            const PolyMat& M1 = cc_.matrix(k.first);
            const PolyMat& M2 = cc_.matrix(k.second);
            const CoordPoly& left = M1[b.i][a.j];
            const CoordPoly& right = M2[a.i][b.j];
            if (!left.is_zero() && !right.is_zero())
                out += cp_scale(c, cp_mul(left, right));
        }
        base_.emplace(key, out);
        return out;
    }

    CoordPoly bracket(const CoordPoly& f, const CoordPoly& g) {
        CoordPoly out;
        for (const VarId& v : cp_variables(f)) {
            CoordPoly df = cp_derivative(f, v);
            if (df.is_zero()) continue;
            for (const VarId& w : cp_variables(g)) {
                CoordPoly dg = cp_derivative(g, w);
                if (dg.is_zero()) continue;
                CoordPoly vw = var_bracket(v, w);
                if (vw.is_zero()) continue;
                out += cp_mul(cp_mul(df, dg), vw);
            }
        }
        return out;
    }

private:
    const DoubleBracketSpec& br_;
    CoordContext cc_;
    std::map<std::pair<VarId, VarId>, CoordPoly> base_;
};

/// x1_{p1} x2_{p2} x3_{p3} summed over the terms of a triple tensor, with
/// index pairs p1, p2, p3.
inline CoordPoly contract3(CoordContext& cc, const Tensor3& t,
                           std::pair<std::uint32_t, std::uint32_t> p1,
                           std::pair<std::uint32_t, std::uint32_t> p2,
                           std::pair<std::uint32_t, std::uint32_t> p3) {
    CoordPoly out;
    for (const auto& [k, c] : t.terms) {
        const CoordPoly& a = cc.matrix(k[0])[p1.first][p1.second];
        if (a.is_zero()) continue;
        const CoordPoly& b = cc.matrix(k[1])[p2.first][p2.second];
        if (b.is_zero()) continue;
        const CoordPoly& d = cc.matrix(k[2])[p3.first][p3.second];
        if (d.is_zero()) continue;
        out += cp_scale(c, cp_mul(cp_mul(a, b), d));
    }
    return out;
}

struct RepCheckOptions {
    std::uint32_t exhaustive_max_total = 2; // full index iteration up to this N
    std::size_t sample_count = 200;         // sampled tuples above it
    std::uint64_t seed = 42;
};

namespace detail {

template <typename PerTuple>
inline void for_index_tuples(std::uint32_t N, const RepCheckOptions& opts, PerTuple&& fn) {
    if (N <= opts.exhaustive_max_total) {
        for (std::uint32_t i = 0; i < N; ++i)
            for (std::uint32_t j = 0; j < N; ++j)
                for (std::uint32_t k = 0; k < N; ++k)
                    for (std::uint32_t l = 0; l < N; ++l)
                        for (std::uint32_t u = 0; u < N; ++u)
                            for (std::uint32_t v = 0; v < N; ++v) fn(i, j, k, l, u, v);
        return;
    }
    std::mt19937_64 rng(opts.seed);
    for (std::size_t n = 0; n < opts.sample_count; ++n) {
        auto r = [&] { return static_cast<std::uint32_t>(rng() % N); };
        std::uint32_t i = r(), j = r(), k = r(), l = r(), u = r(), v = r();
        fn(i, j, k, l, u, v);
    }
}

inline CoordPoly jacobi_lhs(InducedBracket& ib, const CoordPoly& f, const CoordPoly& g,
                            const CoordPoly& h) {
    CoordPoly out = ib.bracket(f, ib.bracket(g, h));
    out += ib.bracket(g, ib.bracket(h, f));
    out += ib.bracket(h, ib.bracket(f, g));
    return out;
}

template <typename TripleFn>
inline CheckReport rep_identity_check(const DoubleBracketSpec& br, const DimVector& dim,
                                      const RepCheckOptions& opts, TripleFn&& make_triple,
                                      const char* what) {
    CheckReport rep;
    InducedBracket ib(br, dim);
    CoordContext& cc = ib.coords();
    std::uint32_t N = cc.total();
    auto gens = core_generators(br.algebra);
    for (auto a : gens)
        for (auto b : gens)
            for (auto c : gens) {
                Tensor3 t_abc = make_triple(a, b, c);
                Tensor3 t_acb = make_triple(a, c, b);
                for_index_tuples(N, opts, [&](std::uint32_t i, std::uint32_t j, std::uint32_t k,
                                              std::uint32_t l, std::uint32_t u, std::uint32_t v) {
                    CoordPoly lhs =
                        jacobi_lhs(ib, cp_var(VarId{a, i, j}), cp_var(VarId{b, k, l}),
                                   cp_var(VarId{c, u, v}));
                    CoordPoly rhs = contract3(cc, t_abc, {u, j}, {i, l}, {k, v}) -
                                    contract3(cc, t_acb, {k, j}, {i, v}, {u, l});
                    ++rep.checked;
                    if (!(lhs == rhs))
                        rep.note(std::string(what) + " (" + br.algebra.generators[a].name + "_" +
                                     std::to_string(i) + std::to_string(j) + ", " +
                                     br.algebra.generators[b].name + "_" + std::to_string(k) +
                                     std::to_string(l) + ", " + br.algebra.generators[c].name +
                                     "_" + std::to_string(u) + std::to_string(v) + ")",
                                 "nonzero polynomial residual");
                });
            }
    return rep;
}

} // namespace detail

/// Jacobi identity against the actual triple brackets:
/// Jac(a_ij, b_kl, c_uv) = <<a,b,c>>_{uj,il,kv} - <<a,c,b>>_{kj,iv,ul}.
inline CheckReport jacobiator_check(const DoubleBracketSpec& br, const DimVector& dim,
                                    const RepCheckOptions& opts = {}) {
    return detail::rep_identity_check(
        br, dim, opts,
        [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
            return triple_bracket(br, nc_gen(a), nc_gen(b), nc_gen(c));
        },
        "jacobi");
}

/// Quasi-Poisson identity: the same contraction with the triple brackets
/// replaced by the idempotent-sum anomaly.
inline CheckReport qp_rep_check(const DoubleBracketSpec& br, const DimVector& dim,
                                const RepCheckOptions& opts = {}) {
    return detail::rep_identity_check(
        br, dim, opts,
        [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
            return qp_anomaly(br.algebra, nc_gen(a), nc_gen(b), nc_gen(c));
        },
        "qp");
}

/// The action of the elementary matrix eta = E_pq (global indices) through
/// eta_R(X(a)) = [X(a), eta], extended by the Leibniz rule.
inline CoordPoly eta_action(std::uint32_t p, std::uint32_t q, const CoordPoly& f) {
    CoordPoly out;
    for (const VarId& v : cp_variables(f)) {
        CoordPoly df = cp_derivative(f, v);
        if (df.is_zero()) continue;
        CoordPoly dv;
        if (v.j == q) dv += cp_var(VarId{v.gen, v.i, p});
        if (v.i == p) dv = dv - cp_var(VarId{v.gen, q, v.j});
        if (dv.is_zero()) continue;
        out += cp_mul(df, dv);
    }
    return out;
}

// --- exact rational points -----------------------------------------------------------

using QMat = std::vector<std::vector<Rat>>;

inline QMat qmat_zero(std::uint32_t n) { return QMat(n, std::vector<Rat>(n, Rat(0))); }

inline QMat qmat_mul(const QMat& a, const QMat& b) {
    std::uint32_t n = static_cast<std::uint32_t>(a.size());
    QMat out = qmat_zero(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::uint32_t j = 0; j < n; ++j)
                if (b[k][j] != 0) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

/// Exact Gauss-Jordan inverse; nullopt when singular.
inline std::optional<QMat> qmat_inverse(QMat m) {
    std::uint32_t n = static_cast<std::uint32_t>(m.size());
    QMat inv = qmat_zero(n);
    for (std::uint32_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::uint32_t col = 0; col < n; ++col) {
        std::uint32_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rat d = m[col][col];
        for (std::uint32_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::uint32_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (std::uint32_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/// A representation point: block-supported exact matrices per generator, with
/// every required inverse certified to exist. Deterministic per seed.
struct RepPoint {
    DimVector dim;
    std::vector<QMat> gen_mat;       // core generators; formal slots left empty
    std::vector<QMat> inv_cache;     // per generator: inverse block-embedded
    std::uint64_t seed = 0;
};

namespace detail {

/// Extracts the (rows of block r, cols of block c) submatrix, inverts it, and
/// re-embeds it at (block c, block r). Nullopt when singular.
inline std::optional<QMat> block_inverse(const DimVector& dim, const QMat& m, std::uint32_t r,
                                         std::uint32_t c) {
    if (dim.alpha[r] != dim.alpha[c]) return std::nullopt;
    std::uint32_t k = dim.alpha[r], ro = dim.offset(r), co = dim.offset(c);
    QMat blk(k, std::vector<Rat>(k));
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j) blk[i][j] = m[ro + i][co + j];
    auto inv = qmat_inverse(blk);
    if (!inv) return std::nullopt;
    QMat out = qmat_zero(dim.total());
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j) out[co + i][ro + j] = (*inv)[i][j];
    return out;
}

} // namespace detail

inline QMat eval_poly_matrix(const AlgebraSpec& A, const RepPoint& pt, const NCPoly& p); // fwd

inline QMat eval_word_matrix(const AlgebraSpec& A, const RepPoint& pt, const Word& w) {
    std::uint32_t N = pt.dim.total();
    if (w.is_unit()) {
        QMat out = qmat_zero(N);
        std::uint32_t s = static_cast<std::uint32_t>(w.unit);
        for (std::uint32_t i = 0; i < pt.dim.alpha[s]; ++i)
            out[pt.dim.offset(s) + i][pt.dim.offset(s) + i] = 1;
        return out;
    }
    QMat out;
    bool first = true;
    for (const Atom& a : w.atoms) {
        const QMat& m = a.inv || A.generators[a.gen].kind == GenKind::FormalInverse
                            ? pt.inv_cache[a.gen]
                            : pt.gen_mat[a.gen];
        if (m.empty()) throw StructuralError("representation point lacks a required inverse");
        out = first ? m : qmat_mul(out, m);
        first = false;
    }
    return out;
}

inline QMat eval_poly_matrix(const AlgebraSpec& A, const RepPoint& pt, const NCPoly& p) {
    std::uint32_t N = pt.dim.total();
    QMat out = qmat_zero(N);
    for (const auto& [w, c] : p.terms) {
        QMat m = eval_word_matrix(A, pt, w);
        for (std::uint32_t i = 0; i < N; ++i)
            for (std::uint32_t j = 0; j < N; ++j)
                if (m[i][j] != 0) out[i][j] += c * m[i][j];
    }
    return out;
}

/// Samples block-supported small-integer matrices, resampling until every
/// invertible generator and every formal-inverse defining element evaluates
/// invertibly. Deterministic per seed.
inline RepPoint random_rep_point(const AlgebraSpec& A, const DimVector& dim, std::uint64_t seed) {
    validate_dim(A, dim);
    for (std::uint32_t g = 0; g < A.num_gen(); ++g) {
        const auto& d = A.generators[g];
        bool needs_inverse = d.kind == GenKind::Invertible || d.kind == GenKind::FormalInverse;
        if (needs_inverse && dim.alpha[d.tail] != dim.alpha[d.head])
            throw StructuralError("no invertible matrix exists for " + d.name +
                                  " with unequal block sizes");
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 256; ++attempt) {
        RepPoint pt;
        pt.dim = dim;
        pt.seed = seed;
        pt.gen_mat.assign(A.num_gen(), QMat{});
        pt.inv_cache.assign(A.num_gen(), QMat{});
        std::uint32_t N = dim.total();
        bool ok = true;
        for (std::uint32_t g = 0; g < A.num_gen() && ok; ++g) {
            const auto& d = A.generators[g];
            if (d.kind == GenKind::FormalInverse) continue;
            QMat m = qmat_zero(N);
            std::uint32_t to = dim.offset(d.tail), ho = dim.offset(d.head);
            std::uint32_t ta = dim.alpha[d.tail], ha = dim.alpha[d.head];
            auto small = [&] { return Rat(static_cast<long>(rng() % 7) - 3); };
            if (d.kind == GenKind::Nilpotent) {
                // X^k = 0: allow entries only across the k levels of the block
                auto level = [&](std::uint32_t i) {
                    return (i * static_cast<std::uint32_t>(d.order)) / ta;
                };
                for (std::uint32_t i = 0; i < ta; ++i)
                    for (std::uint32_t j = 0; j < ha; ++j)
                        if (level(j) > level(i)) m[to + i][ho + j] = small();
            } else if (d.kind == GenKind::Invertible && d.order > 0) {
                // X^n = 1: conjugate a diagonal of rational n-th roots of
                // unity (+1 always, -1 when n is even) by a random basis
                QMat diag = qmat_zero(ta), basis;
                for (std::uint32_t i = 0; i < ta; ++i)
                    diag[i][i] = (d.order % 2 == 0 && rng() % 2) ? Rat(-1) : Rat(1);
                std::optional<QMat> basis_inv;
                do {
                    basis.assign(ta, std::vector<Rat>(ta, Rat(0)));
                    for (auto& row : basis)
                        for (auto& e : row) e = small();
                    basis_inv = qmat_inverse(basis);
                } while (!basis_inv);
                QMat blk = qmat_mul(qmat_mul(basis, diag), *basis_inv);
                for (std::uint32_t i = 0; i < ta; ++i)
                    for (std::uint32_t j = 0; j < ta; ++j) m[to + i][ho + j] = blk[i][j];
            } else {
                for (std::uint32_t i = 0; i < ta; ++i)
                    for (std::uint32_t j = 0; j < ha; ++j) m[to + i][ho + j] = small();
            }
            pt.gen_mat[g] = std::move(m);
        }
        for (std::uint32_t g = 0; g < A.num_gen() && ok; ++g) {
            const auto& d = A.generators[g];
            if (d.kind == GenKind::Invertible) {
                auto inv = detail::block_inverse(dim, pt.gen_mat[g], d.tail, d.head);
                if (!inv) {
                    ok = false;
                    break;
                }
                pt.inv_cache[g] = std::move(*inv);
            } else if (d.kind == GenKind::FormalInverse) {
                // defining elements may reference earlier formal inverses,
                // whose caches are already filled
                QMat dm = eval_poly_matrix(A, pt, d.defining);
                auto inv = detail::block_inverse(dim, dm, d.tail, d.tail);
                if (!inv) {
                    ok = false;
                    break;
                }
                pt.inv_cache[g] = std::move(*inv);
            }
        }
        if (ok) return pt;
    }
    throw StructuralError("could not sample an invertible representation point");
}

/// Full multi-index arrays of a tensor at a point: N^4 (resp. N^6) rationals
/// in row-major (i,j,k,l[,u,v]) order.
inline std::vector<Rat> eval_tensor_at_point(const AlgebraSpec& A, const RepPoint& pt,
                                             const Tensor2& t) {
    std::uint32_t N = pt.dim.total();
    std::vector<Rat> out(static_cast<std::size_t>(N) * N * N * N, Rat(0));
    for (const auto& [k, c] : t.terms) {
        QMat m1 = eval_word_matrix(A, pt, k.first);
        QMat m2 = eval_word_matrix(A, pt, k.second);
        std::size_t idx = 0;
        for (std::uint32_t i = 0; i < N; ++i)
            for (std::uint32_t j = 0; j < N; ++j)
                for (std::uint32_t kk = 0; kk < N; ++kk)
                    for (std::uint32_t l = 0; l < N; ++l, ++idx)
                        if (m1[i][j] != 0 && m2[kk][l] != 0) out[idx] += c * m1[i][j] * m2[kk][l];
    }
    return out;
}

inline std::vector<Rat> eval_tensor_at_point(const AlgebraSpec& A, const RepPoint& pt,
                                             const Tensor3& t) {
    std::uint32_t N = pt.dim.total();
    std::size_t n6 = 1;
    for (int k = 0; k < 6; ++k) n6 *= N;
    std::vector<Rat> out(n6, Rat(0));
    for (const auto& [k, c] : t.terms) {
        QMat m1 = eval_word_matrix(A, pt, k[0]);
        QMat m2 = eval_word_matrix(A, pt, k[1]);
        QMat m3 = eval_word_matrix(A, pt, k[2]);
        std::size_t idx = 0;
        for (std::uint32_t i = 0; i < N; ++i)
            for (std::uint32_t j = 0; j < N; ++j)
                for (std::uint32_t p = 0; p < N; ++p)
                    for (std::uint32_t q = 0; q < N; ++q)
                        for (std::uint32_t u = 0; u < N; ++u)
                            for (std::uint32_t v = 0; v < N; ++v, ++idx)
                                if (m1[i][j] != 0 && m2[p][q] != 0 && m3[u][v] != 0)
                                    out[idx] += c * m1[i][j] * m2[p][q] * m3[u][v];
    }
    return out;
}

/// Pointwise verification of the moment-map condition: both sides evaluated
/// as exact arrays at seeded random points, one comparison per component and
/// generator per trial.
inline CheckReport moment_map_numeric_check(const DoubleBracketSpec& br, const MomentMapSpec& mm,
                                            const DimVector& dim, std::size_t trials,
                                            std::uint64_t seed) {
    const AlgebraSpec& A = br.algebra;
    validate_moment_map(A, mm);
    CheckReport rep;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        RepPoint pt = random_rep_point(A, dim, seed + trial);
        for (const auto& [s, phi] : mm.components) {
            for (auto g : core_generators(A)) {
                Tensor2 lhs = eval_double(br, phi, nc_gen(g));
                Tensor2 rhs = moment_rhs(A, s, phi, nc_gen(g));
                ++rep.checked;
                if (!(eval_tensor_at_point(A, pt, lhs) == eval_tensor_at_point(A, pt, rhs)))
                    rep.note("trial " + std::to_string(trial) + " (Phi_" +
                                 A.base.idempotents[s] + ", " + A.generators[g].name + ")",
                             "arrays differ at seed " + std::to_string(seed + trial));
            }
        }
    }
    return rep;
}

} // namespace qpb
