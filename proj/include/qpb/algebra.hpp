#pragma once

// Path algebras with orthogonal idempotents, and their elements as sparse
// rational combinations of normalized words. Words multiply by concatenation
// subject to e_s e_t = delta_st e_s, inverse cancellation for invertible
// generators (optionally of finite multiplicative order), and truncation
// x^k = 0 for nilpotent loop generators. Formal inverses of composite
// elements are opaque atoms: they never rewrite against their defining
// element.

#include "qpb/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpb {

struct Atom {
    std::uint32_t gen = 0;
    bool inv = false; // only meaningful for invertible generators

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A monomial: either the empty path at an idempotent (unit >= 0) or a
/// nonempty sequence of composable atoms.
struct Word {
    std::int32_t unit = -1;
    std::vector<Atom> atoms;

    bool is_unit() const { return unit >= 0; }
    static Word idem(std::uint32_t s) {
        Word w;
        w.unit = static_cast<std::int32_t>(s);
        return w;
    }
    static Word atom(std::uint32_t g, bool inverted = false) {
        Word w;
        w.atoms.push_back(Atom{g, inverted});
        return w;
    }

    // canonical key order: length, then unit label, then generator index
    // sequence, then sign sequence
    friend bool operator<(const Word& a, const Word& b) {
        if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size();
        if (a.unit != b.unit) return a.unit < b.unit;
        for (std::size_t i = 0; i < a.atoms.size(); ++i)
            if (a.atoms[i].gen != b.atoms[i].gen) return a.atoms[i].gen < b.atoms[i].gen;
        for (std::size_t i = 0; i < a.atoms.size(); ++i)
            if (a.atoms[i].inv != b.atoms[i].inv) return a.atoms[i].inv < b.atoms[i].inv;
        return false;
    }
    friend bool operator==(const Word& a, const Word& b) {
        return a.unit == b.unit && a.atoms == b.atoms;
    }
};

/// Element of the algebra: finite map from normalized words to nonzero
/// rational coefficients. Zero coefficients are purged on every operation.
struct NCPoly {
    std::map<Word, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    NCPoly& operator+=(const NCPoly& o) {
        for (const auto& [w, c] : o.terms) {
            auto it = terms.find(w);
            if (it == terms.end()) {
                terms.emplace(w, c);
            } else {
                it->second += c;
                if (it->second == 0) terms.erase(it);
            }
        }
        return *this;
    }
    friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.terms == b.terms; }
};

enum class GenKind { Plain, Invertible, Nilpotent, FormalInverse };

struct GeneratorDecl {
    std::string name;
    std::uint32_t tail = 0;
    std::uint32_t head = 0;
    GenKind kind = GenKind::Plain;
    // Nilpotent: truncation order k >= 2. Invertible: finite multiplicative
    // order (g^order = e), or 0 when the generator is free of relations.
    int order = 0;
    // FormalInverse only: the element this atom inverts, d = e_s d e_s.
    NCPoly defining;
};

struct BaseAlgebra {
    std::vector<std::string> idempotents;
};

struct AlgebraSpec {
    BaseAlgebra base;
    std::vector<GeneratorDecl> generators;

    std::size_t num_idem() const { return base.idempotents.size(); }
    std::size_t num_gen() const { return generators.size(); }

    std::optional<std::uint32_t> find_idem(const std::string& label) const {
        for (std::uint32_t s = 0; s < base.idempotents.size(); ++s)
            if (base.idempotents[s] == label) return s;
        return std::nullopt;
    }
    std::uint32_t idem_index(const std::string& label) const {
        if (auto s = find_idem(label)) return *s;
        throw StructuralError("unknown idempotent label: " + label);
    }
    std::optional<std::uint32_t> find_gen(const std::string& name) const {
        for (std::uint32_t g = 0; g < generators.size(); ++g)
            if (generators[g].name == name) return g;
        return std::nullopt;
    }
    std::uint32_t gen_index(const std::string& name) const {
        if (auto g = find_gen(name)) return *g;
        throw StructuralError("unknown generator: " + name);
    }

    std::uint32_t atom_tail(const Atom& a) const {
        const auto& d = generators.at(a.gen);
        return a.inv ? d.head : d.tail;
    }
    std::uint32_t atom_head(const Atom& a) const {
        const auto& d = generators.at(a.gen);
        return a.inv ? d.tail : d.head;
    }
    std::uint32_t word_tail(const Word& w) const {
        return w.is_unit() ? static_cast<std::uint32_t>(w.unit) : atom_tail(w.atoms.front());
    }
    std::uint32_t word_head(const Word& w) const {
        return w.is_unit() ? static_cast<std::uint32_t>(w.unit) : atom_head(w.atoms.back());
    }
};

// --- construction helpers ---------------------------------------------------

inline NCPoly nc_zero() { return {}; }

inline NCPoly nc_word(const Word& w, const Rat& c = Rat(1)) {
    NCPoly p;
    if (c != 0) p.terms.emplace(w, c);
    return p;
}

inline NCPoly nc_idem(std::uint32_t s, const Rat& c = Rat(1)) { return nc_word(Word::idem(s), c); }

inline NCPoly nc_gen(std::uint32_t g, bool inverted = false) { return nc_word(Word::atom(g, inverted)); }

/// The unit 1 = sum of all idempotents.
inline NCPoly nc_one(const AlgebraSpec& A) {
    NCPoly p;
    for (std::uint32_t s = 0; s < A.num_idem(); ++s) p.terms.emplace(Word::idem(s), Rat(1));
    return p;
}

inline NCPoly nc_scale(const Rat& c, const NCPoly& p) {
    NCPoly r;
    if (c == 0) return r;
    for (const auto& [w, k] : p.terms) r.terms.emplace(w, c * k);
    return r;
}

inline NCPoly operator+(NCPoly a, const NCPoly& b) {
    a += b;
    return a;
}
inline NCPoly operator-(const NCPoly& a, const NCPoly& b) { return a + nc_scale(Rat(-1), b); }

// --- validation --------------------------------------------------------------

void validate_algebra(const AlgebraSpec& A); // defined below, after normalize

// --- normalization -----------------------------------------------------------

namespace detail {

// Collapses maximal runs of equal generators, applying inverse cancellation,
// finite-order reduction and nilpotent truncation. Returns false when the
// word is annihilated.
inline bool collapse_runs(const AlgebraSpec& A, std::vector<Atom>& atoms) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Atom> out;
        out.reserve(atoms.size());
        std::size_t i = 0;
        while (i < atoms.size()) {
            std::size_t j = i;
            while (j < atoms.size() && atoms[j].gen == atoms[i].gen) ++j;
            const auto& decl = A.generators[atoms[i].gen];
            if (decl.kind == GenKind::Invertible) {
                long net = 0;
                for (std::size_t k = i; k < j; ++k) net += atoms[k].inv ? -1 : +1;
                if (decl.order > 0) {
                    net %= decl.order;
                    if (net < 0) net += decl.order;
                }
                std::size_t run = static_cast<std::size_t>(net < 0 ? -net : net);
                if (run != j - i) changed = true;
                for (std::size_t k = 0; k < run; ++k) out.push_back(Atom{atoms[i].gen, net < 0});
            } else if (decl.kind == GenKind::Nilpotent) {
                if (j - i >= static_cast<std::size_t>(decl.order)) return false;
                for (std::size_t k = i; k < j; ++k) out.push_back(atoms[k]);
            } else {
                for (std::size_t k = i; k < j; ++k) out.push_back(atoms[k]);
            }
            i = j;
        }
        atoms = std::move(out);
    }
    return true;
}

} // namespace detail

/// Normal form of a single word: zero, or exactly one word with coefficient 1.
inline NCPoly normalize(const Word& w, const AlgebraSpec& A) {
    if (w.is_unit()) {
        if (static_cast<std::size_t>(w.unit) >= A.num_idem())
            throw StructuralError("idempotent index out of range");
        return nc_word(w);
    }
    if (w.atoms.empty()) throw StructuralError("word with no unit and no atoms");
    for (const auto& a : w.atoms) {
        if (a.gen >= A.num_gen()) throw StructuralError("generator index out of range");
        if (a.inv && A.generators[a.gen].kind != GenKind::Invertible)
            throw StructuralError("inverse sign on non-invertible generator " + A.generators[a.gen].name);
    }
    for (std::size_t i = 0; i + 1 < w.atoms.size(); ++i)
        if (A.atom_head(w.atoms[i]) != A.atom_tail(w.atoms[i + 1])) return nc_zero();

    std::uint32_t tail = A.atom_tail(w.atoms.front());
    std::vector<Atom> atoms = w.atoms;
    if (!detail::collapse_runs(A, atoms)) return nc_zero();
    if (atoms.empty()) return nc_idem(tail);
    Word out;
    out.atoms = std::move(atoms);
    return nc_word(out);
}

inline NCPoly normalize(const NCPoly& p, const AlgebraSpec& A) {
    NCPoly r;
    for (const auto& [w, c] : p.terms) r += nc_scale(c, normalize(w, A));
    return r;
}

// --- multiplication ----------------------------------------------------------

inline NCPoly mul_words(const AlgebraSpec& A, const Word& u, const Word& v) {
    if (u.is_unit() && v.is_unit()) return u.unit == v.unit ? nc_word(u) : nc_zero();
    if (u.is_unit())
        return static_cast<std::uint32_t>(u.unit) == A.word_tail(v) ? normalize(v, A) : nc_zero();
    if (v.is_unit())
        return A.word_head(u) == static_cast<std::uint32_t>(v.unit) ? normalize(u, A) : nc_zero();
    Word w;
    w.atoms = u.atoms;
    w.atoms.insert(w.atoms.end(), v.atoms.begin(), v.atoms.end());
    return normalize(w, A);
}

inline NCPoly mul(const AlgebraSpec& A, const NCPoly& p, const NCPoly& q) {
    NCPoly r;
    for (const auto& [u, cu] : p.terms)
        for (const auto& [v, cv] : q.terms) r += nc_scale(cu * cv, mul_words(A, u, v));
    return r;
}

inline NCPoly mul(const AlgebraSpec& A, const NCPoly& p, const NCPoly& q, const NCPoly& r) {
    return mul(A, mul(A, p, q), r);
}

inline NCPoly nc_pow(const AlgebraSpec& A, const NCPoly& p, unsigned k) {
    NCPoly r = nc_one(A);
    for (unsigned i = 0; i < k; ++i) r = mul(A, r, p);
    return r;
}

inline bool poly_contains_kind(const AlgebraSpec& A, const NCPoly& p, GenKind kind) {
    for (const auto& [w, c] : p.terms) {
        (void)c;
        for (const auto& a : w.atoms)
            if (A.generators[a.gen].kind == kind) return true;
    }
    return false;
}

inline bool poly_contains_inverse_atoms(const NCPoly& p) {
    for (const auto& [w, c] : p.terms) {
        (void)c;
        for (const auto& a : w.atoms)
            if (a.inv) return true;
    }
    return false;
}

// --- validation --------------------------------------------------------------

inline void validate_algebra(const AlgebraSpec& A) {
    if (A.num_idem() == 0) throw StructuralError("algebra needs at least one idempotent");
    for (std::size_t s = 0; s < A.num_idem(); ++s) {
        if (A.base.idempotents[s].empty()) throw StructuralError("empty idempotent label");
        for (std::size_t t = s + 1; t < A.num_idem(); ++t)
            if (A.base.idempotents[s] == A.base.idempotents[t])
                throw StructuralError("duplicate idempotent label: " + A.base.idempotents[s]);
    }
    for (std::size_t g = 0; g < A.num_gen(); ++g) {
        const auto& d = A.generators[g];
        if (d.name.empty()) throw StructuralError("empty generator name");
        for (std::size_t h = g + 1; h < A.num_gen(); ++h)
            if (d.name == A.generators[h].name)
                throw StructuralError("duplicate generator name: " + d.name);
        if (d.name.size() > 3 && d.name.substr(d.name.size() - 3) == "^-1")
            throw StructuralError("generator name collides with inverse syntax: " + d.name);
        for (const auto& lab : A.base.idempotents)
            if (d.name == "e" + lab)
                throw StructuralError("generator name shadows the unit token " + d.name);
        if (d.tail >= A.num_idem() || d.head >= A.num_idem())
            throw StructuralError("generator " + d.name + " references unknown idempotent");
        switch (d.kind) {
        case GenKind::Nilpotent:
            if (d.tail != d.head) throw StructuralError("nilpotent generator must be a loop: " + d.name);
            if (d.order < 2) throw StructuralError("nilpotent order must be >= 2: " + d.name);
            break;
        case GenKind::Invertible:
            if (d.order < 0) throw StructuralError("negative order on " + d.name);
            break;
        case GenKind::FormalInverse: {
            if (d.tail != d.head)
                throw StructuralError("formal inverse must sit at one idempotent: " + d.name);
            if (d.defining.is_zero()) throw StructuralError("formal inverse of zero: " + d.name);
            for (const auto& [w, c] : d.defining.terms) {
                (void)c;
                if (A.word_tail(w) != d.tail || A.word_head(w) != d.tail)
                    throw StructuralError("defining element of " + d.name + " is not e_s d e_s");
            }
            break;
        }
        case GenKind::Plain:
            break;
        }
    }
}

} // namespace qpb
