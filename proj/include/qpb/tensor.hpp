#pragma once

// Twofold and threefold tensor powers of a path algebra, with the outer and
// inner bimodule actions and slot permutations.

#include "qpb/algebra.hpp"

#include <array>
#include <utility>

namespace qpb {

struct Tensor2 {
    std::map<std::pair<Word, Word>, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    Tensor2& operator+=(const Tensor2& o) {
        for (const auto& [k, c] : o.terms) {
            auto it = terms.find(k);
            if (it == terms.end()) {
                terms.emplace(k, c);
            } else {
                it->second += c;
                if (it->second == 0) terms.erase(it);
            }
        }
        return *this;
    }
    friend bool operator==(const Tensor2& a, const Tensor2& b) { return a.terms == b.terms; }
};

struct Tensor3 {
    std::map<std::array<Word, 3>, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    Tensor3& operator+=(const Tensor3& o) {
        for (const auto& [k, c] : o.terms) {
            auto it = terms.find(k);
            if (it == terms.end()) {
                terms.emplace(k, c);
            } else {
                it->second += c;
                if (it->second == 0) terms.erase(it);
            }
        }
        return *this;
    }
    friend bool operator==(const Tensor3& a, const Tensor3& b) { return a.terms == b.terms; }
};

inline Tensor2 t2_scale(const Rat& c, const Tensor2& t) {
    Tensor2 r;
    if (c == 0) return r;
    for (const auto& [k, v] : t.terms) r.terms.emplace(k, c * v);
    return r;
}
inline Tensor3 t3_scale(const Rat& c, const Tensor3& t) {
    Tensor3 r;
    if (c == 0) return r;
    for (const auto& [k, v] : t.terms) r.terms.emplace(k, c * v);
    return r;
}
inline Tensor2 operator+(Tensor2 a, const Tensor2& b) {
    a += b;
    return a;
}
inline Tensor2 operator-(const Tensor2& a, const Tensor2& b) { return a + t2_scale(Rat(-1), b); }
inline Tensor3 operator+(Tensor3 a, const Tensor3& b) {
    a += b;
    return a;
}
inline Tensor3 operator-(const Tensor3& a, const Tensor3& b) { return a + t3_scale(Rat(-1), b); }

/// p (x) q, all cross terms, normalized inputs assumed.
inline Tensor2 t2_of(const NCPoly& p, const NCPoly& q, const Rat& scale = Rat(1)) {
    Tensor2 r;
    if (scale == 0) return r;
    for (const auto& [u, cu] : p.terms)
        for (const auto& [v, cv] : q.terms) {
            Rat c = scale * cu * cv;
            auto key = std::make_pair(u, v);
            auto it = r.terms.find(key);
            if (it == r.terms.end()) {
                if (c != 0) r.terms.emplace(key, c);
            } else {
                it->second += c;
                if (it->second == 0) r.terms.erase(it);
            }
        }
    return r;
}

inline Tensor3 t3_of(const NCPoly& p, const NCPoly& q, const NCPoly& r, const Rat& scale = Rat(1)) {
    Tensor3 t;
    if (scale == 0) return t;
    for (const auto& [u, cu] : p.terms)
        for (const auto& [v, cv] : q.terms)
            for (const auto& [w, cw] : r.terms) {
                Rat c = scale * cu * cv * cw;
                std::array<Word, 3> key{u, v, w};
                auto it = t.terms.find(key);
                if (it == t.terms.end()) {
                    if (c != 0) t.terms.emplace(key, c);
                } else {
                    it->second += c;
                    if (it->second == 0) t.terms.erase(it);
                }
            }
    return t;
}

/// Outer action: l . (d' (x) d'') . r = (l d') (x) (d'' r).
inline Tensor2 outer_act(const AlgebraSpec& A, const NCPoly& l, const Tensor2& d, const NCPoly& r) {
    Tensor2 out;
    for (const auto& [k, c] : d.terms)
        out += t2_of(mul(A, l, nc_word(k.first)), mul(A, nc_word(k.second), r), c);
    return out;
}

/// Inner action: l * (d' (x) d'') * r = (d' r) (x) (l d'').
inline Tensor2 inner_act(const AlgebraSpec& A, const NCPoly& l, const Tensor2& d, const NCPoly& r) {
    Tensor2 out;
    for (const auto& [k, c] : d.terms)
        out += t2_of(mul(A, nc_word(k.first), r), mul(A, l, nc_word(k.second)), c);
    return out;
}

inline Tensor2 flip(const Tensor2& d) {
    Tensor2 r;
    for (const auto& [k, c] : d.terms) r.terms.emplace(std::make_pair(k.second, k.first), c);
    return r;
}

/// tau_(123): a1 (x) a2 (x) a3 -> a3 (x) a1 (x) a2 (slot i receives slot i-1
/// cyclically). tau_power applies it i times.
inline Tensor3 tau123(const Tensor3& t) {
    Tensor3 r;
    for (const auto& [k, c] : t.terms) r.terms.emplace(std::array<Word, 3>{k[2], k[0], k[1]}, c);
    return r;
}

inline Tensor3 tau_power(const Tensor3& t, int i) {
    Tensor3 r = t;
    int n = ((i % 3) + 3) % 3;
    for (int k = 0; k < n; ++k) r = tau123(r);
    return r;
}

/// Outer action on triple tensors: l . (x1 (x) x2 (x) x3) . r.
inline Tensor3 outer_act3(const AlgebraSpec& A, const NCPoly& l, const Tensor3& t, const NCPoly& r) {
    Tensor3 out;
    for (const auto& [k, c] : t.terms)
        out += t3_of(mul(A, l, nc_word(k[0])), nc_word(k[1]), mul(A, nc_word(k[2]), r), c);
    return out;
}

template <typename T>
bool tensor_eq(const T& a, const T& b) {
    return a.terms == b.terms;
}

/// Pairs each first slot of `d` with `extra` appended as a third slot:
/// (d' (x) d'') (x) p -> sum d' (x) d'' (x) p. Used to assemble triple
/// brackets.
inline Tensor3 t3_from_t2_and_poly(const Tensor2& d, const NCPoly& p) {
    Tensor3 out;
    for (const auto& [k, c] : d.terms)
        out += t3_of(nc_word(k.first), nc_word(k.second), p, c);
    return out;
}

} // namespace qpb
