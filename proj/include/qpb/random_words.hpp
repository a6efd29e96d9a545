#pragma once

// Deterministic sampling of composable words and small elements. All
// randomized checks in the library flow from a single seed so that reports
// are reproducible byte for byte.

#include "qpb/algebra.hpp"

#include <random>

namespace qpb {

struct SampleOptions {
    std::uint64_t seed = 42;
    std::size_t count = 64;
    std::size_t max_len = 4;
};

class WordSampler {
public:
    WordSampler(const AlgebraSpec& A, std::uint64_t seed) : A_(A), rng_(seed) {
        out_.resize(A.num_idem());
        for (std::uint32_t g = 0; g < A.num_gen(); ++g) {
            const auto& d = A.generators[g];
            out_[d.tail].push_back(Atom{g, false});
            if (d.kind == GenKind::Invertible) out_[d.head].push_back(Atom{g, true});
        }
    }

    /// A normalized word of length <= max_len (possibly an idempotent).
    NCPoly word(std::size_t max_len) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::uint32_t v = pick(A_.num_idem());
            std::size_t len = pick(max_len + 1);
            Word w = Word::idem(v);
            std::uint32_t at = v;
            bool dead = false;
            for (std::size_t i = 0; i < len; ++i) {
                if (out_[at].empty()) {
                    dead = true;
                    break;
                }
                Atom a = out_[at][pick(out_[at].size())];
                if (w.is_unit()) {
                    w.unit = -1;
                }
                w.atoms.push_back(a);
                at = A_.atom_head(a);
            }
            if (dead && len > 0) continue;
            NCPoly n = normalize(w, A_);
            if (!n.is_zero()) return n;
        }
        return nc_idem(pick(A_.num_idem()));
    }

    /// A small linear combination of sampled words.
    NCPoly poly(std::size_t max_terms, std::size_t max_len) {
        NCPoly p;
        std::size_t nterms = 1 + pick(max_terms);
        for (std::size_t i = 0; i < nterms; ++i) {
            long num = static_cast<long>(pick(7)) - 3;
            if (num == 0) num = 1;
            p += nc_scale(Rat(num), word(max_len));
        }
        return p;
    }

    std::size_t pick(std::size_t n) {
        return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n);
    }

private:
    const AlgebraSpec& A_;
    std::mt19937_64 rng_;
    std::vector<std::vector<Atom>> out_; // composable atoms leaving each vertex
};

} // namespace qpb
