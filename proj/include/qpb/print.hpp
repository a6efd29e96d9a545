#pragma once

#include "qpb/tensor.hpp"

#include <sstream>

namespace qpb {

inline std::string word_str(const AlgebraSpec& A, const Word& w) {
    if (w.is_unit()) return "e" + A.base.idempotents[static_cast<std::size_t>(w.unit)];
    std::string s;
    for (std::size_t i = 0; i < w.atoms.size(); ++i) {
        if (i) s += ".";
        s += A.generators[w.atoms[i].gen].name;
        if (w.atoms[i].inv) s += "^-1";
    }
    return s;
}

inline std::string coeff_prefix(const Rat& c, bool first) {
    std::string s;
    if (c < 0) {
        s += first ? "-" : " - ";
    } else if (!first) {
        s += " + ";
    }
    Rat a = abs(c);
    if (a != 1) s += a.str() + "*";
    return s;
}

inline std::string poly_str(const AlgebraSpec& A, const NCPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : p.terms) {
        s += coeff_prefix(c, first) + word_str(A, w);
        first = false;
    }
    return s;
}

inline std::string tensor_str(const AlgebraSpec& A, const Tensor2& t) {
    if (t.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : t.terms) {
        s += coeff_prefix(c, first) + word_str(A, k.first) + " (x) " + word_str(A, k.second);
        first = false;
    }
    return s;
}

inline std::string tensor_str(const AlgebraSpec& A, const Tensor3& t) {
    if (t.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : t.terms) {
        s += coeff_prefix(c, first) + word_str(A, k[0]) + " (x) " + word_str(A, k[1]) + " (x) " +
             word_str(A, k[2]);
        first = false;
    }
    return s;
}

} // namespace qpb
