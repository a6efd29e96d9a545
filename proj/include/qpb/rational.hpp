#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace qpb {

/// Exact rational coefficients. Every identity in this library is checked
/// with exact equality; floating point never appears.
using Rat = boost::multiprecision::cpp_rational;

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpecIncompleteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DeferToNumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q". Throws ParameterError on malformed input.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw ParameterError("empty fraction string");
    try {
        return Rat(s);
    } catch (const std::exception&) {
        throw ParameterError("malformed fraction string: " + s);
    }
}

inline std::string rat_str(const Rat& r) { return r.str(); }

} // namespace qpb
