#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qpb {

struct Witness {
    std::string input;    // the pair or triple that violated the law
    std::string residual; // the nonzero residual tensor
};

struct CheckReport {
    std::size_t checked = 0;
    std::vector<Witness> witnesses;

    bool passed() const { return witnesses.empty(); }
    void note(std::string input, std::string residual) {
        witnesses.push_back(Witness{std::move(input), std::move(residual)});
    }
    CheckReport& merge(const CheckReport& o) {
        checked += o.checked;
        witnesses.insert(witnesses.end(), o.witnesses.begin(), o.witnesses.end());
        return *this;
    }
};

} // namespace qpb
