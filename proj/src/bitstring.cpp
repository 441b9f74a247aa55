#include "tbi/bitstring.hpp"

#include <stdexcept>

namespace tbi {

int popcount(const Bitstring& x) {
    int count = 0;
    for (std::uint8_t bit : x) count += bit ? 1 : 0;
    return count;
}

std::string to_string(const Bitstring& x) {
    std::string out(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) out[i] = '1';
    }
    return out;
}

Bitstring bitstring_from_string(const std::string& s) {
    Bitstring out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '0') {
            out[i] = 0;
        } else if (s[i] == '1') {
            out[i] = 1;
        } else {
            throw std::invalid_argument("bitstring may contain only '0' and '1', got '" +
                                        std::string(1, s[i]) + "'");
        }
    }
    return out;
}

}  // namespace tbi
