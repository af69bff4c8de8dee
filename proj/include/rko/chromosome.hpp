#ifndef RKO_CHROMOSOME_HPP
#define RKO_CHROMOSOME_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rko {

/// Vector of random keys. Every key lies in the half-open-from-below
/// interval (0, 1]; decoders only ever sort keys or bin them, so the
/// chromosome length and the key range are the whole contract.
using Chromosome = std::vector<double>;

inline bool valid_key(double k) { return k > 0.0 && k <= 1.0; }

/// Clamp into (0,1]. Values at or below zero become the smallest positive
/// double so that ordering information degrades instead of crashing.
inline double clamp_key(double k) {
    if (!(k > 0.0)) return std::numeric_limits<double>::denorm_min();
    if (k > 1.0) return 1.0;
    return k;
}

inline void validate_chromosome(const Chromosome& c) {
    if (c.empty()) throw std::invalid_argument("chromosome is empty");
    for (double k : c)
        if (!valid_key(k))
            throw std::invalid_argument("chromosome key outside (0,1]");
}

}  // namespace rko

#endif
