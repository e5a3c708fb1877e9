#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace urllc {

// GF(2^m) represented through log/antilog tables of the primitive element
// alpha = x modulo a primitive polynomial.
struct FieldTables {
    int m = 0;
    std::uint32_t primitive_poly = 0;      // bit i = coefficient of x^i
    std::vector<std::uint32_t> antilog;    // antilog[i] = alpha^i, i in [0, 2^m-2]
    std::vector<int> log;                  // log[antilog[i]] = i, log[0] unused (-1)

    int order() const { return (1 << m) - 1; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return antilog[(log[a] + log[b]) % order()];
    }
    std::uint32_t pow_alpha(int e) const {
        e %= order();
        if (e < 0) e += order();
        return antilog[e];
    }
};

inline std::uint32_t default_primitive_poly(int m) {
    // x^m + ... + 1, one standard primitive polynomial per degree
    static const std::uint32_t table[] = {
        0,      0,      0x7,    0xB,    0x13,   0x25,   0x43,   0x89,
        0x11D,  0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,
        0x1100B,
    };
    if (m < 2 || m > 16) throw std::invalid_argument("default_primitive_poly: m out of range");
    return table[m];
}

// Builds the log/antilog tables; rejects non-primitive polynomials by
// checking that alpha has full multiplicative order 2^m - 1.
inline FieldTables build_field(int m, std::uint32_t primitive_poly = 0) {
    if (m < 2 || m > 16) throw std::invalid_argument("build_field: require 2 <= m <= 16");
    if (primitive_poly == 0) primitive_poly = default_primitive_poly(m);
    FieldTables f;
    f.m = m;
    f.primitive_poly = primitive_poly;
    const int q = 1 << m;
    f.antilog.assign(q - 1, 0);
    f.log.assign(q, -1);
    std::uint32_t v = 1;
    for (int i = 0; i < q - 1; ++i) {
        if (f.log[v] != -1)
            throw std::invalid_argument("build_field: polynomial is not primitive");
        f.antilog[i] = v;
        f.log[v] = i;
        v <<= 1;
        if (v & (1u << m)) v ^= primitive_poly;
    }
    // alpha^(2^m - 1) must close the cycle back to 1
    if (v != 1) throw std::invalid_argument("build_field: polynomial is not primitive");
    return f;
}

}  // namespace urllc
