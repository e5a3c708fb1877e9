#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "urllc/galois.hpp"
#include "urllc/gf2.hpp"
#include "urllc/rng.hpp"

namespace urllc {

// Polynomial over GF(2): coeff[i] is the coefficient of x^i.
using Gf2Poly = std::vector<std::uint8_t>;

inline int poly_degree(const Gf2Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i]) return i;
    return -1;
}

inline Gf2Poly poly_mul(const Gf2Poly& a, const Gf2Poly& b) {
    Gf2Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= (a[i] & b[j]);
    return out;
}

// Remainder of a mod b over GF(2).
inline Gf2Poly poly_mod(Gf2Poly a, const Gf2Poly& b) {
    const int db = poly_degree(b);
    if (db < 0) throw std::invalid_argument("poly_mod: zero divisor");
    for (int i = poly_degree(a); i >= db; --i) {
        if (a[i])
            for (int j = 0; j <= db; ++j) a[i - db + j] ^= b[j];
    }
    a.resize(db > 0 ? db : 1);
    return a;
}

// Minimal polynomial of alpha^i: product over the cyclotomic coset of i.
inline Gf2Poly minimal_polynomial(const FieldTables& f, int i) {
    const int n = f.order();
    std::vector<int> coset;
    int e = i % n;
    do {
        coset.push_back(e);
        e = (2 * e) % n;
    } while (e != i % n);

    // multiply (x + alpha^j) over the coset, coefficients in GF(2^m)
    std::vector<std::uint32_t> p{1};
    for (int j : coset) {
        const std::uint32_t root = f.pow_alpha(j);
        std::vector<std::uint32_t> q(p.size() + 1, 0);
        for (std::size_t d = 0; d < p.size(); ++d) {
            q[d + 1] ^= p[d];
            q[d] ^= f.mul(p[d], root);
        }
        p = std::move(q);
    }
    Gf2Poly out(p.size(), 0);
    for (std::size_t d = 0; d < p.size(); ++d) {
        if (p[d] > 1) throw std::runtime_error("minimal_polynomial: coefficient not in GF(2)");
        out[d] = static_cast<std::uint8_t>(p[d]);
    }
    return out;
}

// Generator polynomial of the (2^m - 1, k) BCH code with designed
// error-correcting capability t: lcm of the minimal polynomials of
// alpha, alpha^2, ..., alpha^(2t).
inline Gf2Poly bch_generator(const FieldTables& f, int t_design) {
    if (t_design < 1) throw std::invalid_argument("bch_generator: t must be >= 1");
    const int n = f.order();
    std::set<int> seen;  // coset representatives already absorbed
    Gf2Poly g{1};
    for (int i = 1; i <= 2 * t_design; ++i) {
        int e = i % n;
        int rep = e;
        do {
            rep = std::min(rep, e);
            e = (2 * e) % n;
        } while (e != i % n);
        if (!seen.insert(rep).second) continue;
        g = poly_mul(g, minimal_polynomial(f, i));
    }
    if (poly_degree(g) >= n) throw std::runtime_error("bch_generator: t too large, k <= 0");
    g.resize(poly_degree(g) + 1);
    return g;
}

struct CodeParent {
    int m = 0;
    int t_design = 0;
    bool extended = false;
};

// Binary linear code given by a k x n generator matrix (packed bit rows).
struct CodeSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    BitMatrix G;
    CodeParent parent;

    // Lazily built message-recovery data: J = pivot columns of rref(G),
    // Jinv = inverse of the k x k submatrix G[:, J].
    mutable std::vector<std::size_t> info_set;
    mutable BitMatrix info_inv;

    void build_recovery() const {
        if (!info_set.empty()) return;
        BitMatrix tmp = G;
        std::size_t piv = 0;
        for (std::size_t c = 0; c < n && piv < k; ++c) {
            std::size_t sel = piv;
            while (sel < k && !tmp.get(sel, c)) ++sel;
            if (sel == k) continue;
            tmp.row_swap(piv, sel);
            for (std::size_t r = 0; r < k; ++r)
                if (r != piv && tmp.get(r, c)) tmp.row_xor(r, piv);
            info_set.push_back(c);
            ++piv;
        }
        if (piv != k) throw std::runtime_error("CodeSpec: generator matrix is rank deficient");
        BitMatrix sub(k, k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t j = 0; j < k; ++j) sub.set(r, j, G.get(r, info_set[j]));
        info_inv = gf2_invert(sub);
    }

    // Recovers the message from a codeword: m = c_J * (G_J)^{-1}.
    BitVec message_of(const BitVec& codeword) const {
        build_recovery();
        BitVec msg(k, 0);
        for (std::size_t j = 0; j < k; ++j) {
            if (codeword[info_set[j]]) {
                for (std::size_t i = 0; i < k; ++i) msg[i] ^= info_inv.get(j, i);
            }
        }
        return msg;
    }
};

// Cyclic code from a generator polynomial: rows are x^i g(x).
inline CodeSpec code_from_generator(const FieldTables& f, const Gf2Poly& g, int t_design) {
    const std::size_t n = static_cast<std::size_t>(f.order());
    const int deg = poly_degree(g);
    const std::size_t k = n - static_cast<std::size_t>(deg);
    CodeSpec code;
    code.n = n;
    code.k = k;
    code.G = BitMatrix(k, n);
    for (std::size_t r = 0; r < k; ++r)
        for (int j = 0; j <= deg; ++j)
            if (g[j]) code.G.set(r, r + j, true);
    code.parent = {f.m, t_design, false};
    if (code.G.rank() != k) throw std::runtime_error("code_from_generator: rank != k");
    return code;
}

inline CodeSpec build_bch_code(int m, int t_design) {
    const FieldTables f = build_field(m);
    return code_from_generator(f, bch_generator(f, t_design), t_design);
}

// Appends an overall even-parity column; every codeword of the extended
// code has even weight.
inline CodeSpec extend_code(const CodeSpec& code) {
    CodeSpec out;
    out.n = code.n + 1;
    out.k = code.k;
    out.G = BitMatrix(code.k, code.n + 1);
    for (std::size_t r = 0; r < code.k; ++r) {
        for (std::size_t c = 0; c < code.n; ++c) out.G.set(r, c, code.G.get(r, c));
        out.G.set(r, code.n, code.G.row_weight(r) % 2 != 0);
    }
    out.parent = code.parent;
    out.parent.extended = true;
    return out;
}

inline BitVec encode(const CodeSpec& code, const BitVec& message) {
    if (message.size() != code.k) throw std::invalid_argument("encode: message length != k");
    BitVec cw(code.n, 0);
    for (std::size_t r = 0; r < code.k; ++r) {
        if (!message[r]) continue;
        for (std::size_t c = 0; c < code.n; ++c) cw[c] ^= code.G.get(r, c);
    }
    return cw;
}

using RealVector = std::vector<double>;

// BPSK mapping (bit 0 -> +1, bit 1 -> -1) over the BI-AWGN channel:
// y = sqrt(rho) * x + z, unit-variance noise from a seeded counter stream.
inline RealVector transmit(const BitVec& code_bits, double rho, CounterRng& rng) {
    if (rho < 0) throw std::invalid_argument("transmit: rho must be >= 0");
    const double amp = std::sqrt(rho);
    RealVector y(code_bits.size());
    for (std::size_t i = 0; i < code_bits.size(); ++i) {
        const double x = code_bits[i] ? -1.0 : 1.0;
        y[i] = amp * x + rng.next_gaussian();
    }
    return y;
}

inline RealVector transmit(const BitVec& code_bits, double rho, std::uint64_t rng_seed) {
    CounterRng rng(rng_seed, 0);
    return transmit(code_bits, rho, rng);
}

// Text format: header line "n k", then k rows of hex-packed generator
// bits (bit j of a row is nibble j/4, low bit first within the nibble).
inline void write_code(std::ostream& os, const CodeSpec& code) {
    os << code.n << ' ' << code.k << '\n';
    static const char* hex = "0123456789abcdef";
    for (std::size_t r = 0; r < code.k; ++r) {
        std::string line;
        for (std::size_t c = 0; c < code.n; c += 4) {
            int nib = 0;
            for (std::size_t b = 0; b < 4 && c + b < code.n; ++b)
                if (code.G.get(r, c + b)) nib |= 1 << b;
            line += hex[nib];
        }
        os << line << '\n';
    }
}

inline CodeSpec read_code(std::istream& is) {
    CodeSpec code;
    if (!(is >> code.n >> code.k)) throw std::runtime_error("read_code: bad header");
    code.G = BitMatrix(code.k, code.n);
    for (std::size_t r = 0; r < code.k; ++r) {
        std::string line;
        if (!(is >> line)) throw std::runtime_error("read_code: missing row");
        if (line.size() != (code.n + 3) / 4) throw std::runtime_error("read_code: bad row length");
        for (std::size_t c = 0; c < code.n; ++c) {
            const char ch = line[c / 4];
            const int nib = (ch >= 'a') ? ch - 'a' + 10 : (ch >= 'A') ? ch - 'A' + 10 : ch - '0';
            if (nib < 0 || nib > 15) throw std::runtime_error("read_code: bad hex digit");
            code.G.set(r, c, (nib >> (c % 4)) & 1);
        }
    }
    if (code.G.rank() != code.k) throw std::runtime_error("read_code: rank != k");
    return code;
}

}  // namespace urllc
