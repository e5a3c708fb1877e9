#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "urllc/codec.hpp"

using namespace urllc;

namespace {

// Exhaustive minimum nonzero codeword weight; only for small k.
std::size_t min_distance(const CodeSpec& code) {
    std::size_t best = code.n + 1;
    for (std::uint64_t m = 1; m < (1ULL << code.k); ++m) {
        BitVec msg(code.k);
        for (std::size_t i = 0; i < code.k; ++i) msg[i] = (m >> i) & 1;
        const BitVec cw = encode(code, msg);
        std::size_t w = 0;
        for (auto b : cw) w += b;
        best = std::min(best, w);
    }
    return best;
}

// Multiply field elements as GF(2)[x] mod the primitive polynomial.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, int m, std::uint32_t poly) {
    std::uint32_t acc = 0;
    for (int i = 0; i < m; ++i)
        if ((b >> i) & 1) acc ^= a << i;
    for (int i = 2 * m - 2; i >= m; --i)
        if ((acc >> i) & 1) acc ^= poly << (i - m);
    return acc;
}

}  // namespace

TEST_CASE("field tables match polynomial multiplication exhaustively (m=4)") {
    const FieldTables f = build_field(4);
    for (std::uint32_t a = 0; a < 16; ++a)
        for (std::uint32_t b = 0; b < 16; ++b)
            CHECK(f.mul(a, b) == slow_mul(a, b, 4, f.primitive_poly));
}

TEST_CASE("field construction validates primitivity") {
    for (int m = 2; m <= 10; ++m) {
        const FieldTables f = build_field(m);
        CHECK(f.antilog.size() == static_cast<std::size_t>(f.order()));
        CHECK(f.pow_alpha(f.order()) == 1u);  // full multiplicative order
    }
    // x^4 + x^3 + x^2 + x + 1 divides x^5 + 1: not primitive
    CHECK_THROWS_AS(build_field(4, 0x1F), std::invalid_argument);
}

TEST_CASE("minimal polynomials have GF(2) coefficients and annihilate their roots") {
    const FieldTables f = build_field(4);
    const Gf2Poly mp = minimal_polynomial(f, 1);
    CHECK(poly_degree(mp) == 4);
    // evaluate at alpha in GF(16): sum of alpha^(i*1) over set coefficients
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < mp.size(); ++i)
        if (mp[i]) acc ^= f.pow_alpha(static_cast<int>(i));
    CHECK(acc == 0u);
}

TEST_CASE("BCH generator divides x^n + 1") {
    for (auto [m, t] : {std::pair{4, 1}, {4, 2}, {7, 9}, {7, 10}}) {
        const FieldTables f = build_field(m);
        const Gf2Poly g = bch_generator(f, t);
        Gf2Poly xn1(static_cast<std::size_t>(f.order()) + 1, 0);
        xn1.front() = 1;
        xn1.back() = 1;
        CHECK(poly_degree(poly_mod(xn1, g)) == -1);
    }
}

TEST_CASE("BCH dimensions match the known codes") {
    CHECK(build_bch_code(4, 1).k == 11);   // (15, 11)
    CHECK(build_bch_code(3, 1).k == 4);    // (7, 4)
    const CodeSpec c64 = build_bch_code(7, 10);
    const CodeSpec c71 = build_bch_code(7, 9);
    CHECK(c64.n == 127);
    CHECK(c64.k == 64);
    CHECK(c71.n == 127);
    CHECK(c71.k == 71);
}

TEST_CASE("extension adds an even-parity bit") {
    const CodeSpec ext = extend_code(build_bch_code(4, 1));  // (16, 11)
    CHECK(ext.n == 16);
    CHECK(ext.k == 11);
    for (std::uint64_t m = 0; m < (1ULL << 11); ++m) {
        BitVec msg(11);
        for (std::size_t i = 0; i < 11; ++i) msg[i] = (m >> i) & 1;
        std::size_t w = 0;
        for (auto b : encode(ext, msg)) w += b;
        CHECK(w % 2 == 0);
    }
}

TEST_CASE("exhaustive minimum distances of the small codes") {
    CHECK(min_distance(build_bch_code(3, 1)) == 3);            // Hamming (7,4)
    CHECK(min_distance(extend_code(build_bch_code(3, 1))) == 4);
    CHECK(min_distance(build_bch_code(4, 1)) == 3);
    CHECK(min_distance(extend_code(build_bch_code(4, 1))) == 4);
    CHECK(min_distance(build_bch_code(4, 2)) == 5);            // (15, 7) t=2
}

TEST_CASE("encoding is linear and message recovery inverts it") {
    const CodeSpec code = extend_code(build_bch_code(4, 2));
    CounterRng rng(7, 0);
    for (int trial = 0; trial < 200; ++trial) {
        BitVec a(code.k), b(code.k);
        for (auto& x : a) x = rng.next_u64() & 1;
        for (auto& x : b) x = rng.next_u64() & 1;
        const BitVec ca = encode(code, a), cb = encode(code, b);
        BitVec sum(code.k), csum(code.n);
        for (std::size_t i = 0; i < code.k; ++i) sum[i] = a[i] ^ b[i];
        for (std::size_t i = 0; i < code.n; ++i) csum[i] = ca[i] ^ cb[i];
        CHECK(encode(code, sum) == csum);
        CHECK(code.message_of(ca) == a);
    }
    CHECK_THROWS_AS(encode(code, BitVec(code.k + 1, 0)), std::invalid_argument);
}

TEST_CASE("transmit applies BPSK with calibrated noise") {
    const std::size_t n = 200000;
    const double rho = 2.5;
    BitVec bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = i & 1;
    CounterRng rng(9, 0);
    const RealVector y = transmit(bits, rho, rng);
    double mean_signed = 0.0, var = 0.0;
    const double amp = std::sqrt(rho);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = bits[i] ? -1.0 : 1.0;
        const double z = y[i] - amp * x;
        mean_signed += z;
        var += z * z;
    }
    mean_signed /= n;
    var = var / n - mean_signed * mean_signed;
    CHECK(std::abs(mean_signed) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == Catch::Approx(1.0).epsilon(0.02));
    // identical seeds give identical realizations
    CounterRng r1(9, 0), r2(9, 0);
    CHECK(transmit(bits, rho, r1) == transmit(bits, rho, r2));
    CHECK_THROWS_AS(transmit(bits, -1.0, rng), std::invalid_argument);
}

TEST_CASE("code file format round-trips") {
    const CodeSpec code = extend_code(build_bch_code(7, 10));
    std::stringstream ss;
    write_code(ss, code);
    const CodeSpec back = read_code(ss);
    CHECK(back.n == code.n);
    CHECK(back.k == code.k);
    CHECK(back.G == code.G);
    std::stringstream bad("8 4\nzz\n");
    CHECK_THROWS(read_code(bad));
}
