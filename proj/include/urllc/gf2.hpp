#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace urllc {

// Dense binary matrix, rows packed into 64-bit words.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t& w = data_[r * wpr_ + c / 64];
        const std::uint64_t m = 1ULL << (c % 64);
        w = v ? (w | m) : (w & ~m);
    }
    void flip(std::size_t r, std::size_t c) { data_[r * wpr_ + c / 64] ^= 1ULL << (c % 64); }

    const std::uint64_t* row(std::size_t r) const { return data_.data() + r * wpr_; }
    std::uint64_t* row(std::size_t r) { return data_.data() + r * wpr_; }

    void row_xor(std::size_t dst, std::size_t src) {
        std::uint64_t* d = row(dst);
        const std::uint64_t* s = row(src);
        for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }
    void row_swap(std::size_t a, std::size_t b) {
        std::uint64_t* pa = row(a);
        std::uint64_t* pb = row(b);
        for (std::size_t w = 0; w < wpr_; ++w) std::swap(pa[w], pb[w]);
    }

    std::size_t row_weight(std::size_t r) const {
        std::size_t n = 0;
        const std::uint64_t* p = row(r);
        for (std::size_t w = 0; w < wpr_; ++w) n += std::popcount(p[w]);
        return n;
    }

    // Rank over GF(2); operates on a copy.
    std::size_t rank() const {
        BitMatrix tmp = *this;
        std::size_t piv = 0;
        for (std::size_t c = 0; c < cols_ && piv < rows_; ++c) {
            std::size_t sel = piv;
            while (sel < rows_ && !tmp.get(sel, c)) ++sel;
            if (sel == rows_) continue;
            tmp.row_swap(piv, sel);
            for (std::size_t r = 0; r < rows_; ++r)
                if (r != piv && tmp.get(r, c)) tmp.row_xor(r, piv);
            ++piv;
        }
        return piv;
    }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> data_;
};

using BitVec = std::vector<std::uint8_t>;  // one bit per entry, values 0/1

// Packed word vector for a length-n bit row.
inline std::vector<std::uint64_t> pack_bits(const BitVec& bits) {
    std::vector<std::uint64_t> out((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 64] |= 1ULL << (i % 64);
    return out;
}

// Inverse of a square matrix over GF(2). Throws if singular.
inline BitMatrix gf2_invert(const BitMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("gf2_invert: not square");
    const std::size_t n = a.rows();
    BitMatrix work = a;
    BitMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv.set(i, i, true);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && !work.get(sel, c)) ++sel;
        if (sel == n) throw std::runtime_error("gf2_invert: singular matrix");
        work.row_swap(c, sel);
        inv.row_swap(c, sel);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != c && work.get(r, c)) {
                work.row_xor(r, c);
                inv.row_xor(r, c);
            }
        }
    }
    return inv;
}

}  // namespace urllc
