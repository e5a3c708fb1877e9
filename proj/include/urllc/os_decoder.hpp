#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "urllc/codec.hpp"
#include "urllc/gf2.hpp"
#include "urllc/rng.hpp"

namespace urllc {

struct DecoderConfig {
    int s = 0;                   // reprocessing order, 0 <= s <= k
    int q = 8;                   // quantization bits, enters the complexity formula only
    bool hamming_metric = false; // literal Hamming discrepancy instead of soft correlation
    bool fast_mode = false;      // TEP skipping by discrepancy lower bound; breaks op accounting
};

// Tallies of binary operations performed by a decode call, charged at the
// granularity of the work actually done (comparisons, row eliminations,
// TEP reprocessing steps).
struct OpCounter {
    std::uint64_t sort_ops = 0;
    std::uint64_t gje_ops = 0;
    std::uint64_t reprocess_ops = 0;
    std::uint64_t total() const { return sort_ops + gje_ops + reprocess_ops; }
};

// Stable descending sort of |y|; ties keep the lower original index.
// A merge sort is used so the comparison count is deterministic.
inline std::vector<std::size_t> reliability_permutation(const RealVector& y, OpCounter* ops = nullptr) {
    const std::size_t n = y.size();
    std::vector<std::size_t> perm(n), buf(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t comparisons = 0;
    const auto merge = [&](std::size_t lo, std::size_t mid, std::size_t hi) {
        std::size_t i = lo, j = mid, o = lo;
        while (i < mid && j < hi) {
            ++comparisons;
            const double ai = std::abs(y[perm[i]]);
            const double aj = std::abs(y[perm[j]]);
            // stable: left run wins ties, and within-run order is by index
            if (ai >= aj)
                buf[o++] = perm[i++];
            else
                buf[o++] = perm[j++];
        }
        while (i < mid) buf[o++] = perm[i++];
        while (j < hi) buf[o++] = perm[j++];
        std::copy(buf.begin() + lo, buf.begin() + hi, perm.begin() + lo);
    };
    for (std::size_t width = 1; width < n; width *= 2)
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width)
            merge(lo, lo + width, std::min(lo + 2 * width, n));
    if (ops) ops->sort_ops += comparisons;
    return perm;
}

struct MostReliableBasis {
    std::vector<std::size_t> permutation;  // position i of the MRB domain <- original index
    BitMatrix G_sys;                       // k x n, identity on the first k columns
    std::size_t swap_count = 0;            // dependent columns displaced from the basis window
};

// Column-permutes G by the reliability order and Gauss-Jordan reduces it.
// Dependent columns inside the first-k window are swapped out for the next
// most reliable independent columns.
inline MostReliableBasis systematize(const CodeSpec& code, const std::vector<std::size_t>& perm,
                                     OpCounter* ops = nullptr) {
    const std::size_t n = code.n, k = code.k;
    if (perm.size() != n) throw std::invalid_argument("systematize: bad permutation size");

    BitMatrix P(k, n);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (code.G.get(r, perm[c])) P.set(r, c, true);

    std::vector<std::size_t> pivot_cols;
    std::vector<char> is_pivot(n, 0);
    std::size_t piv = 0;
    for (std::size_t c = 0; c < n && piv < k; ++c) {
        std::size_t sel = piv;
        while (sel < k && !P.get(sel, c)) ++sel;
        if (sel == k) continue;
        P.row_swap(piv, sel);
        for (std::size_t r = 0; r < k; ++r) {
            if (r != piv && P.get(r, c)) P.row_xor(r, piv);
        }
        if (ops) ops->gje_ops += static_cast<std::uint64_t>(k - 1) * n;
        pivot_cols.push_back(c);
        is_pivot[c] = 1;
        ++piv;
    }
    if (piv != k) throw std::runtime_error("systematize: generator matrix is rank deficient");

    std::size_t swaps = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (pivot_cols[i] != i) ++swaps;

    // new column order: basis columns first, then the rest in reliability order
    std::vector<std::size_t> order = pivot_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) order.push_back(c);

    MostReliableBasis mrb;
    mrb.swap_count = swaps;
    mrb.permutation.resize(n);
    mrb.G_sys = BitMatrix(k, n);
    for (std::size_t j = 0; j < n; ++j) {
        mrb.permutation[j] = perm[order[j]];
        for (std::size_t r = 0; r < k; ++r)
            if (P.get(r, order[j])) mrb.G_sys.set(r, j, true);
    }
    return mrb;
}

// |T| = sum_{i=0}^{s} C(k, i). Accumulated in extended precision; exact
// for every value a 64-bit mantissa can hold.
inline double tep_count(std::size_t k, int s) {
    if (s < 0 || static_cast<std::size_t>(s) > k) throw std::domain_error("tep_count: require 0 <= s <= k");
    long double total = 0.0L, term = 1.0L;
    for (int i = 0;; ++i) {
        total += term;
        if (i == s) break;
        term = term * static_cast<long double>(k - i) / static_cast<long double>(i + 1);
    }
    return static_cast<double>(total);
}

// K(D) = log2(n)/r + n k + |T|/2 (n - q + q n / k), binary operations per
// information bit.
inline double complexity_per_info_bit(std::size_t n, std::size_t k, int s, int q) {
    if (k == 0) throw std::domain_error("complexity_per_info_bit: k must be >= 1");
    const double r = static_cast<double>(k) / static_cast<double>(n);
    const double t = tep_count(k, s);
    return std::log2(static_cast<double>(n)) / r + static_cast<double>(n) * static_cast<double>(k) +
           0.5 * t * (static_cast<double>(n) - q + static_cast<double>(q) * n / k);
}

struct DecodeResult {
    BitVec info_bits;
    double discrepancy = 0.0;
};

namespace detail {

// Enumerates k-bit patterns of weight 0..s, weight-ascending then
// lexicographic by ascending flipped positions, calling fn(positions).
template <typename Fn>
inline void for_each_tep(std::size_t k, int s, Fn&& fn) {
    std::vector<std::size_t> pos;
    fn(pos);  // weight 0
    for (int w = 1; w <= s; ++w) {
        pos.assign(w, 0);
        std::iota(pos.begin(), pos.end(), 0);
        while (true) {
            fn(pos);
            // next combination
            int i = w - 1;
            while (i >= 0 && pos[i] == k - w + i) --i;
            if (i < 0) break;
            ++pos[i];
            for (int j = i + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
        }
    }
}

}  // namespace detail

// Order-s OS decoding: hard-decide the k most reliable independent
// positions, reprocess every TEP of weight <= s through G_sys, keep the
// candidate with minimum soft discrepancy (sum of |y_i| over positions
// disagreeing with the hard decision). Ties go to the first candidate in
// enumeration order.
inline DecodeResult decode(const RealVector& y, const CodeSpec& code, const DecoderConfig& cfg,
                           OpCounter* ops = nullptr) {
    const std::size_t n = code.n, k = code.k;
    if (y.size() != n) throw std::invalid_argument("decode: length mismatch");
    if (cfg.s < 0 || static_cast<std::size_t>(cfg.s) > k) throw std::invalid_argument("decode: bad order");

    const std::vector<std::size_t> perm0 = reliability_permutation(y, ops);
    const MostReliableBasis mrb = systematize(code, perm0, ops);

    std::vector<double> amp(n);
    std::vector<std::uint64_t> hard((n + 63) / 64, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = y[mrb.permutation[i]];
        amp[i] = cfg.hamming_metric ? 1.0 : std::abs(v);
        if (v < 0.0) hard[i / 64] |= 1ULL << (i % 64);  // bit 0 -> +1, bit 1 -> -1
    }

    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> base(words, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if ((hard[i / 64] >> (i % 64)) & 1ULL)
            for (std::size_t w = 0; w < words; ++w) base[w] ^= mrb.G_sys.row(i)[w];
    }

    // per-TEP reprocessing charge: bit-serial re-encode plus metric update
    const std::uint64_t tep_charge =
        (static_cast<std::uint64_t>(k) * (n - static_cast<std::size_t>(cfg.q)) +
         static_cast<std::uint64_t>(cfg.q) * n) / 2;

    const auto score = [&](const std::vector<std::uint64_t>& cand) {
        double d = 0.0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t diff = cand[w] ^ hard[w];
            while (diff) {
                const int b = std::countr_zero(diff);
                d += amp[w * 64 + b];
                diff &= diff - 1;
            }
        }
        return d;
    };

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> best_info_mask((k + 63) / 64, 0);
    std::vector<std::uint64_t> cand(words);
    std::vector<std::uint64_t> tep_mask((k + 63) / 64, 0);

    detail::for_each_tep(k, cfg.s, [&](const std::vector<std::size_t>& pos) {
        if (cfg.fast_mode && !pos.empty()) {
            double lb = 0.0;
            for (std::size_t p : pos) lb += amp[p];
            if (lb >= best) return;
        }
        cand = base;
        for (std::size_t p : pos)
            for (std::size_t w = 0; w < words; ++w) cand[w] ^= mrb.G_sys.row(p)[w];
        if (ops) ops->reprocess_ops += tep_charge;
        const double d = score(cand);
        if (d < best) {
            best = d;
            std::fill(best_info_mask.begin(), best_info_mask.end(), 0);
            for (std::size_t i = 0; i < k; ++i)
                if ((cand[i / 64] >> (i % 64)) & 1ULL) best_info_mask[i / 64] |= 1ULL << (i % 64);
        }
    });

    // winner codeword in the original domain, then message recovery
    BitVec cw(n, 0);
    {
        // rebuild the winning codeword from its information bits
        std::vector<std::uint64_t> c(words, 0);
        for (std::size_t i = 0; i < k; ++i)
            if ((best_info_mask[i / 64] >> (i % 64)) & 1ULL)
                for (std::size_t w = 0; w < words; ++w) c[w] ^= mrb.G_sys.row(i)[w];
        for (std::size_t i = 0; i < n; ++i)
            cw[mrb.permutation[i]] = (c[i / 64] >> (i % 64)) & 1ULL;
    }
    return {code.message_of(cw), best};
}

struct CepEstimate {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double cep = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

inline void wilson_interval(CepEstimate& e) {
    const double z = 1.959963984540054;  // 95%
    const double nt = static_cast<double>(e.trials);
    if (nt == 0) return;
    const double p = static_cast<double>(e.errors) / nt;
    e.cep = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = p + z2 / (2.0 * nt);
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
    e.ci_low = e.errors == 0 ? 0.0 : std::max(0.0, (center - half) / denom);
    e.ci_high = std::min(1.0, (center + half) / denom);
}

// Monte Carlo CEP: independent encode -> transmit -> decode trials, one
// counter-based substream per trial. Stops after the first trial index at
// which the cumulative error count reaches target_errors, so the result
// is identical for any worker count.
inline CepEstimate estimate_cep(const CodeSpec& code, const DecoderConfig& cfg, double rho,
                                std::uint64_t max_trials, std::uint64_t target_errors,
                                std::uint64_t seed, unsigned threads = 1) {
    if (max_trials < 1) throw std::invalid_argument("estimate_cep: max_trials must be >= 1");
    if (threads == 0) threads = 1;

    const auto run_trial = [&](std::uint64_t trial) -> bool {
        CounterRng rng(seed, trial);
        BitVec msg(code.k);
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
        const BitVec cw = encode(code, msg);
        const RealVector y = transmit(cw, rho, rng);
        const DecodeResult res = decode(y, code, cfg);
        return res.info_bits != msg;
    };

    const std::uint64_t block = 256;
    const std::uint64_t nblocks = (max_trials + block - 1) / block;
    std::vector<std::uint64_t> block_errors(nblocks, 0);

    const auto run_block = [&](std::uint64_t b) {
        const std::uint64_t lo = b * block;
        const std::uint64_t hi = std::min(max_trials, lo + block);
        std::uint64_t errs = 0;
        for (std::uint64_t t = lo; t < hi; ++t)
            if (run_trial(t)) ++errs;
        block_errors[b] = errs;
    };

    // blocks are processed in index order in waves; the stopping decision
    // only ever looks at the completed prefix, so it cannot depend on the
    // worker count
    CepEstimate est;
    std::uint64_t done_blocks = 0, cum_errors = 0;
    bool reached = false;
    std::uint64_t stop_block = nblocks;
    while (done_blocks < nblocks && !reached) {
        const std::uint64_t wave_end = std::min<std::uint64_t>(nblocks, done_blocks + threads * 4ull);
        std::atomic<std::uint64_t> next{done_blocks};
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back([&] {
                for (std::uint64_t b = next.fetch_add(1); b < wave_end; b = next.fetch_add(1)) run_block(b);
            });
        for (auto& th : pool) th.join();
        while (done_blocks < wave_end) {
            cum_errors += block_errors[done_blocks];
            ++done_blocks;
            if (cum_errors >= target_errors) {
                reached = true;
                stop_block = done_blocks;
                break;
            }
        }
    }

    // tighten to the exact stopping trial inside the final block
    if (reached) {
        const std::uint64_t lo = (stop_block - 1) * block;
        const std::uint64_t hi = std::min(max_trials, lo + block);
        std::uint64_t errs_before = cum_errors - block_errors[stop_block - 1];
        std::uint64_t errs = errs_before;
        for (std::uint64_t t = lo; t < hi; ++t) {
            if (run_trial(t)) ++errs;
            if (errs >= target_errors) {
                est.errors = errs;
                est.trials = t + 1;
                break;
            }
        }
    } else {
        est.trials = max_trials;
        est.errors = cum_errors;
    }
    wilson_interval(est);
    return est;
}

}  // namespace urllc
