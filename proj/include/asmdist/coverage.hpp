#pragma once

// Poisson shotgun-sampling model: seeded read sampling, the analytic
// bridging probabilities, the required-coverage solver, and the
// coverage/distortion bound curves.
//
// The model counts L - ell read starts that bridge a length-ell segment,
// so the probability that no read bridges it is (1 - (L-ell)/G)^N, with
// exp(-(N/G)(L-ell)) as the explicit approximation mode.  Bridging events
// for distinct segments are treated as independent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asmdist/core.hpp"
#include "asmdist/distortion.hpp"
#include "asmdist/repeats.hpp"

namespace asmdist {

struct SamplingParams {
    Position n_reads = 0;
    Position read_length = 0;
    Position genome_length = 0;
    std::uint64_t seed = 0;

    double coverage_depth() const {
        return static_cast<double>(n_reads) * static_cast<double>(read_length) /
               static_cast<double>(genome_length);
    }
};

/// N reads with i.i.d. uniform start positions, deterministic for a fixed
/// seed.  true_starts carry every genome position where the read content
/// occurs (a read sampled inside a long repeat genuinely starts at each copy).
inline ReadSet sample_reads(const CircularSequence& s, const SamplingParams& params) {
    if (params.read_length < 1 || params.read_length > s.size())
        throw std::invalid_argument("read length must satisfy 1 <= L <= G");
    if (params.n_reads < 0) throw std::invalid_argument("read count must be >= 0");
    ReadSet rs;
    rs.read_length = params.read_length;
    rs.genome_length = s.size();
    std::mt19937_64 rng(params.seed);
    std::map<std::string, std::vector<Position>> occ_cache;
    for (Position i = 0; i < params.n_reads; ++i) {
        Position t = uniform_position(rng, s.size());
        Read r;
        r.content = circular_substring(s, t, params.read_length);
        auto it = occ_cache.find(r.content.str());
        if (it == occ_cache.end()) {
            std::vector<Position> starts;
            for (Position p = 1; p <= s.size(); ++p)
                if (circular_substring(s, p, params.read_length).str() == r.content.str())
                    starts.push_back(p);
            it = occ_cache.emplace(r.content.str(), std::move(starts)).first;
        }
        r.true_starts = it->second;
        rs.reads.push_back(std::move(r));
    }
    return rs;
}

enum class ProbabilityMode { Exact, Approx };

/// Probability that a length-ell segment is bridged by none of the N reads:
/// (1 - (L-ell)/G)^N exactly, e^{-(N/G)(L-ell)} approximately; clamped to 1
/// when ell >= L.  Pointwise per factor e^{-x} >= 1-x, so approx >= exact.
inline double p_unbridged(Position ell, const SamplingParams& params,
                          ProbabilityMode mode = ProbabilityMode::Exact) {
    if (ell < 0) throw std::invalid_argument("segment length must be >= 0");
    double L = static_cast<double>(params.read_length);
    double G = static_cast<double>(params.genome_length);
    double N = static_cast<double>(params.n_reads);
    double w = L - static_cast<double>(ell);
    if (w <= 0) return 1.0;
    if (mode == ProbabilityMode::Approx) return std::exp(-(N / G) * w);
    if (w >= G) return N > 0 ? 0.0 : 1.0;
    return std::exp(N * std::log1p(-w / G));
}

/// Union bound on some triple repeat being neither all-bridged nor
/// all-unbridged: sum over triple lengths of C(3,1) p (1-p)^2 + C(3,2) p^2 (1-p).
/// Clamped to [0,1].
inline double p_triple_violation(const SamplingParams& params,
                                 const std::vector<TripleRepeat>& triples,
                                 ProbabilityMode mode = ProbabilityMode::Exact) {
    double sum = 0.0;
    for (const auto& t : triples) {
        double p = p_unbridged(t.len, params, mode);
        sum += 3.0 * p * (1.0 - p) * (1.0 - p) + 3.0 * p * p * (1.0 - p);
    }
    return std::min(sum, 1.0);
}

/// Union bound on some k-window containing no read start: G (1 - k/G)^N,
/// clamped to [0,1].  An upper bound on the true failure probability.
inline double p_not_k_covered(const SamplingParams& params, Position k) {
    if (k < 1 || k > params.genome_length)
        throw std::invalid_argument("window length must satisfy 1 <= k <= G");
    double G = static_cast<double>(params.genome_length);
    double N = static_cast<double>(params.n_reads);
    double kk = static_cast<double>(k);
    if (kk >= G) return N > 0 ? 0.0 : 1.0;
    double v = G * std::exp(N * std::log1p(-kk / G));
    return std::clamp(v, 0.0, 1.0);
}

/// Union bound on the length-q bridging conditions failing: repeats of
/// length <= q not doubly-bridged, plus linked pairs with link length in
/// [k-1, q] where neither side is doubly-bridged.  Clamped to [0,1].
inline double p_q_violation(const SamplingParams& params, Position q, Position k,
                            const CircularSequence& s, const RepeatCatalog& catalog,
                            ProbabilityMode mode = ProbabilityMode::Exact) {
    if (k > q) throw std::invalid_argument("requires k <= q");
    auto not_doubly = [&](Position len) {
        double p = p_unbridged(len, params, mode);
        return 1.0 - (1.0 - p) * (1.0 - p);
    };
    double sum = 0.0;
    for (const auto& r : catalog.pairs)
        if (r.len <= q) sum += not_doubly(r.len);
    for (const auto& l : find_linked_pairs(s, catalog.pairs, k - 1, q))
        sum += not_doubly(l.first.len) * not_doubly(l.second.len);
    return std::min(sum, 1.0);
}

struct RequiredReads {
    std::optional<Position> n;  // empty: no N within the search cap
    double probability = 1.0;   // P at the returned N (when finite)
};

/// Smallest N with p_triple_violation + p_not_k_covered <= epsilon, found by
/// exponential search plus bisection and an exact downward walk (the triple
/// term 3p(1-p) is not monotone in N, so minimality is verified directly).
inline RequiredReads required_reads(const std::vector<TripleRepeat>& triples,
                                    Position L, Position G, Position k,
                                    double epsilon,
                                    ProbabilityMode mode = ProbabilityMode::Exact,
                                    Position n_cap = 1'000'000'000) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    auto total = [&](Position n) {
        SamplingParams p{n, L, G, 0};
        return p_triple_violation(p, triples, mode) + p_not_k_covered(p, k);
    };
    Position hi = 1;
    while (hi <= n_cap && total(hi) > epsilon) hi *= 2;
    if (hi > n_cap) return {std::nullopt, 1.0};
    Position lo = hi / 2;  // total(lo) > epsilon when lo >= 1
    while (lo + 1 < hi) {
        Position mid = lo + (hi - lo) / 2;
        if (total(mid) <= epsilon) hi = mid;
        else lo = mid;
    }
    while (hi > 1 && total(hi - 1) <= epsilon) --hi;
    return {hi, total(hi)};
}

struct CurveRow {
    Position read_length = 0;
    double coverage = 0.0;
    Position n_reads = 0;
    std::optional<Position> q_star;        // largest admissible q, empty on gap
    std::optional<double> upper_log10;     // D_{q*}(s)
    double lower_log10 = 0.0;              // D_L(s)
    bool gap = false;
};

/// For each (L, coverage): N = round(c G / L) (ties to even); the largest
/// q >= k with p_triple_violation + p_q_violation <= epsilon; emits the
/// upper bound D_q(s), the lower bound D_L(s), and a gap marker when no q
/// qualifies.
inline std::vector<CurveRow> distortion_bound_curve(
    const CircularSequence& s, Position k, const std::vector<Position>& L_grid,
    const std::vector<double>& coverage_grid, double epsilon,
    ProbabilityMode mode = ProbabilityMode::Exact) {
    if (L_grid.empty() || coverage_grid.empty())
        throw std::invalid_argument("grids must be nonempty");
    RepeatCatalog catalog = build_repeat_catalog(s);
    std::map<Position, double> dk_cache;
    auto dk_at = [&](Position q) {
        auto it = dk_cache.find(q);
        if (it == dk_cache.end())
            it = dk_cache.emplace(q, dk(s, q).log10_value).first;
        return it->second;
    };
    std::vector<CurveRow> rows;
    for (Position L : L_grid) {
        if (L < 1 || L > s.size())
            throw std::invalid_argument("L grid point out of [1, G]");
        for (double c : coverage_grid) {
            CurveRow row;
            row.read_length = L;
            row.coverage = c;
            row.n_reads = static_cast<Position>(
                std::nearbyint(c * static_cast<double>(s.size()) / static_cast<double>(L)));
            SamplingParams params{row.n_reads, L, s.size(), 0};
            double triple_term = p_triple_violation(params, catalog.triples, mode);
            row.q_star = std::nullopt;
            for (Position q = std::min<Position>(L, s.size()); q >= k; --q) {
                double total = triple_term + p_q_violation(params, q, k, s, catalog, mode);
                if (total <= epsilon) {
                    row.q_star = q;
                    break;
                }
            }
            if (row.q_star) row.upper_log10 = dk_at(*row.q_star);
            else row.gap = true;
            row.lower_log10 = dk_at(L);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace asmdist
