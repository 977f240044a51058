#pragma once

// Repeat statistics of a known circular genome: maximal repeated pairs,
// maximal triple repeats, linked pairs, bridging against a placed read
// set, and the operational critical read length.

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "asmdist/core.hpp"
#include "asmdist/distortion.hpp"
#include "asmdist/repeat_types.hpp"

namespace asmdist {

/// Every maximal repeated pair of s, one entry per unordered position pair.
/// Scans each circular offset d for runs of positions with s[i] == s[i+d];
/// a maximal run is exactly a maximal pair.  An offset whose run wraps the
/// whole circle (periodic genome) yields a single capped pair of length G-1.
inline std::vector<RepeatPair> find_maximal_repeats(const CircularSequence& s) {
    if (s.size() < 2)
        throw std::invalid_argument("repeat scan requires G >= 2");
    Position G = s.size();
    std::set<std::pair<Position, Position>> seen;
    std::vector<RepeatPair> out;
    std::vector<char> eq(static_cast<std::size_t>(G));
    for (Position d = 1; d < G; ++d) {
        bool all = true;
        for (Position i = 1; i <= G; ++i) {
            bool e = s.at(i) == s.at(i + d);
            eq[static_cast<std::size_t>(i - 1)] = e;
            all = all && e;
        }
        if (all) {
            Position a = 1, b = s.wrap(1 + d);
            auto key = std::minmax(a, b);
            if (seen.insert({key.first, key.second}).second)
                out.push_back({key.first, key.second, G - 1, true});
            continue;
        }
        for (Position i = 1; i <= G; ++i) {
            // run start: eq[i] and not eq[i-1] (circular)
            if (!eq[static_cast<std::size_t>(i - 1)]) continue;
            Position prev = s.wrap(i - 1);
            if (eq[static_cast<std::size_t>(prev - 1)]) continue;
            Position len = 0;
            Position j = i;
            while (eq[static_cast<std::size_t>(j - 1)]) {
                ++len;
                j = s.wrap(j + 1);
            }
            Position a = i, b = s.wrap(i + d);
            auto key = std::minmax(a, b);
            if (seen.insert({key.first, key.second}).second)
                out.push_back({key.first, key.second, len, false});
        }
    }
    std::sort(out.begin(), out.end(), [](const RepeatPair& x, const RepeatPair& y) {
        return std::tie(x.pos_a, x.pos_b, x.len) < std::tie(y.pos_a, y.pos_b, y.len);
    });
    return out;
}

enum class TripleEmission { PerMaximalString, AllSubsets };

/// Maximal strings occurring at >= 3 circular positions.  Maximal: no
/// one-symbol extension (left or right) keeps every occurrence equal,
/// i.e. the occurrence count drops strictly under every extension.
/// Groups of positions that stay identical all the way around the circle
/// (periodic genomes) are emitted capped at length G-1.
inline std::vector<TripleRepeat> find_triple_repeats(
    const CircularSequence& s, TripleEmission mode = TripleEmission::PerMaximalString) {
    if (s.size() < 3)
        throw std::invalid_argument("triple scan requires G >= 3");
    Position G = s.size();
    std::vector<TripleRepeat> out;

    // refine position groups by substring length
    std::vector<std::vector<Position>> groups;
    {
        std::map<char, std::vector<Position>> by_char;
        for (Position i = 1; i <= G; ++i) by_char[s.at(i)].push_back(i);
        for (auto& [c, v] : by_char)
            if (v.size() >= 3) groups.push_back(std::move(v));
        // length-1 maximality for these initial groups is checked below
    }
    for (Position len = 1; len <= G - 1 && !groups.empty(); ++len) {
        std::vector<std::vector<Position>> next;
        for (auto& grp : groups) {
            // left-maximal iff the symbols to the left are not all equal
            bool left_ext = true;
            char lc = s.at(grp[0] - 1);
            for (Position p : grp)
                if (s.at(p - 1) != lc) left_ext = false;
            // refine by next symbol to the right
            std::map<char, std::vector<Position>> split;
            for (Position p : grp) split[s.at(p + len)].push_back(p);
            bool right_ext = split.size() == 1;
            if (!left_ext && !right_ext) {
                out.push_back({grp, len, false});
            }
            if (len < G - 1) {
                for (auto& [c, v] : split)
                    if (v.size() >= 3) next.push_back(std::move(v));
            } else if (left_ext || right_ext) {
                // still extendable at the cap: periodic group
                out.push_back({grp, G - 1, true});
            }
        }
        groups = std::move(next);
    }
    for (auto& t : out) std::sort(t.positions.begin(), t.positions.end());
    std::sort(out.begin(), out.end(), [](const TripleRepeat& a, const TripleRepeat& b) {
        return std::tie(a.len, a.positions) < std::tie(b.len, b.positions);
    });

    if (mode == TripleEmission::AllSubsets) {
        std::vector<TripleRepeat> expanded;
        for (const auto& t : out) {
            std::size_t n = t.positions.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    for (std::size_t k = j + 1; k < n; ++k)
                        expanded.push_back(
                            {{t.positions[i], t.positions[j], t.positions[k]},
                             t.len,
                             t.capped});
        }
        return expanded;
    }
    return out;
}

/// Ordered pairs of catalog repeats with link length a2 + ell + 1 - b1 in
/// [min_link, max_link], where a2 is the later copy of the first repeat and
/// b1 the earlier copy of the second (a2 < b1 <= a2 + ell + 1).
inline std::vector<LinkedPair> find_linked_pairs(const CircularSequence&,
                                                 const std::vector<RepeatPair>& repeats,
                                                 Position min_link, Position max_link) {
    if (min_link > max_link)
        throw std::invalid_argument("min_link must be <= max_link");
    std::vector<LinkedPair> out;
    for (const auto& r1 : repeats) {
        Position a2 = std::max(r1.pos_a, r1.pos_b);
        for (const auto& r2 : repeats) {
            if (&r1 == &r2) continue;
            Position b1 = std::min(r2.pos_a, r2.pos_b);
            if (!(a2 < b1 && b1 <= a2 + r1.len + 1)) continue;
            Position link = a2 + r1.len + 1 - b1;
            if (link < min_link || link > max_link) continue;
            out.push_back({r1, r2, link});
        }
    }
    return out;
}

/// A copy at position t with length ell is bridged iff some read start t0
/// satisfies t0 <= t-1 and t0 + L - 1 >= t + ell (circular): the read
/// strictly extends beyond the copy on both sides.  Requires placed reads.
inline bool copy_is_bridged(Position copy_pos, Position copy_len,
                            const ReadSet& reads) {
    reads.require_placed();
    Position G = *reads.genome_length;
    Position L = reads.read_length;
    if (copy_len > L - 2) return false;  // needs span >= ell + 2
    // valid starts form the circular window [copy_pos + copy_len + 1 - L, copy_pos - 1]
    Position win_len = L - copy_len - 1;
    Position win_start = copy_pos + copy_len + 1 - L;  // may be <= 0; wrap below
    auto wrap = [&](Position t) {
        Position m = (t - 1) % G;
        if (m < 0) m += G;
        return m + 1;
    };
    Position ws = wrap(win_start);
    for (const auto& r : reads.reads) {
        for (Position t0 : *r.true_starts) {
            Position off = wrap(t0 - ws + 1);  // 1-based offset of t0 in window
            if (off <= win_len) return true;
        }
    }
    return false;
}

/// Per-copy bridging flags for a repeat's copies (positions in order).
inline BridgingStatus bridging_status(const std::vector<Position>& copies,
                                      Position copy_len, const ReadSet& reads) {
    BridgingStatus st;
    st.copy_bridged.reserve(copies.size());
    for (Position p : copies)
        st.copy_bridged.push_back(copy_is_bridged(p, copy_len, reads));
    return st;
}

inline TripleClass classify_triple(const TripleRepeat& t, const ReadSet& reads) {
    BridgingStatus st = bridging_status(t.positions, t.len, reads);
    if (st.all()) return TripleClass::AllBridged;
    if (st.none()) return TripleClass::AllUnbridged;
    return TripleClass::Mixed;
}

inline bool pair_doubly_bridged(const RepeatPair& r, const ReadSet& reads) {
    return copy_is_bridged(r.pos_a, r.len, reads) &&
           copy_is_bridged(r.pos_b, r.len, reads);
}

/// Smallest k such that B_k(s) has exactly one Eulerian cycle distinct up
/// to edge multiplicity.  ec(B_k) is non-increasing in k and equals 1 at
/// k = G, so a binary search finds the threshold.
inline Position critical_read_length(const CircularSequence& s) {
    if (s.size() < 2)
        throw std::invalid_argument("critical read length requires G >= 2");
    auto unique_cycle = [&](Position k) {
        DistinctCount c =
            count_eulerian_distinct(CountGraph::from_sequence_graph(build_kmer_graph(s, k)));
        return c.value == 1 && !c.upper_bound_only;
    };
    Position lo = 1, hi = s.size();
    while (lo < hi) {
        Position mid = lo + (hi - lo) / 2;
        if (unique_cycle(mid)) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

inline RepeatCatalog build_repeat_catalog(const CircularSequence& s) {
    RepeatCatalog cat;
    if (s.size() >= 2) cat.pairs = find_maximal_repeats(s);
    if (s.size() >= 3) cat.triples = find_triple_repeats(s);
    return cat;
}

/// CSV rows (kind, positions..., length, capped); positions ';'-joined.
inline void write_catalog_csv(std::ostream& os, const RepeatCatalog& cat,
                              const std::vector<LinkedPair>* linked = nullptr) {
    os << "kind,positions,length,capped\n";
    for (const auto& p : cat.pairs)
        os << "pair," << p.pos_a << ";" << p.pos_b << "," << p.len << ","
           << (p.capped ? 1 : 0) << "\n";
    for (const auto& t : cat.triples) {
        os << "triple,";
        for (std::size_t i = 0; i < t.positions.size(); ++i)
            os << (i ? ";" : "") << t.positions[i];
        os << "," << t.len << "," << (t.capped ? 1 : 0) << "\n";
    }
    if (linked) {
        for (const auto& l : *linked)
            os << "linked," << l.first.pos_a << ";" << l.first.pos_b << ";"
               << l.second.pos_a << ";" << l.second.pos_b << "," << l.link_len
               << ",0\n";
    }
}

}  // namespace asmdist
