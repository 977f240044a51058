#pragma once

// Greedy merging assembler: starts from one disjoint path per read and, for
// match lengths ell = L down to k, merges every string that is still the
// unconsumed prefix or suffix of some read and occurs at least twice across
// the reads.  All occurrences of an acted-on string are merged onto one
// canonical path.  Also: k-covering and the bridging-condition checkers.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asmdist/core.hpp"
#include "asmdist/repeats.hpp"
#include "asmdist/seqgraph.hpp"
#include "asmdist/suffix_array.hpp"

namespace asmdist {

struct MatchCandidate {
    struct Occ {
        int read = 0;
        Position offset = 0;  // 1-based
        bool is_prefix = false;
        bool is_suffix = false;
    };
    std::string value;
    Position length = 0;
    std::vector<Occ> occurrences;

    bool operator==(const MatchCandidate& o) const {
        if (value != o.value || length != o.length ||
            occurrences.size() != o.occurrences.size())
            return false;
        for (std::size_t i = 0; i < occurrences.size(); ++i) {
            const auto& a = occurrences[i];
            const auto& b = o.occurrences[i];
            if (std::tie(a.read, a.offset, a.is_prefix, a.is_suffix) !=
                std::tie(b.read, b.offset, b.is_prefix, b.is_suffix))
                return false;
        }
        return true;
    }
};

enum class MatchStrategy { SuffixArrayScan, QuadraticScan };

/// All maximal exact matches of length >= k between read substrings, grouped
/// by string and carrying every occurrence of the string, ordered by length
/// descending then lexicographically.  A pair of occurrences is maximal when
/// it diverges (or hits a read boundary) one symbol to the left and one
/// symbol past the match.  Both strategies must produce identical output.
inline std::vector<MatchCandidate> find_match_candidates(
    const ReadSet& reads, Position k,
    MatchStrategy strategy = MatchStrategy::SuffixArrayScan) {
    if (k < 1) throw std::invalid_argument("match length floor must be >= 1");
    ReadIndex index(reads);
    const SuffixArray& sa = index.sa();
    const std::string& text = sa.text;
    const std::vector<int>& codes = sa.codes;
    int n = static_cast<int>(text.size());

    auto left_code = [&](int pos) { return pos == 0 ? -1 : codes[static_cast<std::size_t>(pos - 1)]; };

    std::set<std::pair<Position, std::string>> strings;  // (length, value)
    if (strategy == MatchStrategy::SuffixArrayScan) {
        sa.visit_lcp_intervals([&](int v, int l, int r) {
            if (v < k) return;
            // left-maximal for some cross pair unless every suffix in the
            // interval is preceded by the same symbol (boundary codes are
            // unique, so boundaries never collide)
            int first = left_code(sa.sa[static_cast<std::size_t>(l)]);
            bool all_same = true;
            for (int i = l + 1; i <= r && all_same; ++i)
                if (left_code(sa.sa[static_cast<std::size_t>(i)]) != first) all_same = false;
            if (all_same && r > l) return;
            strings.emplace(v, text.substr(static_cast<std::size_t>(sa.sa[static_cast<std::size_t>(l)]),
                                           static_cast<std::size_t>(v)));
        });
    } else {
        for (int a = 0; a < n; ++a) {
            if (!is_base_char(text[static_cast<std::size_t>(a)])) continue;
            for (int b = a + 1; b < n; ++b) {
                if (!is_base_char(text[static_cast<std::size_t>(b)])) continue;
                if (left_code(a) == left_code(b)) continue;  // extendable left
                int m = 0;
                while (a + m < n && b + m < n &&
                       codes[static_cast<std::size_t>(a + m)] ==
                           codes[static_cast<std::size_t>(b + m)])
                    ++m;
                if (m >= k)
                    strings.emplace(m, text.substr(static_cast<std::size_t>(a),
                                                   static_cast<std::size_t>(m)));
            }
        }
    }

    std::vector<MatchCandidate> out;
    for (const auto& [len, value] : strings) {
        MatchCandidate c;
        c.value = value;
        c.length = len;
        for (const auto& occ : index.occurrences(value)) {
            MatchCandidate::Occ o;
            o.read = occ.read;
            o.offset = occ.offset;
            o.is_prefix = occ.offset == 1;
            o.is_suffix = occ.offset + len - 1 == reads.read_length;
            c.occurrences.push_back(o);
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const MatchCandidate& a, const MatchCandidate& b) {
        if (a.length != b.length) return a.length > b.length;
        return a.value < b.value;
    });
    return out;
}

struct GreedyTrace {
    Position ell = 0;
    Position candidates = 0;  // |X| acted on this iteration
    Position merges = 0;      // union operations that changed the graph
};

/// Mutable assembly state: union-find over the initial path nodes plus the
/// two per-root flags that decide graph-prefix/suffix status in O(1).
class GreedyState {
public:
    GreedyState(const ReadSet& reads, Position k)
        : reads_(&reads), k_(k), L_(reads.read_length),
          nodes_per_read_(reads.read_length - k + 2) {
        if (k < 1 || k > L_)
            throw std::invalid_argument("graph order must satisfy 1 <= k <= L");
        if (reads.count() == 0)
            throw std::invalid_argument("read set is empty");
        std::size_t total =
            static_cast<std::size_t>(reads.count() * nodes_per_read_);
        parent_.resize(total);
        for (std::size_t i = 0; i < total; ++i) parent_[i] = static_cast<int>(i);
        has_inedge_.assign(total, false);
        has_outedge_.assign(total, false);
        for (int r = 0; r < reads.count(); ++r) {
            for (Position j = 0; j < nodes_per_read_; ++j) {
                std::size_t id = static_cast<std::size_t>(node_id(r, j));
                has_inedge_[id] = j > 0;
                has_outedge_[id] = j < nodes_per_read_ - 1;
            }
        }
    }

    int node_id(int read, Position j) const {
        return static_cast<int>(read * nodes_per_read_ + j);
    }
    int root(int read, Position j) const { return find(node_id(read, j)); }

    bool head_is_graph_prefix(int read) const {
        return !has_inedge_[static_cast<std::size_t>(root(read, 0))];
    }
    bool tail_is_graph_suffix(int read) const {
        return !has_outedge_[static_cast<std::size_t>(root(read, nodes_per_read_ - 1))];
    }

    /// Merge the occurrence paths of a length-ell string; returns the number
    /// of effective unions.
    Position merge_occurrences(const std::string& x,
                               const std::vector<ReadOccurrence>& occs) {
        Position ell = static_cast<Position>(x.size());
        Position merges = 0;
        const auto& canon = occs.front();
        for (std::size_t oi = 1; oi < occs.size(); ++oi) {
            for (Position d = 0; d <= ell - k_ + 1; ++d) {
                int a = node_id(canon.read, canon.offset - 1 + d);
                int b = node_id(occs[oi].read, occs[oi].offset - 1 + d);
                if (unite(a, b)) ++merges;
            }
        }
        return merges;
    }

    /// Freeze into a sequence graph: nodes are union-find classes (ordered by
    /// smallest member), edges deduplicated by (src, dst, label), provenance
    /// unioned from read placements.
    SequenceGraph freeze() const {
        SequenceGraph g;
        g.order = k_;
        bool placed = reads_->placed();
        g.has_provenance = placed;
        Position G = placed ? *reads_->genome_length : 0;
        std::map<int, int> id_of_root;
        std::size_t total = parent_.size();
        for (std::size_t i = 0; i < total; ++i) {
            int r = find(static_cast<int>(i));
            if (id_of_root.emplace(r, static_cast<int>(id_of_root.size())).second)
                g.nodes.push_back({});
        }
        auto wrap = [&](Position t) {
            Position m = (t - 1) % G;
            if (m < 0) m += G;
            return m + 1;
        };
        for (int r = 0; r < reads_->count(); ++r) {
            const Read& rd = reads_->reads[static_cast<std::size_t>(r)];
            for (Position j = 0; j < nodes_per_read_; ++j) {
                int nid = id_of_root.at(root(r, j));
                auto& node = g.nodes[static_cast<std::size_t>(nid)];
                node.label = rd.content.slice(j + 1, j + k_ - 1).str();
                if (placed)
                    for (Position t : *rd.true_starts) node.provenance.insert(wrap(t + j));
            }
        }
        std::set<std::tuple<int, int, std::string>> dedup;
        for (int r = 0; r < reads_->count(); ++r) {
            const Read& rd = reads_->reads[static_cast<std::size_t>(r)];
            for (Position j = 0; j + 1 < nodes_per_read_; ++j)
                dedup.emplace(id_of_root.at(root(r, j)), id_of_root.at(root(r, j + 1)),
                              rd.content.slice(j + 1, j + k_).str());
        }
        for (auto& [u, v, lab] : dedup) g.edges.push_back({u, v, lab, 1});
        return g;
    }

private:
    int find(int x) const {
        while (parent_[static_cast<std::size_t>(x)] != x)
            x = parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);  // smaller id stays root: deterministic
        parent_[static_cast<std::size_t>(b)] = a;
        bool in = has_inedge_[static_cast<std::size_t>(a)] ||
                  has_inedge_[static_cast<std::size_t>(b)];
        bool out = has_outedge_[static_cast<std::size_t>(a)] ||
                   has_outedge_[static_cast<std::size_t>(b)];
        has_inedge_[static_cast<std::size_t>(a)] = in;
        has_outedge_[static_cast<std::size_t>(a)] = out;
        return true;
    }

    const ReadSet* reads_;
    Position k_, L_, nodes_per_read_;
    mutable std::vector<int> parent_;
    std::vector<bool> has_inedge_, has_outedge_;
};

struct GreedyOptions {
    std::vector<GreedyTrace>* trace = nullptr;
    // called after each iteration with the match length just processed
    std::function<void(Position ell, const GreedyState& state)> per_iteration;
};

/// Algorithm: initial graph of disjoint read paths; for ell = L..k, act on
/// every length-ell string that is a current graph prefix or suffix and has
/// at least two occurrences, in lexicographic order, re-checking currency
/// immediately before acting; merging joins all occurrences of the string.
inline SequenceGraph greedy_assemble(const ReadSet& reads, Position k,
                                     const GreedyOptions& options = {}) {
    if (k > reads.read_length)
        throw std::invalid_argument("graph order k must be <= read length");
    GreedyState state(reads, k);
    ReadIndex index(reads);
    Position L = reads.read_length;
    int n_reads = static_cast<int>(reads.count());

    for (Position ell = L; ell >= k; --ell) {
        // candidate strings with the read ends they anchor to
        std::map<std::string, std::vector<std::pair<int, bool>>> anchors;  // read, is_prefix
        for (int r = 0; r < n_reads; ++r) {
            const std::string& content = reads.reads[static_cast<std::size_t>(r)].content.str();
            if (state.head_is_graph_prefix(r))
                anchors[content.substr(0, static_cast<std::size_t>(ell))].push_back({r, true});
            if (state.tail_is_graph_suffix(r))
                anchors[content.substr(static_cast<std::size_t>(L - ell))].push_back({r, false});
        }
        Position acted = 0, merged = 0;
        for (const auto& [x, ends] : anchors) {  // std::map: lexicographic
            // currency may have been consumed by an earlier merge this round
            bool current = false;
            for (const auto& [r, is_prefix] : ends) {
                if (is_prefix ? state.head_is_graph_prefix(r)
                              : state.tail_is_graph_suffix(r)) {
                    current = true;
                    break;
                }
            }
            if (!current) continue;
            auto occs = index.occurrences(x);
            if (occs.size() < 2) continue;
            ++acted;
            merged += state.merge_occurrences(x, occs);
        }
        if (options.trace) options.trace->push_back({ell, acted, merged});
        if (options.per_iteration) options.per_iteration(ell, state);
    }
    return state.freeze();
}

/// Def: every circular k-window of s contains at least one read start.
inline bool k_covers(const ReadSet& reads, const CircularSequence& s, Position k) {
    reads.require_placed();
    if (k < 1 || k > s.size())
        throw std::invalid_argument("window length must satisfy 1 <= k <= G");
    std::set<Position> starts;
    for (const auto& r : reads.reads)
        for (Position t : *r.true_starts) starts.insert(s.wrap(t));
    if (starts.empty()) return false;
    // max circular gap between consecutive starts must be <= k
    Position prev = *starts.rbegin() - s.size();  // wrap the last before the first
    Position max_gap = 0;
    for (Position t : starts) {
        max_gap = std::max(max_gap, t - prev);
        prev = t;
    }
    return max_gap <= k;
}

/// R k-covers s and every triple repeat is all-bridged or all-unbridged.
inline bool check_theorem1_conditions(const CircularSequence& s, const ReadSet& reads,
                                      Position k, const RepeatCatalog* catalog = nullptr) {
    if (!k_covers(reads, s, k)) return false;
    RepeatCatalog local;
    if (!catalog) {
        local = build_repeat_catalog(s);
        catalog = &local;
    }
    for (const auto& t : catalog->triples)
        if (classify_triple(t, reads) == TripleClass::Mixed) return false;
    return true;
}

/// The three bridging conditions: (1) triples all-bridged or all-unbridged,
/// (2) every repeat of length <= q doubly-bridged, (3) for linked pairs with
/// link length in [k-1, q], at least one side doubly-bridged.
inline bool check_theorem2_conditions(const CircularSequence& s, const ReadSet& reads,
                                      Position k, Position q,
                                      const RepeatCatalog* catalog = nullptr) {
    if (k > q) throw std::invalid_argument("requires k <= q");
    RepeatCatalog local;
    if (!catalog) {
        local = build_repeat_catalog(s);
        catalog = &local;
    }
    for (const auto& t : catalog->triples)
        if (classify_triple(t, reads) == TripleClass::Mixed) return false;
    for (const auto& p : catalog->pairs)
        if (p.len <= q && !pair_doubly_bridged(p, reads)) return false;
    for (const auto& l : find_linked_pairs(s, catalog->pairs, k - 1, q))
        if (!pair_doubly_bridged(l.first, reads) &&
            !pair_doubly_bridged(l.second, reads))
            return false;
    return true;
}

/// Cycle graph of order k with every maximal repeat that is not doubly
/// bridged (and long enough to appear at order k) contracted.
inline SequenceGraph build_unbridged_contraction(const CircularSequence& s,
                                                 const ReadSet& reads, Position k,
                                                 const RepeatCatalog* catalog = nullptr) {
    RepeatCatalog local;
    if (!catalog) {
        local = build_repeat_catalog(s);
        catalog = &local;
    }
    std::vector<RepeatPair> unbridged;
    for (const auto& p : catalog->pairs)
        if (p.len >= k && !pair_doubly_bridged(p, reads)) unbridged.push_back(p);
    return contract_repeats(build_cycle_graph(s, k), unbridged);
}

}  // namespace asmdist
