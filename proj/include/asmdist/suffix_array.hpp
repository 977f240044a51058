#pragma once

// Suffix array (prefix doubling) + LCP (Kasai), and a multi-read substring
// index.  The index sorts suffixes over an integer alphabet in which every
// read separator gets its own code below the base codes, so no common
// prefix ever crosses a read boundary and boundary symbols never compare
// equal to each other.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "asmdist/core.hpp"

namespace asmdist {

struct SuffixArray {
    std::string text;        // raw bytes, used for pattern search
    std::vector<int> codes;  // comparison alphabet
    std::vector<int> sa;     // suffix start offsets, sorted by code order
    std::vector<int> rank;   // inverse of sa
    std::vector<int> lcp;    // lcp[i] = lcp(sa[i-1], sa[i]) in codes; lcp[0] = 0

    static SuffixArray build(std::string text) {
        std::vector<int> codes(text.size());
        for (std::size_t i = 0; i < text.size(); ++i)
            codes[i] = static_cast<unsigned char>(text[i]);
        return build_with_codes(std::move(text), std::move(codes));
    }

    static SuffixArray build_with_codes(std::string text, std::vector<int> codes) {
        SuffixArray r;
        r.text = std::move(text);
        r.codes = std::move(codes);
        int n = static_cast<int>(r.codes.size());
        r.sa.resize(static_cast<std::size_t>(n));
        r.rank.resize(static_cast<std::size_t>(n));
        std::iota(r.sa.begin(), r.sa.end(), 0);
        std::vector<int> rk = r.codes, tmp(static_cast<std::size_t>(n));
        for (int len = 1; n > 1; len <<= 1) {
            auto cmp = [&](int a, int b) {
                if (rk[static_cast<std::size_t>(a)] != rk[static_cast<std::size_t>(b)])
                    return rk[static_cast<std::size_t>(a)] < rk[static_cast<std::size_t>(b)];
                int ra = a + len < n ? rk[static_cast<std::size_t>(a + len)] : -1;
                int rb = b + len < n ? rk[static_cast<std::size_t>(b + len)] : -1;
                return ra < rb;
            };
            std::sort(r.sa.begin(), r.sa.end(), cmp);
            tmp[static_cast<std::size_t>(r.sa[0])] = 0;
            for (int i = 1; i < n; ++i)
                tmp[static_cast<std::size_t>(r.sa[static_cast<std::size_t>(i)])] =
                    tmp[static_cast<std::size_t>(r.sa[static_cast<std::size_t>(i - 1)])] +
                    (cmp(r.sa[static_cast<std::size_t>(i - 1)],
                         r.sa[static_cast<std::size_t>(i)])
                         ? 1
                         : 0);
            rk = tmp;
            if (rk[static_cast<std::size_t>(r.sa[static_cast<std::size_t>(n - 1)])] == n - 1)
                break;
        }
        for (int i = 0; i < n; ++i)
            r.rank[static_cast<std::size_t>(r.sa[static_cast<std::size_t>(i)])] = i;
        // Kasai over codes
        r.lcp.assign(static_cast<std::size_t>(n), 0);
        int h = 0;
        for (int i = 0; i < n; ++i) {
            if (r.rank[static_cast<std::size_t>(i)] == 0) {
                h = 0;
                continue;
            }
            int j = r.sa[static_cast<std::size_t>(r.rank[static_cast<std::size_t>(i)] - 1)];
            while (i + h < n && j + h < n &&
                   r.codes[static_cast<std::size_t>(i + h)] ==
                       r.codes[static_cast<std::size_t>(j + h)])
                ++h;
            r.lcp[static_cast<std::size_t>(r.rank[static_cast<std::size_t>(i)])] = h;
            if (h > 0) --h;
        }
        return r;
    }

    /// Half-open SA range [lo, hi) of suffixes whose text starts with `pat`.
    /// Sound for patterns over {A,C,G,T} because separator codes sort below
    /// base codes just as '#' sorts below 'A' in the raw text.
    std::pair<int, int> locate(std::string_view pat) const {
        int n = static_cast<int>(sa.size());
        auto suffix_lt = [&](int suf, std::string_view p) {
            std::string_view s(text.data() + suf, text.size() - static_cast<std::size_t>(suf));
            return s.substr(0, p.size()) < p;
        };
        auto suffix_le = [&](int suf, std::string_view p) {
            std::string_view s(text.data() + suf, text.size() - static_cast<std::size_t>(suf));
            return s.substr(0, p.size()) <= p;
        };
        int lo = 0, hi = n;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (suffix_lt(sa[static_cast<std::size_t>(mid)], pat)) lo = mid + 1;
            else hi = mid;
        }
        int lo2 = lo, hi2 = n;
        while (lo2 < hi2) {
            int mid = (lo2 + hi2) / 2;
            if (suffix_le(sa[static_cast<std::size_t>(mid)], pat)) lo2 = mid + 1;
            else hi2 = mid;
        }
        return {lo, lo2};
    }

    /// Enumerate internal LCP intervals (value v, sa-range [l, r]), each the
    /// maximal range of suffixes sharing a length-v common prefix with at
    /// least two distinct continuations.  Classic stack sweep.
    void visit_lcp_intervals(
        const std::function<void(int v, int l, int r)>& visit) const {
        struct Item {
            int lcp, left;
        };
        std::vector<Item> stack;
        int n = static_cast<int>(sa.size());
        for (int i = 1; i <= n; ++i) {
            int left = i - 1;
            int cur = i < n ? lcp[static_cast<std::size_t>(i)] : 0;
            while (!stack.empty() && cur < stack.back().lcp) {
                Item it = stack.back();
                stack.pop_back();
                if (it.lcp > 0) visit(it.lcp, it.left, i - 1);
                left = it.left;
            }
            if (i < n && (stack.empty() || cur > stack.back().lcp))
                stack.push_back({cur, left});
        }
    }
};

/// Occurrence of a substring inside a read set.
struct ReadOccurrence {
    int read = 0;         // read index, 0-based
    Position offset = 0;  // 1-based offset within the read

    auto operator<=>(const ReadOccurrence&) const = default;
};

/// Substring index over all reads of a ReadSet.
class ReadIndex {
public:
    explicit ReadIndex(const ReadSet& rs) : read_length_(rs.read_length) {
        std::string text;
        std::vector<int> codes;
        int base = static_cast<int>(rs.count());  // separators take 0..N-1
        text.reserve(static_cast<std::size_t>(rs.count() * (rs.read_length + 1)));
        for (int ri = 0; ri < static_cast<int>(rs.count()); ++ri) {
            origin_.push_back(static_cast<int>(text.size()));
            for (char c : rs.reads[static_cast<std::size_t>(ri)].content.str()) {
                text.push_back(c);
                codes.push_back(base + static_cast<int>(base_from_char(c)));
            }
            text.push_back('#');
            codes.push_back(ri);
        }
        sa_ = SuffixArray::build_with_codes(std::move(text), std::move(codes));
    }

    /// All (read, offset) occurrences of `pat`, sorted.
    std::vector<ReadOccurrence> occurrences(std::string_view pat) const {
        std::vector<ReadOccurrence> out;
        auto [lo, hi] = sa_.locate(pat);
        out.reserve(static_cast<std::size_t>(hi - lo));
        for (int i = lo; i < hi; ++i) out.push_back(to_occurrence(sa_.sa[static_cast<std::size_t>(i)]));
        std::sort(out.begin(), out.end());
        return out;
    }

    ReadOccurrence to_occurrence(int text_pos) const {
        auto it = std::upper_bound(origin_.begin(), origin_.end(), text_pos);
        int read = static_cast<int>(it - origin_.begin()) - 1;
        return {read, text_pos - origin_[static_cast<std::size_t>(read)] + 1};
    }

    const SuffixArray& sa() const { return sa_; }
    Position read_length() const { return read_length_; }

private:
    Position read_length_;
    std::vector<int> origin_;
    SuffixArray sa_;
};

}  // namespace asmdist
