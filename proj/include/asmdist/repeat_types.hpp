#pragma once

#include <vector>

#include "asmdist/core.hpp"

namespace asmdist {

/// A maximal repeated pair: circular_substring(s,pos_a,len) equals
/// circular_substring(s,pos_b,len), and the copies disagree one symbol
/// to the left and one symbol to the right (indices mod G).  For periodic
/// genomes where the two copies agree all the way around the circle, the
/// length is capped at G-1 and `capped` is set.
struct RepeatPair {
    Position pos_a = 0;
    Position pos_b = 0;
    Position len = 0;
    bool capped = false;

    auto operator<=>(const RepeatPair&) const = default;
};

/// A maximal string occurring at >= 3 positions (possibly overlapping).
/// Maximal: no single-direction one-symbol extension keeps every
/// occurrence equal.  One entry per maximal string, carrying all
/// occurrence positions.
struct TripleRepeat {
    std::vector<Position> positions;  // sorted, size >= 3
    Position len = 0;
    bool capped = false;

    auto operator<=>(const TripleRepeat&) const = default;
};

/// Repeats (a1,a2,len ell) and (b1,b2,len m) with a2 < b1 <= a2 + ell + 1.
struct LinkedPair {
    RepeatPair first;
    RepeatPair second;
    Position link_len = 0;  // a2 + ell + 1 - b1

    auto operator<=>(const LinkedPair&) const = default;
};

/// Per-copy bridging flags for the copies of a repeat, in position order.
struct BridgingStatus {
    std::vector<bool> copy_bridged;

    bool all() const {
        for (bool b : copy_bridged)
            if (!b) return false;
        return true;
    }
    bool none() const {
        for (bool b : copy_bridged)
            if (b) return false;
        return true;
    }
};

enum class TripleClass { AllBridged, AllUnbridged, Mixed };

struct RepeatCatalog {
    std::vector<RepeatPair> pairs;
    std::vector<TripleRepeat> triples;
};

}  // namespace asmdist
