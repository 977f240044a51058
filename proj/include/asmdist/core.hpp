#pragma once

// Alphabet, circular-sequence and substring/overlap primitives.
//
// Positions and ranges in the public API are 1-based and inclusive,
// x[i:j] = (x[i], ..., x[j]).  Circular sequences index modulo their
// length, so s[t + G] == s[t].

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asmdist {

inline constexpr const char* kVersion = "0.1.0";

using Position = std::int64_t;

enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline bool is_base_char(char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

inline char base_to_char(Base b) {
    return "ACGT"[static_cast<int>(b)];
}

inline Base base_from_char(char c) {
    switch (c) {
        case 'A': return Base::A;
        case 'C': return Base::C;
        case 'G': return Base::G;
        case 'T': return Base::T;
        default: break;
    }
    throw std::invalid_argument(std::string("invalid symbol '") + c +
                                "': alphabet is {A,C,G,T}");
}

inline void validate_alphabet(std::string_view sym) {
    for (std::size_t i = 0; i < sym.size(); ++i) {
        if (!is_base_char(sym[i]))
            throw std::invalid_argument("invalid symbol '" +
                                        std::string(1, sym[i]) +
                                        "' at offset " + std::to_string(i + 1));
    }
}

/// A linear string over {A,C,G,T}.  May be empty.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::string sym) : sym_(std::move(sym)) {
        validate_alphabet(sym_);
    }

    Position size() const { return static_cast<Position>(sym_.size()); }
    bool empty() const { return sym_.empty(); }
    const std::string& str() const { return sym_; }

    /// 1-based symbol access.
    char at(Position i) const {
        if (i < 1 || i > size())
            throw std::invalid_argument("index out of range");
        return sym_[static_cast<std::size_t>(i - 1)];
    }

    /// x[i:j], 1-based inclusive.  Empty when j < i.
    Sequence slice(Position i, Position j) const {
        if (j < i) return Sequence();
        if (i < 1 || j > size())
            throw std::invalid_argument("slice out of range");
        return Sequence(sym_.substr(static_cast<std::size_t>(i - 1),
                                    static_cast<std::size_t>(j - i + 1)));
    }

    Sequence prefix(Position len) const { return slice(1, len); }
    Sequence suffix(Position len) const { return slice(size() - len + 1, size()); }

    Sequence concat(const Sequence& other) const {
        Sequence r;
        r.sym_ = sym_ + other.sym_;
        return r;
    }

    bool operator==(const Sequence&) const = default;
    auto operator<=>(const Sequence&) const = default;

private:
    std::string sym_;
};

/// The maximum ell <= min(|x|,|y|) such that the ell-suffix of x equals
/// the ell-prefix of y; 0 if none.  Not symmetric in its arguments.
inline Position overlap_length(const Sequence& x, const Sequence& y) {
    const std::string& a = x.str();
    const std::string& b = y.str();
    Position bound = std::min(x.size(), y.size());
    for (Position ell = bound; ell >= 1; --ell) {
        if (a.compare(a.size() - static_cast<std::size_t>(ell),
                      static_cast<std::size_t>(ell), b, 0,
                      static_cast<std::size_t>(ell)) == 0)
            return ell;
    }
    return 0;
}

/// Circular genome sequence of length G >= 1; index arithmetic is mod G.
class CircularSequence {
public:
    explicit CircularSequence(std::string sym) : sym_(std::move(sym)) {
        if (sym_.empty())
            throw std::invalid_argument("circular sequence must be nonempty");
        validate_alphabet(sym_);
    }
    explicit CircularSequence(const Sequence& s) : CircularSequence(s.str()) {}

    Position size() const { return static_cast<Position>(sym_.size()); }
    const std::string& str() const { return sym_; }

    /// Wrap any integer position onto [1, G].
    Position wrap(Position t) const {
        Position g = size();
        Position m = (t - 1) % g;
        if (m < 0) m += g;
        return m + 1;
    }

    char at(Position t) const { return sym_[static_cast<std::size_t>(wrap(t) - 1)]; }

    bool operator==(const CircularSequence&) const = default;

private:
    std::string sym_;
};

/// s[start], s[start+1], ..., s[start+len-1] with wraparound.
inline Sequence circular_substring(const CircularSequence& s, Position start,
                                   Position len) {
    if (len < 1) throw std::invalid_argument("substring length must be >= 1");
    if (start < 1 || start > s.size())
        throw std::invalid_argument("start position out of [1, G]");
    std::string out;
    out.reserve(static_cast<std::size_t>(len));
    for (Position i = 0; i < len; ++i) out.push_back(s.at(start + i));
    return Sequence(std::move(out));
}

/// Lexicographically minimal rotation of a string (Booth-style scan).
inline std::string min_rotation(std::string_view v) {
    if (v.empty()) return {};
    std::string d(v);
    d += v;
    std::size_t n = v.size(), i = 0, j = 1;
    while (j < n) {
        std::size_t k = 0;
        while (k < n && d[i + k] == d[j + k]) ++k;
        if (k >= n) break;
        if (d[i + k] <= d[j + k])
            j += k + 1;
        else {
            i = std::max(i + k + 1, j);
            j = i + 1;
        }
    }
    return d.substr(i, n);
}

/// Circular sequences are equal up to rotation iff their canonical
/// (minimal) rotations coincide.
inline bool rotation_equal(const CircularSequence& a, const CircularSequence& b) {
    if (a.size() != b.size()) return false;
    return min_rotation(a.str()) == min_rotation(b.str());
}

/// Multiset of fixed-order substrings with positive multiplicities.
struct KmerComposition {
    Position order = 0;
    std::map<std::string, Position> entries;

    Position total() const {
        Position t = 0;
        for (auto& [k, m] : entries) t += m;
        return t;
    }

    std::vector<std::string> support() const {
        std::vector<std::string> out;
        out.reserve(entries.size());
        for (auto& [k, m] : entries) out.push_back(k);
        return out;
    }

    bool operator==(const KmerComposition&) const = default;
};

/// The L-mer composition of s: multiset { s[i : i+L-1] : 1 <= i <= G },
/// total multiplicity G.
inline KmerComposition lmer_composition(const CircularSequence& s, Position L) {
    if (L < 1) throw std::invalid_argument("composition order must be >= 1");
    KmerComposition comp;
    comp.order = L;
    for (Position i = 1; i <= s.size(); ++i)
        comp.entries[circular_substring(s, i, L).str()] += 1;
    return comp;
}

/// A sampled read: fixed-length content plus, in validation mode, the set
/// of genome positions where the content occurs.
struct Read {
    Sequence content;
    std::optional<std::vector<Position>> true_starts;
};

struct ReadSet {
    Position read_length = 0;
    std::optional<Position> genome_length;  // set when reads are placed
    std::vector<Read> reads;

    Position count() const { return static_cast<Position>(reads.size()); }

    bool placed() const {
        if (!genome_length) return false;
        for (const auto& r : reads)
            if (!r.true_starts) return false;
        return true;
    }

    void require_placed() const {
        if (!placed())
            throw std::logic_error("operation requires reads with true_starts");
    }
};

/// Uniform integer in [1, n] drawn by rejection; stable across platforms
/// for a fixed mt19937_64 stream.
inline Position uniform_position(std::mt19937_64& rng, Position n) {
    std::uint64_t un = static_cast<std::uint64_t>(n);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    for (;;) {
        std::uint64_t v = rng();
        if (v < limit) return static_cast<Position>(v % un) + 1;
    }
}

}  // namespace asmdist
