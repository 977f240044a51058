#pragma once

// Exact Eulerian-cycle counting and the assembly-graph distortion metric.
//
// Counts are exact unbounded integers throughout.  The raw circuit count of
// an Eulerian multigraph (parallel edges distinct, circuits identified up to
// rotation) is T * prod_v (d_out(v) - 1)!, with T the arborescence count from
// the directed matrix-tree determinant.  Circuits are further identified when
// they traverse the same edge classes in the same cyclic order; dividing the
// raw count by prod m! over edge classes is exact whenever some class has
// multiplicity one, and a brute-force enumeration covers the remaining small
// graphs.  Distortion values are base-10 logarithms of these counts.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asmdist/core.hpp"
#include "asmdist/seqgraph.hpp"

namespace asmdist {

using BigInt = boost::multiprecision::cpp_int;

/// Eulerian multigraph in counting form: edge classes with multiplicities.
/// The tag distinguishes parallel classes between the same node pair (edge
/// labels in order-1 sequence graphs); it is empty for plain multigraphs.
struct CountGraph {
    struct EdgeClass {
        int src = 0;
        int dst = 0;
        std::string tag;
        Position multiplicity = 1;
    };
    int node_count = 0;
    std::vector<EdgeClass> classes;

    Position total_multiplicity() const {
        Position t = 0;
        for (const auto& c : classes) t += c.multiplicity;
        return t;
    }

    static CountGraph from_sequence_graph(const SequenceGraph& g) {
        CountGraph cg;
        cg.node_count = static_cast<int>(g.nodes.size());
        for (const auto& e : g.edges)
            cg.classes.push_back({e.src, e.dst, e.label, e.multiplicity});
        return cg;
    }
};

namespace detail {

inline std::vector<Position> out_degrees(const CountGraph& g) {
    std::vector<Position> d(static_cast<std::size_t>(g.node_count), 0);
    for (const auto& c : g.classes)
        d[static_cast<std::size_t>(c.src)] += c.multiplicity;
    return d;
}

inline std::vector<Position> in_degrees(const CountGraph& g) {
    std::vector<Position> d(static_cast<std::size_t>(g.node_count), 0);
    for (const auto& c : g.classes)
        d[static_cast<std::size_t>(c.dst)] += c.multiplicity;
    return d;
}

/// Balanced degrees, at least one edge, and weakly connected support.
inline bool is_eulerian(const CountGraph& g) {
    if (g.classes.empty()) return false;
    auto dout = out_degrees(g);
    auto din = in_degrees(g);
    for (int v = 0; v < g.node_count; ++v)
        if (dout[static_cast<std::size_t>(v)] != din[static_cast<std::size_t>(v)])
            return false;
    std::vector<int> parent(static_cast<std::size_t>(g.node_count));
    for (int i = 0; i < g.node_count; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& c : g.classes) {
        int a = find(c.src), b = find(c.dst);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    int root = -1;
    for (int v = 0; v < g.node_count; ++v) {
        if (dout[static_cast<std::size_t>(v)] == 0) continue;
        int r = find(v);
        if (root == -1) root = r;
        else if (r != root) return false;
    }
    return true;
}

inline void require_eulerian(const CountGraph& g) {
    if (!is_eulerian(g))
        throw std::invalid_argument("graph is not Eulerian");
}

/// Exact determinant by fraction-free (Bareiss) elimination.  Consumes m.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>>& m) {
    int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row == -1) return 0;
            std::swap(m[static_cast<std::size_t>(k)], m[static_cast<std::size_t>(swap_row)]);
            sign = -sign;
        }
        const BigInt& pivot = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                BigInt t = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * pivot -
                           m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                               m[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t / prev;
            }
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = 0;
        }
        prev = pivot;
    }
    BigInt det = m[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
    return sign == 1 ? det : -det;
}

/// Contract away nodes whose out-edges all lead to a single other node.
/// Each contraction multiplies the arborescence count by the class
/// multiplicity, so large near-unary graphs reduce to their branch nodes.
struct ReducedGraph {
    std::map<std::pair<int, int>, Position> adj;  // (u,v) -> multiplicity, u != v
    std::vector<int> alive;
    BigInt factor = 1;
};

inline ReducedGraph reduce_for_arborescences(const CountGraph& g, int root) {
    ReducedGraph r;
    std::map<std::pair<int, int>, Position> adj;
    for (const auto& c : g.classes)
        if (c.src != c.dst) adj[{c.src, c.dst}] += c.multiplicity;

    std::vector<std::map<int, Position>> out(static_cast<std::size_t>(g.node_count)),
        in(static_cast<std::size_t>(g.node_count));
    for (auto& [uv, m] : adj) {
        out[static_cast<std::size_t>(uv.first)][uv.second] = m;
        in[static_cast<std::size_t>(uv.second)][uv.first] = m;
    }
    std::vector<bool> dead(static_cast<std::size_t>(g.node_count), false);
    std::vector<int> queue;
    for (int v = 0; v < g.node_count; ++v)
        if (v != root && out[static_cast<std::size_t>(v)].size() == 1)
            queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (dead[static_cast<std::size_t>(v)] || v == root) continue;
        if (out[static_cast<std::size_t>(v)].size() != 1) continue;
        auto [w, m] = *out[static_cast<std::size_t>(v)].begin();
        if (w == v) continue;
        r.factor *= m;
        // merge v into w: v's in-edges become in-edges of w
        out[static_cast<std::size_t>(v)].clear();
        in[static_cast<std::size_t>(w)].erase(v);
        for (auto& [u, mu] : in[static_cast<std::size_t>(v)]) {
            out[static_cast<std::size_t>(u)].erase(v);
            if (u == w) continue;  // would become a self-loop: drop
            out[static_cast<std::size_t>(u)][w] += mu;
            in[static_cast<std::size_t>(w)][u] += mu;
            if (u != root && out[static_cast<std::size_t>(u)].size() == 1)
                queue.push_back(u);
        }
        in[static_cast<std::size_t>(v)].clear();
        dead[static_cast<std::size_t>(v)] = true;
        if (w != root && out[static_cast<std::size_t>(w)].size() == 1)
            queue.push_back(w);
    }
    for (int v = 0; v < g.node_count; ++v) {
        if (dead[static_cast<std::size_t>(v)]) continue;
        if (v != root && out[static_cast<std::size_t>(v)].empty() &&
            in[static_cast<std::size_t>(v)].empty())
            continue;  // isolated after reduction
        r.alive.push_back(v);
    }
    for (int v : r.alive)
        for (auto& [w, m] : out[static_cast<std::size_t>(v)]) r.adj[{v, w}] = m;
    return r;
}

inline BigInt factorial(Position n) {
    BigInt f = 1;
    for (Position i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace detail

/// Exact arborescence count of an Eulerian multigraph (root-independent):
/// the matrix-tree determinant of the degree Laplacian with the root
/// row/column removed, after contracting forced (single-out-neighbor) nodes.
inline BigInt count_arborescences(const CountGraph& g, int root) {
    detail::require_eulerian(g);
    if (root < 0 || root >= g.node_count)
        throw std::invalid_argument("root out of range");
    auto red = detail::reduce_for_arborescences(g, root);
    std::vector<int> others;
    for (int v : red.alive)
        if (v != root) others.push_back(v);
    std::map<int, int> col;
    for (std::size_t i = 0; i < others.size(); ++i) col[others[i]] = static_cast<int>(i);
    std::size_t n = others.size();
    std::vector<std::vector<BigInt>> L(n, std::vector<BigInt>(n, 0));
    for (auto& [uv, m] : red.adj) {
        auto [u, v] = uv;
        if (u != root) L[static_cast<std::size_t>(col[u])][static_cast<std::size_t>(col[u])] += m;
        if (u != root && v != root)
            L[static_cast<std::size_t>(col[u])][static_cast<std::size_t>(col[v])] -= m;
    }
    BigInt det = detail::bareiss_determinant(L);
    if (det < 0)
        throw std::logic_error("negative arborescence determinant");
    return red.factor * det;
}

/// Raw Eulerian circuit count (parallel edges distinct, circuits identified
/// up to rotation): T * prod_v (d_out(v) - 1)!.
inline BigInt count_eulerian_best(const CountGraph& g) {
    detail::require_eulerian(g);
    auto dout = detail::out_degrees(g);
    int root = 0;
    while (dout[static_cast<std::size_t>(root)] == 0) ++root;
    BigInt count = count_arborescences(g, root);
    for (int v = 0; v < g.node_count; ++v)
        if (dout[static_cast<std::size_t>(v)] > 0)
            count *= detail::factorial(dout[static_cast<std::size_t>(v)] - 1);
    return count;
}

struct BruteForceCount {
    BigInt raw = 0;
    BigInt classes = 0;
};

/// Exhaustive backtracking enumeration of Eulerian circuits.  Returns the
/// raw count (edge instances distinct) and the class count (circuits
/// identified when they traverse the same edge classes in the same cyclic
/// order).  Guarded by a total-multiplicity bound.
inline BruteForceCount brute_force_eulerian(const CountGraph& g,
                                            Position max_edges = 16) {
    detail::require_eulerian(g);
    if (g.total_multiplicity() > max_edges)
        throw std::runtime_error("brute-force circuit enumeration over edge bound");

    // expand instances
    struct Inst {
        int src, dst, cls;
    };
    std::vector<Inst> inst;
    for (std::size_t c = 0; c < g.classes.size(); ++c)
        for (Position i = 0; i < g.classes[c].multiplicity; ++i)
            inst.push_back({g.classes[c].src, g.classes[c].dst, static_cast<int>(c)});
    int m = static_cast<int>(inst.size());

    std::vector<std::vector<int>> out_at(static_cast<std::size_t>(g.node_count));
    for (int i = 1; i < m; ++i)
        out_at[static_cast<std::size_t>(inst[static_cast<std::size_t>(i)].src)].push_back(i);

    // anchor circuits at instance 0: every circuit contains it exactly once
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    std::vector<int> seq = {0};
    used[0] = true;
    BruteForceCount res;
    std::set<std::vector<int>> class_forms;

    auto canonical_rotation = [](const std::vector<int>& v) {
        std::vector<int> best = v;
        std::vector<int> cur = v;
        for (std::size_t i = 1; i < v.size(); ++i) {
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            if (cur < best) best = cur;
        }
        return best;
    };

    auto dfs = [&](auto&& self, int node) -> void {
        if (static_cast<int>(seq.size()) == m) {
            if (node == inst[0].src) {
                res.raw += 1;
                std::vector<int> cls;
                cls.reserve(seq.size());
                for (int e : seq) cls.push_back(inst[static_cast<std::size_t>(e)].cls);
                class_forms.insert(canonical_rotation(cls));
            }
            return;
        }
        for (int e : out_at[static_cast<std::size_t>(node)]) {
            if (used[static_cast<std::size_t>(e)]) continue;
            used[static_cast<std::size_t>(e)] = true;
            seq.push_back(e);
            self(self, inst[static_cast<std::size_t>(e)].dst);
            seq.pop_back();
            used[static_cast<std::size_t>(e)] = false;
        }
    };
    dfs(dfs, inst[0].dst);
    res.classes = static_cast<Position>(class_forms.size());
    return res;
}

struct DistinctCount {
    BigInt value = 0;
    bool upper_bound_only = false;  // set when neither the corollary
                                    // hypothesis nor the oracle bound applies
};

/// Eulerian circuits distinct up to edge multiplicity.  Exact division by
/// prod m! when some edge class has multiplicity one; exact brute-force
/// fallback for small graphs otherwise; flagged rounded value beyond that.
inline DistinctCount count_eulerian_distinct(const CountGraph& g,
                                             Position fallback_bound = 16) {
    detail::require_eulerian(g);
    bool has_unit_class = false;
    for (const auto& c : g.classes)
        if (c.multiplicity == 1) has_unit_class = true;
    if (has_unit_class) {
        BigInt raw = count_eulerian_best(g);
        BigInt denom = 1;
        for (const auto& c : g.classes) denom *= detail::factorial(c.multiplicity);
        if (raw % denom != 0)
            throw std::logic_error("class division not exact under unit-class hypothesis");
        return {raw / denom, false};
    }
    if (g.total_multiplicity() <= fallback_bound)
        return {brute_force_eulerian(g, fallback_bound).classes, false};
    BigInt raw = count_eulerian_best(g);
    BigInt denom = 1;
    for (const auto& c : g.classes) denom *= detail::factorial(c.multiplicity);
    BigInt q = (raw + denom - 1) / denom;  // round up; exactness not guaranteed here
    return {q, true};
}

/// log10 of a positive integer to better than 1e-12 relative accuracy,
/// from the bit length and the leading 64 bits.
inline double log10_of(const BigInt& n) {
    if (n <= 0) throw std::invalid_argument("log10 of non-positive count");
    unsigned msb = boost::multiprecision::msb(n);
    long double mant;
    if (msb <= 62) {
        mant = static_cast<long double>(n.convert_to<std::uint64_t>());
        return static_cast<double>(std::log10(mant));
    }
    BigInt top = n >> (msb - 62);
    mant = static_cast<long double>(top.convert_to<std::uint64_t>());
    long double l2 = std::log2(mant) + static_cast<long double>(msb - 62);
    return static_cast<double>(l2 * 0.30102999566398119521L);
}

/// Exact decimal digit count of a positive integer.
inline long long decimal_digits(const BigInt& n) {
    if (n <= 0) throw std::invalid_argument("digit count of non-positive count");
    long long est = static_cast<long long>(std::floor(log10_of(n))) + 1;
    // settle boundary cases exactly
    BigInt p = 1;
    for (long long i = 0; i < est - 1; ++i) p *= 10;
    if (n < p) return est - 1;
    if (n >= p * 10) return est + 1;
    return est;
}

/// Leading decimal digits (up to 12 significant digits).
inline std::string leading_digits(const BigInt& n, int count = 12) {
    long long d = decimal_digits(n);
    if (d <= count) return n.convert_to<std::string>();
    BigInt shift = 1;
    for (long long i = 0; i < d - count; ++i) shift *= 10;
    return (n / shift).convert_to<std::string>();
}

/// Distortion of an assembly graph: exact cycle count plus its base-10 log.
/// `sufficient` records which branch produced the value; the fallback is
/// D_1(s) + 1 with the count fields describing ec(B_1(s)).
struct DistortionValue {
    bool sufficient = false;
    double log10_value = 0.0;
    BigInt exact_count = 0;
    bool upper_bound_only = false;

    long long exact_count_digits() const { return decimal_digits(exact_count); }
    std::string exact_count_leading() const { return leading_digits(exact_count); }
};

/// D_k(s) = log10 ec(B_k(s)).
inline DistortionValue dk(const CircularSequence& s, Position k) {
    SequenceGraph b = build_kmer_graph(s, k);
    DistinctCount c = count_eulerian_distinct(CountGraph::from_sequence_graph(b));
    DistortionValue v;
    v.sufficient = true;
    v.exact_count = c.value;
    v.upper_bound_only = c.upper_bound_only;
    v.log10_value = log10_of(c.value);
    return v;
}

/// D(G, s): log10 ec(G[s]) when the graph is sufficient for s, else
/// D_1(s) + 1.
inline DistortionValue distortion(const SequenceGraph& g, const CircularSequence& s) {
    auto cp = check_sufficiency(g, s);
    if (cp) {
        SequenceGraph gs = eulerianize(g, *cp);
        DistinctCount c = count_eulerian_distinct(CountGraph::from_sequence_graph(gs));
        DistortionValue v;
        v.sufficient = true;
        v.exact_count = c.value;
        v.upper_bound_only = c.upper_bound_only;
        v.log10_value = log10_of(c.value);
        return v;
    }
    DistortionValue v = dk(s, 1);
    v.sufficient = false;
    v.log10_value += 1.0;
    return v;
}

}  // namespace asmdist
