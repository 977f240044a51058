#pragma once

// Order-k sequence graphs: directed multigraphs with k-mer edge labels and
// (k-1)-mer node labels, edge labels consistent with their endpoints.
// Distinct nodes may share a label.  Includes the k-mer graph B_k(s), the
// cycle graph of a circular sequence, path contraction, Chinese-Postman
// sufficiency checking against a known genome, and Eulerianization.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "asmdist/core.hpp"
#include "asmdist/repeat_types.hpp"

namespace asmdist {

struct SequenceGraph {
    struct Node {
        std::string label;             // (k-1)-mer; empty when order == 1
        std::set<Position> provenance; // genome positions, validation mode only
    };
    struct Edge {
        int src = 0;
        int dst = 0;
        std::string label;  // k-mer
        Position multiplicity = 1;
    };

    Position order = 1;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    bool has_provenance = false;

    Position node_count() const { return static_cast<Position>(nodes.size()); }
    Position edge_count() const { return static_cast<Position>(edges.size()); }
    Position total_multiplicity() const {
        Position t = 0;
        for (const auto& e : edges) t += e.multiplicity;
        return t;
    }

    std::vector<Position> out_degree() const {
        std::vector<Position> d(nodes.size(), 0);
        for (const auto& e : edges) d[static_cast<std::size_t>(e.src)] += e.multiplicity;
        return d;
    }
    std::vector<Position> in_degree() const {
        std::vector<Position> d(nodes.size(), 0);
        for (const auto& e : edges) d[static_cast<std::size_t>(e.dst)] += e.multiplicity;
        return d;
    }

    /// Label consistency: lambda(src) = label[1:k-1] and lambda(dst) = label[2:k].
    void validate() const {
        for (const auto& n : nodes) {
            if (static_cast<Position>(n.label.size()) != order - 1)
                throw std::logic_error("node label length != k-1");
        }
        for (const auto& e : edges) {
            if (static_cast<Position>(e.label.size()) != order)
                throw std::logic_error("edge label length != k");
            if (e.multiplicity < 1)
                throw std::logic_error("edge multiplicity < 1");
            const auto& u = nodes[static_cast<std::size_t>(e.src)];
            const auto& v = nodes[static_cast<std::size_t>(e.dst)];
            if (e.label.compare(0, u.label.size(), u.label) != 0 ||
                e.label.compare(1, v.label.size(), v.label) != 0)
                throw std::logic_error("edge label inconsistent with endpoints");
        }
    }

    /// Line-oriented text dump: nodes then edges, sorted for reproducibility.
    /// Node ids are the canonical order: (label, min provenance, original id).
    std::string serialize() const {
        std::vector<int> order_ids(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) order_ids[i] = static_cast<int>(i);
        auto key = [&](int i) {
            const auto& n = nodes[static_cast<std::size_t>(i)];
            Position minp = n.provenance.empty() ? -1 : *n.provenance.begin();
            return std::tuple<std::string, Position, int>(n.label, minp, i);
        };
        std::sort(order_ids.begin(), order_ids.end(),
                  [&](int a, int b) { return key(a) < key(b); });
        std::vector<int> newid(nodes.size());
        for (std::size_t i = 0; i < order_ids.size(); ++i)
            newid[static_cast<std::size_t>(order_ids[i])] = static_cast<int>(i);

        std::ostringstream out;
        out << "order " << order << "\n";
        for (std::size_t i = 0; i < order_ids.size(); ++i) {
            const auto& n = nodes[static_cast<std::size_t>(order_ids[i])];
            out << "node " << i << " " << (n.label.empty() ? "-" : n.label);
            if (has_provenance) {
                out << " ";
                bool first = true;
                for (Position p : n.provenance) {
                    if (!first) out << ",";
                    out << p;
                    first = false;
                }
                if (n.provenance.empty()) out << "-";
            }
            out << "\n";
        }
        std::vector<std::string> lines;
        for (const auto& e : edges) {
            std::ostringstream ln;
            ln << "edge " << newid[static_cast<std::size_t>(e.src)] << " "
               << newid[static_cast<std::size_t>(e.dst)] << " " << e.label << " "
               << e.multiplicity;
            lines.push_back(ln.str());
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) out << l << "\n";
        return out.str();
    }
};

/// A walk through the graph: nodes v1..vl with the chosen edge index
/// between consecutive nodes.
struct GraphPath {
    std::vector<int> node_ids;
    std::vector<int> edge_ids;
};

/// st(p): the first symbol of every edge label but the last, then the full
/// last edge label; length (l - 2 + k) for an l-node path.
inline Sequence spell_path(const SequenceGraph& g, const GraphPath& p) {
    if (p.node_ids.size() < 2)
        throw std::invalid_argument("path must have at least 2 nodes");
    std::string out;
    for (std::size_t i = 0; i + 1 < p.edge_ids.size(); ++i)
        out.push_back(g.edges[static_cast<std::size_t>(p.edge_ids[i])].label[0]);
    out += g.edges[static_cast<std::size_t>(p.edge_ids.back())].label;
    return Sequence(std::move(out));
}

/// B_k(s): nodes are the support of C_{k-1}(s); m parallel edges x -> y when
/// the k-mer x + y[k-1] has multiplicity m in C_k(s).  Eulerian for every k.
inline SequenceGraph build_kmer_graph(const CircularSequence& s, Position k) {
    if (k < 1 || k > s.size())
        throw std::invalid_argument("graph order must satisfy 1 <= k <= G");
    SequenceGraph g;
    g.order = k;
    std::string doubled = s.str() + s.str();
    std::map<std::string, int> node_of;
    for (Position i = 0; i < s.size(); ++i) {
        std::string km1 = doubled.substr(static_cast<std::size_t>(i),
                                         static_cast<std::size_t>(k - 1));
        node_of.emplace(std::move(km1), 0);
    }
    int next = 0;
    for (auto& [lab, id] : node_of) id = next++;
    g.nodes.resize(node_of.size());
    for (auto& [lab, id] : node_of) g.nodes[static_cast<std::size_t>(id)].label = lab;

    std::map<std::tuple<int, int, std::string>, Position> mult;
    for (Position i = 0; i < s.size(); ++i) {
        std::string km = doubled.substr(static_cast<std::size_t>(i),
                                        static_cast<std::size_t>(k));
        int u = node_of.at(km.substr(0, static_cast<std::size_t>(k - 1)));
        int v = node_of.at(km.substr(1));
        mult[{u, v, km}] += 1;
    }
    for (auto& [key, m] : mult) {
        auto& [u, v, lab] = key;
        g.edges.push_back({u, v, lab, m});
    }
    return g;
}

/// Cycle sequence graph of order k: one node per genome position, closed
/// into a cycle, edge i -> i+1 labeled with the k-mer at i.  Nodes carry
/// their position as provenance.  Every circular k-mer appears as an edge.
inline SequenceGraph build_cycle_graph(const CircularSequence& s, Position k) {
    if (k < 1 || k > s.size())
        throw std::invalid_argument("graph order must satisfy 1 <= k <= G");
    SequenceGraph g;
    g.order = k;
    g.has_provenance = true;
    Position G = s.size();
    g.nodes.resize(static_cast<std::size_t>(G));
    for (Position i = 1; i <= G; ++i) {
        auto& n = g.nodes[static_cast<std::size_t>(i - 1)];
        n.label = k > 1 ? circular_substring(s, i, k - 1).str() : std::string();
        n.provenance.insert(i);
    }
    for (Position i = 1; i <= G; ++i) {
        int u = static_cast<int>(i - 1);
        int v = static_cast<int>(i % G);
        g.edges.push_back({u, v, circular_substring(s, i, k).str(), 1});
    }
    return g;
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    // returns the surviving root
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (a > b) std::swap(a, b);  // keep the smaller id as root
        parent_[static_cast<std::size_t>(b)] = a;
        return a;
    }

private:
    std::vector<int> parent_;
};

/// Rebuild a graph after node identification: merged provenance, edges
/// deduplicated by (src, dst, label).
inline SequenceGraph quotient(const SequenceGraph& g, UnionFind& uf) {
    SequenceGraph out;
    out.order = g.order;
    out.has_provenance = g.has_provenance;
    std::map<int, int> id_of_root;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        int r = uf.find(static_cast<int>(i));
        if (!id_of_root.count(r)) {
            int id = static_cast<int>(id_of_root.size());
            id_of_root[r] = id;
            out.nodes.push_back({g.nodes[static_cast<std::size_t>(r)].label, {}});
        }
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        int r = uf.find(static_cast<int>(i));
        const auto& n = g.nodes[i];
        auto& m = out.nodes[static_cast<std::size_t>(id_of_root[r])];
        if (m.label != n.label)
            throw std::logic_error("contraction merged nodes with distinct labels");
        m.provenance.insert(n.provenance.begin(), n.provenance.end());
    }
    std::set<std::tuple<int, int, std::string>> dedup;
    for (const auto& e : g.edges)
        dedup.emplace(id_of_root[uf.find(e.src)], id_of_root[uf.find(e.dst)], e.label);
    for (auto& [u, v, lab] : dedup) out.edges.push_back({u, v, lab, 1});
    return out;
}

}  // namespace detail

/// Contract the node paths of each repeat pair into one path (the merged
/// graph G_T).  Requires every repeat length >= k; the copies spell equal
/// strings so the contraction is label-consistent by construction.
/// The result does not depend on the order of the repeat list.
inline SequenceGraph contract_repeats(const SequenceGraph& cycle,
                                      const std::vector<RepeatPair>& repeats) {
    Position k = cycle.order;
    Position G = cycle.node_count();
    for (const auto& r : repeats)
        if (r.len < k)
            throw std::invalid_argument("contracted repeat shorter than graph order");
    detail::UnionFind uf(cycle.nodes.size());
    auto node_at = [&](Position pos) {
        Position m = (pos - 1) % G;
        if (m < 0) m += G;
        return static_cast<int>(m);
    };
    for (const auto& r : repeats)
        for (Position d = 0; d <= r.len - k; ++d)
            uf.unite(node_at(r.pos_a + d), node_at(r.pos_b + d));
    return detail::quotient(cycle, uf);
}

/// Maximal unambiguous paths anchored at degree-zero endpoints: prefixes
/// start at in-degree-0 nodes, suffixes end at out-degree-0 nodes.
struct GraphEnds {
    std::vector<GraphPath> prefixes;
    std::vector<GraphPath> suffixes;
    std::vector<Sequence> prefix_strings;
    std::vector<Sequence> suffix_strings;
};

inline GraphEnds graph_prefixes_suffixes(const SequenceGraph& g) {
    GraphEnds ends;
    auto din = g.in_degree();
    auto dout = g.out_degree();
    std::vector<std::vector<int>> out_edges(g.nodes.size()), in_edges(g.nodes.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        out_edges[static_cast<std::size_t>(g.edges[i].src)].push_back(static_cast<int>(i));
        in_edges[static_cast<std::size_t>(g.edges[i].dst)].push_back(static_cast<int>(i));
    }
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (din[v] == 0 && dout[v] > 0) {
            GraphPath p;
            p.node_ids.push_back(static_cast<int>(v));
            int cur = static_cast<int>(v);
            std::set<int> seen{cur};
            while (dout[static_cast<std::size_t>(cur)] == 1) {
                int e = out_edges[static_cast<std::size_t>(cur)][0];
                int nxt = g.edges[static_cast<std::size_t>(e)].dst;
                if (g.edges[static_cast<std::size_t>(e)].multiplicity != 1) break;
                if (din[static_cast<std::size_t>(nxt)] != 1) break;
                if (seen.count(nxt)) break;
                p.edge_ids.push_back(e);
                p.node_ids.push_back(nxt);
                seen.insert(nxt);
                cur = nxt;
            }
            if (!p.edge_ids.empty()) {
                ends.prefix_strings.push_back(spell_path(g, p));
                ends.prefixes.push_back(std::move(p));
            }
        }
        if (dout[v] == 0 && din[v] > 0) {
            GraphPath p;
            p.node_ids.push_back(static_cast<int>(v));
            int cur = static_cast<int>(v);
            std::set<int> seen{cur};
            while (din[static_cast<std::size_t>(cur)] == 1) {
                int e = in_edges[static_cast<std::size_t>(cur)][0];
                int prv = g.edges[static_cast<std::size_t>(e)].src;
                if (g.edges[static_cast<std::size_t>(e)].multiplicity != 1) break;
                if (dout[static_cast<std::size_t>(prv)] != 1) break;
                if (seen.count(prv)) break;
                p.edge_ids.push_back(e);
                p.node_ids.push_back(prv);
                seen.insert(prv);
                cur = prv;
            }
            if (!p.edge_ids.empty()) {
                std::reverse(p.node_ids.begin(), p.node_ids.end());
                std::reverse(p.edge_ids.begin(), p.edge_ids.end());
                ends.suffix_strings.push_back(spell_path(g, p));
                ends.suffixes.push_back(std::move(p));
            }
        }
    }
    return ends;
}

/// A closed walk traversing every edge at least once, with per-edge
/// traversal counts.
struct ChinesePostmanCycle {
    std::vector<int> edge_sequence;        // edge ids in traversal order
    std::vector<Position> traversal_count; // per edge id
};

/// Validation-mode sufficiency check: walk genome positions 1..G in order,
/// selecting for each position an edge whose label matches the k-mer there
/// and whose endpoint provenance contains the position (and its successor).
/// Succeeds iff a chained closed walk exists and covers every edge.
inline std::optional<ChinesePostmanCycle> check_sufficiency(
    const SequenceGraph& g, const CircularSequence& s) {
    if (!g.has_provenance)
        throw std::logic_error("sufficiency check requires node provenance");
    Position G = s.size();
    Position k = g.order;
    // candidate edges per position
    std::vector<std::vector<int>> cand(static_cast<std::size_t>(G));
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        const auto& pu = g.nodes[static_cast<std::size_t>(e.src)].provenance;
        const auto& pv = g.nodes[static_cast<std::size_t>(e.dst)].provenance;
        for (Position p : pu) {
            Position succ = p % G + 1;
            if (!pv.count(succ)) continue;
            if (e.label != circular_substring(s, p, k).str()) continue;
            cand[static_cast<std::size_t>(p - 1)].push_back(static_cast<int>(ei));
        }
    }
    for (Position p = 0; p < G; ++p)
        if (cand[static_cast<std::size_t>(p)].empty()) return std::nullopt;

    // Backtracking over the per-position choices (positions with a single
    // candidate, the common case, never branch).  A complete assignment is
    // accepted when it chains, closes, and covers every edge.
    std::vector<int> chosen(static_cast<std::size_t>(G), -1);
    std::vector<std::size_t> idx(static_cast<std::size_t>(G), 0);
    Position p = 0;
    std::uint64_t steps = 0;
    const std::uint64_t step_limit = 4'000'000;
    auto src_of = [&](int e) { return g.edges[static_cast<std::size_t>(e)].src; };
    auto dst_of = [&](int e) { return g.edges[static_cast<std::size_t>(e)].dst; };
    while (true) {
        if (++steps > step_limit)
            throw std::runtime_error("sufficiency walk search exceeded step limit");
        if (p == G) {
            ChinesePostmanCycle c;
            c.edge_sequence.assign(chosen.begin(), chosen.end());
            c.traversal_count.assign(g.edges.size(), 0);
            for (int e : c.edge_sequence)
                ++c.traversal_count[static_cast<std::size_t>(e)];
            bool covers = true;
            for (Position t : c.traversal_count)
                if (t == 0) covers = false;
            if (covers) return c;
            --p;  // walk closes but misses edges: try other assignments
            continue;
        }
        bool advanced = false;
        for (std::size_t& i = idx[static_cast<std::size_t>(p)];
             i < cand[static_cast<std::size_t>(p)].size();) {
            int e = cand[static_cast<std::size_t>(p)][i];
            ++i;
            if (p > 0 && dst_of(chosen[static_cast<std::size_t>(p - 1)]) != src_of(e))
                continue;
            if (p == G - 1) {
                int f = (G == 1) ? e : chosen.front();
                if (dst_of(e) != src_of(f)) continue;
            }
            chosen[static_cast<std::size_t>(p)] = e;
            advanced = true;
            break;
        }
        if (advanced) {
            ++p;
            if (p < G) idx[static_cast<std::size_t>(p)] = 0;
            continue;
        }
        chosen[static_cast<std::size_t>(p)] = -1;
        if (p == 0) return std::nullopt;
        --p;
    }
}

/// Eulerian multigraph induced by a Chinese Postman cycle: each edge gets
/// its traversal count as multiplicity.  Total multiplicity equals |c| = G.
inline SequenceGraph eulerianize(const SequenceGraph& g,
                                 const ChinesePostmanCycle& c) {
    if (c.traversal_count.size() != g.edges.size())
        throw std::invalid_argument("cycle does not match graph");
    for (Position t : c.traversal_count)
        if (t < 1)
            throw std::invalid_argument("cycle does not cover every edge");
    SequenceGraph out = g;
    for (std::size_t i = 0; i < out.edges.size(); ++i)
        out.edges[i].multiplicity = c.traversal_count[i];
    return out;
}

}  // namespace asmdist
