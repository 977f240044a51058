#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "asmdist/distortion.hpp"
#include "asmdist/repeats.hpp"
#include "asmdist/seqgraph.hpp"
#include "test_util.hpp"

using namespace asmdist;

namespace {

/// The 4-node order-1 graph that spells CAGAGTT through symbol-class nodes,
/// with positional provenance ("at node X before consuming position p").
SequenceGraph symbol_class_graph(bool with_ga_edge) {
    SequenceGraph g;
    g.order = 1;
    g.has_provenance = true;
    g.nodes.resize(4);  // 0:C 1:A 2:G 3:T, labels empty at order 1
    g.nodes[0].provenance = {2};
    g.nodes[1].provenance = {3, 5};
    g.nodes[2].provenance = {4, 6};
    g.nodes[3].provenance = {7, 1};
    g.edges.push_back({3, 0, "C", 1});
    g.edges.push_back({0, 1, "A", 1});
    g.edges.push_back({1, 2, "G", 1});
    if (with_ga_edge) g.edges.push_back({2, 1, "A", 1});
    g.edges.push_back({2, 3, "T", 1});
    g.edges.push_back({3, 3, "T", 1});
    return g;
}

}  // namespace

TEST_CASE("build_kmer_graph basics") {
    CircularSequence s("CAGAGTT");
    auto b1 = build_kmer_graph(s, 1);
    b1.validate();
    CHECK(b1.node_count() == 1);
    std::map<std::string, Position> label_mult;
    for (const auto& e : b1.edges) label_mult[e.label] += e.multiplicity;
    CHECK(label_mult == std::map<std::string, Position>{
                            {"A", 2}, {"C", 1}, {"G", 2}, {"T", 2}});

    auto b2u = build_kmer_graph(CircularSequence("AAAA"), 2);
    b2u.validate();
    CHECK(b2u.node_count() == 1);
    REQUIRE(b2u.edge_count() == 1);
    CHECK(b2u.edges[0].label == "AA");
    CHECK(b2u.edges[0].multiplicity == 4);

    auto b3 = build_kmer_graph(s, 3);
    b3.validate();
    CHECK(b3.node_count() == 6);  // support of C_2
    CHECK(b3.total_multiplicity() == 7);
}

TEST_CASE("kmer graphs are Eulerian for every order") {
    std::mt19937_64 rng(7201);
    for (int it = 0; it < 25; ++it) {
        Position G = 2 + static_cast<Position>(uniform_position(rng, 30));
        CircularSequence s(testutil::random_genome(rng, G));
        for (Position k = 1; k <= std::min<Position>(G, 6); ++k) {
            auto g = build_kmer_graph(s, k);
            g.validate();
            CHECK(detail::is_eulerian(CountGraph::from_sequence_graph(g)));
            CHECK(g.total_multiplicity() == G);
        }
    }
}

TEST_CASE("spell_path round trips") {
    CircularSequence s("GGTCCAGTCGGTTCAA");
    auto cyc = build_cycle_graph(s, 3);
    cyc.validate();
    GraphPath p;  // first 3 edges spell GGTCC
    p.node_ids = {0, 1, 2, 3};
    p.edge_ids = {0, 1, 2};
    CHECK(spell_path(cyc, p).str() == "GGTCC");

    GraphPath one_edge;
    one_edge.node_ids = {0, 1};
    one_edge.edge_ids = {0};
    CHECK(spell_path(cyc, one_edge).str() == "GGT");

    GraphPath trivial;
    trivial.node_ids = {0};
    CHECK_THROWS_AS(spell_path(cyc, trivial), std::invalid_argument);
}

TEST_CASE("reads spell their own initial paths for any order") {
    std::mt19937_64 rng(7202);
    for (int it = 0; it < 100; ++it) {
        Position G = 20 + static_cast<Position>(uniform_position(rng, 30));
        CircularSequence s(testutil::random_genome(rng, G));
        Position L = 4 + static_cast<Position>(uniform_position(rng, 8));
        Position t = uniform_position(rng, G);
        Sequence read = circular_substring(s, t, L);
        Position k = uniform_position(rng, L);
        // the path of the read in its own k-mer path graph
        SequenceGraph g;
        g.order = k;
        Position nodes = L - k + 2;
        for (Position j = 0; j < nodes; ++j)
            g.nodes.push_back({read.slice(j + 1, j + k - 1).str(), {}});
        GraphPath p;
        p.node_ids.push_back(0);
        for (Position j = 0; j + 1 < nodes; ++j) {
            g.edges.push_back({static_cast<int>(j), static_cast<int>(j + 1),
                               read.slice(j + 1, j + k).str(), 1});
            p.edge_ids.push_back(static_cast<int>(j));
            p.node_ids.push_back(static_cast<int>(j + 1));
        }
        g.validate();
        CHECK(spell_path(g, p) == read);
    }
}

TEST_CASE("cycle graph spells the genome and is sufficient") {
    CircularSequence s("GGTCCAGTCGGTTCAA");
    auto c1 = build_cycle_graph(s, 1);
    c1.validate();
    CHECK(c1.node_count() == 16);
    CHECK(c1.edge_count() == 16);

    GraphPath full;
    for (int i = 0; i < 16; ++i) {
        full.node_ids.push_back(i);
        full.edge_ids.push_back(i);
    }
    full.node_ids.push_back(0);
    CHECK(spell_path(c1, full).str().substr(0, 16) == s.str());

    auto cp = check_sufficiency(c1, s);
    REQUIRE(cp.has_value());
    for (Position t : cp->traversal_count) CHECK(t == 1);

    auto c4 = build_cycle_graph(CircularSequence("ACGT"), 1);
    auto cnt = count_eulerian_distinct(CountGraph::from_sequence_graph(c4));
    CHECK(cnt.value == 1);
}

TEST_CASE("sufficiency distinguishes the symbol-class graphs") {
    CircularSequence s("CAGAGTT");
    auto good = symbol_class_graph(true);
    good.validate();
    auto cp = check_sufficiency(good, s);
    REQUIRE(cp.has_value());
    auto gs = eulerianize(good, *cp);
    CHECK(gs.total_multiplicity() == 7);
    std::map<std::string, Position> mult;
    for (const auto& e : gs.edges) mult[e.label + "@" + std::to_string(e.src)] += e.multiplicity;
    CHECK(mult.at("G@1") == 2);  // the A->G edge is traversed twice

    auto bad = symbol_class_graph(false);
    bad.validate();
    CHECK(!check_sufficiency(bad, s).has_value());

    SequenceGraph no_prov = good;
    no_prov.has_provenance = false;
    CHECK_THROWS_AS(check_sufficiency(no_prov, s), std::logic_error);
}

TEST_CASE("eulerianize validates coverage and conserves flow") {
    CircularSequence s("CAGAGTT");
    auto g = symbol_class_graph(true);
    auto cp = check_sufficiency(g, s);
    REQUIRE(cp.has_value());
    auto gs = eulerianize(g, *cp);
    auto din = gs.in_degree();
    auto dout = gs.out_degree();
    CHECK(din == dout);
    CHECK(gs.total_multiplicity() == s.size());

    ChinesePostmanCycle broken = *cp;
    broken.traversal_count[0] = 0;
    CHECK_THROWS_AS(eulerianize(g, broken), std::invalid_argument);
}

TEST_CASE("graph prefixes and suffixes") {
    // two disjoint read paths
    ReadSet rs;
    rs.read_length = 5;
    rs.reads.push_back({Sequence("GGTCC"), {}});
    rs.reads.push_back({Sequence("ACGTA"), {}});
    SequenceGraph g;
    g.order = 3;
    for (int r = 0; r < 2; ++r) {
        const std::string& c = rs.reads[static_cast<std::size_t>(r)].content.str();
        int base = r * 4;
        for (int j = 0; j < 4; ++j) g.nodes.push_back({c.substr(static_cast<std::size_t>(j), 2), {}});
        for (int j = 0; j < 3; ++j)
            g.edges.push_back({base + j, base + j + 1, c.substr(static_cast<std::size_t>(j), 3), 1});
    }
    g.validate();
    auto ends = graph_prefixes_suffixes(g);
    REQUIRE(ends.prefixes.size() == 2);
    REQUIRE(ends.suffixes.size() == 2);
    std::set<std::string> pre, suf;
    for (auto& x : ends.prefix_strings) pre.insert(x.str());
    for (auto& x : ends.suffix_strings) suf.insert(x.str());
    CHECK(pre == std::set<std::string>{"GGTCC", "ACGTA"});
    CHECK(suf == std::set<std::string>{"GGTCC", "ACGTA"});

    // a cycle has neither
    auto cyc = build_cycle_graph(CircularSequence("ACGTT"), 2);
    auto ends2 = graph_prefixes_suffixes(cyc);
    CHECK(ends2.prefixes.empty());
    CHECK(ends2.suffixes.empty());
}

TEST_CASE("contract_repeats merges repeat paths") {
    CircularSequence s("GGTCCAGTCGGTTCAA");
    auto cyc = build_cycle_graph(s, 1);
    std::vector<RepeatPair> reps = {{1, 10, 3, false}, {8, 13, 2, false}};
    auto gt = contract_repeats(cyc, reps);
    gt.validate();
    CHECK(gt.node_count() == 11);  // 16 - 3 - 2 merged away
    CHECK(gt.edge_count() == 13);  // shared labels on merged endpoints dedupe
    // provenance of the merged nodes is the union
    bool found = false;
    for (const auto& n : gt.nodes)
        if (n.provenance == std::set<Position>{1, 10}) found = true;
    CHECK(found);
    // contraction of true repeats preserves sufficiency
    auto cp = check_sufficiency(gt, s);
    REQUIRE(cp.has_value());

    // empty repeat set: identity
    auto same = contract_repeats(cyc, {});
    CHECK(same.node_count() == cyc.node_count());
    CHECK(same.edge_count() == cyc.edge_count());

    // shorter than the order: rejected
    auto cyc3 = build_cycle_graph(s, 3);
    CHECK_THROWS_AS(contract_repeats(cyc3, std::vector<RepeatPair>{{8, 13, 2, false}}),
                    std::invalid_argument);
}

TEST_CASE("contraction order does not matter") {
    std::mt19937_64 rng(7203);
    int done = 0;
    while (done < 50) {
        Position G = 30 + static_cast<Position>(uniform_position(rng, 40));
        CircularSequence s(testutil::random_genome(rng, G, "AC"));
        Position k = 1 + static_cast<Position>(uniform_position(rng, 2));
        auto pairs = find_maximal_repeats(s);
        std::vector<RepeatPair> usable;
        for (const auto& p : pairs)
            if (p.len >= k && !p.capped) usable.push_back(p);
        if (usable.size() < 2) continue;
        if (usable.size() > 6) usable.resize(6);
        auto cyc = build_cycle_graph(s, k);
        auto a = contract_repeats(cyc, usable);
        std::vector<RepeatPair> shuffled = usable;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto b = contract_repeats(cyc, shuffled);
        CHECK(a.serialize() == b.serialize());
        // spelled Chinese Postman cycle still equals s
        CHECK(check_sufficiency(a, s).has_value());
        ++done;
    }
}

TEST_CASE("small kmer graphs count sequences with equal composition") {
    std::mt19937_64 rng(7204);
    for (int it = 0; it < 12; ++it) {
        Position G = 4 + static_cast<Position>(uniform_position(rng, 5));  // 5..9
        CircularSequence s(testutil::random_genome(rng, G));
        for (Position k = 1; k <= 4; ++k) {
            auto c = count_eulerian_distinct(
                CountGraph::from_sequence_graph(build_kmer_graph(s, k)));
            auto want = testutil::count_sequences_with_composition(s, k);
            CHECK(c.value == want);
        }
    }
}

TEST_CASE("graph serialization is canonical") {
    CircularSequence s("CAGAGTT");
    auto g = build_kmer_graph(s, 2);
    auto text = g.serialize();
    CHECK(text.find("order 2") == 0);
    // a node permutation serializes identically
    SequenceGraph h = g;
    std::swap(h.nodes[0], h.nodes[1]);
    for (auto& e : h.edges) {
        auto fix = [](int v) { return v == 0 ? 1 : v == 1 ? 0 : v; };
        e.src = fix(e.src);
        e.dst = fix(e.dst);
    }
    CHECK(h.serialize() == text);
}
