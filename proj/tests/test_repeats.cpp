#include <catch2/catch_amalgamated.hpp>

#include "asmdist/repeats.hpp"
#include "test_util.hpp"

using namespace asmdist;

TEST_CASE("maximal repeats on pinned genomes") {
    auto reps = find_maximal_repeats(CircularSequence("GGTCCAGTCGGTTCAA"));
    auto has = [&](Position a, Position b, Position len) {
        for (const auto& r : reps)
            if (r.pos_a == a && r.pos_b == b && r.len == len) return true;
        return false;
    };
    CHECK(has(1, 10, 3));  // GGT
    CHECK(has(8, 13, 2));  // TC

    CHECK(find_maximal_repeats(CircularSequence("ACGT")).empty());

    // periodic: the repeat extends around the circle and is capped
    auto capped = find_maximal_repeats(CircularSequence("AGTAGT"));
    bool found = false;
    for (const auto& r : capped)
        if (r.pos_a == 1 && r.pos_b == 4 && r.len == 5 && r.capped) found = true;
    CHECK(found);
}

TEST_CASE("maximal repeats equal the exhaustive oracle") {
    std::mt19937_64 rng(7401);
    for (int it = 0; it < 40; ++it) {
        Position G = 4 + static_cast<Position>(uniform_position(rng, 26));
        std::string alpha = (it % 2 == 0) ? "AC" : "ACGT";
        CircularSequence s(testutil::random_genome(rng, G, alpha));
        auto got = find_maximal_repeats(s);
        auto want = testutil::oracle_maximal_pairs(s);
        CHECK(got == want);
        // maximality re-checked symbol by symbol
        for (const auto& r : got) {
            if (r.capped) continue;
            CHECK(circular_substring(s, r.pos_a, r.len) ==
                  circular_substring(s, r.pos_b, r.len));
            CHECK(s.at(r.pos_a - 1) != s.at(r.pos_b - 1));
            CHECK(s.at(r.pos_a + r.len) != s.at(r.pos_b + r.len));
        }
    }
}

TEST_CASE("triple repeats on pinned genomes") {
    CHECK(find_triple_repeats(CircularSequence("ACGT")).empty());

    // A at exactly three positions with pairwise distinct neighborhoods
    CircularSequence s("ACAGATCCGG");
    auto triples = find_triple_repeats(s);
    bool found = false;
    for (const auto& t : triples)
        if (t.len == 1 && t.positions == std::vector<Position>{1, 3, 5}) found = true;
    CHECK(found);
}

TEST_CASE("triple repeats equal the brute-force oracle") {
    std::mt19937_64 rng(7402);
    for (int it = 0; it < 12; ++it) {
        CircularSequence s(testutil::random_genome(rng, 60, "AC"));
        CHECK(find_triple_repeats(s) == testutil::oracle_triples(s));
    }
    for (int it = 0; it < 12; ++it) {
        CircularSequence s(testutil::random_genome(rng, 40, "ACGT"));
        CHECK(find_triple_repeats(s) == testutil::oracle_triples(s));
    }
}

TEST_CASE("triple subsets mode expands occurrence choices") {
    // the string A occurs 4 times with mixed flanks
    CircularSequence s("ACAGATACCGGT");
    auto per_string = find_triple_repeats(s);
    auto subsets = find_triple_repeats(s, TripleEmission::AllSubsets);
    for (const auto& t : subsets) CHECK(t.positions.size() == 3);
    std::size_t expanded = 0;
    for (const auto& t : per_string) {
        std::size_t n = t.positions.size();
        expanded += n * (n - 1) * (n - 2) / 6;
    }
    CHECK(subsets.size() == expanded);
}

TEST_CASE("linked pairs use the link-length window") {
    // repeats at (a2 = 10, len 5) and (b1 = 12, len 4): link = 10+5+1-12 = 4
    std::mt19937_64 rng(7410);
    RepeatPair r1{2, 10, 5, false};
    RepeatPair r2{12, 30, 4, false};
    CircularSequence s(testutil::random_genome(rng, 40));
    auto linked = find_linked_pairs(s, {r1, r2}, 1, 10);
    REQUIRE(linked.size() == 1);
    CHECK(linked[0].link_len == 4);

    // boundary exclusion: b1 = a2 + len + 2 is not linked
    RepeatPair r3{17, 40, 4, false};  // b1 = 17 = 10 + 5 + 2
    CHECK(find_linked_pairs(s, {r1, r3}, 1, 10).empty());

    CHECK_THROWS_AS(find_linked_pairs(s, {r1, r2}, 5, 2), std::invalid_argument);
}

TEST_CASE("linked pairs equal a direct quadratic filter") {
    std::mt19937_64 rng(7403);
    CircularSequence s(testutil::random_genome(rng, 100, "AC"));
    auto pairs = find_maximal_repeats(s);
    auto got = find_linked_pairs(s, pairs, 2, 10);
    std::vector<LinkedPair> want;
    for (const auto& a : pairs) {
        for (const auto& b : pairs) {
            if (&a == &b) continue;
            Position a2 = std::max(a.pos_a, a.pos_b);
            Position b1 = std::min(b.pos_a, b.pos_b);
            if (a2 < b1 && b1 <= a2 + a.len + 1) {
                Position link = a2 + a.len + 1 - b1;
                if (link >= 2 && link <= 10) want.push_back({a, b, link});
            }
        }
    }
    CHECK(got == want);
}

TEST_CASE("bridging status") {
    std::string gs(40, 'A');
    const char* bases = "CGT";
    for (std::size_t i = 0; i < gs.size(); i += 2) gs[i] = bases[(i / 2) % 3];
    CircularSequence s(gs);

    // copy at (pos 5, len 3), L = 6: a read starting at 4 covers 4..9
    auto reads = testutil::reads_from_starts(s, 6, {4}, false);
    CHECK(copy_is_bridged(5, 3, reads));
    // starting exactly at the copy does not extend left
    auto reads2 = testutil::reads_from_starts(s, 6, {5}, false);
    CHECK(!copy_is_bridged(5, 3, reads2));

    // span bound: len > L - 2 is never bridged
    auto reads3 = testutil::reads_from_starts(s, 4, {1, 2, 3, 4, 5, 6, 7, 8}, false);
    CHECK(!copy_is_bridged(5, 3, reads3));

    ReadSet unplaced;
    unplaced.read_length = 6;
    unplaced.reads.push_back({circular_substring(s, 1, 6), {}});
    CHECK_THROWS_AS(copy_is_bridged(5, 3, unplaced), std::logic_error);
}

TEST_CASE("bridging respects the copy-length bound everywhere") {
    std::mt19937_64 rng(7404);
    CircularSequence s(testutil::random_genome(rng, 60));
    for (int it = 0; it < 30; ++it) {
        Position L = 4 + static_cast<Position>(uniform_position(rng, 8));
        std::vector<Position> starts;
        for (int i = 0; i < 20; ++i) starts.push_back(uniform_position(rng, 60));
        auto reads = testutil::reads_from_starts(s, L, starts, false);
        Position len = L - 1 + static_cast<Position>(uniform_position(rng, 4));
        CHECK(!copy_is_bridged(uniform_position(rng, 60), len, reads));
    }
}

TEST_CASE("triple classification") {
    std::mt19937_64 rng(7405);
    // plant a triple repeat of length 5 in a random genome
    std::string base = testutil::random_genome(rng, 90);
    std::string x = "ACGTC";
    auto plant = [&](std::size_t at, char left, char right) {
        base[at - 1] = left;
        for (std::size_t i = 0; i < x.size(); ++i) base[at + i] = x[i];
        base[at + x.size()] = right;
    };
    plant(10, 'A', 'A');
    plant(40, 'C', 'C');
    plant(70, 'G', 'G');
    CircularSequence s(base);
    TripleRepeat t{{11, 41, 71}, 5, false};

    Position L = 9;
    // one bridging read per copy: all-bridged
    auto rall = testutil::reads_from_starts(s, L, {9, 39, 69}, false);
    CHECK(classify_triple(t, rall) == TripleClass::AllBridged);
    CHECK(bridging_status(t.positions, t.len, rall).all());
    // no reads near the copies: all-unbridged
    auto rnone = testutil::reads_from_starts(s, L, {25, 55, 85}, false);
    CHECK(classify_triple(t, rnone) == TripleClass::AllUnbridged);
    // exactly one copy bridged: mixed
    auto rone = testutil::reads_from_starts(s, L, {9, 25, 55}, false);
    CHECK(classify_triple(t, rone) == TripleClass::Mixed);
}

TEST_CASE("critical read length") {
    // six circular orderings share the 1-mer composition of ACGT, so the
    // first order with a unique cycle is 2 (where the graph is a 4-cycle)
    CHECK(dk(CircularSequence("ACGT"), 1).exact_count == 6);
    CHECK(critical_read_length(CircularSequence("ACGT")) == 2);

    CircularSequence s("CAGAGTT");
    Position crit = critical_read_length(s);
    // brute-force the threshold: smallest k whose kmer graph has one class
    Position want = 0;
    for (Position k = 1; k <= s.size(); ++k) {
        auto bf = brute_force_eulerian(
            CountGraph::from_sequence_graph(build_kmer_graph(s, k)), 16);
        if (bf.classes == 1) {
            want = k;
            break;
        }
    }
    CHECK(crit == want);

    std::mt19937_64 rng(7406);
    for (int it = 0; it < 10; ++it) {
        Position G = 5 + static_cast<Position>(uniform_position(rng, 8));
        CircularSequence r(testutil::random_genome(rng, G));
        Position c = critical_read_length(r);
        CHECK(c <= G);
        for (Position k : {c, c + 1, std::min(G, c + 5)})
            if (k <= G) CHECK(dk(r, k).exact_count == 1);
        if (c > 1) CHECK(dk(r, c - 1).exact_count > 1);
    }
}

TEST_CASE("catalog CSV shape") {
    CircularSequence s("GGTCCAGTCGGTTCAA");
    auto cat = build_repeat_catalog(s);
    auto linked = find_linked_pairs(s, cat.pairs, 1, 5);
    std::ostringstream os;
    write_catalog_csv(os, cat, &linked);
    std::string text = os.str();
    CHECK(text.find("kind,positions,length,capped\n") == 0);
    CHECK(text.find("pair,1;10,3,0\n") != std::string::npos);
    CHECK(text.find("triple,") != std::string::npos);
}
