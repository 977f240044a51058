#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "asmdist/fasta.hpp"
#include "test_util.hpp"

using namespace asmdist;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& contents) {
        path = std::filesystem::temp_directory_path() /
               ("asmdist_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".fa");
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::filesystem::remove(path); }
    static int counter;
};
int TempFile::counter = 0;

}  // namespace

TEST_CASE("fasta single record") {
    TempFile f(">chr\nAC\nGT\n");
    auto s = ingest_fasta(f.path.string());
    CHECK(s.size() == 4);
    CHECK(s.str() == "ACGT");
}

TEST_CASE("fasta lower case folds, ambiguity codes are rejected with position") {
    TempFile ok(">x\nacgt\n");
    CHECK(ingest_fasta(ok.path.string()).str() == "ACGT");

    TempFile bad(">x\nACGNACGT\n");
    try {
        ingest_fasta(bad.path.string());
        FAIL("expected FastaError");
    } catch (const FastaError& e) {
        std::string msg = e.what();
        CHECK(msg.find("'N'") != std::string::npos);
        CHECK(msg.find("offset 4") != std::string::npos);
    }
}

TEST_CASE("fasta record selection") {
    TempFile f(">a desc\nAAAA\n>b\nCCCC\n");
    CHECK_THROWS_AS(ingest_fasta(f.path.string()), FastaError);
    CHECK(ingest_fasta(f.path.string(), std::string("a")).str() == "AAAA");
    CHECK(ingest_fasta(f.path.string(), std::string("b")).str() == "CCCC");
    CHECK(ingest_fasta(f.path.string(), std::string("2")).str() == "CCCC");
    CHECK_THROWS_AS(ingest_fasta(f.path.string(), std::string("zz")), FastaError);
}

TEST_CASE("fasta missing and empty inputs") {
    CHECK_THROWS_AS(ingest_fasta("/nonexistent/path.fa"), FastaError);
    TempFile empty("");
    CHECK_THROWS_AS(ingest_fasta(empty.path.string()), FastaError);
    TempFile headless("ACGT\n");
    CHECK_THROWS_AS(ingest_fasta(headless.path.string()), FastaError);
}

TEST_CASE("fasta round trip") {
    std::mt19937_64 rng(7701);
    for (int it = 0; it < 10; ++it) {
        std::string seq = testutil::random_genome(rng, 1 + uniform_position(rng, 300));
        std::ostringstream buf;
        write_fasta(buf, "g", seq);
        TempFile f(buf.str());
        CHECK(ingest_fasta(f.path.string()).str() == seq);
    }
}
