#pragma once

// FASTA ingestion with a strict {A,C,G,T} alphabet.  Lower case is folded;
// anything else (including ambiguity codes) is rejected with its position.

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asmdist/core.hpp"

namespace asmdist {

struct FastaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FastaRecord {
    std::string name;
    std::string sequence;
};

inline std::vector<FastaRecord> read_fasta_records(std::istream& in) {
    std::vector<FastaRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            std::string name = line.substr(1);
            auto ws = name.find_first_of(" \t");
            if (ws != std::string::npos) name = name.substr(0, ws);
            records.push_back({name, ""});
        } else {
            if (records.empty())
                throw FastaError("sequence data before any FASTA header");
            records.back().sequence += line;
        }
    }
    if (records.empty()) throw FastaError("no FASTA records found");
    return records;
}

/// Load a genome: single record, or the record selected by name or 1-based
/// index.  Upper-cases, validates the alphabet (reporting the offending
/// 1-based offset), and returns the circularized sequence.
inline CircularSequence ingest_fasta(const std::string& path,
                                     const std::optional<std::string>& record = {}) {
    std::ifstream in(path);
    if (!in) throw FastaError("cannot open FASTA file: " + path);
    auto records = read_fasta_records(in);
    const FastaRecord* chosen = nullptr;
    if (!record) {
        if (records.size() > 1)
            throw FastaError("FASTA has " + std::to_string(records.size()) +
                             " records; select one with --record");
        chosen = &records[0];
    } else {
        for (const auto& r : records)
            if (r.name == *record) chosen = &r;
        if (!chosen) {
            try {
                std::size_t idx = std::stoul(*record);
                if (idx >= 1 && idx <= records.size()) chosen = &records[idx - 1];
            } catch (...) {
            }
        }
        if (!chosen) throw FastaError("no FASTA record named '" + *record + "'");
    }
    std::string seq = chosen->sequence;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(seq[i])));
        if (!is_base_char(c))
            throw FastaError("invalid symbol '" + std::string(1, seq[i]) +
                             "' at offset " + std::to_string(i + 1) + " of record '" +
                             chosen->name + "'");
        seq[i] = c;
    }
    if (seq.empty())
        throw FastaError("record '" + chosen->name + "' has an empty sequence");
    return CircularSequence(std::move(seq));
}

inline void write_fasta(std::ostream& os, const std::string& name,
                        const std::string& sequence, std::size_t width = 70) {
    os << ">" << name << "\n";
    for (std::size_t i = 0; i < sequence.size(); i += width)
        os << sequence.substr(i, width) << "\n";
}

}  // namespace asmdist
