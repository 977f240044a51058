// asmdist: assembly-graph distortion toolkit.
//
// Subcommands: dk-curve, coverage-curve, distortion-curve, simulate,
// repeats, graph-dump.  Outputs are CSV or JSON with a reproducible header
// (tool version, resolved config, seed); re-running with the same config
// and seed reproduces every byte except the timestamp line.
//
// Exit codes: 0 success, 2 ingestion error, 3 computation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "asmdist/coverage.hpp"
#include "asmdist/distortion.hpp"
#include "asmdist/fasta.hpp"
#include "asmdist/greedy.hpp"
#include "asmdist/repeats.hpp"
#include "asmdist/seqgraph.hpp"

using nlohmann::json;
using namespace asmdist;

namespace {

constexpr Position kLargeGenomeThreshold = 200'000;

std::string fmt_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::vector<Position> parse_int_grid(const std::string& spec) {
    std::vector<Position> out;
    if (spec.find(':') != std::string::npos) {
        Position a = 0, b = 0, step = 1;
        std::string s = spec;
        std::replace(s.begin(), s.end(), ':', ' ');
        std::istringstream in(s);
        if (!(in >> a >> b)) throw CLI::ValidationError("grid", "expected a:b[:step]");
        in >> step;
        if (step < 1) throw CLI::ValidationError("grid", "step must be >= 1");
        for (Position v = a; v <= b; v += step) out.push_back(v);
    } else {
        std::string s = spec;
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream in(s);
        Position v;
        while (in >> v) out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("grid", "empty grid");
    return out;
}

std::vector<double> parse_double_grid(const std::string& spec) {
    std::vector<double> out;
    std::string s = spec;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    double v;
    while (in >> v) out.push_back(v);
    if (out.empty()) throw CLI::ValidationError("grid", "empty grid");
    return out;
}

struct Output {
    std::ofstream file;
    bool to_file = false;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
            to_file = true;
        }
    }
    std::ostream& os() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
};

void write_header(std::ostream& os, const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& config) {
    os << "# asmdist " << kVersion << "\n";
    os << "# command: " << command << "\n";
    for (const auto& [k, v] : config) os << "# " << k << ": " << v << "\n";
    os << "# timestamp: " << iso_timestamp() << "\n";
}

CircularSequence load_genome(const std::string& path, const std::string& record,
                             bool allow_large) {
    std::optional<std::string> rec;
    if (!record.empty()) rec = record;
    CircularSequence s = ingest_fasta(path, rec);
    if (s.size() > kLargeGenomeThreshold && !allow_large) {
        double mb = static_cast<double>(s.size()) * 3e-5;  // rough working set
        throw FastaError("genome has " + std::to_string(s.size()) +
                         " bases; pass --large to proceed (estimated working set ~" +
                         fmt_sig(mb) + " MB per graph order, runtime grows with "
                         "branching)" );
    }
    return s;
}

json distortion_json(const DistortionValue& v) {
    return json{{"sufficient", v.sufficient},
                {"log10_distortion", v.log10_value},
                {"exact_count_digits", v.exact_count_digits()},
                {"exact_count_leading", v.exact_count_leading()},
                {"upper_bound_only", v.upper_bound_only}};
}

int run(int argc, char** argv) {
    CLI::App app{"assembly-graph distortion toolkit"};
    app.require_subcommand(1);

    std::string genome_path, record, out_path, format = "csv";
    std::string k_spec = "", L_grid_spec = "", cov_grid_spec = "";
    Position k = 0, q = 0, L = 0, N = -1;
    double epsilon = 0.01, coverage = 0.0;
    std::uint64_t seed = 0;
    bool approx = false, large = false, cycle_graph = false;

    auto add_common = [&](CLI::App* cmd, bool needs_genome = true) {
        if (needs_genome)
            cmd->add_option("--genome", genome_path, "FASTA file")->required();
        cmd->add_option("--record", record, "FASTA record name or 1-based index");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--large", large, "allow genomes above the size guard");
        cmd->add_flag("--approx", approx,
                      "use the exponential bridging approximation");
        cmd->add_flag("--exact", [](std::int64_t) {},
                      "use the exact bridging form (default)");
    };

    auto* cmd_dk = app.add_subcommand("dk-curve",
                                      "distortion of the k-mer graph over a k grid");
    add_common(cmd_dk);
    cmd_dk->add_option("--k", k_spec,
                       "k grid: value, a:b[:step], or comma list "
                       "(default: 1 up to the critical read length)");

    auto* cmd_cov = app.add_subcommand(
        "coverage-curve", "reads required for the bridging conditions per L");
    add_common(cmd_cov);
    cmd_cov->add_option("--L-grid", L_grid_spec, "read lengths, a:b[:step] or list")
        ->required();
    cmd_cov->add_option("--k", k, "assembly order (k-covering term)")->required();
    cmd_cov->add_option("--epsilon", epsilon, "target failure probability");

    auto* cmd_dist = app.add_subcommand(
        "distortion-curve", "distortion upper/lower bounds over (L, coverage)");
    add_common(cmd_dist);
    cmd_dist->add_option("--k", k, "assembly order")->required();
    cmd_dist->add_option("--L-grid", L_grid_spec, "read lengths")->required();
    cmd_dist->add_option("--coverage-grid", cov_grid_spec, "coverage depths")
        ->required();
    cmd_dist->add_option("--epsilon", epsilon, "target failure probability");

    auto* cmd_sim = app.add_subcommand(
        "simulate", "sample reads, assemble, and score the result");
    add_common(cmd_sim);
    cmd_sim->add_option("--k", k, "assembly order")->required();
    cmd_sim->add_option("--L", L, "read length")->required();
    cmd_sim->add_option("--N", N, "read count (overrides --coverage)");
    cmd_sim->add_option("--coverage", coverage, "coverage depth c = NL/G");
    cmd_sim->add_option("--q", q, "also evaluate the order-q bridging conditions");
    cmd_sim->add_option("--seed", seed, "sampling seed");

    auto* cmd_rep = app.add_subcommand("repeats", "repeat catalog of the genome");
    add_common(cmd_rep);
    cmd_rep->add_option("--k", k, "with --q: linked-pair window [k-1, q]");
    cmd_rep->add_option("--q", q, "with --k: linked-pair window [k-1, q]");

    auto* cmd_dump = app.add_subcommand("graph-dump", "serialize a graph");
    add_common(cmd_dump);
    cmd_dump->add_option("--k", k, "graph order")->required();
    cmd_dump->add_flag("--cycle", cycle_graph,
                       "dump the cycle sequence graph instead of the k-mer graph");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    ProbabilityMode mode = approx ? ProbabilityMode::Approx : ProbabilityMode::Exact;

    try {
        if (cmd_dk->parsed()) {
            CircularSequence s = load_genome(genome_path, record, large);
            std::vector<Position> grid;
            std::string grid_desc;
            if (k_spec.empty()) {
                Position crit = critical_read_length(s);
                for (Position v = 1; v <= crit; ++v) grid.push_back(v);
                grid_desc = "1:" + std::to_string(crit) + " (to critical length)";
            } else {
                grid = parse_int_grid(k_spec);
                grid_desc = k_spec;
            }
            Output out(out_path);
            write_header(out.os(), "dk-curve",
                         {{"genome", genome_path},
                          {"record", record},
                          {"k-grid", grid_desc},
                          {"format", format}});
            if (format == "csv") {
                out.os() << "k,log10_distortion,exact_count_digits\n";
                for (Position kk : grid) {
                    DistortionValue v = dk(s, kk);
                    out.os() << kk << "," << fmt_sig(v.log10_value) << ","
                             << v.exact_count_digits() << "\n";
                }
            } else {
                json rows = json::array();
                for (Position kk : grid) {
                    json row = distortion_json(dk(s, kk));
                    row["k"] = kk;
                    rows.push_back(row);
                }
                out.os() << rows.dump(2) << "\n";
            }
            return 0;
        }

        if (cmd_cov->parsed()) {
            CircularSequence s = load_genome(genome_path, record, large);
            auto L_grid = parse_int_grid(L_grid_spec);
            RepeatCatalog catalog = build_repeat_catalog(s);
            Output out(out_path);
            write_header(out.os(), "coverage-curve",
                         {{"genome", genome_path},
                          {"record", record},
                          {"L-grid", L_grid_spec},
                          {"k", std::to_string(k)},
                          {"epsilon", fmt_sig(epsilon)},
                          {"mode", approx ? "approx" : "exact"}});
            out.os() << "L,N_required,coverage_depth,infinite_flag\n";
            for (Position Lv : L_grid) {
                if (Lv < 1 || Lv > s.size())
                    throw std::invalid_argument("L grid point out of [1, G]");
                RequiredReads rr =
                    required_reads(catalog.triples, Lv, s.size(), k, epsilon, mode);
                if (rr.n) {
                    double c = static_cast<double>(*rr.n) * static_cast<double>(Lv) /
                               static_cast<double>(s.size());
                    out.os() << Lv << "," << *rr.n << "," << fmt_sig(c) << ",0\n";
                } else {
                    out.os() << Lv << ",,,1\n";
                }
            }
            // triple-repeat length histogram
            std::map<Position, Position> hist;
            for (const auto& t : catalog.triples) ++hist[t.len];
            std::ostringstream hout;
            hout << "triple_length,count\n";
            for (auto& [len, cnt] : hist) hout << len << "," << cnt << "\n";
            if (out.to_file) {
                std::ofstream hf(out_path + ".hist.csv");
                write_header(hf, "coverage-curve.hist",
                             {{"genome", genome_path}, {"record", record}});
                hf << hout.str();
            } else {
                out.os() << "\n";
                out.os() << hout.str();
            }
            return 0;
        }

        if (cmd_dist->parsed()) {
            CircularSequence s = load_genome(genome_path, record, large);
            auto L_grid = parse_int_grid(L_grid_spec);
            auto cov_grid = parse_double_grid(cov_grid_spec);
            auto rows = distortion_bound_curve(s, k, L_grid, cov_grid, epsilon, mode);
            Output out(out_path);
            write_header(out.os(), "distortion-curve",
                         {{"genome", genome_path},
                          {"record", record},
                          {"k", std::to_string(k)},
                          {"L-grid", L_grid_spec},
                          {"coverage-grid", cov_grid_spec},
                          {"epsilon", fmt_sig(epsilon)},
                          {"mode", approx ? "approx" : "exact"}});
            out.os() << "L,coverage,N,q_star,upper_bound_log10,lower_bound_log10,gap_flag\n";
            for (const auto& r : rows) {
                out.os() << r.read_length << "," << fmt_sig(r.coverage) << ","
                         << r.n_reads << ",";
                if (r.q_star) out.os() << *r.q_star;
                out.os() << ",";
                if (r.upper_log10) out.os() << fmt_sig(*r.upper_log10);
                out.os() << "," << fmt_sig(r.lower_log10) << "," << (r.gap ? 1 : 0)
                         << "\n";
            }
            return 0;
        }

        if (cmd_sim->parsed()) {
            CircularSequence s = load_genome(genome_path, record, large);
            if (N < 0) {
                if (coverage <= 0.0)
                    throw std::invalid_argument("simulate needs --N or --coverage");
                N = static_cast<Position>(std::nearbyint(
                    coverage * static_cast<double>(s.size()) / static_cast<double>(L)));
            }
            SamplingParams params{N, L, s.size(), seed};
            ReadSet reads = sample_reads(s, params);
            json report;
            report["config"] = {{"genome", genome_path}, {"record", record},
                                {"k", k},                {"L", L},
                                {"N", N},                {"seed", seed},
                                {"q", q > 0 ? json(q) : json(nullptr)}};
            report["genome_length"] = s.size();
            report["coverage_depth"] = params.coverage_depth();
            if (N == 0) {
                DistortionValue v = dk(s, 1);
                v.sufficient = false;
                v.log10_value += 1.0;
                report["assembly"] = nullptr;
                report["sufficient"] = false;
                report["distortion"] = distortion_json(v);
                report["conditions"] = {{"k_covers", false},
                                        {"theorem1", false},
                                        {"theorem2", nullptr}};
            } else {
                std::vector<GreedyTrace> trace;
                GreedyOptions opts;
                opts.trace = &trace;
                SequenceGraph g = greedy_assemble(reads, k, opts);
                RepeatCatalog catalog = build_repeat_catalog(s);
                DistortionValue v = distortion(g, s);
                report["assembly"] = {{"nodes", g.node_count()},
                                      {"edges", g.edge_count()}};
                report["sufficient"] = v.sufficient;
                report["distortion"] = distortion_json(v);
                report["conditions"] = {
                    {"k_covers", k_covers(reads, s, k)},
                    {"theorem1", check_theorem1_conditions(s, reads, k, &catalog)},
                    {"theorem2", q > 0 ? json(check_theorem2_conditions(s, reads, k, q,
                                                                        &catalog))
                                       : json(nullptr)}};
                json jtrace = json::array();
                for (const auto& t : trace)
                    jtrace.push_back({{"ell", t.ell},
                                      {"candidates", t.candidates},
                                      {"merges", t.merges}});
                report["trace"] = jtrace;
            }
            report["timestamp"] = iso_timestamp();
            report["version"] = kVersion;
            Output out(out_path);
            out.os() << report.dump(2) << "\n";
            return 0;
        }

        if (cmd_rep->parsed()) {
            CircularSequence s = load_genome(genome_path, record, large);
            RepeatCatalog catalog = build_repeat_catalog(s);
            std::optional<std::vector<LinkedPair>> linked;
            if (q > 0 && k > 0)
                linked = find_linked_pairs(s, catalog.pairs, k - 1, q);
            Output out(out_path);
            write_header(out.os(), "repeats",
                         {{"genome", genome_path},
                          {"record", record},
                          {"linked-window",
                           linked ? std::to_string(k - 1) + ":" + std::to_string(q)
                                  : "off"}});
            write_catalog_csv(out.os(), catalog, linked ? &*linked : nullptr);
            return 0;
        }

        if (cmd_dump->parsed()) {
            CircularSequence s = load_genome(genome_path, record, large);
            SequenceGraph g =
                cycle_graph ? build_cycle_graph(s, k) : build_kmer_graph(s, k);
            Output out(out_path);
            write_header(out.os(), "graph-dump",
                         {{"genome", genome_path},
                          {"record", record},
                          {"k", std::to_string(k)},
                          {"graph", cycle_graph ? "cycle" : "kmer"}});
            out.os() << g.serialize();
            return 0;
        }
    } catch (const FastaError& e) {
        std::cerr << "ingestion error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
