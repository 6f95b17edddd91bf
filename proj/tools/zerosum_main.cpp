// Command-line surface: bounds tables, constant computation, identity
// verification, and oracle searches, with machine-readable output.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zerosum/catalog.hpp"
#include "zerosum/oracle.hpp"
#include "zerosum/rank_bounds.hpp"

using json = nlohmann::ordered_json;
using namespace zerosum;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitInconclusive = 3;

int g_digits = 12;

std::string fmt_real(const Real& value) {
    std::ostringstream os;
    os << std::setprecision(g_digits) << value;
    return os.str();
}

std::string fmt_nat(const Natural& value) { return value.str(); }

struct Range {
    std::uint64_t lo{0}, hi{0};
};

// "7" or "2..64"
Range parse_range(const std::string& text) {
    Range r;
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoull(text);
        } else {
            r.lo = std::stoull(text.substr(0, dots));
            r.hi = std::stoull(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected N or LO..HI, got '" + text + "'");
    }
    if (r.lo > r.hi) throw CLI::ValidationError("range", "empty range '" + text + "'");
    return r;
}

unsigned default_threads() {
    if (const char* env = std::getenv("ZEROSUM_THREADS")) {
        try {
            unsigned t = static_cast<unsigned>(std::stoul(env));
            if (t >= 1) return t;
        } catch (const std::exception&) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

json envelope(const std::string& command, json parameters) {
    json j;
    j["schema_version"] = "1.0";
    j["command"] = command;
    j["parameters"] = std::move(parameters);
    j["results"] = json::array();
    return j;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string scalar_to_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

// rows of flat scalars -> csv / aligned table
void print_rows(const json& rows, const std::string& format, std::ostream& os) {
    std::vector<std::string> cols;
    for (const auto& row : rows)
        for (auto it = row.begin(); it != row.end(); ++it)
            if (!it.value().is_structured() &&
                std::find(cols.begin(), cols.end(), it.key()) == cols.end())
                cols.push_back(it.key());

    if (format == "csv") {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_quote(cols[i]);
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                os << (i ? "," : "");
                if (row.contains(cols[i])) os << csv_quote(scalar_to_string(row[cols[i]]));
            }
            os << "\n";
        }
        return;
    }

    std::vector<std::size_t> width(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (row.contains(cols[i]))
                width[i] = std::max(width[i], scalar_to_string(row[cols[i]]).size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << std::left << std::setw(static_cast<int>(width[i]) + 2) << cols[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            os << std::left << std::setw(static_cast<int>(width[i]) + 2)
               << (row.contains(cols[i]) ? scalar_to_string(row[cols[i]]) : "");
        os << "\n";
    }
}

void emit(const json& doc, const std::string& format) {
    if (format == "json") {
        std::cout << doc.dump(2) << "\n";
    } else {
        print_rows(doc["results"], format, std::cout);
    }
}

json record_to_json(const BoundRecord& r, bool with_derivation) {
    json j;
    j["direction"] = r.direction == BoundRecord::Direction::lower ? "lower" : "upper";
    j["value"] = fmt_nat(r.value);
    j["method"] = std::string(method_name(r.method));
    j["conditional_on_property_d"] = r.conditional_on_property_d;
    if (r.real_value) j["real_value"] = fmt_real(*r.real_value);
    if (!r.note.empty()) j["note"] = r.note;
    if (with_derivation && !r.derivation.empty()) {
        j["derivation"] = json::array();
        for (const auto& sub : r.derivation) j["derivation"].push_back(record_to_json(sub, true));
    }
    return j;
}

json sequence_to_json(const SequenceMultiset& s) {
    json out = json::array();
    for (const auto& [v, m] : s.counts)
        for (unsigned i = 0; i < m; ++i) out.push_back(v.to_string());
    return out;
}

// ---- bounds ------------------------------------------------------------------

int cmd_bounds(const std::string& n_range, std::uint32_t k, bool exact_dp, bool assume_d,
               const std::string& format) {
    Range nr = parse_range(n_range);
    json doc = envelope("bounds", {{"k", k},
                                   {"n", n_range},
                                   {"exact_dp", exact_dp},
                                   {"assume_property_d", assume_d}});
    for (std::uint64_t n = nr.lo; n <= nr.hi; ++n) {
        auto [lower, upper] = best_bounds({k, static_cast<std::uint32_t>(n)}, assume_d);
        json row;
        row["n"] = n;
        row["lower"] = fmt_nat(lower.value);
        row["lower_method"] = std::string(method_name(lower.method));
        row["upper"] = fmt_nat(upper.value);
        row["upper_method"] = std::string(method_name(upper.method));
        row["conditional"] = upper.conditional_on_property_d;
        if (assume_d) {
            auto [ul, uu] = best_bounds({k, static_cast<std::uint32_t>(n)}, false);
            (void)ul;
            row["unconditional_upper"] = fmt_nat(uu.value);
        }
        if (exact_dp) {
            row["routes"] = json::array();
            for (const auto& r : lower.derivation) row["routes"].push_back(record_to_json(r, true));
            for (const auto& r : upper.derivation) row["routes"].push_back(record_to_json(r, true));
        }
        doc["results"].push_back(std::move(row));
    }
    emit(doc, format);
    return kExitOk;
}

// ---- constants ---------------------------------------------------------------

int cmd_constants(const std::string& j_range, const std::string& gamma_range, bool limit_j,
                  const std::string& format) {
    json doc = envelope("constants", {{"J", j_range.empty() ? json() : json(j_range)},
                                      {"gamma", gamma_range.empty() ? json() : json(gamma_range)},
                                      {"limitJ", limit_j}});
    if (!j_range.empty()) {
        Range r = parse_range(j_range);
        for (std::uint64_t p = r.lo; p <= r.hi; ++p) {
            if (!is_prime(p) || p == 2) continue;
            json row;
            row["constant"] = "J";
            row["argument"] = p;
            row["value"] = fmt_real(compute_J(static_cast<unsigned>(p)));
            doc["results"].push_back(std::move(row));
        }
    }
    if (!gamma_range.empty()) {
        Range r = parse_range(gamma_range);
        for (std::uint64_t q = r.lo; q <= r.hi; ++q) {
            if (q < 2) continue;
            json row;
            row["constant"] = "gamma";
            row["argument"] = q;
            row["value"] = fmt_real(compute_gamma(static_cast<unsigned>(q)));
            doc["results"].push_back(std::move(row));
        }
    }
    if (limit_j) {
        json row;
        row["constant"] = "limitJ";
        row["argument"] = nullptr;
        row["value"] = fmt_real(compute_limit_J());
        doc["results"].push_back(std::move(row));
    }
    if (doc["results"].empty())
        throw CLI::ValidationError("constants", "nothing requested: pass --J, --gamma or --limitJ");
    emit(doc, format);
    return kExitOk;
}

// ---- verify ------------------------------------------------------------------

json check_to_json(const IdentityCheck& c) {
    json row;
    row["check"] = c.name;
    row["tuples"] = c.tuples;
    row["pass"] = c.pass;
    if (!c.mismatch.empty()) row["detail"] = c.mismatch;
    return row;
}

int cmd_verify(const std::string& suite, bool all_small, std::uint64_t p, std::uint64_t q,
               std::uint64_t n, std::uint64_t r, std::uint64_t x, const std::string& q_range,
               unsigned lifts, const std::string& format) {
    json doc = envelope("verify", {{"suite", suite},
                                   {"all_small", all_small},
                                   {"p", p},
                                   {"q", suite == "binomials" ? json(q_range) : json(q)},
                                   {"n", n},
                                   {"r", r},
                                   {"x", x},
                                   {"lifts", lifts}});
    bool all_pass = true;
    bool refused = false;
    auto push = [&](const IdentityCheck& c) {
        all_pass = all_pass && c.pass;
        refused = refused || c.mismatch.rfind("refused", 0) == 0;
        doc["results"].push_back(check_to_json(c));
    };

    if (suite == "tensors") {
        if (all_small) {
            for (const auto& c : verify_identities_all_small()) push(c);
        } else if (p && n) {
            push(verify_I(static_cast<unsigned>(p), static_cast<unsigned>(n)));
        } else if (q && n) {
            Range qr = parse_range(q_range);
            for (std::uint64_t qq = qr.lo; qq <= qr.hi; ++qq) {
                if (qq < 2 || factorize(qq).size() != 1) continue;  // prime powers only
                push(verify_E(static_cast<unsigned>(qq), static_cast<unsigned>(n)));
            }
        } else if (r && x) {
            push(verify_distinctness(static_cast<unsigned>(r), static_cast<unsigned>(x)));
            push(verify_R_piecewise(static_cast<unsigned>(r), static_cast<unsigned>(x)));
            push(verify_R_expansion(static_cast<unsigned>(r), static_cast<unsigned>(x)));
        } else {
            throw CLI::ValidationError(
                "verify", "tensors: pass --all-small, --p P --n N, --q Q --n N, or --r K --x SIZE");
        }
    } else if (suite == "binomials") {
        Range range = parse_range(q_range);
        for (std::uint64_t qv = range.lo; qv <= range.hi; ++qv) {
            if (qv < 2) continue;
            auto fs = factorize(qv);
            if (fs.size() != 1) continue;  // prime powers only
            auto rep = verify_binom_welldef(fs[0], lifts);
            IdentityCheck c;
            c.name = "binom-welldef q=" + std::to_string(qv) + " lifts=" + std::to_string(lifts);
            c.tuples = rep.cases_checked;
            c.pass = rep.well_defined;
            c.mismatch = rep.first_failure;
            push(c);
        }
        if (doc["results"].empty())
            throw CLI::ValidationError("verify", "binomials: no prime powers in --q " + q_range);
    } else {
        throw CLI::ValidationError("verify", "unknown suite '" + suite + "'");
    }

    emit(doc, format);
    if (refused) return kExitUsage;
    return all_pass ? kExitOk : kExitVerifyFailed;
}

// ---- oracle ------------------------------------------------------------------

int cmd_oracle(const std::string& task, std::uint32_t k, std::uint32_t n, unsigned threads,
               double cap_value, const std::string& witness_out, const std::string& in_file,
               std::uint64_t p_override, bool timings, const std::string& format) {
    auto cap = static_cast<std::uint64_t>(cap_value);
    json doc = envelope(
        "oracle", {{"task", task},
                   {"k", k},
                   {"n", n},
                   {"threads", threads},
                   {"cap", fmt_nat(Natural(cap))},
                   {"witness_out", witness_out.empty() ? json() : json(witness_out)},
                   {"in", in_file.empty() ? json() : json(in_file)}});

    if (task == "s" || task == "property-d") {
        if (!k || !n) throw CLI::ValidationError("oracle", task + " needs --k and --n");
        GroupSpec g{k, n};
        SearchReport rep = task == "s" ? exact_s(g, cap, threads) : check_property_D(g, cap, threads);
        json row;
        row["task"] = rep.task;
        row["k"] = g.k;
        row["n"] = g.n;
        row["complete"] = rep.complete;
        row["value"] = rep.value;
        row["nodes"] = rep.nodes;
        row["threads"] = rep.threads;
        if (timings) row["seconds"] = rep.seconds;
        if (task == "property-d") {
            row["holds"] = rep.property_d_holds;
            row["extremal_count"] = rep.extremal_count;
            row["violations"] = json::array();
            for (const auto& v : rep.violations) row["violations"].push_back(sequence_to_json(v));
        } else if (rep.witness) {
            row["witness"] = sequence_to_json(*rep.witness);
        }
        doc["results"].push_back(std::move(row));
        if (!witness_out.empty() && rep.witness) {
            std::ofstream out(witness_out);
            if (!out) throw CLI::ValidationError("oracle", "cannot write " + witness_out);
            write_sequence(out, *rep.witness);
        }
        emit(doc, format);
        return rep.complete ? kExitOk : kExitInconclusive;
    }

    if (task == "distinct-zero-sum") {
        if (in_file.empty())
            throw CLI::ValidationError("oracle", "distinct-zero-sum needs --in FILE");
        std::ifstream in(in_file);
        if (!in) throw CLI::ValidationError("oracle", "cannot read " + in_file);
        SequenceMultiset s = read_sequence(in);
        unsigned p = p_override ? static_cast<unsigned>(p_override) : s.group.k;
        std::vector<GroupVector> set;
        for (const auto& [v, m] : s.counts) set.push_back(v);
        auto found = find_distinct_zero_sum(set, p);
        json row;
        row["task"] = task;
        row["k"] = s.group.k;
        row["n"] = s.group.n;
        row["p"] = p;
        row["set_size"] = set.size();
        row["found"] = found.has_value();
        if (found) {
            row["tuple"] = json::array();
            for (const auto& v : *found) row["tuple"].push_back(v.to_string());
        }
        doc["results"].push_back(std::move(row));
        emit(doc, format);
        return kExitOk;
    }

    throw CLI::ValidationError("oracle", "unknown task '" + task + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounds, constants, and brute-force oracles for zero-sum constants of (Z/kZ)^n"};
    app.require_subcommand(1);
    std::string format = "table";

    // bounds
    auto* bounds = app.add_subcommand("bounds", "best known lower/upper bounds for s((Z/kZ)^n)");
    std::uint32_t bk = 0;
    std::string bn = "1";
    bool exact_dp = false, assume_d = false;
    bounds->add_option("--k", bk, "modulus k >= 2")->required();
    bounds->add_option("--n", bn, "dimension n or range LO..HI");
    bounds->add_flag("--exact-dp", exact_dp, "attach full derivation routes per row");
    bounds->add_flag("--assume-property-d", assume_d, "include conditional routes");

    // constants
    auto* constants = app.add_subcommand("constants", "J(p), gamma_q, and lim J");
    std::string j_range, gamma_range;
    bool limit_j = false;
    constants->add_option("--J", j_range, "prime p or range; odd primes only");
    constants->add_option("--gamma", gamma_range, "q or range, any q >= 2");
    constants->add_flag("--limitJ", limit_j, "the p -> infinity limit of J(p)");

    // verify
    auto* verify = app.add_subcommand("verify", "exhaustive identity verification");
    std::string suite;
    bool all_small = false;
    std::uint64_t vp = 0, vq = 0, vn = 0, vr = 0, vx = 0;
    std::string vq_range = "2..9";
    unsigned lifts = 3;
    verify->add_option("suite", suite, "tensors | binomials")->required();
    verify->add_flag("--all-small", all_small, "tensors: the full small-parameter grid");
    verify->add_option("--p", vp, "tensors: I_p check over F_p^n");
    verify->add_option("--q", vq_range, "tensors: E_q check; binomials: prime-power range");
    verify->add_option("--n", vn, "dimension for --p/--q checks");
    verify->add_option("--r", vr, "tensors: R_k checks for k = r");
    verify->add_option("--x", vx, "tensors: label-set size for R_k checks");
    verify->add_option("--lifts", lifts, "binomials: lifts per residue (default 3)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "brute-force searches at desk scale");
    std::string task;
    std::uint32_t ok_ = 0, on = 0;
    unsigned threads = default_threads();
    double cap = static_cast<double>(kDefaultSearchCap);
    std::string witness_out, in_file;
    std::uint64_t p_override = 0;
    bool timings = false;
    oracle->add_option("task", task, "s | property-d | distinct-zero-sum")->required();
    oracle->add_option("--k", ok_, "modulus k >= 2");
    oracle->add_option("--n", on, "dimension n >= 1");
    oracle->add_option("--threads", threads, "worker threads (default ZEROSUM_THREADS or cores)");
    oracle->add_option("--cap", cap, "node budget, e.g. 1e8");
    oracle->add_option("--witness-out", witness_out, "write the extremal witness to a file");
    oracle->add_option("--in", in_file, "sequence file for distinct-zero-sum");
    oracle->add_option("--p", p_override, "tuple length for distinct-zero-sum (default k)");
    oracle->add_flag("--timings", timings, "include elapsed seconds in machine output");

    for (auto* sub : {bounds, constants, verify, oracle}) {
        sub->add_option("--format", format, "json | csv | table")
            ->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_option("--digits", g_digits, "significant digits for reals (default 12)")
            ->check(CLI::Range(1, 40));
    }

    try {
        app.parse(argc, argv);
        if (bounds->parsed()) {
            if (bk < 2) throw CLI::ValidationError("bounds", "--k must be >= 2");
            return cmd_bounds(bn, bk, exact_dp, assume_d, format);
        }
        if (constants->parsed()) return cmd_constants(j_range, gamma_range, limit_j, format);
        if (verify->parsed()) {
            if (suite == "tensors" && verify->count("--q")) vq = parse_range(vq_range).lo;
            return cmd_verify(suite, all_small, vp, vq, vn, vr, vx, vq_range, lifts, format);
        }
        if (oracle->parsed())
            return cmd_oracle(task, ok_, on, threads, cap, witness_out, in_file, p_override,
                              timings, format);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
