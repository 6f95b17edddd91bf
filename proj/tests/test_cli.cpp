// Integration tests driving the compiled binary. The binary path arrives as
// the first non-doctest argv entry (wired up by CTest).

#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

std::string g_binary;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = g_binary + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult res{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// minimal JSON-schema checker covering the subset used by output.schema.json:
// type / enum / required / properties / items / pattern (digits-only)
bool validate(const json& schema, const json& value, std::string& error) {
    if (schema.contains("type")) {
        auto matches = [&](const std::string& t) {
            if (t == "object") return value.is_object();
            if (t == "array") return value.is_array();
            if (t == "string") return value.is_string();
            if (t == "integer") return value.is_number_integer();
            if (t == "number") return value.is_number();
            if (t == "boolean") return value.is_boolean();
            if (t == "null") return value.is_null();
            return false;
        };
        bool ok = false;
        if (schema["type"].is_array()) {
            for (const auto& t : schema["type"]) ok = ok || matches(t.get<std::string>());
        } else {
            ok = matches(schema["type"].get<std::string>());
        }
        if (!ok) {
            error = "type mismatch at " + value.dump().substr(0, 40);
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& candidate : schema["enum"]) ok = ok || candidate == value;
        if (!ok) {
            error = "enum mismatch: " + value.dump();
            return false;
        }
    }
    if (schema.contains("pattern") && value.is_string()) {
        if (schema["pattern"] == "^[0-9]+$") {
            for (char c : value.get<std::string>())
                if (c < '0' || c > '9') {
                    error = "pattern mismatch: " + value.dump();
                    return false;
                }
        }
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>())) {
                    error = "missing required key " + key.get<std::string>();
                    return false;
                }
        if (schema.contains("properties"))
            for (auto it = value.begin(); it != value.end(); ++it)
                if (schema["properties"].contains(it.key()))
                    if (!validate(schema["properties"][it.key()], it.value(), error)) return false;
    }
    if (value.is_array() && schema.contains("items"))
        for (const auto& element : value)
            if (!validate(schema["items"], element, error)) return false;
    return true;
}

json load_schema() {
    std::ifstream in(SCHEMA_PATH);
    REQUIRE(in.good());
    return json::parse(in);
}

void check_schema(const std::string& output) {
    static json schema = load_schema();
    std::string error;
    json doc = json::parse(output);
    bool ok = validate(schema, doc, error);
    if (!ok) MESSAGE(error);
    CHECK(ok);
}

}  // namespace

TEST_CASE("constants command prints J(3) and validates against the schema") {
    auto res = run("constants --J 3 --limitJ --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    REQUIRE(doc["results"].size() == 2);
    CHECK(doc["results"][0]["value"].get<std::string>().substr(0, 12) == "0.9183682043");
    CHECK(doc["results"][1]["value"].get<std::string>().substr(0, 6) == "0.8414");
}

TEST_CASE("constants gamma range stays below 4") {
    auto res = run("constants --gamma 2..9 --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    REQUIRE(doc["results"].size() == 8);
    for (const auto& row : doc["results"])
        CHECK(std::stod(row["value"].get<std::string>()) < 4.0);
}

TEST_CASE("identical inputs produce byte-identical JSON") {
    auto a = run("bounds --k 6 --n 1..4 --assume-property-d --format json");
    auto b = run("bounds --k 6 --n 1..4 --assume-property-d --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto c = run("oracle s --k 3 --n 2 --threads 4 --format json");
    auto d = run("oracle s --k 3 --n 2 --threads 4 --format json");
    CHECK(c.exit_code == 0);
    CHECK(c.out == d.out);
}

TEST_CASE("bounds rows carry the Reiher value at n=2") {
    auto res = run("bounds --k 3 --n 1..5 --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    REQUIRE(doc["results"].size() == 5);
    const auto& row = doc["results"][1];
    CHECK(row["n"] == 2);
    CHECK(row["lower"] == "9");
    CHECK(row["upper"] == "9");
    CHECK(row["upper_method"] == "Reiher");
}

TEST_CASE("bounds --k 2 --n 3 agrees with the exact value") {
    auto res = run("bounds --k 2 --n 3 --format json");
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.out);
    CHECK(doc["results"][0]["lower"] == "9");
    CHECK(doc["results"][0]["upper"] == "9");
}

TEST_CASE("bounds --assume-property-d populates the conditional column") {
    auto res = run("bounds --k 6 --n 1..3 --assume-property-d --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    bool any_conditional = false;
    for (const auto& row : doc["results"]) {
        CHECK(row.contains("unconditional_upper"));
        any_conditional = any_conditional || row["conditional"].get<bool>();
    }
    CHECK(any_conditional);
}

TEST_CASE("verify tensors --all-small passes with tuple counts") {
    auto res = run("verify tensors --r 4 --x 4 --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    REQUIRE(doc["results"].size() == 3);
    for (const auto& row : doc["results"]) {
        CHECK(row["pass"].get<bool>());
        CHECK(row["tuples"].get<std::uint64_t>() == 256);
    }
}

TEST_CASE("verify binomials certifies a prime-power range") {
    auto res = run("verify binomials --q 16 --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    REQUIRE(doc["results"].size() == 1);
    CHECK(doc["results"][0]["pass"].get<bool>());
}

TEST_CASE("infeasible verification is refused with a usage exit") {
    auto res = run("verify tensors --p 7 --n 3 --format json");
    CHECK(res.exit_code == 1);
    json doc = json::parse(res.out);
    CHECK(doc["results"][0]["pass"].get<bool>() == false);
    auto detail = doc["results"][0]["detail"].get<std::string>();
    CHECK(detail.find("refused") != std::string::npos);
    CHECK(detail.find("558545864083284007") != std::string::npos);  // 7^21
}

TEST_CASE("oracle s writes a re-readable witness and reports the constant") {
    auto res = run("oracle s --k 5 --n 1 --witness-out /tmp/zerosum_w5.txt --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    CHECK(doc["results"][0]["value"] == 9);
    CHECK(doc["results"][0]["witness"].size() == 8);

    std::ifstream in("/tmp/zerosum_w5.txt");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);  // comment
    std::getline(in, header);
    CHECK(header == "group 5 1");
}

TEST_CASE("oracle property-d reports holds and extremal count") {
    auto res = run("oracle property-d --k 3 --n 2 --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    CHECK(doc["results"][0]["holds"].get<bool>());
    CHECK(doc["results"][0]["extremal_count"] == 54);
}

TEST_CASE("cap exhaustion exits with the inconclusive code") {
    auto res = run("oracle s --k 4 --n 2 --cap 1e2 --format json");
    CHECK(res.exit_code == 3);
    json doc = json::parse(res.out);
    CHECK(doc["results"][0]["complete"].get<bool>() == false);
}

TEST_CASE("distinct-zero-sum searches a set from a sequence file") {
    {
        std::ofstream out("/tmp/zerosum_set.txt");
        out << "group 3 2\n0,0\n1,0\n0,1\n1,1\n";
    }
    auto res = run("oracle distinct-zero-sum --in /tmp/zerosum_set.txt --format json");
    CHECK(res.exit_code == 0);
    check_schema(res.out);
    json doc = json::parse(res.out);
    CHECK(doc["results"][0]["found"].get<bool>() == false);

    {
        std::ofstream out("/tmp/zerosum_set2.txt");
        out << "group 3 1\n0\n1\n2\n";
    }
    auto res2 = run("oracle distinct-zero-sum --in /tmp/zerosum_set2.txt --format json");
    json doc2 = json::parse(res2.out);
    CHECK(doc2["results"][0]["found"].get<bool>());
    CHECK(doc2["results"][0]["tuple"].size() == 3);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("bounds").exit_code == 1);
    CHECK(run("bounds --k 1").exit_code == 1);
    CHECK(run("constants").exit_code == 1);
    CHECK(run("oracle nosuchtask --k 3 --n 1").exit_code == 1);
    CHECK(run("verify tensors").exit_code == 1);
}

TEST_CASE("csv output uses one header plus one line per row") {
    auto res = run("constants --gamma 2..5 --format csv");
    CHECK(res.exit_code == 0);
    std::istringstream lines(res.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 5);
    CHECK(res.out.rfind("constant,argument,value", 0) == 0);
}

int main(int argc, char** argv) {
    doctest::Context context;
    std::vector<char*> forwarded;
    for (int i = 0; i < argc; ++i) {
        if (i == 1 && argv[i][0] != '-') {
            g_binary = argv[i];
            continue;
        }
        forwarded.push_back(argv[i]);
    }
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-zerosum-binary> [doctest args]\n");
        return 1;
    }
    context.applyCommandLine(static_cast<int>(forwarded.size()), forwarded.data());
    return context.run();
}
