#pragma once
// The specimen pipeline fixture: vocabulary, measurement schema, OWL-shape
// crosswalk and mass rule, run from ingest to lift in an in-memory store.

#include "semladder.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

namespace fixture {

using namespace semladder;

inline const std::string base = "https://example.org/unit/";
inline const std::string sentence = "Specimen X has a mass of 4.96 grams.";
inline const Stamp stamp{"tester", "2024-01-01T00:00:00Z"};

inline std::filesystem::path path(const std::string& name) { return std::filesystem::path(SEMLADDER_FIXTURES) / name; }
inline std::string read(const std::string& name) { return read_file(path(name)); }

inline Vocabulary vocab() { return load_vocabulary(path("vocab.tsv")); }

inline RosettaSchema measurement() { return parse_schema_file(read("schemas.txt")).at(0); }

inline SchemaCrosswalk owl_crosswalk() { return parse_crosswalk_file(read("crosswalks.txt")).at(0); }

inline Ruleset mass_rules() { return parse_rules(read("rules.txt"), "unnamed"); }

inline Metadata meta(Level level, std::optional<std::string> src = std::nullopt) {
    return make_metadata(stamp, level, std::move(src));
}

// Registries loaded; no units yet.
inline void load_registries(Store& store) {
    store.add_vocabulary(vocab());
    store.add_schema(measurement());
    store.add_crosswalk(owl_crosswalk());
    store.add_ruleset(mass_rules());
}

struct Pipeline {
    std::unique_ptr<Store> store = std::make_unique<Store>();
    semladder::Pipeline pipe{*store, GupriMinter(base), stamp};
    std::string document;
    Gupri l1, l2, l3, l4, l5;

    // Runs the ladder over `doc` (first sentence must be the measurement).
    explicit Pipeline(std::string doc = sentence, bool lifted = true) : document(std::move(doc)) {
        load_registries(*store);
        l1 = pipe.ingest(document, "doc:specimen").at(0);
        l2 = pipe.enrich(l1);
        l3 = pipe.structure(l2).value();
        l4 = pipe.model(l3, "measurement-to-owl");
        if (lifted) l5 = pipe.lift({l4}, "mass-rules");
    }

    SemanticUnit unit(const Gupri& g) const { return std::get<SemanticUnit>(store->get_unit(g)); }
};

// Runs a shell command, capturing stdout and the exit status.
struct Run {
    int status = -1;
    std::string out;
};

inline Run run(const std::string& cmd) {
    Run r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

inline std::string cli() { return SEMLADDER_CLI; }

inline std::string quote(const std::string& s) { return "'" + s + "'"; }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("semladder-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Drives the CLI against one store directory with a pinned clock.
struct Cli {
    std::filesystem::path home;
    Run operator()(const std::string& args) const {
        return run("SOURCE_DATE_EPOCH=1704067200 " + quote(cli()) + " --home " + quote(home.string()) + " " + args);
    }
};

// GUPRI of the first porcelain record of the given type.
inline std::string first_gupri(const std::string& porcelain, const std::string& type = "unit") {
    std::size_t lineno = 0;
    for (const auto& line : text::split(porcelain, '\n')) {
        ++lineno;
        if (line.empty()) continue;
        auto j = records::parse_line(line, lineno);
        if (j.at("type") == type && j.contains("gupri")) return j.at("gupri").get<std::string>();
    }
    return {};
}

// The whole fixture pipeline through the CLI; every step in porcelain mode.
struct Script {
    std::vector<Run> steps;
    std::string l1, l2, l3, l4, l5;
    bool ok = true;
};

inline Script run_script(const Cli& cli) {
    Script s;
    auto step = [&](const std::string& args) -> const std::string& {
        s.steps.push_back(cli(args + " --porcelain"));
        if (s.steps.back().status != 0) s.ok = false;
        return s.steps.back().out;
    };
    step("init " + quote(cli.home.string()) + " --base https://example.org/unit/ --creator tester");
    step("vocab load " + quote(path("vocab.tsv").string()));
    step("schema add " + quote(path("schemas.txt").string()));
    step("crosswalk add " + quote(path("crosswalks.txt").string()));
    step("rules add " + quote(path("rules.txt").string()));
    s.l1 = first_gupri(step("ingest " + quote(path("specimen.txt").string()) + " --source doc:specimen"));
    s.l2 = first_gupri(step("enrich " + s.l1));
    s.l3 = first_gupri(step("structure " + s.l2));
    s.l4 = first_gupri(step("model " + s.l3 + " --crosswalk measurement-to-owl"));
    s.l5 = first_gupri(step("lift --rules mass-rules " + s.l4));
    if (s.l5.empty()) s.ok = false;
    return s;
}

}  // namespace fixture
