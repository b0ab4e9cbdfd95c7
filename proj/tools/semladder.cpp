// semladder: command-line driver over a journaled store directory.
// Exit codes: 0 ok, 1 usage, 2 validation, 3 not found.

#include "semladder.hpp"
#include "semladder/clock.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace semladder;
using records::json;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_validation = 2;
constexpr int exit_not_found = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string base = "https://example.org/unit/";
    MintMode mode = MintMode::Deterministic;
    std::string creator = "semladder";
};

Config read_config(const fs::path& home) {
    auto path = home / "config.json";
    if (!fs::exists(path)) fail(ErrorCode::NotFound, "no store at " + home.string() + " (run 'semladder init')");
    json j = json::parse(read_file(path));
    Config c;
    c.base = j.value("base", c.base);
    c.mode = j.value("mode", std::string("deterministic")) == "random" ? MintMode::Random : MintMode::Deterministic;
    c.creator = j.value("creator", c.creator);
    return c;
}

class Session {
public:
    explicit Session(const fs::path& home)
        : config_(read_config(home)), store_(home / "journal.jsonl"),
          pipeline_(store_, GupriMinter(config_.base, config_.mode), Stamp{config_.creator, now_rfc3339()}) {}

    Store& store() { return store_; }
    Pipeline& pipeline() { return pipeline_; }

private:
    Config config_;
    Store store_;
    Pipeline pipeline_;
};

struct Output {
    bool porcelain = false;

    void record(const json& j) const { std::cout << records::dump(j) << '\n'; }
    void line(const std::string& s) const { std::cout << s << '\n'; }
};

std::string level_name(Store& store, const Gupri& g) {
    auto u = store.get_unit(g);
    if (const auto* su = std::get_if<SemanticUnit>(&u)) return std::string(to_string(su->level()));
    return "compound";
}

void emit_unit(const Output& out, Store& store, const Gupri& g) {
    if (out.porcelain) out.record(records::encode(store.get_unit(g)));
    else out.line(g.value + "\t" + level_name(store, g));
}

Level level_arg(const std::string& s) { return parse_level(s); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic units across five levels of formalization"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string home;
    Output out;
    app.add_option("--home", home, "store directory (default $SEMLADDER_HOME or .semladder)");
    app.add_flag("--porcelain", out.porcelain, "one canonical record per output line");

    // init
    auto* init = app.add_subcommand("init", "create a store directory");
    std::string init_dir, init_base = "https://example.org/unit/", init_mode = "deterministic", init_creator = "semladder";
    init->add_option("dir", init_dir)->required();
    init->add_option("--base", init_base, "GUPRI prefix ending in '/'");
    init->add_option("--mode", init_mode, "deterministic or random")->check(CLI::IsMember({"deterministic", "random"}));
    init->add_option("--creator", init_creator);

    auto* vocab = app.add_subcommand("vocab", "vocabulary management")->require_subcommand(1);
    auto* vocab_load = vocab->add_subcommand("load", "load a vocabulary TSV");
    std::string vocab_path;
    vocab_load->add_option("tsv", vocab_path)->required();

    auto* schema = app.add_subcommand("schema", "statement schemata")->require_subcommand(1);
    auto* schema_add = schema->add_subcommand("add", "register schemata from a pattern file");
    std::string schema_path;
    schema_add->add_option("file", schema_path)->required();

    auto* crosswalk = app.add_subcommand("crosswalk", "schema crosswalks")->require_subcommand(1);
    auto* crosswalk_add = crosswalk->add_subcommand("add", "register crosswalks from a file");
    std::string crosswalk_path;
    crosswalk_add->add_option("file", crosswalk_path)->required();

    auto* mapping = app.add_subcommand("mapping", "entity mappings")->require_subcommand(1);
    auto* mapping_add = mapping->add_subcommand("add", "register an entity mapping");
    std::string map_s, map_rel, map_o;
    mapping_add->add_option("subject", map_s)->required();
    mapping_add->add_option("relation", map_rel)->required()->check(CLI::IsMember({"exact", "broader", "narrower"}));
    mapping_add->add_option("object", map_o)->required();

    auto* rules = app.add_subcommand("rules", "rulesets")->require_subcommand(1);
    auto* rules_add = rules->add_subcommand("add", "register a rule file");
    std::string rules_path, rules_id;
    rules_add->add_option("file", rules_path)->required();
    rules_add->add_option("--id", rules_id, "ruleset id when the file names none");

    auto* ingest = app.add_subcommand("ingest", "split a document into L1 snippet units");
    std::string ingest_path, ingest_source;
    ingest->add_option("doc", ingest_path)->required();
    ingest->add_option("--source", ingest_source, "source document identifier")->required();

    auto* enrich = app.add_subcommand("enrich", "L1 -> L2");
    std::string enrich_g;
    bool enrich_all = false;
    enrich->add_option("gupri", enrich_g);
    enrich->add_flag("--all-l1", enrich_all);

    auto* structure = app.add_subcommand("structure", "L2 -> L3");
    std::string structure_g;
    bool structure_all = false;
    structure->add_option("gupri", structure_g);
    structure->add_flag("--all-l2", structure_all);

    auto* model = app.add_subcommand("model", "L3 -> L4");
    std::string model_g, model_cw;
    model->add_option("gupri", model_g)->required();
    model->add_option("--crosswalk", model_cw)->required();

    auto* lift = app.add_subcommand("lift", "L4 -> L5");
    std::string lift_rules;
    std::vector<std::string> lift_inputs;
    lift->add_option("--rules", lift_rules)->required();
    lift->add_option("gupri", lift_inputs)->required();

    auto* translate = app.add_subcommand("translate", "re-express an L3 unit under another schema");
    std::string translate_g, translate_to;
    translate->add_option("gupri", translate_g)->required();
    translate->add_option("--to", translate_to)->required();

    auto* label = app.add_subcommand("label", "dynamic label");
    std::string label_g;
    label->add_option("gupri", label_g)->required();

    auto* graph = app.add_subcommand("graph", "dynamic display graph");
    std::string graph_g;
    graph->add_option("gupri", graph_g)->required();

    auto* trace = app.add_subcommand("trace", "walk derivation links");
    std::string trace_g, trace_to;
    trace->add_option("gupri", trace_g)->required();
    trace->add_option("--to", trace_to)->required()->check(CLI::IsMember({"source", "formal"}));

    auto* query = app.add_subcommand("query", "find units");
    std::string q_level, q_class, q_entity, q_text, q_triple, q_similar, q_similar_to;
    std::size_t q_k = 5;
    query->add_option("--level", q_level);
    query->add_option("--class", q_class);
    query->add_option("--entity", q_entity);
    query->add_option("--text", q_text);
    query->add_option("--triple", q_triple, "\"s p o\" with ?var wildcards");
    auto* sim = query->add_option("--similar", q_similar, "rank embedded units by similarity to text");
    auto* sim_to = query->add_option("--similar-to", q_similar_to, "rank embedded units by similarity to a unit");
    query->add_option("-k", q_k)->check(CLI::PositiveNumber);
    sim->excludes(sim_to);

    auto* embed = app.add_subcommand("embed", "attach embeddings");
    std::string embed_g;
    bool embed_all = false;
    embed->add_option("gupri", embed_g);
    embed->add_flag("--all", embed_all);

    auto* exporter = app.add_subcommand("export", "serialize the store");
    std::string export_format, export_schema, export_out;
    exporter->add_option("--format", export_format)->required()->check(CLI::IsMember({"quads", "tables", "records"}));
    exporter->add_option("--schema", export_schema);
    exporter->add_option("--out", export_out, "output file (directory for tables)");

    auto* stats = app.add_subcommand("stats", "store summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    if (home.empty()) {
        const char* env = std::getenv("SEMLADDER_HOME");
        home = env && *env ? env : ".semladder";
    }

    try {
        if (init->parsed()) {
            detail::check_base(init_base);
            fs::create_directories(init_dir);
            json cfg{{"base", init_base}, {"mode", init_mode}, {"creator", init_creator}};
            write_file(fs::path(init_dir) / "config.json", cfg.dump(2) + "\n");
            if (!fs::exists(fs::path(init_dir) / "journal.jsonl")) write_file(fs::path(init_dir) / "journal.jsonl", "");
            if (out.porcelain) out.record(json{{"type", "stats"}, {"home", init_dir}, {"units", 0}});
            else out.line("initialized " + init_dir);
            return 0;
        }

        Session session(home);
        Store& store = session.store();
        Pipeline& pipe = session.pipeline();

        if (vocab_load->parsed()) {
            auto v = load_vocabulary(vocab_path);
            store.add_vocabulary(v);
            if (out.porcelain)
                for (const auto& [iri, e] : v.entries()) out.record(records::encode(e));
            else out.line("loaded " + std::to_string(v.size()) + " vocabulary entries");
        } else if (schema_add->parsed()) {
            for (auto& s : parse_schema_file(read_file(schema_path))) {
                auto rec = records::encode(s);
                std::string id = s.id;
                store.add_schema(std::move(s));
                if (out.porcelain) out.record(rec);
                else out.line(id);
            }
        } else if (crosswalk_add->parsed()) {
            for (auto& cw : parse_crosswalk_file(read_file(crosswalk_path))) {
                auto rec = records::encode(cw);
                std::string id = cw.id;
                store.add_crosswalk(std::move(cw));
                if (out.porcelain) out.record(rec);
                else out.line(id);
            }
        } else if (mapping_add->parsed()) {
            EntityMapping m{Iri{map_s}, parse_relation(map_rel), Iri{map_o}};
            auto id = store.add_mapping(m);
            if (out.porcelain) out.record(records::encode(m));
            else out.line(id);
        } else if (rules_add->parsed()) {
            auto default_id = rules_id.empty() ? fs::path(rules_path).stem().string() : rules_id;
            auto rs = parse_rules(read_file(rules_path), default_id);
            auto rec = records::encode(rs);
            std::string id = rs.id;
            store.add_ruleset(std::move(rs));
            if (out.porcelain) out.record(rec);
            else out.line(id);
        } else if (ingest->parsed()) {
            for (const auto& g : pipe.ingest(read_file(ingest_path), ingest_source)) {
                if (out.porcelain) {
                    out.record(records::encode(store.get_unit(g)));
                } else {
                    auto u = std::get<SemanticUnit>(store.get_unit(g));
                    const auto& s = *u.as<TextSnippet>();
                    out.line(g.value + "\t" + std::to_string(s.start) + "\t" + std::to_string(s.end) + "\t" + s.text);
                }
            }
        } else if (enrich->parsed()) {
            if (enrich_g.empty() == !enrich_all) throw UsageError("enrich takes a GUPRI or --all-l1");
            std::vector<Gupri> inputs;
            if (enrich_all) inputs = store.find_units({Level::L1, {}, {}, {}, {}});
            else inputs.push_back(Gupri{enrich_g});
            for (const auto& g : inputs) emit_unit(out, store, pipe.enrich(g));
        } else if (structure->parsed()) {
            if (structure_g.empty() == !structure_all) throw UsageError("structure takes a GUPRI or --all-l2");
            std::vector<Gupri> inputs;
            if (structure_all) inputs = store.find_units({Level::L2, {}, {}, {}, {}});
            else inputs.push_back(Gupri{structure_g});
            for (const auto& g : inputs) {
                std::vector<StructuringEntry> report;
                auto made = pipe.structure(g, &report);
                for (const auto& e : report) {
                    if (out.porcelain) {
                        json r{{"type", "report"}, {"input", g.value}, {"schema", e.schema_id},
                               {"outcome", std::string(to_string(e.outcome))}, {"position", e.position}};
                        if (!e.role.empty()) r["role"] = e.role;
                        out.record(r);
                    } else if (e.outcome != StructuringOutcome::Matched) {
                        std::cerr << g.value << "\t" << e.schema_id << "\t" << to_string(e.outcome) << "\t"
                                  << (e.role.empty() ? std::to_string(e.position) : e.role) << '\n';
                    }
                }
                if (made) emit_unit(out, store, *made);
            }
        } else if (model->parsed()) {
            emit_unit(out, store, pipe.model(Gupri{model_g}, model_cw));
        } else if (lift->parsed()) {
            std::vector<Gupri> inputs;
            for (const auto& s : lift_inputs) inputs.push_back(Gupri{s});
            emit_unit(out, store, pipe.lift(inputs, lift_rules));
        } else if (translate->parsed()) {
            emit_unit(out, store, pipe.translate(Gupri{translate_g}, translate_to));
        } else if (label->parsed()) {
            auto text = store.label(Gupri{label_g});
            if (out.porcelain) out.record(json{{"type", "label"}, {"gupri", label_g}, {"label", text}});
            else out.line(text);
        } else if (graph->parsed()) {
            auto g = store.graph_spec(Gupri{graph_g});
            if (out.porcelain) {
                json nodes = json::array(), edges = json::array();
                for (const auto& n : g.nodes) nodes.push_back({{"id", n.id}, {"label", n.label}});
                for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"label", e.label}});
                out.record(json{{"type", "graph"}, {"gupri", graph_g}, {"nodes", nodes}, {"edges", edges}});
            } else {
                for (const auto& n : g.nodes) out.line("node\t" + n.id + "\t" + n.label);
                for (const auto& e : g.edges) out.line("edge\t" + e.from + "\t" + e.to + "\t" + e.label);
            }
        } else if (trace->parsed()) {
            auto dir = trace_to == "source" ? TraceDirection::ToSource : TraceDirection::ToFormal;
            auto chain = store.trace(Gupri{trace_g}, dir);
            for (std::size_t i = 0; i < chain.size(); ++i) {
                const auto& g = chain[i];
                auto lvl = level_name(store, g);
                std::string text;
                auto u = store.get_unit(g);
                const auto* su = std::get_if<SemanticUnit>(&u);
                if (su && su->snippet_text()) text = *su->snippet_text();
                if (out.porcelain) {
                    json r{{"type", "trace"}, {"from", trace_g}, {"direction", trace_to}, {"position", i},
                           {"gupri", g.value}, {"level", lvl}};
                    if (su && su->as<TextSnippet>()) {
                        const auto& s = *su->as<TextSnippet>();
                        r["text"] = s.text;
                        r["start"] = s.start;
                        r["end"] = s.end;
                        if (s.source_ref) r["source"] = *s.source_ref;
                    }
                    out.record(r);
                } else {
                    std::string line = g.value + "\t" + lvl;
                    if (su && su->as<TextSnippet>()) {
                        const auto& s = *su->as<TextSnippet>();
                        line += "\t" + std::to_string(s.start) + "\t" + std::to_string(s.end) + "\t" + s.text;
                    }
                    out.line(line);
                }
            }
        } else if (query->parsed()) {
            HashedBagOfWords embedder;
            std::vector<ScoredUnit> hits;
            bool scored = !q_similar.empty() || !q_similar_to.empty();
            if (!q_similar.empty()) hits = store.similar(q_similar, q_k, embedder);
            else if (!q_similar_to.empty()) hits = store.similar_to(Gupri{q_similar_to}, q_k, embedder);
            UnitFilter f;
            if (!q_level.empty()) f.level = level_arg(q_level);
            if (!q_class.empty()) f.unit_class = Iri{q_class};
            if (!q_entity.empty()) f.entity = Iri{q_entity};
            if (!q_text.empty()) f.text = q_text;
            if (!q_triple.empty()) f.triple = parse_triple_pattern(q_triple);
            auto found = store.find_units(f);
            std::set<Gupri> allowed(found.begin(), found.end());
            auto emit = [&](const Gupri& g, std::optional<double> score) {
                if (out.porcelain) {
                    json r{{"type", "match"}, {"gupri", g.value}, {"level", level_name(store, g)}};
                    if (score) r["score"] = *score;
                    out.record(r);
                } else {
                    char buf[32];
                    std::string line = g.value + "\t" + level_name(store, g);
                    if (score) {
                        std::snprintf(buf, sizeof buf, "%.6f", *score);
                        line += std::string("\t") + buf;
                    }
                    out.line(line);
                }
            };
            if (scored) {
                for (const auto& h : hits)
                    if (allowed.count(h.gupri)) emit(h.gupri, h.score);
            } else {
                for (const auto& g : found) emit(g, std::nullopt);
            }
        } else if (embed->parsed()) {
            if (embed_g.empty() == !embed_all) throw UsageError("embed takes a GUPRI or --all");
            HashedBagOfWords embedder;
            std::vector<Gupri> inputs;
            if (embed_all) {
                for (const auto& g : store.find_units({})) {
                    auto u = store.get_unit(g);
                    if (!std::holds_alternative<SemanticUnit>(u)) continue;
                    try {
                        store.label(g);
                    } catch (const Error&) {
                        continue;  // L5 and unrouted L4 units carry no text
                    }
                    inputs.push_back(g);
                }
            } else {
                inputs.push_back(Gupri{embed_g});
            }
            for (const auto& g : inputs) {
                auto rec = store.embed_unit(g, embedder);
                if (out.porcelain) out.record(records::encode(rec));
                else out.line(g.value + "\t" + rec.embedder_id + (rec.zero ? "\tzero" : ""));
            }
        } else if (exporter->parsed()) {
            if (export_format == "tables") {
                if (export_schema.empty()) throw UsageError("--format tables needs --schema");
                auto t = export_tables(store, export_schema);
                if (!export_out.empty()) {
                    fs::create_directories(export_out);
                    write_file(fs::path(export_out) / (export_schema + ".content.csv"), t.content);
                    write_file(fs::path(export_out) / (export_schema + ".meta.csv"), t.meta);
                } else if (out.porcelain) {
                    for (const auto& [table, csv] : {std::pair{"content", &t.content}, std::pair{"meta", &t.meta}}) {
                        auto lines = text::split(*csv, '\n');
                        for (std::size_t i = 1; i < lines.size(); ++i) {
                            auto row = text::trim(lines[i]);
                            if (row.empty()) continue;
                            out.record(json{{"type", "row"}, {"table", table}, {"schema", export_schema},
                                            {"csv", std::string(row)}});
                        }
                    }
                } else {
                    std::cout << t.content << "\r\n" << t.meta;
                }
            } else {
                std::string text = export_format == "quads" ? export_quads(store) : store.export_records();
                if (!export_out.empty()) {
                    write_file(export_out, text);
                } else if (out.porcelain && export_format == "quads") {
                    for (const auto& l : text::split(text, '\n'))
                        if (!l.empty()) out.record(json{{"type", "quad"}, {"line", l}});
                } else {
                    std::cout << text;
                }
            }
        } else if (stats->parsed()) {
            auto s = store.stats();
            json j{{"type", "stats"},         {"levels", s.units_by_level}, {"compounds", s.compounds},
                   {"links", s.links_by_kind}, {"vocabulary", s.vocabulary}, {"schemas", s.schemas},
                   {"crosswalks", s.crosswalks}, {"mappings", s.mappings},    {"rulesets", s.rulesets},
                   {"embeddings", s.embeddings}};
            if (out.porcelain) {
                out.record(j);
            } else {
                for (const auto& [lvl, n] : s.units_by_level) out.line(lvl + "\t" + std::to_string(n));
                out.line("compound\t" + std::to_string(s.compounds));
                for (const auto& [kind, n] : s.links_by_kind) out.line(kind + "\t" + std::to_string(n));
                out.line("vocabulary\t" + std::to_string(s.vocabulary));
                out.line("schemas\t" + std::to_string(s.schemas));
                out.line("crosswalks\t" + std::to_string(s.crosswalks));
                out.line("mappings\t" + std::to_string(s.mappings));
                out.line("rulesets\t" + std::to_string(s.rulesets));
                out.line("embeddings\t" + std::to_string(s.embeddings));
            }
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::NotFound ? exit_not_found : exit_validation;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    }
}
