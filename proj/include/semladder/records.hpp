#pragma once
// Canonical record codec: one compact JSON object per line, keys sorted,
// UTF-8, no insignificant whitespace. Every record carries a "type" key.
// Store records (vocab, schema, crosswalk, mapping, ruleset, unit, compound,
// link, embedding) rebuild a store; view records (label, trace, match,
// stats, quad, row) are emitted by the CLI's porcelain mode only.

#include "semladder/core.hpp"
#include "semladder/embed.hpp"
#include "semladder/links.hpp"
#include "semladder/mappings.hpp"
#include "semladder/rosetta.hpp"
#include "semladder/rules.hpp"
#include "semladder/vocabulary.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <string>

namespace semladder::records {

using json = nlohmann::json;

inline const std::set<std::string>& store_types() {
    static const std::set<std::string> t{"vocab", "schema",   "crosswalk", "mapping",  "ruleset",
                                         "unit",  "compound", "link",      "embedding"};
    return t;
}

inline const std::set<std::string>& view_types() {
    static const std::set<std::string> t{"label", "trace", "match", "stats", "quad", "row", "graph", "report"};
    return t;
}

inline std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

// Parses one line; the line grammar is a JSON object with a known "type".
inline json parse_line(std::string_view line, std::size_t lineno) {
    auto where = "line " + std::to_string(lineno) + ": ";
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, where + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        fail(ErrorCode::ParseError, where + "record is not an object with a string 'type'");
    auto type = j["type"].get<std::string>();
    if (!store_types().count(type) && !view_types().count(type))
        fail(ErrorCode::ParseError, where + "unknown record type '" + type + "'");
    return j;
}

// --- nodes -----------------------------------------------------------------

inline json encode(const Node& n) {
    if (is_iri(n)) return json{{"iri", std::get<Iri>(n).value}};
    const auto& l = std::get<Literal>(n);
    return json{{"literal", l.lexical}, {"datatype", std::string(to_string(l.datatype))}};
}

inline Node decode_node(const json& j) {
    if (j.contains("iri")) return Iri{j.at("iri").get<std::string>()};
    return Literal{j.at("literal").get<std::string>(), parse_datatype(j.at("datatype").get<std::string>())};
}

inline json encode(const GraphContent& g) {
    json arr = json::array();
    for (const auto& t : g) arr.push_back(json::array({t.subject.value, t.predicate.value, encode(t.object)}));
    return arr;
}

inline GraphContent decode_graph(const json& j) {
    GraphContent g;
    for (const auto& t : j) g.insert(Triple{Iri{t.at(0).get<std::string>()}, Iri{t.at(1).get<std::string>()}, decode_node(t.at(2))});
    return g;
}

inline json encode(const Metadata& m) {
    json j{{"created_at", m.created_at}, {"creator", m.creator}, {"logical_framework", m.logical_framework},
           {"extra", m.extra}};
    if (m.source_ref) j["source_ref"] = *m.source_ref;
    return j;
}

inline Metadata decode_metadata(const json& j) {
    Metadata m;
    m.created_at = j.at("created_at").get<std::string>();
    m.creator = j.at("creator").get<std::string>();
    m.logical_framework = j.at("logical_framework").get<std::string>();
    if (j.contains("source_ref")) m.source_ref = j.at("source_ref").get<std::string>();
    m.extra = j.at("extra").get<std::map<std::string, std::string>>();
    return m;
}

// --- units -----------------------------------------------------------------

inline json encode_snippet(const TextSnippet& s) {
    json j{{"text", s.text}, {"start", s.start}, {"end", s.end}};
    if (s.source_ref) j["source"] = *s.source_ref;
    return j;
}

inline TextSnippet decode_snippet(const json& j) {
    TextSnippet s;
    s.text = j.at("text").get<std::string>();
    s.start = j.at("start").get<std::size_t>();
    s.end = j.at("end").get<std::size_t>();
    if (j.contains("source")) s.source_ref = j.at("source").get<std::string>();
    return s;
}

inline json encode(const ContentVariant& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TextSnippet>) {
                json j = encode_snippet(v);
                j["kind"] = "text_snippet";
                return j;
            } else if constexpr (std::is_same_v<T, EnrichedSnippet>) {
                json j = encode_snippet(v.snippet);
                j["kind"] = "enriched_snippet";
                json anns = json::array();
                for (const auto& a : v.annotations) {
                    json aj{{"start", a.start}, {"end", a.end}, {"surface", a.surface},
                            {"kind", a.kind == AnnotationKind::Entity ? "entity" : "numeric"}};
                    if (a.entity) aj["entity"] = a.entity->value;
                    anns.push_back(std::move(aj));
                }
                j["annotations"] = std::move(anns);
                return j;
            } else if constexpr (std::is_same_v<T, RosettaStatement>) {
                json b = json::object();
                for (const auto& [role, value] : v.bindings) b[role] = encode(value);
                return json{{"kind", "rosetta"}, {"schema", v.schema_id}, {"bindings", std::move(b)}};
            } else if constexpr (std::is_same_v<T, LogicGraph>) {
                return json{{"kind", "logic_graph"}, {"triples", encode(v.triples)}};
            } else {
                return json{{"kind", "inferred_graph"}, {"ruleset", v.ruleset_id}, {"triples", encode(v.triples)}};
            }
        },
        c);
}

inline ContentVariant decode_content(const json& j) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "text_snippet") return decode_snippet(j);
    if (kind == "enriched_snippet") {
        EnrichedSnippet e{decode_snippet(j), {}};
        for (const auto& a : j.at("annotations")) {
            Annotation ann;
            ann.start = a.at("start").get<std::size_t>();
            ann.end = a.at("end").get<std::size_t>();
            ann.surface = a.at("surface").get<std::string>();
            ann.kind = a.at("kind").get<std::string>() == "numeric" ? AnnotationKind::Numeric : AnnotationKind::Entity;
            if (a.contains("entity")) ann.entity = Iri{a.at("entity").get<std::string>()};
            e.annotations.push_back(std::move(ann));
        }
        return e;
    }
    if (kind == "rosetta") {
        RosettaStatement st{j.at("schema").get<std::string>(), {}};
        for (const auto& [role, value] : j.at("bindings").items()) st.bindings.emplace(role, decode_node(value));
        return st;
    }
    if (kind == "logic_graph") return LogicGraph{decode_graph(j.at("triples"))};
    if (kind == "inferred_graph")
        return InferredGraph{decode_graph(j.at("triples")), j.at("ruleset").get<std::string>()};
    fail(ErrorCode::ParseError, "unknown content kind '" + kind + "'");
}

inline json encode(const SemanticUnit& u) {
    json refs = json::array();
    for (const auto& r : u.refs()) refs.push_back(r.value);
    json j{{"type", "unit"},
           {"gupri", u.gupri().value},
           {"class", u.unit_class().value},
           {"level", std::string(to_string(u.level()))},
           {"content", encode(u.content())},
           {"refs", std::move(refs)},
           {"meta", encode(u.metadata())}};
    if (u.schema_ref()) j["schema"] = *u.schema_ref();
    return j;
}

inline SemanticUnit decode_unit(const json& j) {
    std::optional<std::string> schema;
    if (j.contains("schema")) schema = j.at("schema").get<std::string>();
    auto u = SemanticUnit::create(Gupri{j.at("gupri").get<std::string>()}, Iri{j.at("class").get<std::string>()},
                                  decode_content(j.at("content")), std::move(schema), decode_metadata(j.at("meta")));
    if (j.contains("level") && j.at("level").get<std::string>() != to_string(u.level()))
        fail(ErrorCode::ParseError, "level does not match content of " + u.gupri().value);
    if (j.contains("refs")) {
        std::set<Iri> refs;
        for (const auto& r : j.at("refs")) refs.insert(Iri{r.get<std::string>()});
        if (refs != u.refs()) fail(ErrorCode::ParseError, "refs do not match content of " + u.gupri().value);
    }
    return u;
}

inline json encode(const CompoundUnit& c) {
    json members = json::array();
    for (const auto& m : c.members()) members.push_back(m.value);
    return json{{"type", "compound"},         {"gupri", c.gupri().value}, {"class", c.unit_class().value},
                {"subject", c.subject().value}, {"members", std::move(members)}, {"meta", encode(c.metadata())}};
}

inline CompoundUnit decode_compound(const json& j) {
    std::vector<Gupri> members;
    for (const auto& m : j.at("members")) members.push_back(Gupri{m.get<std::string>()});
    return CompoundUnit::create(Gupri{j.at("gupri").get<std::string>()}, Iri{j.at("class").get<std::string>()},
                                Iri{j.at("subject").get<std::string>()}, std::move(members),
                                decode_metadata(j.at("meta")));
}

inline json encode(const AnyUnit& u) {
    return std::visit([](const auto& x) { return encode(x); }, u);
}

// --- registries and links ----------------------------------------------------

inline json encode(const VocabEntry& e) {
    json j{{"type", "vocab"}, {"iri", e.iri.value}, {"label", e.label},
           {"kind", std::string(to_string(e.kind))}, {"synonyms", e.synonyms}};
    if (e.parent) j["parent"] = e.parent->value;
    return j;
}

inline VocabEntry decode_vocab(const json& j) {
    VocabEntry e;
    e.iri = Iri{j.at("iri").get<std::string>()};
    e.label = j.at("label").get<std::string>();
    auto kind = j.at("kind").get<std::string>();
    if (kind != "class" && kind != "instance") fail(ErrorCode::ParseError, "bad vocabulary kind '" + kind + "'");
    e.kind = kind == "class" ? EntityKind::Class : EntityKind::Instance;
    if (j.contains("parent")) e.parent = Iri{j.at("parent").get<std::string>()};
    e.synonyms = j.at("synonyms").get<std::vector<std::string>>();
    return e;
}

inline json encode(const RosettaSchema& s) {
    json roles = json::array();
    for (const auto& r : s.roles) {
        json rj{{"name", r.name}, {"kind", std::string(to_string(r.kind))}};
        if (r.constraint) rj["constraint"] = r.constraint->value;
        roles.push_back(std::move(rj));
    }
    return json{{"type", "schema"},
                {"id", s.id},
                {"pattern", pattern_text(s.pattern)},
                {"roles", std::move(roles)},
                {"anchor", s.is_anchor}};
}

inline RosettaSchema decode_schema(const json& j) {
    std::vector<RoleSpec> roles;
    for (const auto& r : j.at("roles")) {
        auto kind = parse_role_kind(r.at("kind").get<std::string>());
        if (!kind) fail(ErrorCode::ParseError, "bad role kind");
        RoleSpec spec{r.at("name").get<std::string>(), *kind, std::nullopt};
        if (r.contains("constraint")) spec.constraint = Iri{r.at("constraint").get<std::string>()};
        roles.push_back(std::move(spec));
    }
    return make_schema(j.at("id").get<std::string>(), j.at("pattern").get<std::string>(), std::move(roles),
                       j.at("anchor").get<bool>());
}

inline json encode(const SchemaCrosswalk& cw) {
    json templates = json::array();
    for (const auto& t : cw.templates)
        templates.push_back(json::array({term_text(t.subject), term_text(t.predicate), term_text(t.object)}));
    json j{{"type", "crosswalk"}, {"id", cw.id},         {"source", cw.source},
           {"target", cw.target}, {"map", cw.role_map}, {"templates", std::move(templates)}};
    if (cw.target_prefix) j["target_prefix"] = *cw.target_prefix;
    return j;
}

inline SchemaCrosswalk decode_crosswalk(const json& j) {
    SchemaCrosswalk cw;
    cw.id = j.at("id").get<std::string>();
    cw.source = j.at("source").get<std::string>();
    cw.target = j.at("target").get<std::string>();
    cw.role_map = j.at("map").get<std::map<std::string, std::string>>();
    for (const auto& t : j.at("templates")) {
        std::string where = "crosswalk " + cw.id + ": ";
        auto term = [&](std::size_t i) {
            auto s = t.at(i).get<std::string>();
            std::size_t pos = 0;
            return detail::parse_template_term(s, pos, where);
        };
        cw.templates.push_back({term(0), term(1), term(2)});
    }
    if (j.contains("target_prefix")) cw.target_prefix = j.at("target_prefix").get<std::string>();
    return cw;
}

inline json encode(const EntityMapping& m) {
    return json{{"type", "mapping"},
                {"id", mapping_id(m)},
                {"subject", m.subject.value},
                {"relation", std::string(to_string(m.relation))},
                {"object", m.object.value}};
}

inline EntityMapping decode_mapping(const json& j) {
    return EntityMapping{Iri{j.at("subject").get<std::string>()}, parse_relation(j.at("relation").get<std::string>()),
                         Iri{j.at("object").get<std::string>()}};
}

inline json encode(const Ruleset& rs) {
    json rules = json::array();
    for (const auto& r : rs.rules) rules.push_back(to_string(r));
    return json{{"type", "ruleset"}, {"id", rs.id}, {"rules", std::move(rules)}};
}

inline Ruleset decode_ruleset(const json& j) {
    Ruleset rs{j.at("id").get<std::string>(), {}};
    for (const auto& r : j.at("rules")) rs.rules.push_back(parse_rule(r.get<std::string>()));
    return rs;
}

inline json encode(const DerivationLink& l) {
    json j{{"type", "link"}, {"id", l.id}, {"from", l.from.value}, {"to", l.to.value},
           {"kind", std::string(to_string(l.kind))}};
    if (l.transformation) j["transformation"] = std::string(to_string(*l.transformation));
    return j;
}

inline DerivationLink decode_link(const json& j) {
    DerivationLink l;
    l.from = Gupri{j.at("from").get<std::string>()};
    l.to = Gupri{j.at("to").get<std::string>()};
    l.kind = parse_link_kind(j.at("kind").get<std::string>());
    if (j.contains("transformation")) l.transformation = parse_transformation(j.at("transformation").get<std::string>());
    l.id = link_id(l.from, l.to, l.kind, l.transformation);
    if (j.contains("id") && j.at("id").get<std::string>() != l.id) fail(ErrorCode::ParseError, "link id mismatch");
    return l;
}

inline json encode(const EmbeddingRecord& e) {
    return json{{"type", "embedding"}, {"gupri", e.gupri.value},       {"embedder", e.embedder_id},
                {"source_text", e.source_text}, {"vector", e.vector}, {"zero", e.zero}};
}

inline EmbeddingRecord decode_embedding(const json& j) {
    return EmbeddingRecord{Gupri{j.at("gupri").get<std::string>()}, j.at("vector").get<std::vector<double>>(),
                           j.at("embedder").get<std::string>(), j.at("source_text").get<std::string>(),
                           j.at("zero").get<bool>()};
}

}  // namespace semladder::records
