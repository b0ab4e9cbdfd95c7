#pragma once
// Rosetta statement schemata: formalized natural-language patterns such as
// "MATERIAL ENTITY has a QUALITY of VALUE UNIT", their instantiation as L3
// statement units, and the human-facing renderings (dynamic label, dynamic
// graph, content/meta table rows).

#include "semladder/core.hpp"
#include "semladder/vocabulary.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semladder {

enum class RoleKind { Entity, Numeric, Text };

inline std::string_view to_string(RoleKind k) noexcept {
    switch (k) {
        case RoleKind::Entity: return "entity";
        case RoleKind::Numeric: return "numeric";
        case RoleKind::Text: return "text";
    }
    return "entity";
}

inline std::optional<RoleKind> parse_role_kind(std::string_view s) {
    if (s == "entity") return RoleKind::Entity;
    if (s == "numeric") return RoleKind::Numeric;
    if (s == "text") return RoleKind::Text;
    return std::nullopt;
}

struct RoleSpec {
    std::string name;
    RoleKind kind = RoleKind::Entity;
    std::optional<Iri> constraint;  // required for entity roles
    bool operator==(const RoleSpec&) const = default;
};

struct Segment {
    enum class Kind { Literal, Role };
    Kind kind = Kind::Literal;
    std::string text;  // literal words, or the role name
    bool operator==(const Segment&) const = default;
};

struct StatementPattern {
    std::vector<Segment> segments;

    std::vector<std::string> role_names() const {
        std::vector<std::string> out;
        for (const auto& s : segments)
            if (s.kind == Segment::Kind::Role) out.push_back(s.text);
        return out;
    }

    // Characters of literal text, used to prefer the more specific schema.
    std::size_t literal_chars() const {
        std::size_t n = 0;
        for (const auto& s : segments)
            if (s.kind == Segment::Kind::Literal) n += s.text.size();
        return n;
    }

    bool operator==(const StatementPattern&) const = default;
};

namespace detail {

inline bool is_upper_word(std::string_view w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

inline bool is_role_name(std::string_view name) {
    auto words = text::split_ws(name);
    return !words.empty() && text::join(words, " ") == name &&
           std::all_of(words.begin(), words.end(), [](const std::string& w) { return is_upper_word(w); });
}

// Lengths sorted longest first; the lexicographically greater vector wins.
inline std::vector<std::size_t> length_profile(const std::vector<std::vector<std::string>>& seg) {
    std::vector<std::size_t> lens;
    for (const auto& s : seg) lens.push_back(s.size());
    std::sort(lens.rbegin(), lens.rend());
    return lens;
}

// Splits a maximal run of uppercase words into declared role names.
inline std::vector<std::string> segment_run(const std::vector<std::string>& run,
                                            const std::vector<std::vector<std::string>>& roles) {
    std::vector<std::vector<std::vector<std::string>>> complete;
    std::vector<std::vector<std::string>> current;
    std::function<void(std::size_t)> search = [&](std::size_t pos) {
        if (pos == run.size()) {
            complete.push_back(current);
            return;
        }
        for (const auto& r : roles) {
            if (pos + r.size() > run.size()) continue;
            if (!std::equal(r.begin(), r.end(), run.begin() + static_cast<std::ptrdiff_t>(pos))) continue;
            current.push_back(r);
            search(pos + r.size());
            current.pop_back();
        }
    };
    search(0);

    if (complete.empty()) {
        // Report the word where longest-first matching gets stuck.
        std::size_t pos = 0;
        while (pos < run.size()) {
            std::size_t best = 0;
            for (const auto& r : roles)
                if (pos + r.size() <= run.size() &&
                    std::equal(r.begin(), r.end(), run.begin() + static_cast<std::ptrdiff_t>(pos)))
                    best = std::max(best, r.size());
            if (best == 0) break;
            pos += best;
        }
        fail(ErrorCode::UnknownRole, "'" + run[std::min(pos, run.size() - 1)] + "' matches no declared role");
    }

    auto best = std::max_element(complete.begin(), complete.end(), [](const auto& a, const auto& b) {
        return length_profile(a) < length_profile(b);
    });
    auto profile = length_profile(*best);
    std::size_t ties = 0;
    for (const auto& c : complete) {
        if (length_profile(c) == profile) ++ties;
    }
    if (ties > 1) fail(ErrorCode::AmbiguousPattern, "'" + text::join(run, " ") + "' splits into roles in several ways");

    std::vector<std::string> names;
    for (const auto& r : *best) names.push_back(text::join(r, " "));
    return names;
}

}  // namespace detail

// Uppercase runs become role segments (longest declared names first);
// everything else becomes whitespace-normalized literal text.
inline StatementPattern parse_pattern(std::string_view pattern_text, const std::vector<RoleSpec>& declared) {
    if (text::trim(pattern_text).empty()) fail(ErrorCode::InvalidArgument, "empty pattern");
    std::vector<std::vector<std::string>> roles;
    std::set<std::string> names;
    for (const auto& r : declared) {
        if (!detail::is_role_name(r.name))
            fail(ErrorCode::InvalidArgument, "role name '" + r.name + "' is not an uppercase token");
        if (!names.insert(r.name).second) fail(ErrorCode::AmbiguousPattern, "role '" + r.name + "' declared twice");
        roles.push_back(text::split_ws(r.name));
    }

    StatementPattern out;
    std::vector<std::string> literal;
    std::vector<std::string> run;
    std::set<std::string> used;
    auto flush_literal = [&] {
        if (literal.empty()) return;
        out.segments.push_back({Segment::Kind::Literal, text::join(literal, " ")});
        literal.clear();
    };
    auto flush_run = [&] {
        if (run.empty()) return;
        flush_literal();
        for (auto& name : detail::segment_run(run, roles)) {
            if (!used.insert(name).second)
                fail(ErrorCode::InvalidSchema, "role '" + name + "' appears more than once in the pattern");
            out.segments.push_back({Segment::Kind::Role, std::move(name)});
        }
        run.clear();
    };
    for (auto& w : text::split_ws(pattern_text)) {
        if (detail::is_upper_word(w)) {
            run.push_back(std::move(w));
        } else {
            flush_run();
            literal.push_back(std::move(w));
        }
    }
    flush_run();
    flush_literal();
    if (used.empty()) fail(ErrorCode::NoRoles, "pattern contains no declared role");
    return out;
}

inline std::string pattern_text(const StatementPattern& p) {
    std::vector<std::string> parts;
    for (const auto& s : p.segments) parts.push_back(s.text);
    return text::join(parts, " ");
}

struct RosettaSchema {
    std::string id;
    StatementPattern pattern;
    std::vector<RoleSpec> roles;  // in pattern order
    bool is_anchor = false;

    const RoleSpec* role(std::string_view name) const {
        for (const auto& r : roles)
            if (r.name == name) return &r;
        return nullptr;
    }

    bool operator==(const RosettaSchema&) const = default;
};

inline RosettaSchema make_schema(std::string id, std::string_view pattern, std::vector<RoleSpec> roles,
                                 bool is_anchor = false) {
    if (id.empty() || id.find_first_of(" \t\n") != std::string::npos)
        fail(ErrorCode::InvalidSchema, "schema id '" + id + "' is not a token");
    for (const auto& r : roles) {
        if (r.kind == RoleKind::Entity && !r.constraint)
            fail(ErrorCode::InvalidSchema, "entity role '" + r.name + "' needs a constraint class");
    }
    RosettaSchema s;
    s.id = std::move(id);
    try {
        s.pattern = parse_pattern(pattern, roles);
    } catch (const Error& e) {
        // A pattern role without a declaration is a role/pattern mismatch.
        if (e.code() == ErrorCode::UnknownRole) fail(ErrorCode::InvalidSchema, "schema " + s.id + ": " + e.what());
        throw;
    }
    s.is_anchor = is_anchor;
    auto names = s.pattern.role_names();
    if (names.size() != roles.size())
        fail(ErrorCode::InvalidSchema, "schema " + s.id + " declares roles absent from its pattern");
    for (const auto& n : names) {
        auto it = std::find_if(roles.begin(), roles.end(), [&](const RoleSpec& r) { return r.name == n; });
        s.roles.push_back(*it);
    }
    return s;
}

class SchemaRegistry {
public:
    void add(RosettaSchema schema) {
        if (schemas_.count(schema.id)) fail(ErrorCode::Conflict, "schema " + schema.id + " already registered");
        auto names = schema.pattern.role_names();
        if (names.size() != schema.roles.size())
            fail(ErrorCode::InvalidSchema, "roles of " + schema.id + " do not cover its pattern");
        for (std::size_t i = 0; i < names.size(); ++i)
            if (schema.roles[i].name != names[i])
                fail(ErrorCode::InvalidSchema, "roles of " + schema.id + " do not cover its pattern");
        schemas_.emplace(schema.id, std::move(schema));
    }

    const RosettaSchema* find(std::string_view id) const {
        auto it = schemas_.find(std::string(id));
        return it == schemas_.end() ? nullptr : &it->second;
    }

    const RosettaSchema& get(std::string_view id) const {
        if (const auto* s = find(id)) return *s;
        fail(ErrorCode::NotFound, "schema " + std::string(id) + " is not registered");
    }

    const std::map<std::string, RosettaSchema>& all() const noexcept { return schemas_; }

private:
    std::map<std::string, RosettaSchema> schemas_;
};

// Block format, blank-line separated:
//   schema <id> [anchor]
//   pattern <text>
//   role <NAME> <entity|numeric|text> [<constraint-iri>]
inline std::vector<RosettaSchema> parse_schema_file(std::string_view content) {
    std::vector<RosettaSchema> out;
    struct Pending {
        std::string id;
        bool anchor = false;
        std::optional<std::string> pattern;
        std::vector<RoleSpec> roles;
        std::size_t line = 0;
    };
    std::optional<Pending> cur;
    auto finish = [&] {
        if (!cur) return;
        if (!cur->pattern)
            fail(ErrorCode::ParseError, "line " + std::to_string(cur->line) + ": schema " + cur->id + " has no pattern");
        out.push_back(make_schema(cur->id, *cur->pattern, cur->roles, cur->anchor));
        cur.reset();
    };
    std::size_t lineno = 0;
    for (auto line : text::split(content, '\n')) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto where = "line " + std::to_string(lineno) + ": ";
        auto trimmed = text::trim(line);
        if (trimmed.empty()) {
            finish();
            continue;
        }
        if (trimmed[0] == '#') continue;
        auto words = text::split_ws(trimmed);
        const auto& directive = words[0];
        if (directive == "schema") {
            finish();
            if (words.size() < 2 || words.size() > 3 || (words.size() == 3 && words[2] != "anchor"))
                fail(ErrorCode::ParseError, where + "expected 'schema <id> [anchor]'");
            cur = Pending{words[1], words.size() == 3, std::nullopt, {}, lineno};
        } else if (!cur) {
            fail(ErrorCode::ParseError, where + "'" + directive + "' outside a schema block");
        } else if (directive == "pattern") {
            if (cur->pattern) fail(ErrorCode::ParseError, where + "second pattern line");
            cur->pattern = std::string(text::trim(trimmed.substr(directive.size())));
        } else if (directive == "role") {
            // NAME is the leading run of uppercase words; the kind word ends it.
            std::size_t i = 1;
            std::vector<std::string> name;
            while (i < words.size() && detail::is_upper_word(words[i])) name.push_back(words[i++]);
            if (name.empty() || i >= words.size()) fail(ErrorCode::ParseError, where + "expected 'role <NAME> <kind> [<constraint>]'");
            auto kind = parse_role_kind(words[i]);
            if (!kind) fail(ErrorCode::ParseError, where + "unknown role kind '" + words[i] + "'");
            RoleSpec r{text::join(name, " "), *kind, std::nullopt};
            ++i;
            if (i < words.size()) r.constraint = Iri{words[i++]};
            if (i != words.size()) fail(ErrorCode::ParseError, where + "trailing text after role");
            cur->roles.push_back(std::move(r));
        } else {
            fail(ErrorCode::ParseError, where + "unknown directive '" + directive + "'");
        }
    }
    finish();
    return out;
}

// Decides whether `entity` satisfies a role's constraint class.
using ConstraintCheck = std::function<bool(const Iri& entity, const Iri& cls)>;

inline ConstraintCheck vocabulary_check(const Vocabulary& vocab) {
    return [&vocab](const Iri& e, const Iri& c) { return vocab.is_a(e, c); };
}

inline std::string canonical_bindings(const Bindings& b) {
    std::string out;
    for (const auto& [role, value] : b) {
        out += role;
        out += is_iri(value) ? "=I:" : "=L" + std::string(to_string(std::get<Literal>(value).datatype)) + ":";
        out += node_text(value);
        out += '\x1e';
    }
    return out;
}

// Checks arity, kinds and constraints; literal datatypes are normalized to
// the role kind.
inline Bindings check_bindings(const RosettaSchema& schema, Bindings bindings, const ConstraintCheck& satisfies) {
    for (const auto& [role, value] : bindings)
        if (!schema.role(role)) fail(ErrorCode::BindingArity, "schema " + schema.id + " has no role '" + role + "'");
    for (const auto& r : schema.roles) {
        auto it = bindings.find(r.name);
        if (it == bindings.end()) fail(ErrorCode::BindingArity, "role '" + r.name + "' is unbound");
        Node& v = it->second;
        switch (r.kind) {
            case RoleKind::Entity: {
                if (!is_iri(v)) fail(ErrorCode::ConstraintFailure, "role '" + r.name + "' needs an entity");
                if (!satisfies(std::get<Iri>(v), *r.constraint))
                    fail(ErrorCode::ConstraintFailure, std::get<Iri>(v).value + " is not a " + r.constraint->value +
                                                           " (role '" + r.name + "')");
                break;
            }
            case RoleKind::Numeric: {
                if (is_iri(v) || !is_decimal(node_text(v)))
                    fail(ErrorCode::InvalidLiteral, "'" + node_text(v) + "' is not a decimal (role '" + r.name + "')");
                std::get<Literal>(v).datatype = Datatype::Decimal;
                break;
            }
            case RoleKind::Text: {
                if (is_iri(v)) fail(ErrorCode::InvalidLiteral, "role '" + r.name + "' needs a text literal");
                std::get<Literal>(v).datatype = Datatype::Text;
                break;
            }
        }
    }
    return bindings;
}

// `origin` distinguishes otherwise identical statements derived from
// different sources in deterministic minting.
inline SemanticUnit instantiate(const RosettaSchema& schema, Bindings bindings, Metadata metadata,
                                const ConstraintCheck& satisfies, GupriMinter& ids, std::string_view origin = {}) {
    bindings = check_bindings(schema, std::move(bindings), satisfies);
    metadata.logical_framework = std::string(default_logical_framework(Level::L3));
    Gupri id = ids.mint(payload("L3", schema.id, canonical_bindings(bindings), origin));
    return SemanticUnit::create(std::move(id), Iri{ns::rosetta_statement_unit},
                                RosettaStatement{schema.id, std::move(bindings)}, schema.id, std::move(metadata));
}

inline SemanticUnit instantiate(const RosettaSchema& schema, Bindings bindings, Metadata metadata,
                                const Vocabulary& vocab, GupriMinter& ids, std::string_view origin = {}) {
    return instantiate(schema, std::move(bindings), std::move(metadata), vocabulary_check(vocab), ids, origin);
}

namespace detail {

inline std::string entity_label(const Iri& e, const Vocabulary& vocab) {
    if (auto l = vocab.label(e)) return *l;
    fail(ErrorCode::MissingLabel, "no label for " + e.value);
}

inline std::string value_label(const Node& n, const Vocabulary& vocab) {
    return is_iri(n) ? entity_label(std::get<Iri>(n), vocab) : std::get<Literal>(n).lexical;
}

inline const RosettaStatement& require_statement(const SemanticUnit& unit, ErrorCode code) {
    const auto* st = unit.as<RosettaStatement>();
    if (!st) fail(code, "unit " + unit.gupri().value + " is at " + std::string(to_string(unit.level())) + ", not L3");
    return *st;
}

inline std::string local_name(std::string_view iri) {
    auto pos = iri.find_last_of(":#/");
    return std::string(pos == std::string_view::npos ? iri : iri.substr(pos + 1));
}

}  // namespace detail

// Dynamic label. Snippet units render as their text; L3 units substitute
// canonical vocabulary labels (not surface forms) into the pattern.
inline std::string render_label(const SemanticUnit& unit, const SchemaRegistry& schemas, const Vocabulary& vocab) {
    if (const auto* t = unit.snippet_text()) return *t;
    if (!unit.as<RosettaStatement>())
        fail(ErrorCode::NoRenderer, "no label renderer for " + std::string(to_string(unit.level())) + " unit " +
                                        unit.gupri().value);
    const auto& st = *unit.as<RosettaStatement>();
    const auto& schema = schemas.get(st.schema_id);
    std::vector<std::string> parts;
    for (const auto& seg : schema.pattern.segments) {
        if (seg.kind == Segment::Kind::Literal) parts.push_back(seg.text);
        else parts.push_back(detail::value_label(st.bindings.at(seg.text), vocab));
    }
    return text::join(parts, " ");
}

struct DisplayNode {
    std::string id;
    std::string label;
    bool operator==(const DisplayNode&) const = default;
};

struct DisplayEdge {
    std::string from;
    std::string to;
    std::string label;
    bool operator==(const DisplayEdge&) const = default;
};

struct DisplayGraph {
    std::vector<DisplayNode> nodes;
    std::vector<DisplayEdge> edges;

    void add_node(std::string id, std::string label) {
        for (const auto& n : nodes)
            if (n.id == id) return;
        nodes.push_back({std::move(id), std::move(label)});
    }
};

inline std::string display_id(const Node& n) {
    return is_iri(n) ? std::get<Iri>(n).value : "\"" + std::get<Literal>(n).lexical + "\"";
}

// Dynamic graph with modelling scaffolding suppressed. L3: the first role is
// the subject and every other role an edge labelled by the role name (a
// single-role statement hangs off a node for its schema). L4/L5: graph
// triples minus rdf:type, fresh nodes labelled by their type.
inline DisplayGraph render_graph_spec(const SemanticUnit& unit, const SchemaRegistry& schemas,
                                      const Vocabulary& vocab) {
    DisplayGraph g;
    if (const auto* st = unit.as<RosettaStatement>()) {
        const auto& schema = schemas.get(st->schema_id);
        const auto& roles = schema.roles;
        std::string subject_id;
        if (roles.size() == 1) {
            subject_id = schema.id;
            g.add_node(subject_id, schema.id);
        } else {
            const Node& s = st->bindings.at(roles.front().name);
            subject_id = display_id(s);
            g.add_node(subject_id, detail::value_label(s, vocab));
        }
        for (std::size_t i = roles.size() == 1 ? 0 : 1; i < roles.size(); ++i) {
            const Node& o = st->bindings.at(roles[i].name);
            g.add_node(display_id(o), detail::value_label(o, vocab));
            g.edges.push_back({subject_id, display_id(o), roles[i].name});
        }
        return g;
    }

    const GraphContent* triples = nullptr;
    if (const auto* lg = unit.as<LogicGraph>()) triples = &lg->triples;
    if (const auto* ig = unit.as<InferredGraph>()) triples = &ig->triples;
    if (!triples)
        fail(ErrorCode::NoRenderer, "no graph renderer for " + std::string(to_string(unit.level())) + " unit " +
                                        unit.gupri().value);

    std::map<Iri, Iri> type_of;
    for (const auto& t : *triples)
        if (t.predicate.value == ns::rdf_type && is_iri(t.object)) type_of.emplace(t.subject, std::get<Iri>(t.object));
    const std::string fresh_prefix = unit.gupri().value + "#";
    auto label_of = [&](const Node& n) -> std::string {
        if (!is_iri(n)) return std::get<Literal>(n).lexical;
        const Iri& i = std::get<Iri>(n);
        if (auto l = vocab.label(i)) return *l;
        if (text::starts_with(i.value, fresh_prefix)) {
            auto t = type_of.find(i);
            return t != type_of.end() ? detail::entity_label(t->second, vocab) : detail::local_name(i.value);
        }
        fail(ErrorCode::MissingLabel, "no label for " + i.value);
    };
    for (const auto& t : *triples) {
        if (t.predicate.value == ns::rdf_type) continue;
        g.add_node(t.subject.value, label_of(t.subject));
        g.add_node(display_id(t.object), label_of(t.object));
        auto pl = vocab.label(t.predicate);
        g.edges.push_back({t.subject.value, display_id(t.object), pl ? *pl : detail::local_name(t.predicate.value)});
    }
    return g;
}

struct TableRows {
    std::vector<std::string> content;  // unit, one cell per role in pattern order
    std::vector<std::string> meta;     // unit, class, created_at, creator, logical_framework
};

inline TableRows to_table_rows(const SemanticUnit& unit, const RosettaSchema& schema) {
    const auto& st = detail::require_statement(unit, ErrorCode::UnsupportedLevel);
    if (st.schema_id != schema.id) fail(ErrorCode::WrongSchema, "unit is not an instance of " + schema.id);
    TableRows rows;
    rows.content.push_back(unit.gupri().value);
    for (const auto& r : schema.roles) rows.content.push_back(node_text(st.bindings.at(r.name)));
    const auto& m = unit.metadata();
    rows.meta = {unit.gupri().value, unit.unit_class().value, m.created_at, m.creator, m.logical_framework};
    return rows;
}

inline TableRows to_table_rows(const SemanticUnit& unit, const SchemaRegistry& schemas) {
    const auto& st = detail::require_statement(unit, ErrorCode::UnsupportedLevel);
    return to_table_rows(unit, schemas.get(st.schema_id));
}

// Inverse of the content row: rebuilds typed bindings from cells.
inline Bindings bindings_from_row(const RosettaSchema& schema, const std::vector<std::string>& content_row) {
    if (content_row.size() != schema.roles.size() + 1)
        fail(ErrorCode::BindingArity, "row width does not match schema " + schema.id);
    Bindings b;
    for (std::size_t i = 0; i < schema.roles.size(); ++i) {
        const auto& r = schema.roles[i];
        const auto& cell = content_row[i + 1];
        if (r.kind == RoleKind::Entity) b.emplace(r.name, Iri{cell});
        else b.emplace(r.name, Literal{cell, r.kind == RoleKind::Numeric ? Datatype::Decimal : Datatype::Text});
    }
    return b;
}

// Inverse of reification: rebuilds bindings from L3 content triples.
inline Bindings bindings_from_triples(const GraphContent& triples) {
    Bindings b;
    for (const auto& t : triples)
        if (auto role = ns::role_from_predicate(t.predicate)) b.emplace(*role, t.object);
    return b;
}

}  // namespace semladder
