#pragma once
// Schema crosswalks and entity mappings. Crosswalks connect statement
// schemata either directly or through an anchor schema; with one anchor, n
// schemata need 2n crosswalks instead of one per ordered pair.
//
// Crosswalk file syntax (blocks start at `crosswalk`):
//   crosswalk <id> <source-schema> <target>
//   map <SOURCE ROLE> -> <TARGET ROLE>
//   template (<s> <p> <o>)        with ${SLOT} and @new(name) terms
//   target-prefix <prefix>        optional; see model()

#include "semladder/core.hpp"
#include "semladder/rosetta.hpp"
#include "semladder/vocabulary.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace semladder {

enum class MappingRelation { Exact, Broader, Narrower };

inline std::string_view to_string(MappingRelation r) noexcept {
    switch (r) {
        case MappingRelation::Exact: return "exact";
        case MappingRelation::Broader: return "broader";
        case MappingRelation::Narrower: return "narrower";
    }
    return "exact";
}

inline MappingRelation parse_relation(std::string_view s) {
    if (s == "exact") return MappingRelation::Exact;
    if (s == "broader") return MappingRelation::Broader;
    if (s == "narrower") return MappingRelation::Narrower;
    fail(ErrorCode::InvalidArgument, "relation must be exact, broader or narrower, not '" + std::string(s) + "'");
}

// (subject broader object): object is the more general term.
struct EntityMapping {
    Iri subject;
    MappingRelation relation = MappingRelation::Exact;
    Iri object;
    bool operator==(const EntityMapping&) const = default;
};

inline std::string mapping_id(const EntityMapping& m) {
    return "urn:semladder:mapping:" +
           digest_hex(payload(m.subject.value, std::string(to_string(m.relation)), m.object.value));
}

struct RoleSlot {
    std::string name;
    bool operator==(const RoleSlot&) const = default;
};

struct FreshNode {
    std::string name;
    bool operator==(const FreshNode&) const = default;
};

using TemplateTerm = std::variant<RoleSlot, FreshNode, Iri, Literal>;

struct TripleTemplate {
    TemplateTerm subject;
    TemplateTerm predicate;
    TemplateTerm object;
    bool operator==(const TripleTemplate&) const = default;
};

struct SchemaCrosswalk {
    std::string id;
    std::string source;
    std::string target;
    std::map<std::string, std::string> role_map;  // source role -> target role or slot
    std::vector<TripleTemplate> templates;         // nonempty for graph-shape targets
    std::optional<std::string> target_prefix;

    bool is_graph_shape() const noexcept { return !templates.empty(); }

    // Target slot for a template reference; source role names resolve too.
    std::optional<std::string> source_role_for(std::string_view slot) const {
        for (const auto& [src, tgt] : role_map)
            if (tgt == slot) return src;
        if (role_map.count(std::string(slot))) return std::string(slot);
        return std::nullopt;
    }

    bool operator==(const SchemaCrosswalk&) const = default;
};

inline std::string term_text(const TemplateTerm& t) {
    if (const auto* r = std::get_if<RoleSlot>(&t)) return "${" + r->name + "}";
    if (const auto* f = std::get_if<FreshNode>(&t)) return "@new(" + f->name + ")";
    if (const auto* i = std::get_if<Iri>(&t)) return i->value;
    const auto& l = std::get<Literal>(t);
    return l.datatype == Datatype::Decimal ? l.lexical : "\"" + l.lexical + "\"";
}

// Structural checks that need no registry.
inline void check_crosswalk_shape(const SchemaCrosswalk& cw, const RosettaSchema& source) {
    for (const auto& r : source.roles)
        if (!cw.role_map.count(r.name))
            fail(ErrorCode::InvalidCrosswalk, cw.id + ": source role '" + r.name + "' is not mapped");
    std::set<std::string> targets;
    for (const auto& [src, tgt] : cw.role_map) {
        if (!source.role(src)) fail(ErrorCode::InvalidCrosswalk, cw.id + ": '" + src + "' is not a role of " + source.id);
        if (!targets.insert(tgt).second) fail(ErrorCode::InvalidCrosswalk, cw.id + ": target '" + tgt + "' mapped twice");
    }
    for (const auto& t : cw.templates) {
        for (const TemplateTerm* term : {&t.subject, &t.predicate, &t.object}) {
            if (const auto* slot = std::get_if<RoleSlot>(term); slot && !cw.source_role_for(slot->name))
                fail(ErrorCode::InvalidCrosswalk, cw.id + ": template slot ${" + slot->name + "} names no declared role");
        }
        if (std::holds_alternative<Literal>(t.subject) || std::holds_alternative<Literal>(t.predicate))
            fail(ErrorCode::InvalidCrosswalk, cw.id + ": literal in template subject or predicate");
        if (std::holds_alternative<FreshNode>(t.predicate))
            fail(ErrorCode::InvalidCrosswalk, cw.id + ": fresh node in predicate position");
    }
}

namespace detail {

inline TemplateTerm parse_template_term(std::string_view s, std::size_t& pos, const std::string& where) {
    while (pos < s.size() && text::is_space(s[pos])) ++pos;
    if (pos >= s.size()) fail(ErrorCode::ParseError, where + "truncated template");
    if (s.substr(pos, 2) == "${") {
        auto end = s.find('}', pos);
        if (end == std::string_view::npos) fail(ErrorCode::ParseError, where + "unterminated ${ slot");
        std::string name = text::normalize_ws(s.substr(pos + 2, end - pos - 2));
        pos = end + 1;
        return RoleSlot{name};
    }
    if (s.substr(pos, 5) == "@new(") {
        auto end = s.find(')', pos);
        if (end == std::string_view::npos) fail(ErrorCode::ParseError, where + "unterminated @new(");
        std::string name(text::trim(s.substr(pos + 5, end - pos - 5)));
        pos = end + 1;
        return FreshNode{name};
    }
    if (s[pos] == '"') {
        auto end = s.find('"', pos + 1);
        if (end == std::string_view::npos) fail(ErrorCode::ParseError, where + "unterminated literal");
        Literal lit{std::string(s.substr(pos + 1, end - pos - 1)), Datatype::Text};
        pos = end + 1;
        return lit;
    }
    std::size_t start = pos;
    while (pos < s.size() && !text::is_space(s[pos]) && s[pos] != ')') ++pos;
    auto tok = s.substr(start, pos - start);
    if (tok.empty()) fail(ErrorCode::ParseError, where + "empty template term");
    if (is_decimal(tok)) return Literal{std::string(tok), Datatype::Decimal};
    return Iri{std::string(tok)};
}

}  // namespace detail

inline std::vector<SchemaCrosswalk> parse_crosswalk_file(std::string_view content) {
    std::vector<SchemaCrosswalk> out;
    std::size_t lineno = 0;
    for (auto line : text::split(content, '\n')) {
        ++lineno;
        auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto where = "line " + std::to_string(lineno) + ": ";
        auto words = text::split_ws(trimmed);
        const auto& directive = words[0];
        if (directive == "crosswalk") {
            if (words.size() != 4) fail(ErrorCode::ParseError, where + "expected 'crosswalk <id> <source> <target>'");
            out.push_back(SchemaCrosswalk{words[1], words[2], words[3], {}, {}, std::nullopt});
            continue;
        }
        if (out.empty()) fail(ErrorCode::ParseError, where + "'" + directive + "' before any crosswalk line");
        auto& cw = out.back();
        if (directive == "map") {
            auto rest = trimmed.substr(3);
            auto arrow = rest.find("->");
            if (arrow == std::string_view::npos) fail(ErrorCode::ParseError, where + "expected 'map <ROLE> -> <ROLE>'");
            auto src = text::normalize_ws(rest.substr(0, arrow));
            auto tgt = text::normalize_ws(rest.substr(arrow + 2));
            if (src.empty() || tgt.empty()) fail(ErrorCode::ParseError, where + "empty role in map line");
            if (!cw.role_map.emplace(src, tgt).second)
                fail(ErrorCode::InvalidCrosswalk, where + "role '" + src + "' mapped twice");
        } else if (directive == "template") {
            auto rest = trimmed.substr(8);
            std::size_t pos = 0;
            while (pos < rest.size() && text::is_space(rest[pos])) ++pos;
            if (pos >= rest.size() || rest[pos] != '(') fail(ErrorCode::ParseError, where + "expected '(' after template");
            ++pos;
            TripleTemplate t{detail::parse_template_term(rest, pos, where), detail::parse_template_term(rest, pos, where),
                             detail::parse_template_term(rest, pos, where)};
            while (pos < rest.size() && text::is_space(rest[pos])) ++pos;
            if (pos >= rest.size() || rest[pos] != ')' || !text::trim(rest.substr(pos + 1)).empty())
                fail(ErrorCode::ParseError, where + "template must be exactly (<s> <p> <o>)");
            cw.templates.push_back(std::move(t));
        } else if (directive == "target-prefix") {
            if (words.size() != 2) fail(ErrorCode::ParseError, where + "expected 'target-prefix <prefix>'");
            cw.target_prefix = words[1];
        } else {
            fail(ErrorCode::ParseError, where + "unknown directive '" + directive + "'");
        }
    }
    return out;
}

struct RelationFilter {
    bool broader = false;
    bool narrower = false;
};

class MappingRegistry {
public:
    std::string add_crosswalk(SchemaCrosswalk cw, const SchemaRegistry& schemas) {
        if (cw.id.empty()) fail(ErrorCode::InvalidCrosswalk, "crosswalk without id");
        if (crosswalks_.count(cw.id)) fail(ErrorCode::Conflict, "crosswalk " + cw.id + " already registered");
        const auto& source = schemas.get(cw.source);
        check_crosswalk_shape(cw, source);
        if (!cw.is_graph_shape()) {
            const auto& target = schemas.get(cw.target);
            std::set<std::string> covered;
            for (const auto& [src, tgt] : cw.role_map) {
                if (!target.role(tgt))
                    fail(ErrorCode::InvalidCrosswalk, cw.id + ": '" + tgt + "' is not a role of " + target.id);
                covered.insert(tgt);
            }
            if (covered.size() != target.roles.size())
                fail(ErrorCode::InvalidCrosswalk, cw.id + ": target roles of " + target.id + " left unbound");
        }
        std::string id = cw.id;
        crosswalks_.emplace(id, std::move(cw));
        return id;
    }

    const SchemaCrosswalk& crosswalk(std::string_view id) const {
        auto it = crosswalks_.find(std::string(id));
        if (it == crosswalks_.end()) fail(ErrorCode::NotFound, "crosswalk " + std::string(id) + " is not registered");
        return it->second;
    }

    const std::map<std::string, SchemaCrosswalk>& crosswalks() const noexcept { return crosswalks_; }

    // Identical re-registration returns the existing id.
    std::string add_entity_mapping(EntityMapping m) {
        if (m.subject == m.object) fail(ErrorCode::InvalidArgument, "mapping " + m.subject.value + " to itself");
        if (m.subject.value.empty() || m.object.value.empty()) fail(ErrorCode::InvalidArgument, "empty entity");
        std::string id = mapping_id(m);
        if (!mappings_.emplace(id, m).second) return id;
        switch (m.relation) {
            case MappingRelation::Exact:
                exact_[m.subject].insert(m.object);
                exact_[m.object].insert(m.subject);
                break;
            case MappingRelation::Broader:
                broader_[m.subject].insert(m.object);
                narrower_[m.object].insert(m.subject);
                break;
            case MappingRelation::Narrower:
                narrower_[m.subject].insert(m.object);
                broader_[m.object].insert(m.subject);
                break;
        }
        return id;
    }

    const std::map<std::string, EntityMapping>& entity_mappings() const noexcept { return mappings_; }

    // Symmetric-transitive closure over exact mappings, plus one broader or
    // narrower step from any member when requested; the input is excluded.
    std::set<Iri> map_entity(const Iri& entity, RelationFilter filter = {}) const {
        std::set<Iri> closure{entity};
        std::deque<Iri> queue{entity};
        while (!queue.empty()) {
            Iri cur = queue.front();
            queue.pop_front();
            if (auto it = exact_.find(cur); it != exact_.end())
                for (const auto& n : it->second)
                    if (closure.insert(n).second) queue.push_back(n);
        }
        std::set<Iri> out = closure;
        for (const auto& e : closure) {
            if (filter.broader)
                if (auto it = broader_.find(e); it != broader_.end()) out.insert(it->second.begin(), it->second.end());
            if (filter.narrower)
                if (auto it = narrower_.find(e); it != narrower_.end()) out.insert(it->second.begin(), it->second.end());
        }
        out.erase(entity);
        return out;
    }

    // Vocabulary closure extended upward along broader mappings.
    bool satisfies(const Iri& entity, const Iri& cls, const Vocabulary& vocab) const {
        std::set<Iri> seen{entity};
        std::deque<Iri> queue{entity};
        while (!queue.empty()) {
            Iri cur = queue.front();
            queue.pop_front();
            for (const auto& a : vocab.lineage(cur)) {
                if (a == cls) return true;
                if (auto it = broader_.find(a); it != broader_.end())
                    for (const auto& b : it->second)
                        if (seen.insert(b).second) queue.push_back(b);
            }
        }
        return false;
    }

    ConstraintCheck constraint_check(const Vocabulary& vocab) const {
        return [this, &vocab](const Iri& e, const Iri& c) { return satisfies(e, c, vocab); };
    }

    // Direct crosswalk when registered, else source -> anchor -> target.
    std::vector<std::string> route(std::string_view source, std::string_view target,
                                   const SchemaRegistry& schemas) const {
        schemas.get(source);
        schemas.get(target);
        if (source == target) return {};
        if (auto direct = find_direct(source, target)) return {*direct};
        for (const auto& [id, schema] : schemas.all()) {
            if (!schema.is_anchor || id == source || id == target) continue;
            auto in = find_direct(source, id);
            auto out = find_direct(id, target);
            if (in && out) return {*in, *out};
        }
        fail(ErrorCode::NoRoute, "no crosswalk route from " + std::string(source) + " to " + std::string(target));
    }

private:
    std::optional<std::string> find_direct(std::string_view source, std::string_view target) const {
        for (const auto& [id, cw] : crosswalks_)
            if (!cw.is_graph_shape() && cw.source == source && cw.target == target) return id;
        return std::nullopt;
    }

    std::map<std::string, SchemaCrosswalk> crosswalks_;
    std::map<std::string, EntityMapping> mappings_;
    std::map<Iri, std::set<Iri>> exact_;
    std::map<Iri, std::set<Iri>> broader_;
    std::map<Iri, std::set<Iri>> narrower_;
};

// Re-keys bindings through a sequence of crosswalks.
inline Bindings compose_bindings(const Bindings& bindings, const std::vector<const SchemaCrosswalk*>& path) {
    Bindings cur = bindings;
    for (const auto* cw : path) {
        Bindings next;
        for (const auto& [role, value] : cur) next.emplace(cw->role_map.at(role), value);
        cur = std::move(next);
    }
    return cur;
}

// Re-expresses an L3 unit under another schema along route(). Entity
// bindings failing the target constraint are replaced by the first
// exact-mapped equivalent that satisfies it.
inline SemanticUnit translate(const SemanticUnit& unit, std::string_view target_schema, const SchemaRegistry& schemas,
                              const MappingRegistry& registry, const Vocabulary& vocab, GupriMinter& ids,
                              Metadata metadata) {
    const auto* st = unit.as<RosettaStatement>();
    if (!st) fail(ErrorCode::UnsupportedLevel, "translation needs an L3 unit");
    auto path_ids = registry.route(st->schema_id, target_schema, schemas);
    if (path_ids.empty()) return unit;
    std::vector<const SchemaCrosswalk*> path;
    for (const auto& id : path_ids) path.push_back(&registry.crosswalk(id));
    Bindings rekeyed = compose_bindings(st->bindings, path);

    const auto& target = schemas.get(target_schema);
    for (const auto& r : target.roles) {
        if (r.kind != RoleKind::Entity) continue;
        auto it = rekeyed.find(r.name);
        if (it == rekeyed.end() || !is_iri(it->second)) continue;
        const Iri e = std::get<Iri>(it->second);
        if (registry.satisfies(e, *r.constraint, vocab)) continue;
        for (const auto& alt : registry.map_entity(e)) {
            if (registry.satisfies(alt, *r.constraint, vocab)) {
                it->second = alt;
                break;
            }
        }
    }
    metadata.source_ref = unit.metadata().source_ref;
    return instantiate(target, std::move(rekeyed), std::move(metadata), registry.constraint_check(vocab), ids,
                       payload("translation", unit.gupri().value));
}

}  // namespace semladder
