#pragma once
// Semantic-unit data model: identifiers, ladder levels, content variants,
// statement units and compound units.
//
// A statement unit is the tuple (identity, class, content, refs, schema,
// metadata). Content and metadata never share keys; refs are always derived
// from content so they cannot drift.

#include "semladder/digest.hpp"
#include "semladder/error.hpp"
#include "semladder/text.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace semladder {

// Entity identifier (IRI or CURIE). Compared byte-wise.
struct Iri {
    std::string value;
    auto operator<=>(const Iri&) const = default;
};

// Globally unique persistent resolvable identifier of a unit.
struct Gupri {
    std::string value;
    auto operator<=>(const Gupri&) const = default;
    Iri iri() const { return Iri{value}; }
};

enum class Datatype { Decimal, Text, Integer, DateTime };

constexpr std::string_view to_string(Datatype d) noexcept {
    switch (d) {
        case Datatype::Decimal: return "decimal";
        case Datatype::Text: return "text";
        case Datatype::Integer: return "integer";
        case Datatype::DateTime: return "datetime";
    }
    return "text";
}

inline Datatype parse_datatype(std::string_view s) {
    if (s == "decimal") return Datatype::Decimal;
    if (s == "text") return Datatype::Text;
    if (s == "integer") return Datatype::Integer;
    if (s == "datetime") return Datatype::DateTime;
    fail(ErrorCode::InvalidLiteral, "unknown datatype '" + std::string(s) + "'");
}

struct Literal {
    std::string lexical;
    Datatype datatype = Datatype::Text;
    auto operator<=>(const Literal&) const = default;
};

using Node = std::variant<Iri, Literal>;

inline bool is_iri(const Node& n) noexcept { return std::holds_alternative<Iri>(n); }

inline const std::string& node_text(const Node& n) {
    return is_iri(n) ? std::get<Iri>(n).value : std::get<Literal>(n).lexical;
}

inline bool is_decimal(std::string_view s) {
    static const std::regex pattern(R"([+-]?(\d+(\.\d*)?|\.\d+))");
    return std::regex_match(s.begin(), s.end(), pattern);
}

struct Triple {
    Iri subject;
    Iri predicate;
    Node object;
    auto operator<=>(const Triple&) const = default;
};

using GraphContent = std::set<Triple>;

enum class Level { L1 = 1, L2, L3, L4, L5 };

constexpr std::string_view to_string(Level l) noexcept {
    switch (l) {
        case Level::L1: return "L1";
        case Level::L2: return "L2";
        case Level::L3: return "L3";
        case Level::L4: return "L4";
        case Level::L5: return "L5";
    }
    return "L1";
}

inline Level parse_level(std::string_view s) {
    if (s.size() == 2 && (s[0] == 'L' || s[0] == 'l') && s[1] >= '1' && s[1] <= '5')
        return static_cast<Level>(s[1] - '0');
    fail(ErrorCode::InvalidArgument, "unknown level '" + std::string(s) + "'");
}

// Reserved identifiers used by the library's own triples.
namespace ns {
inline const std::string rdf_type = "rdf:type";
inline const std::string has_schema = "sl:hasSchema";
inline const std::string has_text_snippet = "sl:hasTextSnippet";
inline const std::string has_annotation = "sl:hasAnnotation";
inline const std::string has_surface = "sl:hasSurface";
inline const std::string denotes = "sl:denotes";
inline const std::string annotation_kind = "sl:annotationKind";
inline const std::string start_offset = "sl:startOffset";
inline const std::string end_offset = "sl:endOffset";
inline const std::string level = "sl:level";
inline const std::string created_at = "sl:createdAt";
inline const std::string creator = "sl:creator";
inline const std::string logical_framework = "sl:logicalFramework";
inline const std::string conforms_to = "sl:conformsTo";
inline const std::string inferred_with = "sl:inferredWithRuleset";
inline const std::string has_subject = "sl:hasSubject";
inline const std::string has_member = "sl:hasMember";
inline const std::string source_reference = "sl:hasAssociatedSourceReference";
inline const std::string meta_prefix = "sl:meta:";
inline const std::string role_prefix = "sl:hasRole:";

inline const std::string text_snippet_unit = "sl:TextSnippetStatementUnit";
inline const std::string enriched_snippet_unit = "sl:EnrichedSnippetStatementUnit";
inline const std::string rosetta_statement_unit = "sl:RosettaStatementUnit";
inline const std::string logic_graph_unit = "sl:LogicGraphStatementUnit";
inline const std::string inferred_graph_unit = "sl:InferredGraphStatementUnit";

// Role names are uppercase words separated by single spaces, so mapping
// spaces to underscores is invertible.
inline Iri role_predicate(std::string_view role) {
    std::string local(role);
    for (char& c : local)
        if (c == ' ') c = '_';
    return Iri{role_prefix + local};
}

inline std::optional<std::string> role_from_predicate(const Iri& p) {
    if (!text::starts_with(p.value, role_prefix)) return std::nullopt;
    std::string local = p.value.substr(role_prefix.size());
    for (char& c : local)
        if (c == '_') c = ' ';
    return local;
}
}  // namespace ns

enum class AnnotationKind { Entity, Numeric };

struct Annotation {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string surface;
    AnnotationKind kind = AnnotationKind::Entity;
    std::optional<Iri> entity;  // set iff kind == Entity
    bool operator==(const Annotation&) const = default;
};

using Bindings = std::map<std::string, Node>;  // role name -> bound value

struct TextSnippet {
    std::string text;
    std::optional<std::string> source_ref;
    std::size_t start = 0;
    std::size_t end = 0;
    bool operator==(const TextSnippet&) const = default;
};

struct EnrichedSnippet {
    TextSnippet snippet;
    std::vector<Annotation> annotations;
    bool operator==(const EnrichedSnippet&) const = default;
};

struct RosettaStatement {
    std::string schema_id;
    Bindings bindings;
    bool operator==(const RosettaStatement&) const = default;
};

struct LogicGraph {
    GraphContent triples;
    bool operator==(const LogicGraph&) const = default;
};

struct InferredGraph {
    GraphContent triples;
    std::string ruleset_id;
    bool operator==(const InferredGraph&) const = default;
};

using ContentVariant = std::variant<TextSnippet, EnrichedSnippet, RosettaStatement, LogicGraph, InferredGraph>;

inline Level level_of(const ContentVariant& c) noexcept { return static_cast<Level>(c.index() + 1); }

inline std::string_view default_logical_framework(Level l) noexcept {
    switch (l) {
        case Level::L1:
        case Level::L2: return "none";
        case Level::L3: return "rdf-reification";
        case Level::L4: return "owl";
        case Level::L5: return "horn-rules";
    }
    return "none";
}

inline std::string_view default_unit_class(Level l) noexcept {
    switch (l) {
        case Level::L1: return ns::text_snippet_unit;
        case Level::L2: return ns::enriched_snippet_unit;
        case Level::L3: return ns::rosetta_statement_unit;
        case Level::L4: return ns::logic_graph_unit;
        case Level::L5: return ns::inferred_graph_unit;
    }
    return ns::text_snippet_unit;
}

struct Metadata {
    std::string created_at;
    std::string creator;
    std::string logical_framework;
    std::optional<std::string> source_ref;
    std::map<std::string, std::string> extra;
    bool operator==(const Metadata&) const = default;
};

// Content triples with semantic weight: reified statement triples at L3, the
// graph itself at L4/L5, nothing for snippets.
inline GraphContent statement_triples(const Gupri& gupri, const ContentVariant& content) {
    GraphContent out;
    if (const auto* st = std::get_if<RosettaStatement>(&content)) {
        Iri stmt{gupri.value + "#stmt"};
        out.insert(Triple{stmt, Iri{ns::has_schema}, Iri{st->schema_id}});
        for (const auto& [role, value] : st->bindings) out.insert(Triple{stmt, ns::role_predicate(role), value});
    } else if (const auto* g = std::get_if<LogicGraph>(&content)) {
        out = g->triples;
    } else if (const auto* ig = std::get_if<InferredGraph>(&content)) {
        out = ig->triples;
    }
    return out;
}

// Every entity identifier carried by the content; literals excluded.
inline std::set<Iri> collect_refs(const ContentVariant& content) {
    std::set<Iri> refs;
    auto add_graph = [&](const GraphContent& g) {
        for (const auto& t : g) {
            refs.insert(t.subject);
            refs.insert(t.predicate);
            if (is_iri(t.object)) refs.insert(std::get<Iri>(t.object));
        }
    };
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, EnrichedSnippet>) {
                for (const auto& a : c.annotations)
                    if (a.entity) refs.insert(*a.entity);
            } else if constexpr (std::is_same_v<T, RosettaStatement>) {
                refs.insert(Iri{c.schema_id});
                for (const auto& [role, value] : c.bindings)
                    if (is_iri(value)) refs.insert(std::get<Iri>(value));
            } else if constexpr (std::is_same_v<T, LogicGraph> || std::is_same_v<T, InferredGraph>) {
                add_graph(c.triples);
            }
        },
        content);
    return refs;
}

namespace detail {

inline void check_snippet(const TextSnippet& s) {
    if (s.text.empty()) fail(ErrorCode::InvalidArgument, "snippet text is empty");
    if (s.source_ref) {
        if (s.start >= s.end || s.end - s.start != s.text.size())
            fail(ErrorCode::InvalidOffsets, "offsets [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                                                ") do not span " + std::to_string(s.text.size()) + " bytes");
    }
}

inline void check_annotations(const EnrichedSnippet& e) {
    std::size_t cursor = 0;
    for (const auto& a : e.annotations) {
        if (a.start >= a.end || a.end > e.snippet.text.size())
            fail(ErrorCode::InvalidArgument, "annotation span out of range");
        if (a.start < cursor) fail(ErrorCode::InvalidArgument, "annotations overlap or are unsorted");
        if (e.snippet.text.compare(a.start, a.end - a.start, a.surface) != 0)
            fail(ErrorCode::InvalidArgument, "annotation surface '" + a.surface + "' differs from covered text");
        if ((a.kind == AnnotationKind::Entity) != a.entity.has_value())
            fail(ErrorCode::InvalidArgument, "entity annotations carry an entity, numeric ones do not");
        cursor = a.end;
    }
}

}  // namespace detail

class SemanticUnit {
public:
    // Validates every invariant and derives refs from the content.
    static SemanticUnit create(Gupri gupri, Iri unit_class, ContentVariant content,
                               std::optional<std::string> schema_ref, Metadata metadata) {
        if (gupri.value.empty()) fail(ErrorCode::InvalidArgument, "empty GUPRI");
        if (unit_class.value.empty()) fail(ErrorCode::InvalidArgument, "empty unit class");
        std::visit(
            [](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, TextSnippet>) {
                    detail::check_snippet(c);
                } else if constexpr (std::is_same_v<T, EnrichedSnippet>) {
                    detail::check_snippet(c.snippet);
                    detail::check_annotations(c);
                } else if constexpr (std::is_same_v<T, RosettaStatement>) {
                    if (c.schema_id.empty()) fail(ErrorCode::InvalidArgument, "statement without schema");
                    if (c.bindings.empty()) fail(ErrorCode::BindingArity, "statement without bindings");
                } else if constexpr (std::is_same_v<T, InferredGraph>) {
                    if (c.ruleset_id.empty()) fail(ErrorCode::InvalidArgument, "inferred graph without ruleset");
                }
            },
            content);

        Level level = level_of(content);
        bool untyped = level <= Level::L2;
        if ((metadata.logical_framework == "none") != untyped)
            fail(ErrorCode::InvalidArgument, "logical_framework must be 'none' exactly for L1/L2 units");

        GraphContent triples = statement_triples(gupri, content);
        std::set<std::string> predicates;
        for (const auto& t : triples) predicates.insert(t.predicate.value);
        for (const auto& [key, value] : metadata.extra) {
            if (key.empty() || key.find_first_of(" \t\n") != std::string::npos)
                fail(ErrorCode::InvalidArgument, "metadata key '" + key + "' is not a token");
            if (predicates.count(key) || predicates.count(ns::meta_prefix + key))
                fail(ErrorCode::InvalidArgument, "metadata key '" + key + "' collides with content");
        }

        SemanticUnit u;
        u.refs_ = collect_refs(content);
        u.gupri_ = std::move(gupri);
        u.unit_class_ = std::move(unit_class);
        u.content_ = std::move(content);
        u.schema_ref_ = std::move(schema_ref);
        u.metadata_ = std::move(metadata);
        return u;
    }

    const Gupri& gupri() const noexcept { return gupri_; }
    const Iri& unit_class() const noexcept { return unit_class_; }
    const ContentVariant& content() const noexcept { return content_; }
    const std::set<Iri>& refs() const noexcept { return refs_; }
    const std::optional<std::string>& schema_ref() const noexcept { return schema_ref_; }
    const Metadata& metadata() const noexcept { return metadata_; }
    Level level() const noexcept { return level_of(content_); }

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&content_);
    }

    // Snippet text for L1/L2 units.
    const std::string* snippet_text() const noexcept {
        if (const auto* s = as<TextSnippet>()) return &s->text;
        if (const auto* e = as<EnrichedSnippet>()) return &e->snippet.text;
        return nullptr;
    }

    GraphContent triples() const { return statement_triples(gupri_, content_); }

    bool operator==(const SemanticUnit&) const = default;

private:
    SemanticUnit() = default;

    Gupri gupri_;
    Iri unit_class_;
    ContentVariant content_;
    std::set<Iri> refs_;
    std::optional<std::string> schema_ref_;
    Metadata metadata_;
};

// Aggregates member units by reference; owns no content.
class CompoundUnit {
public:
    static CompoundUnit create(Gupri gupri, Iri unit_class, Iri subject, std::vector<Gupri> members,
                               Metadata metadata) {
        if (gupri.value.empty()) fail(ErrorCode::InvalidArgument, "empty GUPRI");
        if (members.empty()) fail(ErrorCode::InvalidArgument, "compound unit needs at least one member");
        std::set<Gupri> seen;
        for (const auto& m : members) {
            if (m == gupri) fail(ErrorCode::Cycle, "compound " + gupri.value + " lists itself");
            if (!seen.insert(m).second) fail(ErrorCode::InvalidArgument, "duplicate member " + m.value);
        }
        CompoundUnit c;
        c.gupri_ = std::move(gupri);
        c.unit_class_ = std::move(unit_class);
        c.subject_ = std::move(subject);
        c.members_ = std::move(members);
        c.metadata_ = std::move(metadata);
        return c;
    }

    const Gupri& gupri() const noexcept { return gupri_; }
    const Iri& unit_class() const noexcept { return unit_class_; }
    const Iri& subject() const noexcept { return subject_; }
    const std::vector<Gupri>& members() const noexcept { return members_; }
    const Metadata& metadata() const noexcept { return metadata_; }

    bool operator==(const CompoundUnit&) const = default;

private:
    CompoundUnit() = default;

    Gupri gupri_;
    Iri unit_class_;
    Iri subject_;
    std::vector<Gupri> members_;
    Metadata metadata_;
};

using AnyUnit = std::variant<SemanticUnit, CompoundUnit>;

inline const Gupri& gupri_of(const AnyUnit& u) {
    return std::visit([](const auto& x) -> const Gupri& { return x.gupri(); }, u);
}

inline Level unit_level(const AnyUnit& u) {
    if (const auto* s = std::get_if<SemanticUnit>(&u)) return s->level();
    fail(ErrorCode::InvalidArgument, "compound units carry no ladder level");
}

inline Level unit_level(const SemanticUnit& u) noexcept { return u.level(); }

// Union of member statement triples. Nested compounds contribute their own
// derived content; `lookup` returns the stored unit or nullopt.
template <class Lookup>
GraphContent derived_content(const CompoundUnit& compound, Lookup&& lookup) {
    GraphContent out;
    std::set<Gupri> visiting{compound.gupri()};
    std::function<void(const CompoundUnit&)> walk = [&](const CompoundUnit& c) {
        for (const auto& m : c.members()) {
            std::optional<AnyUnit> member = lookup(m);
            if (!member) fail(ErrorCode::NotFound, "member " + m.value + " is not stored");
            if (const auto* su = std::get_if<SemanticUnit>(&*member)) {
                auto t = su->triples();
                out.insert(t.begin(), t.end());
            } else if (visiting.insert(m).second) {
                walk(std::get<CompoundUnit>(*member));
            } else {
                fail(ErrorCode::Cycle, "membership cycle through " + m.value);
            }
        }
    };
    walk(compound);
    return out;
}

// ---------------------------------------------------------------------------
// Identifier minting

enum class MintMode { Deterministic, Random };

namespace detail {

inline void check_base(std::string_view base) {
    if (base.empty()) fail(ErrorCode::InvalidArgument, "empty GUPRI base");
    static const std::regex scheme(R"([A-Za-z][A-Za-z0-9+.\-]*:[^\s]*/)");
    if (!std::regex_match(base.begin(), base.end(), scheme))
        fail(ErrorCode::InvalidArgument, "GUPRI base '" + std::string(base) + "' is not an absolute prefix ending in '/'");
}

inline std::string uuid_v4(std::uint64_t hi, std::uint64_t lo) {
    hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;
    lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;
    std::string h = to_hex(hi);
    std::string l = to_hex(lo);
    return h.substr(0, 8) + "-" + h.substr(8, 4) + "-" + h.substr(12, 4) + "-" + l.substr(0, 4) + "-" + l.substr(4);
}

}  // namespace detail

// Joins payload parts with a unit separator so ("ab","c") != ("a","bc").
template <class... Parts>
std::string payload(const Parts&... parts) {
    std::string out;
    ((out += std::string_view(parts), out += '\x1f'), ...);
    return out;
}

inline Gupri mint_gupri(std::string_view base, MintMode mode, std::string_view bytes) {
    detail::check_base(base);
    if (mode == MintMode::Deterministic) return Gupri{std::string(base) + digest_hex(bytes)};
    thread_local std::mt19937_64 rng{std::random_device{}()};
    auto hi = rng();
    auto lo = rng();
    return Gupri{std::string(base) + detail::uuid_v4(hi, lo)};
}

class GupriMinter {
public:
    explicit GupriMinter(std::string base, MintMode mode = MintMode::Deterministic,
                         std::optional<std::uint64_t> seed = std::nullopt)
        : base_(std::move(base)), mode_(mode), rng_(seed ? *seed : std::random_device{}()) {
        detail::check_base(base_);
    }

    Gupri mint(std::string_view bytes) {
        if (mode_ == MintMode::Deterministic) return mint_gupri(base_, mode_, bytes);
        auto hi = rng_();
        auto lo = rng_();
        return Gupri{base_ + detail::uuid_v4(hi, lo)};
    }

    const std::string& base() const noexcept { return base_; }
    MintMode mode() const noexcept { return mode_; }

private:
    std::string base_;
    MintMode mode_;
    std::mt19937_64 rng_;
};

// Creator and timestamp applied to every unit a transformation produces.
struct Stamp {
    std::string creator;
    std::string created_at;
};

inline Metadata make_metadata(const Stamp& stamp, Level level, std::optional<std::string> source_ref = std::nullopt) {
    return Metadata{stamp.created_at, stamp.creator, std::string(default_logical_framework(level)),
                    std::move(source_ref), {}};
}

inline SemanticUnit new_text_snippet_unit(GupriMinter& ids, std::string text, std::optional<std::string> source_ref,
                                          std::size_t start, std::size_t end, Metadata metadata) {
    if (text.empty()) fail(ErrorCode::InvalidArgument, "snippet text is empty");
    if (!source_ref) {
        start = 0;
        end = text.size();
    }
    TextSnippet snippet{text, source_ref, start, end};
    detail::check_snippet(snippet);
    metadata.logical_framework = "none";
    metadata.source_ref = source_ref;
    Gupri id = ids.mint(payload("L1", text, source_ref.value_or(""), std::to_string(start), std::to_string(end)));
    return SemanticUnit::create(std::move(id), Iri{ns::text_snippet_unit}, std::move(snippet), std::nullopt,
                                std::move(metadata));
}

inline CompoundUnit new_compound_unit(GupriMinter& ids, Iri unit_class, Iri subject, std::vector<Gupri> members,
                                      Metadata metadata) {
    if (members.empty()) fail(ErrorCode::InvalidArgument, "compound unit needs at least one member");
    std::string bytes = payload("compound", unit_class.value, subject.value);
    for (const auto& m : members) bytes += payload(m.value);
    Gupri id = ids.mint(bytes);
    return CompoundUnit::create(std::move(id), std::move(unit_class), std::move(subject), std::move(members),
                                std::move(metadata));
}

}  // namespace semladder
