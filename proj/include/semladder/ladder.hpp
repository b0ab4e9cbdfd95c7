#pragma once
// The four ladder transformations. Each is a pure function from an input
// unit to a unit one level up; linking results into a store is the
// pipeline's job.

#include "semladder/core.hpp"
#include "semladder/mappings.hpp"
#include "semladder/rosetta.hpp"
#include "semladder/rules.hpp"
#include "semladder/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace semladder {

// --- enrichment --------------------------------------------------------------

class Enricher {
public:
    virtual ~Enricher() = default;
    virtual std::string id() const = 0;
    // Sorted, non-overlapping annotations over `text`.
    virtual std::vector<Annotation> annotate(std::string_view text) const = 0;
};

// Case-insensitive, word-bounded, leftmost-longest matching over labels and
// synonyms, plus decimal numerals. A surface form shared by several entries
// goes to the smallest IRI.
class GazetteerEnricher final : public Enricher {
public:
    explicit GazetteerEnricher(const Vocabulary& vocab) {
        for (const auto& [iri, e] : vocab.entries()) {
            forms_.emplace(text::lower(e.label), iri);
            for (const auto& s : e.synonyms) forms_.emplace(text::lower(s), iri);
        }
    }

    std::string id() const override { return "gazetteer"; }

    std::vector<Annotation> annotate(std::string_view s) const override {
        std::vector<Annotation> out;
        std::string low = text::lower(s);
        std::size_t i = 0;
        while (i < s.size()) {
            if (i > 0 && text::is_word_char(s[i - 1])) {
                ++i;
                continue;
            }
            std::size_t best_len = 0;
            const Iri* best = nullptr;
            for (const auto& [form, iri] : forms_) {
                if (form.size() <= best_len || low.compare(i, form.size(), form) != 0) continue;
                if (!boundary_after(s, i + form.size())) continue;
                best_len = form.size();
                best = &iri;
            }
            std::size_t num_len = numeral_length(s, i);
            if (num_len > best_len) {
                out.push_back({i, i + num_len, std::string(s.substr(i, num_len)), AnnotationKind::Numeric, std::nullopt});
                i += num_len;
            } else if (best) {
                out.push_back({i, i + best_len, std::string(s.substr(i, best_len)), AnnotationKind::Entity, *best});
                i += best_len;
            } else {
                ++i;
            }
        }
        return out;
    }

private:
    static bool boundary_after(std::string_view s, std::size_t end) {
        return end >= s.size() || !text::is_word_char(s[end]);
    }

    // [0-9]+(\.[0-9]+)? ending at a word boundary; 0 when absent.
    static std::size_t numeral_length(std::string_view s, std::size_t i) {
        auto digit = [&](std::size_t k) { return k < s.size() && s[k] >= '0' && s[k] <= '9'; };
        std::size_t k = i;
        while (digit(k)) ++k;
        if (k == i) return 0;
        if (k < s.size() && s[k] == '.' && digit(k + 1)) {
            ++k;
            while (digit(k)) ++k;
        }
        return boundary_after(s, k) ? k - i : 0;
    }

    std::map<std::string, Iri> forms_;  // first insert wins: entries iterate by IRI
};

inline std::string annotation_signature(const std::vector<Annotation>& anns) {
    std::string out;
    for (const auto& a : anns)
        out += std::to_string(a.start) + ":" + std::to_string(a.end) + "=" + (a.entity ? a.entity->value : "#") + ";";
    return out;
}

inline SemanticUnit enrich(const SemanticUnit& l1, const Enricher& enricher, GupriMinter& ids, Metadata metadata) {
    const auto* snippet = l1.as<TextSnippet>();
    if (!snippet) fail(ErrorCode::UnsupportedLevel, "enrichment needs an L1 unit, got " + std::string(to_string(l1.level())));
    EnrichedSnippet content{*snippet, enricher.annotate(snippet->text)};
    metadata.logical_framework = std::string(default_logical_framework(Level::L2));
    metadata.source_ref = l1.metadata().source_ref;
    Gupri id = ids.mint(payload("L2", l1.gupri().value, enricher.id(), annotation_signature(content.annotations)));
    return SemanticUnit::create(std::move(id), Iri{ns::enriched_snippet_unit}, std::move(content), std::nullopt,
                                std::move(metadata));
}

// --- structuring ---------------------------------------------------------------

enum class StructuringOutcome { Matched, LiteralMismatch, ConstraintFailure, AnnotationGap };

inline std::string_view to_string(StructuringOutcome o) noexcept {
    switch (o) {
        case StructuringOutcome::Matched: return "matched";
        case StructuringOutcome::LiteralMismatch: return "literal-mismatch";
        case StructuringOutcome::ConstraintFailure: return "constraint-failure";
        case StructuringOutcome::AnnotationGap: return "annotation-gap";
    }
    return "matched";
}

struct StructuringEntry {
    std::string schema_id;
    StructuringOutcome outcome = StructuringOutcome::Matched;
    std::size_t position = 0;  // byte offset into the snippet for mismatches and gaps
    std::string role;          // for constraint failures
    bool operator==(const StructuringEntry&) const = default;
};

struct StructuringResult {
    std::vector<SemanticUnit> units;  // at most one: the winning schema
    std::vector<StructuringEntry> report;
};

namespace detail {

struct Token {
    std::size_t start;
    std::size_t end;
    std::string norm;  // lowercased, trailing punctuation stripped
};

inline std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && text::is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !text::is_space(s[i])) ++i;
        if (i > start) out.push_back({start, i, text::lower(text::strip_trailing_punct(s.substr(start, i - start)))});
    }
    return out;
}

// Aligns one pattern against the token stream; fills bindings on success.
inline StructuringEntry align(const RosettaSchema& schema, const EnrichedSnippet& e, const std::vector<Token>& tokens,
                              const ConstraintCheck& satisfies, Bindings& bindings) {
    const std::string& s = e.snippet.text;
    StructuringEntry entry{schema.id, StructuringOutcome::Matched, 0, {}};
    auto failed = [&](StructuringOutcome o, std::size_t pos, std::string role = {}) {
        entry.outcome = o;
        entry.position = pos;
        entry.role = std::move(role);
        return entry;
    };
    auto pos_of = [&](std::size_t t) { return t < tokens.size() ? tokens[t].start : s.size(); };
    std::size_t t = 0;
    for (const auto& seg : schema.pattern.segments) {
        if (seg.kind == Segment::Kind::Literal) {
            for (const auto& w : text::split_ws(seg.text)) {
                if (t >= tokens.size() || tokens[t].norm != text::lower(w))
                    return failed(StructuringOutcome::LiteralMismatch, pos_of(t));
                ++t;
            }
            continue;
        }
        const RoleSpec& role = *schema.role(seg.text);
        if (t >= tokens.size()) return failed(StructuringOutcome::AnnotationGap, s.size());
        if (role.kind == RoleKind::Text) {
            const auto& tok = tokens[t];
            auto word = text::strip_trailing_punct(std::string_view(s).substr(tok.start, tok.end - tok.start));
            if (word.empty()) return failed(StructuringOutcome::AnnotationGap, tok.start);
            bindings.emplace(role.name, Literal{word, Datatype::Text});
            ++t;
            continue;
        }
        auto ann = std::find_if(e.annotations.begin(), e.annotations.end(),
                                [&](const Annotation& a) { return a.start == tokens[t].start; });
        if (ann == e.annotations.end()) return failed(StructuringOutcome::AnnotationGap, tokens[t].start);
        bool kind_ok = role.kind == RoleKind::Numeric ? ann->kind == AnnotationKind::Numeric
                                                      : ann->kind == AnnotationKind::Entity;
        if (!kind_ok || (role.kind == RoleKind::Entity && !satisfies(*ann->entity, *role.constraint)))
            return failed(StructuringOutcome::ConstraintFailure, ann->start, role.name);
        // The annotation may stop inside its last token only before trailing punctuation.
        std::size_t last = t;
        while (last + 1 < tokens.size() && tokens[last + 1].start < ann->end) ++last;
        auto tail = std::string_view(s).substr(ann->end, tokens[last].end - std::min(ann->end, tokens[last].end));
        if (!text::strip_trailing_punct(tail).empty()) return failed(StructuringOutcome::AnnotationGap, ann->start);
        if (role.kind == RoleKind::Numeric) bindings.emplace(role.name, Literal{ann->surface, Datatype::Decimal});
        else bindings.emplace(role.name, *ann->entity);
        t = last + 1;
    }
    if (t < tokens.size()) return failed(StructuringOutcome::LiteralMismatch, tokens[t].start);
    return entry;
}

}  // namespace detail

// Attempts every schema; the match with the most literal characters wins,
// ties going to the smallest schema id. No match is not an error.
inline StructuringResult structure(const SemanticUnit& l2, const SchemaRegistry& schemas,
                                   const ConstraintCheck& satisfies, GupriMinter& ids, Metadata metadata) {
    const auto* e = l2.as<EnrichedSnippet>();
    if (!e) fail(ErrorCode::UnsupportedLevel, "structuring needs an L2 unit, got " + std::string(to_string(l2.level())));
    auto tokens = detail::tokenize(e->snippet.text);
    StructuringResult result;
    const RosettaSchema* winner = nullptr;
    Bindings winning;
    for (const auto& [id, schema] : schemas.all()) {
        Bindings b;
        auto entry = detail::align(schema, *e, tokens, satisfies, b);
        if (entry.outcome == StructuringOutcome::Matched &&
            (!winner || schema.pattern.literal_chars() > winner->pattern.literal_chars())) {
            winner = &schema;
            winning = std::move(b);
        }
        result.report.push_back(std::move(entry));
    }
    if (winner) {
        metadata.source_ref = l2.metadata().source_ref;
        result.units.push_back(instantiate(*winner, std::move(winning), std::move(metadata), satisfies, ids,
                                           payload("structuring", l2.gupri().value)));
    }
    return result;
}

inline StructuringResult structure(const SemanticUnit& l2, const SchemaRegistry& schemas, const Vocabulary& vocab,
                                   GupriMinter& ids, Metadata metadata) {
    return structure(l2, schemas, vocabulary_check(vocab), ids, std::move(metadata));
}

// --- modelling -------------------------------------------------------------------

// Expands the crosswalk templates. Slots take the bound values; with a
// target prefix, entity values are first rewritten to an exact-mapped
// equivalent under that prefix. @new(name) becomes <L4 GUPRI>#name.
inline SemanticUnit model(const SemanticUnit& l3, const SchemaCrosswalk& cw, const MappingRegistry& mappings,
                          GupriMinter& ids, Metadata metadata) {
    const auto* st = l3.as<RosettaStatement>();
    if (!st) fail(ErrorCode::UnsupportedLevel, "modelling needs an L3 unit, got " + std::string(to_string(l3.level())));
    if (cw.source != st->schema_id)
        fail(ErrorCode::WrongSchema, "crosswalk " + cw.id + " reads " + cw.source + ", unit is " + st->schema_id);
    if (!cw.is_graph_shape()) fail(ErrorCode::InvalidCrosswalk, "crosswalk " + cw.id + " has no triple templates");

    Gupri id = ids.mint(payload("L4", l3.gupri().value, cw.id));
    auto rewrite = [&](const Node& n) -> Node {
        if (!cw.target_prefix || !is_iri(n)) return n;
        const Iri& e = std::get<Iri>(n);
        if (text::starts_with(e.value, *cw.target_prefix)) return n;
        for (const auto& alt : mappings.map_entity(e))
            if (text::starts_with(alt.value, *cw.target_prefix)) return alt;
        return n;
    };
    auto resolve = [&](const TemplateTerm& term) -> Node {
        if (const auto* slot = std::get_if<RoleSlot>(&term)) {
            auto role = cw.source_role_for(slot->name);
            if (!role) fail(ErrorCode::InvalidCrosswalk, cw.id + ": ${" + slot->name + "} names no declared role");
            auto it = st->bindings.find(*role);
            if (it == st->bindings.end()) fail(ErrorCode::InvalidCrosswalk, cw.id + ": role " + *role + " is unbound");
            return rewrite(it->second);
        }
        if (const auto* f = std::get_if<FreshNode>(&term)) return Iri{id.value + "#" + f->name};
        if (const auto* i = std::get_if<Iri>(&term)) return *i;
        return std::get<Literal>(term);
    };
    GraphContent triples;
    for (const auto& t : cw.templates) {
        Node s = resolve(t.subject);
        Node p = resolve(t.predicate);
        Node o = resolve(t.object);
        if (!is_iri(s) || !is_iri(p))
            fail(ErrorCode::InvalidCrosswalk, cw.id + ": a literal lands in subject or predicate position");
        triples.insert(Triple{std::get<Iri>(s), std::get<Iri>(p), std::move(o)});
    }
    metadata.logical_framework = std::string(default_logical_framework(Level::L4));
    metadata.source_ref = l3.metadata().source_ref;
    return SemanticUnit::create(std::move(id), Iri{ns::logic_graph_unit}, LogicGraph{std::move(triples)}, cw.target,
                                std::move(metadata));
}

// --- lifting ---------------------------------------------------------------------

// Saturates the union of the inputs; the result keeps only what is new.
inline SemanticUnit lift(const std::vector<SemanticUnit>& inputs, const Ruleset& ruleset, GupriMinter& ids,
                         Metadata metadata) {
    if (inputs.empty()) fail(ErrorCode::InvalidArgument, "lifting needs at least one input unit");
    GraphContent base;
    std::vector<std::string> sources;
    for (const auto& u : inputs) {
        if (u.level() < Level::L4)
            fail(ErrorCode::UnsupportedLevel, "lifting needs L4 or L5 inputs, got " + std::string(to_string(u.level())));
        auto t = u.triples();
        base.insert(t.begin(), t.end());
        sources.push_back(u.gupri().value);
    }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    GraphContent inferred = forward_chain(base, ruleset.rules);
    metadata.logical_framework = std::string(default_logical_framework(Level::L5));
    if (!metadata.source_ref) metadata.source_ref = inputs.front().metadata().source_ref;
    Gupri id = ids.mint(payload("L5", ruleset.id, text::join(sources, " ")));
    return SemanticUnit::create(std::move(id), Iri{ns::inferred_graph_unit}, InferredGraph{std::move(inferred), ruleset.id},
                                std::nullopt, std::move(metadata));
}

}  // namespace semladder
