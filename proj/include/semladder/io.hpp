#pragma once
// Ingestion and serialization: sentence splitting into L1 units, file
// loading, N-Quads style export with content/meta graph separation, and
// CSV content/meta tables.

#include "semladder/core.hpp"
#include "semladder/store.hpp"
#include "semladder/vocabulary.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace semladder {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::NotFound, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << content;
}

// --- ingestion -----------------------------------------------------------------

using Span = std::pair<std::size_t, std::size_t>;
using SentenceSplitter = std::function<std::vector<Span>(std::string_view)>;

// Naive: a sentence ends at . ! or ? followed by whitespace. Abbreviations
// such as "e.g. " split too. Spans are trimmed byte ranges.
inline std::vector<Span> naive_sentence_spans(std::string_view doc) {
    std::vector<Span> out;
    auto push = [&](std::size_t a, std::size_t b) {
        while (a < b && text::is_space(doc[a])) ++a;
        while (b > a && text::is_space(doc[b - 1])) --b;
        if (a < b) out.emplace_back(a, b);
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
        char c = doc[i];
        if ((c == '.' || c == '!' || c == '?') && text::is_space(doc[i + 1])) {
            push(start, i + 1);
            start = i + 1;
        }
    }
    push(start, doc.size());
    return out;
}

inline std::vector<SemanticUnit> ingest_document(std::string_view doc, const std::string& source_ref, GupriMinter& ids,
                                                 const Metadata& metadata,
                                                 const SentenceSplitter& split = naive_sentence_spans) {
    std::vector<SemanticUnit> out;
    for (auto [a, b] : split(doc))
        out.push_back(new_text_snippet_unit(ids, std::string(doc.substr(a, b - a)), source_ref, a, b, metadata));
    return out;
}

inline Vocabulary load_vocabulary(const std::filesystem::path& path) { return parse_vocabulary_tsv(read_file(path)); }

// --- quads ---------------------------------------------------------------------

namespace detail {

inline std::string escape_literal(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string_view xsd_type(Datatype d) {
    switch (d) {
        case Datatype::Decimal: return "xsd:decimal";
        case Datatype::Text: return "xsd:string";
        case Datatype::Integer: return "xsd:integer";
        case Datatype::DateTime: return "xsd:dateTime";
    }
    return "xsd:string";
}

inline std::string quad_term(const Node& n) {
    if (is_iri(n)) return "<" + std::get<Iri>(n).value + ">";
    const auto& l = std::get<Literal>(n);
    return "\"" + escape_literal(l.lexical) + "\"^^<" + std::string(xsd_type(l.datatype)) + ">";
}

inline Literal text_lit(std::string s) { return Literal{std::move(s), Datatype::Text}; }
inline Literal int_lit(std::size_t n) { return Literal{std::to_string(n), Datatype::Integer}; }

}  // namespace detail

// Content-graph triples as exported: snippet text and annotations for L1/L2,
// statement triples from L3 up. Compounds have none.
inline GraphContent export_content_triples(const AnyUnit& unit) {
    const auto* su = std::get_if<SemanticUnit>(&unit);
    if (!su) return {};
    GraphContent out = su->triples();
    const Iri g = su->gupri().iri();
    if (const auto* text = su->snippet_text()) out.insert({g, Iri{ns::has_text_snippet}, detail::text_lit(*text)});
    if (const auto* e = su->as<EnrichedSnippet>()) {
        for (std::size_t i = 0; i < e->annotations.size(); ++i) {
            const auto& a = e->annotations[i];
            Iri node{g.value + "#a" + std::to_string(i)};
            out.insert({g, Iri{ns::has_annotation}, node});
            out.insert({node, Iri{ns::has_surface}, detail::text_lit(a.surface)});
            out.insert({node, Iri{ns::start_offset}, detail::int_lit(a.start)});
            out.insert({node, Iri{ns::end_offset}, detail::int_lit(a.end)});
            out.insert({node, Iri{ns::annotation_kind},
                        detail::text_lit(a.kind == AnnotationKind::Entity ? "entity" : "numeric")});
            if (a.entity) out.insert({node, Iri{ns::denotes}, *a.entity});
        }
    }
    return out;
}

// Meta-graph triples: class, level, metadata, provenance and outgoing links.
inline GraphContent export_meta_triples(const AnyUnit& unit, const std::vector<DerivationLink>& links) {
    GraphContent out;
    const Gupri& id = gupri_of(unit);
    const Iri g = id.iri();
    auto add = [&](const std::string& p, Node o) { out.insert({g, Iri{p}, std::move(o)}); };
    const Metadata* m = nullptr;
    if (const auto* su = std::get_if<SemanticUnit>(&unit)) {
        m = &su->metadata();
        add(ns::rdf_type, su->unit_class());
        add(ns::level, detail::text_lit(std::string(to_string(su->level()))));
        if (su->schema_ref()) add(ns::conforms_to, Iri{*su->schema_ref()});
        const TextSnippet* snip = su->as<TextSnippet>();
        if (const auto* e = su->as<EnrichedSnippet>()) snip = &e->snippet;
        if (snip && snip->source_ref) {
            add(ns::start_offset, detail::int_lit(snip->start));
            add(ns::end_offset, detail::int_lit(snip->end));
        }
        if (const auto* ig = su->as<InferredGraph>()) add(ns::inferred_with, Iri{ig->ruleset_id});
    } else {
        const auto& c = std::get<CompoundUnit>(unit);
        m = &c.metadata();
        add(ns::rdf_type, c.unit_class());
        add(ns::has_subject, c.subject());
        for (const auto& member : c.members()) add(ns::has_member, member.iri());
    }
    add(ns::created_at, Literal{m->created_at, Datatype::DateTime});
    add(ns::creator, detail::text_lit(m->creator));
    add(ns::logical_framework, detail::text_lit(m->logical_framework));
    if (m->source_ref) add(ns::source_reference, Iri{*m->source_ref});
    for (const auto& [k, v] : m->extra) add(ns::meta_prefix + k, detail::text_lit(v));
    for (const auto& l : links)
        if (l.from == id) add("sl:" + std::string(to_string(l.kind)), l.to.iri());
    return out;
}

// One `<s> <p> <o> <g> .` line per quad, sorted by (graph, s, p, o).
inline std::string export_quads(const Store& store, const std::vector<Gupri>& selection) {
    using Quad = std::tuple<std::string, std::string, std::string, std::string>;
    std::vector<Quad> quads;
    for (const auto& id : selection) {
        AnyUnit unit = store.get_unit(id);
        std::string content_graph = "<" + id.value + ">";
        std::string meta_graph = "<" + id.value + "/meta>";
        for (const auto& t : export_content_triples(unit))
            quads.emplace_back(content_graph, "<" + t.subject.value + ">", "<" + t.predicate.value + ">",
                               detail::quad_term(t.object));
        for (const auto& t : export_meta_triples(unit, store.links_of(id)))
            quads.emplace_back(meta_graph, "<" + t.subject.value + ">", "<" + t.predicate.value + ">",
                               detail::quad_term(t.object));
    }
    std::sort(quads.begin(), quads.end());
    quads.erase(std::unique(quads.begin(), quads.end()), quads.end());
    std::string out;
    for (const auto& [g, s, p, o] : quads) out += s + " " + p + " " + o + " " + g + " .\n";
    return out;
}

inline std::string export_quads(const Store& store) { return export_quads(store, store.find_units({})); }

// --- tables --------------------------------------------------------------------

inline std::string csv_field(std::string_view f) {
    if (f.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(f);
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// RFC-4180 record, CRLF terminated.
inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    return out + "\r\n";
}

struct Tables {
    std::string content;
    std::string meta;
};

inline Tables export_tables(const Store& store, std::string_view schema_id) {
    auto schemas = store.schemas();
    const auto& schema = schemas.get(schema_id);
    std::vector<std::string> header{"unit"};
    for (const auto& r : schema.roles) header.push_back(r.name);
    Tables t{csv_row(header), csv_row({"unit", "class", "created_at", "creator", "logical_framework"})};
    for (const auto& id : store.find_units({Level::L3, std::nullopt, std::nullopt, std::nullopt, std::nullopt})) {
        auto unit = std::get<SemanticUnit>(store.get_unit(id));
        if (unit.as<RosettaStatement>()->schema_id != schema.id) continue;
        auto rows = to_table_rows(unit, schema);
        t.content += csv_row(rows.content);
        t.meta += csv_row(rows.meta);
    }
    return t;
}

}  // namespace semladder
