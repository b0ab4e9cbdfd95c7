#pragma once
// Seeded random inputs for property tests.

#include "semladder.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace semladder;
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::string word(Rng& rng) {
    static const char* words[] = {"alpha", "beta", "gamma", "delta", "sample", "mass", "has", "of", "a",
                                  "river", "stone", "Grams", "x", "UTF\xc3\xa9", "comma,word", "quote\"d"};
    return words[pick(rng, 0, std::size(words) - 1)];
}

inline std::string sentence(Rng& rng) {
    std::string s = word(rng);
    for (std::size_t i = 0, n = pick(rng, 0, 6); i < n; ++i) s += " " + word(rng);
    return s;
}

inline Iri entity(Rng& rng, std::size_t pool = 8) { return Iri{"ex:e" + std::to_string(pick(rng, 0, pool - 1))}; }
inline Iri predicate(Rng& rng, std::size_t pool = 3) { return Iri{"ex:p" + std::to_string(pick(rng, 0, pool - 1))}; }

inline std::string decimal(Rng& rng) {
    return std::to_string(pick(rng, 0, 999)) + (pick(rng, 0, 1) ? "." + std::to_string(pick(rng, 0, 99)) : "");
}

inline Node node(Rng& rng, std::size_t pool = 8) {
    if (pick(rng, 0, 3) == 0) return Literal{decimal(rng), Datatype::Decimal};
    return entity(rng, pool);
}

inline GraphContent graph(Rng& rng, std::size_t max_triples, std::size_t pool = 8) {
    GraphContent g;
    for (std::size_t i = 0, n = pick(rng, 0, max_triples); i < n; ++i)
        g.insert(Triple{entity(rng, pool), predicate(rng), node(rng, pool)});
    return g;
}

inline Metadata metadata(Rng& rng, Level level) {
    Metadata m{"2024-0" + std::to_string(pick(rng, 1, 9)) + "-01T00:00:00Z", "tester",
               std::string(default_logical_framework(level)), std::nullopt, {}};
    if (pick(rng, 0, 1)) m.source_ref = "doc:" + std::to_string(pick(rng, 0, 3));
    if (pick(rng, 0, 2) == 0) m.extra["note"] = sentence(rng);
    return m;
}

// Annotations over words of `text` at word starts, non-overlapping.
inline std::vector<Annotation> annotations(Rng& rng, const std::string& text) {
    std::vector<Annotation> out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t end = text.find(' ', i);
        if (end == std::string::npos) end = text.size();
        if (end > i && pick(rng, 0, 2) == 0) {
            bool numeric = pick(rng, 0, 3) == 0;
            out.push_back({i, end, text.substr(i, end - i), numeric ? AnnotationKind::Numeric : AnnotationKind::Entity,
                           numeric ? std::nullopt : std::optional<Iri>(entity(rng))});
        }
        i = end + 1;
    }
    return out;
}

// A valid unit of a random level with a distinct GUPRI per `serial`.
inline SemanticUnit unit(Rng& rng, std::size_t serial) {
    Gupri id{"https://example.org/unit/r" + std::to_string(serial)};
    auto level = static_cast<Level>(pick(rng, 1, 5));
    Metadata m = metadata(rng, level);
    std::string text = sentence(rng);
    TextSnippet snip{text, m.source_ref, 0, text.size()};
    if (snip.source_ref) {
        snip.start = pick(rng, 0, 50);
        snip.end = snip.start + text.size();
    }
    switch (level) {
        case Level::L1:
            return SemanticUnit::create(id, Iri{ns::text_snippet_unit}, snip, std::nullopt, m);
        case Level::L2:
            return SemanticUnit::create(id, Iri{ns::enriched_snippet_unit}, EnrichedSnippet{snip, annotations(rng, text)},
                                        std::nullopt, m);
        case Level::L3: {
            Bindings b;
            for (std::size_t i = 0, n = pick(rng, 1, 4); i < n; ++i)
                b.emplace("ROLE" + std::string(1, static_cast<char>('A' + i)), node(rng));
            std::string sid = "schema-" + std::to_string(pick(rng, 0, 3));
            return SemanticUnit::create(id, Iri{ns::rosetta_statement_unit}, RosettaStatement{sid, b}, sid, m);
        }
        case Level::L4:
            return SemanticUnit::create(id, Iri{ns::logic_graph_unit}, LogicGraph{graph(rng, 6)}, "shape", m);
        case Level::L5:
            return SemanticUnit::create(id, Iri{ns::inferred_graph_unit}, InferredGraph{graph(rng, 6), "rules"},
                                        std::nullopt, m);
    }
    return SemanticUnit::create(id, Iri{ns::text_snippet_unit}, snip, std::nullopt, m);
}

// Safe rules over the generator's predicates, at most two body atoms.
inline Rule safe_rule(Rng& rng) {
    const std::vector<std::string> vars{"x", "y", "z"};
    Rule r;
    std::set<std::string> bound;
    for (std::size_t i = 0, n = pick(rng, 1, 2); i < n; ++i) {
        std::string a = vars[pick(rng, 0, 2)], b = vars[pick(rng, 0, 2)];
        r.body.push_back({Var{a}, predicate(rng), Var{b}});
        bound.insert(a);
        bound.insert(b);
    }
    std::vector<std::string> bv(bound.begin(), bound.end());
    Term hs = Var{bv[pick(rng, 0, bv.size() - 1)]};
    Term ho = pick(rng, 0, 4) == 0 ? Term{entity(rng)} : Term{Var{bv[pick(rng, 0, bv.size() - 1)]}};
    r.head = {hs, Iri{"ex:q" + std::to_string(pick(rng, 0, 2))}, ho};
    if (pick(rng, 0, 1)) r.head.predicate = predicate(rng);
    return r;
}

// A randomized store: units, acyclic derivations, equivalences, a compound
// and embeddings.
inline void populate(Store& store, Rng& rng, std::size_t n) {
    std::vector<Gupri> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(store.put_unit(unit(rng, i)));
    for (std::size_t i = 1; i < n; ++i) {
        if (pick(rng, 0, 1)) store.link(ids[i], ids[pick(rng, 0, i - 1)], LinkKind::DerivedFrom,
                                 static_cast<Transformation>(pick(rng, 0, 4)));
        if (pick(rng, 0, 4) == 0) store.link(ids[i], ids[pick(rng, 0, i - 1)], LinkKind::SemanticallyEquivalentTo);
    }
    std::vector<Gupri> members{ids[0], ids[n / 2]};  // n >= 2
    auto c = CompoundUnit::create(Gupri{"https://example.org/unit/compound"}, Iri{"ex:ItemUnit"}, entity(rng), members,
                                  metadata(rng, Level::L1));
    store.put_unit(c);
    for (const auto& m : members) store.link(c.gupri(), m, LinkKind::MemberOf);
    HashedBagOfWords e(16);
    for (const auto& id : ids) {
        auto u = std::get<SemanticUnit>(store.get_unit(id));
        if (u.snippet_text()) store.embed_unit(id, e);
    }
}

}  // namespace gen
