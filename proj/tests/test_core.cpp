#include "fixture.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <regex>

using namespace semladder;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

Metadata l1_meta() { return fixture::meta(Level::L1); }

}  // namespace

// --- minting -------------------------------------------------------------------

TEST(Mint, DeterministicIsStable) {
    auto a = mint_gupri(fixture::base, MintMode::Deterministic, "payload");
    auto b = mint_gupri(fixture::base, MintMode::Deterministic, "payload");
    EXPECT_EQ(a, b);
}

TEST(Mint, DistinctPayloadsMatchReferenceDigest) {
    auto a = mint_gupri(fixture::base, MintMode::Deterministic, "P1");
    auto b = mint_gupri(fixture::base, MintMode::Deterministic, "P2");
    EXPECT_EQ(a.value, fixture::base + oracle::hex16(oracle::fnv1a("P1")));
    EXPECT_EQ(b.value, fixture::base + oracle::hex16(oracle::fnv1a("P2")));
    EXPECT_NE(oracle::fnv1a("P1"), oracle::fnv1a("P2"));
    EXPECT_NE(a, b);
}

TEST(Mint, KnownDigestVectors) {
    // Published FNV-1a 64 test vectors.
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Mint, EmptyBaseRejected) {
    EXPECT_EQ(code_of([] { mint_gupri("", MintMode::Deterministic, "P"); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { mint_gupri("no-scheme/", MintMode::Deterministic, "P"); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { mint_gupri("https://example.org/x", MintMode::Deterministic, "P"); }),
              ErrorCode::InvalidArgument);
}

TEST(Mint, RandomModeYieldsCanonicalUuids) {
    GupriMinter ids(fixture::base, MintMode::Random, 42);
    static const std::regex uuid(R"(https://example\.org/unit/[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12})");
    std::set<Gupri> seen;
    for (int i = 0; i < 100; ++i) {
        auto g = ids.mint("same payload");
        EXPECT_TRUE(std::regex_match(g.value, uuid)) << g.value;
        seen.insert(g);
    }
    EXPECT_EQ(seen.size(), 100u);
}

// --- text snippet units ------------------------------------------------------------

TEST(TextSnippet, SentenceWithOffsets) {
    GupriMinter ids(fixture::base);
    auto u = new_text_snippet_unit(ids, fixture::sentence, "doc1", 0, 36, l1_meta());
    EXPECT_EQ(u.level(), Level::L1);
    EXPECT_TRUE(u.refs().empty());
    EXPECT_EQ(u.metadata().logical_framework, "none");
    EXPECT_EQ(u.metadata().source_ref, std::optional<std::string>("doc1"));
    EXPECT_EQ(u.unit_class().value, ns::text_snippet_unit);
}

TEST(TextSnippet, OffsetsMustSpanTheTextExactly) {
    GupriMinter ids(fixture::base);
    // Without the final period the sentence is 35 bytes long.
    const std::string clause = "Specimen X has a mass of 4.96 grams";
    ASSERT_EQ(clause.size(), 35u);
    EXPECT_NO_THROW(new_text_snippet_unit(ids, clause, "doc1", 0, 35, l1_meta()));
    EXPECT_EQ(code_of([&] { new_text_snippet_unit(ids, clause, "doc1", 0, 36, l1_meta()); }), ErrorCode::InvalidOffsets);
}

TEST(TextSnippet, Rejections) {
    GupriMinter ids(fixture::base);
    EXPECT_EQ(code_of([&] { new_text_snippet_unit(ids, "", "doc1", 0, 0, l1_meta()); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { new_text_snippet_unit(ids, "abc", "doc1", 0, 5, l1_meta()); }), ErrorCode::InvalidOffsets);
    EXPECT_EQ(code_of([&] { new_text_snippet_unit(ids, "abc", "doc1", 3, 3, l1_meta()); }), ErrorCode::InvalidOffsets);
}

TEST(TextSnippet, NoSourceMeansNoOffsets) {
    GupriMinter ids(fixture::base);
    auto u = new_text_snippet_unit(ids, "abc", std::nullopt, 7, 9, l1_meta());
    const auto& s = *u.as<TextSnippet>();
    EXPECT_EQ(s.start, 0u);
    EXPECT_EQ(s.end, 3u);
}

// --- invariants -------------------------------------------------------------------

TEST(Unit, LogicalFrameworkIsNoneExactlyBelowL3) {
    TextSnippet s{"abc", std::nullopt, 0, 3};
    Metadata m = l1_meta();
    m.logical_framework = "owl";
    EXPECT_EQ(code_of([&] { SemanticUnit::create(Gupri{"u:1/a"}, Iri{"c"}, s, std::nullopt, m); }),
              ErrorCode::InvalidArgument);
    Metadata none = l1_meta();
    EXPECT_EQ(code_of([&] {
                  SemanticUnit::create(Gupri{"u:1/a"}, Iri{"c"}, LogicGraph{{}}, std::nullopt, none);
              }),
              ErrorCode::InvalidArgument);
}

TEST(Unit, MetadataKeysMayNotCollideWithContent) {
    Metadata m = fixture::meta(Level::L4);
    GraphContent g{{Iri{"ex:a"}, Iri{"ex:p"}, Iri{"ex:b"}}};
    m.extra["ex:p"] = "v";
    EXPECT_EQ(code_of([&] { SemanticUnit::create(Gupri{"u:1/a"}, Iri{"c"}, LogicGraph{g}, std::nullopt, m); }),
              ErrorCode::InvalidArgument);
    m.extra.clear();
    m.extra["ex:q"] = "v";
    EXPECT_NO_THROW(SemanticUnit::create(Gupri{"u:1/a"}, Iri{"c"}, LogicGraph{g}, std::nullopt, m));
}

TEST(Unit, AnnotationInvariants) {
    TextSnippet s{"New York", std::nullopt, 0, 8};
    auto make = [&](std::vector<Annotation> anns) {
        return SemanticUnit::create(Gupri{"u:1/a"}, Iri{"c"}, EnrichedSnippet{s, std::move(anns)}, std::nullopt,
                                    fixture::meta(Level::L2));
    };
    Annotation york{4, 8, "York", AnnotationKind::Entity, Iri{"ex:york"}};
    Annotation ny{0, 8, "New York", AnnotationKind::Entity, Iri{"ex:ny"}};
    EXPECT_NO_THROW(make({ny}));
    EXPECT_EQ(code_of([&] { make({ny, york}); }), ErrorCode::InvalidArgument);  // overlap
    Annotation wrong{0, 3, "new", AnnotationKind::Entity, Iri{"ex:x"}};
    EXPECT_EQ(code_of([&] { make({wrong}); }), ErrorCode::InvalidArgument);  // surface differs
    Annotation past{4, 9, "York", AnnotationKind::Entity, Iri{"ex:york"}};
    EXPECT_EQ(code_of([&] { make({past}); }), ErrorCode::InvalidArgument);
}

TEST(Unit, RefsMatchIndependentWalker) {
    gen::Rng rng(20240101);
    for (std::size_t i = 0; i < 200; ++i) {
        auto u = gen::unit(rng, i);
        std::set<std::string> got;
        for (const auto& r : u.refs()) got.insert(r.value);
        EXPECT_EQ(got, oracle::refs(u.content())) << "case " << i;
    }
}

TEST(Unit, MetadataDisjointFromContentOnRandomUnits) {
    gen::Rng rng(7);
    for (std::size_t i = 0; i < 150; ++i) {
        auto u = gen::unit(rng, i);
        std::set<std::string> preds;
        for (const auto& t : u.triples()) preds.insert(t.predicate.value);
        for (const auto& [k, v] : u.metadata().extra) {
            EXPECT_FALSE(preds.count(k));
            EXPECT_FALSE(preds.count(ns::meta_prefix + k));
        }
    }
}

TEST(Unit, LevelFollowsContentVariant) {
    GupriMinter ids(fixture::base);
    auto l1 = new_text_snippet_unit(ids, "abc", std::nullopt, 0, 3, l1_meta());
    EXPECT_EQ(unit_level(AnyUnit{l1}), Level::L1);
    auto l3 = instantiate(fixture::measurement(),
                          {{"MATERIAL ENTITY", Iri{"ex:specimenX"}}, {"QUALITY", Iri{"ex:mass"}},
                           {"VALUE", Literal{"4.96", Datatype::Decimal}}, {"UNIT", Iri{"ex:gram"}}},
                          fixture::meta(Level::L3), fixture::vocab(), ids);
    EXPECT_EQ(unit_level(AnyUnit{l3}), Level::L3);
    auto l4 = SemanticUnit::create(Gupri{"u:1/4"}, Iri{"c"}, LogicGraph{{}}, std::nullopt, fixture::meta(Level::L4));
    EXPECT_EQ(unit_level(AnyUnit{l4}), Level::L4);
    auto l5 = SemanticUnit::create(Gupri{"u:1/5"}, Iri{"c"}, InferredGraph{{}, "r"}, std::nullopt, fixture::meta(Level::L5));
    EXPECT_EQ(unit_level(AnyUnit{l5}), Level::L5);
    auto c = new_compound_unit(ids, Iri{"ex:ItemUnit"}, Iri{"ex:specimenX"}, {l1.gupri()}, l1_meta());
    EXPECT_EQ(code_of([&] { unit_level(AnyUnit{c}); }), ErrorCode::InvalidArgument);
}

// --- compounds -------------------------------------------------------------------

namespace {

SemanticUnit graph_unit(const std::string& id, GraphContent g) {
    return SemanticUnit::create(Gupri{id}, Iri{ns::logic_graph_unit}, LogicGraph{std::move(g)}, std::nullopt,
                                fixture::meta(Level::L4));
}

}  // namespace

TEST(Compound, EmptyAndSelfMembership) {
    GupriMinter ids(fixture::base);
    EXPECT_EQ(code_of([&] { new_compound_unit(ids, Iri{"ex:ItemUnit"}, Iri{"ex:specimenX"}, {}, l1_meta()); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] {
                  CompoundUnit::create(Gupri{"u:1/c"}, Iri{"ex:ItemUnit"}, Iri{"ex:s"}, {Gupri{"u:1/c"}}, l1_meta());
              }),
              ErrorCode::Cycle);
}

TEST(Compound, DerivedContentIsMemberUnion) {
    Triple p{Iri{"ex:a"}, Iri{"ex:p"}, Iri{"ex:b"}};
    Triple q{Iri{"ex:b"}, Iri{"ex:p"}, Iri{"ex:c"}};
    Triple r{Iri{"ex:c"}, Iri{"ex:p"}, Literal{"1", Datatype::Decimal}};
    Store store;
    store.put_unit(graph_unit("u:1/m1", {p, q}));
    store.put_unit(graph_unit("u:1/m2", {q, r}));
    auto c = CompoundUnit::create(Gupri{"u:1/c"}, Iri{"ex:ItemUnit"}, Iri{"ex:a"}, {Gupri{"u:1/m1"}, Gupri{"u:1/m2"}},
                                  l1_meta());
    store.put_unit(c);
    EXPECT_EQ(store.derived_content(Gupri{"u:1/c"}), oracle::set_union({{p, q}, {q, r}}));
    EXPECT_EQ(store.derived_content(Gupri{"u:1/c"}).size(), 3u);
}

TEST(Compound, SingleMemberAndMissingMember) {
    Triple p{Iri{"ex:a"}, Iri{"ex:p"}, Iri{"ex:b"}};
    Store store;
    store.put_unit(graph_unit("u:1/m1", {p}));
    store.put_unit(CompoundUnit::create(Gupri{"u:1/c"}, Iri{"ex:I"}, Iri{"ex:a"}, {Gupri{"u:1/m1"}}, l1_meta()));
    EXPECT_EQ(store.derived_content(Gupri{"u:1/c"}), (GraphContent{p}));
    store.put_unit(CompoundUnit::create(Gupri{"u:1/d"}, Iri{"ex:I"}, Iri{"ex:a"}, {Gupri{"u:1/missing"}}, l1_meta()));
    EXPECT_EQ(code_of([&] { store.derived_content(Gupri{"u:1/d"}); }), ErrorCode::NotFound);
}

TEST(Compound, SnippetMembersListedButContributeNothing) {
    fixture::Pipeline fx;
    auto c = fx.pipe.add_compound(Iri{"ex:SpecimenItemUnit"}, Iri{"ex:specimenX"}, {fx.l1, fx.l2, fx.l3, fx.l4});
    auto content = fx.store->derived_content(c);
    auto expected = oracle::set_union({fx.unit(fx.l3).triples(), fx.unit(fx.l4).triples()});
    EXPECT_EQ(content, expected);
    EXPECT_EQ(std::get<CompoundUnit>(fx.store->get_unit(c)).members().size(), 4u);
}

TEST(Compound, DerivedContentPropertyAgainstUnionOracle) {
    gen::Rng rng(99);
    for (std::size_t round = 0; round < 100; ++round) {
        Store store;
        std::vector<Gupri> members;
        std::vector<GraphContent> parts;
        for (std::size_t i = 0, n = gen::pick(rng, 1, 5); i < n; ++i) {
            auto g = gen::graph(rng, 8, 5);
            std::string id = "u:1/m" + std::to_string(i);
            store.put_unit(graph_unit(id, g));
            members.push_back(Gupri{id});
            parts.push_back(g);
        }
        store.put_unit(CompoundUnit::create(Gupri{"u:1/c"}, Iri{"ex:I"}, Iri{"ex:s"}, members, l1_meta()));
        EXPECT_EQ(store.derived_content(Gupri{"u:1/c"}), oracle::set_union(parts)) << "round " << round;
    }
}
