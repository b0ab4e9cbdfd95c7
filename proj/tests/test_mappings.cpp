#include "fixture.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "star.hpp"

#include <gtest/gtest.h>

using namespace semladder;
using namespace star;

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

}  // namespace

// --- crosswalk registry --------------------------------------------------------------

TEST(Crosswalk, FixtureGraphShapeRegisters) {
    SchemaRegistry schemas;
    schemas.add(fixture::measurement());
    MappingRegistry m;
    EXPECT_EQ(m.add_crosswalk(fixture::owl_crosswalk(), schemas), "measurement-to-owl");
    EXPECT_EQ(code_of([&] { m.add_crosswalk(fixture::owl_crosswalk(), schemas); }), ErrorCode::Conflict);
}

TEST(Crosswalk, UnmappedSourceRole) {
    SchemaRegistry schemas;
    schemas.add(fixture::measurement());
    auto cw = fixture::owl_crosswalk();
    cw.role_map.erase("VALUE");
    MappingRegistry m;
    EXPECT_EQ(code_of([&] { m.add_crosswalk(cw, schemas); }), ErrorCode::InvalidCrosswalk);
}

TEST(Crosswalk, SchemaTargetRolesMustBeCovered) {
    Star star(2);
    auto cw = to_anchor(0);
    cw.id = "bad";
    cw.role_map["SITEA"] = "ACTOR";  // ACTOR twice, PLACE never
    EXPECT_EQ(code_of([&] { star.mappings.add_crosswalk(cw, star.schemas); }), ErrorCode::InvalidCrosswalk);
    auto unknown = to_anchor(0);
    unknown.id = "bad2";
    unknown.role_map["SITEA"] = "WHERE";
    EXPECT_EQ(code_of([&] { star.mappings.add_crosswalk(unknown, star.schemas); }), ErrorCode::InvalidCrosswalk);
    auto missing_schema = to_anchor(0);
    missing_schema.id = "bad3";
    missing_schema.target = "nowhere";
    EXPECT_EQ(code_of([&] { star.mappings.add_crosswalk(missing_schema, star.schemas); }), ErrorCode::NotFound);
}

TEST(Crosswalk, FileParsing) {
    auto cws = parse_crosswalk_file(fixture::read("crosswalks.txt"));
    ASSERT_EQ(cws.size(), 1u);
    EXPECT_EQ(cws[0].templates.size(), 4u);
    EXPECT_EQ(cws[0].role_map.at("MATERIAL ENTITY"), "SUBJECT");
    EXPECT_EQ(cws[0].templates[1], (TripleTemplate{FreshNode{"q"}, Iri{"rdf:type"}, RoleSlot{"QUALITY TYPE"}}));
    EXPECT_EQ(code_of([] { parse_crosswalk_file("map A -> B\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_crosswalk_file("crosswalk c a b\ntemplate (x y\n"); }), ErrorCode::ParseError);
}

// --- entity mappings -------------------------------------------------------------------

TEST(EntityMappings, ExactIsSymmetric) {
    MappingRegistry m;
    auto id = m.add_entity_mapping({Iri{"ex:gram"}, MappingRelation::Exact, Iri{"qudt:GM"}});
    EXPECT_EQ(m.add_entity_mapping({Iri{"ex:gram"}, MappingRelation::Exact, Iri{"qudt:GM"}}), id);
    EXPECT_EQ(m.entity_mappings().size(), 1u);
    EXPECT_EQ(m.map_entity(Iri{"ex:gram"}), (std::set<Iri>{Iri{"qudt:GM"}}));
    EXPECT_EQ(m.map_entity(Iri{"qudt:GM"}), (std::set<Iri>{Iri{"ex:gram"}}));
}

TEST(EntityMappings, BroaderHasNarrowerInverse) {
    MappingRegistry m;
    m.add_entity_mapping({Iri{"ex:a"}, MappingRelation::Broader, Iri{"ex:b"}});
    EXPECT_EQ(m.map_entity(Iri{"ex:b"}, {false, true}), (std::set<Iri>{Iri{"ex:a"}}));
    EXPECT_EQ(m.map_entity(Iri{"ex:a"}, {true, false}), (std::set<Iri>{Iri{"ex:b"}}));
    EXPECT_TRUE(m.map_entity(Iri{"ex:a"}).empty());
}

TEST(EntityMappings, SelfMappingRejected) {
    MappingRegistry m;
    EXPECT_EQ(code_of([&] { m.add_entity_mapping({Iri{"ex:a"}, MappingRelation::Exact, Iri{"ex:a"}}); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { parse_relation("sameish"); }), ErrorCode::InvalidArgument);
}

TEST(EntityMappings, ExactClosure) {
    MappingRegistry m;
    m.add_entity_mapping({Iri{"ex:a"}, MappingRelation::Exact, Iri{"ex:b"}});
    m.add_entity_mapping({Iri{"ex:b"}, MappingRelation::Exact, Iri{"ex:c"}});
    EXPECT_EQ(m.map_entity(Iri{"ex:a"}), (std::set<Iri>{Iri{"ex:b"}, Iri{"ex:c"}}));
    EXPECT_TRUE(m.map_entity(Iri{"ex:z"}).empty());
}

TEST(EntityMappings, BroaderExtendsConstraints) {
    auto vocab = fixture::vocab();
    MappingRegistry m;
    EXPECT_FALSE(m.satisfies(Iri{"ex:sample"}, Iri{"BFO:0000040"}, vocab));
    m.add_entity_mapping({Iri{"ex:sample"}, MappingRelation::Broader, Iri{"OBI:0100051"}});
    EXPECT_TRUE(m.satisfies(Iri{"ex:sample"}, Iri{"BFO:0000040"}, vocab));
}

TEST(EntityMappingsProperty, ClosureEqualsUnionFind) {
    gen::Rng rng(1618);
    for (int round = 0; round < 150; ++round) {
        MappingRegistry m;
        oracle::UnionFind uf;
        std::size_t nodes = gen::pick(rng, 2, 14);
        for (std::size_t i = 0, n = gen::pick(rng, 0, 30); i < n; ++i) {
            auto a = gen::entity(rng, nodes), b = gen::entity(rng, nodes);
            if (a == b) continue;
            auto rel = static_cast<MappingRelation>(gen::pick(rng, 0, 2));
            m.add_entity_mapping({a, rel, b});
            if (rel == MappingRelation::Exact) uf.unite(a.value, b.value);
        }
        for (std::size_t k = 0; k < nodes; ++k) {
            std::string e = "ex:e" + std::to_string(k);
            std::set<std::string> got;
            for (const auto& x : m.map_entity(Iri{e})) got.insert(x.value);
            EXPECT_EQ(got, uf.members_with(e)) << "round " << round << " entity " << e;
        }
    }
}

// --- routing and translation -----------------------------------------------------------

TEST(Route, StarOfFiveNeedsTenCrosswalksForTwentyPairs) {
    const std::size_t n = 5;
    Star star(n);
    EXPECT_EQ(star.crosswalks, 2 * n);
    std::size_t routable = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            auto r = star.mappings.route("s" + std::to_string(i), "s" + std::to_string(j), star.schemas);
            EXPECT_EQ(r, (std::vector<std::string>{to_anchor(i).id, from_anchor(j).id}));
            ++routable;
        }
    EXPECT_EQ(routable, n * (n - 1));
    EXPECT_EQ(routable, 20u);
}

TEST(Route, CountsAcrossStarSizes) {
    for (std::size_t n = 2; n <= 6; ++n) {
        Star star(n);
        EXPECT_EQ(star.crosswalks, 2 * n);
        std::size_t routable = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && star.mappings.route("s" + std::to_string(i), "s" + std::to_string(j), star.schemas).size() == 2)
                    ++routable;
        EXPECT_EQ(routable, n * (n - 1)) << "n=" << n;
    }
}

TEST(Route, DirectPreferredAndMissingAnchorLink) {
    Star star(3);
    star.mappings.add_crosswalk(direct(0, 1), star.schemas);
    EXPECT_EQ(star.mappings.route("s0", "s1", star.schemas), (std::vector<std::string>{"direct-0-1"}));
    EXPECT_TRUE(star.mappings.route("s0", "s0", star.schemas).empty());
    star.schemas.add(star_schema(7));
    EXPECT_EQ(code_of([&] { star.mappings.route("s0", "s7", star.schemas); }), ErrorCode::NoRoute);
    EXPECT_EQ(code_of([&] { star.mappings.route("s0", "s9", star.schemas); }), ErrorCode::NotFound);
}

TEST(Translate, AnchoredEqualsDirectForThreePairs) {
    auto vocab = fixture::vocab();
    for (auto [i, j] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 4}, {3, 0}}) {
        Star anchored(5), with_direct(5);
        with_direct.mappings.add_crosswalk(direct(i, j), with_direct.schemas);
        GupriMinter ids(fixture::base);
        auto u = star_unit(i, vocab, ids);
        auto target = "s" + std::to_string(j);
        auto via_anchor = translate(u, target, anchored.schemas, anchored.mappings, vocab, ids, fixture::meta(Level::L3));
        auto via_direct =
            translate(u, target, with_direct.schemas, with_direct.mappings, vocab, ids, fixture::meta(Level::L3));
        ASSERT_EQ(with_direct.mappings.route("s" + std::to_string(i), target, with_direct.schemas).size(), 1u);
        const auto& a = via_anchor.as<RosettaStatement>()->bindings;
        const auto& d = via_direct.as<RosettaStatement>()->bindings;
        EXPECT_EQ(a, d);
        EXPECT_EQ(a, compose_by_hand(u.as<RosettaStatement>()->bindings, {to_anchor(i), from_anchor(j)}));
        EXPECT_EQ(via_anchor.as<RosettaStatement>()->schema_id, target);
    }
}

TEST(Translate, IdentityRoute) {
    auto vocab = fixture::vocab();
    Star star(2);
    GupriMinter ids(fixture::base);
    auto u = star_unit(1, vocab, ids);
    auto same = translate(u, "s1", star.schemas, star.mappings, vocab, ids, fixture::meta(Level::L3));
    EXPECT_EQ(same, u);
}

TEST(Translate, ConstraintFailureAndMappedRepair) {
    auto vocab = fixture::vocab();
    Star star(2);
    // s9 requires its agent to be a specimen.
    auto strict = make_schema("s9", "AGENTJ handles ITEMJ at SITEJ",
                              {{"AGENTJ", RoleKind::Entity, Iri{"OBI:0100051"}},
                               {"ITEMJ", RoleKind::Numeric, std::nullopt},
                               {"SITEJ", RoleKind::Text, std::nullopt}});
    star.schemas.add(strict);
    star.mappings.add_crosswalk({"anchor-to-s9", "anchor", "s9",
                                 {{"ACTOR", "AGENTJ"}, {"OBJECT", "ITEMJ"}, {"PLACE", "SITEJ"}}, {}, std::nullopt},
                                star.schemas);
    GupriMinter ids(fixture::base);
    auto u = instantiate(star_schema(0),
                         {{"AGENTA", Iri{"BFO:0000040"}}, {"ITEMA", Literal{"1", Datatype::Decimal}},
                          {"SITEA", Literal{"lab", Datatype::Text}}},
                         fixture::meta(Level::L3), vocab, ids);
    EXPECT_EQ(code_of([&] { translate(u, "s9", star.schemas, star.mappings, vocab, ids, fixture::meta(Level::L3)); }),
              ErrorCode::ConstraintFailure);
    star.mappings.add_entity_mapping({Iri{"BFO:0000040"}, MappingRelation::Exact, Iri{"ex:specimenX"}});
    auto t = translate(u, "s9", star.schemas, star.mappings, vocab, ids, fixture::meta(Level::L3));
    EXPECT_EQ(t.as<RosettaStatement>()->bindings.at("AGENTJ"), Node(Iri{"ex:specimenX"}));
}

TEST(Translate, PipelineLinksTheTranslation) {
    auto vocab = fixture::vocab();
    Store store;
    store.add_vocabulary(vocab);
    store.add_schema(anchor_schema());
    store.add_schema(star_schema(0));
    store.add_schema(star_schema(1));
    for (std::size_t k = 0; k < 2; ++k) {
        store.add_crosswalk(to_anchor(k));
        store.add_crosswalk(from_anchor(k));
    }
    Pipeline pipe(store, GupriMinter(fixture::base), fixture::stamp);
    GupriMinter ids(fixture::base);
    auto u = star_unit(0, vocab, ids);
    store.put_unit(u);
    auto t = pipe.translate(u.gupri(), "s1");
    EXPECT_NE(t, u.gupri());
    EXPECT_EQ(store.equivalents(u.gupri()), (std::set<Gupri>{t}));
    EXPECT_EQ(store.trace(t, TraceDirection::ToSource), (std::vector<Gupri>{u.gupri()}));
    EXPECT_EQ(pipe.translate(u.gupri(), "s0"), u.gupri());
}
