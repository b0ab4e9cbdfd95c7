#pragma once
// Runs ladder transformations against a store and records the links that
// keep every result traceable to its source snippet.

#include "semladder/io.hpp"
#include "semladder/ladder.hpp"
#include "semladder/store.hpp"

#include <optional>
#include <string>
#include <vector>

namespace semladder {

class Pipeline {
public:
    Pipeline(Store& store, GupriMinter ids, Stamp stamp) : store_(store), ids_(std::move(ids)), stamp_(std::move(stamp)) {}

    std::vector<Gupri> ingest(std::string_view doc, const std::string& source_ref) {
        std::vector<Gupri> out;
        for (auto& u : ingest_document(doc, source_ref, ids_, make_metadata(stamp_, Level::L1)))
            out.push_back(store_.put_unit(u));
        return out;
    }

    // Uses a gazetteer over the store vocabulary unless another enricher is given.
    Gupri enrich(const Gupri& l1, const Enricher* enricher = nullptr) {
        auto source = semantic(l1);
        std::optional<GazetteerEnricher> gazetteer;
        if (!enricher) enricher = &gazetteer.emplace(store_.vocabulary());
        auto unit = semladder::enrich(source, *enricher, ids_, make_metadata(stamp_, Level::L2));
        Gupri id = store_.put_unit(unit);
        store_.link(id, l1, LinkKind::DerivedFrom, Transformation::Enrichment);
        return id;
    }

    // The L3 result, if any schema matched; `report` receives every attempt.
    std::optional<Gupri> structure(const Gupri& l2, std::vector<StructuringEntry>* report = nullptr) {
        auto source = semantic(l2);
        auto mappings = store_.mappings();
        auto vocab = store_.vocabulary();
        auto result = semladder::structure(source, store_.schemas(), mappings.constraint_check(vocab), ids_,
                                           make_metadata(stamp_, Level::L3));
        if (report) *report = result.report;
        if (result.units.empty()) return std::nullopt;
        Gupri id = store_.put_unit(result.units.front());
        store_.link(id, l2, LinkKind::DerivedFrom, Transformation::Structuring);
        for (const auto& root : roots(l2)) store_.link(id, root, LinkKind::HasAssociatedSourceReference);
        return id;
    }

    Gupri model(const Gupri& l3, std::string_view crosswalk_id) {
        auto source = semantic(l3);
        auto mappings = store_.mappings();
        auto unit = semladder::model(source, mappings.crosswalk(crosswalk_id), mappings, ids_,
                                     make_metadata(stamp_, Level::L4));
        Gupri id = store_.put_unit(unit);
        store_.link(id, l3, LinkKind::DerivedFrom, Transformation::Modelling);
        store_.link(id, l3, LinkKind::SemanticallyEquivalentTo);
        return id;
    }

    Gupri lift(const std::vector<Gupri>& inputs, std::string_view ruleset_id) {
        std::vector<SemanticUnit> units;
        for (const auto& g : inputs) units.push_back(semantic(g));
        auto unit = semladder::lift(units, store_.ruleset(ruleset_id), ids_, make_metadata(stamp_, Level::L5));
        Gupri id = store_.put_unit(unit);
        for (const auto& g : inputs) store_.link(id, g, LinkKind::DerivedFrom, Transformation::Lifting);
        return id;
    }

    Gupri translate(const Gupri& l3, std::string_view target_schema) {
        auto source = semantic(l3);
        auto unit = semladder::translate(source, target_schema, store_.schemas(), store_.mappings(), store_.vocabulary(),
                                         ids_, make_metadata(stamp_, Level::L3));
        if (unit.gupri() == l3) return l3;
        Gupri id = store_.put_unit(unit);
        store_.link(id, l3, LinkKind::DerivedFrom, Transformation::Translation);
        store_.link(id, l3, LinkKind::SemanticallyEquivalentTo);
        return id;
    }

    Gupri add_compound(Iri unit_class, Iri subject, std::vector<Gupri> members) {
        for (const auto& m : members) store_.get_unit(m);
        auto unit = new_compound_unit(ids_, std::move(unit_class), std::move(subject), members,
                                      Metadata{stamp_.created_at, stamp_.creator, "none", std::nullopt, {}});
        Gupri id = store_.put_unit(unit);
        for (const auto& m : members) store_.link(id, m, LinkKind::MemberOf);
        return id;
    }

    Store& store() noexcept { return store_; }
    GupriMinter& ids() noexcept { return ids_; }

private:
    SemanticUnit semantic(const Gupri& g) const {
        auto u = store_.get_unit(g);
        if (auto* su = std::get_if<SemanticUnit>(&u)) return *su;
        fail(ErrorCode::UnsupportedLevel, g.value + " is a compound unit");
    }

    // L1 units reached by following derivedFrom to the end.
    std::vector<Gupri> roots(const Gupri& g) const {
        std::vector<Gupri> out;
        auto chain = store_.trace(g, TraceDirection::ToSource);
        chain.insert(chain.begin(), g);
        for (const auto& c : chain) {
            auto u = store_.get_unit(c);
            if (const auto* su = std::get_if<SemanticUnit>(&u); su && su->level() == Level::L1) out.push_back(c);
        }
        return out;
    }

    Store& store_;
    GupriMinter ids_;
    Stamp stamp_;
};

}  // namespace semladder
