#pragma once
// Knowledge space: units, typed links, registries and embeddings.
// Append-only; every accepted mutation is one canonical record line in the
// optional journal, and opening a journal replays it from empty.
// Writers are serialized, readers share a lock for the whole query.

#include "semladder/core.hpp"
#include "semladder/embed.hpp"
#include "semladder/links.hpp"
#include "semladder/mappings.hpp"
#include "semladder/records.hpp"
#include "semladder/rosetta.hpp"
#include "semladder/rules.hpp"
#include "semladder/vocabulary.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

namespace semladder {

struct UnitFilter {
    std::optional<Level> level;
    std::optional<Iri> unit_class;
    std::optional<Iri> entity;
    std::optional<std::string> text;      // case-insensitive substring of snippet or label
    std::optional<TriplePattern> triple;  // variables are wildcards
};

enum class TraceDirection { ToSource, ToFormal };

struct StoreStats {
    std::map<std::string, std::size_t> units_by_level;
    std::size_t compounds = 0;
    std::map<std::string, std::size_t> links_by_kind;
    std::size_t vocabulary = 0, schemas = 0, crosswalks = 0, mappings = 0, rulesets = 0, embeddings = 0;
};

// Parses "s p o" where "?x" is a wildcard, a quoted token is a text
// literal, a bare decimal a decimal literal, anything else an IRI.
inline TriplePattern parse_triple_pattern(std::string_view s) {
    auto trimmed = text::trim(s);
    std::string src = text::starts_with(trimmed, "(") ? std::string(trimmed) : "(" + std::string(trimmed) + ")";
    return detail::RuleParser(src, "triple pattern: ").parse_pattern();
}

class Store {
public:
    Store() = default;

    // Opens (creating if absent) a journal and replays it.
    explicit Store(std::filesystem::path journal) : journal_path_(std::move(journal)) {
        if (std::filesystem::exists(*journal_path_)) {
            std::ifstream in(*journal_path_, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            replay(buf.str());
        }
        journal_.open(*journal_path_, std::ios::binary | std::ios::app);
        if (!journal_) fail(ErrorCode::InvalidArgument, "cannot open journal " + journal_path_->string());
    }

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    // --- registries ---------------------------------------------------------

    // Merges a vocabulary; the merged result must validate before anything commits.
    void add_vocabulary(const Vocabulary& vocab) {
        std::unique_lock lock(mu_);
        Vocabulary merged = vocab_;
        std::vector<const VocabEntry*> fresh;
        for (const auto& [iri, e] : vocab.entries()) {
            bool known = merged.find(iri) != nullptr;
            merged.add(e);
            if (!known) fresh.push_back(&e);
        }
        merged.validate();
        vocab_ = std::move(merged);
        for (const auto* e : fresh) append(records::encode(*e));
    }

    void add_schema(RosettaSchema schema) {
        std::unique_lock lock(mu_);
        if (const auto* existing = schemas_.find(schema.id); existing && records::encode(*existing) == records::encode(schema))
            return;
        auto rec = records::encode(schema);
        schemas_.add(std::move(schema));
        append(rec);
    }

    void add_crosswalk(SchemaCrosswalk cw) {
        std::unique_lock lock(mu_);
        if (auto it = mappings_.crosswalks().find(cw.id); it != mappings_.crosswalks().end() && it->second == cw) return;
        auto rec = records::encode(cw);
        mappings_.add_crosswalk(std::move(cw), schemas_);
        append(rec);
    }

    std::string add_mapping(const EntityMapping& m) {
        std::unique_lock lock(mu_);
        std::string id = mapping_id(m);
        bool known = mappings_.entity_mappings().count(id) > 0;
        mappings_.add_entity_mapping(m);
        if (!known) append(records::encode(m));
        return id;
    }

    void add_ruleset(Ruleset rs) {
        std::unique_lock lock(mu_);
        for (const auto& r : rs.rules) check_rule(r);
        if (auto it = rulesets_.find(rs.id); it != rulesets_.end()) {
            if (it->second == rs) return;
            fail(ErrorCode::Conflict, "ruleset " + rs.id + " already registered");
        }
        auto rec = records::encode(rs);
        rulesets_.emplace(rs.id, std::move(rs));
        append(rec);
    }

    Vocabulary vocabulary() const {
        std::shared_lock lock(mu_);
        return vocab_;
    }

    SchemaRegistry schemas() const {
        std::shared_lock lock(mu_);
        return schemas_;
    }

    MappingRegistry mappings() const {
        std::shared_lock lock(mu_);
        return mappings_;
    }

    Ruleset ruleset(std::string_view id) const {
        std::shared_lock lock(mu_);
        auto it = rulesets_.find(std::string(id));
        if (it == rulesets_.end()) fail(ErrorCode::NotFound, "ruleset " + std::string(id) + " is not registered");
        return it->second;
    }

    // --- units --------------------------------------------------------------

    Gupri put_unit(const AnyUnit& unit) {
        std::unique_lock lock(mu_);
        const Gupri& id = gupri_of(unit);
        auto rec = records::encode(unit);
        if (auto it = units_.find(id); it != units_.end()) {
            if (records::encode(it->second) == rec) return id;
            fail(ErrorCode::Conflict, "GUPRI " + id.value + " already holds a different unit");
        }
        units_.emplace(id, unit);
        append(rec);
        return id;
    }

    AnyUnit get_unit(const Gupri& id) const {
        std::shared_lock lock(mu_);
        return unit_ref(id);
    }

    std::optional<AnyUnit> find_unit(const Gupri& id) const {
        std::shared_lock lock(mu_);
        auto it = units_.find(id);
        if (it == units_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const Gupri& id) const {
        std::shared_lock lock(mu_);
        return units_.count(id) > 0;
    }

    std::vector<Gupri> find_units(const UnitFilter& f) const {
        std::shared_lock lock(mu_);
        std::vector<Gupri> out;
        for (const auto& [id, unit] : units_)
            if (matches(unit, f)) out.push_back(id);
        return out;
    }

    // --- links --------------------------------------------------------------

    std::string link(const Gupri& from, const Gupri& to, LinkKind kind,
                     std::optional<Transformation> t = std::nullopt) {
        std::unique_lock lock(mu_);
        DerivationLink l{link_id(from, to, kind, t), from, to, kind, t};
        if (links_.count(l.id)) return l.id;
        check_link(l);
        links_.emplace(l.id, l);
        index_link(l);
        append(records::encode(l));
        return l.id;
    }

    std::vector<DerivationLink> links() const {
        std::shared_lock lock(mu_);
        std::vector<DerivationLink> out;
        for (const auto& [id, l] : links_) out.push_back(l);
        return out;
    }

    // Links with the unit at either end, by id.
    std::vector<DerivationLink> links_of(const Gupri& g) const {
        std::shared_lock lock(mu_);
        std::vector<DerivationLink> out;
        for (const auto& [id, l] : links_)
            if (l.from == g || l.to == g) out.push_back(l);
        return out;
    }

    // Breadth-first over derivedFrom; each layer sorted, every unit listed once.
    std::vector<Gupri> trace(const Gupri& start, TraceDirection dir) const {
        std::shared_lock lock(mu_);
        unit_ref(start);
        const auto& edges = dir == TraceDirection::ToSource ? derived_out_ : derived_in_;
        std::vector<Gupri> out;
        std::set<Gupri> seen{start};
        std::set<Gupri> layer{start};
        while (!layer.empty()) {
            std::set<Gupri> next;
            for (const auto& g : layer)
                if (auto it = edges.find(g); it != edges.end())
                    for (const auto& n : it->second)
                        if (seen.insert(n).second) next.insert(n);
            out.insert(out.end(), next.begin(), next.end());
            layer = std::move(next);
        }
        return out;
    }

    std::set<Gupri> equivalents(const Gupri& g) const {
        std::shared_lock lock(mu_);
        unit_ref(g);
        return equivalents_locked(g);
    }

    // --- views --------------------------------------------------------------

    // Dynamic label; L4 units render through an equivalent L3 unit.
    std::string label(const Gupri& g) const {
        std::shared_lock lock(mu_);
        return label_locked(g);
    }

    DisplayGraph graph_spec(const Gupri& g) const {
        std::shared_lock lock(mu_);
        const auto* su = std::get_if<SemanticUnit>(&unit_ref(g));
        if (!su) fail(ErrorCode::NoRenderer, "compound units have no graph of their own");
        return render_graph_spec(*su, schemas_, vocab_);
    }

    GraphContent derived_content(const Gupri& g) const {
        std::shared_lock lock(mu_);
        const auto* c = std::get_if<CompoundUnit>(&unit_ref(g));
        if (!c) fail(ErrorCode::InvalidArgument, g.value + " is not a compound unit");
        return semladder::derived_content(*c, [this](const Gupri& m) -> std::optional<AnyUnit> {
            auto it = units_.find(m);
            if (it == units_.end()) return std::nullopt;
            return it->second;
        });
    }

    // --- embeddings ---------------------------------------------------------

    EmbeddingRecord embed_unit(const Gupri& g, const Embedder& embedder) {
        std::string text;
        {
            std::shared_lock lock(mu_);
            try {
                text = label_locked(g);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::NotFound) throw;
                fail(ErrorCode::NoText, g.value + " has no text: " + e.what());
            }
        }
        auto rec = embed_text(g, std::move(text), embedder);
        put_embedding(rec);
        return rec;
    }

    void put_embedding(const EmbeddingRecord& rec) {
        std::unique_lock lock(mu_);
        unit_ref(rec.gupri);
        auto key = std::make_pair(rec.gupri, rec.embedder_id);
        if (auto it = embeddings_.find(key); it != embeddings_.end()) {
            if (it->second == rec) return;
            fail(ErrorCode::Conflict, "embedding of " + rec.gupri.value + " differs from the stored one");
        }
        embeddings_.emplace(key, rec);
        append(records::encode(rec));
    }

    std::optional<EmbeddingRecord> embedding(const Gupri& g, std::string_view embedder_id) const {
        std::shared_lock lock(mu_);
        auto it = embeddings_.find({g, std::string(embedder_id)});
        if (it == embeddings_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<ScoredUnit> similar(std::string_view query, std::size_t k, const Embedder& embedder) const {
        auto q = embedder.embed(query);
        std::shared_lock lock(mu_);
        return top_k(q, corpus(embedder.id(), nullptr), k);
    }

    // Neighbours of a stored unit; the unit itself is left out.
    std::vector<ScoredUnit> similar_to(const Gupri& g, std::size_t k, const Embedder& embedder) const {
        std::shared_lock lock(mu_);
        unit_ref(g);
        auto it = embeddings_.find({g, embedder.id()});
        if (it == embeddings_.end()) fail(ErrorCode::NotFound, g.value + " has no " + embedder.id() + " embedding");
        return top_k(it->second.vector, corpus(embedder.id(), &g), k);
    }

    StoreStats stats() const {
        std::shared_lock lock(mu_);
        StoreStats s;
        for (const auto& [id, u] : units_) {
            if (const auto* su = std::get_if<SemanticUnit>(&u)) ++s.units_by_level[std::string(to_string(su->level()))];
            else ++s.compounds;
        }
        for (const auto& [id, l] : links_) ++s.links_by_kind[std::string(to_string(l.kind))];
        s.vocabulary = vocab_.size();
        s.schemas = schemas_.all().size();
        s.crosswalks = mappings_.crosswalks().size();
        s.mappings = mappings_.entity_mappings().size();
        s.rulesets = rulesets_.size();
        s.embeddings = embeddings_.size();
        return s;
    }

    // --- records ------------------------------------------------------------

    // Canonical order: record type, then key. Replaying the output into an
    // empty store reproduces this store.
    std::string export_records() const {
        std::shared_lock lock(mu_);
        std::string out;
        auto emit = [&](const records::json& j) { out += records::dump(j) + "\n"; };
        for (const auto& [iri, e] : vocab_.entries()) emit(records::encode(e));
        for (const auto& [id, s] : schemas_.all()) emit(records::encode(s));
        for (const auto& [id, cw] : mappings_.crosswalks()) emit(records::encode(cw));
        for (const auto& [id, m] : mappings_.entity_mappings()) emit(records::encode(m));
        for (const auto& [id, rs] : rulesets_) emit(records::encode(rs));
        for (const auto& [id, u] : units_)
            if (std::holds_alternative<SemanticUnit>(u)) emit(records::encode(u));
        for (const auto& [id, u] : units_)
            if (std::holds_alternative<CompoundUnit>(u)) emit(records::encode(u));
        for (const auto& [id, l] : links_) emit(records::encode(l));
        for (const auto& [key, e] : embeddings_) emit(records::encode(e));
        return out;
    }

    // Applies store records line by line; view records are rejected.
    void import_records(std::string_view text) { replay(text, true); }

private:
    void append(const records::json& rec) {
        if (!journal_.is_open() || replaying_) return;
        journal_ << records::dump(rec) << '\n';
        journal_.flush();
    }

    void replay(std::string_view text, bool journal_it = false) {
        std::size_t lineno = 0;
        std::vector<VocabEntry> vocab_entries;
        bool saved = replaying_;
        replaying_ = !journal_it;
        try {
            for (const auto& line : text::split(text, '\n')) {
                ++lineno;
                if (text::trim(line).empty()) continue;
                auto j = records::parse_line(line, lineno);
                auto type = j.at("type").get<std::string>();
                try {
                    apply(type, j, vocab_entries);
                } catch (const Error& e) {
                    fail(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
                } catch (const records::json::exception& e) {
                    fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
                }
            }
            if (!vocab_entries.empty()) {
                Vocabulary v;
                for (auto& e : vocab_entries) v.add(std::move(e));
                add_vocabulary(v);
            }
        } catch (...) {
            replaying_ = saved;
            throw;
        }
        replaying_ = saved;
    }

    void apply(const std::string& type, const records::json& j, std::vector<VocabEntry>& vocab_entries) {
        if (type == "vocab") vocab_entries.push_back(records::decode_vocab(j));
        else if (type == "schema") add_schema(records::decode_schema(j));
        else if (type == "crosswalk") add_crosswalk(records::decode_crosswalk(j));
        else if (type == "mapping") add_mapping(records::decode_mapping(j));
        else if (type == "ruleset") add_ruleset(records::decode_ruleset(j));
        else if (type == "unit") put_unit(records::decode_unit(j));
        else if (type == "compound") put_unit(records::decode_compound(j));
        else if (type == "link") {
            auto l = records::decode_link(j);
            link(l.from, l.to, l.kind, l.transformation);
        } else if (type == "embedding") put_embedding(records::decode_embedding(j));
        else fail(ErrorCode::ParseError, "'" + type + "' is a view record, not a store record");
    }

    const AnyUnit& unit_ref(const Gupri& id) const {
        auto it = units_.find(id);
        if (it == units_.end()) fail(ErrorCode::NotFound, "no unit " + id.value);
        return it->second;
    }

    bool reaches(const std::map<Gupri, std::set<Gupri>>& edges, const Gupri& from, const Gupri& to) const {
        std::set<Gupri> seen{from};
        std::deque<Gupri> queue{from};
        while (!queue.empty()) {
            Gupri cur = queue.front();
            queue.pop_front();
            if (cur == to) return true;
            if (auto it = edges.find(cur); it != edges.end())
                for (const auto& n : it->second)
                    if (seen.insert(n).second) queue.push_back(n);
        }
        return false;
    }

    void check_link(const DerivationLink& l) const {
        const AnyUnit& from = unit_ref(l.from);
        unit_ref(l.to);
        if (l.from == l.to) fail(ErrorCode::Cycle, "link from " + l.from.value + " to itself");
        if (l.kind == LinkKind::DerivedFrom && reaches(derived_out_, l.to, l.from))
            fail(ErrorCode::Cycle, "derivedFrom " + l.from.value + " -> " + l.to.value + " closes a cycle");
        if (l.kind == LinkKind::MemberOf) {
            if (!std::holds_alternative<CompoundUnit>(from))
                fail(ErrorCode::InvalidArgument, "memberOf links start at a compound unit");
            if (reaches(membership(), l.to, l.from))
                fail(ErrorCode::Cycle, "membership " + l.from.value + " -> " + l.to.value + " closes a cycle");
        }
    }

    // Compound -> member edges from member lists and memberOf links.
    std::map<Gupri, std::set<Gupri>> membership() const {
        auto edges = member_links_;
        for (const auto& [id, u] : units_)
            if (const auto* c = std::get_if<CompoundUnit>(&u))
                edges[id].insert(c->members().begin(), c->members().end());
        return edges;
    }

    void index_link(const DerivationLink& l) {
        switch (l.kind) {
            case LinkKind::DerivedFrom:
                derived_out_[l.from].insert(l.to);
                derived_in_[l.to].insert(l.from);
                break;
            case LinkKind::SemanticallyEquivalentTo:
                equivalent_[l.from].insert(l.to);
                equivalent_[l.to].insert(l.from);
                break;
            case LinkKind::MemberOf:
                member_links_[l.from].insert(l.to);
                break;
            case LinkKind::HasAssociatedSourceReference:
                break;
        }
    }

    std::set<Gupri> equivalents_locked(const Gupri& g) const {
        std::set<Gupri> seen{g};
        std::deque<Gupri> queue{g};
        while (!queue.empty()) {
            Gupri cur = queue.front();
            queue.pop_front();
            if (auto it = equivalent_.find(cur); it != equivalent_.end())
                for (const auto& n : it->second)
                    if (seen.insert(n).second) queue.push_back(n);
        }
        seen.erase(g);
        return seen;
    }

    std::string label_locked(const Gupri& g) const {
        const auto* su = std::get_if<SemanticUnit>(&unit_ref(g));
        if (!su) fail(ErrorCode::NoRenderer, "compound unit " + g.value + " has no label");
        if (su->level() <= Level::L3) return render_label(*su, schemas_, vocab_);
        if (su->level() == Level::L4) {
            for (const auto& e : equivalents_locked(g)) {
                const auto* eq = std::get_if<SemanticUnit>(&units_.at(e));
                if (eq && eq->level() == Level::L3) return render_label(*eq, schemas_, vocab_);
            }
        }
        fail(ErrorCode::NoRenderer, std::string(to_string(su->level())) + " unit " + g.value + " has no anchor route");
    }

    bool matches(const AnyUnit& unit, const UnitFilter& f) const {
        const auto* su = std::get_if<SemanticUnit>(&unit);
        if (f.level && (!su || su->level() != *f.level)) return false;
        if (f.unit_class) {
            const Iri& cls = su ? su->unit_class() : std::get<CompoundUnit>(unit).unit_class();
            if (cls != *f.unit_class) return false;
        }
        if (f.entity) {
            if (su) {
                if (!su->refs().count(*f.entity)) return false;
            } else if (std::get<CompoundUnit>(unit).subject() != *f.entity) {
                return false;
            }
        }
        if (f.text) {
            if (!su) return false;
            std::string text;
            try {
                text = label_locked(su->gupri());
            } catch (const Error&) {
                return false;
            }
            if (!text::contains_icase(text, *f.text)) return false;
        }
        if (f.triple) {
            if (!su) return false;
            bool hit = false;
            for (const auto& t : su->triples()) {
                detail::Substitution sub;
                if (detail::match(*f.triple, t, sub)) {
                    hit = true;
                    break;
                }
            }
            if (!hit) return false;
        }
        return true;
    }

    std::vector<const EmbeddingRecord*> corpus(const std::string& embedder_id, const Gupri* exclude) const {
        std::vector<const EmbeddingRecord*> out;
        for (const auto& [key, rec] : embeddings_)
            if (key.second == embedder_id && (!exclude || key.first != *exclude)) out.push_back(&rec);
        return out;
    }

    mutable std::shared_mutex mu_;
    std::optional<std::filesystem::path> journal_path_;
    std::ofstream journal_;
    bool replaying_ = false;

    Vocabulary vocab_;
    SchemaRegistry schemas_;
    MappingRegistry mappings_;
    std::map<std::string, Ruleset> rulesets_;
    std::map<Gupri, AnyUnit> units_;
    std::map<std::string, DerivationLink> links_;
    std::map<Gupri, std::set<Gupri>> derived_out_;
    std::map<Gupri, std::set<Gupri>> derived_in_;
    std::map<Gupri, std::set<Gupri>> equivalent_;
    std::map<Gupri, std::set<Gupri>> member_links_;
    std::map<std::pair<Gupri, std::string>, EmbeddingRecord> embeddings_;
};

}  // namespace semladder
