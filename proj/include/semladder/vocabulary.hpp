#pragma once
// Term vocabulary: canonical labels, synonyms and a single-parent
// subclass/instance hierarchy used for role-constraint checks.

#include "semladder/core.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace semladder {

enum class EntityKind { Class, Instance };

inline std::string_view to_string(EntityKind k) noexcept { return k == EntityKind::Class ? "class" : "instance"; }

struct VocabEntry {
    Iri iri;
    std::string label;
    EntityKind kind = EntityKind::Class;
    std::optional<Iri> parent;
    std::vector<std::string> synonyms;
    bool operator==(const VocabEntry&) const = default;
};

class Vocabulary {
public:
    Vocabulary() = default;

    // Identical re-adds are no-ops; a different entry under the same IRI is a conflict.
    // Parent references are checked by validate(), so entries may arrive in any order.
    void add(VocabEntry entry) {
        if (entry.iri.value.empty()) fail(ErrorCode::InvalidVocabulary, "entry without IRI");
        if (entry.label.empty()) fail(ErrorCode::InvalidVocabulary, "empty label for " + entry.iri.value);
        for (const auto& s : entry.synonyms)
            if (s.empty()) fail(ErrorCode::InvalidVocabulary, "empty synonym for " + entry.iri.value);
        auto it = entries_.find(entry.iri);
        if (it != entries_.end()) {
            if (it->second == entry) return;
            fail(ErrorCode::Conflict, "vocabulary already defines " + entry.iri.value);
        }
        entries_.emplace(entry.iri, std::move(entry));
    }

    // Every parent exists and the parent relation is acyclic.
    void validate() const {
        for (const auto& [iri, e] : entries_) {
            if (e.parent && !entries_.count(*e.parent))
                fail(ErrorCode::InvalidVocabulary, iri.value + " has unknown parent " + e.parent->value);
        }
        for (const auto& [iri, e] : entries_) {
            std::set<Iri> seen{iri};
            const VocabEntry* cur = &e;
            while (cur->parent) {
                if (!seen.insert(*cur->parent).second)
                    fail(ErrorCode::InvalidVocabulary, "parent cycle through " + iri.value);
                cur = &entries_.at(*cur->parent);
            }
        }
    }

    const VocabEntry* find(const Iri& iri) const {
        auto it = entries_.find(iri);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::optional<std::string> label(const Iri& iri) const {
        if (const auto* e = find(iri)) return e->label;
        return std::nullopt;
    }

    // The entity followed by its ancestors, nearest first.
    std::vector<Iri> lineage(const Iri& iri) const {
        std::vector<Iri> out{iri};
        std::set<Iri> seen{iri};
        const VocabEntry* cur = find(iri);
        while (cur && cur->parent && seen.insert(*cur->parent).second) {
            out.push_back(*cur->parent);
            cur = find(*cur->parent);
        }
        return out;
    }

    // True when `entity` is `cls` or lies below it via instance/subclass edges.
    bool is_a(const Iri& entity, const Iri& cls) const {
        for (const auto& a : lineage(entity))
            if (a == cls) return true;
        return false;
    }

    const std::map<Iri, VocabEntry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<Iri, VocabEntry> entries_;
};

// Tab-separated rows: iri, label, kind, parent (may be empty), synonyms
// ('|'-separated, may be empty). Blank lines and '#' comments are skipped.
inline Vocabulary parse_vocabulary_tsv(std::string_view content) {
    Vocabulary vocab;
    std::set<Iri> seen;
    std::size_t lineno = 0;
    for (const auto& raw : text::split(content, '\n')) {
        ++lineno;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto cols = text::split(line, '\t');
        auto where = "line " + std::to_string(lineno) + ": ";
        if (cols.size() < 3 || cols.size() > 5) fail(ErrorCode::InvalidVocabulary, where + "expected 3 to 5 columns");
        VocabEntry e;
        e.iri = Iri{std::string(text::trim(cols[0]))};
        e.label = std::string(text::trim(cols[1]));
        auto kind = text::trim(cols[2]);
        if (kind == "class") e.kind = EntityKind::Class;
        else if (kind == "instance") e.kind = EntityKind::Instance;
        else fail(ErrorCode::InvalidVocabulary, where + "kind must be class or instance");
        if (cols.size() > 3 && !text::trim(cols[3]).empty()) e.parent = Iri{std::string(text::trim(cols[3]))};
        if (cols.size() > 4 && !text::trim(cols[4]).empty()) {
            for (const auto& s : text::split(cols[4], '|')) e.synonyms.emplace_back(text::trim(s));
        }
        if (!seen.insert(e.iri).second) fail(ErrorCode::Conflict, where + "duplicate IRI " + e.iri.value);
        try {
            vocab.add(std::move(e));
        } catch (const Error& err) {
            fail(err.code(), where + err.what());
        }
    }
    vocab.validate();
    return vocab;
}

}  // namespace semladder
