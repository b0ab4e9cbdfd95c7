#pragma once
// Typed provenance edges between stored units.

#include "semladder/core.hpp"

#include <optional>
#include <string>

namespace semladder {

enum class LinkKind { DerivedFrom, SemanticallyEquivalentTo, HasAssociatedSourceReference, MemberOf };

inline std::string_view to_string(LinkKind k) noexcept {
    switch (k) {
        case LinkKind::DerivedFrom: return "derivedFrom";
        case LinkKind::SemanticallyEquivalentTo: return "semanticallyEquivalentTo";
        case LinkKind::HasAssociatedSourceReference: return "hasAssociatedSourceReference";
        case LinkKind::MemberOf: return "memberOf";
    }
    return "derivedFrom";
}

inline LinkKind parse_link_kind(std::string_view s) {
    if (s == "derivedFrom") return LinkKind::DerivedFrom;
    if (s == "semanticallyEquivalentTo") return LinkKind::SemanticallyEquivalentTo;
    if (s == "hasAssociatedSourceReference") return LinkKind::HasAssociatedSourceReference;
    if (s == "memberOf") return LinkKind::MemberOf;
    fail(ErrorCode::InvalidArgument, "unknown link kind '" + std::string(s) + "'");
}

enum class Transformation { Enrichment, Structuring, Modelling, Lifting, Translation };

inline std::string_view to_string(Transformation t) noexcept {
    switch (t) {
        case Transformation::Enrichment: return "enrichment";
        case Transformation::Structuring: return "structuring";
        case Transformation::Modelling: return "modelling";
        case Transformation::Lifting: return "lifting";
        case Transformation::Translation: return "translation";
    }
    return "enrichment";
}

inline Transformation parse_transformation(std::string_view s) {
    if (s == "enrichment") return Transformation::Enrichment;
    if (s == "structuring") return Transformation::Structuring;
    if (s == "modelling") return Transformation::Modelling;
    if (s == "lifting") return Transformation::Lifting;
    if (s == "translation") return Transformation::Translation;
    fail(ErrorCode::InvalidArgument, "unknown transformation '" + std::string(s) + "'");
}

// For memberOf the edge runs from the compound to the member it contains.
struct DerivationLink {
    std::string id;
    Gupri from;
    Gupri to;
    LinkKind kind = LinkKind::DerivedFrom;
    std::optional<Transformation> transformation;
    bool operator==(const DerivationLink&) const = default;
};

inline std::string link_id(const Gupri& from, const Gupri& to, LinkKind kind, std::optional<Transformation> t) {
    return "urn:semladder:link:" +
           digest_hex(payload(from.value, to.value, std::string(to_string(kind)),
                              t ? std::string(to_string(*t)) : std::string()));
}

}  // namespace semladder
