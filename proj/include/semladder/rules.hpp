#pragma once
// Safe, function-free Horn rules over triples and a semi-naive forward
// chainer. Safety (every head variable bound in the body) means no new
// terms are invented, so saturation always terminates.
//
// Rule file syntax, one rule per line:
//   ruleset <id>
//   rule: (?x ex:ancestor ?z) <- (?x ex:parent ?y), (?y ex:ancestor ?z)

#include "semladder/core.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace semladder {

struct Var {
    std::string name;
    auto operator<=>(const Var&) const = default;
};

using Term = std::variant<Var, Iri, Literal>;

struct TriplePattern {
    Term subject;
    Term predicate;
    Term object;
    auto operator<=>(const TriplePattern&) const = default;
};

struct Rule {
    TriplePattern head;
    std::vector<TriplePattern> body;
    bool operator==(const Rule&) const = default;
};

struct Ruleset {
    std::string id;
    std::vector<Rule> rules;
    bool operator==(const Ruleset&) const = default;
};

namespace detail {

inline void collect_vars(const TriplePattern& p, std::set<std::string>& out) {
    for (const Term* t : {&p.subject, &p.predicate, &p.object})
        if (const auto* v = std::get_if<Var>(t)) out.insert(v->name);
}

inline std::string term_text(const Term& t) {
    if (const auto* v = std::get_if<Var>(&t)) return "?" + v->name;
    if (const auto* i = std::get_if<Iri>(&t)) return i->value;
    const auto& l = std::get<Literal>(t);
    return l.datatype == Datatype::Decimal ? l.lexical : "\"" + l.lexical + "\"";
}

}  // namespace detail

inline std::string to_string(const TriplePattern& p) {
    return "(" + detail::term_text(p.subject) + " " + detail::term_text(p.predicate) + " " +
           detail::term_text(p.object) + ")";
}

inline std::string to_string(const Rule& r) {
    std::string out = "rule: " + to_string(r.head) + " <-";
    for (std::size_t i = 0; i < r.body.size(); ++i) out += (i ? ", " : " ") + to_string(r.body[i]);
    return out;
}

inline void check_rule(const Rule& r) {
    if (r.body.empty()) fail(ErrorCode::InvalidRule, "rule without body: " + to_string(r));
    std::set<std::string> body_vars;
    std::set<std::string> head_vars;
    for (const auto& b : r.body) detail::collect_vars(b, body_vars);
    detail::collect_vars(r.head, head_vars);
    for (const auto& v : head_vars)
        if (!body_vars.count(v)) fail(ErrorCode::InvalidRule, "head variable ?" + v + " is not bound by the body");
    auto literal_position = [](const TriplePattern& p) {
        return std::holds_alternative<Literal>(p.subject) || std::holds_alternative<Literal>(p.predicate);
    };
    if (literal_position(r.head)) fail(ErrorCode::InvalidRule, "literal in subject or predicate of head");
    for (const auto& b : r.body)
        if (literal_position(b)) fail(ErrorCode::InvalidRule, "literal in subject or predicate of body atom");
}

namespace detail {

class RuleParser {
public:
    RuleParser(std::string_view src, std::string where) : src_(src), where_(std::move(where)) {}

    Rule parse() {
        skip_ws();
        expect("rule:");
        Rule r;
        r.head = pattern();
        skip_ws();
        expect("<-");
        r.body.push_back(pattern());
        skip_ws();
        while (pos_ < src_.size() && src_[pos_] == ',') {
            ++pos_;
            r.body.push_back(pattern());
            skip_ws();
        }
        if (pos_ != src_.size()) error("unexpected '" + std::string(src_.substr(pos_)) + "'");
        return r;
    }

    TriplePattern parse_pattern() {
        TriplePattern p = pattern();
        skip_ws();
        if (pos_ != src_.size()) error("unexpected '" + std::string(src_.substr(pos_)) + "'");
        return p;
    }

private:
    [[noreturn]] void error(const std::string& msg) const { fail(ErrorCode::ParseError, where_ + msg); }

    void skip_ws() {
        while (pos_ < src_.size() && text::is_space(src_[pos_])) ++pos_;
    }

    void expect(std::string_view token) {
        if (src_.substr(pos_, token.size()) != token) error("expected '" + std::string(token) + "'");
        pos_ += token.size();
    }

    TriplePattern pattern() {
        skip_ws();
        expect("(");
        Term s = term();
        Term p = term();
        Term o = term();
        skip_ws();
        expect(")");
        return {std::move(s), std::move(p), std::move(o)};
    }

    Term term() {
        skip_ws();
        if (pos_ >= src_.size()) error("unexpected end of rule");
        if (src_[pos_] == '"') {
            std::size_t end = src_.find('"', pos_ + 1);
            if (end == std::string_view::npos) error("unterminated literal");
            Literal lit{std::string(src_.substr(pos_ + 1, end - pos_ - 1)), Datatype::Text};
            pos_ = end + 1;
            return lit;
        }
        std::size_t start = pos_;
        while (pos_ < src_.size() && !text::is_space(src_[pos_]) && src_[pos_] != ')' && src_[pos_] != '(' &&
               src_[pos_] != ',')
            ++pos_;
        auto tok = src_.substr(start, pos_ - start);
        if (tok.empty()) error("expected a term");
        if (tok[0] == '?') {
            if (tok.size() == 1) error("variable without a name");
            return Var{std::string(tok.substr(1))};
        }
        if (is_decimal(tok)) return Literal{std::string(tok), Datatype::Decimal};
        return Iri{std::string(tok)};
    }

    std::string_view src_;
    std::string where_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Rule parse_rule(std::string_view line) {
    Rule r = detail::RuleParser(line, "").parse();
    check_rule(r);
    return r;
}

// `default_id` names the ruleset when the file has no `ruleset` line.
inline Ruleset parse_rules(std::string_view content, std::string default_id) {
    Ruleset rs{std::move(default_id), {}};
    std::size_t lineno = 0;
    for (auto line : text::split(content, '\n')) {
        ++lineno;
        auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto where = "line " + std::to_string(lineno) + ": ";
        if (text::starts_with(trimmed, "ruleset")) {
            auto words = text::split_ws(trimmed);
            if (words.size() != 2 || words[0] != "ruleset") fail(ErrorCode::ParseError, where + "expected 'ruleset <id>'");
            rs.id = words[1];
            continue;
        }
        Rule r = detail::RuleParser(trimmed, where).parse();
        try {
            check_rule(r);
        } catch (const Error& e) {
            fail(e.code(), where + e.what());
        }
        rs.rules.push_back(std::move(r));
    }
    if (rs.id.empty()) fail(ErrorCode::ParseError, "ruleset has no id");
    return rs;
}

namespace detail {

using Substitution = std::map<std::string, Node>;

inline bool unify(const Term& t, const Node& value, Substitution& sub) {
    if (const auto* v = std::get_if<Var>(&t)) {
        auto [it, inserted] = sub.emplace(v->name, value);
        return inserted || it->second == value;
    }
    if (const auto* i = std::get_if<Iri>(&t)) return is_iri(value) && std::get<Iri>(value) == *i;
    return !is_iri(value) && std::get<Literal>(value) == std::get<Literal>(t);
}

inline bool match(const TriplePattern& p, const Triple& t, Substitution& sub) {
    Substitution trial = sub;
    if (!unify(p.subject, t.subject, trial) || !unify(p.predicate, t.predicate, trial) ||
        !unify(p.object, t.object, trial))
        return false;
    sub = std::move(trial);
    return true;
}

inline std::optional<Node> resolve(const Term& t, const Substitution& sub) {
    if (const auto* v = std::get_if<Var>(&t)) {
        auto it = sub.find(v->name);
        if (it == sub.end()) return std::nullopt;
        return it->second;
    }
    if (const auto* i = std::get_if<Iri>(&t)) return Node{*i};
    return Node{std::get<Literal>(t)};
}

// Ground head; nullopt when a literal would land in subject/predicate.
inline std::optional<Triple> instantiate_head(const TriplePattern& head, const Substitution& sub) {
    auto s = resolve(head.subject, sub);
    auto p = resolve(head.predicate, sub);
    auto o = resolve(head.object, sub);
    if (!s || !p || !o || !is_iri(*s) || !is_iri(*p)) return std::nullopt;
    return Triple{std::get<Iri>(*s), std::get<Iri>(*p), *o};
}

}  // namespace detail

// Saturates `base` under `rules` and returns only the triples not already
// in `base`. Each round joins at least one atom against the previous
// round's delta.
inline GraphContent forward_chain(const GraphContent& base, const std::vector<Rule>& rules) {
    for (const auto& r : rules) check_rule(r);
    GraphContent all = base;
    GraphContent delta = base;
    GraphContent inferred;
    while (!delta.empty()) {
        GraphContent fresh;
        for (const auto& rule : rules) {
            const auto& body = rule.body;
            for (std::size_t pivot = 0; pivot < body.size(); ++pivot) {
                std::function<void(std::size_t, detail::Substitution&)> join = [&](std::size_t j,
                                                                                  detail::Substitution& sub) {
                    if (j == body.size()) {
                        if (auto t = detail::instantiate_head(rule.head, sub); t && !all.count(*t)) fresh.insert(*t);
                        return;
                    }
                    const GraphContent& source = j == pivot ? delta : all;
                    for (const auto& t : source) {
                        detail::Substitution next = sub;
                        if (detail::match(body[j], t, next)) join(j + 1, next);
                    }
                };
                detail::Substitution empty;
                join(0, empty);
            }
        }
        for (const auto& t : fresh) {
            all.insert(t);
            inferred.insert(t);
        }
        delta = std::move(fresh);
    }
    return inferred;
}

}  // namespace semladder
