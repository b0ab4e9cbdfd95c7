#pragma once
// Vector sidecar. Embeddings hang off units for similarity retrieval; they
// are not a ladder level and never create derivation links.

#include "semladder/core.hpp"
#include "semladder/digest.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace semladder {

// Lowercased maximal runs of word characters.
inline std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && !text::is_word_char(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && text::is_word_char(s[i])) ++i;
        if (i > start) out.push_back(text::lower(s.substr(start, i - start)));
    }
    return out;
}

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::string id() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

// Hashed bag of words: FNV-1a bucket per token, counts, L2-normalized.
// Tokens are accumulated in text order so results are bit-stable.
class HashedBagOfWords final : public Embedder {
public:
    explicit HashedBagOfWords(std::size_t dimension = 256) : dim_(dimension) {
        if (dim_ == 0) fail(ErrorCode::InvalidArgument, "embedding dimension must be positive");
    }

    std::string id() const override { return "hashed-bow-fnv1a64-" + std::to_string(dim_); }
    std::size_t dimension() const override { return dim_; }

    std::size_t bucket(std::string_view token) const { return static_cast<std::size_t>(fnv1a64(token) % dim_); }

    std::vector<double> embed(std::string_view s) const override {
        std::vector<double> v(dim_, 0.0);
        for (const auto& tok : word_tokens(s)) v[bucket(tok)] += 1.0;
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& x : v) x /= norm;
        }
        return v;
    }

private:
    std::size_t dim_;
};

struct EmbeddingRecord {
    Gupri gupri;
    std::vector<double> vector;
    std::string embedder_id;
    std::string source_text;
    bool zero = false;  // source text produced no tokens
    bool operator==(const EmbeddingRecord&) const = default;
};

inline EmbeddingRecord embed_text(const Gupri& gupri, std::string source_text, const Embedder& embedder) {
    EmbeddingRecord r{gupri, embedder.embed(source_text), embedder.id(), std::move(source_text), false};
    r.zero = std::all_of(r.vector.begin(), r.vector.end(), [](double x) { return x == 0.0; });
    return r;
}

// Cosine similarity clamped to [-1, 1]; 0 when either vector is zero.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "vector lengths differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

struct ScoredUnit {
    Gupri gupri;
    double score = 0.0;
    bool operator==(const ScoredUnit&) const = default;
};

// Descending score, ties by GUPRI ascending.
inline std::vector<ScoredUnit> top_k(std::span<const double> query, const std::vector<const EmbeddingRecord*>& corpus,
                                     std::size_t k) {
    if (k == 0) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    std::vector<ScoredUnit> scored;
    scored.reserve(corpus.size());
    for (const auto* r : corpus) scored.push_back({r->gupri, cosine(query, r->vector)});
    auto better = [](const ScoredUnit& a, const ScoredUnit& b) {
        return a.score != b.score ? a.score > b.score : a.gupri < b.gupri;
    };
    if (scored.size() > k) {
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
        scored.resize(k);
    } else {
        std::sort(scored.begin(), scored.end(), better);
    }
    return scored;
}

}  // namespace semladder
