#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace resat::retrieval {

/// Splits on non-alphanumeric characters, then at camelCase and acronym
/// boundaries ("HTTPServer" -> http, server), and lowercases. Digits stay
/// attached to the preceding letters ("v2"). Bytes >= 0x80 count as letters so
/// UTF-8 words are kept whole.
std::vector<std::string> tokenize_code(std::string_view text);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

class EmptyCorpus : public std::invalid_argument {
public:
    EmptyCorpus();
};

struct ScoredDoc {
    std::string path;
    double score = 0.0;
};

/// Okapi BM25 over whole files. Immutable after construction; queries are
/// safe from any thread.
class Bm25Index {
public:
    Bm25Index(const std::map<std::string, std::string>& docs, Bm25Params params = {});

    std::size_t size() const { return doc_ids_.size(); }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    std::size_t doc_len(std::size_t doc) const { return doc_len_[doc]; }
    double avg_len() const { return avg_len_; }
    std::size_t df(const std::string& term) const;
    std::size_t tf(const std::string& term, std::size_t doc) const;
    const Bm25Params& params() const { return params_; }

    double idf(const std::string& term) const;

    /// Descending score, ties by path; zero-score documents are dropped.
    std::vector<ScoredDoc> query_top_k(std::string_view query, std::size_t k = 3) const;

private:
    struct Posting {
        std::size_t doc;
        std::size_t count;
    };

    Bm25Params params_;
    std::vector<std::string> doc_ids_;
    std::vector<std::size_t> doc_len_;
    double avg_len_ = 0.0;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
};

inline Bm25Index build_index(const std::map<std::string, std::string>& docs, Bm25Params params = {})
{
    return Bm25Index(docs, params);
}

}  // namespace resat::retrieval
