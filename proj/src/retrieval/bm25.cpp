#include <resat/retrieval/bm25.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace resat::retrieval {

EmptyCorpus::EmptyCorpus()
    : std::invalid_argument("BM25 index needs at least one document")
{
}

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_lower(c) || is_upper(c) || is_digit(c) || static_cast<unsigned char>(c) >= 0x80; }

char lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

void split_word(std::string_view word, std::vector<std::string>& out)
{
    std::string current;
    for (std::size_t i = 0; i < word.size(); ++i) {
        char c = word[i];
        if (is_upper(c) && i > 0) {
            char prev = word[i - 1];
            bool next_lower = i + 1 < word.size() && is_lower(word[i + 1]);
            bool boundary = is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower);
            if (boundary && !current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
        }
        current += lower(c);
    }
    if (!current.empty())
        out.push_back(std::move(current));
}

}  // namespace

std::vector<std::string> tokenize_code(std::string_view text)
{
    std::vector<std::string> terms;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_word(text[i]))
            ++i;
        split_word(text.substr(start, i - start), terms);
    }
    return terms;
}

Bm25Index::Bm25Index(const std::map<std::string, std::string>& docs, Bm25Params params)
    : params_(params)
{
    if (docs.empty())
        throw EmptyCorpus();
    std::size_t total = 0;
    for (const auto& [path, content] : docs) {
        const std::size_t doc = doc_ids_.size();
        doc_ids_.push_back(path);
        auto terms = tokenize_code(content);
        doc_len_.push_back(terms.size());
        total += terms.size();
        std::map<std::string, std::size_t> counts;
        for (auto& t : terms)
            ++counts[t];
        for (auto& [term, count] : counts)
            postings_[term].push_back({doc, count});
    }
    avg_len_ = static_cast<double>(total) / static_cast<double>(doc_ids_.size());
}

std::size_t Bm25Index::df(const std::string& term) const
{
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

std::size_t Bm25Index::tf(const std::string& term, std::size_t doc) const
{
    auto it = postings_.find(term);
    if (it == postings_.end())
        return 0;
    for (const auto& p : it->second) {
        if (p.doc == doc)
            return p.count;
    }
    return 0;
}

double Bm25Index::idf(const std::string& term) const
{
    const double n = static_cast<double>(doc_ids_.size());
    const double d = static_cast<double>(df(term));
    return std::log((n - d + 0.5) / (d + 0.5) + 1.0);
}

std::vector<ScoredDoc> Bm25Index::query_top_k(std::string_view query, std::size_t k) const
{
    std::vector<double> scores(doc_ids_.size(), 0.0);
    std::vector<bool> touched(doc_ids_.size(), false);
    // Each occurrence of a term in the query contributes once.
    for (const auto& term : tokenize_code(query)) {
        auto it = postings_.find(term);
        if (it == postings_.end())
            continue;
        const double w = idf(term);
        for (const auto& p : it->second) {
            const double tf = static_cast<double>(p.count);
            const double norm = params_.k1
                                * (1.0 - params_.b
                                   + params_.b * static_cast<double>(doc_len_[p.doc]) / avg_len_);
            scores[p.doc] += w * tf * (params_.k1 + 1.0) / (tf + norm);
            touched[p.doc] = true;
        }
    }
    std::vector<ScoredDoc> ranked;
    for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
        if (touched[d] && scores[d] > 0.0)
            ranked.push_back({doc_ids_[d], scores[d]});
    }
    std::sort(ranked.begin(), ranked.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.path < b.path;
    });
    if (ranked.size() > k)
        ranked.resize(k);
    return ranked;
}

}  // namespace resat::retrieval
