#pragma once
// Independent reference computations shared by unit and acceptance tests.

#include <resat/core/text.hpp>
#include <resat/editfmt/search_replace.hpp>
#include <resat/ingest/client.hpp>
#include <resat/retrieval/bm25.hpp>
#include <resat/skeleton/skeleton.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace resat::testing {

inline std::filesystem::path source_dir()
{
    return RESAT_SOURCE_DIR;
}

inline std::filesystem::path fixtures_dir()
{
    return source_dir() / "tests" / "fixtures";
}

inline std::filesystem::path corpus_dir()
{
    return fixtures_dir() / "corpus";
}

// -- skeleton spans -----------------------------------------------------------

struct SpanMismatch {
    std::string file;
    std::string detail;
};

/// Compares parse_declarations against the frozen CPython-derived spans.
/// `files_checked` receives the number of files compared.
inline std::vector<SpanMismatch> compare_skeleton_oracle(std::size_t& files_checked,
                                                         std::size_t& decls_checked)
{
    auto golden = nlohmann::json::parse(
        ingest::read_file(source_dir() / "tests" / "golden" / "skeleton_spans.json"));
    std::vector<SpanMismatch> out;
    files_checked = decls_checked = 0;
    for (const auto& [rel, expected] : golden.items()) {
        ++files_checked;
        auto source = ingest::read_file(fixtures_dir() / rel);
        if (expected.is_object()) {
            try {
                skeleton::parse_declarations(source);
                out.push_back({rel, "reference parser rejects the file, ours accepted it"});
            } catch (const skeleton::SyntaxError&) {
            }
            continue;
        }
        std::vector<skeleton::Declaration> got;
        try {
            got = skeleton::parse_declarations(source);
        } catch (const skeleton::SyntaxError& e) {
            out.push_back({rel, std::string("unexpected syntax error: ") + e.what()});
            continue;
        }
        if (got.size() != expected.size()) {
            out.push_back({rel, "declaration count " + std::to_string(got.size()) + " vs "
                                    + std::to_string(expected.size())});
            continue;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            ++decls_checked;
            const auto& e = expected[i];
            const auto& g = got[i];
            auto want = e["kind"].get<std::string>() + " " + e["qualified_name"].get<std::string>() + " "
                        + std::to_string(e["start_line"].get<int>()) + "-" + std::to_string(e["end_line"].get<int>())
                        + " header " + std::to_string(e["header_end_line"].get<int>());
            auto have = std::string(skeleton::to_string(g.kind)) + " " + g.qualified_name + " "
                        + std::to_string(g.start_line) + "-" + std::to_string(g.end_line) + " header "
                        + std::to_string(g.header_end_line);
            if (want != have)
                out.push_back({rel, "expected " + want + ", got " + have});
        }
    }
    return out;
}

// -- BM25 -----------------------------------------------------------------------

/// Direct evaluation of the Okapi formula from raw token lists, with no shared
/// code beyond the tokenizer.
inline std::vector<retrieval::ScoredDoc> bm25_brute_force(const std::map<std::string, std::string>& docs,
                                                          const std::string& query, std::size_t k,
                                                          retrieval::Bm25Params p = {})
{
    std::vector<std::pair<std::string, std::vector<std::string>>> toks;
    double total = 0;
    for (const auto& [id, text] : docs) {
        toks.emplace_back(id, retrieval::tokenize_code(text));
        total += static_cast<double>(toks.back().second.size());
    }
    const double n = static_cast<double>(toks.size());
    const double avg = total / n;
    std::vector<retrieval::ScoredDoc> scored;
    const auto q = retrieval::tokenize_code(query);
    for (const auto& [id, words] : toks) {
        double score = 0;
        for (const auto& term : q) {
            double df = 0;
            for (const auto& other : toks)
                df += std::count(other.second.begin(), other.second.end(), term) > 0 ? 1 : 0;
            double tf = static_cast<double>(std::count(words.begin(), words.end(), term));
            if (tf == 0)
                continue;
            double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
            double len = static_cast<double>(words.size());
            score += idf * tf * (p.k1 + 1) / (tf + p.k1 * (1 - p.b + p.b * len / avg));
        }
        if (score > 0)
            scored.push_back({id, score});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.path < b.path;
    });
    if (scored.size() > k)
        scored.resize(k);
    return scored;
}

// -- random edit pairs ------------------------------------------------------------

/// A random non-empty file and a random line-level edit of it. Lines are drawn
/// from a small alphabet so repeats (and hence ambiguity) are common; marker
/// lines of the edit grammar never occur. The last line lacks '\n' with some
/// probability on either side.
inline std::pair<std::string, std::string> random_edit_pair(std::mt19937_64& rng)
{
    static const char* alphabet[] = {"a",      "b",         "c",  "    pass", "",  "x = 1", "def f():",
                                      "    return x", "}", "  ", "\t#", "é"};
    constexpr std::size_t kAlpha = sizeof(alphabet) / sizeof(alphabet[0]);
    auto line = [&] { return std::string(alphabet[rng() % kAlpha]); };

    std::vector<std::string> before(1 + rng() % 40);
    for (auto& l : before)
        l = line();
    std::vector<std::string> after;
    for (const auto& l : before) {
        switch (rng() % 8) {
        case 0:
            break;  // delete
        case 1:
            after.push_back(line());  // replace
            break;
        case 2:
            after.push_back(line());  // insert before
            after.push_back(l);
            break;
        default:
            after.push_back(l);
        }
    }
    if (rng() % 6 == 0)
        after.push_back(line());
    auto join = [&](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& l : v)
            s += l + "\n";
        if (!s.empty() && rng() % 5 == 0)
            s.pop_back();
        return s;
    };
    auto b = join(before);
    if (b.empty())
        b = "seed\n";
    return {b, join(after)};
}

}  // namespace resat::testing
