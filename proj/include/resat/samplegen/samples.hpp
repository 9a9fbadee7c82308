#pragma once

#include <resat/diffmap/gold.hpp>
#include <resat/samplegen/task.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace resat::samplegen {

enum class SampleKind { FileLoc = 0, FuncLoc = 1, LineLoc = 2, CodeEdit = 3 };

std::string_view to_string(SampleKind kind);
SampleKind kind_from_string(std::string_view name);
inline constexpr SampleKind kAllKinds[] = {SampleKind::FileLoc, SampleKind::FuncLoc, SampleKind::LineLoc,
                                           SampleKind::CodeEdit};

struct SampleMeta {
    std::string repo;
    std::uint64_t pr_number = 0;
    std::vector<std::uint64_t> issue_numbers;
    std::size_t token_count = 0;
    std::vector<std::string> files;

    bool operator==(const SampleMeta&) const = default;
};

struct TrainingSample {
    SampleKind kind = SampleKind::FileLoc;
    std::string input_text;
    std::string output_text;
    SampleMeta meta;

    bool operator==(const TrainingSample&) const = default;
};

/// Either a sample or the reason it was not produced.
struct SampleResult {
    std::optional<TrainingSample> sample;
    std::string skip_reason;

    static SampleResult skip(std::string reason) { return {std::nullopt, std::move(reason)}; }
};

using TokenCounter = std::function<std::size_t(std::string_view)>;

/// Each run of word characters ([A-Za-z0-9_] and bytes >= 0x80) is one token;
/// every other non-whitespace byte is one token.
std::size_t count_tokens(std::string_view text);

// -- answer formats ---------------------------------------------------------

/// One path per line, sorted.
std::string format_file_answer(const std::set<std::string>& files);
/// `path: qualified_name` per line, sorted; module-level entries use
/// `<module-level>`.
std::string format_function_answer(const std::set<diffmap::FunctionRef>& functions);
/// `path: name: lines [a, b]` per function, grouped by file, sorted; each
/// line is listed under the function that encloses it.
std::string format_line_answer(const std::set<diffmap::FunctionRef>& functions,
                               const std::set<diffmap::LineRef>& lines,
                               const std::map<std::string, skeleton::FileSkeleton>& skeletons);

std::vector<std::string> parse_file_answer(std::string_view text);
std::set<diffmap::FunctionRef> parse_function_answer(std::string_view text);
/// Functions and lines from a line-localization answer. Lines without a
/// function (`path: lines [..]`) are accepted too.
std::pair<std::set<diffmap::FunctionRef>, std::set<diffmap::LineRef>> parse_line_answer(std::string_view text);

// -- numbered snippets --------------------------------------------------------

struct LineRange {
    int start = 0;  // inclusive, 1-based
    int end = 0;    // inclusive

    bool operator==(const LineRange&) const = default;
};

using RegionMap = std::map<std::string, std::vector<LineRange>>;

/// `### path` per file, then each merged region with every line prefixed by
/// `<line>|`; a `...` line separates non-adjacent regions.
std::string render_numbered(const editfmt::FileMap& files, const RegionMap& regions);

/// The source lines shown for each gold function: the declaration span, or
/// a window of `module_context` lines around module-level gold lines.
RegionMap gold_function_regions(const PreparedTask& task, int module_context = 3);

/// Unmodified functions and methods from the gold files, drawn
/// deterministically from (seed, repo, PR number). Never overlaps a gold region.
std::vector<std::pair<std::string, skeleton::Declaration>> select_distractors(const PreparedTask& task,
                                                                                std::size_t count,
                                                                                std::uint64_t seed);

// -- sample builders ----------------------------------------------------------

struct SampleOptions {
    std::size_t distractor_count = 2;
    std::uint64_t seed = 0;
    TokenCounter counter = count_tokens;
};

SampleResult make_file_loc_sample(const PreparedTask& task, const SampleOptions& options = {});
SampleResult make_func_loc_sample(const PreparedTask& task, const SampleOptions& options = {});
SampleResult make_line_loc_sample(const PreparedTask& task, const SampleOptions& options = {});
SampleResult make_code_edit_sample(const PreparedTask& task, const SampleOptions& options = {});

/// All four kinds, in kind order.
std::vector<SampleResult> make_samples(const PreparedTask& task, const SampleOptions& options = {});

/// Drop reason when counter(input + output) exceeds the budget.
std::optional<std::string> token_filter(const TrainingSample& sample, std::size_t budget,
                                        const TokenCounter& counter = count_tokens);

// -- JSONL --------------------------------------------------------------------

/// Orders by (repo, pr_number, kind).
void sort_samples(std::vector<TrainingSample>& samples);

/// {"kind","input","output","meta"} on one line, no trailing newline.
std::string to_jsonl_line(const TrainingSample& sample);
TrainingSample from_jsonl_line(std::string_view line);

/// Sorts and writes one object per line. Returns the number written.
std::size_t emit_jsonl(std::vector<TrainingSample> samples, const std::filesystem::path& out_path);

std::vector<TrainingSample> read_jsonl(const std::filesystem::path& path);

}  // namespace resat::samplegen
