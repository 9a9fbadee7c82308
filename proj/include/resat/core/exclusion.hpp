#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace resat {

/// Which repository paths count as analyzable source. Shared by the tree
/// builder, the gold-label extractor and the retrieval corpus so that all three
/// agree on what a "test script" is.
struct ExclusionRules {
    std::set<std::string> test_path_components{"test", "tests", "testing"};
    std::vector<std::string> test_basename_globs{"test_*.py", "*_test.py", "conftest.py"};
    std::string allowed_extension = ".py";
    bool exclude_hidden = true;

    static const ExclusionRules& defaults();

    bool is_test_script(std::string_view path) const;
    bool has_hidden_component(std::string_view path) const;
    /// True when the path is a non-hidden, non-test file with the allowed extension.
    bool is_analyzable(std::string_view path) const;
};

/// fnmatch-style matching with `*` and `?`.
bool glob_match(std::string_view pattern, std::string_view name);

}  // namespace resat
