#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace resat::editfmt {

/// A maximal region where the two line sequences differ. Half-open ranges;
/// one side may be empty (pure insertion or pure deletion).
struct ChangeRegion {
    std::size_t old_begin = 0;
    std::size_t old_end = 0;
    std::size_t new_begin = 0;
    std::size_t new_end = 0;

    std::size_t old_len() const { return old_end - old_begin; }
    std::size_t new_len() const { return new_end - new_begin; }
    bool operator==(const ChangeRegion&) const = default;
};

/// Shortest edit script between two line sequences (Myers' O(ND) algorithm),
/// so the unchanged lines form a longest common subsequence. Regions are in
/// ascending order and never touch each other.
std::vector<ChangeRegion> diff_lines(std::span<const std::string> before,
                                     std::span<const std::string> after);

}  // namespace resat::editfmt
