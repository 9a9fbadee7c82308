#include <resat/editfmt/line_diff.hpp>

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace resat::editfmt {

namespace {

// Interns lines so the inner loop compares integers.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
intern(std::span<const std::string> a, std::span<const std::string> b)
{
    std::unordered_map<std::string_view, std::uint32_t> ids;
    auto encode = [&](std::span<const std::string> lines) {
        std::vector<std::uint32_t> out;
        out.reserve(lines.size());
        for (const auto& line : lines) {
            auto [it, _] = ids.try_emplace(line, static_cast<std::uint32_t>(ids.size()));
            out.push_back(it->second);
        }
        return out;
    };
    auto ea = encode(a);
    auto eb = encode(b);
    return {std::move(ea), std::move(eb)};
}

enum class Step { Equal, Delete, Insert };

// Myers forward pass with per-d snapshots of the furthest-reaching x, then a
// backtrack to recover the path.
std::vector<Step> myers(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b)
{
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    const auto m = static_cast<std::ptrdiff_t>(b.size());
    const std::ptrdiff_t max = n + m;
    const std::ptrdiff_t offset = max + 1;
    std::vector<std::ptrdiff_t> v(static_cast<std::size_t>(2 * max + 3), 0);
    // trace[d] holds v[-d..d] as it stood before round d.
    std::vector<std::vector<std::int32_t>> trace;

    std::ptrdiff_t found_d = -1;
    for (std::ptrdiff_t d = 0; d <= max; ++d) {
        trace.emplace_back(v.begin() + (offset - d), v.begin() + (offset + d + 1));
        for (std::ptrdiff_t k = -d; k <= d; k += 2) {
            std::ptrdiff_t x;
            if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
                x = v[offset + k + 1];
            else
                x = v[offset + k - 1] + 1;
            std::ptrdiff_t y = x - k;
            while (x < n && y < m && a[x] == b[y]) {
                ++x;
                ++y;
            }
            v[offset + k] = x;
            if (x >= n && y >= m) {
                found_d = d;
                break;
            }
        }
        if (found_d >= 0)
            break;
    }

    std::vector<Step> steps;
    std::ptrdiff_t x = n;
    std::ptrdiff_t y = m;
    for (std::ptrdiff_t d = found_d; d > 0; --d) {
        const auto& pv = trace[static_cast<std::size_t>(d)];
        auto at = [&](std::ptrdiff_t kk) { return static_cast<std::ptrdiff_t>(pv[kk + d]); };
        std::ptrdiff_t k = x - y;
        std::ptrdiff_t prev_k;
        if (k == -d || (k != d && at(k - 1) < at(k + 1)))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        std::ptrdiff_t prev_x = at(prev_k);
        std::ptrdiff_t prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            steps.push_back(Step::Equal);
            --x;
            --y;
        }
        steps.push_back(x == prev_x ? Step::Insert : Step::Delete);
        x = prev_x;
        y = prev_y;
    }
    while (x > 0 && y > 0) {
        steps.push_back(Step::Equal);
        --x;
        --y;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

}  // namespace

std::vector<ChangeRegion> diff_lines(std::span<const std::string> before,
                                     std::span<const std::string> after)
{
    std::size_t prefix = 0;
    while (prefix < before.size() && prefix < after.size() && before[prefix] == after[prefix])
        ++prefix;
    std::size_t suffix = 0;
    while (suffix < before.size() - prefix && suffix < after.size() - prefix
           && before[before.size() - 1 - suffix] == after[after.size() - 1 - suffix])
        ++suffix;

    auto mid_a = before.subspan(prefix, before.size() - prefix - suffix);
    auto mid_b = after.subspan(prefix, after.size() - prefix - suffix);

    std::vector<ChangeRegion> regions;
    if (mid_a.empty() && mid_b.empty())
        return regions;

    auto [ea, eb] = intern(mid_a, mid_b);
    auto steps = myers(ea, eb);

    std::size_t x = prefix;
    std::size_t y = prefix;
    bool open = false;
    ChangeRegion current;
    for (Step step : steps) {
        if (step == Step::Equal) {
            if (open) {
                current.old_end = x;
                current.new_end = y;
                regions.push_back(current);
                open = false;
            }
            ++x;
            ++y;
            continue;
        }
        if (!open) {
            current = ChangeRegion{x, x, y, y};
            open = true;
        }
        if (step == Step::Delete)
            ++x;
        else
            ++y;
    }
    if (open) {
        current.old_end = x;
        current.new_end = y;
        regions.push_back(current);
    }
    return regions;
}

}  // namespace resat::editfmt
