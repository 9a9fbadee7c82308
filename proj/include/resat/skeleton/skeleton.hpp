#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resat::skeleton {

enum class DeclKind { Class, Function, Method };

std::string_view to_string(DeclKind kind);

struct Declaration {
    DeclKind kind = DeclKind::Function;
    std::string name;
    /// Dot-joined names of enclosing classes and functions, e.g. `A.m`.
    std::string qualified_name;
    /// Source from the `def`/`class` keyword through the header colon, with
    /// the original indentation of the first line. Decorators are not included.
    std::string signature_text;
    /// Leading whitespace of the header line.
    std::string indent;
    int start_line = 0;
    int end_line = 0;
    /// Header colon line; equals start_line for single-line headers.
    int header_end_line = 0;

    bool operator==(const Declaration&) const = default;
};

struct FileSkeleton {
    std::string path;
    std::vector<Declaration> declarations;
    int line_count = 0;
};

/// Label used when a line lies outside every declaration.
inline constexpr std::string_view kModuleLevel = "<module-level>";

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::string path, int line, const std::string& reason);
    std::string path;
    int line;
};

/// Every class and function (at any nesting depth) in document order, with
/// exact 1-based spans. The span runs from the keyword line to the last line
/// of the last statement of the body; trailing comments and blank lines are
/// not part of it. Throws SyntaxError for unbalanced brackets, unterminated
/// strings and inconsistent indentation.
std::vector<Declaration> parse_declarations(std::string_view source);

FileSkeleton parse_file(std::string path, std::string_view source);

/// `### <path>` followed by each declaration header at its original
/// indentation. Leaf declarations get one `...` line; declarations with nested
/// declarations get none.
std::string render_skeleton(const FileSkeleton& skeleton);

/// Qualified name of the innermost declaration containing `line`, or
/// kModuleLevel.
std::string enclosing_declaration(const FileSkeleton& skeleton, int line);

/// Innermost containing declaration, or nullptr.
const Declaration* find_enclosing(const FileSkeleton& skeleton, int line);

const Declaration* find_by_name(const FileSkeleton& skeleton, std::string_view qualified_name);

}  // namespace resat::skeleton
