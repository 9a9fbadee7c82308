#include <resat/skeleton/skeleton.hpp>

#include <resat/core/text.hpp>

#include <algorithm>
#include <optional>

namespace resat::skeleton {

std::string_view to_string(DeclKind kind)
{
    switch (kind) {
    case DeclKind::Class:
        return "class";
    case DeclKind::Function:
        return "function";
    case DeclKind::Method:
        return "method";
    }
    return "function";
}

SyntaxError::SyntaxError(std::string path_, int line_, const std::string& reason)
    : std::runtime_error((path_.empty() ? std::string("<source>") : path_) + ":"
                         + std::to_string(line_) + ": " + reason)
    , path(std::move(path_))
    , line(line_)
{
}

namespace {

// One logical line: a statement spanning one or more physical lines, with
// comments and blank lines already dropped.
struct LogicalLine {
    int first_line = 0;
    int last_line = 0;
    std::size_t begin = 0;  // offset of the first significant character
    std::size_t indent_width = 0;
    std::string indent;
    std::optional<std::size_t> first_colon;  // depth-0 ':' that is not ':='
    bool content_after_colon = false;
    bool ends_with_colon = false;
};

bool is_ident_char(char c)
{
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'
           || u >= 0x80;
}

bool is_string_prefix(std::string_view ident)
{
    if (ident.size() > 2)
        return false;
    std::string lower;
    for (char c : ident)
        lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    return lower == "r" || lower == "u" || lower == "b" || lower == "f" || lower == "br"
           || lower == "rb" || lower == "fr" || lower == "rf";
}

class Scanner {
public:
    explicit Scanner(std::string_view src)
        : src_(src)
    {
    }

    std::vector<LogicalLine> run()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                if (current_ && brackets_.empty())
                    finish();
                ++line_;
                ++pos_;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
                ++pos_;
                continue;
            }
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
                continue;
            }
            if (c == '\\') {
                if (peek(1) == '\n') {
                    pos_ += 2;
                    ++line_;
                    continue;
                }
                if (peek(1) == '\r' && peek(2) == '\n') {
                    pos_ += 3;
                    ++line_;
                    continue;
                }
                throw SyntaxError("", line_, "unexpected character after line continuation");
            }
            begin_if_needed();
            significant(c);
        }
        if (!brackets_.empty())
            throw SyntaxError("", open_line_.back(), "unclosed bracket");
        if (current_)
            finish();
        return std::move(lines_);
    }

private:
    char peek(std::size_t ahead) const
    {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void begin_if_needed()
    {
        if (current_)
            return;
        LogicalLine l;
        l.first_line = line_;
        l.begin = pos_;
        auto nl = pos_ == 0 ? std::string_view::npos : src_.rfind('\n', pos_ - 1);
        std::size_t line_start = nl == std::string_view::npos ? 0 : nl + 1;
        l.indent = std::string(src_.substr(line_start, pos_ - line_start));
        std::size_t width = 0;
        for (char ch : l.indent) {
            if (ch == '\t')
                width = (width / 8 + 1) * 8;
            else if (ch == '\f')
                width = 0;
            else if (ch != '\r')
                ++width;
        }
        l.indent_width = width;
        current_ = l;
    }

    void finish()
    {
        lines_.push_back(*current_);
        current_.reset();
    }

    void mark(bool is_colon)
    {
        current_->last_line = line_;
        if (current_->first_colon && !is_colon)
            current_->content_after_colon = true;
        current_->ends_with_colon = is_colon;
    }

    void significant(char c)
    {
        if (c == '"' || c == '\'') {
            scan_string(false);
            return;
        }
        if (is_ident_char(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && is_ident_char(src_[pos_]))
                ++pos_;
            mark(false);
            auto ident = src_.substr(start, pos_ - start);
            if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')
                && is_string_prefix(ident)) {
                bool raw = ident.find_first_of("rR") != std::string_view::npos;
                scan_string(raw);
            }
            return;
        }
        switch (c) {
        case '(':
        case '[':
        case '{':
            brackets_.push_back(c);
            open_line_.push_back(line_);
            break;
        case ')':
        case ']':
        case '}': {
            char want = c == ')' ? '(' : (c == ']' ? '[' : '{');
            if (brackets_.empty() || brackets_.back() != want)
                throw SyntaxError("", line_, std::string("unmatched '") + c + "'");
            brackets_.pop_back();
            open_line_.pop_back();
            break;
        }
        case ':':
            if (brackets_.empty() && peek(1) != '=') {
                if (!current_->first_colon) {
                    current_->first_colon = pos_;
                    current_->last_line = line_;
                    current_->ends_with_colon = true;
                } else {
                    mark(true);
                }
                ++pos_;
                return;
            }
            break;
        default:
            break;
        }
        mark(false);
        ++pos_;
    }

    void scan_string(bool raw)
    {
        (void)raw;  // a backslash escapes the quote in raw strings too
        const int start_line = line_;
        const char quote = src_[pos_];
        const bool triple = peek(1) == quote && peek(2) == quote;
        pos_ += triple ? 3 : 1;
        for (;;) {
            if (pos_ >= src_.size())
                throw SyntaxError("", start_line, "unterminated string literal");
            char c = src_[pos_];
            if (c == '\\') {
                if (peek(1) == '\n')
                    ++line_;
                pos_ += 2;
                continue;
            }
            if (c == '\n') {
                if (!triple)
                    throw SyntaxError("", start_line, "unterminated string literal");
                ++line_;
                ++pos_;
                continue;
            }
            if (c == quote) {
                if (!triple) {
                    ++pos_;
                    break;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    pos_ += 3;
                    break;
                }
            }
            ++pos_;
        }
        mark(false);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::vector<char> brackets_;
    std::vector<int> open_line_;
    std::optional<LogicalLine> current_;
    std::vector<LogicalLine> lines_;
};

struct Header {
    DeclKind kind;
    std::string name;
};

std::optional<Header> match_header(std::string_view src, std::size_t begin)
{
    auto rest = src.substr(begin);
    auto take_word = [](std::string_view& s) {
        std::size_t n = 0;
        while (n < s.size() && is_ident_char(s[n]))
            ++n;
        auto word = s.substr(0, n);
        s.remove_prefix(n);
        return word;
    };
    auto skip_space = [](std::string_view& s) {
        std::size_t n = 0;
        while (n < s.size() && (s[n] == ' ' || s[n] == '\t' || s[n] == '\f'))
            ++n;
        bool had = n > 0;
        s.remove_prefix(n);
        return had;
    };

    auto word = take_word(rest);
    if (word == "async") {
        if (!skip_space(rest))
            return std::nullopt;
        word = take_word(rest);
        if (word != "def")
            return std::nullopt;
    }
    if (word != "def" && word != "class")
        return std::nullopt;
    if (!skip_space(rest))
        return std::nullopt;
    auto name = take_word(rest);
    if (name.empty() || (name[0] >= '0' && name[0] <= '9'))
        return std::nullopt;
    return Header{word == "class" ? DeclKind::Class : DeclKind::Function, std::string(name)};
}

struct OpenDecl {
    std::size_t index;
    std::size_t indent_width;
};

}  // namespace

std::vector<Declaration> parse_declarations(std::string_view source)
{
    const auto lines = Scanner(source).run();

    std::vector<Declaration> decls;
    std::vector<OpenDecl> open;
    std::vector<std::size_t> indents{0};
    bool expect_block = false;
    int opener_line = 0;

    for (const auto& l : lines) {
        if (expect_block) {
            if (l.indent_width <= indents.back())
                throw SyntaxError("", l.first_line, "expected an indented block after line "
                                                        + std::to_string(opener_line));
            indents.push_back(l.indent_width);
        } else if (l.indent_width > indents.back()) {
            throw SyntaxError("", l.first_line, "unexpected indent");
        } else {
            while (l.indent_width < indents.back())
                indents.pop_back();
            if (l.indent_width != indents.back())
                throw SyntaxError("", l.first_line,
                                  "unindent does not match any outer indentation level");
        }

        while (!open.empty() && open.back().indent_width >= l.indent_width)
            open.pop_back();
        for (const auto& o : open)
            decls[o.index].end_line = std::max(decls[o.index].end_line, l.last_line);

        expect_block = l.ends_with_colon;
        opener_line = l.first_line;

        auto header = match_header(source, l.begin);
        if (!header)
            continue;
        if (!l.first_colon)
            throw SyntaxError("", l.first_line, "declaration header without ':'");

        Declaration d;
        d.kind = header->kind;
        d.name = header->name;
        d.indent = l.indent;
        d.start_line = l.first_line;
        d.end_line = l.last_line;
        d.signature_text = l.indent
                           + std::string(source.substr(l.begin, *l.first_colon + 1 - l.begin));
        d.header_end_line = l.first_line
                            + static_cast<int>(std::count(source.begin() + static_cast<std::ptrdiff_t>(l.begin),
                                                          source.begin() + static_cast<std::ptrdiff_t>(*l.first_colon),
                                                          '\n'));
        if (!open.empty()) {
            const auto& parent = decls[open.back().index];
            d.qualified_name = parent.qualified_name + "." + d.name;
            if (d.kind == DeclKind::Function && parent.kind == DeclKind::Class)
                d.kind = DeclKind::Method;
        } else {
            d.qualified_name = d.name;
        }
        decls.push_back(std::move(d));
        if (!l.content_after_colon)
            open.push_back({decls.size() - 1, l.indent_width});
    }
    if (expect_block)
        throw SyntaxError("", opener_line, "expected an indented block");
    return decls;
}

FileSkeleton parse_file(std::string path, std::string_view source)
{
    FileSkeleton sk;
    sk.path = std::move(path);
    try {
        sk.declarations = parse_declarations(source);
    } catch (const SyntaxError& e) {
        throw SyntaxError(sk.path, e.line,
                          std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
    sk.line_count = static_cast<int>(text::split_lines(source).size());
    return sk;
}

std::string render_skeleton(const FileSkeleton& skeleton)
{
    std::string out = "### " + skeleton.path + "\n";
    const auto& decls = skeleton.declarations;
    for (std::size_t i = 0; i < decls.size(); ++i) {
        const auto& d = decls[i];
        out += d.signature_text;
        out += '\n';
        bool has_child = i + 1 < decls.size() && decls[i + 1].start_line > d.start_line
                         && decls[i + 1].start_line <= d.end_line;
        if (!has_child)
            out += d.indent + "    ...\n";
    }
    return out;
}

const Declaration* find_enclosing(const FileSkeleton& skeleton, int line)
{
    const Declaration* best = nullptr;
    for (const auto& d : skeleton.declarations) {
        if (d.start_line <= line && line <= d.end_line) {
            if (!best || d.start_line >= best->start_line)
                best = &d;
        }
    }
    return best;
}

std::string enclosing_declaration(const FileSkeleton& skeleton, int line)
{
    const auto* d = find_enclosing(skeleton, line);
    return d ? d->qualified_name : std::string(kModuleLevel);
}

const Declaration* find_by_name(const FileSkeleton& skeleton, std::string_view qualified_name)
{
    for (const auto& d : skeleton.declarations) {
        if (d.qualified_name == qualified_name)
            return &d;
    }
    return nullptr;
}

}  // namespace resat::skeleton
