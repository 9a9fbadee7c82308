#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resat::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ChatTemplate { None, ChatML, Alpaca };

ChatTemplate chat_template_from_string(std::string_view name);

/// Wraps a sample's input and output in the role framing of a chat template.
/// `None` returns both unchanged.
std::pair<std::string, std::string> apply_chat_template(ChatTemplate tmpl, std::string_view input,
                                                        std::string_view output);

/// Runs one command line (without the program name). Normal output goes to
/// `out`; logs go to stderr. Returns the process exit code: 0 on success,
/// 1 when --strict is set and a task failed, 2 on configuration errors.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace resat::cli
