#pragma once

#include <string>
#include <string_view>

namespace resat::samplegen {

// Prompt bodies for the four sample kinds. The same prompts drive the
// evaluation pipeline, so training and inference see identical framing.

std::string file_loc_prompt(std::string_view problem, std::string_view structure);
std::string func_loc_prompt(std::string_view problem, std::string_view skeletons);
std::string line_loc_prompt(std::string_view problem, std::string_view file_contents);
std::string code_edit_prompt(std::string_view problem, std::string_view file_contents);

}  // namespace resat::samplegen
