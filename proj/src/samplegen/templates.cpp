#include <resat/samplegen/templates.hpp>

namespace resat::samplegen {

namespace {

std::string ensure_newline(std::string_view s)
{
    std::string out(s);
    if (out.empty() || out.back() != '\n')
        out += '\n';
    return out;
}

}  // namespace

std::string file_loc_prompt(std::string_view problem, std::string_view structure)
{
    return "Please look through the following GitHub problem description and Repository structure and "
           "provide a list of files that one would need to edit to fix the problem.\n"
           "\n"
           "Problem Description:\n"
           + ensure_newline(problem)
           + "\n"
             "Repository Structure:\n"
           + ensure_newline(structure);
}

std::string func_loc_prompt(std::string_view problem, std::string_view skeletons)
{
    return "Please look through the following GitHub Problem Description and the Skeleton of Relevant Files.\n"
           "Identify all locations that need inspection or editing to fix the problem, including directly "
           "related areas as well as any potentially related global variables, functions, and classes.\n"
           "\n"
           "Problem Description:\n"
           + ensure_newline(problem)
           + "\n"
             "Skeleton of Relevant Files:\n"
           + ensure_newline(skeletons);
}

std::string line_loc_prompt(std::string_view problem, std::string_view file_contents)
{
    return "Please review the following GitHub problem description and relevant files, and provide a set of "
           "locations that need to be edited to fix the issue.\n"
           "The locations can be specified as class names, function or method names, or exact line numbers "
           "that require modification.\n"
           "\n"
           "Problem Description:\n"
           + ensure_newline(problem)
           + "\n"
             "File Contents:\n"
           + ensure_newline(file_contents)
           + "\n"
             "Please provide the class name, function or method name, or the exact line numbers that need to "
             "be edited.\n";
}

std::string code_edit_prompt(std::string_view problem, std::string_view file_contents)
{
    return "You will be provided with an issue statement explaining a problem to resolve and a partial code "
           "base. Please first localize the bug based on the issue statement, and then generate "
           "*SEARCH/REPLACE* edits to fix the issue.\n"
           "\n"
           "Problem Description:\n"
           + ensure_newline(problem)
           + "\n"
             "File Contents:\n"
           + ensure_newline(file_contents)
           + "\n"
             "Please first localize the bug based on the issue statement, and then generate *SEARCH/REPLACE* "
             "edits to fix the issue.\n";
}

}  // namespace resat::samplegen
