#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>

#include "bdtree/tree.hpp"
#include "bdtree/vertex_function.hpp"

namespace bdtree {

// Tree files:
//
//   tree <n>
//   vertex <id> parent <pid> up <q_up> down <q_down>     (n - 1 lines)
//
// '#' starts a comment line, blank lines are skipped, numbers use '.' as
// decimal separator regardless of locale. Syntax errors throw ParseError
// naming the line; structural errors surface from validate_tree.
RootedTree parse_tree(std::istream& in);
RootedTree parse_tree_string(std::string_view text);
RootedTree read_tree_file(const std::string& path);

// Shortest round-trip representation of every rate, vertices in id order.
std::string serialize_tree(const RootedTree& tree);

// Vertex-function files: one "<vertex-id> <value>" line per vertex, "inf"
// accepted. Missing, repeated or out-of-range vertices are ParseErrors.
VertexFunction parse_vertex_function(std::istream& in, std::size_t vertex_count);
VertexFunction read_vertex_function_file(const std::string& path, std::size_t vertex_count);
std::string serialize_vertex_function(const VertexFunction& f);

// Locale-independent shortest round-trip formatting ("inf" for infinity).
std::string format_shortest(double x);

}  // namespace bdtree
