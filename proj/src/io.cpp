#include "bdtree/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "bdtree/error.hpp"

namespace bdtree {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_skippable(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens.front().front() == '#';
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    parse_error(line, "expected a vertex id, found '" + std::string(token) + "'");
  }
  return value;
}

double parse_real(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || std::isnan(value)) {
    parse_error(line, "expected a real number, found '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

RootedTree parse_tree(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  std::size_t declared = 0;
  bool have_header = false;
  std::vector<RawEdge> edges;
  while (std::getline(in, raw)) {
    ++line;
    const auto tokens = split(raw);
    if (is_skippable(tokens)) continue;
    if (!have_header) {
      if (tokens.size() != 2 || tokens[0] != "tree") parse_error(line, "expected 'tree <n>'");
      declared = parse_index(tokens[1], line);
      if (declared < 2) parse_error(line, "a tree needs at least 2 vertices");
      have_header = true;
      continue;
    }
    if (tokens.size() != 8 || tokens[0] != "vertex" || tokens[2] != "parent" ||
        tokens[4] != "up" || tokens[6] != "down") {
      parse_error(line, "expected 'vertex <id> parent <pid> up <q> down <q>'");
    }
    if (edges.size() + 1 >= declared) parse_error(line, "more vertex lines than declared");
    edges.push_back({parse_index(tokens[1], line), parse_index(tokens[3], line),
                     parse_real(tokens[5], line), parse_real(tokens[7], line)});
  }
  if (!have_header) parse_error(line, "missing 'tree <n>' header");
  if (edges.size() + 1 != declared) {
    parse_error(line, "declared " + std::to_string(declared) + " vertices but listed " +
                          std::to_string(edges.size() + 1));
  }
  return validate_tree(edges);
}

RootedTree parse_tree_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_tree(in);
}

RootedTree read_tree_file(const std::string& path) {
  auto in = open(path);
  return parse_tree(in);
}

std::string serialize_tree(const RootedTree& tree) {
  std::string out = "tree " + std::to_string(tree.size()) + "\n";
  for (const auto& e : tree.edges()) {
    out += "vertex " + std::to_string(e.vertex) + " parent " + std::to_string(e.parent) + " up " +
           format_shortest(e.rate_up) + " down " + format_shortest(e.rate_down) + "\n";
  }
  return out;
}

VertexFunction parse_vertex_function(std::istream& in, std::size_t vertex_count) {
  std::vector<double> values(vertex_count, 0.0);
  std::vector<bool> seen(vertex_count, false);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto tokens = split(raw);
    if (is_skippable(tokens)) continue;
    if (tokens.size() != 2) parse_error(line, "expected '<vertex-id> <value>'");
    const auto v = parse_index(tokens[0], line);
    if (v >= vertex_count) {
      parse_error(line, "vertex " + std::to_string(v) + " not in a tree of " +
                            std::to_string(vertex_count));
    }
    if (seen[v]) parse_error(line, "vertex " + std::to_string(v) + " given twice");
    seen[v] = true;
    values[v] = parse_real(tokens[1], line);
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!seen[v]) parse_error(line, "missing value for vertex " + std::to_string(v));
  }
  return VertexFunction(std::move(values));
}

VertexFunction read_vertex_function_file(const std::string& path, std::size_t vertex_count) {
  auto in = open(path);
  return parse_vertex_function(in, vertex_count);
}

std::string serialize_vertex_function(const VertexFunction& f) {
  std::string out;
  for (std::size_t v = 0; v < f.size(); ++v) {
    out += std::to_string(v) + " " + format_shortest(f[v]) + "\n";
  }
  return out;
}

}  // namespace bdtree
