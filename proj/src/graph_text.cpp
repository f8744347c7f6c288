#include "zid/graph_text.hpp"

#include <optional>
#include <sstream>
#include <vector>

namespace zid {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  fail(errc::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

VariableId parse_name(int line_no, const std::string& tok) {
  try {
    return VariableId(tok);
  } catch (const Error&) {
    parse_fail(line_no, "bad vertex name '" + tok + "'");
  }
}

}  // namespace

Admg parse_graph(std::string_view text) {
  VariableSet vertices;
  std::vector<DirectedEdge> directed;
  std::vector<BidirectedEdge> bidirected;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int last_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    last_line = line_no;

    if (tokens[0] == "node") {
      if (tokens.size() != 2) parse_fail(line_no, "expected 'node NAME'");
      vertices.insert(parse_name(line_no, tokens[1]));
      continue;
    }
    if (tokens.size() != 3 || (tokens[1] != "->" && tokens[1] != "<->"))
      parse_fail(line_no, "expected 'A -> B', 'A <-> B' or 'node A', got '" +
                              line + "'");

    VariableId a = parse_name(line_no, tokens[0]);
    VariableId b = parse_name(line_no, tokens[2]);
    vertices.insert(a);
    vertices.insert(b);
    if (tokens[1] == "->")
      directed.emplace_back(a, b);
    else
      bidirected.emplace_back(a, b);

    // Structural problems that can be pinned to this line.
    if (a == b) parse_fail(line_no, "self-loop on '" + a.str() + "'");
  }

  try {
    return Admg::build(std::move(vertices), std::move(directed),
                       std::move(bidirected));
  } catch (const Error& e) {
    // Duplicate edges and cycles are only visible once the whole file is
    // assembled; report them against the last content line.
    fail(errc::parse_error,
         "line " + std::to_string(last_line) + ": " + e.what());
  }
}

std::string render_graph(const Admg& g) {
  std::ostringstream out;
  VariableSet touched;
  for (const auto& [t, h] : g.directed()) {
    touched.insert(t);
    touched.insert(h);
  }
  for (const auto& [a, b] : g.bidirected()) {
    touched.insert(a);
    touched.insert(b);
  }
  for (const auto& v : g.vertices())
    if (!touched.count(v)) out << "node " << v.str() << "\n";
  for (const auto& [t, h] : g.directed())
    out << t.str() << " -> " << h.str() << "\n";
  for (const auto& [a, b] : g.bidirected())
    out << a.str() << " <-> " << b.str() << "\n";
  return out.str();
}

}  // namespace zid
