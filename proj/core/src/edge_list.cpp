#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "densek/error.hpp"
#include "densek/graph.hpp"

namespace densek {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && is_space(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !is_space(rest[e])) ++e;
  auto tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

Label parse_label(std::string_view tok, std::size_t line_no) {
  Label value = 0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ParseError(line_no, "expected integer vertex id, got '" +
                                  std::string(tok) + "'");
  }
  return value;
}

class LabelTable {
 public:
  NodeId intern(Label label, std::vector<Label>& order) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(order.size()));
    if (inserted) order.push_back(label);
    return it->second;
  }

 private:
  std::unordered_map<Label, NodeId> index_;
};

}  // namespace

EdgeList load_edge_list(std::istream& in, EdgeFormat format, LabelSpace space) {
  const char comment = format == EdgeFormat::snap ? '#' : '%';
  EdgeList el;
  el.space = space;
  LabelTable sources;
  LabelTable targets;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
    if (rest.empty() || rest.front() == comment) continue;

    auto u_tok = next_token(rest);
    auto v_tok = next_token(rest);
    if (v_tok.empty()) throw ParseError(line_no, "expected two vertex ids");
    const Label u = parse_label(u_tok, line_no);
    const Label v = parse_label(v_tok, line_no);
    // Any further columns (weights, timestamps) are dropped.

    const NodeId ui = sources.intern(u, el.labels);
    const NodeId vi = space == LabelSpace::shared ? sources.intern(v, el.labels)
                                                  : targets.intern(v, el.target_labels);
    el.edges.emplace_back(ui, vi);
  }
  if (in.bad()) throw Error("read error while parsing edge list");
  if (el.edges.empty()) throw ParseError(0, "empty input: no edges found");
  return el;
}

EdgeList load_edge_list(const std::filesystem::path& path, EdgeFormat format,
                        LabelSpace space) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return load_edge_list(in, format, space);
}

}  // namespace densek
