#include "stackamr/amr_graph.h"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace stackamr {

namespace {

struct PenmanToken {
  enum Kind { kLParen, kRParen, kSlash, kRelation, kString, kWord, kEnd };
  Kind kind;
  std::string text;
  int line;
  int column;
};

// Hand-rolled tokenizer so errors carry line/column positions.
class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  PenmanToken next() {
    skip_space_and_comments();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {PenmanToken::kEnd, "", line, col};
    char c = text_[pos_];
    if (c == '(') { advance(); return {PenmanToken::kLParen, "(", line, col}; }
    if (c == ')') { advance(); return {PenmanToken::kRParen, ")", line, col}; }
    if (c == '/') { advance(); return {PenmanToken::kSlash, "/", line, col}; }
    if (c == ':') {
      advance();
      std::string label;
      while (pos_ < text_.size() && !is_break(text_[pos_])) {
        label.push_back(text_[pos_]);
        advance();
      }
      if (label.empty()) throw ParseError("empty relation label", line, col);
      return {PenmanToken::kRelation, label, line, col};
    }
    if (c == '"') {
      std::string s = "\"";
      advance();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        s.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size())
        throw ParseError("unterminated string constant", line, col);
      s.push_back('"');
      advance();
      return {PenmanToken::kString, s, line, col};
    }
    std::string word;
    while (pos_ < text_.size() && !is_break(text_[pos_])) {
      word.push_back(text_[pos_]);
      advance();
    }
    return {PenmanToken::kWord, word, line, col};
  }

 private:
  static bool is_break(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
           c == ')' || c == '/' || c == ':' || c == '"';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' && col_ == 1) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Relation target before variable-vs-constant resolution.
struct RawTarget {
  std::string head;
  std::string label;
  std::string token;  // bare token (word or string constant)
  bool is_string;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { tok_ = lexer_.next(); }

  AmrGraph parse_graph() {
    expect(PenmanToken::kLParen, "expected '('");
    std::string root = parse_node();
    if (tok_.kind != PenmanToken::kEnd)
      throw ParseError("trailing input after graph", tok_.line, tok_.column);
    graph_.root = root;
    resolve_targets();
    graph_.validate();
    return graph_;
  }

 private:
  // '(' already consumed; returns the node's variable id.
  std::string parse_node() {
    PenmanToken var = tok_;
    expect(PenmanToken::kWord, "expected variable name");
    expect(PenmanToken::kSlash, "expected '/' after variable");
    PenmanToken concept = tok_;
    expect(PenmanToken::kWord, "expected concept after '/'");
    auto [it, inserted] = graph_.nodes.emplace(var.text, concept.text);
    if (!inserted)
      throw ParseError("variable '" + var.text + "' redefined with a second concept",
                       var.line, var.column);
    while (tok_.kind == PenmanToken::kRelation) {
      std::string label = tok_.text;
      consume();
      if (tok_.kind == PenmanToken::kLParen) {
        consume();
        std::string child = parse_node();
        graph_.edges.push_back({var.text, label, child});
      } else if (tok_.kind == PenmanToken::kString ||
                 tok_.kind == PenmanToken::kWord) {
        raw_targets_.push_back({var.text, label, tok_.text,
                                tok_.kind == PenmanToken::kString, tok_.line,
                                tok_.column});
        // Edge/attribute order is finalized in resolve_targets; remember the
        // slot so child order matches the text.
        graph_.edges.push_back({var.text, label, kPendingMark + std::to_string(raw_targets_.size() - 1)});
        consume();
      } else {
        throw ParseError("expected relation target", tok_.line, tok_.column);
      }
    }
    expect(PenmanToken::kRParen, "expected ')'");
    return var.text;
  }

  // Bare identifiers must name a variable declared somewhere in the graph;
  // quoted strings, numbers and sign characters are attribute constants.
  void resolve_targets() {
    std::vector<AmrEdge> resolved;
    for (const AmrEdge& e : graph_.edges) {
      if (!starts_with(e.tail, kPendingMark)) {
        resolved.push_back(e);
        continue;
      }
      const RawTarget& raw =
          raw_targets_[static_cast<size_t>(std::stoi(e.tail.substr(kPendingMark.size())))];
      if (!raw.is_string && graph_.nodes.count(raw.token)) {
        resolved.push_back({raw.head, raw.label, raw.token});
      } else if (raw.is_string || is_constant_token(raw.token)) {
        graph_.attributes.push_back({raw.head, raw.label, raw.token});
      } else {
        throw ParseError("reference to undeclared variable '" + raw.token + "'",
                         raw.line, raw.column);
      }
    }
    graph_.edges = std::move(resolved);
  }

  void consume() { tok_ = lexer_.next(); }

  void expect(PenmanToken::Kind kind, const std::string& what) {
    if (tok_.kind != kind) {
      std::string msg = what;
      if (tok_.kind == PenmanToken::kEnd) msg += " (unbalanced parentheses?)";
      throw ParseError(msg, tok_.line, tok_.column);
    }
    consume();
  }

  inline static const std::string kPendingMark = "\x01pending:";
  Lexer lexer_;
  PenmanToken tok_;
  AmrGraph graph_;
  std::vector<RawTarget> raw_targets_;
};

}  // namespace

ParseError::ParseError(const std::string& msg, int line, int column)
    : InputError("parse error at line " + std::to_string(line) + ", column " +
                 std::to_string(column) + ": " + msg),
      line(line),
      column(column) {}

const std::string& AmrGraph::concept_of(const std::string& var) const {
  auto it = nodes.find(var);
  SAMR_CHECK(it != nodes.end(), "unknown variable " << var);
  return it->second;
}

std::vector<std::string> AmrGraph::children(const std::string& var) const {
  std::vector<std::string> out;
  for (const AmrEdge& e : edges)
    if (e.head == var) out.push_back(e.tail);
  return out;
}

void AmrGraph::validate() const {
  if (empty()) {
    SAMR_CHECK(root.empty() && edges.empty() && attributes.empty(),
               "empty graph with leftover content");
    return;
  }
  SAMR_CHECK(nodes.count(root), "root '" << root << "' is not a node");
  for (const AmrEdge& e : edges) {
    SAMR_CHECK(nodes.count(e.head), "edge head '" << e.head << "' is not a node");
    SAMR_CHECK(nodes.count(e.tail), "edge tail '" << e.tail << "' is not a node");
  }
  for (const AmrAttribute& a : attributes)
    SAMR_CHECK(nodes.count(a.holder), "attribute holder '" << a.holder
                                                           << "' is not a node");
}

std::string AmrGraph::fresh_var(const std::string& concept) const {
  char base = 'x';
  for (char c : concept) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      break;
    }
  }
  std::string candidate(1, base);
  int suffix = 2;
  while (nodes.count(candidate)) candidate = std::string(1, base) + std::to_string(suffix++);
  return candidate;
}

bool is_constant_token(const std::string& tok) {
  if (tok.empty()) return false;
  if (tok.front() == '"') return true;
  if (tok == "-" || tok == "+") return true;
  char c0 = tok[0];
  if (std::isdigit(static_cast<unsigned char>(c0))) return true;
  if ((c0 == '-' || c0 == '+') && tok.size() > 1 &&
      std::isdigit(static_cast<unsigned char>(tok[1])))
    return true;
  return false;
}

AmrGraph parse_penman(const std::string& text) {
  Parser parser(text);
  return parser.parse_graph();
}

std::vector<AmrGraph> parse_penman_all(const std::string& text) {
  std::vector<AmrGraph> graphs;
  std::istringstream in(text);
  std::string line, block;
  auto flush = [&]() {
    if (trim(block).empty()) {
      block.clear();
      return;
    }
    graphs.push_back(parse_penman(block));
    block.clear();
  };
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) {
      flush();
    } else if (!t.empty() && t[0] == '#') {
      continue;
    } else {
      block += line;
      block += '\n';
    }
  }
  flush();
  return graphs;
}

namespace {

void serialize_node(const AmrGraph& g, const std::string& var,
                    std::set<std::string>* defined, std::string* out,
                    int depth) {
  defined->insert(var);
  *out += "(" + var + " / " + g.concept_of(var);
  for (const AmrAttribute& a : g.attributes)
    if (a.holder == var) *out += " :" + a.label + " " + a.value;
  for (const AmrEdge& e : g.edges) {
    if (e.head != var) continue;
    *out += "\n" + std::string(2 * (depth + 1), ' ') + ":" + e.label + " ";
    if (defined->count(e.tail)) {
      *out += e.tail;
    } else {
      serialize_node(g, e.tail, defined, out, depth + 1);
    }
  }
  *out += ")";
}

}  // namespace

std::string serialize_penman(const AmrGraph& graph) {
  SAMR_CHECK(!graph.empty(), "cannot serialize an empty graph");
  graph.validate();
  std::set<std::string> defined;
  std::string out;
  serialize_node(graph, graph.root, &defined, &out, 0);
  SAMR_CHECK(defined.size() == graph.nodes.size(),
             "graph has nodes unreachable from the root; cannot serialize");
  return out;
}

std::vector<Triple> to_triples(const AmrGraph& graph) {
  std::vector<Triple> out;
  if (graph.empty()) return out;
  for (const auto& [var, concept] : graph.nodes)
    out.push_back({TripleKind::kInstance, "instance", var, concept});
  for (const AmrAttribute& a : graph.attributes)
    out.push_back({TripleKind::kAttribute, a.label, a.holder, a.value});
  out.push_back({TripleKind::kAttribute, "TOP", graph.root,
                 graph.concept_of(graph.root)});
  for (const AmrEdge& e : graph.edges)
    out.push_back({TripleKind::kRelation, e.label, e.head, e.tail});
  return out;
}

std::string triple_to_string(const Triple& t) {
  const char* kind = t.kind == TripleKind::kInstance   ? "instance"
                     : t.kind == TripleKind::kAttribute ? "attribute"
                                                        : "relation";
  return std::string(kind) + "(" + t.relation + ", " + t.arg1 + ", " + t.arg2 + ")";
}

}  // namespace stackamr
