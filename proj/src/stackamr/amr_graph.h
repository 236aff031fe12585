#ifndef STACKAMR_AMR_GRAPH_H
#define STACKAMR_AMR_GRAPH_H

// AMR graph data model with PENMAN-notation reading/writing and triple
// extraction. Graphs are rooted, labeled, possibly reentrant digraphs over
// variables; constants (negative polarity "-", numbers, quoted strings)
// live as attribute values, never as nodes.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stackamr/util.h"

namespace stackamr {

struct AmrEdge {
  std::string head;   // variable id
  std::string label;  // relation label, ':' stripped
  std::string tail;   // variable id
  bool operator==(const AmrEdge&) const = default;
  auto operator<=>(const AmrEdge&) const = default;
};

struct AmrAttribute {
  std::string holder;  // variable id
  std::string label;
  std::string value;  // constant as written (quotes kept)
  bool operator==(const AmrAttribute&) const = default;
  auto operator<=>(const AmrAttribute&) const = default;
};

struct AmrGraph {
  std::map<std::string, std::string> nodes;  // variable id -> concept
  std::vector<AmrAttribute> attributes;
  std::vector<AmrEdge> edges;  // ordered by appearance / construction
  std::string root;            // empty only for the empty graph

  bool empty() const { return nodes.empty(); }
  const std::string& concept_of(const std::string& var) const;
  bool has_node(const std::string& var) const { return nodes.count(var) > 0; }

  // Outgoing edge targets of `var` in stored order (PENMAN child order).
  std::vector<std::string> children(const std::string& var) const;

  // Throws InternalError if any structural invariant is broken.
  void validate() const;

  // Fresh variable id: first concept letter, then letter+2, letter+3, ...
  std::string fresh_var(const std::string& concept) const;
};

struct ParseError : InputError {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column);
};

enum class TripleKind { kInstance, kAttribute, kRelation };

struct Triple {
  TripleKind kind;
  std::string relation;
  std::string arg1;  // variable id
  std::string arg2;  // variable id (relation) or concept/constant string
  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

// Parses exactly one PENMAN expression. Repeated bare variables denote
// reentrancy; a bare identifier that is never declared anywhere in the
// expression is an error. Leading '#' metadata lines are skipped.
AmrGraph parse_penman(const std::string& text);

// All graphs in a file-sized string: '#' comment lines ignored, graphs
// separated by blank lines.
std::vector<AmrGraph> parse_penman_all(const std::string& text);

// Serializes so that re-parsing yields a graph isomorphic to the input.
// Requires every node reachable from the root along stored edge directions.
std::string serialize_penman(const AmrGraph& graph);

// One instance triple per node, one triple per attribute and edge, plus the
// TOP attribute triple (TOP, root, root concept).
std::vector<Triple> to_triples(const AmrGraph& graph);

// Constant tokens: quoted strings, numbers, '-', '+'.
bool is_constant_token(const std::string& tok);

std::string triple_to_string(const Triple& t);

}  // namespace stackamr

#endif  // STACKAMR_AMR_GRAPH_H
