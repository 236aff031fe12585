#include "stackamr/transitions.h"

#include <algorithm>
#include <unordered_set>

namespace stackamr {

Action shift_action() { return {ActionKind::kShift, "", "", ""}; }
Action confirm_action(const std::string& concept) {
  return {ActionKind::kConfirm, "", "", concept};
}
Action reduce_action() { return {ActionKind::kReduce, "", "", ""}; }
Action merge_action() { return {ActionKind::kMerge, "", "", ""}; }
Action entity_action(const std::string& label) {
  return {ActionKind::kEntity, label, "", ""};
}
Action dependent_action(const std::string& label, const std::string& node) {
  return {ActionKind::kDependent, label, node, ""};
}
Action left_arc_action(const std::string& label) {
  return {ActionKind::kLeftArc, label, "", ""};
}
Action right_arc_action(const std::string& label) {
  return {ActionKind::kRightArc, label, "", ""};
}
Action swap_action() { return {ActionKind::kSwap, "", "", ""}; }

std::string format_action(const Action& a) {
  switch (a.kind) {
    case ActionKind::kShift: return "SHIFT";
    case ActionKind::kConfirm:
      return a.concept.empty() ? "CONFIRM" : "CONFIRM(" + a.concept + ")";
    case ActionKind::kReduce: return "REDUCE";
    case ActionKind::kMerge: return "MERGE";
    case ActionKind::kEntity: return "ENTITY(" + a.label + ")";
    case ActionKind::kDependent:
      return "DEPENDENT(" + a.label + "," + a.node + ")";
    case ActionKind::kLeftArc: return "LA(" + a.label + ")";
    case ActionKind::kRightArc: return "RA(" + a.label + ")";
    case ActionKind::kSwap: return "SWAP";
  }
  return "";
}

Action parse_action(const std::string& line) {
  std::string s = trim(line);
  std::string head = s, arg;
  size_t open = s.find('(');
  if (open != std::string::npos) {
    if (s.back() != ')')
      throw InputError("malformed action '" + s + "': missing ')'");
    head = s.substr(0, open);
    arg = s.substr(open + 1, s.size() - open - 2);
  }
  if (head == "SHIFT") return shift_action();
  if (head == "REDUCE") return reduce_action();
  if (head == "MERGE") return merge_action();
  if (head == "SWAP") return swap_action();
  if (head == "CONFIRM") return confirm_action(arg);
  if (head == "ENTITY") {
    if (arg.empty()) throw InputError("ENTITY needs a label: '" + s + "'");
    return entity_action(arg);
  }
  if (head == "LA") {
    if (arg.empty()) throw InputError("LA needs a label: '" + s + "'");
    return left_arc_action(arg);
  }
  if (head == "RA") {
    if (arg.empty()) throw InputError("RA needs a label: '" + s + "'");
    return right_arc_action(arg);
  }
  if (head == "DEPENDENT") {
    size_t comma = arg.find(',');
    if (comma == std::string::npos)
      throw InputError("DEPENDENT needs label,node: '" + s + "'");
    return dependent_action(arg.substr(0, comma), arg.substr(comma + 1));
  }
  throw InputError("unknown action '" + s + "'");
}

bool dependent_makes_attribute(const std::string& label,
                               const std::string& target) {
  static const std::unordered_set<std::string> kAttributeLabels = {
      "polarity", "mode",   "li",  "value", "quant",    "day",
      "month",    "year",   "decade", "era", "timezone", "polite"};
  return kAttributeLabels.count(label) > 0 || is_constant_token(target);
}

ParserState initial_state(const std::vector<std::string>& tokens) {
  ParserState s;
  s.tokens = tokens;
  for (size_t i = 0; i < tokens.size(); ++i) {
    StackItem item;
    item.kind = StackItem::kWord;
    item.span_start = static_cast<int>(i);
    item.span_end = static_cast<int>(i) + 1;
    item.surface = tokens[i];
    item.uid = s.next_uid++;
    s.buffer.push_back(item);
  }
  StackItem root;
  root.kind = StackItem::kRoot;
  root.surface = "R";
  root.uid = s.next_uid++;
  s.buffer.push_back(root);
  s.budget = kStepBudgetPerToken * (static_cast<int>(tokens.size()) + 1);
  return s;
}

void ParserState::check_invariants() const {
  int roots = 0;
  for (size_t i = 0; i < buffer.size(); ++i) {
    if (buffer[i].is_root()) {
      ++roots;
      SAMR_CHECK(i + 1 == buffer.size(), "ROOT not at the buffer end");
    }
  }
  for (const StackItem& it : stack) {
    if (it.is_root()) ++roots;
    if (it.is_node())
      SAMR_CHECK(graph.has_node(it.node_id),
                 "stack node '" << it.node_id << "' missing from graph");
    SAMR_CHECK(!it.is_word() || it.node_id.empty(),
               "word item carries a node id");
  }
  SAMR_CHECK(roots <= 1, "more than one ROOT item");
  bool root_reduced = false;
  for (const Action& a : history)
    if (a.kind == ActionKind::kReduce) root_reduced = true;
  (void)root_reduced;
  for (const auto& [h, l, t] : arcs_built) {
    bool found = false;
    for (const AmrEdge& e : graph.edges)
      found = found || (e.head == h && e.label == l && e.tail == t);
    SAMR_CHECK(found, "arc (" << h << "," << l << "," << t
                              << ") not present in graph edges");
  }
  for (const AmrEdge& e : graph.edges) {
    SAMR_CHECK(graph.has_node(e.head), "edge head missing");
    SAMR_CHECK(graph.has_node(e.tail), "edge tail missing");
  }
  for (const AmrAttribute& a : graph.attributes)
    SAMR_CHECK(graph.has_node(a.holder), "attribute holder missing");
  SAMR_CHECK(steps_taken() + closing_cost() <= budget,
             "derivation can no longer drain within the step budget");
}

namespace {

// Budget rule: the post-state must still be drainable within the remaining
// steps. SHIFT/REDUCE/MERGE lower history+closing_cost or keep it constant,
// so they are never blocked by it.
bool budget_allows(const ParserState& s, int closing_cost_delta) {
  return s.steps_taken() + 1 + s.closing_cost() + closing_cost_delta <=
         s.budget;
}

bool root_arc_possible(const ParserState& s) {
  if (s.stack.size() < 2 || s.root_designated) return false;
  const StackItem& u = s.top();
  const StackItem& v = s.second();
  return (u.is_root() && v.is_node()) || (v.is_root() && u.is_node());
}

}  // namespace

std::set<ActionKind> legal_action_kinds(const ParserState& s) {
  std::set<ActionKind> kinds;
  if (!s.buffer.empty()) kinds.insert(ActionKind::kShift);
  if (!s.stack.empty()) {
    const StackItem& u = s.top();
    if (u.is_root()) {
      if (s.root_designated || s.graph.nodes.empty())
        kinds.insert(ActionKind::kReduce);
    } else {
      kinds.insert(ActionKind::kReduce);
    }
    if (u.is_word() && budget_allows(s, 0)) {
      kinds.insert(ActionKind::kConfirm);
      if (!u.entity_labeled) kinds.insert(ActionKind::kEntity);
    }
    if (u.is_node() && budget_allows(s, 0))
      kinds.insert(ActionKind::kDependent);
  }
  if (s.stack.size() >= 2) {
    const StackItem& u = s.top();
    const StackItem& v = s.second();
    if (u.is_word() && v.is_word()) kinds.insert(ActionKind::kMerge);
    bool arcable =
        (u.is_node() && v.is_node()) || root_arc_possible(s);
    if (arcable && budget_allows(s, 0)) {
      kinds.insert(ActionKind::kLeftArc);
      kinds.insert(ActionKind::kRightArc);
    }
    bool guard_blocked =
        (std::minmax(u.uid, v.uid) ==
         std::minmax(s.last_swap_uids.first, s.last_swap_uids.second));
    if (!v.is_root() && !guard_blocked && budget_allows(s, 1))
      kinds.insert(ActionKind::kSwap);
  }
  return kinds;
}

std::string illegality_reason(const ParserState& s, const Action& a) {
  std::set<ActionKind> kinds = legal_action_kinds(s);
  if (!kinds.count(a.kind))
    return "action kind not permitted here: " + format_action(a);
  switch (a.kind) {
    case ActionKind::kConfirm:
      if (a.concept.empty()) return "CONFIRM without a concept";
      break;
    case ActionKind::kEntity:
      if (a.label.empty()) return "ENTITY without a label";
      break;
    case ActionKind::kDependent: {
      if (a.label.empty() || a.node.empty())
        return "DEPENDENT without label or node";
      const std::string& head = s.top().node_id;
      if (dependent_makes_attribute(a.label, a.node)) {
        for (const AmrAttribute& attr : s.graph.attributes)
          if (attr.holder == head && attr.label == a.label &&
              attr.value == a.node)
            return "duplicate attribute " + a.label + " on " + head;
      } else {
        for (const AmrEdge& e : s.graph.edges)
          if (e.head == head && e.label == a.label &&
              s.graph.concept_of(e.tail) == a.node)
            return "duplicate dependent " + a.label + "/" + a.node + " on " +
                   head;
      }
      break;
    }
    case ActionKind::kLeftArc:
    case ActionKind::kRightArc: {
      const StackItem& u = s.top();
      const StackItem& v = s.second();
      bool root_pair = u.is_root() || v.is_root();
      if (root_pair) {
        if (a.label != kRootArcLabel)
          return "arc with ROOT must use the root label";
        if (s.root_designated) return "root already designated";
      } else {
        if (a.label == kRootArcLabel)
          return "root label reserved for ROOT arcs";
        if (a.label.empty()) return "arc without a label";
        std::string h = a.kind == ActionKind::kLeftArc ? u.node_id : v.node_id;
        std::string t = a.kind == ActionKind::kLeftArc ? v.node_id : u.node_id;
        if (s.arcs_built.count({h, a.label, t}))
          return "duplicate arc (" + h + "," + a.label + "," + t + ")";
      }
      break;
    }
    default:
      break;
  }
  return "";
}

bool is_legal(const ParserState& s, const Action& a) {
  return illegality_reason(s, a).empty();
}

namespace {

std::string quoted(const std::string& tok) {
  if (!tok.empty() && tok.front() == '"') return tok;
  return "\"" + tok + "\"";
}

void add_edge(ParserState& s, const std::string& head, const std::string& label,
              const std::string& tail) {
  s.graph.edges.push_back({head, label, tail});
  s.arcs_built.insert({head, label, tail});
}

void designate_root(ParserState& s, const StackItem& u, const StackItem& v) {
  const StackItem& node = u.is_root() ? v : u;
  s.root_designated = true;
  s.root_node = node.node_id;
}

}  // namespace

void apply_inplace(ParserState& s, const Action& a) {
  std::string reason = illegality_reason(s, a);
  if (!reason.empty())
    throw InputError("illegal action: " + reason);

  switch (a.kind) {
    case ActionKind::kShift: {
      s.stack.push_back(s.buffer.front());
      s.buffer.pop_front();
      break;
    }
    case ActionKind::kConfirm: {
      StackItem& item = s.stack.back();
      std::string var = s.graph.fresh_var(a.concept);
      s.graph.nodes[var] = a.concept;
      item.kind = StackItem::kNode;
      item.node_id = var;
      item.uid = s.next_uid++;
      break;
    }
    case ActionKind::kReduce: {
      s.stack.pop_back();
      break;
    }
    case ActionKind::kMerge: {
      StackItem u = s.stack.back();
      s.stack.pop_back();
      StackItem v = s.stack.back();
      s.stack.pop_back();
      StackItem merged;
      merged.kind = StackItem::kWord;
      const StackItem& left = u.span_start <= v.span_start ? u : v;
      const StackItem& right = u.span_start <= v.span_start ? v : u;
      merged.span_start = left.span_start;
      merged.span_end = std::max(left.span_end, right.span_end);
      merged.surface = left.surface + " " + right.surface;
      merged.uid = s.next_uid++;
      s.stack.push_back(merged);
      break;
    }
    case ActionKind::kEntity: {
      StackItem& item = s.stack.back();
      std::string evar = s.graph.fresh_var(a.label);
      s.graph.nodes[evar] = a.label;
      std::string nvar = s.graph.fresh_var("name");
      s.graph.nodes[nvar] = "name";
      add_edge(s, evar, "name", nvar);
      std::vector<std::string> toks = split_ws(item.surface);
      for (size_t k = 0; k < toks.size(); ++k)
        s.graph.attributes.push_back(
            {nvar, "op" + std::to_string(k + 1), quoted(toks[k])});
      item.kind = StackItem::kNode;
      item.node_id = evar;
      item.entity_labeled = true;
      item.uid = s.next_uid++;
      break;
    }
    case ActionKind::kDependent: {
      const std::string& head = s.top().node_id;
      if (dependent_makes_attribute(a.label, a.node)) {
        s.graph.attributes.push_back({head, a.label, a.node});
      } else {
        std::string dvar = s.graph.fresh_var(a.node);
        s.graph.nodes[dvar] = a.node;
        add_edge(s, head, a.label, dvar);
      }
      break;
    }
    case ActionKind::kLeftArc: {
      const StackItem& u = s.top();
      const StackItem& v = s.second();
      if (u.is_root() || v.is_root())
        designate_root(s, u, v);
      else
        add_edge(s, u.node_id, a.label, v.node_id);
      break;
    }
    case ActionKind::kRightArc: {
      const StackItem& u = s.top();
      const StackItem& v = s.second();
      if (u.is_root() || v.is_root())
        designate_root(s, u, v);
      else
        add_edge(s, v.node_id, a.label, u.node_id);
      break;
    }
    case ActionKind::kSwap: {
      StackItem u = s.stack.back();
      s.stack.pop_back();
      StackItem v = s.stack.back();
      s.stack.pop_back();
      s.buffer.push_front(v);
      s.stack.push_back(u);
      s.last_swap_uids = {u.uid, v.uid};
      break;
    }
  }
  if (a.kind != ActionKind::kSwap && a.kind != ActionKind::kShift)
    s.last_swap_uids = {-1, -1};
  s.history.push_back(a);
}

ParserState apply(const ParserState& state, const Action& action) {
  ParserState next = state;
  apply_inplace(next, action);
  return next;
}

bool is_terminal(const ParserState& state) {
  return state.stack.empty() && state.buffer.empty();
}

ExtractResult extract_graph_rooted(const ParserState& state,
                                   const std::string& root_node) {
  SAMR_CHECK(state.graph.has_node(root_node),
             "designated root '" << root_node << "' is not a built node");
  ExtractResult result;
  std::set<std::string> reachable;
  std::vector<std::string> frontier = {root_node};
  reachable.insert(root_node);
  while (!frontier.empty()) {
    std::string v = frontier.back();
    frontier.pop_back();
    for (const AmrEdge& e : state.graph.edges)
      if (e.head == v && !reachable.count(e.tail)) {
        reachable.insert(e.tail);
        frontier.push_back(e.tail);
      }
  }
  AmrGraph& g = result.graph;
  for (const auto& [var, concept] : state.graph.nodes)
    if (reachable.count(var)) g.nodes[var] = concept;
  for (const AmrEdge& e : state.graph.edges)
    if (reachable.count(e.head)) g.edges.push_back(e);
  for (const AmrAttribute& a : state.graph.attributes)
    if (reachable.count(a.holder)) g.attributes.push_back(a);
  g.root = root_node;
  result.dropped_nodes =
      static_cast<int>(state.graph.nodes.size() - g.nodes.size());
  g.validate();
  return result;
}

ExtractResult extract_graph(const ParserState& state) {
  SAMR_CHECK(is_terminal(state), "extract_graph on a non-terminal state");
  if (!state.root_designated)
    throw InputError("no root designated");
  return extract_graph_rooted(state, state.root_node);
}

}  // namespace stackamr
