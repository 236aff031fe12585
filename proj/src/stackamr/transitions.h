#ifndef STACKAMR_TRANSITIONS_H
#define STACKAMR_TRANSITIONS_H

// The 9-action shift-reduce state machine that builds AMR graphs directly
// from token sequences:
//
//   SHIFT            moves the buffer front onto the stack
//   CONFIRM          turns the top word into an AMR node (concept supplied)
//   REDUCE           discards the top item
//   MERGE            fuses the top two word items (multiword entities)
//   ENTITY(l)        wraps the top word item as a typed named entity
//   DEPENDENT(r,d)   adds an unaligned child (node or attribute) to the top
//   LA(r)            edge (top, r, second)
//   RA(r)            edge (second, r, top)
//   SWAP             moves the second item back to the buffer front
//
// LA/RA keep both items on the stack so reentrancies can be built. The
// buffer carries a ROOT sentinel at its end; attaching a node to ROOT via
// LA(root)/RA(root) designates the graph root.

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "stackamr/amr_graph.h"

namespace stackamr {

enum class ActionKind {
  kShift,
  kConfirm,
  kReduce,
  kMerge,
  kEntity,
  kDependent,
  kLeftArc,
  kRightArc,
  kSwap,
};

constexpr const char* kRootArcLabel = "root";

// Every derivation must fit in kStepBudgetPerToken * (tokens + 1) actions;
// legality never lets a derivation outrun what it can still drain.
constexpr int kStepBudgetPerToken = 20;

struct Action {
  ActionKind kind = ActionKind::kShift;
  std::string label;    // ENTITY / DEPENDENT / LA / RA
  std::string node;     // DEPENDENT target concept or constant
  std::string concept;  // CONFIRM's predicted concept

  bool operator==(const Action&) const = default;
  // Inventory identity ignores the CONFIRM concept (the node softmax picks
  // it); two CONFIRMs are the same inventory action.
  std::tuple<ActionKind, std::string, std::string> inventory_key() const {
    return {kind, label, node};
  }
};

Action shift_action();
Action confirm_action(const std::string& concept);
Action reduce_action();
Action merge_action();
Action entity_action(const std::string& label);
Action dependent_action(const std::string& label, const std::string& node);
Action left_arc_action(const std::string& label);
Action right_arc_action(const std::string& label);
Action swap_action();

// Text form used by logs, oracle output and replay tests, e.g. "LA(ARG1)",
// "DEPENDENT(polarity,-)", "CONFIRM(recommend-01)".
std::string format_action(const Action& a);
Action parse_action(const std::string& line);

struct StackItem {
  enum Kind { kWord, kNode, kRoot };
  Kind kind = kWord;
  int span_start = -1;  // covered token range [start, end)
  int span_end = -1;
  std::string surface;  // covered tokens joined by spaces
  std::string node_id;  // variable id in the partial graph (kNode only)
  bool entity_labeled = false;
  int uid = -1;  // unique within one derivation

  bool is_node() const { return kind == kNode; }
  bool is_word() const { return kind == kWord; }
  bool is_root() const { return kind == kRoot; }
};

struct ParserState {
  std::vector<std::string> tokens;
  std::vector<StackItem> stack;   // back() is the top
  std::deque<StackItem> buffer;   // front() is next; ROOT sentinel at the end
  std::vector<Action> history;
  AmrGraph graph;  // partial graph; root unset until extraction
  std::set<std::tuple<std::string, std::string, std::string>> arcs_built;
  bool root_designated = false;
  std::string root_node;
  int budget = 0;
  int next_uid = 0;
  std::pair<int, int> last_swap_uids{-1, -1};

  const StackItem& top() const { return stack.back(); }
  const StackItem& second() const { return stack[stack.size() - 2]; }
  int closing_cost() const {
    return static_cast<int>(stack.size() + 2 * buffer.size());
  }
  int steps_taken() const { return static_cast<int>(history.size()); }

  // Throws InternalError when a structural invariant is broken.
  void check_invariants() const;
};

ParserState initial_state(const std::vector<std::string>& tokens);

// Action kinds permitted in `state` by the constraint table. Empty at the
// terminal state.
std::set<ActionKind> legal_action_kinds(const ParserState& state);

// Full legality of an instantiated action (duplicate-arc bans, root-label
// forcing, swap loop guard, step budget).
bool is_legal(const ParserState& state, const Action& action);

// Why `action` is illegal, or empty string when it is legal.
std::string illegality_reason(const ParserState& state, const Action& action);

// Applies in place; throws InputError (state untouched) when illegal.
void apply_inplace(ParserState& state, const Action& action);

// Pure variant.
ParserState apply(const ParserState& state, const Action& action);

bool is_terminal(const ParserState& state);

struct ExtractResult {
  AmrGraph graph;
  int dropped_nodes = 0;  // built nodes unreachable from the root
};

// Requires a terminal state with a designated root.
ExtractResult extract_graph(const ParserState& state);

// Same, with an explicit root (decoder fallback when no root arc was built).
ExtractResult extract_graph_rooted(const ParserState& state,
                                   const std::string& root_node);

// True when DEPENDENT(label, target) creates an attribute rather than a
// child node: reserved attribute-like labels or constant-shaped targets.
bool dependent_makes_attribute(const std::string& label,
                               const std::string& target);

}  // namespace stackamr

#endif  // STACKAMR_TRANSITIONS_H
