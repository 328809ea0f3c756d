#include "efg/game_tree.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace efg {

int GameTree::infoset_id(int player, const std::string& label) {
  for (int i = 0; i < static_cast<int>(infosets.size()); ++i) {
    if (infosets[i].player == player && infosets[i].label == label) return i;
  }
  infosets.push_back({player, label});
  return static_cast<int>(infosets.size()) - 1;
}

const char* violation_kind_name(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::structural: return "structural";
    case Violation::Kind::perfect_recall: return "perfect_recall";
    case Violation::Kind::chance_probability: return "chance_probability";
    case Violation::Kind::payoff_range: return "payoff_range";
  }
  return "unknown";
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<NodeId>* children_of(const Node& node) {
  if (const auto* d = std::get_if<DecisionNode>(&node)) return &d->children;
  if (const auto* c = std::get_if<ChanceNode>(&node)) return &c->children;
  return nullptr;
}

}  // namespace

std::vector<Violation> validate_game(const GameTree& tree) {
  std::vector<Violation> out;
  const int n = static_cast<int>(tree.nodes.size());
  auto add = [&](Violation::Kind kind, NodeId id, std::string msg) {
    out.push_back({kind, id, std::move(msg)});
  };

  if (n == 0) {
    add(Violation::Kind::structural, -1, "game has no nodes");
    return out;
  }
  if (tree.root < 0 || tree.root >= n) {
    add(Violation::Kind::structural, tree.root, "root id out of range");
    return out;
  }

  // Structural pass: resolvable references, single parent, no cycles.
  bool structural_ok = true;
  std::vector<int> parent_count(n, 0);
  for (NodeId id = 0; id < n; ++id) {
    const auto* kids = children_of(tree.nodes[id]);
    if (kids == nullptr) continue;
    if (const auto* d = tree.decision(id)) {
      if (d->player != 1 && d->player != 2) {
        add(Violation::Kind::structural, id, "decision player must be 1 or 2");
        structural_ok = false;
      }
      if (d->infoset < 0 || d->infoset >= static_cast<int>(tree.infosets.size())) {
        add(Violation::Kind::structural, id, "unresolvable infoset reference");
        structural_ok = false;
      }
      if (d->actions.size() != d->children.size() || d->actions.empty()) {
        add(Violation::Kind::structural, id, "actions/children mismatch");
        structural_ok = false;
      }
    }
    if (const auto* c = tree.chance(id)) {
      if (c->probs.size() != c->children.size() || c->probs.empty()) {
        add(Violation::Kind::structural, id, "probs/children mismatch");
        structural_ok = false;
      }
    }
    for (NodeId child : *kids) {
      if (child < 0 || child >= n) {
        add(Violation::Kind::structural, id,
            "unresolvable child reference " + std::to_string(child));
        structural_ok = false;
      } else {
        parent_count[child]++;
      }
    }
  }
  if (structural_ok) {
    for (NodeId id = 0; id < n; ++id) {
      if (id == tree.root) {
        if (parent_count[id] != 0) {
          add(Violation::Kind::structural, id, "root must not have a parent");
          structural_ok = false;
        }
      } else if (parent_count[id] != 1) {
        add(Violation::Kind::structural, id,
            "node has " + std::to_string(parent_count[id]) +
                " parents (expected 1); tree must be cycle-free");
        structural_ok = false;
      }
    }
  }
  if (!structural_ok) return out;

  // Chance probabilities and payoff range.
  for (NodeId id = 0; id < n; ++id) {
    if (const auto* c = tree.chance(id)) {
      double sum = 0.0;
      bool in_range = true;
      for (double p : c->probs) {
        sum += p;
        if (p < 0.0 || p > 1.0 || !std::isfinite(p)) in_range = false;
      }
      if (!in_range)
        add(Violation::Kind::chance_probability, id, "outcome probability outside [0,1]");
      if (std::abs(sum - 1.0) > kStructuralTol)
        add(Violation::Kind::chance_probability, id,
            "outcome probabilities sum to " + format_double(sum));
    } else if (const auto* t = tree.terminal(id)) {
      if (!(t->payoff >= -1.0 && t->payoff <= 1.0))
        add(Violation::Kind::payoff_range, id,
            "terminal payoff " + format_double(t->payoff) + " outside [-1,1]");
    }
  }

  // Perfect recall: within one infoset, every node belongs to the same
  // player, lists identical action labels, and induces the same sequence of
  // that player's (infoset, action) pairs from the root.
  struct Seen {
    NodeId first_node = -1;
    std::vector<std::string> actions;
    std::vector<std::pair<int, int>> own_sequence;  // (infoset, action index)
    int player = 0;
  };
  std::vector<Seen> seen(tree.infosets.size());

  struct Frame {
    NodeId id;
    std::vector<std::pair<int, int>> seq1, seq2;
  };
  std::vector<Frame> stack;
  stack.push_back({tree.root, {}, {}});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (const auto* d = tree.decision(fr.id)) {
      const auto& own_seq = d->player == 1 ? fr.seq1 : fr.seq2;
      Seen& s = seen[d->infoset];
      if (s.first_node < 0) {
        s.first_node = fr.id;
        s.actions = d->actions;
        s.own_sequence = own_seq;
        s.player = d->player;
      } else {
        if (s.player != d->player)
          add(Violation::Kind::perfect_recall, fr.id,
              "infoset '" + tree.infosets[d->infoset].label +
                  "' mixes nodes of both players");
        if (s.actions != d->actions)
          add(Violation::Kind::perfect_recall, fr.id,
              "infoset '" + tree.infosets[d->infoset].label +
                  "' has differing action lists");
        if (s.own_sequence != own_seq)
          add(Violation::Kind::perfect_recall, fr.id,
              "infoset '" + tree.infosets[d->infoset].label +
                  "' reached by different own-action sequences");
      }
      for (int a = 0; a < static_cast<int>(d->children.size()); ++a) {
        Frame next{d->children[a], fr.seq1, fr.seq2};
        (d->player == 1 ? next.seq1 : next.seq2).emplace_back(d->infoset, a);
        stack.push_back(std::move(next));
      }
    } else if (const auto* c = tree.chance(fr.id)) {
      for (NodeId child : c->children) stack.push_back({child, fr.seq1, fr.seq2});
    }
  }
  // Infosets must also stay on one side: a declared infoset may simply be
  // unused, which is fine.
  for (std::size_t i = 0; i < tree.infosets.size(); ++i) {
    if (seen[i].first_node >= 0 && seen[i].player != tree.infosets[i].player)
      add(Violation::Kind::perfect_recall, seen[i].first_node,
          "infoset '" + tree.infosets[i].label + "' used by player " +
              std::to_string(seen[i].player) + " but declared for player " +
              std::to_string(tree.infosets[i].player));
  }
  return out;
}

}  // namespace efg
