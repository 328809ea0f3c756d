#include "efg/game.hpp"

#include <sstream>
#include <stdexcept>

namespace efg {

Game compile_game(GameTree tree) {
  auto violations = validate_game(tree);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid game";
    if (!tree.name.empty()) os << " '" << tree.name << "'";
    os << ":";
    for (const auto& v : violations)
      os << "\n  [" << violation_kind_name(v.kind) << "] node " << v.node << ": "
         << v.message;
    throw std::invalid_argument(os.str());
  }

  Game g;
  g.tree = std::move(tree);
  g.tp1 = build_treeplex(g.tree, 1);
  g.tp2 = build_treeplex(g.tree, 2);
  g.payoff = build_payoff_matrix(g.tree, g.tp1, g.tp2);

  const int n = static_cast<int>(g.tree.nodes.size());
  g.chance_reach.assign(n, 0.0);
  g.seq1.assign(n, 0);
  g.seq2.assign(n, 0);
  struct Frame {
    NodeId id;
    double chance;
    int s1, s2;
  };
  std::vector<Frame> stack;
  stack.push_back({g.tree.root, 1.0, 0, 0});
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    g.chance_reach[fr.id] = fr.chance;
    g.seq1[fr.id] = fr.s1;
    g.seq2[fr.id] = fr.s2;
    if (const auto* d = g.tree.decision(fr.id)) {
      const Treeplex& tp = d->player == 1 ? g.tp1 : g.tp2;
      int local = tp.local_of_infoset[d->infoset];
      for (int a = 0; a < static_cast<int>(d->children.size()); ++a) {
        int seq = tp.sequence(local, a);
        stack.push_back({d->children[a], fr.chance, d->player == 1 ? seq : fr.s1,
                         d->player == 2 ? seq : fr.s2});
      }
    } else if (const auto* c = g.tree.chance(fr.id)) {
      for (std::size_t i = 0; i < c->children.size(); ++i)
        stack.push_back({c->children[i], fr.chance * c->probs[i], fr.s1, fr.s2});
    }
  }

  for (const Treeplex* tp : {&g.tp1, &g.tp2})
    for (int na : tp->num_actions)
      g.min_eps_bound = std::min(g.min_eps_bound, 1.0 / (2.0 * na));
  return g;
}

GameSizes game_sizes(const Game& game) {
  GameSizes s;
  s.infosets1 = game.tp1.num_infosets();
  s.infosets2 = game.tp2.num_infosets();
  s.sequences1 = game.tp1.num_sequences;
  s.sequences2 = game.tp2.num_sequences;
  return s;
}

}  // namespace efg
