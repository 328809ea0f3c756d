#include "efg/zoo.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace efg::zoo {

namespace {

NodeId add_node(GameTree& t, Node node) {
  t.nodes.push_back(std::move(node));
  return static_cast<NodeId>(t.nodes.size()) - 1;
}

NodeId add_terminal(GameTree& t, double payoff) {
  return add_node(t, TerminalNode{payoff});
}

// Rescales every terminal payoff by the maximum absolute raw payoff so the
// tree satisfies the [-1,1] range whatever the pot structure produced.
void scale_payoffs(GameTree& t) {
  double max_abs = 0.0;
  for (const Node& n : t.nodes)
    if (const auto* term = std::get_if<TerminalNode>(&n))
      max_abs = std::max(max_abs, std::abs(term->payoff));
  if (max_abs <= 1.0) return;
  for (Node& n : t.nodes)
    if (auto* term = std::get_if<TerminalNode>(&n)) term->payoff /= max_abs;
}

}  // namespace

Matrix3 paper_matrix() {
  return {{{0.3, 0.5, 0.3}, {0.7, 0.3, 0.7}, {0.6, 0.2, 0.2}}};
}

GameTree gen_kuhn() {
  GameTree t;
  t.name = "kuhn";
  const char* card_name[3] = {"J", "Q", "K"};

  ChanceNode root;
  NodeId root_id = add_node(t, root);

  auto showdown = [&](int c1, int c2, double stake) {
    return add_terminal(t, c1 > c2 ? stake : -stake);
  };

  std::vector<double> probs;
  std::vector<NodeId> deals;
  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      if (c1 == c2) continue;
      // P1 decision: check or bet.
      DecisionNode p1;
      p1.player = 1;
      p1.infoset = t.infoset_id(1, card_name[c1]);
      p1.actions = {"k", "b"};

      // After check: P2 checks (showdown for the antes) or bets.
      DecisionNode p2k;
      p2k.player = 2;
      p2k.infoset = t.infoset_id(2, std::string(card_name[c2]) + "/k");
      p2k.actions = {"k", "b"};
      NodeId kk = showdown(c1, c2, 1.0);

      // After check-bet: P1 folds (loses the ante) or calls.
      DecisionNode p1kb;
      p1kb.player = 1;
      p1kb.infoset = t.infoset_id(1, std::string(card_name[c1]) + "/kb");
      p1kb.actions = {"f", "c"};
      p1kb.children = {add_terminal(t, -1.0), showdown(c1, c2, 2.0)};
      NodeId p1kb_id = add_node(t, p1kb);
      p2k.children = {kk, p1kb_id};
      NodeId p2k_id = add_node(t, p2k);

      // After bet: P2 folds or calls.
      DecisionNode p2b;
      p2b.player = 2;
      p2b.infoset = t.infoset_id(2, std::string(card_name[c2]) + "/b");
      p2b.actions = {"f", "c"};
      p2b.children = {add_terminal(t, 1.0), showdown(c1, c2, 2.0)};
      NodeId p2b_id = add_node(t, p2b);

      p1.children = {p2k_id, p2b_id};
      deals.push_back(add_node(t, p1));
      probs.push_back(1.0 / 6.0);
    }
  }
  std::get<ChanceNode>(t.nodes[root_id]) = {probs, deals};
  scale_payoffs(t);
  return t;
}

namespace {

// One Kuhn-style betting round with a single raise cap. Positions alternate
// starting from player 1; histories are one character per action.
struct BettingState {
  std::string history;
  double contrib1, contrib2;
  int to_act;          // 1 or 2
  bool round_over;     // betting closed without a fold
  bool folded;         // some player folded
  int folder;          // valid when folded
};

std::vector<std::pair<std::string, BettingState>> betting_moves(
    const BettingState& s, double bet) {
  std::vector<std::pair<std::string, BettingState>> out;
  auto push = [&](const std::string& a, char code) {
    BettingState n = s;
    n.history += code;
    double& own = n.to_act == 1 ? n.contrib1 : n.contrib2;
    double other = n.to_act == 1 ? n.contrib2 : n.contrib1;
    if (code == 'b') own += bet;
    if (code == 'c') own = other;
    if (code == 'r') own = other + bet;
    if (code == 'f') {
      n.folded = true;
      n.folder = n.to_act;
    }
    if (code == 'c' || (code == 'k' && s.history == "k")) n.round_over = true;
    n.to_act = 3 - n.to_act;
    out.emplace_back(a, std::move(n));
  };
  const std::string& h = s.history;
  if (h.empty() || h == "k") {
    push("k", 'k');
    push("b", 'b');
  } else if (h == "b" || h == "kb") {
    push("f", 'f');
    push("c", 'c');
    push("r", 'r');
  } else if (h == "br" || h == "kbr") {
    push("f", 'f');
    push("c", 'c');
  } else {
    throw std::logic_error("betting state exhausted");
  }
  return out;
}

}  // namespace

GameTree gen_leduc(int ranks) {
  if (ranks < 2) throw std::invalid_argument("leduc: ranks must be >= 2");
  GameTree t;
  t.name = "leduc" + std::to_string(ranks);
  const int deck = 2 * ranks;  // two suits per rank

  // Terminal utility once the hand resolves; positive means player 1 wins.
  auto fold_terminal = [&](const BettingState& s) {
    return add_terminal(t, s.folder == 1 ? -s.contrib1 : s.contrib2);
  };
  auto showdown_terminal = [&](int r1, int r2, int board, const BettingState& s) {
    int winner;
    if (r1 == board && r2 != board) winner = 1;
    else if (r2 == board && r1 != board) winner = 2;
    else if (r1 > r2) winner = 1;
    else if (r2 > r1) winner = 2;
    else winner = 0;
    double u = winner == 1 ? s.contrib2 : winner == 2 ? -s.contrib1 : 0.0;
    return add_terminal(t, u);
  };

  // Second betting round, after the board card is public knowledge.
  std::function<NodeId(int, int, int, const std::string&, BettingState)> round2 =
      [&](int r1, int r2, int board, const std::string& h1, BettingState s) -> NodeId {
    if (s.folded) return fold_terminal(s);
    if (s.round_over) return showdown_terminal(r1, r2, board, s);
    DecisionNode d;
    d.player = s.to_act;
    int own = s.to_act == 1 ? r1 : r2;
    d.infoset = t.infoset_id(s.to_act, "r" + std::to_string(own) + "/" + h1 + "/m" +
                                           std::to_string(board) + "/" + s.history);
    for (auto& [label, next] : betting_moves(s, 4.0)) {
      d.actions.push_back(label);
      d.children.push_back(round2(r1, r2, board, h1, next));
    }
    return add_node(t, d);
  };

  // Board reveal between the rounds; remaining copies drive the odds.
  auto deal_board = [&](int r1, int r2, const BettingState& s) -> NodeId {
    ChanceNode c;
    for (int m = 0; m < ranks; ++m) {
      int copies = 2 - (m == r1 ? 1 : 0) - (m == r2 ? 1 : 0);
      if (copies == 0) continue;
      c.probs.push_back(static_cast<double>(copies) / (deck - 2));
      BettingState fresh{"", s.contrib1, s.contrib2, 1, false, false, 0};
      c.children.push_back(round2(r1, r2, m, s.history, fresh));
    }
    return add_node(t, c);
  };

  std::function<NodeId(int, int, BettingState)> round1 =
      [&](int r1, int r2, BettingState s) -> NodeId {
    if (s.folded) return fold_terminal(s);
    if (s.round_over) return deal_board(r1, r2, s);
    DecisionNode d;
    d.player = s.to_act;
    int own = s.to_act == 1 ? r1 : r2;
    d.infoset = t.infoset_id(s.to_act, "r" + std::to_string(own) + "/" + s.history);
    for (auto& [label, next] : betting_moves(s, 2.0)) {
      d.actions.push_back(label);
      d.children.push_back(round1(r1, r2, next));
    }
    return add_node(t, d);
  };

  ChanceNode root;
  NodeId root_id = add_node(t, root);
  for (int r1 = 0; r1 < ranks; ++r1) {
    for (int r2 = 0; r2 < ranks; ++r2) {
      int ways = 2 * (r1 == r2 ? 1 : 2);
      root.probs.push_back(static_cast<double>(ways) / (deck * (deck - 1)));
      root.children.push_back(round1(r1, r2, {"", 1.0, 1.0, 1, false, false, 0}));
    }
  }
  std::get<ChanceNode>(t.nodes[root_id]) = std::move(root);
  scale_payoffs(t);
  return t;
}

GameTree gen_goofspiel3() {
  GameTree t;
  t.name = "goofspiel3";

  // Turn 3 is forced: both players bid their last card.
  auto final_terminal = [&](int p1prize, int b1, int o1, int p2prize, int b2, int o2) {
    int last1 = 6 - b1 - b2;      // bids are card values 1..3
    int last2 = 6 - o1 - o2;
    int p3prize = 6 - p1prize - p2prize;
    int s1 = 0, s2 = 0;
    auto settle = [&](int prize, int mine, int theirs) {
      if (mine > theirs) s1 += prize;
      else if (theirs > mine) s2 += prize;
    };
    settle(p1prize, b1, o1);
    settle(p2prize, b2, o2);
    settle(p3prize, last1, last2);
    return add_terminal(t, static_cast<double>(s1 - s2));
  };

  // Second turn: both players know the first prizes and both first bids.
  auto turn2 = [&](int p1prize, int b1, int o1, int p2prize) -> NodeId {
    std::string context = "p" + std::to_string(p1prize) + "b" + std::to_string(b1) +
                          "o" + std::to_string(o1) + "|p" + std::to_string(p2prize);
    std::string context_opp = "p" + std::to_string(p1prize) + "b" + std::to_string(o1) +
                              "o" + std::to_string(b1) + "|p" + std::to_string(p2prize);
    DecisionNode d1;
    d1.player = 1;
    d1.infoset = t.infoset_id(1, context);
    for (int b2 = 1; b2 <= 3; ++b2) {
      if (b2 == b1) continue;
      DecisionNode d2;
      d2.player = 2;
      d2.infoset = t.infoset_id(2, context_opp);
      for (int o2 = 1; o2 <= 3; ++o2) {
        if (o2 == o1) continue;
        d2.actions.push_back(std::to_string(o2));
        d2.children.push_back(final_terminal(p1prize, b1, o1, p2prize, b2, o2));
      }
      d1.actions.push_back(std::to_string(b2));
      d1.children.push_back(add_node(t, d2));
    }
    return add_node(t, d1);
  };

  auto reveal2 = [&](int p1prize, int b1, int o1) -> NodeId {
    ChanceNode c;
    for (int p2prize = 1; p2prize <= 3; ++p2prize) {
      if (p2prize == p1prize) continue;
      c.probs.push_back(0.5);
      c.children.push_back(turn2(p1prize, b1, o1, p2prize));
    }
    return add_node(t, c);
  };

  auto turn1 = [&](int p1prize) -> NodeId {
    DecisionNode d1;
    d1.player = 1;
    d1.infoset = t.infoset_id(1, "p" + std::to_string(p1prize));
    for (int b1 = 1; b1 <= 3; ++b1) {
      DecisionNode d2;
      d2.player = 2;
      d2.infoset = t.infoset_id(2, "p" + std::to_string(p1prize));
      for (int o1 = 1; o1 <= 3; ++o1) {
        d2.actions.push_back(std::to_string(o1));
        d2.children.push_back(reveal2(p1prize, b1, o1));
      }
      d1.actions.push_back(std::to_string(b1));
      d1.children.push_back(add_node(t, d2));
    }
    return add_node(t, d1);
  };

  ChanceNode root;
  NodeId root_id = add_node(t, root);
  for (int p1prize = 1; p1prize <= 3; ++p1prize) {
    root.probs.push_back(1.0 / 3.0);
    root.children.push_back(turn1(p1prize));
  }
  std::get<ChanceNode>(t.nodes[root_id]) = std::move(root);
  scale_payoffs(t);
  return t;
}

GameTree gen_drps() {
  GameTree t;
  t.name = "drps";

  // Skewed zero-sum RPS block: antisymmetric, value 0, unique completely
  // mixed equilibrium (1/7, 2/7, 4/7) for both players.
  const double S[3][3] = {{0.0, -1.0, 0.5}, {1.0, 0.0, -0.25}, {-0.5, 0.25, 0.0}};
  const double kExitPay = -0.25;  // entering the gauntlet is worth less than stopping
  const char* throws[3] = {"rock", "paper", "scissors"};

  // RPS finale: player 1 throws, player 2 throws without observing it.
  DecisionNode e;
  e.player = 1;
  e.infoset = t.infoset_id(1, "rps");
  for (int i = 0; i < 3; ++i) {
    DecisionNode f;
    f.player = 2;
    f.infoset = t.infoset_id(2, "rps");
    for (int j = 0; j < 3; ++j) {
      f.actions.push_back(throws[j]);
      f.children.push_back(add_terminal(t, 0.5 * S[i][j] + kExitPay));
    }
    e.actions.push_back(throws[i]);
    e.children.push_back(add_node(t, f));
  }
  NodeId e_id = add_node(t, e);

  auto gate = [&](int player, const std::string& label, const char* prefix,
                  NodeId next) {
    DecisionNode d;
    d.player = player;
    d.infoset = t.infoset_id(player, label);
    d.actions = {std::string(prefix) + "1", std::string(prefix) + "2",
                 std::string(prefix) + "3"};
    d.children = {next, add_terminal(t, kExitPay), add_terminal(t, kExitPay)};
    return add_node(t, d);
  };

  NodeId d_id = gate(2, "gate2", "s", e_id);
  NodeId c_id = gate(1, "gate2", "r", d_id);
  NodeId b_id = gate(2, "gate1", "m", c_id);

  // Player 1's root: l1 stops the game at value 0; anything else is worth
  // kExitPay at every equilibrium.
  DecisionNode a;
  a.player = 1;
  a.infoset = t.infoset_id(1, "gate1");
  a.actions = {"l1", "l2", "l3"};
  a.children = {add_terminal(t, 0.0), b_id, add_terminal(t, kExitPay)};
  NodeId a_id = add_node(t, a);
  t.root = a_id;
  return t;
}

GameTree gen_matrix(const Matrix3& payoffs) {
  for (const auto& row : payoffs)
    for (double v : row)
      if (!(v >= -1.0 && v <= 1.0))
        throw std::invalid_argument("matrix: entries must lie in [-1,1]");
  GameTree t;
  t.name = "matrix";
  DecisionNode d1;
  d1.player = 1;
  d1.infoset = t.infoset_id(1, "row");
  for (int i = 0; i < 3; ++i) {
    DecisionNode d2;
    d2.player = 2;
    d2.infoset = t.infoset_id(2, "col");
    for (int j = 0; j < 3; ++j) {
      d2.actions.push_back("b" + std::to_string(j + 1));
      d2.children.push_back(add_terminal(t, payoffs[i][j]));
    }
    d1.actions.push_back("a" + std::to_string(i + 1));
    d1.children.push_back(add_node(t, d2));
  }
  t.root = add_node(t, d1);
  return t;
}

GameTree make_game(const GameSpec& spec) {
  auto int_param = [&](const std::string& key, int fallback) {
    auto it = spec.params.find(key);
    if (it == spec.params.end()) return fallback;
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw std::invalid_argument("game parameter '" + key + "' must be an integer");
    }
  };
  if (spec.name == "kuhn") return gen_kuhn();
  if (spec.name == "leduc") return gen_leduc(int_param("ranks", 3));
  if (spec.name == "leduc3") return gen_leduc(3);
  if (spec.name == "leduc5") return gen_leduc(5);
  if (spec.name == "goofspiel3") return gen_goofspiel3();
  if (spec.name == "drps") return gen_drps();
  if (spec.name == "matrix") {
    Matrix3 m = paper_matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto it = spec.params.find("m" + std::to_string(i) + std::to_string(j));
        if (it != spec.params.end()) m[i][j] = std::stod(it->second);
      }
    return gen_matrix(m);
  }
  throw std::invalid_argument("unknown game '" + spec.name + "'");
}

}  // namespace efg::zoo
