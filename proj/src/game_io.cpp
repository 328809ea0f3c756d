#include "efg/game_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace efg {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool token_safe(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ':' || c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string serialize(const GameTree& tree) {
  std::ostringstream os;
  os << "# efg text format v1\n";
  os << "game " << (tree.name.empty() ? "unnamed" : tree.name) << "\n";
  os << "root " << tree.root << "\n";
  for (NodeId id = 0; id < static_cast<NodeId>(tree.nodes.size()); ++id) {
    os << "node " << id << " ";
    if (const auto* d = tree.decision(id)) {
      const std::string& label = tree.infosets[d->infoset].label;
      if (!token_safe(label))
        throw std::invalid_argument("serialize: unsafe infoset label '" + label + "'");
      os << "decision " << d->player << " " << label;
      for (std::size_t a = 0; a < d->actions.size(); ++a) {
        if (!token_safe(d->actions[a]))
          throw std::invalid_argument("serialize: unsafe action label '" +
                                      d->actions[a] + "'");
        os << " " << d->actions[a] << ":" << d->children[a];
      }
    } else if (const auto* c = tree.chance(id)) {
      os << "chance";
      for (std::size_t i = 0; i < c->children.size(); ++i)
        os << " " << fmt17(c->probs[i]) << ":" << c->children[i];
    } else {
      os << "terminal " << fmt17(tree.terminal(id)->payoff);
    }
    os << "\n";
  }
  return os.str();
}

ParseResult parse_game(const std::string& text) {
  ParseResult res;
  GameTree& t = res.tree;
  bool saw_root = false;

  struct Pending {
    int line;
    NodeId id;
    Node node;
  };
  std::vector<Pending> pending;
  NodeId max_id = -1;

  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](int ln, const std::string& msg) { res.issues.push_back({ln, msg}); };

  auto parse_child = [&](int ln, const std::string& tok, std::string& head,
                         NodeId& child) -> bool {
    auto pos = tok.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == tok.size()) {
      fail(ln, "expected <label>:<child>, got '" + tok + "'");
      return false;
    }
    head = tok.substr(0, pos);
    try {
      std::size_t used = 0;
      child = std::stoi(tok.substr(pos + 1), &used);
      if (used != tok.size() - pos - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ln, "bad child id in '" + tok + "'");
      return false;
    }
    return true;
  };

  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "game") {
      if (toks.size() != 2) fail(lineno, "game line needs exactly one name");
      else t.name = toks[1];
      continue;
    }
    if (toks[0] == "root") {
      if (toks.size() != 2) {
        fail(lineno, "root line needs exactly one id");
        continue;
      }
      try {
        t.root = std::stoi(toks[1]);
        saw_root = true;
      } catch (const std::exception&) {
        fail(lineno, "bad root id '" + toks[1] + "'");
      }
      continue;
    }
    if (toks[0] != "node") {
      fail(lineno, "unknown directive '" + toks[0] + "'");
      continue;
    }
    if (toks.size() < 3) {
      fail(lineno, "node line too short");
      continue;
    }
    NodeId id;
    try {
      id = std::stoi(toks[1]);
    } catch (const std::exception&) {
      fail(lineno, "bad node id '" + toks[1] + "'");
      continue;
    }
    if (id < 0) {
      fail(lineno, "node id must be non-negative");
      continue;
    }
    const std::string& kind = toks[2];
    if (kind == "terminal") {
      if (toks.size() != 4) {
        fail(lineno, "terminal node needs exactly one payoff");
        continue;
      }
      try {
        pending.push_back({lineno, id, TerminalNode{std::stod(toks[3])}});
      } catch (const std::exception&) {
        fail(lineno, "bad payoff '" + toks[3] + "'");
        continue;
      }
    } else if (kind == "chance") {
      ChanceNode c;
      bool bad = false;
      if (toks.size() < 4) {
        fail(lineno, "chance node needs at least one outcome");
        continue;
      }
      for (std::size_t i = 3; i < toks.size(); ++i) {
        std::string head;
        NodeId child;
        if (!parse_child(lineno, toks[i], head, child)) {
          bad = true;
          break;
        }
        try {
          c.probs.push_back(std::stod(head));
        } catch (const std::exception&) {
          fail(lineno, "bad probability '" + head + "'");
          bad = true;
          break;
        }
        c.children.push_back(child);
      }
      if (bad) continue;
      pending.push_back({lineno, id, std::move(c)});
    } else if (kind == "decision") {
      if (toks.size() < 6) {
        fail(lineno, "decision node needs player, infoset and actions");
        continue;
      }
      DecisionNode d;
      try {
        d.player = std::stoi(toks[3]);
      } catch (const std::exception&) {
        fail(lineno, "bad player '" + toks[3] + "'");
        continue;
      }
      if (d.player != 1 && d.player != 2) {
        fail(lineno, "player must be 1 or 2");
        continue;
      }
      d.infoset = t.infoset_id(d.player, toks[4]);
      bool bad = false;
      for (std::size_t i = 5; i < toks.size(); ++i) {
        std::string label;
        NodeId child;
        if (!parse_child(lineno, toks[i], label, child)) {
          bad = true;
          break;
        }
        d.actions.push_back(label);
        d.children.push_back(child);
      }
      if (bad) continue;
      pending.push_back({lineno, id, std::move(d)});
    } else {
      fail(lineno, "unknown node kind '" + kind + "'");
      continue;
    }
    max_id = std::max(max_id, id);
  }

  if (pending.empty()) {
    fail(lineno, "no root: file defines no nodes");
    return res;
  }
  if (!saw_root) fail(lineno, "no root directive");

  t.nodes.assign(max_id + 1, TerminalNode{0.0});
  std::vector<int> line_of(max_id + 1, 0);
  for (auto& p : pending) {
    if (line_of[p.id] != 0)
      fail(p.line, "duplicate node id " + std::to_string(p.id) +
                       " (first defined on line " + std::to_string(line_of[p.id]) + ")");
    line_of[p.id] = p.line;
    t.nodes[p.id] = std::move(p.node);
  }
  for (NodeId id = 0; id <= max_id; ++id)
    if (line_of[id] == 0) fail(0, "missing node id " + std::to_string(id));

  if (res.issues.empty()) res.ok = true;
  return res;
}

bool trees_equal(const GameTree& a, const GameTree& b) {
  if (a.nodes.size() != b.nodes.size() || a.root != b.root) return false;
  for (NodeId id = 0; id < static_cast<NodeId>(a.nodes.size()); ++id) {
    const Node& na = a.nodes[id];
    const Node& nb = b.nodes[id];
    if (na.index() != nb.index()) return false;
    if (const auto* da = std::get_if<DecisionNode>(&na)) {
      const auto* db = std::get_if<DecisionNode>(&nb);
      if (da->player != db->player || da->actions != db->actions ||
          da->children != db->children)
        return false;
      if (a.infosets[da->infoset].label != b.infosets[db->infoset].label) return false;
    } else if (const auto* ca = std::get_if<ChanceNode>(&na)) {
      const auto* cb = std::get_if<ChanceNode>(&nb);
      if (ca->probs != cb->probs || ca->children != cb->children) return false;
    } else if (std::get<TerminalNode>(na).payoff != std::get<TerminalNode>(nb).payoff) {
      return false;
    }
  }
  return true;
}

}  // namespace efg
