#include <algorithm>
#include <set>

#include "unsafe_audit/lints.hpp"

namespace unsafe_audit {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

class CfgBuilder {
 public:
  CfgBuilder(const SyntaxTree& tree) : t_(tree) {}

  Cfg build(NodeId function) {
    blocks_.clear();
    entry_ = new_block();
    cur_ = entry_;
    const NodeId body = t_.child(function, Role::Body);
    if (body != kNoNode) stmt(body);
    for (const auto& [from, label] : gotos_) {
      auto it = labels_.find(label);
      if (it != labels_.end()) {
        edge(from, it->second);
      } else {
        for (std::size_t b = 0; b < blocks_.size(); ++b)
          if (b != entry_) edge(from, b);
      }
    }
    return finish(function);
  }

 private:
  struct Block {
    std::vector<NodeId> items;
    std::set<std::size_t> succs;
  };
  struct Target {
    std::string label;
    std::size_t brk = kNone;
    std::size_t cont = kNone;  // kNone for switch/select
  };

  std::size_t new_block() {
    blocks_.emplace_back();
    return blocks_.size() - 1;
  }
  void edge(std::size_t from, std::size_t to) { blocks_[from].succs.insert(to); }
  void add(NodeId item) { blocks_[cur_].items.push_back(item); }
  // Control leaves the current block for good; whatever follows is dead
  // until something jumps to it.
  void terminate() { cur_ = new_block(); }

  std::string take_label() {
    std::string l = std::move(pending_label_);
    pending_label_.clear();
    return l;
  }

  void stmts(NodeId owner) {
    for (NodeId c : t_.children(owner))
      if (t_[c].role == Role::Stmt) stmt(c);
  }

  void stmt(NodeId s) {
    const SyntaxNode& n = t_[s];
    switch (n.form) {
      case Form::Block:
        pending_label_.clear();
        stmts(s);
        return;
      case Form::If:
        pending_label_.clear();
        if_stmt(s);
        return;
      case Form::For:
      case Form::ForRange:
        for_stmt(s);
        return;
      case Form::Switch:
      case Form::TypeSwitch:
      case Form::Select:
        switch_stmt(s);
        return;
      case Form::Labeled: {
        const NodeId name = t_.child(s, Role::Name);
        const std::size_t b = new_block();
        edge(cur_, b);
        cur_ = b;
        if (name != kNoNode) {
          labels_[t_[name].text] = b;
          pending_label_ = t_[name].text;
        }
        stmts(s);
        pending_label_.clear();
        return;
      }
      case Form::Branch:
        pending_label_.clear();
        add(s);
        branch(s);
        return;
      case Form::Return:
        pending_label_.clear();
        add(s);
        terminate();
        return;
      default:
        pending_label_.clear();
        add(s);
        return;
    }
  }

  void if_stmt(NodeId s) {
    if (NodeId init = t_.child(s, Role::Init); init != kNoNode) add(init);
    add(s);
    const std::size_t cond = cur_;
    const std::size_t then_b = new_block();
    edge(cond, then_b);
    cur_ = then_b;
    if (NodeId body = t_.child(s, Role::Body); body != kNoNode) stmt(body);
    const std::size_t then_end = cur_;
    std::size_t else_end = kNone;
    const NodeId els = t_.child(s, Role::Else);
    if (els != kNoNode) {
      const std::size_t else_b = new_block();
      edge(cond, else_b);
      cur_ = else_b;
      stmt(els);
      else_end = cur_;
    }
    const std::size_t join = new_block();
    edge(then_end, join);
    edge(else_end == kNone ? cond : else_end, join);
    cur_ = join;
  }

  void for_stmt(NodeId s) {
    const std::string label = take_label();
    const bool range = t_[s].form == Form::ForRange;
    if (!range) {
      if (NodeId init = t_.child(s, Role::Init); init != kNoNode) add(init);
    }
    const std::size_t header = new_block();
    edge(cur_, header);
    cur_ = header;
    add(s);
    const std::size_t body_b = new_block();
    const std::size_t post_b = new_block();
    const std::size_t exit_b = new_block();
    edge(header, body_b);
    if (range || t_.child(s, Role::Cond) != kNoNode) edge(header, exit_b);
    targets_.push_back({label, exit_b, range ? header : post_b});
    cur_ = body_b;
    if (NodeId body = t_.child(s, Role::Body); body != kNoNode) stmt(body);
    targets_.pop_back();
    edge(cur_, post_b);
    cur_ = post_b;
    if (!range) {
      if (NodeId post = t_.child(s, Role::Post); post != kNoNode) add(post);
    }
    edge(post_b, header);
    cur_ = exit_b;
  }

  void switch_stmt(NodeId s) {
    const std::string label = take_label();
    if (NodeId init = t_.child(s, Role::Init); init != kNoNode) add(init);
    add(s);
    const std::size_t head = cur_;
    std::vector<NodeId> clauses;
    for (NodeId c : t_.children(s))
      if (t_[c].form == Form::CaseClause || t_[c].form == Form::CommClause)
        clauses.push_back(c);
    std::vector<std::size_t> clause_blocks;
    for (std::size_t i = 0; i < clauses.size(); ++i) clause_blocks.push_back(new_block());
    const std::size_t exit_b = new_block();
    bool has_default = false;
    targets_.push_back({label, exit_b, kNone});
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      const NodeId c = clauses[i];
      if (t_[c].text == "default") has_default = true;
      edge(head, clause_blocks[i]);
      cur_ = clause_blocks[i];
      add(c);
      if (NodeId comm = t_.child(c, Role::Init); comm != kNoNode) add(comm);
      bool falls = false;
      const auto body = t_.children(c, Role::Stmt);
      for (NodeId st : body) stmt(st);
      if (!body.empty() && t_[body.back()].form == Form::Branch &&
          t_[body.back()].text == "fallthrough")
        falls = true;
      if (falls && i + 1 < clauses.size())
        edge(cur_, clause_blocks[i + 1]);
      else
        edge(cur_, exit_b);
    }
    targets_.pop_back();
    // a select without default blocks until some clause is ready
    if (!has_default && t_[s].form != Form::Select) edge(head, exit_b);
    cur_ = exit_b;
  }

  void branch(NodeId s) {
    const std::string& kw = t_[s].text;
    const NodeId lbl = t_.child(s, Role::Operand);
    const std::string label = lbl != kNoNode ? t_[lbl].text : std::string();
    if (kw == "fallthrough") return;  // wired by the enclosing switch
    if (kw == "goto") {
      gotos_.emplace_back(cur_, label);
      terminate();
      return;
    }
    std::size_t target = kNone;
    for (auto it = targets_.rbegin(); it != targets_.rend(); ++it) {
      if (!label.empty() && it->label != label) continue;
      if (kw == "continue") {
        if (it->cont == kNone) continue;
        target = it->cont;
      } else {
        target = it->brk;
      }
      break;
    }
    if (target != kNone) {
      edge(cur_, target);
    } else {
      for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (b != entry_) edge(cur_, b);
    }
    terminate();
  }

  // Folds empty blocks (other than entry) into their neighbours, renumbers,
  // and computes predecessors and reachability.
  Cfg finish(NodeId function) {
    std::vector<std::set<std::size_t>> preds(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t s : blocks_[b].succs) preds[s].insert(b);
    std::vector<bool> removed(blocks_.size(), false);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (b == entry_ || !blocks_[b].items.empty()) continue;
      std::set<std::size_t> ps = preds[b];
      std::set<std::size_t> ss = blocks_[b].succs;
      ps.erase(b);
      ss.erase(b);
      for (std::size_t p : ps) {
        blocks_[p].succs.erase(b);
        for (std::size_t s : ss) {
          blocks_[p].succs.insert(s);
          preds[s].insert(p);
        }
      }
      for (std::size_t s : ss) preds[s].erase(b);
      blocks_[b].succs.clear();
      preds[b].clear();
      removed[b] = true;
    }
    std::vector<std::size_t> remap(blocks_.size(), kNone);
    Cfg cfg;
    cfg.function = function;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (removed[b]) continue;
      remap[b] = cfg.blocks.size();
      cfg.blocks.emplace_back();
      cfg.blocks.back().items = blocks_[b].items;
    }
    cfg.entry = remap[entry_];
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (removed[b]) continue;
      for (std::size_t s : blocks_[b].succs) {
        if (remap[s] == kNone) continue;
        cfg.edges.emplace_back(remap[b], remap[s]);
      }
    }
    std::sort(cfg.edges.begin(), cfg.edges.end());
    cfg.edges.erase(std::unique(cfg.edges.begin(), cfg.edges.end()), cfg.edges.end());
    for (const auto& [from, to] : cfg.edges) {
      cfg.blocks[from].succs.push_back(to);
      cfg.blocks[to].preds.push_back(from);
    }
    std::vector<bool> seen(cfg.blocks.size(), false);
    std::vector<std::size_t> stack{cfg.entry};
    seen[cfg.entry] = true;
    while (!stack.empty()) {
      const std::size_t b = stack.back();
      stack.pop_back();
      for (std::size_t s : cfg.blocks[b].succs)
        if (!seen[s]) {
          seen[s] = true;
          stack.push_back(s);
        }
    }
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
      cfg.blocks[b].dead = !seen[b];
      for (std::size_t i = 0; i < cfg.blocks[b].items.size(); ++i)
        cfg.item_index[cfg.blocks[b].items[i]] = {b, i};
    }
    return cfg;
  }

  const SyntaxTree& t_;
  std::vector<Block> blocks_;
  std::size_t entry_ = 0;
  std::size_t cur_ = 0;
  std::vector<Target> targets_;
  std::map<std::string, std::size_t> labels_;
  std::vector<std::pair<std::size_t, std::string>> gotos_;
  std::string pending_label_;
};

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> Cfg::locate(NodeId item) const {
  auto it = item_index.find(item);
  if (it == item_index.end()) return std::nullopt;
  return it->second;
}

Cfg build_cfg(const SyntaxTree& tree, NodeId function) {
  CfgBuilder b(tree);
  return b.build(function);
}

}  // namespace unsafe_audit
