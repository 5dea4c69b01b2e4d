#pragma once

// Grid-level subscription aggregation. Each tree's root carries one summary ARV
// per root attribute, the merge of that attribute over every tree member. The
// roots with their summaries form the representative set reported upward.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "brvst/arv.hpp"
#include "brvst/error.hpp"
#include "brvst/event.hpp"
#include "brvst/wire.hpp"

namespace brvst {

// Grid (or zone) representative set: one ArvSet per forest root, in tree
// creation order.
struct Grsv {
  GridId grid = 0;
  std::uint32_t version = 0;
  std::vector<ArvSet> entries;
  friend bool operator==(const Grsv&, const Grsv&) = default;
};

namespace detail {

// a's attribute ids include all of b's.
inline bool attrs_superset(const ArvSet& a, const ArvSet& b) {
  auto it = a.begin();
  for (const auto& x : b) {
    while (it != a.end() && it->attr_id < x.attr_id) ++it;
    if (it == a.end() || it->attr_id != x.attr_id) return false;
  }
  return true;
}

inline const Arv* find_arv(const ArvSet& set, AttrId id) {
  auto it = std::lower_bound(set.begin(), set.end(), id,
                             [](const AttrArv& a, AttrId v) { return a.attr_id < v; });
  return (it != set.end() && it->attr_id == id) ? &it->arv : nullptr;
}

// Every attribute of `keys` overlaps the same attribute in `other` (which must
// contain all of them).
inline bool overlaps_on(const ArvSet& keys, const ArvSet& other) {
  for (const auto& k : keys) {
    const Arv* o = find_arv(other, k.attr_id);
    if (o == nullptr || !overlaps(k.arv, *o)) return false;
  }
  return true;
}

inline std::string format_arv_set(const ArvSet& set) {
  std::string out;
  for (const auto& a : set) {
    if (!out.empty()) out += ' ';
    out += 'a' + std::to_string(a.attr_id) + '=' + a.arv.to_string();
  }
  return out;
}

}  // namespace detail

class SummaryForest {
 public:
  struct InsertReport {
    SubId root = 0;
    bool representative_changed = false;
  };
  struct RemoveReport {
    bool representative_changed = false;
  };
  struct MatchResult {
    std::vector<SubId> hits;
    std::size_t root_tests = 0;
    std::size_t candidate_tests = 0;
  };

  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t tree_count() const noexcept { return trees_.size(); }
  bool contains(SubId id) const { return nodes_.contains(id); }

  const SubFilter& get(SubId id) const { return node(id).sub; }

  std::vector<SubId> ids() const {
    std::vector<SubId> out;
    out.reserve(nodes_.size());
    for (const auto& [id, n] : nodes_) out.push_back(id);
    return out;
  }

  // Roots in tree creation order.
  std::vector<SubId> roots() const {
    std::vector<SubId> out;
    for (const auto& t : trees_) out.push_back(t.root);
    return out;
  }

  std::optional<SubId> parent_of(SubId id) const { return node(id).parent; }
  const std::vector<SubId>& children_of(SubId id) const { return node(id).children; }

  const ArvSet& summary_of_root(SubId root) const {
    for (const auto& t : trees_) {
      if (t.root == root) return t.summary;
    }
    throw StateError("subscription " + std::to_string(root) + " is not a root");
  }

  // Tree members in pre-order, root first.
  std::vector<SubId> members_of_root(SubId root) const {
    std::vector<SubId> out;
    collect(root, out);
    return out;
  }

  InsertReport add_subscription(SubFilter s) {
    if (s.attrs.empty()) throw ArgumentError("subscription filter requires at least one attribute");
    if (nodes_.contains(s.sub_id)) {
      throw StateError("duplicate subscription id " + std::to_string(s.sub_id));
    }
    const auto before = representative_entries();
    const SubId id = s.sub_id;
    nodes_.emplace(id, Node{std::move(s), next_seq_++, std::nullopt, {}});
    place(id);
    return {root_of(id), representative_entries() != before};
  }

  RemoveReport remove_subscription(SubId id) {
    if (!nodes_.contains(id)) throw StateError("unknown subscription id " + std::to_string(id));
    const auto before = representative_entries();
    Node& n = nodes_.at(id);
    std::vector<SubId> orphans;
    if (!n.parent) {
      const std::size_t t = tree_index(id);
      collect(id, orphans);
      orphans.erase(orphans.begin());
      trees_.erase(trees_.begin() + static_cast<std::ptrdiff_t>(t));
    } else {
      const SubId root = root_of(id);
      for (SubId c : n.children) collect(c, orphans);
      auto& siblings = nodes_.at(*n.parent).children;
      siblings.erase(std::find(siblings.begin(), siblings.end(), id));
      nodes_.erase(id);
      for (SubId o : orphans) detach(o);
      recompute_summary(tree_index(root));
      reinsert(std::move(orphans));
      return {representative_entries() != before};
    }
    nodes_.erase(id);
    for (SubId o : orphans) detach(o);
    reinsert(std::move(orphans));
    return {representative_entries() != before};
  }

  // Full fixed-point scan over ordered root pairs (Ri, Rj): Ri's tree is grafted
  // under Rj when Ri's attributes include Rj's and every Rj summary overlaps
  // Ri's summary on that attribute.
  bool try_reduce() {
    bool changed = false;
    for (;;) {
      bool grafted = false;
      for (std::size_t i = 0; i < trees_.size() && !grafted; ++i) {
        for (std::size_t j = 0; j < trees_.size() && !grafted; ++j) {
          if (i != j && can_graft(i, j)) {
            graft(i, j);
            grafted = true;
          }
        }
      }
      if (!grafted) break;
      changed = true;
    }
    return changed;
  }

  // Root attribute sets with their summary ARVs, tree creation order.
  std::vector<ArvSet> representative_entries() const {
    std::vector<ArvSet> out;
    out.reserve(trees_.size());
    for (const auto& t : trees_) out.push_back(t.summary);
    return out;
  }

  // Snapshot for upward reporting; version advances only when entries change.
  Grsv representative_set(GridId grid) {
    auto entries = representative_entries();
    if (entries != last_entries_) {
      ++version_;
      last_entries_ = entries;
    }
    return {grid, version_, std::move(entries)};
  }

  std::uint32_t version() const noexcept { return version_; }

  // Root filters first; a tree's members are examined only if its root filter
  // (root attributes with summary ARVs) passes.
  template <typename Pub>
  MatchResult match_publication(const Pub& p) const {
    MatchResult r;
    std::vector<SubId> members;
    for (const auto& t : trees_) {
      ++r.root_tests;
      if (!match_event(p, t.summary)) continue;
      members.clear();
      collect(t.root, members);
      for (SubId m : members) {
        ++r.candidate_tests;
        if (match_event(p, nodes_.at(m).sub)) r.hits.push_back(m);
      }
    }
    return r;
  }

  std::size_t storage_bytes() const {
    std::size_t total = 0;
    for (const auto& [id, n] : nodes_) total += encoded_size(n.sub);
    for (const auto& t : trees_) total += encoded_size(t.summary);
    return total;
  }

  // One line per node, indented two spaces per depth; each tree is preceded by
  // its summary line.
  std::string dump() const {
    std::ostringstream out;
    for (const auto& t : trees_) {
      out << "summary " << detail::format_arv_set(t.summary) << '\n';
      dump_node(out, t.root, 0);
    }
    return out.str();
  }

  // Empty string when structure, summaries and index agree; otherwise a
  // description of the first violation.
  std::string check_invariants() const {
    std::size_t seen = 0;
    for (const auto& t : trees_) {
      const Node& r = node(t.root);
      if (r.parent) return "root " + std::to_string(t.root) + " has a parent";
      std::vector<SubId> members;
      collect(t.root, members);
      seen += members.size();
      for (SubId m : members) {
        const Node& n = node(m);
        for (SubId c : n.children) {
          if (node(c).parent != m) return "parent link mismatch at " + std::to_string(c);
          if (!detail::attrs_superset(node(c).sub.attrs, n.sub.attrs)) {
            return "child " + std::to_string(c) + " lacks parent attributes";
          }
        }
      }
      if (fold_summary(t.root) != t.summary) return "stale summary at root " + std::to_string(t.root);
    }
    if (seen != nodes_.size()) return "node count mismatch";
    return {};
  }

 private:
  struct Node {
    SubFilter sub;
    std::uint64_t seq = 0;
    std::optional<SubId> parent;
    std::vector<SubId> children;
  };
  struct Tree {
    SubId root = 0;
    ArvSet summary;
  };

  const Node& node(SubId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw StateError("unknown subscription id " + std::to_string(id));
    return it->second;
  }

  SubId root_of(SubId id) const {
    const Node* n = &nodes_.at(id);
    SubId cur = id;
    while (n->parent) {
      cur = *n->parent;
      n = &nodes_.at(cur);
    }
    return cur;
  }

  std::size_t tree_index(SubId root) const {
    for (std::size_t i = 0; i < trees_.size(); ++i) {
      if (trees_[i].root == root) return i;
    }
    throw StateError("no tree rooted at " + std::to_string(root));
  }

  void collect(SubId id, std::vector<SubId>& out) const {
    out.push_back(id);
    for (SubId c : nodes_.at(id).children) collect(c, out);
  }

  void detach(SubId id) {
    Node& n = nodes_.at(id);
    n.parent.reset();
    n.children.clear();
  }

  ArvSet fold_summary(SubId root) const {
    ArvSet summary = nodes_.at(root).sub.attrs;
    std::vector<SubId> members;
    collect(root, members);
    for (std::size_t k = 1; k < members.size(); ++k) {
      const auto& attrs = nodes_.at(members[k]).sub.attrs;
      for (auto& s : summary) s.arv = merge(s.arv, *detail::find_arv(attrs, s.attr_id));
    }
    return summary;
  }

  void recompute_summary(std::size_t t) { trees_[t].summary = fold_summary(trees_[t].root); }

  // Reinsertion in ascending original insertion order.
  void reinsert(std::vector<SubId> ids) {
    std::sort(ids.begin(), ids.end(),
              [&](SubId a, SubId b) { return nodes_.at(a).seq < nodes_.at(b).seq; });
    for (SubId o : ids) place(o);
  }

  // Inserts a detached node: first root (creation order) that accepts it as a
  // child, else as its new parent, else a new tree. Then reduces the forest.
  void place(SubId id) {
    Node& n = nodes_.at(id);
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      Tree& tree = trees_[t];
      const ArvSet& root_attrs = nodes_.at(tree.root).sub.attrs;
      if (detail::attrs_superset(n.sub.attrs, root_attrs)) {
        if (detail::overlaps_on(tree.summary, n.sub.attrs)) {
          n.parent = tree.root;
          nodes_.at(tree.root).children.push_back(id);
          for (auto& s : tree.summary) s.arv = merge(s.arv, *detail::find_arv(n.sub.attrs, s.attr_id));
          reduce_from(t);
          return;
        }
      } else if (detail::attrs_superset(root_attrs, n.sub.attrs)) {
        if (detail::overlaps_on(n.sub.attrs, tree.summary)) {
          const SubId old_root = tree.root;
          nodes_.at(old_root).parent = id;
          n.children.push_back(old_root);
          tree.root = id;
          recompute_summary(t);
          reduce_from(t);
          return;
        }
      }
    }
    trees_.push_back({id, n.sub.attrs});
    reduce_from(trees_.size() - 1);
  }

  bool can_graft(std::size_t i, std::size_t j) const {
    const ArvSet& ri = nodes_.at(trees_[i].root).sub.attrs;
    const ArvSet& rj = nodes_.at(trees_[j].root).sub.attrs;
    return detail::attrs_superset(ri, rj) && detail::overlaps_on(trees_[j].summary, trees_[i].summary);
  }

  // Tree i's root becomes a child of tree j's root. Returns j's index after the
  // erase of tree i.
  std::size_t graft(std::size_t i, std::size_t j) {
    const SubId ri = trees_[i].root;
    const SubId rj = trees_[j].root;
    nodes_.at(ri).parent = rj;
    nodes_.at(rj).children.push_back(ri);
    for (auto& s : trees_[j].summary) {
      s.arv = merge(s.arv, *detail::find_arv(trees_[i].summary, s.attr_id));
    }
    trees_.erase(trees_.begin() + static_cast<std::ptrdiff_t>(i));
    return j > i ? j - 1 : j;
  }

  // Restores the no-graft fixed point after tree `t` changed. Only pairs
  // involving a changed tree can have become graftable.
  void reduce_from(std::size_t t) {
    std::vector<SubId> work{trees_[t].root};
    while (!work.empty()) {
      const SubId changed_root = work.back();
      work.pop_back();
      std::size_t c = trees_.size();
      for (std::size_t k = 0; k < trees_.size(); ++k) {
        if (trees_[k].root == changed_root) c = k;
      }
      if (c == trees_.size()) continue;  // grafted away meanwhile
      for (std::size_t k = 0; k < trees_.size(); ++k) {
        if (k == c) continue;
        if (can_graft(c, k)) {
          const std::size_t j = graft(c, k);
          work.push_back(trees_[j].root);
          break;
        }
        if (can_graft(k, c)) {
          const std::size_t j = graft(k, c);
          work.push_back(trees_[j].root);
          break;
        }
      }
    }
  }

  void dump_node(std::ostringstream& out, SubId id, int depth) const {
    const Node& n = nodes_.at(id);
    out << std::string(static_cast<std::size_t>(2 * (depth + 1)), ' ') << '#' << id << ' '
        << detail::format_arv_set(n.sub.attrs) << '\n';
    for (SubId c : n.children) dump_node(out, c, depth + 1);
  }

  std::map<SubId, Node> nodes_;
  std::vector<Tree> trees_;
  std::uint64_t next_seq_ = 0;
  std::uint32_t version_ = 0;
  std::vector<ArvSet> last_entries_;
};

}  // namespace brvst
