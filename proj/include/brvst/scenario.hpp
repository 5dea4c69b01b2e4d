#pragma once

// Scripted scenarios: fixed node placement and a timed list of protocol events.
//
//   config <key>=<value>            any SimConfig key
//   node <id> <x> <y>               ids 0..n-1, each once
//   at <t> sub <id> <node> <attr>=<lo>..<hi> ...
//   at <t> pub <id> <node> [bytes=<n>] <attr>=<lo>..<hi> ...
//   at <t> unsub <id>
//   at <t> move <node> <x> <y>
//
// Nodes are static unless the script sets speeds or moves them. Scripted
// subscriptions last until an explicit unsub.

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "brvst/simulator.hpp"

namespace brvst {

struct ScriptSub {
  Subscription sub;
};
struct ScriptPub {
  Publication pub;
};
struct ScriptUnsub {
  SubId id = 0;
};
struct ScriptMove {
  NodeId node = 0;
  Position pos;
};

struct ScriptAction {
  double time = 0.0;
  std::variant<ScriptSub, ScriptPub, ScriptUnsub, ScriptMove> what;
};

struct Scenario {
  SimConfig cfg;
  std::vector<Position> nodes;
  std::vector<ScriptAction> actions;
};

// Defaults for scripts: static nodes, no random workload.
inline SimConfig script_defaults() {
  SimConfig c;
  c.speed_min = 0.0;
  c.speed_max = 0.0;
  c.pub_rate = 0.0;
  c.sub_rate = 0.0;
  return c;
}

inline Scenario parse_scenario(std::istream& in, SimConfig base = script_defaults()) {
  Scenario sc;
  sc.cfg = base;
  std::map<NodeId, Position> nodes;
  struct Pending {
    double time;
    std::string kind;
    std::string rest;
    int lineno;
  };
  std::vector<Pending> pending;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) -> void {
    throw ArgumentError("scenario line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "config") {
      std::string kv;
      while (ls >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + kv + "'");
        set_config_value(sc.cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
    } else if (head == "node") {
      NodeId id = 0;
      Position p;
      if (!(ls >> id >> p.x >> p.y)) fail("expected: node <id> <x> <y>");
      if (!nodes.emplace(id, p).second) fail("node " + std::to_string(id) + " declared twice");
    } else if (head == "at") {
      Pending a{0.0, "", "", lineno};
      if (!(ls >> a.time >> a.kind)) fail("expected: at <time> <action> ...");
      if (a.time < 0) fail("negative time");
      std::getline(ls, a.rest);
      pending.push_back(std::move(a));
    } else {
      fail("unknown directive '" + head + "'");
    }
  }
  if (nodes.empty()) throw ArgumentError("scenario declares no nodes");
  NodeId expect = 0;
  for (const auto& [id, p] : nodes) {
    if (id != expect++) throw ArgumentError("scenario node ids must be 0..n-1");
    sc.nodes.push_back(p);
  }
  sc.cfg.nodes = static_cast<int>(sc.nodes.size());
  validate(sc.cfg);

  const auto schema = SchemaRegistry::with_default_attributes(static_cast<std::size_t>(sc.cfg.schema_size));
  const auto arv = sc.cfg.arv();
  for (const auto& a : pending) {
    lineno = a.lineno;
    std::istringstream rs(a.rest);
    if (a.kind == "sub" || a.kind == "pub") {
      const auto ev = parse_fixture_line((a.kind == "sub" ? "S" : "P") + a.rest, schema, arv);
      if (const auto* s = std::get_if<Subscription>(&ev)) {
        sc.actions.push_back({a.time, ScriptSub{*s}});
      } else {
        sc.actions.push_back({a.time, ScriptPub{std::get<Publication>(ev)}});
      }
    } else if (a.kind == "unsub") {
      ScriptUnsub u;
      if (!(rs >> u.id)) fail("expected: unsub <id>");
      sc.actions.push_back({a.time, u});
    } else if (a.kind == "move") {
      ScriptMove m;
      if (!(rs >> m.node >> m.pos.x >> m.pos.y)) fail("expected: move <node> <x> <y>");
      sc.actions.push_back({a.time, m});
    } else {
      fail("unknown action '" + a.kind + "'");
    }
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

// Simulator loaded with the script; the random workload is added on top when
// the script's rates are nonzero.
inline Simulator make_simulator(const Scenario& sc) {
  Simulator sim(sc.cfg, sc.nodes);
  for (const auto& a : sc.actions) {
    std::visit(
        [&](const auto& w) {
          using W = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<W, ScriptSub>) {
            sim.schedule_subscription(a.time, w.sub);
          } else if constexpr (std::is_same_v<W, ScriptPub>) {
            sim.schedule_publication(a.time, w.pub);
          } else if constexpr (std::is_same_v<W, ScriptUnsub>) {
            sim.schedule_unsubscribe(a.time, w.id);
          } else {
            sim.schedule_move(a.time, w.node, w.pos);
          }
        },
        a.what);
  }
  if (sc.cfg.pub_rate > 0 || sc.cfg.sub_rate > 0) sim.schedule_workload();
  return sim;
}

}  // namespace brvst
