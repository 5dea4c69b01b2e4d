#pragma once

// Simulation trace, the brute-force oracle over it, and the metrics ledger
// with its CSV / JSON renderings.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "brvst/config.hpp"
#include "brvst/event.hpp"

namespace brvst {

struct TraceSub {
  Subscription sub;
  double start = 0.0;
  double end = 0.0;
};

struct TracePub {
  Publication pub;
  double time = 0.0;
};

struct TraceDelivery {
  PubId pub = 0;
  SubId sub = 0;
  double time = 0.0;
};

struct Trace {
  double alpha = 0.9;
  int max_level = 16;
  int fixed_level = -1;
  int schema_size = 15;
  double cache_ttl = 120.0;
  double end_time = 0.0;
  std::vector<TraceSub> subs;
  std::vector<TracePub> pubs;
  std::vector<TraceDelivery> deliveries;

  ArvConfig arv() const {
    ArvConfig c;
    c.alpha = alpha;
    c.max_level = max_level;
    if (fixed_level >= 0) c.fixed_level = fixed_level;
    return c;
  }
};

struct AttributeDisagreement {
  std::uint64_t pairs = 0;           // (p, s) attribute pairs compared
  std::uint64_t arv_only = 0;        // ARV subset holds, interval containment does not
  std::uint64_t interval_only = 0;   // interval containment holds, ARV subset does not
};

struct OracleCounts {
  std::uint64_t deliveries = 0;
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t unexplained = 0;  // deliveries where match_event is false
  std::map<AttrId, AttributeDisagreement> per_attribute;

  double fp_rate() const {
    return deliveries == 0 ? 0.0 : static_cast<double>(false_positives) / static_cast<double>(deliveries);
  }
  double fn_rate() const {
    const auto positives = true_positives + false_negatives;
    return positives == 0 ? 0.0 : static_cast<double>(false_negatives) / static_cast<double>(positives);
  }
};

// FP: delivered but not exactly matching. FN: exactly matching, both alive at
// once (publication within its cache lifetime), never delivered.
inline OracleCounts classify(const Trace& trace) {
  OracleCounts out;
  const auto schema = SchemaRegistry::with_default_attributes(static_cast<std::size_t>(trace.schema_size));
  std::map<SubId, const TraceSub*> subs;
  std::map<PubId, const TracePub*> pubs;
  for (const auto& s : trace.subs) subs[s.sub.sub_id] = &s;
  for (const auto& p : trace.pubs) pubs[p.pub.pub_id] = &p;

  std::set<std::pair<PubId, SubId>> delivered;
  for (const auto& d : trace.deliveries) {
    if (!delivered.insert({d.pub, d.sub}).second) continue;
    ++out.deliveries;
    const auto* s = subs.at(d.sub);
    const auto* p = pubs.at(d.pub);
    if (exact_match(p->pub, s->sub)) {
      ++out.true_positives;
    } else {
      ++out.false_positives;
    }
    if (!match_event(p->pub, s->sub)) ++out.unexplained;
  }

  for (const auto& s : trace.subs) {
    for (const auto& p : trace.pubs) {
      for (const auto& sa : s.sub.attrs) {
        for (const auto& pa : p.pub.attrs) {
          if (pa.attr_id != sa.attr_id) continue;
          auto& d = out.per_attribute[sa.attr_id];
          ++d.pairs;
          const bool arv = arv_match(pa.arv, sa.arv);
          const bool exact = sa.range.contains(pa.range);
          if (arv && !exact) ++d.arv_only;
          if (exact && !arv) ++d.interval_only;
        }
      }
      const double sub_end = std::min(s.end, trace.end_time);
      const bool concurrent = s.start < p.time + trace.cache_ttl && p.time < sub_end;
      if (!concurrent || !exact_match(p.pub, s.sub)) continue;
      if (!delivered.contains({p.pub.pub_id, s.sub.sub_id})) ++out.false_negatives;
    }
  }
  return out;
}

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

inline std::string fmt_attrs(const std::vector<AttributeInstance>& attrs) {
  std::string out;
  for (const auto& a : attrs) {
    out += ' ' + std::to_string(a.attr_id) + '=' + fmt_double(a.range.lo) + ".." + fmt_double(a.range.hi);
  }
  return out;
}

}  // namespace detail

// Text trace: `#` header lines with key=value parameters, then
// `S <id> <node> <start> <end> attrs...`, `P <id> <node> <time> bytes=<n> attrs...`
// and `D <pub> <sub> <time>` records.
inline void write_trace(std::ostream& out, const Trace& t) {
  out << "# brvst-trace v1\n";
  out << "# alpha=" << detail::fmt_double(t.alpha) << '\n';
  out << "# max_level=" << t.max_level << '\n';
  out << "# fixed_level=" << t.fixed_level << '\n';
  out << "# schema_size=" << t.schema_size << '\n';
  out << "# cache_ttl=" << detail::fmt_double(t.cache_ttl) << '\n';
  out << "# end_time=" << detail::fmt_double(t.end_time) << '\n';
  for (const auto& s : t.subs) {
    out << "S " << s.sub.sub_id << ' ' << s.sub.subscriber << ' ' << detail::fmt_double(s.start) << ' '
        << detail::fmt_double(s.end) << detail::fmt_attrs(s.sub.attrs) << '\n';
  }
  for (const auto& p : t.pubs) {
    out << "P " << p.pub.pub_id << ' ' << p.pub.publisher << ' ' << detail::fmt_double(p.time)
        << " bytes=" << p.pub.payload_size << detail::fmt_attrs(p.pub.attrs) << '\n';
  }
  for (const auto& d : t.deliveries) {
    out << "D " << d.pub << ' ' << d.sub << ' ' << detail::fmt_double(d.time) << '\n';
  }
}

inline Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  bool magic = false;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw DecodeError("corrupt trace: " + why + " (line " + std::to_string(lineno) + ")", 0);
  };
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == "# brvst-trace v1") {
        magic = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos || line.size() < 3) continue;
      const std::string key = detail::trim(line.substr(1, eq - 1));
      const std::string value = detail::trim(line.substr(eq + 1));
      try {
        if (key == "alpha") detail::parse_value(key, value, t.alpha);
        else if (key == "max_level") detail::parse_value(key, value, t.max_level);
        else if (key == "fixed_level") detail::parse_value(key, value, t.fixed_level);
        else if (key == "schema_size") detail::parse_value(key, value, t.schema_size);
        else if (key == "cache_ttl") detail::parse_value(key, value, t.cache_ttl);
        else if (key == "end_time") detail::parse_value(key, value, t.end_time);
      } catch (const ConfigError& e) {
        fail(e.what());
      }
      continue;
    }
    body.push_back(line);
  }
  if (!magic) throw DecodeError("corrupt trace: missing header", 0);
  if (t.schema_size < 1) throw DecodeError("corrupt trace: bad schema_size", 0);
  const auto schema = SchemaRegistry::with_default_attributes(static_cast<std::size_t>(t.schema_size));
  ArvConfig arv;
  try {
    arv = t.arv();
    validate(arv);
  } catch (const Error& e) {
    throw DecodeError(std::string("corrupt trace: ") + e.what(), 0);
  }
  lineno = 0;
  for (const auto& l : body) {
    ++lineno;
    std::istringstream ls(l);
    std::string kind;
    ls >> kind;
    try {
      if (kind == "S" || kind == "P") {
        std::string id, node, t1, t2;
        ls >> id >> node >> t1;
        if (kind == "S") ls >> t2;
        if (!ls) fail("short record");
        std::string rest;
        std::getline(ls, rest);
        const auto ev = parse_fixture_line(kind + ' ' + id + ' ' + node + rest, schema, arv);
        double a = 0.0, b = 0.0;
        detail::parse_value("time", t1, a);
        if (kind == "S") {
          detail::parse_value("time", t2, b);
          t.subs.push_back({std::get<Subscription>(ev), a, b});
        } else {
          t.pubs.push_back({std::get<Publication>(ev), a});
        }
      } else if (kind == "D") {
        TraceDelivery d;
        if (!(ls >> d.pub >> d.sub >> d.time)) fail("bad delivery record");
        t.deliveries.push_back(d);
      } else {
        fail("unknown record '" + kind + "'");
      }
    } catch (const DecodeError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  std::set<SubId> sub_ids;
  std::set<PubId> pub_ids;
  for (const auto& s : t.subs) sub_ids.insert(s.sub.sub_id);
  for (const auto& p : t.pubs) pub_ids.insert(p.pub.pub_id);
  for (const auto& d : t.deliveries) {
    if (!sub_ids.contains(d.sub) || !pub_ids.contains(d.pub)) {
      throw DecodeError("corrupt trace: delivery references unknown id", 0);
    }
  }
  return t;
}

struct LatencySample {
  std::uint32_t id = 0;
  double value = 0.0;
};

struct StorageSample {
  double time = 0.0;
  double broker_mean = 0.0;
  double nonbroker_mean = 0.0;
  double node_mean = 0.0;
  double naive_broker_mean = 0.0;  // flat comparison broker
  std::size_t brokers = 0;
};

struct MetricsLedger {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  std::vector<LatencySample> pub_latency;
  std::vector<LatencySample> sub_latency;
  std::vector<StorageSample> storage;

  std::map<std::string, std::uint64_t> traffic_by_kind;
  std::map<std::string, std::uint64_t> messages_by_kind;
  std::uint64_t total_traffic = 0;

  std::uint64_t subscriptions = 0;
  std::uint64_t publications = 0;
  std::uint64_t unique_deliveries = 0;
  std::uint64_t duplicate_deliveries = 0;
  std::uint64_t stale_deliveries = 0;
  std::uint64_t handoffs = 0;
  std::uint64_t saturated_arvs = 0;
  std::uint64_t protocol_errors = 0;
  std::uint64_t match_tests = 0;

  OracleCounts oracle;

  static double mean(const std::vector<LatencySample>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (const auto& x : v) s += x.value;
    return s / static_cast<double>(v.size());
  }

  double mean_pub_latency() const { return mean(pub_latency); }
  double mean_sub_latency() const { return mean(sub_latency); }

  // Publication and subscription samples together.
  double mean_match_latency() const {
    const double n = static_cast<double>(pub_latency.size() + sub_latency.size());
    if (n == 0) return 0.0;
    return (mean(pub_latency) * static_cast<double>(pub_latency.size()) +
            mean(sub_latency) * static_cast<double>(sub_latency.size())) / n;
  }

  double mean_broker_storage() const {
    if (storage.empty()) return 0.0;
    double s = 0.0;
    for (const auto& x : storage) s += x.broker_mean;
    return s / static_cast<double>(storage.size());
  }

  double mean_node_storage() const {
    if (storage.empty()) return 0.0;
    double s = 0.0;
    for (const auto& x : storage) s += x.node_mean;
    return s / static_cast<double>(storage.size());
  }

  double mean_naive_broker_storage() const {
    if (storage.empty()) return 0.0;
    double s = 0.0;
    for (const auto& x : storage) s += x.naive_broker_mean;
    return s / static_cast<double>(storage.size());
  }

  double mean_nonbroker_storage() const {
    if (storage.empty()) return 0.0;
    double s = 0.0;
    for (const auto& x : storage) s += x.nonbroker_mean;
    return s / static_cast<double>(storage.size());
  }

  std::uint64_t control_traffic() const {
    std::uint64_t c = 0;
    for (const auto& [k, v] : traffic_by_kind) {
      if (k != "PUB" && k != "DATA_DELIVER") c += v;
    }
    return c;
  }

  double traffic_per_match() const {
    return unique_deliveries == 0 ? 0.0
                                  : static_cast<double>(total_traffic) / static_cast<double>(unique_deliveries);
  }
};

inline constexpr const char* kLedgerCsvColumns = "kind,time,id,value";

// CSV contract v1: comment header with config hash and seed, then
// `kind,time,id,value` rows. Kinds: pub_latency, sub_latency (time = 0,
// id = publication/subscription id, value = seconds) and storage_broker,
// storage_nonbroker, storage_node, storage_naive_broker (id = broker count, value = mean bytes).
inline void write_ledger_csv(std::ostream& out, const MetricsLedger& l) {
  out << "# brvst-ledger v1\n";
  out << "# config_hash=" << std::hex << std::setw(16) << std::setfill('0') << l.config_hash << std::dec
      << std::setfill(' ') << '\n';
  out << "# seed=" << l.seed << '\n';
  out << kLedgerCsvColumns << '\n';
  for (const auto& s : l.pub_latency) out << "pub_latency,0," << s.id << ',' << detail::fmt_double(s.value) << '\n';
  for (const auto& s : l.sub_latency) out << "sub_latency,0," << s.id << ',' << detail::fmt_double(s.value) << '\n';
  for (const auto& s : l.storage) {
    const auto t = detail::fmt_double(s.time);
    out << "storage_broker," << t << ',' << s.brokers << ',' << detail::fmt_double(s.broker_mean) << '\n';
    out << "storage_nonbroker," << t << ',' << s.brokers << ',' << detail::fmt_double(s.nonbroker_mean) << '\n';
    out << "storage_node," << t << ',' << s.brokers << ',' << detail::fmt_double(s.node_mean) << '\n';
    out << "storage_naive_broker," << t << ',' << s.brokers << ',' << detail::fmt_double(s.naive_broker_mean)
        << '\n';
  }
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

inline nlohmann::json oracle_json(const OracleCounts& o) {
  nlohmann::json per_attr = nlohmann::json::object();
  for (const auto& [id, d] : o.per_attribute) {
    per_attr[std::to_string(id)] = {{"pairs", d.pairs}, {"arv_only", d.arv_only}, {"interval_only", d.interval_only}};
  }
  return {{"deliveries", o.deliveries},
          {"true_positives", o.true_positives},
          {"false_positives", o.false_positives},
          {"false_negatives", o.false_negatives},
          {"unexplained", o.unexplained},
          {"fp_rate", o.fp_rate()},
          {"fn_rate", o.fn_rate()},
          {"per_attribute", per_attr}};
}

inline nlohmann::json summary_json(const MetricsLedger& l) {
  return {{"schema", "brvst-summary v1"},
          {"config_hash", hex64(l.config_hash)},
          {"seed", l.seed},
          {"subscriptions", l.subscriptions},
          {"publications", l.publications},
          {"unique_deliveries", l.unique_deliveries},
          {"duplicate_deliveries", l.duplicate_deliveries},
          {"stale_deliveries", l.stale_deliveries},
          {"mean_pub_latency", l.mean_pub_latency()},
          {"mean_sub_latency", l.mean_sub_latency()},
          {"mean_match_latency", l.mean_match_latency()},
          {"pub_latency_samples", l.pub_latency.size()},
          {"sub_latency_samples", l.sub_latency.size()},
          {"mean_broker_storage", l.mean_broker_storage()},
          {"mean_nonbroker_storage", l.mean_nonbroker_storage()},
          {"mean_node_storage", l.mean_node_storage()},
          {"mean_naive_broker_storage", l.mean_naive_broker_storage()},
          {"total_traffic", l.total_traffic},
          {"control_traffic", l.control_traffic()},
          {"traffic_per_match", l.traffic_per_match()},
          {"traffic_by_kind", l.traffic_by_kind},
          {"messages_by_kind", l.messages_by_kind},
          {"handoffs", l.handoffs},
          {"saturated_arvs", l.saturated_arvs},
          {"protocol_errors", l.protocol_errors},
          {"match_tests", l.match_tests},
          {"oracle", oracle_json(l.oracle)}};
}

}  // namespace brvst
