#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netbound/info.hpp"

namespace netbound {

// Malformed or out-of-range user input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class NodeKind { terminal, auxiliary };

struct Node {
  std::string id;
  NodeKind kind = NodeKind::terminal;
  bool operator==(const Node&) const = default;
};

enum class LinkKind { awgn, qsc, bsc };

inline const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::awgn: return "awgn";
    case LinkKind::qsc: return "qsc";
    case LinkKind::bsc: return "bsc";
  }
  return "?";
}

struct NoisyLink {
  std::string from;
  std::string to;
  LinkKind kind = LinkKind::awgn;
  double snr = 0;  // linear, awgn only
  int q = 0;       // qsc only
  double xi = 0;   // qsc only
  double eps = 0;  // bsc only
  bool operator==(const NoisyLink&) const = default;
};

inline bool is_gaussian(const NoisyLink& l) { return l.kind == LinkKind::awgn; }

inline double link_capacity(const NoisyLink& l) {
  switch (l.kind) {
    case LinkKind::awgn: return awgn_capacity(l.snr);
    case LinkKind::qsc: return qsc_capacity(l.q, l.xi);
    case LinkKind::bsc: return bsc_capacity(l.eps);
  }
  return 0;
}

enum class DemandKind { unicast, multicast };

struct Demand {
  DemandKind kind = DemandKind::unicast;
  std::string source;
  std::vector<std::string> sinks;
  bool operator==(const Demand&) const = default;
};

inline std::string describe(const Demand& d) {
  std::string s = d.source + "->";
  for (std::size_t i = 0; i < d.sinks.size(); ++i) s += (i ? "," : "") + d.sinks[i];
  return s;
}

struct NoisyNetwork {
  std::vector<std::string> nodes;
  std::vector<NoisyLink> links;
  std::vector<Demand> demands;
  bool operator==(const NoisyNetwork&) const = default;

  bool has_node(const std::string& id) const {
    return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
  }
};

struct BitPipe {
  std::string tail;
  std::vector<std::string> heads;  // more than one head: hyper-arc
  double rate = 0;
  std::string provenance;
  bool is_hyperarc() const { return heads.size() > 1; }
};

// Sum of the loads on a set of pipes is bounded by cap (joint decoding
// regions of lower models).
struct JointConstraint {
  std::vector<std::size_t> pipes;
  double cap = 0;
  std::string provenance;
};

struct NoiselessNetwork {
  std::vector<Node> nodes;
  std::vector<BitPipe> pipes;
  std::vector<JointConstraint> joint;

  bool has_node(const std::string& id) const {
    return std::any_of(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
  }
  void add_node(const std::string& id, NodeKind kind) {
    if (!has_node(id)) nodes.push_back({id, kind});
  }
  std::size_t add_pipe(std::string tail, std::vector<std::string> heads, double rate, std::string why) {
    pipes.push_back({std::move(tail), std::move(heads), rate, std::move(why)});
    return pipes.size() - 1;
  }
  int node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return int(i);
    return -1;
  }
};

enum class Role { upper, lower };

inline std::vector<std::string> validate_bounding_network(const NoiselessNetwork& n, Role role) {
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& node : n.nodes) {
    if (node.id.empty()) out.push_back("node with empty id");
    if (!ids.insert(node.id).second) out.push_back("duplicate node id " + node.id);
  }
  for (std::size_t i = 0; i < n.pipes.size(); ++i) {
    const auto& p = n.pipes[i];
    const std::string tag = "pipe " + std::to_string(i) + " (" + p.provenance + ")";
    if (p.provenance.empty()) out.push_back(tag + ": missing provenance");
    if (!ids.count(p.tail)) out.push_back(tag + ": unknown tail " + p.tail);
    if (p.heads.empty()) out.push_back(tag + ": no heads");
    std::set<std::string> hs;
    for (const auto& h : p.heads) {
      if (!ids.count(h)) out.push_back(tag + ": unknown head " + h);
      if (h == p.tail) out.push_back(tag + ": head equals tail");
      if (!hs.insert(h).second) out.push_back(tag + ": repeated head " + h);
    }
    if (std::isnan(p.rate) || p.rate < 0) out.push_back(tag + ": negative rate");
    if (role == Role::upper && p.heads.size() > 1) out.push_back(tag + ": hyper-arc in upper network");
  }
  for (std::size_t i = 0; i < n.joint.size(); ++i) {
    const auto& j = n.joint[i];
    const std::string tag = "joint constraint " + std::to_string(i);
    if (role == Role::upper) out.push_back(tag + ": joint constraint in upper network");
    if (std::isnan(j.cap) || j.cap < 0) out.push_back(tag + ": negative cap");
    for (auto k : j.pipes)
      if (k >= n.pipes.size()) out.push_back(tag + ": unknown pipe " + std::to_string(k));
  }
  return out;
}

namespace detail {

using nlohmann::json;

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw InputError(where + ": unknown key '" + it.key() + "'");
  }
}

inline std::string get_string(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw InputError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline double get_number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw InputError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(where + "." + key + ": not finite");
  return d;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// Throws InputError naming the offending field.
inline void validate_network(const NoisyNetwork& net) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto& id = net.nodes[i];
    const std::string where = "nodes[" + std::to_string(i) + "]";
    if (id.empty()) throw InputError(where + ": empty node id");
    if (id[0] == '~') throw InputError(where + ": ids starting with '~' are reserved");
    if (!ids.insert(id).second) throw InputError(where + ": duplicate node id '" + id + "'");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < net.links.size(); ++i) {
    const auto& l = net.links[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (!ids.count(l.from)) throw InputError(where + ".from: unknown node '" + l.from + "'");
    if (!ids.count(l.to)) throw InputError(where + ".to: unknown node '" + l.to + "'");
    if (l.from == l.to) throw InputError(where + ": self-loop at '" + l.from + "'");
    if (!seen.insert({l.from, l.to}).second)
      throw InputError(where + ": duplicate link " + l.from + "->" + l.to);
    switch (l.kind) {
      case LinkKind::awgn:
        if (!(l.snr >= 0) || !std::isfinite(l.snr))
          throw InputError(where + ".snr: " + detail::fmt(l.snr) + " must be a finite value >= 0");
        break;
      case LinkKind::qsc:
        if (l.q < 2) throw InputError(where + ".q: " + std::to_string(l.q) + " must be an integer >= 2");
        if (!(l.xi >= 0 && l.xi < 1)) throw InputError(where + ".xi: " + detail::fmt(l.xi) + " outside [0,1)");
        if (l.xi > double(l.q - 1) / l.q + 1e-15)
          throw InputError(where + ".xi: " + detail::fmt(l.xi) + " exceeds (q-1)/q");
        break;
      case LinkKind::bsc:
        if (!(l.eps >= 0 && l.eps <= 0.5))
          throw InputError(where + ".eps: " + detail::fmt(l.eps) + " outside [0,1/2]");
        break;
    }
  }
  for (std::size_t i = 0; i < net.demands.size(); ++i) {
    const auto& d = net.demands[i];
    const std::string where = "demands[" + std::to_string(i) + "]";
    if (!ids.count(d.source)) throw InputError(where + ".source: unknown node '" + d.source + "'");
    if (d.sinks.empty()) throw InputError(where + ".sinks: empty");
    if (d.kind == DemandKind::unicast && d.sinks.size() != 1)
      throw InputError(where + ".sinks: unicast demand needs exactly one sink");
    std::set<std::string> s;
    for (const auto& t : d.sinks) {
      if (!ids.count(t)) throw InputError(where + ".sinks: unknown node '" + t + "'");
      if (t == d.source) throw InputError(where + ".sinks: contains the source");
      if (!s.insert(t).second) throw InputError(where + ".sinks: repeated sink '" + t + "'");
    }
  }
}

inline NoisyNetwork parse_network(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError("parse error at " + detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  detail::only_keys(doc, "document", {"nodes", "links", "demands"});
  NoisyNetwork net;
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw InputError("document: 'nodes' must be a list");
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const json& v = doc["nodes"][i];
    if (!v.is_string()) throw InputError("nodes[" + std::to_string(i) + "]: expected a string");
    net.nodes.push_back(v.get<std::string>());
  }
  if (!doc.contains("links") || !doc["links"].is_array()) throw InputError("document: 'links' must be a list");
  for (std::size_t i = 0; i < doc["links"].size(); ++i) {
    const json& o = doc["links"][i];
    const std::string where = "links[" + std::to_string(i) + "]";
    detail::only_keys(o, where, {"from", "to", "kind", "snr", "snr_db", "q", "xi", "eps"});
    NoisyLink l;
    l.from = detail::get_string(o, where, "from");
    l.to = detail::get_string(o, where, "to");
    const std::string kind = detail::get_string(o, where, "kind");
    auto forbid = [&](std::initializer_list<const char*> keys) {
      for (const char* k : keys)
        if (o.contains(k)) throw InputError(where + "." + k + ": not allowed for kind '" + kind + "'");
    };
    if (kind == "awgn") {
      l.kind = LinkKind::awgn;
      forbid({"q", "xi", "eps"});
      const bool lin = o.contains("snr"), db = o.contains("snr_db");
      if (lin && db) throw InputError(where + ": give either 'snr' or 'snr_db', not both");
      if (!lin && !db) throw InputError(where + ": missing 'snr' or 'snr_db'");
      l.snr = lin ? detail::get_number(o, where, "snr")
                  : std::pow(10.0, detail::get_number(o, where, "snr_db") / 10.0);
    } else if (kind == "qsc") {
      l.kind = LinkKind::qsc;
      forbid({"snr", "snr_db", "eps"});
      const double q = detail::get_number(o, where, "q");
      if (q != std::floor(q) || q < 2 || q > 1e9) throw InputError(where + ".q: must be an integer >= 2");
      l.q = int(q);
      l.xi = detail::get_number(o, where, "xi");
    } else if (kind == "bsc") {
      l.kind = LinkKind::bsc;
      forbid({"snr", "snr_db", "q", "xi"});
      l.eps = detail::get_number(o, where, "eps");
    } else {
      throw InputError(where + ".kind: unknown kind '" + kind + "'");
    }
    net.links.push_back(l);
  }
  if (doc.contains("demands")) {
    if (!doc["demands"].is_array()) throw InputError("document: 'demands' must be a list");
    for (std::size_t i = 0; i < doc["demands"].size(); ++i) {
      const json& o = doc["demands"][i];
      const std::string where = "demands[" + std::to_string(i) + "]";
      detail::only_keys(o, where, {"kind", "source", "sinks"});
      Demand d;
      const std::string kind = detail::get_string(o, where, "kind");
      if (kind == "unicast") d.kind = DemandKind::unicast;
      else if (kind == "multicast") d.kind = DemandKind::multicast;
      else throw InputError(where + ".kind: unknown kind '" + kind + "'");
      d.source = detail::get_string(o, where, "source");
      if (!o.contains("sinks") || !o["sinks"].is_array()) throw InputError(where + ".sinks: expected a list");
      for (const json& s : o["sinks"]) {
        if (!s.is_string()) throw InputError(where + ".sinks: expected strings");
        d.sinks.push_back(s.get<std::string>());
      }
      net.demands.push_back(d);
    }
  }
  validate_network(net);
  return net;
}

inline NoisyNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

inline std::string serialize_network(const NoisyNetwork& net) {
  using detail::json;
  json doc;
  doc["nodes"] = net.nodes;
  doc["links"] = json::array();
  for (const auto& l : net.links) {
    json o{{"from", l.from}, {"to", l.to}, {"kind", to_string(l.kind)}};
    if (l.kind == LinkKind::awgn) o["snr"] = l.snr;
    if (l.kind == LinkKind::qsc) {
      o["q"] = l.q;
      o["xi"] = l.xi;
    }
    if (l.kind == LinkKind::bsc) o["eps"] = l.eps;
    doc["links"].push_back(o);
  }
  doc["demands"] = json::array();
  for (const auto& d : net.demands)
    doc["demands"].push_back(
        {{"kind", d.kind == DemandKind::unicast ? "unicast" : "multicast"}, {"source", d.source}, {"sinks", d.sinks}});
  return doc.dump(2);
}

}  // namespace netbound
