#include "safctl/network_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "safctl/errors.hpp"
#include "safctl/jsonutil.hpp"

namespace safctl {

using nlohmann::json;
using nlohmann::ordered_json;

TrafficNetwork network_from_json(const json& doc) {
  check_keys(doc, {"links", "turns", "junctions", "cycle"}, "network");

  TrafficNetwork net;
  net.cycle = require_number(doc, "cycle", "network");

  const json& links = require_array(doc, "links", "network");
  const int z = static_cast<int>(links.size());
  net.z_count = z;
  net.x_max = VecX::Zero(z);
  net.sat_flow = VecX::Zero(z);
  net.exit_rate = VecX::Zero(z);
  std::set<int> seen_links;
  for (const json& link : links) {
    check_keys(link, {"id", "x_max", "sat_flow", "exit_rate"}, "link");
    const int id = require_int(link, "id", "link");
    if (id < 1 || id > z || !seen_links.insert(id).second) {
      throw ConfigError("link ids must be 1.." + std::to_string(z) + " without repeats (got " +
                        std::to_string(id) + ")");
    }
    net.x_max(id - 1) = require_number(link, "x_max", "link");
    net.sat_flow(id - 1) = require_number(link, "sat_flow", "link");
    net.exit_rate(id - 1) = require_number(link, "exit_rate", "link");
  }

  net.turn = MatX::Zero(z, z);
  const json& turns = require_array(doc, "turns", "network");
  for (const json& t : turns) {
    check_keys(t, {"from", "to", "rate"}, "turn");
    const int from = require_int(t, "from", "turn");
    const int to = require_int(t, "to", "turn");
    if (from < 1 || from > z || to < 1 || to > z) {
      throw ConfigError("turn references unknown link (" + std::to_string(from) + " -> " +
                        std::to_string(to) + ")");
    }
    if (net.turn(to - 1, from - 1) != 0.0) {
      throw ConfigError("duplicate turn entry " + std::to_string(from) + " -> " + std::to_string(to));
    }
    net.turn(to - 1, from - 1) = require_number(t, "rate", "turn");
  }

  const json& junctions = require_array(doc, "junctions", "network");
  const int j = static_cast<int>(junctions.size());
  net.j_count = j;
  net.lost_time = VecX::Zero(j);
  net.junction_stages.assign(j, {});

  // First pass counts stages so the stage matrix can be sized up front.
  int s = 0;
  for (const json& jn : junctions) {
    const json& stages = require_array(jn, "stages", "junction");
    s += static_cast<int>(stages.size());
  }
  net.s_count = s;
  net.g_min = VecX::Zero(s);
  net.stage_matrix = MatX::Zero(z, s);

  std::set<int> seen_junctions;
  std::set<int> seen_stages;
  for (const json& jn : junctions) {
    check_keys(jn, {"id", "lost_time", "stages"}, "junction");
    const int jid = require_int(jn, "id", "junction");
    if (jid < 1 || jid > j || !seen_junctions.insert(jid).second) {
      throw ConfigError("junction ids must be 1.." + std::to_string(j) + " without repeats (got " +
                        std::to_string(jid) + ")");
    }
    net.lost_time(jid - 1) = require_number(jn, "lost_time", "junction");
    for (const json& st : jn.at("stages")) {
      check_keys(st, {"id", "g_min", "links"}, "stage");
      const int sid = require_int(st, "id", "stage");
      if (sid < 1 || sid > s) {
        throw ConfigError("stage ids must be 1.." + std::to_string(s) + " (got " +
                          std::to_string(sid) + ")");
      }
      if (!seen_stages.insert(sid).second) {
        throw ConfigError("stage in two junctions (stage " + std::to_string(sid) + ")");
      }
      net.junction_stages[jid - 1].push_back(sid - 1);
      net.g_min(sid - 1) = require_number(st, "g_min", "stage");
      for (const json& lk : require_array(st, "links", "stage")) {
        if (!lk.is_number_integer()) throw ConfigError("stage links must be integer ids");
        const int lid = lk.get<int>();
        if (lid < 1 || lid > z) {
          throw ConfigError("stage " + std::to_string(sid) + " references unknown link " +
                            std::to_string(lid));
        }
        net.stage_matrix(lid - 1, sid - 1) = 1.0;
      }
    }
  }

  return prepare_network(std::move(net));
}

ordered_json network_to_json(const TrafficNetwork& net) {
  ordered_json doc;

  doc["links"] = ordered_json::array();
  for (int i = 0; i < net.z_count; ++i) {
    ordered_json link;
    link["id"] = i + 1;
    link["x_max"] = net.x_max(i);
    link["sat_flow"] = net.sat_flow(i);
    link["exit_rate"] = net.exit_rate(i);
    doc["links"].push_back(std::move(link));
  }

  doc["turns"] = ordered_json::array();
  for (int from = 0; from < net.z_count; ++from) {
    for (int to = 0; to < net.z_count; ++to) {
      if (net.turn(to, from) != 0.0) {
        ordered_json t;
        t["from"] = from + 1;
        t["to"] = to + 1;
        t["rate"] = net.turn(to, from);
        doc["turns"].push_back(std::move(t));
      }
    }
  }

  doc["junctions"] = ordered_json::array();
  for (int j = 0; j < net.j_count; ++j) {
    ordered_json jn;
    jn["id"] = j + 1;
    jn["lost_time"] = net.lost_time(j);
    jn["stages"] = ordered_json::array();
    std::vector<int> stages = net.junction_stages[j];
    std::sort(stages.begin(), stages.end());
    for (int s : stages) {
      ordered_json st;
      st["id"] = s + 1;
      st["g_min"] = net.g_min(s);
      st["links"] = ordered_json::array();
      for (int z = 0; z < net.z_count; ++z) {
        if (net.stage_matrix(z, s) == 1.0) st["links"].push_back(z + 1);
      }
      jn["stages"].push_back(std::move(st));
    }
    doc["junctions"].push_back(std::move(jn));
  }

  doc["cycle"] = net.cycle;
  return doc;
}

std::string network_to_string(const TrafficNetwork& net) {
  return network_to_json(net).dump(2) + "\n";
}

TrafficNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open network file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("network file " + path + ": " + e.what());
  }
  return network_from_json(doc);
}

void save_network(const TrafficNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write network file: " + path);
  out << network_to_string(net);
}

}  // namespace safctl
