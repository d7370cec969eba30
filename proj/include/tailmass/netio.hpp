#pragma once

// Belief network file format: a JSON object with three parallel arrays,
//   variables: [{"name": str, "cardinality": int}, ...]
//   parents:   [[ancestor indices, ascending], ...]
//   cpts:      [[row, ...], ...]  with one row (length = cardinality,
//              summing to 1) per joint parent state, first parent most
//              significant.
// Writing renders probabilities with 17 significant digits so a saved network
// loads back bit-identically; reading validates the structure and rejects
// invalid networks.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tailmass/bayesnet.hpp"
#include "tailmass/csv.hpp"
#include "tailmass/errors.hpp"

namespace tailmass {

inline void write_network(std::ostream& os, const BayesNet& net) {
  os << "{\n  \"variables\": [";
  for (std::size_t v = 0; v < net.variables.size(); ++v) {
    if (v) os << ',';
    os << "\n    {\"name\": " << nlohmann::json(net.variables[v].name).dump()
       << ", \"cardinality\": " << net.variables[v].cardinality << "}";
  }
  os << "\n  ],\n  \"parents\": [";
  for (std::size_t v = 0; v < net.parents.size(); ++v) {
    if (v) os << ',';
    os << "\n    [";
    for (std::size_t k = 0; k < net.parents[v].size(); ++k) {
      if (k) os << ", ";
      os << net.parents[v][k];
    }
    os << ']';
  }
  os << "\n  ],\n  \"cpts\": [";
  for (std::size_t v = 0; v < net.cpts.size(); ++v) {
    if (v) os << ',';
    os << "\n    [";
    for (std::size_t r = 0; r < net.cpts[v].size(); ++r) {
      if (r) os << ",";
      os << "\n      [";
      for (std::size_t s = 0; s < net.cpts[v][r].size(); ++s) {
        if (s) os << ", ";
        os << format_double_exact(net.cpts[v][r][s]);
      }
      os << ']';
    }
    os << "\n    ]";
  }
  os << "\n  ]\n}\n";
}

inline void save_network(const std::string& path, const BayesNet& net) {
  auto os = open_output(path);
  write_network(os, net);
  if (!os) throw IoError("failed writing network to " + path);
}

inline BayesNet read_network(std::istream& is, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(origin + ": not valid JSON: " + e.what());
  }
  BayesNet net;
  try {
    for (const auto& item : doc.at("variables"))
      net.variables.push_back(
          {item.at("name").get<std::string>(), item.at("cardinality").get<int>()});
    net.parents = doc.at("parents").get<std::vector<std::vector<int>>>();
    net.cpts =
        doc.at("cpts").get<std::vector<std::vector<std::vector<double>>>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(origin + ": wrong network shape: " + e.what());
  }
  const ValidationReport report = validate(net);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << origin << ": invalid network";
    for (const auto& issue : report.issues) {
      msg << "; ";
      if (issue.variable >= 0) msg << "variable " << issue.variable << ": ";
      msg << issue.message;
    }
    throw IoError(msg.str());
  }
  return net;
}

inline BayesNet load_network(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open network file: " + path);
  return read_network(is, path);
}

}  // namespace tailmass
