#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dqform/dq_matrix.hpp"
#include "dqform/dual_quaternion.hpp"
#include "dqform/errors.hpp"
#include "dqform/graph.hpp"
#include "dqform/hermitian_eigen.hpp"
#include "dqform/simulation.hpp"

namespace dqform {

// All numeric output is written in full 17-significant-digit decimal so that
// reruns are byte-comparable. Indices are 0-based in input files and 1-based
// in emitted reports.

inline std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal deterministic JSON writer (insertion order preserved, numbers via
/// formatDouble).
class JsonWriter {
 public:
  JsonWriter& beginObject() { return open('{'); }
  JsonWriter& endObject() { return close('}'); }
  JsonWriter& beginArray() { return open('['); }
  JsonWriter& endArray() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_ = false;
    return *this;
  }

  JsonWriter& value(double v) { return item(formatDouble(v)); }
  JsonWriter& value(int v) { return item(std::to_string(v)); }
  JsonWriter& value(std::uint64_t v) { return item(std::to_string(v)); }
  JsonWriter& value(bool v) { return item(v ? "true" : "false"); }
  JsonWriter& value(const std::string& s) { return item('"' + s + '"'); }
  JsonWriter& value(const char* s) { return value(std::string(s)); }

  JsonWriter& value(const DualNumberd& x) {
    beginArray();
    value(x.s);
    value(x.d);
    return endArray();
  }

  const std::string& str() const { return out_; }

 private:
  JsonWriter& open(char c) {
    comma();
    out_ += c;
    pending_ = false;
    return *this;
  }
  JsonWriter& close(char c) {
    out_ += c;
    pending_ = true;
    return *this;
  }
  JsonWriter& item(const std::string& text) {
    comma();
    out_ += text;
    pending_ = true;
    return *this;
  }
  void comma() {
    if (pending_) out_ += ',';
    pending_ = false;
  }

  std::string out_;
  bool pending_ = false;
};

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline nlohmann::json loadJsonFile(const std::string& path) {
  const std::string text = readFile(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Parsing (0-based indices in files)
// ---------------------------------------------------------------------------

inline DualQuaterniond dualQuaternionFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 8) throw ParseError("dual quaternion entries need 8 reals");
  double c[8];
  for (int t = 0; t < 8; ++t) {
    if (!j[std::size_t(t)].is_number()) throw ParseError("dual quaternion component not a number");
    c[t] = j[std::size_t(t)].get<double>();
  }
  return {{c[0], c[1], c[2], c[3]}, {c[4], c[5], c[6], c[7]}};
}

inline DualQuaterniond twistFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 6) throw ParseError("twists need 6 reals (angular, dual)");
  double c[6];
  for (int t = 0; t < 6; ++t) {
    if (!j[std::size_t(t)].is_number()) throw ParseError("twist component not a number");
    c[t] = j[std::size_t(t)].get<double>();
  }
  return {{0, c[0], c[1], c[2]}, {0, c[3], c[4], c[5]}};
}

inline VisibilityGraph graphFromJson(const nlohmann::json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError("missing vertex count 'n'");
  VisibilityGraph g(j["n"].get<int>());
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edges must be [i, j] pairs");
      try {
        g.addEdge(e[0].get<int>(), e[1].get<int>());
      } catch (const DomainError& err) {
        throw ParseError(err.what());
      }
    }
  }
  return g;
}

inline PoseAssignment poseAssignmentFromJson(const nlohmann::json& j, int n) {
  PoseAssignment p;
  if (j.contains("poses")) {
    const auto& arr = j["poses"];
    if (int(arr.size()) != n) throw ParseError("pose count does not match 'n'");
    for (const auto& entry : arr) {
      try {
        p.poses.emplace_back(dualQuaternionFromJson(entry));
      } catch (const NotUnit& err) {
        throw ParseError(err.what());
      }
    }
  }
  if (j.contains("twists")) {
    const auto& arr = j["twists"];
    if (int(arr.size()) != n) throw ParseError("twist count does not match 'n'");
    for (const auto& entry : arr) p.twists.emplace_back(twistFromJson(entry));
  }
  if (j.contains("edge_twists")) {
    for (const auto& entry : j["edge_twists"]) {
      if (!entry.contains("i") || !entry.contains("j") || !entry.contains("twist"))
        throw ParseError("edge_twists entries need i, j, twist");
      p.edgeTwists[{entry["i"].get<int>(), entry["j"].get<int>()}] =
          twistFromJson(entry["twist"]);
    }
  }
  return p;
}

inline DQMatrix matrixFromJson(const nlohmann::json& j) {
  if (!j.contains("matrix") || !j["matrix"].is_array()) throw ParseError("missing 'matrix'");
  const auto& rows = j["matrix"];
  const Eigen::Index n = Eigen::Index(rows.size());
  DQMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[std::size_t(i)];
    if (Eigen::Index(row.size()) != n) throw ParseError("matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) a(i, c) = dualQuaternionFromJson(row[std::size_t(c)]);
  }
  return a;
}

inline Integrator integratorFromString(const std::string& name) {
  if (name == "euler") return Integrator::Euler;
  if (name == "rk4") return Integrator::Rk4;
  throw ParseError("unknown integrator '" + name + "' (want euler or rk4)");
}

inline const char* to_string(Integrator i) { return i == Integrator::Euler ? "euler" : "rk4"; }

/// Builds a Scenario from a graph/pose file with simulation fields. When
/// poses are present the Laplacian uses the relative configuration adjacency;
/// otherwise real unit weights (all edge entries 1).
inline Scenario scenarioFromJson(const nlohmann::json& j) {
  Scenario s;
  s.graph = graphFromJson(j);
  const int n = s.graph.vertexCount();
  PoseAssignment p = poseAssignmentFromJson(j, n);
  DQMatrix h;
  if (!p.poses.empty()) {
    h = buildAdjacency(s.graph, p, AdjacencyKind::Config);
  } else {
    h = DQMatrix::Zero(n, n);
    for (const auto& [i, jj] : s.graph.edges()) {
      h(i, jj) = DualQuaterniond(1.0);
      h(jj, i) = DualQuaterniond(1.0);
    }
  }
  s.bundle = laplacian(s.graph, h);

  if (!j.contains("z0")) throw ParseError("scenario needs 'z0'");
  const auto& z0 = j["z0"];
  if (int(z0.size()) != n) throw ParseError("z0 size does not match 'n'");
  s.z0.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) s.z0(i) = dualQuaternionFromJson(z0[std::size_t(i)]);

  if (j.contains("target")) {
    const auto& tv = j["target"];
    if (int(tv.size()) != n) throw ParseError("target size does not match 'n'");
    DQVector target(n);
    for (Eigen::Index i = 0; i < n; ++i) target(i) = dualQuaternionFromJson(tv[std::size_t(i)]);
    s.target = std::move(target);
  }
  if (j.contains("dt")) s.dt = j["dt"].get<double>();
  if (j.contains("T")) s.horizon = j["T"].get<double>();
  if (j.contains("integrator")) s.integrator = integratorFromString(j["integrator"].get<std::string>());
  if (!(s.dt > 0) || s.horizon < s.dt) throw ParseError("need dt > 0 and T >= dt");
  return s;
}

// ---------------------------------------------------------------------------
// Report emitters (1-based indices)
// ---------------------------------------------------------------------------

inline void writeRngHeader(JsonWriter& w, std::uint64_t seed) {
  w.key("rng").beginObject();
  w.key("name").value("splitmix64");
  w.key("seed").value(seed);
  w.endObject();
}

inline std::string spectrumReportJson(const HermitianEigenDecomposition& eig,
                                      const GershgorinReport& discs, double residual,
                                      Definiteness definiteness,
                                      std::optional<int> zeroMultiplicity, std::uint64_t seed) {
  JsonWriter w;
  w.beginObject();
  writeRngHeader(w, seed);
  w.key("eigenvalues").beginArray();
  for (const DualNumberd& lam : eig.eigenvalues) w.value(lam);
  w.endArray();
  w.key("eigenvalues_text").beginArray();
  for (const DualNumberd& lam : eig.eigenvalues) w.value(to_string(lam));
  w.endArray();
  w.key("clusters").beginArray();
  for (const auto& cluster : eig.clusters) {
    w.beginArray();
    for (int idx : cluster) w.value(idx + 1);
    w.endArray();
  }
  w.endArray();
  w.key("residual").value(residual);
  w.key("gershgorin").beginArray();
  for (std::size_t i = 0; i < discs.centers.size(); ++i) {
    w.beginObject();
    w.key("center").value(discs.centers[i]);
    w.key("radius").value(discs.radii[i]);
    w.endObject();
  }
  w.endArray();
  w.key("containment").beginObject();
  w.key("dual").beginArray();
  for (bool b : discs.containedDual) w.value(b);
  w.endArray();
  w.key("standard").beginArray();
  for (bool b : discs.containedStandard) w.value(b);
  w.endArray();
  w.endObject();
  w.key("definiteness").value(to_string(definiteness));
  if (zeroMultiplicity) w.key("zero_multiplicity").value(*zeroMultiplicity);
  w.endObject();
  return w.str() + "\n";
}

inline std::string gershgorinReportJson(const GershgorinReport& discs, std::uint64_t seed) {
  JsonWriter w;
  w.beginObject();
  writeRngHeader(w, seed);
  w.key("discs").beginArray();
  for (std::size_t i = 0; i < discs.centers.size(); ++i) {
    w.beginObject();
    w.key("row").value(int(i) + 1);
    w.key("center").value(discs.centers[i]);
    w.key("radius").value(discs.radii[i]);
    w.endObject();
  }
  w.endArray();
  w.key("eigenvalues").beginArray();
  for (const DualNumberd& lam : discs.eigenvalues) w.value(lam);
  w.endArray();
  w.key("containment").beginObject();
  w.key("dual").beginArray();
  for (bool b : discs.containedDual) w.value(b);
  w.endArray();
  w.key("standard").beginArray();
  for (bool b : discs.containedStandard) w.value(b);
  w.endArray();
  w.key("all_contained_dual").value(discs.allContainedDual);
  w.key("all_contained_standard").value(discs.allContainedStandard);
  w.endObject();
  w.endObject();
  return w.str() + "\n";
}

inline void writeEdgeList(JsonWriter& w, const std::string& keyName,
                          const std::vector<std::pair<int, int>>& edges) {
  w.key(keyName).beginArray();
  for (const auto& [i, j] : edges) {
    w.beginArray();
    w.value(i + 1);
    w.value(j + 1);
    w.endArray();
  }
  w.endArray();
}

struct GraphCheckReport {
  bool configHermitian = false;
  bool logHermitian = false;
  DualNumberd maxCycleDeviation;
  int cyclesChecked = 0;
  TreeReduction reduction;
  std::string warning;  // empty when clean
};

inline std::string graphCheckReportJson(const GraphCheckReport& rep, std::uint64_t seed) {
  JsonWriter w;
  w.beginObject();
  writeRngHeader(w, seed);
  w.key("hermitian").beginObject();
  w.key("config").value(rep.configHermitian);
  w.key("log").value(rep.logHermitian);
  w.endObject();
  w.key("max_cycle_deviation").value(rep.maxCycleDeviation);
  w.key("cycles_checked").value(rep.cyclesChecked);
  std::vector<std::pair<int, int>> kept(rep.reduction.tree.edges().begin(),
                                        rep.reduction.tree.edges().end());
  writeEdgeList(w, "spanning_tree", kept);
  writeEdgeList(w, "removed_edges", rep.reduction.removed);
  if (!rep.warning.empty()) w.key("warning").value(rep.warning);
  w.endObject();
  return w.str() + "\n";
}

inline std::string treeReportJson(const TreeReduction& red, std::uint64_t seed) {
  JsonWriter w;
  w.beginObject();
  writeRngHeader(w, seed);
  std::vector<std::pair<int, int>> kept(red.tree.edges().begin(), red.tree.edges().end());
  writeEdgeList(w, "kept", kept);
  writeEdgeList(w, "removed", red.removed);
  w.endObject();
  return w.str() + "\n";
}

inline std::string simulateSummaryJson(const Scenario& s, const TrajectoryLog& log,
                                       StabilityCertificate cert, int zeroMultiplicity,
                                       std::uint64_t seed) {
  JsonWriter w;
  w.beginObject();
  writeRngHeader(w, seed);
  w.key("agents").value(int(s.z0.size()));
  w.key("dt").value(s.dt);
  w.key("T").value(s.horizon);
  w.key("integrator").value(to_string(s.integrator));
  w.key("steps").value(int(log.t.size()) - 1);
  w.key("stability").value(to_string(cert));
  w.key("zero_multiplicity").value(zeroMultiplicity);
  w.key("initial_disagreement").value(
      DualNumberd(log.disagreement.front().first, log.disagreement.front().second));
  w.key("final_disagreement").value(
      DualNumberd(log.disagreement.back().first, log.disagreement.back().second));
  if (s.target) w.key("target_residual").value(checkTarget(s));
  w.endObject();
  return w.str() + "\n";
}

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

inline std::string trajectoryCsv(const TrajectoryLog& log) {
  const Eigen::Index n = log.z.empty() ? 0 : log.z.front().size();
  std::string out = "t";
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string tag = "z" + std::to_string(i + 1);
    for (const char* c : {"_sw", "_sx", "_sy", "_sz", "_dw", "_dx", "_dy", "_dz"}) out += "," + tag + c;
  }
  out += ",disagreement_s,disagreement_d\n";
  for (std::size_t k = 0; k < log.t.size(); ++k) {
    out += formatDouble(log.t[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const DualQuaterniond& q = log.z[k](i);
      for (double c : {q.s.w, q.s.x, q.s.y, q.s.z, q.d.w, q.d.x, q.d.y, q.d.z}) {
        out += ',';
        out += formatDouble(c);
      }
    }
    out += ',';
    out += formatDouble(log.disagreement[k].first);
    out += ',';
    out += formatDouble(log.disagreement[k].second);
    out += '\n';
  }
  return out;
}

inline std::string poseTrajectoryCsv(const PoseTrajectoryLog& log) {
  const std::size_t n = log.poses.empty() ? 0 : log.poses.front().size();
  std::string out = "t";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string tag = "q" + std::to_string(i + 1);
    for (const char* c : {"_sw", "_sx", "_sy", "_sz", "_dw", "_dx", "_dy", "_dz"}) out += "," + tag + c;
  }
  out += "\n";
  for (std::size_t k = 0; k < log.t.size(); ++k) {
    out += formatDouble(log.t[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const DualQuaterniond& q = log.poses[k][i].dq();
      for (double c : {q.s.w, q.s.x, q.s.y, q.s.z, q.d.w, q.d.x, q.d.y, q.d.z}) {
        out += ',';
        out += formatDouble(c);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace dqform
