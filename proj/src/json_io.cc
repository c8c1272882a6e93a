#include "submp/json_io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "submp/common.h"

namespace submp {

namespace {

using nlohmann::json;

void expect_doc(const json& j, const char* type) {
  if (!j.is_object()) throw DomainError("document is not a JSON object");
  if (!j.contains("schema") || j["schema"] != 1)
    throw DomainError("document schema is missing or unsupported");
  if (!j.contains("type") || j["type"] != type)
    throw DomainError(std::string("expected a document of type \"") + type + "\"");
}

[[noreturn]] void rethrow_as_domain(const char* what, const std::exception& e) {
  throw DomainError(std::string("malformed ") + what + " document: " + e.what());
}

const char* kind_name(OracleKind kind) {
  switch (kind) {
    case OracleKind::kExplicitTable: return "table";
    case OracleKind::kGridPartition: return "grid";
    case OracleKind::kSymmetricGamma: return "symmetric-gamma";
    case OracleKind::kWeightedCoverage: return "coverage";
    case OracleKind::kHypergraphCutCount: return "hypergraph-cut";
  }
  throw DomainError("unknown oracle kind");
}

json edges_to_json(const std::vector<EdgeCost>& edges) {
  json out = json::array();
  for (const EdgeCost& e : edges) {
    json je;
    je["verts"] = e.verts;
    je["weight"] = e.weight;
    if (e.has_profile()) {
      je["phi_out"] = e.phi_out;
      if (!e.phi_in.empty()) je["phi_in"] = e.phi_in;
      if (e.flag_pos >= 0) je["flag_pos"] = e.flag_pos;
    } else {
      je["table"] = e.table;
    }
    out.push_back(std::move(je));
  }
  return out;
}

std::vector<EdgeCost> edges_from_json(const json& j) {
  std::vector<EdgeCost> edges;
  for (const json& je : j) {
    std::vector<int> verts = je.at("verts").get<std::vector<int>>();
    const double weight = je.at("weight").get<double>();
    if (je.contains("phi_out")) {
      edges.push_back(make_profile_edge(
          std::move(verts), weight, je["phi_out"].get<std::vector<double>>(),
          je.value("phi_in", std::vector<double>{}), je.value("flag_pos", -1)));
    } else {
      EdgeCost e;
      e.verts = std::move(verts);
      e.weight = weight;
      e.table = je.at("table").get<std::vector<double>>();
      edges.push_back(std::move(e));
    }
  }
  return edges;
}

SubmodularOracle oracle_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "grid") return make_grid_oracle(j.at("k").get<int>());
  if (kind == "symmetric-gamma")
    return make_symmetric_gamma_oracle(j.at("k").get<int>(), j.at("gamma").get<int>());
  if (kind == "coverage")
    return make_decomposed_oracle(OracleKind::kWeightedCoverage, j.at("n").get<int>(),
                                  edges_from_json(j.at("edges")));
  if (kind == "hypergraph-cut")
    return make_decomposed_oracle(OracleKind::kHypergraphCutCount, j.at("n").get<int>(),
                                  edges_from_json(j.at("edges")));
  if (kind == "table") return make_table_oracle(j.at("values").get<std::vector<double>>());
  throw DomainError("unknown oracle kind: " + kind);
}

}  // namespace

nlohmann::json instance_to_json(const MultiwayInstance& inst, const SymmetrySpec* sym) {
  json j;
  j["schema"] = 1;
  j["type"] = "instance";
  j["k"] = inst.k;
  j["terminals"] = inst.terminals;
  json& jo = j["oracle"];
  jo["kind"] = kind_name(inst.oracle.kind);
  switch (inst.oracle.kind) {
    case OracleKind::kGridPartition:
      jo["k"] = inst.oracle.k_param;
      break;
    case OracleKind::kSymmetricGamma:
      jo["k"] = inst.oracle.k_param;
      jo["gamma"] = inst.oracle.gamma_param;
      break;
    case OracleKind::kWeightedCoverage:
    case OracleKind::kHypergraphCutCount:
      jo["n"] = inst.oracle.ground.n;
      jo["edges"] = edges_to_json(inst.oracle.edges);
      break;
    case OracleKind::kExplicitTable:
      jo["n"] = inst.oracle.ground.n;
      jo["values"] = inst.oracle.table;
      break;
  }
  if (sym != nullptr) j["symmetry"]["generators"] = sym->generators;
  return j;
}

MultiwayInstance instance_from_json(const nlohmann::json& j) {
  expect_doc(j, "instance");
  try {
    MultiwayInstance inst;
    inst.oracle = oracle_from_json(j.at("oracle"));
    inst.k = j.at("k").get<int>();
    inst.terminals = j.at("terminals").get<std::vector<int>>();
    validate_instance(inst);
    return inst;
  } catch (const json::exception& e) {
    rethrow_as_domain("instance", e);
  }
}

SymmetrySpec symmetry_from_json(const nlohmann::json& j) {
  expect_doc(j, "instance");
  try {
    if (!json_has_symmetry(j)) throw DomainError("instance document carries no symmetry");
    SymmetrySpec sym;
    sym.generators = j.at("symmetry").at("generators").get<std::vector<std::vector<int>>>();
    return sym;
  } catch (const json::exception& e) {
    rethrow_as_domain("instance", e);
  }
}

bool json_has_symmetry(const nlohmann::json& j) {
  return j.is_object() && j.contains("symmetry");
}

nlohmann::json csp_to_json(const MinCspInstance& inst) {
  json j;
  j["schema"] = 1;
  j["type"] = "csp";
  j["q"] = inst.q;
  json jv = json::array();
  for (const CspVertex& v : inst.verts) {
    json e;
    e["candidates"] = v.candidates;
    if (v.pin >= 0) e["pin"] = v.pin;
    jv.push_back(std::move(e));
  }
  j["verts"] = std::move(jv);
  json je = json::array();
  for (const CspEdge& e : inst.edges) {
    json row;
    row["verts"] = e.verts;
    row["weight"] = e.weight;
    json table = json::array();
    for (double c : e.table) {
      if (std::isinf(c))
        table.push_back(nullptr);  // forbidden tuples, JSON has no infinity
      else
        table.push_back(c);
    }
    row["table"] = std::move(table);
    je.push_back(std::move(row));
  }
  j["edges"] = std::move(je);
  return j;
}

MinCspInstance csp_from_json(const nlohmann::json& j) {
  expect_doc(j, "csp");
  try {
    MinCspInstance inst;
    inst.q = j.at("q").get<int>();
    for (const json& jv : j.at("verts")) {
      CspVertex v;
      v.candidates = jv.at("candidates").get<std::vector<int>>();
      v.pin = jv.value("pin", -1);
      inst.verts.push_back(std::move(v));
    }
    for (const json& je : j.at("edges")) {
      CspEdge e;
      e.verts = je.at("verts").get<std::vector<int>>();
      e.weight = je.at("weight").get<double>();
      for (const json& c : je.at("table"))
        e.table.push_back(c.is_null() ? kForbidden : c.get<double>());
      inst.edges.push_back(std::move(e));
    }
    validate_csp(inst);
    return inst;
  } catch (const json::exception& e) {
    rethrow_as_domain("csp", e);
  }
}

nlohmann::json assignment_to_json(const FractionalAssignment& a) {
  json j;
  j["schema"] = 1;
  j["type"] = "assignment";
  j["x"] = a.x;
  return j;
}

FractionalAssignment assignment_from_json(const nlohmann::json& j) {
  expect_doc(j, "assignment");
  try {
    FractionalAssignment a;
    a.x = j.at("x").get<std::vector<std::vector<double>>>();
    return a;
  } catch (const json::exception& e) {
    rethrow_as_domain("assignment", e);
  }
}

nlohmann::json certificate_to_json(const BasicLpSolution& cert) {
  json j;
  j["schema"] = 1;
  j["type"] = "certificate";
  j["vertex_marginals"] = cert.vertex_marginals;
  json dists = json::array();
  for (const EdgeDistribution& d : cert.edge_dists) {
    json row;
    row["alphas"] = d.alphas;
    row["prob"] = d.prob;
    dists.push_back(std::move(row));
  }
  j["edge_dists"] = std::move(dists);
  j["objective"] = cert.objective;
  j["max_residual"] = cert.max_residual;
  return j;
}

BasicLpSolution certificate_from_json(const nlohmann::json& j) {
  expect_doc(j, "certificate");
  try {
    BasicLpSolution cert;
    cert.vertex_marginals = j.at("vertex_marginals").get<std::vector<std::vector<double>>>();
    for (const json& row : j.at("edge_dists")) {
      EdgeDistribution d;
      d.alphas = row.at("alphas").get<std::vector<std::vector<int>>>();
      d.prob = row.at("prob").get<std::vector<double>>();
      cert.edge_dists.push_back(std::move(d));
    }
    cert.objective = j.value("objective", 0.0);
    cert.max_residual = j.value("max_residual", 0.0);
    return cert;
  } catch (const json::exception& e) {
    rethrow_as_domain("certificate", e);
  }
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::exception& e) {
    throw DomainError("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DomainError("write to " + path + " failed");
}

}  // namespace submp
