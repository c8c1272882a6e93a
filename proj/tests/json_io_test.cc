#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "submp/common.h"
#include "submp/json_io.h"
#include "submp/rng.h"
#include "submp/zoo.h"

using namespace submp;

namespace {

void check_same_oracle(const SubmodularOracle& a, const SubmodularOracle& b,
                       std::uint64_t seed) {
  REQUIRE(a.ground.n == b.ground.n);
  CHECK(a.kind == b.kind);
  Rng rng(seed);
  const Set full = a.ground.n == 64 ? ~Set(0) : (Set(1) << a.ground.n) - 1;
  for (int i = 0; i < 200; ++i) {
    Set s = rng.next() & full;
    CHECK(a.evaluate(s) == b.evaluate(s));  // bit-exact after a round trip
  }
}

std::string temp_path(const char* name) {
  return std::string("/tmp/submp_json_test_") + name;
}

}  // namespace

TEST_CASE("grid instance with symmetry survives a round trip") {
  GapInstance g = gen_grid(3);
  nlohmann::json j = instance_to_json(g.inst, &g.sym);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("type") == "instance");
  CHECK(json_has_symmetry(j));

  MultiwayInstance back = instance_from_json(j);
  CHECK(back.k == g.inst.k);
  CHECK(back.terminals == g.inst.terminals);
  check_same_oracle(g.inst.oracle, back.oracle, 1);
  SymmetrySpec sym = symmetry_from_json(j);
  CHECK(sym.generators == g.sym.generators);

  nlohmann::json bare = instance_to_json(g.inst);
  CHECK(!json_has_symmetry(bare));
  CHECK_THROWS_AS(symmetry_from_json(bare), DomainError);
}

TEST_CASE("steep profile parameters survive a round trip") {
  GapInstance g = gen_symmetric_gamma(6);  // non-default gamma path
  MultiwayInstance back = instance_from_json(instance_to_json(g.inst));
  CHECK(back.oracle.k_param == 6);
  CHECK(back.oracle.gamma_param == 4);
  check_same_oracle(g.inst.oracle, back.oracle, 2);
}

TEST_CASE("cycle and random-family instances survive round trips") {
  MultiwayInstance hmp = gen_hmp_cycle();
  check_same_oracle(hmp.oracle, instance_from_json(instance_to_json(hmp)).oracle, 3);

  for (const char* kind : {"graph-mc", "hypergraph-mc", "coverage"}) {
    MultiwayInstance inst = gen_random_family(kind, 9, 3, 8, 44);
    MultiwayInstance back = instance_from_json(instance_to_json(inst));
    CHECK(back.k == inst.k);
    CHECK(back.terminals == inst.terminals);
    check_same_oracle(inst.oracle, back.oracle, 4);
  }
}

TEST_CASE("explicit tables survive a round trip") {
  Rng rng(5);
  std::vector<double> raw(32);
  for (double& v : raw) v = rng.uniform() * 4.0;
  raw[0] = 0.0;
  MultiwayInstance inst;
  inst.oracle = make_table_oracle(raw);
  inst.k = 2;
  inst.terminals = {0, 3};
  MultiwayInstance back = instance_from_json(instance_to_json(inst));
  check_same_oracle(inst.oracle, back.oracle, 6);
}

TEST_CASE("serialized text is stable and ends with a newline") {
  nlohmann::json j = instance_to_json(gen_hmp_cycle());
  std::string text = dump_json(j);
  REQUIRE(!text.empty());
  CHECK(text.back() == '\n');
  CHECK(dump_json(nlohmann::json::parse(text)) == text);
}

TEST_CASE("label-csp documents round trip, forbidden entries as null") {
  HkBundle hk = gen_hk(4);
  MinCspInstance back = csp_from_json(csp_to_json(hk.csp));
  CHECK(back.q == hk.csp.q);
  REQUIRE(back.verts.size() == hk.csp.verts.size());
  for (std::size_t v = 0; v < back.verts.size(); ++v) {
    CHECK(back.verts[v].candidates == hk.csp.verts[v].candidates);
    CHECK(back.verts[v].pin == hk.csp.verts[v].pin);
  }
  REQUIRE(back.edges.size() == hk.csp.edges.size());
  for (std::size_t e = 0; e < back.edges.size(); ++e) {
    CHECK(back.edges[e].verts == hk.csp.edges[e].verts);
    CHECK(back.edges[e].weight == hk.csp.edges[e].weight);
    CHECK(back.edges[e].table == hk.csp.edges[e].table);
  }

  MinCspInstance hard;
  hard.q = 2;
  hard.verts = {{{0, 1}, -1}, {{0, 1}, 1}};
  CspEdge edge;
  edge.verts = {0, 1};
  edge.weight = 0.375;
  edge.table = {0.0, kForbidden, 1.5, 0.0};
  hard.edges = {edge};
  nlohmann::json j = csp_to_json(hard);
  CHECK(j.at("edges").at(0).at("table").at(1).is_null());
  MinCspInstance hard_back = csp_from_json(j);
  CHECK(hard_back.edges[0].table[1] == kForbidden);
  CHECK(hard_back.edges[0].table[2] == 1.5);
  CHECK(hard_back.verts[1].pin == 1);
}

TEST_CASE("assignments and certificates round trip exactly") {
  FractionalAssignment a;
  a.x = {{1.0, 0.0}, {0.625, 0.375}, {0.0, 1.0}};
  FractionalAssignment back = assignment_from_json(assignment_to_json(a));
  CHECK(back.x == a.x);

  HkBundle hk = gen_hk(3);
  BasicLpSolution cert = certificate_from_json(certificate_to_json(hk.certificate));
  CHECK(cert.vertex_marginals == hk.certificate.vertex_marginals);
  CHECK(cert.objective == hk.certificate.objective);
  REQUIRE(cert.edge_dists.size() == hk.certificate.edge_dists.size());
  for (std::size_t e = 0; e < cert.edge_dists.size(); ++e) {
    CHECK(cert.edge_dists[e].alphas == hk.certificate.edge_dists[e].alphas);
    CHECK(cert.edge_dists[e].prob == hk.certificate.edge_dists[e].prob);
  }
  CHECK(check_certificate(hk.csp, cert).feasible);
}

TEST_CASE("document type and schema mismatches are rejected") {
  nlohmann::json inst_doc = instance_to_json(gen_grid(3).inst);
  nlohmann::json csp_doc = csp_to_json(gen_hk(3).csp);

  CHECK_THROWS_AS(csp_from_json(inst_doc), DomainError);
  CHECK_THROWS_AS(instance_from_json(csp_doc), DomainError);

  nlohmann::json wrong_schema = inst_doc;
  wrong_schema["schema"] = 2;
  CHECK_THROWS_AS(instance_from_json(wrong_schema), DomainError);

  nlohmann::json missing_schema = inst_doc;
  missing_schema.erase("schema");
  CHECK_THROWS_AS(instance_from_json(missing_schema), DomainError);

  nlohmann::json not_object = nlohmann::json::array();
  CHECK_THROWS_AS(instance_from_json(not_object), DomainError);

  nlohmann::json mangled = inst_doc;
  mangled["terminals"] = "diagonal";
  CHECK_THROWS_AS(instance_from_json(mangled), DomainError);
}

TEST_CASE("file io errors surface as domain errors") {
  CHECK_THROWS_AS(parse_json_file("/tmp/submp_json_test_does_not_exist.json"), DomainError);

  std::string bad = temp_path("bad.json");
  write_text_file(bad, "{ this is not json");
  CHECK_THROWS_AS(parse_json_file(bad), DomainError);
  std::remove(bad.c_str());

  CHECK_THROWS_AS(write_text_file("/tmp/submp_no_such_dir/x.json", "{}"), DomainError);

  std::string good = temp_path("good.json");
  write_text_file(good, dump_json(instance_to_json(gen_grid(3).inst)));
  nlohmann::json j = parse_json_file(good);
  CHECK(instance_from_json(j).k == 3);
  std::remove(good.c_str());
}

TEST_CASE("parsed instances are validated") {
  nlohmann::json j = instance_to_json(gen_grid(3).inst);
  j["terminals"] = {0, 4, 4};  // duplicate terminal
  CHECK_THROWS_AS(instance_from_json(j), DomainError);

  nlohmann::json c = csp_to_json(gen_hk(3).csp);
  c["edges"][0]["table"][1] = -2.0;  // negative cost
  CHECK_THROWS_AS(csp_from_json(c), DomainError);
}
