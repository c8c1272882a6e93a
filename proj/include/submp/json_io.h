#pragma once

#include <string>

#include <json.hpp>

#include "submp/mincsp.h"
#include "submp/relaxation.h"
#include "submp/submodular.h"
#include "submp/zoo.h"

namespace submp {

// All documents carry {"schema": 1, "type": ...}. Parse errors and schema
// mismatches raise DomainError.

nlohmann::json instance_to_json(const MultiwayInstance& inst, const SymmetrySpec* sym = nullptr);
MultiwayInstance instance_from_json(const nlohmann::json& j);
SymmetrySpec symmetry_from_json(const nlohmann::json& j);  // from an instance document
bool json_has_symmetry(const nlohmann::json& j);

nlohmann::json csp_to_json(const MinCspInstance& inst);
MinCspInstance csp_from_json(const nlohmann::json& j);

nlohmann::json assignment_to_json(const FractionalAssignment& a);
FractionalAssignment assignment_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const BasicLpSolution& cert);
BasicLpSolution certificate_from_json(const nlohmann::json& j);

// Round-trippable text form (stable key order, full double precision).
std::string dump_json(const nlohmann::json& j);

nlohmann::json parse_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace submp
