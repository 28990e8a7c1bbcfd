#pragma once

#include <string>

#include <json.hpp>

#include "qsplit/crossed_product.hpp"
#include "qsplit/fusion.hpp"
#include "qsplit/graded.hpp"
#include "qsplit/qsystem.hpp"
#include "qsplit/realize.hpp"

// JSON formats. Complex numbers are [re, im] pairs (plain numbers are read
// as real); matrices are arrays of rows.
namespace qsplit::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

json read_file(const std::string& path);

Mat matrix_from_json(const json& j);
CVec vector_from_json(const json& j);
json to_json(const Mat& m);
json to_json(const CVec& v);

/// {"cyclic": n}, {"symmetric": n}, {"klein": true}, {"table": [[...]]} or
/// {"product": [group, group]}.
FiniteGroup group_from_json(const json& j);
/// An element list or {"generators": [...]}.
Subgroup subgroup_from_json(const FiniteGroup& g, const json& j);
/// Absent or "trivial", {"cyclic_k": k} on Z/n, or {"modulus": N, "values": [...]}.
Cochain3 cocycle_from_json(const FiniteGroup& g, const json& j);
/// Absent or "trivial", {"class": k} indexing solve_mu, or {"modulus": N, "values": [...]}.
Cochain2 mu_from_json(const FiniteGroup& g, const Cochain3& omega, const Subgroup& h, const json& j);

/// {"kind": "scalar" | "full" | "diagonal" | "group" | "twisted_group" | "direct_sum" | "basis", ...}
ConcreteStarAlgebra algebra_from_json(const json& j);
Correspondence correspondence_from_json(const json& j, const AlgebraPtr& left, const AlgebraPtr& right);

/// {"type": "trivial" | "pointed" | "inclusion" | "explicit", ...}
QSystem qsystem_from_json(const json& j);
/// "regular", {"free_grade": g} for pointed Q over C, or {"free": correspondence}.
QBimodule bimodule_from_json(const QSystemPtr& q, const json& j);

/// {"rank", "labels", "N", "unit", "dual"} or {"builtin": "fibonacci" | "ising" | "rep_s3" | "hilb", "group": ...}.
FusionRing fusion_ring_from_json(const json& j);
json to_json(const FusionRing& r);
/// "regular" or {"rank", "order_unit", "action"}.
K0Module module_from_json(const FusionRing& ring, const json& j);

/// {"group", "kind": "translation", "copies", "omega"} or
/// {"group", "kind": "permutation", "points", "action"} or
/// {"group", "algebra", "alpha", "u"}.
AnomalousAction action_from_json(const json& j);

json to_json(const AxiomReport& r);
json to_json(const DQData& d);
json to_json(const FPDimensions& d);
json to_json(const Obstruction& o, const FusionRing& ring);
json to_json(const Eigenstate& e);
json to_json(const ActionReport& r);
json to_json(const CrossedProduct& c);
json to_json(const PimsnerPopaReport& p);
json to_json(const Subgroup& h);
json to_json(const Cochain2& c);
json to_json(const Cochain3& c);
json to_json(const ConcreteStarAlgebra& a);
json to_json(const Correspondence& c);

}  // namespace qsplit::io
