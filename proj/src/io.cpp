#include "qsplit/io.hpp"

#include <fstream>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError("BadFormat", what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int get_int(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  bad("complex numbers are [re, im] pairs or plain numbers");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<std::vector<int>> int_table(const json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array of rows");
  std::vector<std::vector<int>> out;
  for (const auto& row : j) {
    if (!row.is_array()) bad(std::string(what) + " must be an array of rows");
    std::vector<int> r;
    for (const auto& x : row) r.push_back(get_int(x, what));
    out.push_back(std::move(r));
  }
  return out;
}

// nested arrays of integers flattened in row-major order
void flatten(const json& j, std::vector<std::int64_t>& out) {
  if (j.is_array()) {
    for (const auto& x : j) flatten(x, out);
  } else if (j.is_number_integer()) {
    out.push_back(j.get<std::int64_t>());
  } else {
    bad("cochain entries must be integers");
  }
}

std::vector<std::int64_t> exponents(const json& j) {
  std::vector<std::int64_t> e;
  if (j.contains("values")) flatten(j.at("values"), e);
  else flatten(need(j, "entries"), e);
  return e;
}

std::int64_t modulus_of(const json& j) {
  const std::int64_t m = need(j, "modulus").get<std::int64_t>();
  if (m < 1) bad("modulus must be positive");
  return m;
}

bool is_trivial_tag(const json& j) { return j.is_null() || (j.is_string() && j.get<std::string>() == "trivial"); }

GSet gset_from_json(const json& j) {
  GSet x;
  x.points = get_int(need(j, "points"), "points");
  x.action = int_table(need(j, "action"), "action");
  return x;
}

ConcreteStarAlgebra scalars_in(int n) { return closure_check({Mat::Identity(n, n)}); }

Correspondence graded_line(const QSystemPtr& q, int grade) {
  if (q->base->dim() != 1 || !q->q.graded()) throw InputError("NotGraded", "free_grade needs a graded Q-system over C");
  if (grade < 0 || grade >= q->q.grade_group->order()) throw InputError("OutOfRange", "grade out of range");
  Correspondence v;
  v.left = v.right = q->base;
  v.dim = 1;
  v.lact = v.ract = v.inner = {Mat::Identity(1, 1)};
  v.grade_group = q->q.grade_group;
  v.grading = {grade};
  return v;
}

json blocks_json(const std::vector<int>& b) { return json(b); }

json algebra_json(const ConcreteStarAlgebra& a) {
  json basis = json::array();
  for (const auto& m : a.basis()) basis.push_back(to_json(m));
  return json{{"ambient", a.ambient()}, {"dim", a.dim()}, {"basis", basis}, {"unit", to_json(a.unit())}};
}

}  // namespace

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("BadJson", path + ": " + e.what());
  }
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array()) bad("matrices are arrays of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  if (!j[0].is_array()) bad("matrices are arrays of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) bad("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

CVec vector_from_json(const json& j) {
  if (!j.is_array()) bad("vectors are arrays");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  return v;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

FiniteGroup group_from_json(const json& j) {
  if (!j.is_object()) bad("groups are JSON objects");
  if (j.contains("cyclic")) return cyclic_group(get_int(j.at("cyclic"), "cyclic"));
  if (j.contains("symmetric")) return symmetric_group(get_int(j.at("symmetric"), "symmetric"));
  if (j.contains("klein")) return direct_product(cyclic_group(2), cyclic_group(2));
  if (j.contains("product")) {
    const json& p = j.at("product");
    if (!p.is_array() || p.size() < 2) bad("product needs at least two factors");
    FiniteGroup g = group_from_json(p[0]);
    for (std::size_t k = 1; k < p.size(); ++k) g = direct_product(g, group_from_json(p[k]));
    return g;
  }
  if (j.contains("table")) {
    const auto t = int_table(j.at("table"), "table");
    if (j.contains("order") && get_int(j.at("order"), "order") != static_cast<int>(t.size()))
      throw InputError("ShapeMismatch", "order disagrees with the table");
    return validate_group(t);
  }
  bad("unknown group description");
}

Subgroup subgroup_from_json(const FiniteGroup& g, const json& j) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "whole")) return whole_group(g);
  if (j.is_string() && j.get<std::string>() == "trivial") return trivial_subgroup();
  if (j.is_array()) {
    std::vector<int> e;
    for (const auto& x : j) e.push_back(get_int(x, "subgroup element"));
    return make_subgroup(g, e);
  }
  if (j.is_object() && j.contains("generators")) {
    std::vector<int> e;
    for (const auto& x : j.at("generators")) e.push_back(get_int(x, "generator"));
    for (int x : e)
      if (x < 0 || x >= g.order()) throw InputError("OutOfRange", "generator out of range");
    return generated_subgroup(g, e);
  }
  bad("subgroups are element lists, {\"generators\": [...]}, \"whole\" or \"trivial\"");
}

Cochain3 cocycle_from_json(const FiniteGroup& g, const json& j) {
  if (is_trivial_tag(j)) return trivial_cocycle3(g);
  if (!j.is_object()) bad("cocycles are JSON objects");
  if (j.contains("cyclic_k")) {
    const Cochain3 c = cyclic_cocycle3(g.order(), get_int(j.at("cyclic_k"), "cyclic_k"));
    if (!(c.group == g)) throw InputError("ShapeMismatch", "cyclic_k needs the cyclic group in standard order");
    return c;
  }
  if (j.contains("class")) {
    const int max_mod = j.contains("max_modulus") ? get_int(j.at("max_modulus"), "max_modulus") : 4;
    const auto classes = cocycle3_classes(g, max_mod);
    const int k = get_int(j.at("class"), "class");
    if (k < 0 || k >= static_cast<int>(classes.size())) throw InputError("OutOfRange", "cocycle class out of range");
    return classes[static_cast<std::size_t>(k)];
  }
  Cochain3 c;
  c.group = g;
  c.modulus = modulus_of(j);
  c.e = exponents(j);
  const auto n = static_cast<std::size_t>(g.order());
  if (c.e.size() != n * n * n) throw InputError("ShapeMismatch", "a 3-cochain needs |G|^3 entries");
  return validate_cocycle3(std::move(c));
}

Cochain2 mu_from_json(const FiniteGroup& g, const Cochain3& omega, const Subgroup& h, const json& j) {
  const FiniteGroup hg = subgroup_as_group(g, h);
  if (j.is_string() && j.get<std::string>() == "trivial") return trivial_cochain2(hg);
  if (j.is_null() || (j.is_object() && j.contains("class"))) {
    const auto mus = solve_mu(g, omega, h);
    if (mus.empty()) throw MathError("NoSolution", "omega is not a coboundary on the subgroup");
    const int k = j.is_null() ? 0 : get_int(j.at("class"), "class");
    if (k < 0 || k >= static_cast<int>(mus.size())) throw InputError("OutOfRange", "mu class out of range");
    return mus[static_cast<std::size_t>(k)];
  }
  if (!j.is_object()) bad("2-cochains are JSON objects");
  Cochain2 c;
  c.group = hg;
  c.modulus = modulus_of(j);
  c.e = exponents(j);
  const auto n = static_cast<std::size_t>(hg.order());
  if (c.e.size() != n * n) throw InputError("ShapeMismatch", "a 2-cochain needs |H|^2 entries");
  return c;
}

ConcreteStarAlgebra algebra_from_json(const json& j) {
  if (!j.is_object()) bad("algebras are JSON objects");
  const std::string kind = j.contains("kind") ? j.at("kind").get<std::string>() : "basis";
  if (kind == "scalar") return j.contains("ambient") ? scalars_in(get_int(j.at("ambient"), "ambient")) : scalar_algebra();
  if (kind == "full") return full_matrix_algebra(get_int(need(j, "n"), "n"));
  if (kind == "diagonal") return diagonal_algebra(get_int(need(j, "n"), "n"));
  if (kind == "group") {
    const FiniteGroup g = group_from_json(need(j, "group"));
    ConcreteStarAlgebra a = group_algebra(g);
    if (!j.contains("subgroup")) return a;
    const Subgroup h = subgroup_from_json(g, j.at("subgroup"));
    std::vector<Mat> basis;
    for (int x : h.elements) basis.push_back(a.basis()[static_cast<std::size_t>(x)]);
    return closure_check(std::move(basis));
  }
  if (kind == "twisted_group") {
    const FiniteGroup g = group_from_json(need(j, "group"));
    return twisted_group_algebra(mu_from_json(g, trivial_cocycle3(g), whole_group(g), need(j, "mu")));
  }
  if (kind == "direct_sum") {
    const json& s = need(j, "summands");
    if (!s.is_array() || s.empty()) bad("direct_sum needs summands");
    ConcreteStarAlgebra a = algebra_from_json(s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) a = direct_sum(a, algebra_from_json(s[k]));
    return a;
  }
  if (kind == "basis") {
    std::vector<Mat> basis;
    for (const auto& m : need(j, "basis")) basis.push_back(matrix_from_json(m));
    if (basis.empty()) bad("empty basis");
    const int n = j.contains("ambient") ? get_int(j.at("ambient"), "ambient") : static_cast<int>(basis[0].rows());
    for (const auto& m : basis)
      if (m.rows() != n || m.cols() != n) throw InputError("ShapeMismatch", "basis matrices must be ambient x ambient");
    std::optional<CVec> unit;
    if (j.contains("unit")) unit = vector_from_json(j.at("unit"));
    return closure_check(std::move(basis), unit);
  }
  bad("unknown algebra kind " + kind);
}

Correspondence correspondence_from_json(const json& j, const AlgebraPtr& left, const AlgebraPtr& right) {
  Correspondence c;
  c.left = j.contains("left") ? share(algebra_from_json(j.at("left"))) : left;
  c.right = j.contains("right") ? share(algebra_from_json(j.at("right"))) : right;
  if (!c.left || !c.right) bad("correspondence needs left and right algebras");
  c.dim = get_int(need(j, "dim"), "dim");
  auto mats = [&](const char* a, const char* b) {
    std::vector<Mat> out;
    for (const auto& m : j.contains(a) ? j.at(a) : need(j, b)) out.push_back(matrix_from_json(m));
    return out;
  };
  c.lact = mats("left_action", "lact");
  c.ract = mats("right_action", "ract");
  c.inner = mats("inner", "inner");
  if (j.contains("grading")) {
    c.grade_group = std::make_shared<const FiniteGroup>(group_from_json(need(j, "grade_group")));
    for (const auto& x : j.at("grading")) c.grading.push_back(get_int(x, "grade"));
  }
  return validate_correspondence(std::move(c));
}

QSystem qsystem_from_json(const json& j) {
  const std::string type = need(j, "type").get<std::string>();
  if (type == "trivial") return trivial_qsystem(share(algebra_from_json(need(j, "algebra"))));
  if (type == "pointed") {
    const FiniteGroup g = group_from_json(need(j, "group"));
    const Cochain3 omega = cocycle_from_json(g, j.value("omega", json()));
    const Subgroup h = subgroup_from_json(g, j.value("subgroup", json()));
    const Cochain2 mu = mu_from_json(g, omega, h, j.value("mu", json()));
    bool trivial = true;
    for (auto e : omega.e) trivial = trivial && e % omega.modulus == 0;
    auto w = trivial ? nullptr : std::make_shared<const Cochain3>(omega);
    return pointed_qsystem(g, h, mu, w, j.value("normalized", true));
  }
  if (type == "inclusion") {
    const AlgebraPtr a = share(algebra_from_json(need(j, "small")));
    const AlgebraPtr b = share(algebra_from_json(need(j, "large")));
    std::optional<Mat> e;
    if (j.contains("expectation")) e = matrix_from_json(j.at("expectation"));
    return qsystem_from_inclusion(a, b, e).q;
  }
  if (type == "explicit") {
    QSystem q;
    q.base = share(algebra_from_json(need(j, "base")));
    q.q = correspondence_from_json(need(j, "q"), q.base, q.base);
    q.m = matrix_from_json(need(j, "m"));
    q.i = matrix_from_json(need(j, "i"));
    if (j.contains("omega")) {
      if (!q.q.graded()) throw InputError("NotGraded", "an associator twist needs a graded carrier");
      q.twist.omega = std::make_shared<const Cochain3>(cocycle_from_json(*q.q.grade_group, j.at("omega")));
    }
    const Tensor qq = relative_tensor(q.q, q.q);
    if (q.m.rows() != q.q.dim || q.m.cols() != qq.c.dim) throw InputError("ShapeMismatch", "m has the wrong shape");
    if (q.i.rows() != q.q.dim || q.i.cols() != q.base->dim()) throw InputError("ShapeMismatch", "i has the wrong shape");
    return q;
  }
  bad("unknown Q-system type " + type);
}

QBimodule bimodule_from_json(const QSystemPtr& q, const json& j) {
  if (j.is_string() && j.get<std::string>() == "regular") return regular_bimodule(q);
  if (j.is_object() && j.contains("free_grade")) return free_bimodule(q, graded_line(q, get_int(j.at("free_grade"), "free_grade")), q);
  if (j.is_object() && j.contains("free")) return free_bimodule(q, correspondence_from_json(j.at("free"), q->base, q->base), q);
  bad("bimodules are \"regular\", {\"free_grade\": g} or {\"free\": correspondence}");
}

FusionRing fusion_ring_from_json(const json& j) {
  if (j.contains("builtin")) {
    const std::string name = j.at("builtin").get<std::string>();
    if (name == "fibonacci") return fibonacci_ring();
    if (name == "ising") return ising_ring();
    if (name == "rep_s3") return rep_s3_ring();
    if (name == "hilb") return hilb_ring(group_from_json(need(j, "group")));
    bad("unknown builtin ring " + name);
  }
  FusionRing r;
  r.rank = get_int(need(j, "rank"), "rank");
  if (r.rank < 1) throw InputError("ShapeMismatch", "rank must be positive");
  if (j.contains("labels")) r.labels = j.at("labels").get<std::vector<std::string>>();
  else
    for (int a = 0; a < r.rank; ++a) r.labels.push_back("x" + std::to_string(a));
  std::vector<std::int64_t> flat;
  flatten(need(j, "N"), flat);
  for (auto x : flat) r.n.push_back(static_cast<int>(x));
  r.unit = j.contains("unit") ? get_int(j.at("unit"), "unit") : 0;
  if (j.contains("dual")) r.dual = j.at("dual").get<std::vector<int>>();
  return validate_fusion_ring(std::move(r));
}

json to_json(const FusionRing& r) {
  json n = json::array();
  for (int a = 0; a < r.rank; ++a) {
    json na = json::array();
    for (int b = 0; b < r.rank; ++b) {
      json nb = json::array();
      for (int c = 0; c < r.rank; ++c) nb.push_back(r.at(a, b, c));
      na.push_back(std::move(nb));
    }
    n.push_back(std::move(na));
  }
  return json{{"rank", r.rank}, {"labels", r.labels}, {"N", n}, {"unit", r.unit}, {"dual", r.dual}};
}

K0Module module_from_json(const FusionRing& ring, const json& j) {
  if (is_trivial_tag(j) || (j.is_string() && j.get<std::string>() == "regular")) return regular_module(ring);
  K0Module m;
  m.rank = get_int(need(j, "rank"), "rank");
  const auto u = j.contains("order_unit") ? j.at("order_unit").get<std::vector<double>>() : std::vector<double>{};
  m.order_unit = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
  for (const auto& a : need(j, "action")) {
    const auto t = int_table(a, "action");
    Eigen::MatrixXi x(static_cast<Eigen::Index>(t.size()), t.empty() ? 0 : static_cast<Eigen::Index>(t[0].size()));
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (static_cast<Eigen::Index>(t[r].size()) != x.cols()) bad("ragged action matrix");
      for (std::size_t c = 0; c < t[r].size(); ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t[r][c];
    }
    m.action.push_back(x);
  }
  return validate_k0_module(std::move(m), ring);
}

AnomalousAction action_from_json(const json& j) {
  const FiniteGroup g = group_from_json(need(j, "group"));
  const std::string kind = j.value("kind", std::string("explicit"));
  if (kind == "translation") {
    return translation_action(g, cocycle_from_json(g, j.value("omega", json())), j.value("copies", 1));
  }
  if (kind == "permutation") return permutation_action(g, gset_from_json(need(j, "points")));
  if (kind != "explicit") bad("unknown action kind " + kind);
  AnomalousAction act;
  act.group = g;
  act.algebra = share(algebra_from_json(need(j, "algebra")));
  for (const auto& m : need(j, "alpha")) act.alpha.push_back(matrix_from_json(m));
  for (const auto& v : need(j, "u")) act.u.push_back(vector_from_json(v));
  if (j.contains("points")) act.points = gset_from_json(j.at("points"));
  return act;
}

json to_json(const AxiomReport& r) {
  json axioms = json::array();
  for (const auto& a : r.axioms)
    axioms.push_back({{"name", a.name}, {"relative", a.relative}, {"absolute", a.absolute}, {"pass", a.pass}});
  return json{{"tol", r.tol}, {"pass", r.all_pass()}, {"dependencies_consistent", r.dependencies_consistent}, {"axioms", axioms}};
}

json to_json(const DQData& d) {
  json out{{"d", to_json(d.d)}, {"d_inv", to_json(d.d_inv)}, {"support", to_json(d.support)}, {"norm", d.norm},
           {"central_residual", d.central_residual}};
  if (d.z2_upper_gap) out["z2_upper_gap"] = *d.z2_upper_gap;
  if (d.z2_lower_gap) out["z2_lower_gap"] = *d.z2_lower_gap;
  return out;
}

json to_json(const FPDimensions& d) {
  return json{{"dimensions", d.d}, {"reducible", d.reducible}, {"global_dimension", d.global_dimension}};
}

json to_json(const Obstruction& o, const FusionRing& ring) {
  json out{{"pass", o.pass}, {"dimensions", o.dims}};
  if (!o.pass) {
    out["witness"] = ring.labels[static_cast<std::size_t>(o.witness)];
    out["dimension"] = o.dimension;
    out["distance"] = o.distance;
  }
  return out;
}

json to_json(const Eigenstate& e) {
  return json{{"phi", std::vector<double>(e.phi.data(), e.phi.data() + e.phi.size())},
              {"psi", std::vector<double>(e.psi.data(), e.psi.data() + e.psi.size())},
              {"normalization", e.normalization},
              {"eigen_residual", e.eigen_residual},
              {"unit_residual", e.unit_residual}};
}

json to_json(const ActionReport& r) {
  return json{{"automorphism_residual", r.automorphism_residual}, {"unitarity_residual", r.unitarity_residual},
              {"normalization_residual", r.normalization_residual}, {"intertwining_residual", r.intertwining_residual},
              {"cocycle_residual", r.cocycle_residual}, {"pass", r.pass}};
}

json to_json(const CrossedProduct& c) {
  json out{{"dim", c.algebra->dim()}, {"blocks", blocks_json(c.blocks)}, {"center_dimension", c.center_dimension},
           {"traces", c.traces}, {"cocycle_residual", c.cocycle_residual}, {"wedderburn_residual", c.wedderburn_residual}};
  if (c.orbits) {
    out["orbits"] = *c.orbits;
    out["free"] = c.free;
  }
  return out;
}

json to_json(const PimsnerPopaReport& p) {
  return json{{"samples", p.samples}, {"bound", p.bound}, {"min_margin", p.min_margin},
              {"best_constant", p.best_constant}, {"pass", p.pass}};
}

json to_json(const Subgroup& h) { return json(h.elements); }

json to_json(const Cochain2& c) { return json{{"modulus", c.modulus}, {"values", c.e}}; }

json to_json(const Cochain3& c) { return json{{"modulus", c.modulus}, {"values", c.e}}; }

json to_json(const ConcreteStarAlgebra& a) { return algebra_json(a); }

json to_json(const Correspondence& c) {
  auto mats = [](const std::vector<Mat>& v) {
    json out = json::array();
    for (const auto& m : v) out.push_back(to_json(m));
    return out;
  };
  json out{{"dim", c.dim}, {"left_dim", c.left->dim()}, {"right_dim", c.right->dim()},
           {"left_action", mats(c.lact)}, {"right_action", mats(c.ract)}, {"inner", mats(c.inner)}};
  if (c.graded()) out["grading"] = c.grading;
  return out;
}

}  // namespace qsplit::io
