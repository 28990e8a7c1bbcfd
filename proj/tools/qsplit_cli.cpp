#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <tuple>

#include <CLI11.hpp>

#include "qsplit/crossed_product.hpp"
#include "qsplit/error.hpp"
#include "qsplit/fusion.hpp"
#include "qsplit/graded.hpp"
#include "qsplit/io.hpp"
#include "qsplit/qsystem.hpp"
#include "qsplit/realize.hpp"

using namespace qsplit;
using io::json;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string format = "text";
  std::string output;
  std::uint64_t seed = 0;
  double tol = kAxiomTol;
  int samples = 100;
};

struct Outcome {
  bool pass = true;
  json result = json::object();
};

double max_axiom(const AxiomReport& r) {
  double m = 0;
  for (const auto& a : r.axioms) m = std::max(m, a.relative);
  return m;
}

QSystemPtr load_qsystem(const json& j) {
  return std::make_shared<const QSystem>(io::qsystem_from_json(j.contains("qsystem") ? j.at("qsystem") : j));
}

Cochain3 omega_for(const FiniteGroup& g, const json& j) {
  if (j.contains("omega")) return io::cocycle_from_json(g, j.at("omega"));
  if (j.contains("action") && j.at("action").contains("omega")) return io::cocycle_from_json(g, j.at("action").at("omega"));
  return trivial_cocycle3(g);
}

Outcome check_qsystem_cmd(const RunConfig& cfg, const json& in) {
  const QSystemPtr q = load_qsystem(in);
  const AxiomReport r = check_qsystem(*q, cfg.tol);
  Outcome o;
  o.pass = r.all_pass();
  o.result["axioms"] = io::to_json(r);
  o.result["dq"] = io::to_json(dq(*q));
  return o;
}

Outcome from_inclusion_cmd(const RunConfig& cfg, const json& in) {
  const AlgebraPtr a = share(io::algebra_from_json(in.at("small")));
  const AlgebraPtr b = share(io::algebra_from_json(in.at("large")));
  std::optional<Mat> e;
  if (in.contains("expectation")) e = io::matrix_from_json(in.at("expectation"));
  const InclusionQSystem inc = qsystem_from_inclusion(a, b, e);
  const AxiomReport r = check_qsystem(inc.q, cfg.tol);
  Outcome o;
  json qb = json::array();
  for (const auto& v : inc.quasi_basis) qb.push_back(io::to_json(v));
  o.result["index"] = io::to_json(inc.index);
  o.result["quasi_basis"] = qb;
  o.result["quasi_basis_residual"] = inc.quasi_basis_residual;
  o.result["index_central_residual"] = inc.index_central_residual;
  o.result["axioms"] = io::to_json(r);
  o.result["dq"] = io::to_json(dq(inc.q));
  o.pass = r.all_pass() && inc.quasi_basis_residual < cfg.tol && inc.index_central_residual < cfg.tol;
  return o;
}

Outcome realize_cmd(const RunConfig& cfg, const json& in) {
  const QSystemPtr q = load_qsystem(in);
  const Untwisted u = untwist(*q);
  const Realization r = realize_qsystem(std::make_shared<const QSystem>(u.q));
  const Wedderburn w = wedderburn(*r.algebra, cfg.seed);
  Outcome o;
  o.result["untwisted"] = static_cast<bool>(u.mu0);
  if (u.mu0) {
    o.result["mu0"] = io::to_json(*u.mu0);
    o.result["support"] = io::to_json(u.support);
  }
  o.result["dim"] = r.algebra->dim();
  o.result["blocks"] = w.blocks;
  o.result["hom_residual"] = r.hom_residual;
  o.result["star_residual"] = r.star_residual;
  o.result["psi_residual"] = r.psi_residual;
  o.result["wedderburn_residual"] = std::max(w.hom_residual, w.star_residual);
  o.result["algebra"] = io::to_json(*r.algebra);
  o.pass = std::max({r.hom_residual, r.star_residual, r.psi_residual}) < cfg.tol;
  return o;
}

Outcome split_cmd(const RunConfig& cfg, const json& in) {
  const QSystemPtr q = load_qsystem(in);
  const SplitCertificate s = split_qsystem(*q, cfg.seed);
  Outcome o;
  o.result["blocks"] = s.blocks;
  o.result["untwisted"] = static_cast<bool>(s.transported.mu0);
  o.result["algebra"] = io::to_json(*s.realization.algebra);
  o.result["bimodule"] = io::to_json(s.x);
  o.result["iso"] = io::to_json(s.iso);
  o.result["residuals"] = {{"iso", s.iso_residual},
                           {"zigzag_x", s.dual_residuals.zigzag_x},
                           {"zigzag_xv", s.dual_residuals.zigzag_xv},
                           {"separability", s.dual_residuals.separability},
                           {"realization_hom", s.realization.hom_residual},
                           {"realization_star", s.realization.star_residual}};
  o.pass = std::max({s.iso_residual, s.dual_residuals.zigzag_x, s.dual_residuals.zigzag_xv,
                     s.dual_residuals.separability}) < cfg.tol;
  return o;
}

Outcome expectation_cmd(const RunConfig& cfg, const json& in) {
  const QSystemPtr q = load_qsystem(in);
  const Untwisted u = untwist(*q);
  const Realization r = realize_qsystem(std::make_shared<const QSystem>(u.q));
  const Expectation e = conditional_expectation(r);
  const PimsnerPopaReport pp = pimsner_popa(r, e, cfg.samples, cfg.seed);
  Outcome o;
  o.result["expectation"] = io::to_json(e.e);
  o.result["support"] = io::to_json(e.support);
  o.result["bimodularity_residual"] = e.bimodularity_residual;
  o.result["range_residual"] = e.range_residual;
  o.result["pimsner_popa"] = io::to_json(pp);
  o.pass = pp.pass && e.bimodularity_residual < cfg.tol && e.range_residual < cfg.tol;
  return o;
}

Outcome tensor_over_q_cmd(const RunConfig& cfg, const json& in) {
  const QSystemPtr q = load_qsystem(in);
  const QBimodule x = io::bimodule_from_json(q, in.value("x", json("regular")));
  const QBimodule y = io::bimodule_from_json(q, in.value("y", json("regular")));
  const AxiomReport rx = check_qbimodule(x, cfg.tol, cfg.seed), ry = check_qbimodule(y, cfg.tol, cfg.seed);
  if (!rx.all_pass() || !ry.all_pass()) throw MathError("NotBimodule", "an input fails the Q-bimodule axioms");
  const QTensor t = tensor_over_q(x, y);
  const AxiomReport r = check_qbimodule(t.xy, cfg.tol, cfg.seed);
  Outcome o;
  o.result["dim_x"] = x.x.dim;
  o.result["dim_y"] = y.x.dim;
  o.result["dim_over_base"] = t.over_base.c.dim;
  o.result["dim"] = t.xy.x.dim;
  o.result["coequalizer_residual"] = t.coequalizer_residual;
  o.result["projector_residual"] = projector_residual(t.p, t.over_base.c);
  o.result["axioms"] = io::to_json(r);
  o.pass = r.all_pass() && t.coequalizer_residual < cfg.tol;
  return o;
}

Outcome enumerate_cmd(const RunConfig& cfg, const json& in) {
  const FiniteGroup g = io::group_from_json(in.at("group"));
  const Cochain3 omega = omega_for(g, in);
  const auto list = enumerate_qsystems(g, omega);
  Outcome o;
  json items = json::array();
  for (const auto& c : list) {
    const AxiomReport r = check_qsystem(c.q, cfg.tol);
    o.pass = o.pass && r.all_pass();
    items.push_back({{"subgroup", io::to_json(c.h)}, {"mu", io::to_json(c.mu)}, {"pass", r.all_pass()},
                     {"max_residual", max_axiom(r)}});
  }
  o.result["count"] = list.size();
  o.result["omega"] = io::to_json(omega);
  o.result["qsystems"] = items;
  return o;
}

Outcome dual_fusion_cmd(const RunConfig& cfg, const json& in) {
  const FiniteGroup g = io::group_from_json(in.at("group"));
  const Cochain3 omega = omega_for(g, in);
  const Subgroup h = io::subgroup_from_json(g, in.value("subgroup", json()));
  const Cochain2 mu = io::mu_from_json(g, omega, h, in.value("mu", json()));
  const DualFusion d = dual_fusion_ring(g, omega, h, mu, cfg.seed);
  const FPDimensions fp = fp_dimensions(d.ring);
  Outcome o;
  o.result["ring"] = io::to_json(d.ring);
  o.result["fp_dimensions"] = io::to_json(fp);
  o.result["end_blocks"] = d.end_blocks;
  o.result["bimodule_residual"] = d.max_bimodule_residual;
  o.result["coequalizer_residual"] = d.max_coequalizer_residual;
  o.result["global_dimension_gap"] = d.global_dimension_gap;
  o.pass = d.max_bimodule_residual < cfg.tol && d.max_coequalizer_residual < cfg.tol && d.global_dimension_gap < 1e-6;
  return o;
}

Outcome crossed_product_cmd(const RunConfig& cfg, const json& in) {
  const AnomalousAction act = io::action_from_json(in.at("action"));
  const Cochain3 omega = omega_for(act.group, in);
  const Subgroup h = io::subgroup_from_json(act.group, in.value("subgroup", json()));
  const Cochain2 mu = io::mu_from_json(act.group, omega, h, in.value("mu", json()));
  const ActionReport ar = validate_anomalous_action(act, omega);
  const CrossedProduct c = twisted_crossed_product(act, h, mu, cfg.seed);
  Outcome o;
  o.result["action"] = io::to_json(ar);
  o.result["mu"] = io::to_json(mu);
  o.result["crossed_product"] = io::to_json(c);
  o.pass = ar.pass && c.wedderburn_residual < cfg.tol;
  return o;
}

Outcome obstruction_cmd(const RunConfig&, const json& in) {
  const FusionRing ring = io::fusion_ring_from_json(in.contains("ring") ? in.at("ring") : in);
  const Obstruction ob = integrality_obstruction(ring);
  Outcome o;
  o.result["ring"] = io::to_json(ring);
  o.result["fp_dimensions"] = io::to_json(fp_dimensions(ring));
  o.result["obstruction"] = io::to_json(ob, ring);
  o.pass = ob.pass;
  return o;
}

Outcome eigenstate_cmd(const RunConfig&, const json& in) {
  const FusionRing ring = io::fusion_ring_from_json(in.contains("ring") ? in.at("ring") : in);
  const K0Module m = io::module_from_json(ring, in.value("module", json("regular")));
  std::optional<Eigen::VectorXd> psi;
  if (in.contains("psi")) {
    const auto p = in.at("psi").get<std::vector<double>>();
    psi = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  }
  const Eigenstate e = fp_eigenstate(m, ring, psi);
  Outcome o;
  o.result["fp_dimensions"] = io::to_json(fp_dimensions(ring));
  o.result["state"] = io::to_json(e);
  o.pass = e.eigen_residual < 1e-9 && e.unit_residual < 1e-9;
  return o;
}

Outcome induced_action_cmd(const RunConfig& cfg, const json& in) {
  const AnomalousAction act = io::action_from_json(in.at("action"));
  const Cochain3 omega = omega_for(act.group, in);
  const Subgroup h = io::subgroup_from_json(act.group, in.value("subgroup", json()));
  const Cochain2 mu = io::mu_from_json(act.group, omega, h, in.value("mu", json()));
  const InducedActionReport r = induced_action_report(omega, h, mu, act, cfg.seed);
  Outcome o;
  json traces = json::array();
  for (const auto& t : r.traces) traces.push_back({{"block", t.block}, {"size", t.size}, {"minimal_projection", t.minimal_projection}});
  o.result["action"] = io::to_json(r.action);
  o.result["crossed_product"] = io::to_json(r.crossed);
  o.result["quotient_points"] = r.quotient_points;
  o.result["dual_ring"] = io::to_json(r.dual.ring);
  o.result["obstruction"] = io::to_json(r.obstruction, r.dual.ring);
  o.result["global_dimension_gap"] = r.global_dimension_gap;
  o.result["k0_traces"] = traces;
  o.pass = r.obstruction.pass && r.crossed.center_dimension == r.quotient_points;
  return o;
}

std::string render_text(const json& report) {
  std::string out;
  for (const auto& [k, v] : report.items()) {
    if (k == "result" && v.is_object()) {
      for (const auto& [rk, rv] : v.items()) {
        std::string s = rv.dump();
        if (s.size() > 160) s = s.substr(0, 157) + "...";
        out += "  " + rk + ": " + s + "\n";
      }
    } else {
      out += k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
      if (k == "status" && report.contains("result")) out += "result:\n";
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-system splitting, realization and fusion toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized decompositions");
  app.add_option("--tol", cfg.tol, "Pass tolerance for residuals")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "Write the report to this file");

  using Handler = std::function<Outcome(const RunConfig&, const json&)>;
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"check-qsystem", "Check the Q-system axioms", check_qsystem_cmd},
      {"from-inclusion", "Build the Q-system of an inclusion with its quasi-basis and index", from_inclusion_cmd},
      {"realize", "Realize a Q-system as a C*-algebra", realize_cmd},
      {"split", "Split a Q-system as X (x) Xv", split_cmd},
      {"expectation", "Conditional expectation and Pimsner-Popa bound", expectation_cmd},
      {"tensor-over-q", "Relative tensor product of Q-bimodules", tensor_over_q_cmd},
      {"enumerate-qsystems", "List irreducible Q-systems in Hilb(G, omega)", enumerate_cmd},
      {"dual-fusion", "Fusion ring of Q-Q bimodules for a pointed Q-system", dual_fusion_cmd},
      {"crossed-product", "Twisted crossed product of an anomalous action", crossed_product_cmd},
      {"obstruction", "FP dimension integrality test", obstruction_cmd},
      {"eigenstate", "FP eigenstate on a K0 module", eigenstate_cmd},
      {"induced-action", "Crossed product, dual ring and traces for an action on points", induced_action_cmd},
  };
  std::map<CLI::App*, Handler> handlers;
  for (const auto& [name, help, h] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "Input JSON file")->required();
    if (name == "expectation") sub->add_option("--samples", cfg.samples, "Random positive samples")->check(CLI::NonNegativeNumber);
    handlers[sub] = h;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  json report;
  report["command"] = cfg.command;
  report["version"] = io::kVersion;
  report["seed"] = cfg.seed;
  report["tolerances"] = {{"axiom", cfg.tol}, {"structure", kStructureTol}, {"action", kActionTol}, {"integrality", 1e-9}};
  int code = 0;
  try {
    const json in = io::read_file(cfg.input);
    const Outcome o = handlers.at(sub)(cfg, in);
    report["status"] = o.pass ? "pass" : "fail";
    report["result"] = o.result;
    code = o.pass ? 0 : 1;
  } catch (const InputError& e) {
    report["status"] = "input_error";
    report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    code = 2;
  } catch (const json::exception& e) {
    report["status"] = "input_error";
    report["error"] = {{"kind", "BadFormat"}, {"message", e.what()}};
    code = 2;
  } catch (const MathError& e) {
    report["status"] = "math_error";
    report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    code = 1;
  }
  if (code != 0 && report.contains("error"))
    std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";

  const std::string text = cfg.format == "json" ? report.dump(2) + "\n" : render_text(report);
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output);
    if (!out) {
      std::cerr << "cannot write " << cfg.output << "\n";
      return 2;
    }
    out << text;
  }
  return code;
}
