#pragma once

#include <fstream>
#include <iostream>
#include <sstream>

#include "sqtile/corpus.hpp"
#include "sqtile/envelope.hpp"
#include "sqtile/lyapunov.hpp"
#include "sqtile/periods.hpp"
#include "sqtile/theorems.hpp"
#include "sqtile/version.hpp"

namespace sqtile {

struct RunConfig {
  std::string command;
  std::string input;            // path or corpus:<name>
  std::string instance;         // holonomy instance file
  std::uint64_t seed = 1;
  long steps = 100000;
  int blocks = 20;
  int dim = 0;                  // 0 = full space
  std::string space = "absolute";
  int max_nodes = 4096;
  int depth = -1;
  int word_len = 12;
  double norm_cap = 0.0;        // 0 = auto
  long element_cap = 20000;
  double tol = 1e-9;
  int count = 200;
  double spread = 0.05;
  int digit_cap = 20;
  int streams = 1;
  std::string tangent = "tautological";  // or "envelope"
  std::string format = "json";            // json | csv | text
  std::string out;                        // output path, empty = stdout
};

struct RunResult {
  int exit_code = 0;
  std::string report;
};

namespace detail {

inline nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["seed"] = c.seed;
  j["steps"] = c.steps;
  j["blocks"] = c.blocks;
  j["dim"] = c.dim;
  j["space"] = c.space;
  j["max_nodes"] = c.max_nodes;
  j["depth"] = c.depth;
  j["word_len"] = c.word_len;
  j["norm_cap"] = c.norm_cap;
  j["element_cap"] = c.element_cap;
  j["tol"] = c.tol;
  j["count"] = c.count;
  j["spread"] = c.spread;
  j["digit_cap"] = c.digit_cap;
  j["streams"] = c.streams;
  j["tangent"] = c.tangent;
  j["format"] = c.format;
  return j;
}

inline nlohmann::json report_shell(const RunConfig& c) {
  nlohmann::json j;
  j["tool"] = "sqtile";
  j["version"] = kVersion;
  j["config"] = config_echo(c);
  j["caveats"] = nlohmann::json::array();
  return j;
}

inline Origami load_origami(const RunConfig& c) {
  if (c.input.rfind("corpus:", 0) == 0) return corpus_entry(c.input.substr(7));
  std::ifstream in(c.input);
  if (!in) throw ParseError("cannot open input file: " + c.input);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("input is not valid JSON at byte " + std::to_string(e.byte) + ": " +
                     c.input);
  }
  return origami_from_json(j);
}

inline RatVec rat_vector_from_json(const nlohmann::json& arr, const std::string& field) {
  if (!arr.is_array()) throw ParseError("holonomy instance: field \"" + field +
                                        "\" must be an array");
  RatVec v;
  for (const auto& x : arr) {
    if (x.is_number_integer()) v.push_back(Rat(Int(x.get<long long>())));
    else if (x.is_string()) v.push_back(rat_from_string(x.get<std::string>()));
    else throw ParseError("holonomy instance: field \"" + field +
                          "\" entries must be integers or rational strings");
  }
  return v;
}

inline std::string render(const RunConfig& c, const nlohmann::json& j) {
  if (c.format == "text") {
    std::ostringstream os;
    os << "sqtile " << kVersion << " : " << c.command << "\n";
    os << j.dump(2) << "\n";
    return os.str();
  }
  return j.dump(2) + "\n";
}

struct Pipeline {
  Origami origami;
  HomologyData hd;
  OrbitGraph graph;
  std::vector<IntMat> gens;
  ForniCertificate cert;
  bool orbit_ok = true;
  std::string orbit_note;
};

inline Pipeline run_pipeline(const RunConfig& c) {
  Pipeline p;
  p.origami = load_origami(c);
  p.hd = homology(p.origami);
  try {
    try {
      p.graph = veech_orbit(p.origami, c.max_nodes, c.depth);
    } catch (const OrbitTooLarge&) {
      // Orbit exceeds the node cap: fall back to a depth-limited graph.
      // Loops and conjugated multitwists of the truncated graph are still
      // exact monodromy elements, possibly generating a smaller subgroup.
      p.graph = veech_orbit(p.origami, c.max_nodes, 4);
      p.orbit_note =
          "orbit exceeded max_nodes; monodromy taken from a depth-4 truncation";
    }
    p.gens = monodromy_abs_generators(p.graph);
    ForniOptions fo;
    fo.bounded.word_len = c.word_len;
    fo.bounded.norm_cap = c.norm_cap;
    fo.bounded.seed = c.seed;
    fo.element_cap = c.element_cap;
    // The base node of the orbit is the canonical form, whose homology data
    // the generators are expressed in.
    p.hd = p.graph.base_homology();
    p.origami = p.graph.nodes.front().origami;
    p.cert = forni_certificate(p.gens, p.hd.J, fo);
    if (!p.orbit_note.empty()) p.cert.caveats.push_back(p.orbit_note);
  } catch (const OrbitTooLarge& e) {
    p.orbit_ok = false;
    p.orbit_note = e.what();
  }
  return p;
}

}  // namespace detail

inline RunResult run(const RunConfig& c) {
  using detail::render;
  nlohmann::json rep = detail::report_shell(c);
  RunResult out;

  if (c.command == "corpus") {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& o : bundled_corpus()) entries.push_back(origami_to_json(o));
    rep["corpus"] = entries;
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "stratum") {
    Origami o = detail::load_origami(c);
    StratumData st = stratum(o);
    rep["stratum"] = {{"kappa", st.kappa},
                      {"genus", st.genus},
                      {"n_singularities", st.n_singularities},
                      {"label", o.label}};
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "homology") {
    Origami o = detail::load_origami(c);
    rep["homology"] = homology_to_json(homology(o));
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "orbit") {
    Origami o = detail::load_origami(c);
    OrbitGraph g = veech_orbit(o, c.max_nodes, c.depth);
    rep["orbit"] = orbit_to_json(g);
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "lyapunov") {
    Origami o = detail::load_origami(c);
    OrbitGraph g = veech_orbit(o, c.max_nodes);
    CocycleSpace space =
        (c.space == "relative") ? CocycleSpace::Relative : CocycleSpace::Absolute;
    int dim = c.dim > 0 ? c.dim
                        : (space == CocycleSpace::Absolute ? g.base_homology().abs_rank
                                                           : g.base_homology().rel_rank);
    LyapunovReport lr =
        estimate_spectrum(g, space, dim, c.steps, c.blocks, c.seed, c.digit_cap, c.streams);
    if (c.format == "csv") {
      out.report = lyapunov_to_csv(lr);
      return out;
    }
    rep["lyapunov"] = lyapunov_to_json(lr);
    SymmetryCheck sym = spectrum_symmetry_check(lr);
    nlohmann::json symj;
    symj["pass"] = sym.pass;
    nlohmann::json sums = nlohmann::json::array();
    for (std::size_t i = 0; i < sym.pair_sums.size(); ++i)
      sums.push_back({{"sum", round12(sym.pair_sums[i])},
                      {"margin", round12(sym.pair_margins[i])}});
    symj["pairs"] = sums;
    rep["symmetry_check"] = symj;
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "forni") {
    detail::Pipeline p = detail::run_pipeline(c);
    if (!p.orbit_ok) {
      rep["caveats"].push_back(p.orbit_note);
      out.exit_code = 2;
      out.report = render(c, rep);
      return out;
    }
    rep["forni"] = forni_to_json(p.cert);
    for (const auto& cav : p.cert.caveats) rep["caveats"].push_back(cav);
    if (!p.cert.conclusive) out.exit_code = 2;
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "holonomy") {
    std::ifstream in(c.instance.empty() ? c.input : c.instance);
    if (!in) throw ParseError("cannot open instance file");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("instance is not valid JSON at byte " + std::to_string(e.byte));
    }
    if (!j.contains("pairing") || !j["pairing"].is_array())
      throw ParseError("holonomy instance: field \"pairing\" missing");
    std::size_t d = j["pairing"].size();
    RatMat pairing_mat(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      auto row = detail::rat_vector_from_json(j["pairing"][i], "pairing");
      if (row.size() != d) throw ParseError("holonomy instance: pairing must be square");
      for (std::size_t k = 0; k < d; ++k) pairing_mat(i, k) = row[k];
    }
    PairingContext ctx = PairingContext::plain(pairing_mat);
    RatVec a = detail::rat_vector_from_json(j.at("a"), "a");
    RatVec b = detail::rat_vector_from_json(j.at("b"), "b");
    RatVec delta = detail::rat_vector_from_json(j.at("delta"), "delta");
    RatVec v = detail::rat_vector_from_json(j.at("v"), "v");
    Rat eps = j.at("eps").is_string() ? rat_from_string(j["eps"].get<std::string>())
                                      : Rat(Int(j["eps"].get<long long>()));
    FramedPoint pt = FramedPoint::checked(ctx, a, b);
    HolonomyResult res = holonomy_square(ctx, pt, delta, eps, v);
    auto vec_json = [](const RatVec& x) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& q : x) arr.push_back(rat_to_string(q));
      return arr;
    };
    rep["holonomy"] = {{"composed", vec_json(res.composed)},
                       {"closed_form", vec_json(res.closed_form)},
                       {"defect", vec_json(res.defect)},
                       {"exact_match", res.composed == res.closed_form}};
    if (res.composed != res.closed_form) out.exit_code = 1;
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "envelope") {
    detail::Pipeline p = detail::run_pipeline(c);
    OrbitCloud cloud = sample_orbit(p.origami, p.hd, c.count, c.seed, c.spread);
    AffineFit fit = affine_fit(cloud, c.tol);
    rep["envelope"] = fit_to_json(fit);
    rep["envelope"]["note"] =
        "orbit cloud of a Teichmueller curve; the full real-analytic envelope "
        "is exercised only through its affine conclusion";
    if (c.format == "csv") {
      std::string csv = "singular_value\n";
      for (int i = 0; i < fit.singular_values.size(); ++i)
        csv += std::to_string(round12(fit.singular_values(i))) + "\n";
      out.report = csv;
      return out;
    }
    if (!p.orbit_ok) {
      rep["caveats"].push_back(p.orbit_note);
      out.exit_code = 2;
      out.report = render(c, rep);
      return out;
    }
    if (fit.complex_check) {
      TangentReport tr = tangent_report(fit, p.hd, p.cert, 64, c.tol);
      nlohmann::json trj;
      trj["rationalized"] = tr.rationalized;
      trj["equals_tautological"] = tr.equals_tautological;
      trj["p_tangent"] = rat_matrix_to_json(tr.p_tangent);
      nlohmann::json prs = nlohmann::json::array();
      for (const auto& ps : tr.pairings)
        prs.push_back({{"tangent_col", ps.tangent_col},
                       {"f_col", ps.f_col},
                       {"status", ps.status},
                       {"value", ps.value}});
      trj["pairings"] = prs;
      trj["all_orthogonal"] = tr.all_orthogonal;
      rep["tangent_report"] = trj;
      if (!tr.all_orthogonal) out.exit_code = 1;
    } else {
      rep["caveats"].push_back("complex structure check failed on the fitted span");
      out.exit_code = 1;
    }
    for (const auto& cav : p.cert.caveats) rep["caveats"].push_back(cav);
    out.report = render(c, rep);
    return out;
  }

  if (c.command == "check-theorem") {
    detail::Pipeline p = detail::run_pipeline(c);
    if (!p.orbit_ok) {
      rep["caveats"].push_back(p.orbit_note);
      out.exit_code = 2;
      out.report = render(c, rep);
      return out;
    }
    RatMat tangent;
    if (c.tangent == "envelope") {
      OrbitCloud cloud = sample_orbit(p.origami, p.hd, c.count, c.seed, c.spread);
      AffineFit fit = affine_fit(cloud, c.tol);
      TangentReport tr = tangent_report(fit, p.hd, p.cert, 64, c.tol);
      if (!tr.rationalized)
        throw Error("check-theorem: envelope tangent could not be rationalized");
      tangent = tr.p_tangent;
      rep["tangent_source"] = "envelope";
    } else {
      tangent = canonical_basis(tautological_plane(p.hd));
      rep["tangent_source"] = "tautological";
    }
    auto claims = check_theorem_suite(p.hd, p.cert, tangent, p.gens, c.seed);
    nlohmann::json cj = nlohmann::json::array();
    bool any_fail = false, any_not_computed_due_inconclusive = !p.cert.conclusive;
    for (const auto& cl : claims) {
      nlohmann::json one;
      one["claim"] = cl.id;
      one["status"] = cl.status;
      one["evidence"] = cl.evidence;
      if (!cl.note.empty()) one["note"] = cl.note;
      cj.push_back(one);
      if (cl.status == "fail") any_fail = true;
    }
    rep["claims"] = cj;
    for (const auto& cav : p.cert.caveats) rep["caveats"].push_back(cav);
    StratumData st = stratum(p.origami);
    rep["surface"] = {{"label", p.origami.label},
                      {"n", p.origami.n},
                      {"kappa", st.kappa},
                      {"genus", st.genus},
                      {"dim_F", p.cert.dim_f}};
    if (any_fail) out.exit_code = 1;
    else if (any_not_computed_due_inconclusive) out.exit_code = 2;
    out.report = render(c, rep);
    return out;
  }

  throw ParseError("unknown command: " + c.command);
}

// Wrapper with the exit-code contract: 64 on malformed input.
inline int run_cli(const RunConfig& c, std::ostream& os, std::ostream& err) {
  try {
    RunResult r = run(c);
    if (!c.out.empty()) {
      std::ofstream f(c.out);
      if (!f) {
        err << "cannot open output file: " << c.out << "\n";
        return 1;
      }
      f << r.report;
    } else {
      os << r.report;
    }
    return r.exit_code;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 64;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sqtile
