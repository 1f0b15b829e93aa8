#include "mae/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "mae/doc.hpp"
#include "mae/frameverify.hpp"
#include "mae/parse.hpp"
#include "mae/variational.hpp"

namespace mae {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kCommands = {"classify",        "lagrangian",  "verify-frame", "invariants-abstract",
                                            "restrict",        "backlund-obstruct", "mu-epsilon", "check-rank1",
                                            "derived",         "soliton"};

struct Flags {
  std::string command, input, format = "json", base, csv;
  uint64_t seed = 0;
  int samples = 32;
  double tol = 1e-6;
  bool timings = false;
};

// Verdict of a check that ran to completion.
struct Outcome {
  json body;
  int code = 0;
};

class Clock {
 public:
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    laps_[name] = std::chrono::duration<double>(now - t_).count();
    t_ = now;
  }
  json to_json() const { return laps_; }

 private:
  std::chrono::steady_clock::time_point t_ = std::chrono::steady_clock::now();
  json laps_ = json::object();
};

json mat_json(const Mat2& m) {
  return json::array({json::array({m[0][0].str(), m[0][1].str()}), json::array({m[1][0].str(), m[1][1].str()})});
}

json invariants_json(const InvariantReport& r, const Flags& f) {
  json j;
  j["s1"] = mat_json(r.S1);
  j["s2"] = mat_json(r.S2);
  j["det_s1"] = r.detS1.str();
  j["euler_lagrange"] = r.euler_lagrange;
  j["wave"] = r.wave;
  std::string type = r.type;
  SignVerdict sv = r.sign;
  if (r.euler_lagrange && !r.wave && sv.tier == "sampled") {
    sv = classify_sign(r.detS1, f.seed, f.samples);
    type = to_string(sv.type);
  }
  j["type"] = type;
  j["evidence"] = {{"tier", r.euler_lagrange ? sv.tier : "exact"}, {"samples", sv.samples}};
  return j;
}

const Document& expect(const Document& d, const std::string& kind, const std::string& cmd) {
  if (d.kind != kind) throw InputError(cmd + " expects a [" + kind + "] document, got [" + d.kind + "]");
  return d;
}

std::map<std::string, mpq_class> parse_base(const std::string& s) {
  std::map<std::string, mpq_class> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--base entries look like name=value: " + item);
    std::string name = item.substr(0, eq), val = item.substr(eq + 1);
    try {
      mpq_class q(val);
      q.canonicalize();
      out[name] = q;
    } catch (const std::invalid_argument&) {
      throw InputError("--base value is not a rational number: " + val);
    }
  }
  return out;
}

Outcome classify(const Document& d, const Flags& f, Clock& clk) {
  const MASystem& s = *expect(d, "monge_ampere", "classify").ma;
  Outcome o;
  json sys;
  sys["source"] = d.ma_source;
  sys["A"] = s.A.str();
  sys["B"] = s.B.str();
  sys["C"] = s.C.str();
  sys["D"] = s.D.str();
  sys["E"] = s.E.str();
  o.body["system"] = sys;
  Expr disc = s.A * s.E - s.B * s.D + s.C * s.C;
  if (is_zero(disc)) throw InputError("not hyperbolic: AE - BD + C^2 vanishes identically");
  o.body["discriminant"] = disc.str();
  AdaptedCoframe cf = adapted_coframe(s);
  o.body["transform"] = cf.transform;
  clk.lap("coframe");
  o.body.update(invariants_json(invariants(cf), f));
  clk.lap("invariants");
  return o;
}

Outcome lagrangian_cmd(const Document& d, const Flags& f, Clock& clk) {
  const MASystem& s = *expect(d, "monge_ampere", "lagrangian").ma;
  Outcome o;
  AdaptedCoframe cf = adapted_coframe(s);
  clk.lap("coframe");
  Form ph = phi0(cf);
  o.body["phi0"] = ph.str();
  Expr lam = integrating_factor(ph, parse_base(f.base));
  o.body["lambda"] = lam.str();
  clk.lap("lambda");
  Form Pi = poincare_cartan(cf, lam);
  o.body["Pi"] = Pi.str();
  Form L;
  std::string failure;
  try {
    L = lagrangian(Pi);
  } catch (const NotIntegrable& e) {
    failure = e.what();
  }
  clk.lap("Lambda");
  if (!failure.empty()) {
    o.body["Lambda"] = nullptr;
    o.body["error"] = {{"kind", "capability"}, {"message", failure}};
    o.code = 3;
    return o;
  }
  o.body["Lambda"] = L.str();
  Form res = mae::d(L) - Pi;
  o.body["residual"] = res.str();
  o.body["pass"] = is_zero(res);
  o.code = is_zero(res) ? 0 : 1;
  return o;
}

Outcome verify_frame(const Document& d, const Flags&, Clock& clk) {
  const FrameSection& fs = *expect(d, "frame", "verify-frame").frame;
  Outcome o;
  FrameCheckReport r = check_involutive(fs.basis);
  clk.lap("involutive");
  json res = json::object();
  for (auto& [name, form] : r.residuals) res[name] = form.str();
  o.body["symbols"] = fs.basis->names;
  o.body["involutive"] = r.pass;
  o.body["residuals"] = res;
  bool pass = r.pass;
  json loci = json::array();
  for (auto& l : fs.loci) {
    bool ok = check_invariant_locus(fs.basis, l);
    pass = pass && ok;
    loci.push_back({{"locus", l.str()}, {"invariant", ok}});
  }
  json exact = json::array();
  for (auto& name : fs.exact) {
    Form dd = mae::d(fs.form(name));
    bool ok = is_zero(dd);
    pass = pass && ok;
    exact.push_back({{"form", name}, {"closed", ok}, {"d", dd.str()}});
  }
  clk.lap("checks");
  o.body["loci"] = loci;
  o.body["exact"] = exact;
  o.body["pass"] = pass;
  o.code = pass ? 0 : 1;
  return o;
}

Outcome invariants_abstract(const Document& d, const Flags& f, Clock& clk) {
  const FrameSection& fs = *expect(d, "frame", "invariants-abstract").frame;
  if (fs.coframe.size() != 5) throw InputError("invariants-abstract needs [frame] coframe = five form names");
  std::vector<Form> five;
  for (auto& n : fs.coframe) five.push_back(fs.form(n));
  Outcome o;
  o.body["coframe"] = fs.coframe;
  o.body.update(invariants_json(abstract_invariants(fs.basis, five), f));
  clk.lap("invariants");
  return o;
}

Outcome restrict_cmd(const Document& d, const Flags&, Clock& clk) {
  const FrameSection& fs = *expect(d, "frame", "restrict").frame;
  if (fs.restrict.empty()) throw InputError("restrict needs a [frame.restrict] table");
  Outcome o;
  json subs = json::object();
  for (auto& [atom, e] : fs.restrict) subs[d.ctx->atom(atom).name] = e.str();
  o.body["substitutions"] = subs;
  FrameCheckReport r = check_involutive(fs.basis);
  clk.lap("involutive");
  json res = json::object();
  for (auto& [name, form] : r.residuals) res[name] = form.str();
  o.body["involutive"] = r.pass;
  o.body["residuals"] = res;
  o.body["frame"] = render_frame(fs.basis);
  o.code = r.pass ? 0 : 1;
  return o;
}

json exprs(const std::array<Expr, 4>& a) {
  json j = json::array();
  for (auto& e : a) j.push_back(e.str());
  return j;
}

Outcome obstruct(const Document& d, const Flags&, Clock& clk) {
  expect(d, "backlund", "backlund-obstruct");
  if (!d.lifting) throw InputError("backlund-obstruct needs [backlund.lifting]");
  const LiftingData& l = *d.lifting;
  Outcome o;
  o.body["V"] = exprs(l.V);
  o.body["W"] = exprs(l.W);
  o.body["mu"] = l.mu.str();
  o.body["epsilon"] = l.epsilon;
  ObstructionReport r = el_obstructions(l);
  clk.lap("obstructions");
  o.body["Phi"] = exprs(r.Phi);
  o.body["phi_vanish"] = r.phi_vanish;
  o.body["rel51"] = r.rel51;
  o.body["rel52"] = r.rel52 ? json(*r.rel52) : json(nullptr);
  o.body["type"] = to_string(r.type);
  o.body["notes"] = r.notes;
  o.code = r.type == SpecialType::Inconsistent ? 1 : 0;
  return o;
}

const BacklundCandidate& candidate(const Document& d, const std::string& cmd) {
  expect(d, "backlund", cmd);
  if (!d.candidate) throw InputError(cmd + " needs a candidate in [backlund]");
  return *d.candidate;
}

Outcome mu_eps(const Document& d, const Flags&, Clock& clk) {
  MuEpsilon m = mu_epsilon(candidate(d, "mu-epsilon"));
  clk.lap("pencil");
  Outcome o;
  o.body["a"] = m.a.str();
  o.body["b"] = m.b.str();
  o.body["c"] = m.c.str();
  o.body["K"] = m.K.str();
  o.body["ratio"] = m.ratio;
  o.body["exact_ratio"] = m.exact_ratio ? json(m.exact_ratio->get_str()) : json(nullptr);
  o.body["mu"] = m.mu;
  o.body["epsilon"] = m.epsilon;
  o.body["special"] = m.special;
  return o;
}

Outcome rank1(const Document& d, const Flags& f, Clock& clk) {
  Rank1Report r = check_rank1(candidate(d, "check-rank1"), f.seed, f.samples);
  clk.lap("rank1");
  Outcome o;
  o.body["has_projections"] = r.has_projections;
  o.body["condition1"] = {{"rank1", r.rank1},
                          {"rank2", r.rank2},
                          {"rank_joint", r.rank_joint},
                          {"numeric_ok", r.numeric_ok},
                          {"numeric_samples", r.numeric_samples},
                          {"pass", r.cond1}};
  o.body["condition2"] = {
      {"rank_dtheta", r.rank_dtheta}, {"rank_Omega", r.rank_Omega}, {"rank_all", r.rank_all}, {"pass", r.cond2}};
  o.body["contact1"] = r.contact1;
  o.body["contact2"] = r.contact2;
  o.body["notes"] = r.notes;
  o.body["pass"] = r.pass;
  o.code = r.pass ? 0 : 1;
  return o;
}

Outcome derived(const Document& d, const Flags&, Clock& clk) {
  const MASystem& s = *expect(d, "monge_ampere", "derived").ma;
  AdaptedCoframe cf = adapted_coframe(s);
  clk.lap("coframe");
  auto w = [&](int i) { return Form::basis1(cf.omega, i); };
  Outcome o;
  o.body["I10"] = derived_flag({w(0), w(1), w(2)});
  o.body["I20"] = derived_flag({w(0), w(3), w(4)});
  clk.lap("derived");
  return o;
}

Outcome soliton(const Document& d, const Flags& f, Clock& clk) {
  const SolitonSection& s = *expect(d, "soliton", "soliton").soliton;
  SolitonGrid g = soliton_propagate(SolitonSeed::zero(), s.lambda, s.v0, s.nx, s.ny, s.hx, s.hy);
  clk.lap("propagate");
  double closed = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      closed = std::max(closed, std::fabs(g.at(i, j) - soliton_closed_form(s.lambda, s.v0, i * g.hx, j * g.hy)));
  if (!f.csv.empty()) {
    std::ofstream os(f.csv);
    if (!os) throw InputError("cannot write " + f.csv);
    os.precision(17);
    os << "x,y,v\n";
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) os << i * g.hx << ',' << j * g.hy << ',' << g.at(i, j) << '\n';
  }
  Outcome o;
  o.body["lambda"] = s.lambda;
  o.body["v0"] = s.v0;
  o.body["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"hx", g.hx}, {"hy", g.hy}};
  o.body["pde_residual"] = g.pde;
  o.body["compatibility"] = g.compat;
  o.body["closed_form_error"] = closed;
  o.body["tol"] = f.tol;
  bool pass = g.pde < f.tol && g.compat < f.tol && closed < f.tol;
  o.body["pass"] = pass;
  o.code = pass ? 0 : 1;
  return o;
}

void text_out(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) text_out(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_structured())) {
    for (size_t i = 0; i < j.size(); ++i) text_out(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.find('\n') != std::string::npos)
      out << prefix << ":\n" << s;
    else
      out << prefix << ": " << s << "\n";
  } else {
    out << prefix << ": " << j.dump() << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monge-Ampere systems toolkit"};
  app.footer(
      "Documents are TOML with [chart], [functions], [assumptions] and exactly one of\n"
      "[monge_ampere], [frame], [backlund], [soliton]. In [monge_ampere], rhs = \"F\" stands\n"
      "for z_xy = F and is encoded as C = 1/2, E = -F.\n"
      "Exit codes: 0 computed/pass, 1 check failed, 2 input error, 3 capability error.");
  Flags f;
  app.add_option("command", f.command, "subcommand")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--input", f.input, "input document")->required();
  app.add_option("--format", f.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", f.seed, "seed for sampled checks");
  app.add_option("--samples", f.samples, "sample count for sampled checks")->check(CLI::PositiveNumber);
  app.add_option("--tol", f.tol, "numeric tolerance");
  app.add_option("--base", f.base, "base point for lambda normalization, e.g. x=0,y=0");
  app.add_option("--csv", f.csv, "soliton grid output (x,y,v)");
  app.add_flag("--timings", f.timings, "add wall-clock timings (makes output run-dependent)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  json report;
  report["tool"] = "mae";
  report["version"] = kVersion;
  report["subcommand"] = f.command;
  report["input"] = f.input;
  report["seed"] = f.seed;
  report["samples"] = f.samples;
  Clock clk;
  int code = 0;
  try {
    Document d = load_document(f.input);
    clk.lap("load");
    report["kind"] = d.kind;
    Outcome o;
    const std::string& c = f.command;
    if (c == "classify") o = classify(d, f, clk);
    else if (c == "lagrangian") o = lagrangian_cmd(d, f, clk);
    else if (c == "verify-frame") o = verify_frame(d, f, clk);
    else if (c == "invariants-abstract") o = invariants_abstract(d, f, clk);
    else if (c == "restrict") o = restrict_cmd(d, f, clk);
    else if (c == "backlund-obstruct") o = obstruct(d, f, clk);
    else if (c == "mu-epsilon") o = mu_eps(d, f, clk);
    else if (c == "check-rank1") o = rank1(d, f, clk);
    else if (c == "derived") o = derived(d, f, clk);
    else o = soliton(d, f, clk);
    report.update(o.body);
    code = o.code;
  } catch (const InputError& e) {
    report["error"] = {{"kind", "input"}, {"message", e.what()}};
    err << "input error: " << e.what() << "\n";
    code = 2;
  } catch (const CapabilityError& e) {
    report["error"] = {{"kind", "capability"}, {"message", e.what()}};
    err << "capability error: " << e.what() << "\n";
    code = 3;
  } catch (const NearSingular& e) {
    report["error"] = {{"kind", "capability"}, {"message", e.what()}};
    err << "capability error: " << e.what() << "\n";
    code = 3;
  }
  report["exit_code"] = code;
  if (f.timings) report["timings"] = clk.to_json();
  if (f.format == "json")
    out << report.dump(2) << "\n";
  else
    text_out(report, "", out);
  return code;
}

}  // namespace mae
