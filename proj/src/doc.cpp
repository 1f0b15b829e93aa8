#include "mae/doc.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "mae/frameverify.hpp"
#include "mae/parse.hpp"

namespace mae {

const Form& FrameSection::form(const std::string& name) const {
  for (auto& [n, f] : forms)
    if (n == name) return f;
  throw InputError("undefined form '" + name + "'");
}

namespace {

std::string where(const toml::node& n) {
  auto s = n.source().begin;
  return s ? " (line " + std::to_string(s.line) + ")" : "";
}

// Expression from a string, integer or float node; floats mark `numeric`.
Expr expr_of(const toml::node& n, const ContextPtr& ctx, bool* numeric = nullptr) {
  if (auto s = n.value<std::string>()) return parse_expr(*s, ctx);
  if (n.is_integer()) return Expr(mpq_class(mpz_class(std::to_string(*n.value<int64_t>()))));
  if (n.is_floating_point()) {
    if (numeric) *numeric = true;
    return Expr(mpq_class(*n.value<double>()));
  }
  throw InputError("expected an expression" + where(n));
}

template <class View>
std::vector<std::string> strings(const View& v, const std::string& what) {
  std::vector<std::string> out;
  if (!v) return out;
  auto* a = v.as_array();
  if (!a) throw InputError(what + " must be an array of strings");
  for (auto& e : *a) {
    auto s = e.template value<std::string>();
    if (!s) throw InputError(what + " must be an array of strings" + where(e));
    out.push_back(*s);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char c) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == c) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(' '), b = s.find_last_not_of(' ');
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

int to_index(const std::string& s, int base, int n, const std::string& key) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos != s.size() || v - base < 0 || v - base >= n) throw InputError("bad index '" + s + "' in key '" + key + "'");
  return v - base;
}

void load_header(const toml::table& t, const ContextPtr& ctx, std::vector<int>& chart) {
  if (auto* c = t["chart"].as_table()) {
    for (auto& name : strings((*c)["coords"], "chart.coords")) chart.push_back(ctx->coordinate(name));
    for (auto& name : strings((*c)["parameters"], "chart.parameters")) ctx->parameter(name);
  }
  if (auto* f = t["functions"].as_table()) {
    std::vector<std::pair<int, const toml::node*>> derivs;
    for (auto& [k, v] : *f) {
      auto* spec = v.as_table();
      if (!spec) throw InputError("functions." + std::string(k.str()) + " must be a table" + where(v));
      auto arg = (*spec)["arg"].value<std::string>();
      if (!arg) throw InputError("functions." + std::string(k.str()) + " needs arg");
      auto a = ctx->find(*arg);
      if (!a) throw InputError("unknown function argument '" + *arg + "'");
      int atom = ctx->opaque(std::string(k.str()), *a);
      if (auto* d = (*spec)["derivative"].node()) derivs.push_back({atom, d});
    }
    for (auto& [atom, d] : derivs) ctx->declare_partial(atom, ctx->atom(atom).arg, expr_of(*d, ctx));
  }
  if (auto* a = t["assumptions"].as_table())
    if (auto* pos = (*a)["positive"].as_array())
      for (auto& e : *pos) ctx->add_assumption(expr_of(e, ctx));
}

MASystem load_ma(const toml::table& m, const ContextPtr& ctx, const std::vector<int>& coords, std::string* source) {
  MASystem s;
  if (coords.size() == 5) {
    s.ctx = ctx;
    s.x = coords[0];
    s.y = coords[1];
    s.z = coords[2];
    s.p = coords[3];
    s.q = coords[4];
  } else if (coords.empty()) {
    s = make_ma_system(ctx);
  } else {
    throw InputError("a Monge-Ampere chart needs exactly five coordinates (x, y, z, p, q)");
  }
  bool has_rhs = m.contains("rhs");
  bool has_coef = false;
  for (auto k : {"A", "B", "C", "D", "E"}) has_coef |= m.contains(k);
  if (has_rhs == has_coef) throw InputError("give either rhs or the coefficients A..E");
  if (has_rhs) {
    s.A = Expr(0);
    s.B = Expr(0);
    s.C = Expr(mpq_class(1, 2));
    s.D = Expr(0);
    s.E = -expr_of(*m.get("rhs"), ctx);
    if (source) *source = "rhs";
  } else {
    Expr* f[5] = {&s.A, &s.B, &s.C, &s.D, &s.E};
    const char* k[5] = {"A", "B", "C", "D", "E"};
    for (int i = 0; i < 5; ++i) *f[i] = m.contains(k[i]) ? expr_of(*m.get(k[i]), ctx) : Expr(0);
    if (source) *source = "coefficients";
  }
  return s;
}

Form parse_form_table(const toml::table& t, const BasisPtr& b, const std::function<Form(const std::string&)>& named,
                      const std::string& what) {
  std::optional<Form> acc;
  for (auto& [k, v] : t) {
    std::string key(k.str());
    Form term = Form::scalar(b, expr_of(v, b->ctx));
    for (auto& part : split(key, '^')) term = wedge(term, named(trim(part)));
    if (acc && acc->deg() != term.deg()) throw InputError("mixed degrees in form " + what);
    acc = acc ? *acc + term : term;
  }
  if (!acc) throw InputError("empty form " + what);
  return *acc;
}

std::string dir_of(const std::string& path) {
  auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

toml::table parse_toml(const std::string& text, const std::string& path) {
  try {
    return toml::parse(text, path);
  } catch (const toml::parse_error& e) {
    std::ostringstream o;
    o << "TOML error: " << e.description() << " (line " << e.source().begin.line << ")";
    throw InputError(o.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

FrameSection load_frame(const toml::table& f, const ContextPtr& ctx, const std::string& dir, int depth) {
  FrameSection fs;
  std::vector<std::string> names;
  std::vector<int> aux;
  std::vector<std::map<uint32_t, Expr>> dw;
  std::vector<std::vector<Expr>> aux_d;
  if (auto base = f["base"].value<std::string>()) {
    if (depth > 4) throw InputError("frame base nesting too deep");
    std::string p = dir + "/" + *base;
    toml::table bt = parse_toml(read_file(p), p);
    std::vector<int> chart;
    load_header(bt, ctx, chart);
    auto* bf = bt["frame"].as_table();
    if (!bf) throw InputError(p + " has no [frame]");
    FrameSection b = load_frame(*bf, ctx, dir_of(p), depth + 1);
    const BasisPtr& B = b.basis;
    names = B->names;
    aux = B->aux;
    dw = B->dw;
    aux_d = B->aux_d;
  }
  if (f.contains("names")) {
    if (!names.empty()) throw InputError("frame with a base cannot redeclare names");
    names = strings(f["names"], "frame.names");
    for (auto& a : strings(f["aux"], "frame.aux")) aux.push_back(ctx->coordinate(a));
    dw.assign(names.size(), {});
    aux_d.assign(aux.size(), std::vector<Expr>(names.size(), Expr(0)));
  }
  if (names.empty()) throw InputError("frame needs names or a base");
  if (auto dim = f["dim"].value<int64_t>(); dim && *dim != int64_t(names.size()))
    throw InputError("frame.dim does not match the number of names");
  int n = int(names.size());
  if (n > 16) throw InputError("frames are limited to 16 symbols");
  int base = int(f["index_base"].value_or<int64_t>(1));
  if (auto* st = f["structure"].as_table()) {
    for (auto& [k, v] : *st) {
      std::string key(k.str());
      auto parts = split(key, '.');
      if (parts.size() != 4 || (parts[0] != "C" && parts[0] != "dw"))
        throw InputError("structure keys are C.i.j.k or dw.i.j.k: '" + key + "'");
      int i = to_index(parts[1], base, n, key), j = to_index(parts[2], base, n, key), l = to_index(parts[3], base, n, key);
      if (j == l) throw InputError("repeated index in '" + key + "'");
      Expr c = expr_of(v, ctx);
      if (parts[0] == "C") c = -c;  // dw^i = -1/2 C^i_jk w^j w^k
      if (j > l) {
        std::swap(j, l);
        c = -c;
      }
      uint32_t m = (1u << j) | (1u << l);
      Expr& slot = dw[i][m];
      slot += c;
      if (slot.zero()) dw[i].erase(m);
    }
  }
  if (auto* ad = f["aux_d"].as_table()) {
    for (auto& [k, v] : *ad) {
      std::string key(k.str());
      auto parts = split(key, '.');
      if (parts.size() != 2) throw InputError("aux_d keys are NAME.k: '" + key + "'");
      auto a = ctx->find(parts[0]);
      int ai = -1;
      for (size_t t = 0; t < aux.size(); ++t)
        if (a && aux[t] == *a) ai = int(t);
      if (ai < 0) throw InputError("'" + parts[0] + "' is not an aux scalar of the frame");
      aux_d[ai][to_index(parts[1], base, n, key)] = expr_of(v, ctx);
    }
  }
  fs.original = make_abstract(ctx, names, dw, aux, aux_d);
  fs.basis = fs.original;
  if (auto* rs = f["restrict"].as_table()) {
    for (auto& [k, v] : *rs) {
      auto a = ctx->find(std::string(k.str()));
      if (!a) throw InputError("unknown restricted symbol '" + std::string(k.str()) + "'");
      fs.restrict[*a] = expr_of(v, ctx);
    }
    fs.basis = restrict_locus(fs.original, fs.restrict);
  }
  const BasisPtr& B = fs.basis;
  if (auto* ft = f["forms"].as_table()) {
    std::set<std::string> busy;
    std::function<Form(const std::string&)> named = [&](const std::string& s) -> Form {
      int idx = B->index_of(s);
      if (idx >= 0) return Form::basis1(B, idx);
      for (auto& [nm, fm] : fs.forms)
        if (nm == s) return fm;
      auto* def = (*ft)[s].as_table();
      if (!def) throw InputError("unknown form or symbol '" + s + "'");
      if (!busy.insert(s).second) throw InputError("cyclic form definition '" + s + "'");
      Form r = parse_form_table(*def, B, named, s);
      fs.forms.push_back({s, r});
      return r;
    };
    for (auto& [k, v] : *ft) named(std::string(k.str()));
  }
  fs.coframe = strings(f["coframe"], "frame.coframe");
  for (auto& c : fs.coframe) fs.form(c);
  if (auto* ch = f["checks"].as_table()) {
    if (auto* l = (*ch)["loci"].as_array())
      for (auto& e : *l) fs.loci.push_back(expr_of(e, ctx));
    fs.exact = strings((*ch)["exact"], "frame.checks.exact");
    for (auto& c : fs.exact) fs.form(c);
  }
  return fs;
}

Factor load_factor(const toml::table& t, const ContextPtr& ctx, const std::string& what) {
  Factor f;
  for (auto& name : strings(t["coords"], what + ".coords")) {
    auto a = ctx->find(name);
    if (!a) throw InputError("unknown coordinate '" + name + "' in " + what);
    f.coords.push_back(*a);
  }
  auto* img = t["image"].as_array();
  if (!img || img->size() != f.coords.size()) throw InputError(what + ".image must list one expression per coordinate");
  for (auto& e : *img) f.image.push_back(expr_of(e, ctx));
  return f;
}

}  // namespace

Document parse_document(const std::string& text, const std::string& path) {
  toml::table t = parse_toml(text, path);
  Document doc;
  doc.path = path;
  doc.ctx = Context::create();
  int sections = 0;
  for (auto k : {"monge_ampere", "frame", "backlund", "soliton"})
    if (t.contains(k)) {
      ++sections;
      doc.kind = k;
    }
  if (sections != 1) throw InputError("document needs exactly one of [monge_ampere], [frame], [backlund], [soliton]");
  load_header(t, doc.ctx, doc.chart);
  std::string dir = dir_of(path);
  if (doc.kind == "monge_ampere") {
    doc.ma = load_ma(*t["monge_ampere"].as_table(), doc.ctx, doc.chart, &doc.ma_source);
  } else if (doc.kind == "frame") {
    auto* f = t["frame"].as_table();
    if (!f) throw InputError("[frame] must be a table");
    doc.frame = load_frame(*f, doc.ctx, dir, 0);
  } else if (doc.kind == "soliton") {
    auto* s = t["soliton"].as_table();
    SolitonSection so;
    so.lambda = (*s)["lambda"].value_or(so.lambda);
    so.v0 = (*s)["v0"].value_or(so.v0);
    so.hx = (*s)["hx"].value_or(so.hx);
    so.hy = (*s)["hy"].value_or(so.hy);
    so.nx = int((*s)["nx"].value_or<int64_t>(so.nx));
    so.ny = int((*s)["ny"].value_or<int64_t>(so.ny));
    if (auto u = (*s)["u"].value<std::string>(); u && *u != "0") throw InputError("only the seed u = 0 is supported");
    doc.soliton = so;
  } else {
    auto* b = t["backlund"].as_table();
    if (!b) throw InputError("[backlund] must be a table");
    if (auto* l = (*b)["lifting"].as_table()) {
      LiftingData ld;
      auto* V = (*l)["V"].as_array();
      auto* W = (*l)["W"].as_array();
      if (!V || !W || V->size() != 4 || W->size() != 4) throw InputError("lifting needs V and W with four entries");
      for (int i = 0; i < 4; ++i) {
        ld.V[i] = expr_of(*V->get(i), doc.ctx, &ld.numeric);
        ld.W[i] = expr_of(*W->get(i), doc.ctx, &ld.numeric);
      }
      if (auto* mu = (*l)["mu"].node()) ld.mu = expr_of(*mu, doc.ctx, &ld.numeric);
      ld.epsilon = int((*l)["epsilon"].value_or<int64_t>(-1));
      if (auto* st = (*l)["s2t4"].node()) ld.s2t4 = expr_of(*st, doc.ctx, &ld.numeric);
      validate(ld);
      doc.lifting = ld;
    }
    if (auto* f = (*b)["frame"].as_table()) {
      FrameSection fs = load_frame(*f, doc.ctx, dir, 0);
      BacklundCandidate c;
      c.basis = fs.basis;
      auto get = [&](const char* k) -> std::optional<Form> {
        if (auto s = (*b)[k].value<std::string>()) {
          doc.candidate_forms[k] = *s;
          return fs.form(*s);
        }
        return std::nullopt;
      };
      auto th = get("theta"), tb = get("theta_bar");
      if (!th || !tb) throw InputError("frame candidate needs theta and theta_bar");
      c.theta = *th;
      c.theta_bar = *tb;
      auto om = get("Omega"), omb = get("Omega_bar");
      if (om && omb) {
        c.Omega = *om;
        c.Omega_bar = *omb;
        c.has_Omega = true;
      }
      doc.frame = fs;
      doc.candidate = c;
    } else if (auto* N = (*b)["N"].as_table()) {
      std::vector<int> nc;
      for (auto& name : strings((*N)["coords"], "backlund.N.coords")) {
        auto a = doc.ctx->find(name);
        if (!a) throw InputError("unknown coordinate '" + name + "' in backlund.N");
        nc.push_back(*a);
      }
      BasisPtr chart = make_chart(doc.ctx, nc);
      auto* m1 = (*b)["M1"].as_table();
      auto* m2 = (*b)["M2"].as_table();
      if (!m1 || !m2) throw InputError("chart candidate needs [backlund.M1] and [backlund.M2]");
      Factor f1 = load_factor(*m1, doc.ctx, "backlund.M1"), f2 = load_factor(*m2, doc.ctx, "backlund.M2");
      MASystem s1 = load_ma(*m1, doc.ctx, f1.coords, nullptr), s2 = load_ma(*m2, doc.ctx, f2.coords, nullptr);
      doc.candidate = candidate_from_systems(chart, s1, f1, s2, f2);
      doc.chart_candidate = ChartCandidateSource{nc, s1, s2, f1, f2};
    }
    if (!doc.lifting && !doc.candidate) throw InputError("[backlund] needs lifting data or a candidate");
  }
  return doc;
}

Document load_document(const std::string& path) { return parse_document(read_file(path), path); }

namespace {

std::string q(const std::string& s) { return "\"" + s + "\""; }

std::string num(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  std::string s = o.str();
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <class Seq, class F>
std::string list(const Seq& xs, F f) {
  std::string out = "[";
  bool first = true;
  for (auto& x : xs) {
    out += (first ? "" : ", ") + f(x);
    first = false;
  }
  return out + "]";
}

std::string form_terms(const Form& f) {
  std::ostringstream o;
  const BasisPtr& b = f.basis();
  for (auto& [m, c] : f.terms()) {
    std::string key;
    for (int i : mask_indices(m)) key += (key.empty() ? "" : "^") + b->names[i];
    o << q(key) << " = " << q(c.str()) << "\n";
  }
  return o.str();
}

void frame_toml(std::ostream& o, const BasisPtr& b, const std::string& table, const std::string& extra) {
  auto atom_name = [&](int a) { return q(b->ctx->atom(a).name); };
  o << "[" << table << "]\nnames = " << list(b->names, q) << "\naux = " << list(b->aux, atom_name)
    << "\nindex_base = 0\n" << extra << "\n[" << table << ".structure]\n";
  for (int i = 0; i < b->n(); ++i)
    for (auto& [m, c] : b->dw[i]) {
      auto ix = mask_indices(m);
      o << q("dw." + std::to_string(i) + "." + std::to_string(ix[0]) + "." + std::to_string(ix[1])) << " = " << q(c.str())
        << "\n";
    }
  o << "\n[" << table << ".aux_d]\n";
  for (size_t a = 0; a < b->aux.size(); ++a)
    for (int k = 0; k < b->n(); ++k)
      if (!b->aux_d[a][k].zero())
        o << q(b->ctx->atom(b->aux[a]).name + "." + std::to_string(k)) << " = " << q(b->aux_d[a][k].str()) << "\n";
}

void frame_section(std::ostream& o, const FrameSection& fs, const std::string& table) {
  std::string extra;
  if (!fs.coframe.empty()) extra += "coframe = " + list(fs.coframe, q) + "\n";
  frame_toml(o, fs.basis, table, extra);
  std::vector<std::pair<std::string, Form>> forms = fs.forms;
  std::sort(forms.begin(), forms.end(), [](auto& a, auto& b) { return a.first < b.first; });
  for (auto& [name, f] : forms) o << "\n[" << table << ".forms." << q(name) << "]\n" << form_terms(f);
  if (!fs.loci.empty() || !fs.exact.empty()) {
    o << "\n[" << table << ".checks]\n";
    o << "loci = " << list(fs.loci, [](const Expr& e) { return q(e.str()); }) << "\n";
    o << "exact = " << list(fs.exact, q) << "\n";
  }
}

void ma_keys(std::ostream& o, const MASystem& s) {
  o << "A = " << q(s.A.str()) << "\nB = " << q(s.B.str()) << "\nC = " << q(s.C.str()) << "\nD = " << q(s.D.str())
    << "\nE = " << q(s.E.str()) << "\n";
}

}  // namespace

std::string render_frame(const BasisPtr& b) {
  std::ostringstream o;
  frame_toml(o, b, "frame", "");
  return o.str();
}

std::string render_document(const Document& doc) {
  const ContextPtr& ctx = doc.ctx;
  std::ostringstream o;
  auto name = [&](int a) { return q(ctx->atom(a).name); };
  std::vector<int> chart = doc.chart;
  if (chart.empty() && doc.ma) chart = doc.ma->coords();
  std::vector<int> params;
  std::vector<int> fns;
  std::set<std::string> seen;
  for (int a = 0; a < ctx->size(); ++a) {
    Atom at = ctx->atom(a);
    if (at.kind == AtomKind::Parameter) params.push_back(a);
    if (at.kind == AtomKind::Opaque && at.fname != "sin" && at.fname != "cos" && at.fname != "log" &&
        at.fname != "arctan" && seen.insert(at.fname).second)
      fns.push_back(a);
  }
  if (!chart.empty() || !params.empty()) {
    o << "[chart]\n";
    if (!chart.empty()) o << "coords = " << list(chart, name) << "\n";
    if (!params.empty()) o << "parameters = " << list(params, name) << "\n";
    o << "\n";
  }
  if (!fns.empty()) {
    o << "[functions]\n";
    for (int a : fns) {
      Atom at = ctx->atom(a);
      o << at.fname << " = { arg = " << q(ctx->atom(at.arg).name);
      if (auto d = ctx->known_partial(a, at.arg)) o << ", derivative = " << q(Expr(ctx, d->num, d->den).str());
      o << " }\n";
    }
    o << "\n";
  }
  if (auto as = ctx->assumptions(); !as.empty()) {
    o << "[assumptions]\npositive = " << list(as, [&](const Frac& f) { return q(Expr(ctx, f.num, f.den).str()); })
      << "\n\n";
  }
  if (doc.kind == "monge_ampere") {
    o << "[monge_ampere]\n";
    ma_keys(o, *doc.ma);
  } else if (doc.kind == "frame") {
    frame_section(o, *doc.frame, "frame");
  } else if (doc.kind == "soliton") {
    const SolitonSection& s = *doc.soliton;
    o << "[soliton]\nlambda = " << num(s.lambda) << "\nv0 = " << num(s.v0) << "\nnx = " << s.nx << "\nny = " << s.ny
      << "\nhx = " << num(s.hx) << "\nhy = " << num(s.hy) << "\n";
  } else {
    o << "[backlund]\n";
    for (auto& [k, v] : doc.candidate_forms) o << k << " = " << q(v) << "\n";
    if (doc.lifting) {
      const LiftingData& l = *doc.lifting;
      auto val = [&](const Expr& e) { return l.numeric ? num(e.const_value().get_d()) : q(e.str()); };
      o << "\n[backlund.lifting]\nV = " << list(l.V, val) << "\nW = " << list(l.W, val) << "\nmu = " << val(l.mu)
        << "\nepsilon = " << l.epsilon << "\n";
      if (l.s2t4) o << "s2t4 = " << val(*l.s2t4) << "\n";
    }
    if (doc.chart_candidate) {
      const ChartCandidateSource& c = *doc.chart_candidate;
      o << "\n[backlund.N]\ncoords = " << list(c.N, name) << "\n";
      auto factor = [&](const char* t, const MASystem& s, const Factor& f) {
        o << "\n[backlund." << t << "]\ncoords = " << list(f.coords, name)
          << "\nimage = " << list(f.image, [](const Expr& e) { return q(e.str()); }) << "\n";
        ma_keys(o, s);
      };
      factor("M1", c.s1, c.f1);
      factor("M2", c.s2, c.f2);
    } else if (doc.frame) {
      o << "\n";
      frame_section(o, *doc.frame, "backlund.frame");
    }
  }
  return o.str();
}

}  // namespace mae
