#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mae/backlund.hpp"
#include "mae/ma.hpp"

namespace mae {

struct FrameSection {
  BasisPtr basis;     // after any restriction
  BasisPtr original;  // before restriction
  std::map<int, Expr> restrict;
  std::vector<std::pair<std::string, Form>> forms;  // named forms, declaration order
  std::vector<std::string> coframe;                 // names of five forms for abstract invariants
  std::vector<Expr> loci;
  std::vector<std::string> exact;  // names of forms that must be closed
  const Form& form(const std::string& name) const;
};

struct SolitonSection {
  double lambda = 1, v0 = 0, hx = 0.02, hy = 0.02;
  int nx = 200, ny = 200;
};

// Chart candidate as declared: coordinates of N and the two factor systems.
struct ChartCandidateSource {
  std::vector<int> N;
  MASystem s1, s2;
  Factor f1, f2;
};

struct Document {
  std::string path;
  std::string kind;  // monge_ampere | frame | backlund | soliton
  ContextPtr ctx;
  std::vector<int> chart;
  std::optional<MASystem> ma;
  std::string ma_source;  // "coefficients" or "rhs"
  std::optional<FrameSection> frame;
  std::optional<BacklundCandidate> candidate;
  std::optional<ChartCandidateSource> chart_candidate;
  std::map<std::string, std::string> candidate_forms;  // theta, theta_bar, ... -> form name
  std::optional<LiftingData> lifting;
  std::optional<SolitonSection> soliton;
};

// Errors in structure or expressions raise InputError (ParseError for expressions).
Document load_document(const std::string& path);
Document parse_document(const std::string& text, const std::string& path = "<input>");

// Canonical TOML for an abstract frame: entries dw.i.j.k (0-based) and aux_d.
std::string render_frame(const BasisPtr& b);
// Canonical TOML for a whole document; parse_document of the result renders identically.
std::string render_document(const Document& doc);

}  // namespace mae
