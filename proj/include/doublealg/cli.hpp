#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "doublealg/model.hpp"
#include "doublealg/report.hpp"

namespace doublealg {

/// Bad command line: unknown verb, missing block, bad option value.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::uint64_t seed = 1;
  bool timing = false;
  std::optional<std::string> target;  // block name
  std::optional<std::size_t> split;   // rank of A for `extract matched`
};

namespace detail {

struct RunContext {
  const Model& model;
  const RunOptions& opt;
  Report& report;

  BialgebroidOptions bialgebroid() const {
    BialgebroidOptions b;
    b.seed = opt.seed;
    return b;
  }

  /// Runs `f` and records its verdict, timed when requested.
  void record(const std::function<Verdict()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = f();
    std::optional<double> s;
    if (opt.timing) s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.add(v, s);
  }
  void record_all(const std::function<CheckReport()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    CheckReport r = f();
    std::optional<double> s;
    if (opt.timing) s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& v : r.verdicts) report.add(v, s);
  }

  /// The block named by --target, else the last block of one of `kinds`.
  const Block& pick(const std::vector<std::string>& kinds) const {
    const Block* found = nullptr;
    for (const auto& b : model.file().blocks)
      for (const auto& k : kinds)
        if (b.kind == k && (!opt.target || b.name == *opt.target)) found = &b;
    if (found) return *found;
    std::string list;
    for (const auto& k : kinds) list += (list.empty() ? "[" : " or [") + k + "]";
    if (opt.target) throw UsageError("no " + list + " block named '" + *opt.target + "'");
    throw UsageError("model has no " + list + " block");
  }
};

inline Verdict rejected_verdict(const std::string& check, const Rejected& r) {
  Verdict v = r.verdict();
  if (v.witness) v.witness->location = v.check + ": " + v.witness->location;
  v.check = check;
  v.pass = false;
  return v;
}

inline void check_algebroid_verb(RunContext& c) {
  const LieAlgebroid& L = c.model.algebroid(c.pick({"algebroid"}).name);
  c.record([&] { return check_anchor_morphism(L); });
  c.record([&] { return check_frame_jacobi(L); });
}

inline void check_bialgebroid_verb(RunContext& c) {
  const Block& b = c.pick({"bialgebroid", "cobracket"});
  if (b.kind == "bialgebroid") {
    const auto& p = c.model.bialgebroid(b.name);
    c.record([&] { return check_bialgebroid(p.first, p.second, c.bialgebroid()); });
    return;
  }
  const Bialgebra& bi = c.model.bialgebra(b.name);
  c.record([&] { return check_jacobi(bi.algebra); });
  std::optional<LieAlgebra> gstar;
  c.record([&] {
    try {
      gstar = dual_bracket(bi, c.model.dual_basis(b.name));
      return Verdict::ok("co-jacobi");
    } catch (const Rejected& r) {
      return r.verdict();
    }
  });
  c.record([&] { return check_cocycle(bi); });
  if (gstar)
    c.record([&] {
      return check_bialgebroid(as_algebroid(bi.algebra), as_algebroid(*gstar), c.bialgebroid());
    });
}

inline void check_matched_verb(RunContext& c) {
  const MatchedPair& mp = c.model.matched_pair(c.pick({"matched_pair"}).name);
  // three independent formulations, reported in a fixed order
  auto opt = c.bialgebroid();
  auto timed = [&](auto f) {
    return std::async(std::launch::async, [f, &c] {
      auto t0 = std::chrono::steady_clock::now();
      Verdict v = f();
      return std::make_pair(v, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    });
  };
  auto f1 = timed([&] { return check_matched(mp); });
  auto f2 = timed([&] {
    Verdict v = check_double(detail::vacant_unchecked(mp), opt).summary("vacant_double");
    return v;
  });
  auto f3 = timed([&] { return check_cor_sdp(mp, opt); });
  for (auto* f : {&f1, &f2, &f3}) {
    auto [v, s] = f->get();
    c.report.add(v, c.opt.timing ? std::optional<double>(s) : std::nullopt);
  }
}

inline void check_manin_verb(RunContext& c) {
  const Block& b = c.pick({"manin", "cobracket"});
  if (b.kind == "manin") {
    const PairedAlgebra& p = c.model.manin(b.name);
    c.record([&] { return check_jacobi(p.algebra); });
    c.record([&] { return check_manin(p); });
    return;
  }
  const Bialgebra& bi = c.model.bialgebra(b.name);
  std::optional<PairedAlgebra> p;
  c.record([&] {
    try {
      p = drinfeld_double(bi);
      return Verdict::ok("drinfeld");
    } catch (const Rejected& r) {
      return rejected_verdict("drinfeld", r);
    }
  });
  if (p) c.record([&] { return check_manin(*p); });
}

inline void check_double_verb(RunContext& c) {
  const DoubleLieAlgebroid& d = c.model.double_algebroid(c.pick({"double"}).name);
  bool ok = true;
  c.record_all([&] {
    CheckReport r = check_double(d, c.bialgebroid());
    ok = r.pass();
    return r;
  });
  if (ok) c.record_all([&] { return structural_diagnostics(d, c.bialgebroid()); });
}

inline void check_lavb_verb(RunContext& c) {
  const LAVBundle& V = c.model.lavb(c.pick({"lavb"}).name);
  c.record_all([&] { return lavb_report(V); });
}

inline void build_double_verb(RunContext& c) {
  const Block& b = c.pick({"double"});
  const DoubleLieAlgebroid& d = c.model.double_algebroid(b.name);
  bool ok = true;
  c.record_all([&] {
    CheckReport r = check_double(d, c.bialgebroid());
    ok = r.pass();
    return r;
  });
  if (!ok) return;
  ModelWriter w;
  InducedPair p = induced_pair(d);
  w.bialgebroid(p.first, p.second, b.name + "_over_core_dual");
  w.algebroid(core_algebroid(d), b.name + "_core");
  c.report.output = w.text();
}

inline void build_vacant_verb(RunContext& c) {
  const Block& b = c.pick({"matched_pair"});
  const MatchedPair& mp = c.model.matched_pair(b.name);
  c.record([&] { return check_matched(mp); });
  if (!c.report.pass()) return;
  DoubleLieAlgebroid d = vacant_from_matched(mp);
  c.record_all([&] { return check_double(d, c.bialgebroid()); });
  ModelWriter w;
  w.double_algebroid(d, b.name + "_vacant");
  c.report.output = w.text();
}

inline void build_bowtie_verb(RunContext& c) {
  const Block& b = c.pick({"matched_pair"});
  const MatchedPair& mp = c.model.matched_pair(b.name);
  c.record([&] { return check_matched(mp); });
  if (!c.report.pass()) return;
  LieAlgebroid L = build_bowtie(mp);
  c.record([&] { return check_algebroid(L); });
  ModelWriter w;
  w.algebroid(L, b.name + "_bowtie");
  c.report.output = w.text();
}

inline void build_drinfeld_verb(RunContext& c) {
  const Block& b = c.pick({"cobracket"});
  const Bialgebra& bi = c.model.bialgebra(b.name);
  std::optional<PairedAlgebra> p;
  c.record([&] {
    try {
      p = drinfeld_double(bi);
      return Verdict::ok("drinfeld");
    } catch (const Rejected& r) {
      return rejected_verdict("drinfeld", r);
    }
  });
  if (!p) return;
  // drinfeld_double names the dual basis itself; carry over the model's names
  std::vector<std::string> names = bi.algebra.names();
  for (const auto& n : c.model.dual_basis(b.name)) names.push_back(n);
  LieAlgebra g(names);
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) g.set_bracket(i, j, p->algebra.bracket(i, j));
  p->algebra = g;
  c.record([&] { return check_manin(*p); });
  ModelWriter w;
  w.lie_algebra(p->algebra, b.name + "_double");
  w.manin(*p, b.name + "_manin", b.name + "_double");
  c.report.output = w.text();
}

inline void build_cotangent_double_verb(RunContext& c) {
  const Block& b = c.pick({"bialgebroid", "cobracket"});
  LieAlgebroid L, Lstar;
  if (b.kind == "bialgebroid") {
    std::tie(L, Lstar) = c.model.bialgebroid(b.name);
  } else {
    const Bialgebra& bi = c.model.bialgebra(b.name);
    L = as_algebroid(bi.algebra);
    try {
      Lstar = as_algebroid(dual_bracket(bi, c.model.dual_basis(b.name)));
    } catch (const Rejected& r) {
      c.report.add(rejected_verdict("cotangent_double", r));
      return;
    }
  }
  std::optional<DoubleLieAlgebroid> d;
  c.record([&] {
    try {
      d = build_cotangent_double(L, Lstar);
      return Verdict::ok("cotangent_double");
    } catch (const Rejected& r) {
      return rejected_verdict("cotangent_double", r);
    }
  });
  if (!d) return;
  c.record([&] { return check_bialgebroid(L, Lstar, c.bialgebroid()); });
  c.record_all([&] { return check_double(*d, c.bialgebroid()); });
  if (!c.report.pass()) return;
  ModelWriter w;
  w.double_algebroid(*d, b.name + "_cotangent");
  c.report.output = w.text();
}

inline void build_semidirects_verb(RunContext& c) {
  const Block& b = c.pick({"matched_pair"});
  const MatchedPair& mp = c.model.matched_pair(b.name);
  c.record([&] { return check_representation(mp.A, mp.rho, mp.B.rank(), mp.B.frames(), "representation.rho"); });
  c.record([&] { return check_representation(mp.B, mp.sigma, mp.A.rank(), mp.A.frames(), "representation.sigma"); });
  Semidirects s = build_semidirects(mp);
  c.record([&] { return check_bialgebroid(s.E, s.Estar, c.bialgebroid()); });
  if (!c.report.pass()) return;
  ModelWriter w;
  w.bialgebroid(s.E, s.Estar, b.name + "_semidirect");
  c.report.output = w.text();
}

inline void extract_matched_verb(RunContext& c) {
  const Block& b = c.pick({"algebroid"});
  const LieAlgebroid& L = c.model.algebroid(b.name);
  std::size_t rA = c.opt.split.value_or(L.rank() / 2);
  if (rA > L.rank()) throw UsageError("--split exceeds the rank of '" + b.name + "'");
  std::optional<MatchedPair> mp;
  c.record([&] {
    try {
      mp = extract_actions(L, rA);
      return Verdict::ok("extract");
    } catch (const Rejected& r) {
      return rejected_verdict("extract", r);
    }
  });
  if (!mp) return;
  c.record([&] { return check_matched(*mp); });
  ModelWriter w;
  w.matched_pair(*mp, b.name + "_matched");
  c.report.output = w.text();
}

inline void dualize_dvb_verb(RunContext& c) {
  const Block& b = c.pick({"dvb", "double"});
  DecomposedDVB D = b.kind == "dvb" ? c.model.dvb(b.name) : c.model.double_algebroid(b.name).dvb;
  Sampler rng(c.opt.seed);
  auto vec = [&](std::size_t n) {
    RVector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(rng.rational());
    return v;
  };
  const std::size_t n = D.chart->size(), rA = D.rank_A(), rB = D.rank_B(), rC = D.rank_C();
  c.record([&] {
    for (int t = 0; t < 8; ++t) {
      RVector m = vec(n), kappa = vec(rC);
      RMatrix P = pairing_matrix(D, m, kappa);
      if (determinant(P) == 0) return Verdict::fail("dvb.nondegenerate", "sample " + std::to_string(t), "det = 0");
    }
    return Verdict::ok("dvb.nondegenerate");
  });
  c.record([&] {
    for (int t = 0; t < 8; ++t) {
      RVector m = vec(n), kappa = vec(rC), a = vec(rA), b2 = vec(rB);
      DualDVBElement Phi{Leg::A, m, a, vec(rB), kappa}, Psi{Leg::B, m, b2, vec(rA), kappa};
      Rational p0 = pair(Phi, Psi), p1 = pair_with(Phi, Psi, vec(rC));
      if (p0 != p1)
        return Verdict::fail("dvb.well_defined", "sample " + std::to_string(t), to_string(p1 - p0));
    }
    return Verdict::ok("dvb.well_defined");
  });
  std::vector<std::string> cstar = dual_frame_names(D.C);
  ModelWriter w;
  w.dvb({D.chart, D.A, cstar, dual_frame_names(D.B)}, b.name + "_dual_over_A");
  w.dvb({D.chart, D.B, cstar, dual_frame_names(D.A)}, b.name + "_dual_over_B");
  c.report.output = w.text();
}

using VerbHandler = void (*)(RunContext&);

inline const std::map<std::string, VerbHandler>& verbs() {
  static const std::map<std::string, VerbHandler> v{
      {"check algebroid", check_algebroid_verb},
      {"check bialgebroid", check_bialgebroid_verb},
      {"check matched", check_matched_verb},
      {"check manin", check_manin_verb},
      {"check double", check_double_verb},
      {"check lavb", check_lavb_verb},
      {"build double", build_double_verb},
      {"build vacant", build_vacant_verb},
      {"build bowtie", build_bowtie_verb},
      {"build drinfeld", build_drinfeld_verb},
      {"build cotangent-double", build_cotangent_double_verb},
      {"build semidirects", build_semidirects_verb},
      {"extract matched", extract_matched_verb},
      {"dualize dvb", dualize_dvb_verb},
  };
  return v;
}

}  // namespace detail

inline std::vector<std::string> known_commands() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::verbs()) out.push_back(k);
  return out;
}

/// Parses `text`, runs `command` ("check double", ...) on it. Throws
/// UsageError for an unknown command or missing block, ModelError for a bad
/// model file.
inline Report run(const std::string& command, std::string_view text, const RunOptions& opt = {}) {
  auto it = detail::verbs().find(command);
  if (it == detail::verbs().end()) throw UsageError("unknown command '" + command + "'");
  Model model(parse_model(text));
  Report report;
  report.command = command;
  report.digest = sha256_hex(text);
  detail::RunContext ctx{model, opt, report};
  it->second(ctx);
  return report;
}

}  // namespace doublealg
