#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "doublealg/liealg.hpp"
#include "doublealg/matched.hpp"
#include "doublealg/poly_parse.hpp"

namespace doublealg {

/// Model-file error at a 1-based line and column.
class ModelError : public Error {
 public:
  ModelError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// `key(arg, ...) = value`
struct Entry {
  std::string key;
  std::vector<std::string> args;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // of the value
};

struct Block {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;

  const Entry* find(const std::string& key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
  std::vector<const Entry*> all(const std::string& key) const {
    std::vector<const Entry*> out;
    for (const auto& e : entries)
      if (e.key == key) out.push_back(&e);
    return out;
  }
};

struct ModelFile {
  std::vector<Block> blocks;

  const Block* find(const std::string& kind, const std::string& name) const {
    for (const auto& b : blocks)
      if (b.kind == kind && b.name == name) return &b;
    return nullptr;
  }
  std::vector<const Block*> of_kind(const std::string& kind) const {
    std::vector<const Block*> out;
    for (const auto& b : blocks)
      if (b.kind == kind) out.push_back(&b);
    return out;
  }
};

namespace detail {

// key -> number of arguments
inline const std::map<std::string, std::map<std::string, std::size_t>>& model_schema() {
  static const std::map<std::string, std::map<std::string, std::size_t>> s{
      {"chart", {{"coords", 0}}},
      {"lie_algebra", {{"basis", 0}, {"bracket", 2}}},
      {"cobracket", {{"algebra", 0}, {"dual_basis", 0}, {"cobracket", 1}}},
      {"algebroid",
       {{"chart", 0}, {"frames", 0}, {"anchor", 1}, {"bracket", 2}, {"algebra", 0}, {"tangent", 0}, {"cotangent", 0},
        {"poisson", 2}}},
      {"bialgebroid", {{"algebroid", 0}, {"dual", 0}}},
      {"dvb", {{"chart", 0}, {"A", 0}, {"B", 0}, {"C", 0}}},
      {"lavb",
       {{"side", 0}, {"base", 0}, {"core", 0}, {"base_coords", 0}, {"core_coords", 0}, {"lambda", 1}, {"q", 1},
        {"twist", 2}, {"core_anchor", 1}, {"tangent", 0}}},
      {"matched_pair", {{"A", 0}, {"B", 0}, {"rho", 1}, {"sigma", 1}, {"coadjoint", 0}}},
      {"double", {{"tangent", 0}, {"vertical", 0}, {"horizontal", 0}, {"cotangent", 0}, {"vacant", 0}}},
      {"manin", {{"algebra", 0}, {"pairing", 2}, {"first", 0}, {"second", 0}}},
  };
  return s;
}

inline bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

inline bool valid_symbol(const std::string& s) {
  std::string_view v = s;
  if (v.size() > 3 && v.substr(0, 3) == "d/d") v = v.substr(3);
  if (v.empty() || std::isdigit(static_cast<unsigned char>(v[0]))) return false;
  for (char c : v)
    if (!is_name_char(c)) return false;
  return true;
}

}  // namespace detail

/// Syntax and schema pass: blocks, keys, arities and duplicate entries.
/// `#` starts a comment; a value with an open `{` continues on the next
/// lines until the braces balance.
inline ModelFile parse_model(std::string_view text) {
  ModelFile file;
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    lines.push_back(cur);
  }
  std::set<std::string> names;
  const auto& schema = detail::model_schema();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string line = lines[i].substr(0, lines[i].find('#'));
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ModelError("unterminated block header", lineno, line.find('[') + 1);
      std::vector<std::string> parts;
      for (const auto& p : detail::split_list(t.substr(1, t.size() - 2), ' '))
        if (!p.empty()) parts.push_back(p);
      if (parts.size() != 2) throw ModelError("block header must be [kind name]", lineno, 1);
      if (!schema.count(parts[0])) throw ModelError("unknown block kind '" + parts[0] + "'", lineno, 2);
      if (!detail::valid_symbol(parts[1])) throw ModelError("invalid block name '" + parts[1] + "'", lineno, 2);
      if (!names.insert(parts[1]).second) throw ModelError("duplicate block name '" + parts[1] + "'", lineno, 2);
      file.blocks.push_back({parts[0], parts[1], lineno, {}});
      continue;
    }
    if (file.blocks.empty()) throw ModelError("entry outside of a block", lineno, 1);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ModelError("expected 'key = value'", lineno, 1);
    std::string lhs = detail::trim(std::string_view(line).substr(0, eq));
    std::size_t value_start = eq + 1;
    while (value_start < line.size() && std::isspace(static_cast<unsigned char>(line[value_start]))) ++value_start;
    std::string value = line.substr(value_start);
    auto balance = [](const std::string& s) {
      long b = 0;
      for (char c : s) b += (c == '{') - (c == '}');
      return b;
    };
    while (balance(value) > 0 && i + 1 < lines.size()) {
      ++i;
      value += " " + lines[i].substr(0, lines[i].find('#'));
    }
    if (balance(value) != 0) throw ModelError("unbalanced braces", lineno, value_start + 1);
    Entry e{lhs, {}, detail::trim(value), lineno, value_start + 1};
    if (auto open = lhs.find('('); open != std::string::npos) {
      if (lhs.back() != ')') throw ModelError("expected ')'", lineno, line.find('(') + 1);
      e.key = detail::trim(lhs.substr(0, open));
      e.args = detail::split_list(lhs.substr(open + 1, lhs.size() - open - 2), ',');
    }
    Block& blk = file.blocks.back();
    const auto& keys = schema.at(blk.kind);
    auto k = keys.find(e.key);
    if (k == keys.end()) throw ModelError("unknown key '" + e.key + "' in [" + blk.kind + "]", lineno, 1);
    if (e.args.size() != k->second)
      throw ModelError("'" + e.key + "' takes " + std::to_string(k->second) + " argument(s)", lineno, 1);
    for (const auto& prev : blk.entries)
      if (prev.key == e.key && prev.args == e.args) throw ModelError("'" + lhs + "' given twice", lineno, 1);
    blk.entries.push_back(std::move(e));
  }
  return file;
}

/// Resolved objects of a model file. Construction validates every block
/// against its schema (shapes, names, references, antisymmetry); no axiom is
/// checked here.
class Model {
 public:
  explicit Model(ModelFile file) : file_(std::move(file)) {
    for (const auto& b : file_.blocks) resolve(b);
  }

  const ModelFile& file() const { return file_; }

  ChartPtr chart(const std::string& n) const { return charts_.at(n); }
  const LieAlgebra& lie_algebra(const std::string& n) const { return algebras_.at(n); }
  const Bialgebra& bialgebra(const std::string& n) const { return bialgebras_.at(n); }
  const std::vector<std::string>& dual_basis(const std::string& n) const { return dual_basis_.at(n); }
  const LieAlgebroid& algebroid(const std::string& n) const { return algebroids_.at(n); }
  const std::pair<LieAlgebroid, LieAlgebroid>& bialgebroid(const std::string& n) const { return pairs_.at(n); }
  const DecomposedDVB& dvb(const std::string& n) const { return dvbs_.at(n); }
  const LAVBundle& lavb(const std::string& n) const { return lavbs_.at(n); }
  const MatchedPair& matched_pair(const std::string& n) const { return matched_.at(n); }
  const DoubleLieAlgebroid& double_algebroid(const std::string& n) const { return doubles_.at(n); }
  const PairedAlgebra& manin(const std::string& n) const { return manins_.at(n); }

 private:
  [[noreturn]] static void fail(const Entry& e, const std::string& what, std::size_t offset = 0) {
    throw ModelError(what, e.line, e.column + offset);
  }

  const Entry& need(const Block& b, const std::string& key) const {
    if (const Entry* e = b.find(key)) return *e;
    throw ModelError("[" + b.kind + " " + b.name + "] needs '" + key + "'", b.line, 1);
  }

  template <class Map>
  const typename Map::mapped_type& ref(const Map& m, const Entry& e, const std::string& kind) const {
    auto it = m.find(e.value);
    if (it == m.end()) fail(e, "unknown " + kind + " '" + e.value + "'");
    return it->second;
  }

  static std::vector<std::string> names(const Entry& e) {
    std::vector<std::string> out = detail::split_list(e.value, ',');
    for (const auto& n : out)
      if (!detail::valid_symbol(n)) fail(e, "invalid name '" + n + "'");
    return out;
  }

  static std::size_t index_of(const Entry& e, const std::vector<std::string>& list, const std::string& n) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i] == n) return i;
    fail(e, "unknown frame '" + n + "'");
  }

  /// Runs `f`, re-raising library errors at the entry.
  template <class F>
  static auto at(const Entry& e, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const ParseError& p) {
      throw ModelError(p.what(), e.line, e.column + p.column() - 1);
    } catch (const ModelError&) {
      throw;
    } catch (const Error& x) {
      throw ModelError(x.what(), e.line, e.column);
    }
  }

  ChartPtr chart_or_point(const Block& b) const {
    if (const Entry* e = b.find("chart")) return ref(charts_, *e, "chart");
    return make_chart({});
  }

  Derivation derivation(const Entry& e, const ChartPtr& ch, const std::vector<std::string>& frames,
                        const PolyVector& default_field) const {
    std::string v = e.value;
    const std::string head = "derivation";
    if (v.compare(0, head.size(), head) == 0) v = detail::trim(v.substr(head.size()));
    if (v.size() < 2 || v.front() != '{' || v.back() != '}') fail(e, "expected derivation{ ... }");
    Derivation d{default_field, zero_matrix(ch, frames.size(), frames.size())};
    std::set<std::string> seen;
    for (const auto& part : detail::split_list(v.substr(1, v.size() - 2), ';')) {
      if (part.empty()) continue;
      auto colon = part.find(':');
      if (colon == std::string::npos) fail(e, "expected 'frame: image' in derivation");
      std::string key = detail::trim(part.substr(0, colon)), body = detail::trim(part.substr(colon + 1));
      if (!seen.insert(key).second) fail(e, "'" + key + "' given twice in derivation");
      if (key == "field") {
        d.base_field = at(e, [&] {
          std::vector<std::string> basis;
          for (const auto& n : ch->names()) basis.push_back("d/d" + n);
          return parse_linear(body, ch, basis);
        });
        continue;
      }
      std::size_t j = index_of(e, frames, key);
      PolyVector col = at(e, [&] { return parse_linear(body, ch, frames); });
      for (std::size_t i = 0; i < frames.size(); ++i) d.action[i][j] = col[i];
    }
    return d;
  }

  static PolyVector vector_field(const Entry& e, const ChartPtr& ch) {
    std::vector<std::string> basis;
    for (const auto& n : ch->names()) basis.push_back("d/d" + n);
    return at(e, [&] { return parse_linear(e.value, ch, basis); });
  }

  static RVector constant_vector(const Entry& e, const std::string& text, const std::vector<std::string>& basis) {
    ChartPtr pt = make_chart({});
    PolyVector v = at(e, [&] { return parse_linear(text, pt, basis); });
    RVector out;
    for (const auto& p : v) out.push_back(p.constant_value());
    return out;
  }

  void resolve(const Block& b) {
    if (b.kind == "chart") {
      const Entry& e = need(b, "coords");
      std::vector<std::string> ns = names(e);
      charts_[b.name] = at(e, [&] { return make_chart(ns); });
    } else if (b.kind == "lie_algebra") {
      const Entry& e = need(b, "basis");
      std::vector<std::string> basis = names(e);
      LieAlgebra g = at(e, [&] { return LieAlgebra(basis); });
      ChartPtr pt = make_chart({});
      for (const Entry* br : b.all("bracket")) {
        std::size_t i = index_of(*br, basis, br->args[0]), j = index_of(*br, basis, br->args[1]);
        RVector v = constant_vector(*br, br->value, basis);
        if (i != j)
          for (const Entry* other : b.all("bracket"))
            if (other != br && other->args[0] == br->args[1] && other->args[1] == br->args[0])
              fail(*br, "bracket(" + br->args[0] + ", " + br->args[1] + ") also given in the opposite order");
        at(*br, [&] {
          g.set_bracket(i, j, v);
          return 0;
        });
      }
      algebras_.emplace(b.name, g);
    } else if (b.kind == "cobracket") {
      const Entry& ae = need(b, "algebra");
      const LieAlgebra& g = ref(algebras_, ae, "lie_algebra");
      std::vector<std::string> dual = dual_names(g.names());
      if (const Entry* d = b.find("dual_basis")) {
        dual = names(*d);
        if (dual.size() != g.dim()) fail(*d, "dual basis must have one name per basis element");
      }
      std::vector<std::string> wedges;
      std::vector<std::pair<std::size_t, std::size_t>> idx;
      for (std::size_t j = 0; j < g.dim(); ++j)
        for (std::size_t k = j + 1; k < g.dim(); ++k) {
          wedges.push_back(g.names()[j] + "^" + g.names()[k]);
          idx.push_back({j, k});
        }
      Cobracket delta(g.dim());
      for (const Entry* ce : b.all("cobracket")) {
        std::size_t i = index_of(*ce, g.names(), ce->args[0]);
        RVector v = constant_vector(*ce, ce->value, wedges);
        for (std::size_t w = 0; w < v.size(); ++w) delta.set(i, idx[w].first, idx[w].second, v[w]);
      }
      bialgebras_.emplace(b.name, Bialgebra{g, delta});
      dual_basis_[b.name] = dual;
    } else if (b.kind == "algebroid") {
      algebroids_.emplace(b.name, resolve_algebroid(b));
    } else if (b.kind == "bialgebroid") {
      const Entry& le = need(b, "algebroid");
      const Entry& de = need(b, "dual");
      const LieAlgebroid& L = ref(algebroids_, le, "algebroid");
      const LieAlgebroid& D = ref(algebroids_, de, "algebroid");
      if (!same_chart(L.chart(), D.chart())) fail(de, "the two algebroids live on different charts");
      if (L.rank() != D.rank()) fail(de, "the two algebroids have different ranks");
      pairs_.emplace(b.name, std::make_pair(L, D));
    } else if (b.kind == "dvb") {
      DecomposedDVB D{chart_or_point(b), names(need(b, "A")), names(need(b, "B")), {}};
      if (const Entry* c = b.find("C")) D.C = names(*c);
      dvbs_.emplace(b.name, D);
    } else if (b.kind == "lavb") {
      lavbs_.emplace(b.name, resolve_lavb(b));
    } else if (b.kind == "matched_pair") {
      matched_.emplace(b.name, resolve_matched(b));
    } else if (b.kind == "double") {
      doubles_.emplace(b.name, resolve_double(b));
    } else if (b.kind == "manin") {
      const Entry& ae = need(b, "algebra");
      const LieAlgebra& g = ref(algebras_, ae, "lie_algebra");
      const std::size_t n = g.dim();
      RMatrix P = zeros(n, n);
      for (const Entry* pe : b.all("pairing")) {
        std::size_t i = index_of(*pe, g.names(), pe->args[0]), j = index_of(*pe, g.names(), pe->args[1]);
        Rational v = at(*pe, [&] { return parse_rational(pe->value); });
        P[i][j] = v;
        P[j][i] = v;
      }
      auto span = [&](const std::string& key) {
        const Entry& se = need(b, key);
        RMatrix rows;
        for (const auto& v : detail::split_list(se.value, ',')) rows.push_back(constant_vector(se, v, g.names()));
        return rows;
      };
      PairedAlgebra p{g, P, span("first"), span("second")};
      at(need(b, "second"), [&] {
        validate_paired(p);
        return 0;
      });
      manins_.emplace(b.name, p);
    }
  }

  LieAlgebroid resolve_algebroid(const Block& b) const {
    if (const Entry* e = b.find("algebra")) return as_algebroid(ref(algebras_, *e, "lie_algebra"));
    if (const Entry* e = b.find("tangent")) {
      LieAlgebroid T = tangent_algebroid(ref(charts_, *e, "chart"));
      if (const Entry* f = b.find("frames")) {
        std::vector<std::string> fr = names(*f);
        if (fr.size() != T.rank()) fail(*f, "need one frame per coordinate");
        return at(*f, [&] { return reframe(T, identity(T.rank()), fr); });
      }
      return T;
    }
    if (const Entry* e = b.find("cotangent")) {
      ChartPtr ch = ref(charts_, *e, "chart");
      PoissonChart P(ch);
      for (const Entry* pe : b.all("poisson")) {
        auto i = ch->find(pe->args[0]), j = ch->find(pe->args[1]);
        if (!i || !j) fail(*pe, "unknown coordinate in poisson(...)");
        if (*i == *j) fail(*pe, "poisson(" + pe->args[0] + ", " + pe->args[0] + ") must vanish");
        Polynomial v = at(*pe, [&] { return parse_polynomial(pe->value, ch); });
        P.set(*i, *j, v);
      }
      std::vector<std::string> fr;
      if (const Entry* f = b.find("frames")) fr = names(*f);
      return at(*e, [&] { return cotangent_algebroid(P, fr); });
    }
    ChartPtr ch = chart_or_point(b);
    const Entry& fe = need(b, "frames");
    std::vector<std::string> fr = names(fe);
    LieAlgebroid L = at(fe, [&] { return LieAlgebroid(ch, fr); });
    for (const Entry* ae : b.all("anchor")) L.set_anchor(index_of(*ae, fr, ae->args[0]), vector_field(*ae, ch));
    for (const Entry* be : b.all("bracket")) {
      std::size_t i = index_of(*be, fr, be->args[0]), j = index_of(*be, fr, be->args[1]);
      for (const Entry* other : b.all("bracket"))
        if (other != be && i != j && other->args[0] == be->args[1] && other->args[1] == be->args[0])
          fail(*be, "bracket(" + be->args[0] + ", " + be->args[1] + ") also given in the opposite order");
      PolyVector v = at(*be, [&] { return parse_linear(be->value, ch, fr); });
      at(*be, [&] {
        L.set_bracket(i, j, v);
        return 0;
      });
    }
    return L;
  }

  LAVBundle resolve_lavb(const Block& b) const {
    if (const Entry* e = b.find("tangent")) {
      ChartPtr ch = ref(charts_, *e, "chart");
      std::vector<std::string> base, yc, kc;
      for (const auto& x : ch->names()) {
        base.push_back("e_" + x);
        yc.push_back("y_" + x);
        kc.push_back("k_" + x);
      }
      if (const Entry* f = b.find("base")) base = names(*f);
      if (const Entry* f = b.find("base_coords")) yc = names(*f);
      if (const Entry* f = b.find("core_coords")) kc = names(*f);
      return at(*e, [&] { return tangent_lavb(ch, base, yc, kc); });
    }
    const Entry& se = need(b, "side");
    const LieAlgebroid& side = ref(algebroids_, se, "algebroid");
    const Entry& be = need(b, "base");
    std::vector<std::string> base = names(be), core, yc = names(need(b, "base_coords")), kc;
    if (const Entry* c = b.find("core")) core = names(*c);
    if (const Entry* c = b.find("core_coords")) kc = names(*c);
    LAVBundle V = at(be, [&] {
      LAVBundle W = make_lavb(side, base, core, yc, kc);
      detail::validate_shape(W);
      extend_chart(extend_chart(side.chart(), yc), kc);
      return W;
    });
    const ChartPtr& ch = side.chart();
    std::vector<std::string> dual = dual_frame_names(base);
    for (const Entry* le : b.all("lambda")) {
      std::size_t k = index_of(*le, side.frames(), le->args[0]);
      V.lambda[k] = derivation(*le, ch, dual, side.anchor(k));
    }
    for (const Entry* qe : b.all("q")) {
      std::size_t k = index_of(*qe, side.frames(), qe->args[0]);
      V.q[k] = derivation(*qe, ch, core, side.anchor(k));
    }
    ChartPtr big = extend_chart(ch, yc);
    std::vector<std::size_t> ys;
    for (std::size_t a = 0; a < base.size(); ++a) ys.push_back(ch->size() + a);
    for (const Entry* te : b.all("twist")) {
      std::size_t i = index_of(*te, side.frames(), te->args[0]), j = index_of(*te, side.frames(), te->args[1]);
      if (i == j) fail(*te, "twist of a frame with itself must vanish");
      PolyVector v = at(*te, [&] { return parse_linear(te->value, big, core); });
      PolyMatrix m = zero_matrix(ch, core.size(), base.size());
      for (std::size_t g = 0; g < core.size(); ++g) {
        LinearSplit s = at(*te, [&] { return split_linear(v[g], ys); });
        if (!s.constant.is_zero()) fail(*te, "twist must be linear in the base coordinates");
        for (std::size_t a = 0; a < base.size(); ++a) m[g][a] = s.linear[a].embed(ch);
      }
      set_twist(V, i, j, m);
    }
    for (const Entry* ce : b.all("core_anchor")) {
      std::size_t g = index_of(*ce, core, ce->args[0]);
      PolyVector v = at(*ce, [&] { return parse_linear(ce->value, ch, base); });
      for (std::size_t a = 0; a < base.size(); ++a) V.core_anchor[a][g] = v[a];
    }
    return V;
  }

  MatchedPair resolve_matched(const Block& b) const {
    const LieAlgebroid& A = ref(algebroids_, need(b, "A"), "algebroid");
    const LieAlgebroid& B = ref(algebroids_, need(b, "B"), "algebroid");
    if (!same_chart(A.chart(), B.chart())) fail(need(b, "B"), "A and B live on different charts");
    if (const Entry* c = b.find("coadjoint")) {
      if (c->value != "true") fail(*c, "expected 'true'");
      if (!b.all("rho").empty() || !b.all("sigma").empty()) fail(*c, "coadjoint pairs take no explicit actions");
      return at(*c, [&] { return coadjoint_pair(A, B); });
    }
    MatchedPair mp{A, B, {}, {}};
    const ChartPtr& ch = A.chart();
    for (std::size_t a = 0; a < A.rank(); ++a) mp.rho.push_back({A.anchor(a), zero_matrix(ch, B.rank(), B.rank())});
    for (std::size_t k = 0; k < B.rank(); ++k) mp.sigma.push_back({B.anchor(k), zero_matrix(ch, A.rank(), A.rank())});
    for (const Entry* e : b.all("rho")) {
      std::size_t a = index_of(*e, A.frames(), e->args[0]);
      mp.rho[a] = derivation(*e, ch, B.frames(), A.anchor(a));
    }
    for (const Entry* e : b.all("sigma")) {
      std::size_t k = index_of(*e, B.frames(), e->args[0]);
      mp.sigma[k] = derivation(*e, ch, A.frames(), B.anchor(k));
    }
    return mp;
  }

  DoubleLieAlgebroid resolve_double(const Block& b) const {
    if (const Entry* e = b.find("tangent")) return tangent_double(ref(charts_, *e, "chart"));
    if (const Entry* e = b.find("cotangent")) {
      const auto& p = ref(pairs_, *e, "bialgebroid");
      return at(*e, [&] { return build_cotangent_double(p.first, p.second); });
    }
    if (const Entry* e = b.find("vacant")) {
      const MatchedPair& mp = ref(matched_, *e, "matched_pair");
      return at(*e, [&] { return detail::vacant_unchecked(mp); });
    }
    const Entry& ve = need(b, "vertical");
    const Entry& he = need(b, "horizontal");
    const LAVBundle& V = ref(lavbs_, ve, "lavb");
    const LAVBundle& H = ref(lavbs_, he, "lavb");
    DoubleLieAlgebroid d{{V.chart(), V.base, V.side.frames(), V.core}, V, H};
    at(he, [&] {
      validate_double(d);
      return 0;
    });
    return d;
  }

  ModelFile file_;
  std::map<std::string, ChartPtr> charts_;
  std::map<std::string, LieAlgebra> algebras_;
  std::map<std::string, Bialgebra> bialgebras_;
  std::map<std::string, std::vector<std::string>> dual_basis_;
  std::map<std::string, LieAlgebroid> algebroids_;
  std::map<std::string, std::pair<LieAlgebroid, LieAlgebroid>> pairs_;
  std::map<std::string, DecomposedDVB> dvbs_;
  std::map<std::string, LAVBundle> lavbs_;
  std::map<std::string, MatchedPair> matched_;
  std::map<std::string, DoubleLieAlgebroid> doubles_;
  std::map<std::string, PairedAlgebra> manins_;
};

/// Prints structures as model-file blocks that parse back to equal objects.
class ModelWriter {
 public:
  const std::string& text() const { return text_; }

  /// Name of a chart block with these coordinates, emitted on first use;
  /// empty for a point.
  std::string chart(const ChartPtr& ch, const std::string& hint) {
    if (ch->size() == 0) return "";
    for (const auto& [c, n] : charts_)
      if (same_chart(c, ch)) return n;
    std::string n = fresh(hint);
    charts_.push_back({ch, n});
    text_ += "[chart " + n + "]\ncoords = " + join(ch->names()) + "\n\n";
    return n;
  }

  void lie_algebra(const LieAlgebra& g, const std::string& name) {
    use(name);
    text_ += "[lie_algebra " + name + "]\nbasis = " + join(g.names()) + "\n";
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = i + 1; j < g.dim(); ++j)
        if (!all_zero_r(g.bracket(i, j)))
          text_ += "bracket(" + g.names()[i] + ", " + g.names()[j] + ") = " + format_vector(g.bracket(i, j), g.names()) +
                   "\n";
    text_ += "\n";
  }

  /// Emits the algebra as `name_algebra` and the cobracket block `name`.
  void bialgebra(const Bialgebra& b, const std::vector<std::string>& dual_basis, const std::string& name) {
    lie_algebra(b.algebra, name + "_algebra");
    use(name);
    const auto& ns = b.algebra.names();
    text_ += "[cobracket " + name + "]\nalgebra = " + name + "_algebra\ndual_basis = " + join(dual_basis) + "\n";
    for (std::size_t i = 0; i < b.delta.dim(); ++i) {
      std::string terms;
      for (std::size_t j = 0; j < ns.size(); ++j)
        for (std::size_t k = j + 1; k < ns.size(); ++k) {
          const Rational& v = b.delta.of(i)[j][k];
          if (is_zero(v)) continue;
          std::string w = ns[j] + "^" + ns[k];
          if (terms.empty()) terms = v == 1 ? w : v == -1 ? "-" + w : to_string(v) + " * " + w;
          else if (sgn(v) > 0) terms += " + " + (v == 1 ? w : to_string(v) + " * " + w);
          else terms += " - " + (v == -1 ? w : to_string(Rational(-v)) + " * " + w);
        }
      if (!terms.empty()) text_ += "cobracket(" + ns[i] + ") = " + terms + "\n";
    }
    text_ += "\n";
  }

  void manin(const PairedAlgebra& p, const std::string& name, const std::string& algebra) {
    use(name);
    const auto& ns = p.algebra.names();
    text_ += "[manin " + name + "]\nalgebra = " + algebra + "\n";
    for (std::size_t i = 0; i < ns.size(); ++i)
      for (std::size_t j = i; j < ns.size(); ++j)
        if (!is_zero(p.pairing[i][j])) text_ += "pairing(" + ns[i] + ", " + ns[j] + ") = " + to_string(p.pairing[i][j]) + "\n";
    auto span = [&](const RMatrix& rows) {
      std::vector<std::string> out;
      for (const auto& r : rows) out.push_back(format_vector(r, ns));
      return join(out);
    };
    text_ += "first = " + span(p.first) + "\nsecond = " + span(p.second) + "\n\n";
  }

  void algebroid(const LieAlgebroid& L, const std::string& name) {
    std::string c = chart(L.chart(), name + "_chart");
    use(name);
    text_ += "[algebroid " + name + "]\n";
    if (!c.empty()) text_ += "chart = " + c + "\n";
    text_ += "frames = " + join(L.frames()) + "\n";
    for (std::size_t a = 0; a < L.rank(); ++a)
      if (!all_zero(L.anchor(a)))
        text_ += "anchor(" + L.frames()[a] + ") = " + format_field(L.anchor(a), *L.chart()) + "\n";
    for (std::size_t a = 0; a < L.rank(); ++a)
      for (std::size_t b = a + 1; b < L.rank(); ++b)
        if (!all_zero(L.structure(a, b)))
          text_ += "bracket(" + L.frames()[a] + ", " + L.frames()[b] + ") = " + format_section(L, L.structure(a, b)) +
                   "\n";
    text_ += "\n";
  }

  void bialgebroid(const LieAlgebroid& L, const LieAlgebroid& Lstar, const std::string& name) {
    algebroid(L, name + "_A");
    algebroid(Lstar, name + "_dual");
    use(name);
    text_ += "[bialgebroid " + name + "]\nalgebroid = " + name + "_A\ndual = " + name + "_dual\n\n";
  }

  void lavb(const LAVBundle& V, const std::string& name) {
    algebroid(V.side, name + "_side");
    use(name);
    const LieAlgebroid& S = V.side;
    text_ += "[lavb " + name + "]\nside = " + name + "_side\nbase = " + join(V.base) + "\n";
    if (!V.core.empty()) text_ += "core = " + join(V.core) + "\n";
    text_ += "base_coords = " + join(V.base_coords) + "\n";
    if (!V.core_coords.empty()) text_ += "core_coords = " + join(V.core_coords) + "\n";
    std::vector<std::string> dual = dual_frame_names(V.base);
    for (std::size_t b = 0; b < S.rank(); ++b)
      if (!trivial(V.lambda[b], S.anchor(b)))
        text_ += "lambda(" + S.frames()[b] + ") = derivation" + format_derivation(V.lambda[b], *S.chart(), dual) + "\n";
    for (std::size_t b = 0; b < S.rank(); ++b)
      if (!trivial(V.q[b], S.anchor(b)))
        text_ += "q(" + S.frames()[b] + ") = derivation" + format_derivation(V.q[b], *S.chart(), V.core) + "\n";
    ChartPtr big = extend_chart(V.chart(), V.base_coords);
    const std::size_t n = V.chart()->size();
    for (std::size_t b = 0; b < S.rank(); ++b)
      for (std::size_t b2 = b + 1; b2 < S.rank(); ++b2) {
        PolyVector v = zero_vector(big, V.rank_core());
        for (std::size_t g = 0; g < V.rank_core(); ++g)
          for (std::size_t a = 0; a < V.rank_base(); ++a)
            v[g] += V.twist[b][b2][g][a].embed(big) * Polynomial::variable(big, n + a);
        if (!all_zero(v))
          text_ += "twist(" + S.frames()[b] + ", " + S.frames()[b2] + ") = " + format_linear(v, V.core) + "\n";
      }
    for (std::size_t g = 0; g < V.rank_core(); ++g) {
      PolyVector col;
      for (std::size_t a = 0; a < V.rank_base(); ++a) col.push_back(V.core_anchor[a][g]);
      if (!all_zero(col)) text_ += "core_anchor(" + V.core[g] + ") = " + format_linear(col, V.base) + "\n";
    }
    text_ += "\n";
  }

  void double_algebroid(const DoubleLieAlgebroid& d, const std::string& name) {
    lavb(d.vertical, name + "_vertical");
    lavb(d.horizontal, name + "_horizontal");
    use(name);
    text_ += "[double " + name + "]\nvertical = " + name + "_vertical\nhorizontal = " + name + "_horizontal\n\n";
  }

  void matched_pair(const MatchedPair& mp, const std::string& name) {
    algebroid(mp.A, name + "_A");
    algebroid(mp.B, name + "_B");
    use(name);
    text_ += "[matched_pair " + name + "]\nA = " + name + "_A\nB = " + name + "_B\n";
    const Chart& ch = *mp.A.chart();
    for (std::size_t a = 0; a < mp.A.rank(); ++a)
      if (!trivial(mp.rho[a], mp.A.anchor(a)))
        text_ += "rho(" + mp.A.frames()[a] + ") = derivation" + format_derivation(mp.rho[a], ch, mp.B.frames()) + "\n";
    for (std::size_t b = 0; b < mp.B.rank(); ++b)
      if (!trivial(mp.sigma[b], mp.B.anchor(b)))
        text_ += "sigma(" + mp.B.frames()[b] + ") = derivation" + format_derivation(mp.sigma[b], ch, mp.A.frames()) +
                 "\n";
    text_ += "\n";
  }

  void dvb(const DecomposedDVB& D, const std::string& name) {
    std::string c = chart(D.chart, name + "_chart");
    use(name);
    text_ += "[dvb " + name + "]\n";
    if (!c.empty()) text_ += "chart = " + c + "\n";
    text_ += "A = " + join(D.A) + "\nB = " + join(D.B) + "\n";
    if (!D.C.empty()) text_ += "C = " + join(D.C) + "\n";
    text_ += "\n";
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
  }
  static bool all_zero_r(const RVector& v) {
    for (const auto& x : v)
      if (!is_zero(x)) return false;
    return true;
  }
  static bool trivial(const Derivation& d, const PolyVector& anchor) {
    if (d.base_field != anchor) return false;
    for (const auto& row : d.action)
      if (!all_zero(row)) return false;
    return true;
  }
  std::string fresh(std::string n) {
    while (used_.count(n)) n += "_";
    used_.insert(n);
    return n;
  }
  void use(const std::string& n) {
    if (!used_.insert(n).second) throw Error("model writer: block name '" + n + "' used twice");
  }

  std::string text_;
  std::vector<std::pair<ChartPtr, std::string>> charts_;
  std::set<std::string> used_;
};

}  // namespace doublealg
