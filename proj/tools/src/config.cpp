#include "jdl_cli/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "jdl_cli/expr.hpp"

namespace jdl::cli {

namespace {

struct ChartDecl {
  Chart chart;
  std::vector<std::string> vars;
};

class Loader {
 public:
  explicit Loader(std::string name) : name_(std::move(name)) {}

  [[noreturn]] void fail(const YAML::Mark& m, const std::string& msg, int extra_column = 0) const {
    std::ostringstream os;
    os << name_;
    if (!m.is_null()) os << ":" << m.line + 1 << ":" << m.column + 1 + extra_column;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  void allow_keys(const YAML::Node& n, std::initializer_list<const char*> keys) const {
    if (!n.IsMap()) fail(n.Mark(), "expected a mapping");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : n)
      if (!ok.count(kv.first.Scalar())) fail(kv.first.Mark(), "unknown key '" + kv.first.Scalar() + "'");
  }

  YAML::Node required(const YAML::Node& n, const char* key) const {
    const YAML::Node v = n[key];
    if (!v) fail(n.Mark(), std::string("missing key '") + key + "'");
    return v;
  }

  std::string scalar(const YAML::Node& n) const {
    if (!n.IsScalar()) fail(n.Mark(), "expected a scalar");
    return n.Scalar();
  }

  // Quoted scalars start one column after their mark.
  static int quote_offset(const YAML::Node& n) { return n.Tag() == "!" ? 1 : 0; }

  Field expression(const YAML::Node& n, const std::vector<std::string>& vars) const {
    const std::string s = scalar(n);
    try {
      return parse_expression(s, vars);
    } catch (const ExpressionError& e) {
      fail(n.Mark(), e.message() + " in '" + s + "'", quote_offset(n) + e.column() - 1);
    }
  }

  double number(const YAML::Node& n) const {
    const std::string s = scalar(n);
    try {
      return parse_constant(s);
    } catch (const ExpressionError& e) {
      fail(n.Mark(), e.message() + " in '" + s + "'", quote_offset(n) + e.column() - 1);
    }
  }

  std::vector<Field> expression_list(const YAML::Node& n, const std::vector<std::string>& vars,
                                     std::size_t want, const char* what) const {
    if (!n.IsSequence()) fail(n.Mark(), std::string(what) + " must be a list of expressions");
    if (n.size() != want)
      fail(n.Mark(), std::string(what) + " needs " + std::to_string(want) + " entries, got " + std::to_string(n.size()));
    std::vector<Field> out;
    for (const auto& item : n) out.push_back(expression(item, vars));
    return out;
  }

  ChartDecl chart(const std::string& id, const YAML::Node& n) const {
    allow_keys(n, {"vars", "box"});
    const YAML::Node vars = required(n, "vars");
    const YAML::Node box = required(n, "box");
    if (!vars.IsSequence()) fail(vars.Mark(), "vars must be a list of names");
    if (!box.IsSequence()) fail(box.Mark(), "box must be a list of [lo, hi] pairs");
    if (vars.size() != box.size())
      fail(box.Mark(), "box has " + std::to_string(box.size()) + " intervals for " + std::to_string(vars.size()) +
                           " variables");
    ChartDecl d;
    std::set<std::string> seen;
    for (const auto& v : vars) {
      const std::string name = scalar(v);
      if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        fail(v.Mark(), "variable names must start with a letter");
      if (!seen.insert(name).second) fail(v.Mark(), "duplicate variable '" + name + "'");
      d.vars.push_back(name);
    }
    std::vector<Interval> iv;
    for (const auto& b : box) {
      if (!b.IsSequence() || b.size() != 2) fail(b.Mark(), "interval must be [lo, hi]");
      const double lo = number(b[0]), hi = number(b[1]);
      if (!(lo < hi)) fail(b.Mark(), "interval must have lo < hi");
      iv.push_back({lo, hi});
    }
    d.chart = Chart(id, iv);
    return d;
  }

  JacobiPair pair(const YAML::Node& n, const ChartDecl& c) const {
    allow_keys(n, {"chart", "Pi", "E"});
    const int dim = c.chart.dim;
    Multivector Pi = AltField::zero(AltKind::Multivector, dim, 2);
    Multivector E = AltField::zero(AltKind::Multivector, dim, 1);
    if (const YAML::Node p = n["Pi"]) {
      if (!p.IsMap()) fail(p.Mark(), "Pi must map \"var var\" to an expression");
      for (const auto& kv : p) {
        std::istringstream is(kv.first.Scalar());
        std::string a, b, rest;
        is >> a >> b;
        if (a.empty() || b.empty() || (is >> rest)) fail(kv.first.Mark(), "Pi keys are two variable names");
        auto index = [&](const std::string& v) {
          for (std::size_t i = 0; i < c.vars.size(); ++i)
            if (c.vars[i] == v) return static_cast<int>(i);
          fail(kv.first.Mark(), "unknown variable '" + v + "'");
        };
        const int i = index(a), j = index(b);
        if (i == j) fail(kv.first.Mark(), "Pi needs two different variables");
        const Field f = expression(kv.second, c.vars);
        if (i < j)
          Pi.set({i, j}, f);
        else
          Pi.set({j, i}, -f);
      }
    }
    if (const YAML::Node e = n["E"]) E = vector_field(expression_list(e, c.vars, dim, "E"));
    return make_jacobi_pair(c.chart, Pi, E);
  }

  CatalogEntry example(const YAML::Node& n) const {
    allow_keys(n, {"id", "summary", "charts", "contact", "pairs", "dual_pair", "expected"});
    CatalogEntry e;
    e.id = scalar(required(n, "id"));
    if (e.id.empty()) fail(n["id"].Mark(), "id must be nonempty");
    e.summary = n["summary"] ? scalar(n["summary"]) : "user example";
    e.notes = "loaded from " + name_;

    std::map<std::string, ChartDecl> charts;
    const YAML::Node cs = required(n, "charts");
    if (!cs.IsMap()) fail(cs.Mark(), "charts must map names to {vars, box}");
    for (const auto& kv : cs) charts.emplace(kv.first.Scalar(), chart(e.id + "/" + kv.first.Scalar(), kv.second));
    auto chart_of = [&](const YAML::Node& ref) -> const ChartDecl& {
      const auto it = charts.find(scalar(ref));
      if (it == charts.end()) fail(ref.Mark(), "unknown chart '" + ref.Scalar() + "'");
      return it->second;
    };

    const ChartDecl* source = nullptr;
    if (const YAML::Node c = n["contact"]) {
      allow_keys(c, {"chart", "theta"});
      source = &chart_of(required(c, "chart"));
      const auto th = expression_list(required(c, "theta"), source->vars, source->chart.dim, "theta");
      e.contacts.push_back(make_contact(source->chart, one_form(th)));
      e.kind = EntryKind::Contact;
    }

    std::map<std::string, std::size_t> pair_index;
    if (const YAML::Node ps = n["pairs"]) {
      if (!ps.IsMap()) fail(ps.Mark(), "pairs must map names to {chart, Pi, E}");
      for (const auto& kv : ps) {
        const std::string name = kv.first.Scalar();
        if (name == "point") fail(kv.first.Mark(), "'point' is reserved for the one-point target");
        pair_index[name] = e.pairs.size();
        e.pairs.push_back(pair(kv.second, chart_of(required(kv.second, "chart"))));
      }
      if (!source) e.kind = EntryKind::JacobiPair;
    }

    if (const YAML::Node dp = n["dual_pair"]) {
      allow_keys(dp, {"leg1", "leg2"});
      if (!source) fail(dp.Mark(), "a dual pair needs a contact source");
      auto leg = [&](const char* key) {
        const YAML::Node l = required(dp, key);
        allow_keys(l, {"target", "map", "factor"});
        const YAML::Node t = required(l, "target");
        JacobiPair target = zero_pair(euclidean("point", 0));
        if (scalar(t) != "point") {
          const auto it = pair_index.find(t.Scalar());
          if (it == pair_index.end()) fail(t.Mark(), "unknown pair '" + t.Scalar() + "'");
          target = e.pairs[it->second];
        }
        std::vector<Field> comps;
        if (target.dim() > 0 || l["map"])
          comps = expression_list(required(l, "map"), source->vars, target.dim(), "map");
        const Field a = l["factor"] ? expression(l["factor"], source->vars) : constant(1.0);
        return DualPairLeg{target, ConformalMap{SmoothMap{key, source->chart, target.chart, comps}, a}, {}};
      };
      e.dual_pairs.push_back({e.id, e.contacts.front(), leg("leg1"), leg("leg2")});
      e.kind = EntryKind::DualPair;
    }
    if (e.contacts.empty() && e.pairs.empty()) fail(n.Mark(), "example has neither a contact form nor pairs");

    if (const YAML::Node ex = n["expected"]) {
      if (!ex.IsMap()) fail(ex.Mark(), "expected must map check ids to verdicts");
      for (const auto& kv : ex) {
        const std::string v = scalar(kv.second);
        Status s;
        if (v == "pass") s = Status::Pass;
        else if (v == "fail") s = Status::Fail;
        else if (v == "hypothesis-not-met") s = Status::HypothesisNotMet;
        else fail(kv.second.Mark(), "verdict must be pass, fail or hypothesis-not-met");
        e.expected.push_back({kv.first.Scalar(), s});
      }
    }
    return e;
  }

  std::vector<CatalogEntry> document(const YAML::Node& root) const {
    if (!root.IsMap()) fail(root.Mark(), "config must be a mapping with key 'examples'");
    allow_keys(root, {"examples"});
    const YAML::Node ex = required(root, "examples");
    if (!ex.IsSequence()) fail(ex.Mark(), "examples must be a list");
    std::vector<CatalogEntry> out;
    std::set<std::string> ids;
    for (const auto& n : ex) {
      CatalogEntry e = example(n);
      if (!ids.insert(e.id).second) fail(n.Mark(), "duplicate example id '" + e.id + "'");
      out.push_back(std::move(e));
    }
    return out;
  }

 private:
  std::string name_;
};

}  // namespace

std::vector<CatalogEntry> parse_config(const std::string& text, const std::string& name) {
  const Loader L(name);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    L.fail(e.mark, e.msg);
  }
  return L.document(root);
}

std::vector<CatalogEntry> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace jdl::cli
