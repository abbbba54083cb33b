// diagtor: command-line front end for the diagram algebra homology toolkit.

#include "diagtor/covers.hpp"
#include "diagtor/errors.hpp"
#include "diagtor/mv.hpp"
#include "diagtor/torlab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <regex>
#include <sstream>
#include <string>

using namespace diagtor;
using nlohmann::json;

namespace {

struct Config {
  std::string family;
  unsigned n = 0;
  std::string ring = "Z";
  std::string delta = "0";
  unsigned qmax = 0;
  std::string method = "auto";
  unsigned height = 0;
  std::string subset;
  std::string out;
  std::string theorem;
  std::string cache = default_cache_dir();
  unsigned threads = 1;
  std::string format = "text";
  std::size_t budget = kDefaultBarBudget;
};

struct VerdictFailed {};

CoefficientRing make_ring(const Config& c) { return CoefficientRing::parse(c.ring, parse_integer(c.delta)); }

Algebra make_algebra(const Config& c) {
  Algebra a(parse_family(c.family), c.n);
  const std::size_t cells = static_cast<std::size_t>(a.dim()) * a.dim();
  if (cells > 50'000'000) return a;
  return with_cached_table(a, c.cache, c.threads);
}

json config_json(const Config& c) {
  const auto ring = make_ring(c);
  return {{"ring", ring.spec()}, {"delta", ring.to_string(ring.delta())}};
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

/// Rows for the tabular reports, or empty when the report is not a table.
std::vector<std::vector<std::string>> table_rows(const json& j) {
  std::vector<std::vector<std::string>> rows;
  if (j.contains("groups")) {
    rows.push_back({"q", "free_rank", "torsion", "group"});
    for (const auto& g : j["groups"]) {
      std::string torsion;
      for (const auto& t : g["torsion"]) torsion += (torsion.empty() ? "" : " ") + t.get<std::string>();
      rows.push_back({std::to_string(g["q"].get<unsigned>()), std::to_string(g["free_rank"].get<std::size_t>()),
                      torsion, g["text"].get<std::string>()});
    }
  } else if (j.contains("degrees") && j.contains("source") && j["source"].is_string()) {
    rows.push_back({"q", "source", "target", "classification", "claim", "satisfied"});
    for (const auto& d : j["degrees"])
      rows.push_back({std::to_string(d["q"].get<unsigned>()), d["source"]["text"], d["target"]["text"],
                      d["classification"], d["claim"], d["satisfied"].get<bool>() ? "true" : "false"});
  }
  return rows;
}

void emit(const Config& c, const json& j) {
  if (c.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  auto rows = table_rows(j);
  if (c.format == "csv") {
    if (rows.empty()) {
      std::vector<std::pair<std::string, std::string>> flat;
      flatten(j, "", flat);
      rows.push_back({"key", "value"});
      for (auto& [k, v] : flat) rows.push_back({k, v});
    }
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << csv_field(r[i]);
      std::cout << "\n";
    }
    return;
  }
  if (j.contains("text") && j.size() <= 3 && j["text"].is_string()) {
    std::cout << j["text"].get<std::string>() << "\n";
    return;
  }
  for (const auto& key : {"algebra", "source", "ring", "delta", "method", "theorem", "overall", "pass"})
    if (j.contains(key) && !j[key].is_object()) {
      std::cout << key << ": " << (j[key].is_string() ? j[key].get<std::string>() : j[key].dump()) << "\n";
    }
  if (!rows.empty()) {
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "  " : "") << r[i];
      std::cout << "\n";
    }
    return;
  }
  std::vector<std::pair<std::string, std::string>> flat;
  flatten(j, "", flat);
  for (auto& [k, v] : flat) std::cout << k << ": " << v << "\n";
}

/// Comma-separated tags: J1, J(1), K2, L1-3, L(1,3).
std::vector<IdealTag> parse_subset(const std::string& spec) {
  std::vector<IdealTag> tags;
  static const std::regex one(R"(^\s*([JKLjkl])\(?\s*(\d+)\s*\)?\s*$)");
  static const std::regex two(R"(^\s*([Ll])\(?\s*(\d+)\s*[-,]\s*(\d+)\s*\)?\s*$)");
  // Split on commas outside parentheses.
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (char ch : spec) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  items.push_back(cur);
  for (const auto& item : items) {
    std::smatch m;
    if (std::regex_match(item, m, two)) {
      tags.push_back(IdealTag::L(std::stoul(m[2]), std::stoul(m[3])));
    } else if (std::regex_match(item, m, one)) {
      const char k = static_cast<char>(std::toupper(m[1].str()[0]));
      const auto i = static_cast<unsigned>(std::stoul(m[2]));
      if (k == 'J')
        tags.push_back(IdealTag::J(i));
      else if (k == 'K')
        tags.push_back(IdealTag::K(i));
      else
        throw InvalidArgument("L needs two labels: '" + item + "'");
    } else {
      throw InvalidArgument("cannot parse ideal '" + item + "' (J1, K2, L1-3)");
    }
  }
  if (tags.empty()) throw InvalidArgument("empty subset");
  return tags;
}

TorOptions tor_options(const Config& c) {
  TorOptions o;
  o.method = parse_tor_method(c.method == "minres" ? "resolution" : c.method);
  o.budget = c.budget;
  o.threads = c.threads;
  return o;
}

int cmd_dim(const Config& c) {
  Algebra a(parse_family(c.family), c.n);
  emit(c, {{"algebra", a.id().to_string()}, {"dim", a.dim()}, {"text", std::to_string(a.dim())}});
  return 0;
}

int cmd_multable(const Config& c) {
  Algebra a(parse_family(c.family), c.n);
  Algebra t = with_cached_table(a, c.cache, c.threads);
  json j{{"algebra", a.id().to_string()}, {"dim", a.dim()}, {"digest", a.digest()}, {"entries", t.table()->entries().size()}};
  if (!c.cache.empty()) j["cache"] = table_cache_path(a.id(), c.cache);
  emit(c, j);
  return 0;
}

int cmd_cover(const Config& c) {
  Algebra a = make_algebra(c);
  const auto ring = make_ring(c);
  auto report = verify_cover(a, standard_cover(a, c.height), ring, c.threads);
  json j = to_json(a, report, ring);
  j["config"] = config_json(c);
  emit(c, j);
  return report.ok() ? 0 : 1;
}

int cmd_idem(const Config& c) {
  Algebra a = make_algebra(c);
  const auto ring = make_ring(c);
  auto tag = IdealTag::intersection(parse_subset(c.subset));
  auto outcome = synthesize(a, tag, ring);
  json j = to_json(a, outcome, ring);
  j["config"] = config_json(c);
  emit(c, j);
  return outcome.status == SynthesisStatus::Impossible ? 1 : 0;
}

int cmd_mv(const Config& c, bool check) {
  Algebra a = make_algebra(c);
  auto cover = standard_cover(a, c.height);
  auto mv = build_mv(a, cover, static_cast<unsigned>(cover.width()), c.threads);
  json j = manifest(mv);
  if (!c.out.empty()) export_mv(mv, c.out);
  if (!check) {
    emit(c, j);
    return 0;
  }
  const auto ring = make_ring(c);
  auto h = check_acyclic(mv, ring);
  json homology = json::object();
  for (const auto& [p, g] : h.homology) homology[std::to_string(p)] = g.to_string(ring);
  const bool squares = composes_to_zero(mv), simplex = simplex_decomposition_check(mv);
  const bool ok = squares && simplex && h.acyclic;
  emit(c, {{"algebra", a.id().to_string()},
           {"config", config_json(c)},
           {"d_squared_zero", squares},
           {"simplex_decomposition", simplex},
           {"acyclic", h.acyclic},
           {"homology", homology},
           {"pass", ok}});
  return ok ? 0 : 1;
}

int cmd_tor(const Config& c) {
  Algebra a = make_algebra(c);
  const auto ring = make_ring(c);
  const auto o = tor_options(c);
  TorMethod m = o.method;
  if (m == TorMethod::Auto) {
    double top = 1;
    for (unsigned q = 0; q <= c.qmax; ++q) top *= a.dim() - 1;
    m = top <= static_cast<double>(o.auto_bar_limit) ? TorMethod::Bar : TorMethod::Resolution;
  }
  auto r = m == TorMethod::Bar ? tor_bar(a, ring, c.qmax, c.budget, c.threads) : tor_resolution(a, ring, c.qmax);
  emit(c, to_json(r, ring));
  return 0;
}

int cmd_compare(const Config& c) {
  Algebra a = make_algebra(c);
  const auto ring = make_ring(c);
  auto r = induced_tor_map(a, ring, c.qmax, tor_options(c));
  emit(c, to_json(r, ring));
  return r.pass() ? 0 : 1;
}

int cmd_verify(const Config& c) {
  const auto ring = make_ring(c);
  auto v = verify_theorem(parse_theorem(c.theorem), c.n, ring, c.qmax, tor_options(c), c.height);
  emit(c, v.json);
  return v.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homology of diagram algebras: covers, Mayer-Vietoris complexes and Tor."};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--budget", c.budget, "Largest bar degree allowed");
  app.add_option("--cache", c.cache, "Multiplication table cache directory (default: $DIAGTOR_CACHE_DIR)");

  auto algebra_args = [&](CLI::App* s) {
    s->add_option("family", c.family, "partition, brauer, tl, jones, symmetric, cyclic")->required();
    s->add_option("n", c.n, "Number of strands")->required()->check(CLI::NonNegativeNumber);
  };
  auto ring_args = [&](CLI::App* s) {
    s->add_option("--ring", c.ring, "Z, Q, Fp:<p> (or F<p>), Zmod:<m>");
    s->add_option("--delta", c.delta, "Loop value, an integer reduced into the ring");
  };

  auto* dim = app.add_subcommand("dim", "Basis size");
  algebra_args(dim);
  auto* mult = app.add_subcommand("multable", "Build (and cache) the multiplication table");
  algebra_args(mult);

  auto* cover = app.add_subcommand("cover", "Idempotent cover audits");
  cover->require_subcommand(1);
  auto* cover_verify = cover->add_subcommand("verify", "Check every subfamily up to the height");
  algebra_args(cover_verify);
  ring_args(cover_verify);
  cover_verify->add_option("--height", c.height, "Cover height")->required();

  auto* idem = app.add_subcommand("idem", "Idempotent generator of an intersection of cover ideals");
  algebra_args(idem);
  ring_args(idem);
  idem->add_option("--subset", c.subset, "Ideals, e.g. J1,J3 or K1,L2-3")->required();

  auto* mv = app.add_subcommand("mv", "Mayer-Vietoris complex of the standard cover");
  mv->require_subcommand(1);
  auto* mv_build = mv->add_subcommand("build", "Build and describe the complex");
  auto* mv_check = mv->add_subcommand("check", "d^2 = 0, simplex decomposition and acyclicity");
  for (auto* s : {mv_build, mv_check}) {
    algebra_args(s);
    ring_args(s);
    s->add_option("--height", c.height, "Cover height")->required();
    s->add_option("--out", c.out, "Export manifest and matrices into this directory");
  }

  auto* tor = app.add_subcommand("tor", "Tor_q(1,1) for q <= qmax");
  auto* compare = app.add_subcommand("compare", "Map on Tor induced by the quotient onto the group algebra");
  for (auto* s : {tor, compare}) {
    algebra_args(s);
    ring_args(s);
    s->add_option("--qmax", c.qmax, "Top degree")->required();
    s->add_option("--method", c.method, "auto, bar, resolution (minres)")
        ->check(CLI::IsMember({"auto", "bar", "resolution", "minres"}));
  }

  auto* verify = app.add_subcommand("verify", "Verdict for a theorem instance");
  verify->add_option("theorem", c.theorem, "partition, jones, jones-global, main-partition, main-jones")->required();
  verify->add_option("n", c.n, "Number of strands")->required();
  ring_args(verify);
  verify->add_option("--qmax", c.qmax, "Top degree for the Tor comparison");
  verify->add_option("--height", c.height, "Cover height (0: standard)");
  verify->add_option("--method", c.method, "auto, bar, resolution (minres)")
      ->check(CLI::IsMember({"auto", "bar", "resolution", "minres"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dim) return cmd_dim(c);
    if (*mult) return cmd_multable(c);
    if (*cover_verify) return cmd_cover(c);
    if (*idem) return cmd_idem(c);
    if (*mv_build) return cmd_mv(c, false);
    if (*mv_check) return cmd_mv(c, true);
    if (*tor) return cmd_tor(c);
    if (*compare) return cmd_compare(c);
    if (*verify) return cmd_verify(c);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
