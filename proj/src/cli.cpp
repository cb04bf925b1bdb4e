#include "packing/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "packing/construct.hpp"
#include "packing/count.hpp"
#include "packing/density.hpp"
#include "packing/search.hpp"
#include "packing/superpattern.hpp"

namespace packing::cli {

namespace {

using Json = nlohmann::ordered_json;

// Thrown by a subcommand that detects a broken invariant in its own output.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Json rational_json(const Rational& q) {
  return Json{{"num", boost::multiprecision::numerator(q).str()},
              {"den", boost::multiprecision::denominator(q).str()},
              {"decimal", to_decimal(q)}};
}

std::string decimal(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

void write_table(std::ostream& out, const Table& t) {
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "") << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

struct Envelope {
  std::string command;
  Json input = Json::object();
  Json result = Json::object();
  Json stats = Json::object();
  Table table;
};

void emit(std::ostream& out, const std::string& format, const Envelope& e) {
  if (format == "csv") {
    write_csv(out, e.table);
  } else if (format == "table") {
    write_table(out, e.table);
  } else {
    Json doc{{"schema_version", kSchemaVersion}, {"command", e.command}, {"input", e.input}, {"result", e.result},
             {"stats", e.stats}};
    out << doc.dump(2) << "\n";
  }
}

// "112", "12-1", "132_g", optionally followed by ":weight" (integer or a/b).
WeightedPatternSet parse_set(const std::vector<std::string>& texts) {
  WeightedPatternSet ps;
  for (const auto& t : texts) {
    const auto colon = t.find(':');
    const Pattern p = parse_pattern_notation(t.substr(0, colon)).pattern;
    Rational w = 1;
    if (colon != std::string::npos) {
      try {
        w = Rational(t.substr(colon + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad weight in '" + t + "'");
      }
    }
    ps.add(p, w);
  }
  if (ps.empty()) throw std::invalid_argument("at least one pattern is required");
  return ps;
}

Json set_json(const WeightedPatternSet& ps) {
  Json arr = Json::array();
  for (const auto& e : ps.entries()) {
    arr.push_back(Json{{"pattern", format_pattern_notation(e.pattern)}, {"weight", to_string(e.weight)}});
  }
  return arr;
}

std::string set_text(const WeightedPatternSet& ps) {
  std::string s;
  for (const auto& e : ps.entries()) {
    if (!s.empty()) s += " ";
    s += format_pattern_notation(e.pattern);
    if (e.weight != 1) s += ":" + to_string(e.weight);
  }
  return s;
}

std::pair<int, int> parse_range(const std::string& text) {
  auto sep = text.find("..");
  std::size_t skip = 2;
  if (sep == std::string::npos) {
    sep = text.find(':');
    skip = 1;
  }
  try {
    if (sep == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + skip))};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad range '" + text + "' (expected a..b)");
  }
}

const std::vector<std::string> kSearchColumns{"n",           "k",        "mu",         "delta_num", "delta_den",
                                              "delta_decimal", "witness", "exhaustive", "nodes"};

std::vector<std::string> search_row(const SearchResult& r) {
  return {std::to_string(r.n),
          std::to_string(r.k),
          to_string(r.mu),
          boost::multiprecision::numerator(r.delta).str(),
          boost::multiprecision::denominator(r.delta).str(),
          to_decimal(r.delta),
          format_word(r.witness),
          r.exhaustive ? "true" : "false",
          std::to_string(r.nodes_explored)};
}

Json search_json(const SearchResult& r) {
  return Json{{"n", r.n},
              {"k", r.k},
              {"mu", rational_json(r.mu)},
              {"delta", rational_json(r.delta)},
              {"witness", format_word(r.witness)},
              {"exhaustive", r.exhaustive}};
}

Json density_json(const DensityValue& v) {
  Json j{{"value", v.value}, {"decimal", decimal(v.value)}};
  j["exact"] = v.exact ? rational_json(*v.exact) : Json(nullptr);
  j["error_bound"] = v.error_bound;
  j["provenance"] = v.provenance;
  if (v.root_a) j["root_a"] = *v.root_a;
  if (v.alpha) j["alpha"] = *v.alpha;
  if (v.shift) j["shift"] = *v.shift;
  if (v.cap) j["cap"] = *v.cap;
  if (!v.proportions.empty()) j["proportions"] = v.proportions;
  return j;
}

struct Common {
  std::string format = "json";
  unsigned threads = 1;
  std::uint64_t budget_nodes = 0;
  double budget_seconds = 0;
  std::uint64_t seed = 0x5eed2024;

  SearchOptions search() const {
    SearchOptions o;
    o.budget.max_nodes = budget_nodes;
    o.budget.max_seconds = budget_seconds;
    o.threads = threads;
    return o;
  }
};

// ---- subcommands -----------------------------------------------------------

int cmd_count(const Common&, const std::vector<std::string>& patterns, const std::string& word_text, Envelope& e) {
  const auto ps = parse_set(patterns);
  const Word w = parse_word(word_text);
  const auto r = density(ps, w);
  e.input = Json{{"patterns", set_json(ps)}, {"word", format_word(w)}};
  e.result = Json{{"nu", rational_json(r.nu)}, {"denominator", r.denom.str()}, {"density", rational_json(r.d)}};
  e.table.header = {"patterns", "word", "nu", "denominator", "density", "density_decimal"};
  e.table.rows.push_back({set_text(ps), format_word(w), to_string(r.nu), r.denom.str(), to_string(r.d), to_decimal(r.d)});
  return kOk;
}

int cmd_density(const Common& c, const std::string& pattern, const std::string& route, int cap, Envelope& e) {
  const Pattern p = parse_pattern_notation(pattern).pattern;
  SimplexMaxOptions opt;
  opt.seed = c.seed;
  e.input = Json{{"pattern", format_pattern_notation(p)}, {"route", route}};
  if (route == "cap") {
    e.input["cap"] = cap;
    e.input["seed"] = c.seed;
  }
  const DensityValue v = density_of(p, route, cap, opt);
  e.result = density_json(v);
  e.table.header = {"pattern", "value", "error_bound", "provenance"};
  e.table.rows.push_back({format_pattern_notation(p), decimal(v.value), decimal(v.error_bound), v.provenance});
  return kOk;
}

int cmd_search(const Common& c, const std::vector<std::string>& patterns, int k, int n, Envelope& e) {
  const auto ps = parse_set(patterns);
  if (n < 0) throw std::invalid_argument("-n is required");
  if (k < 1) k = n;
  const auto r = delta_exact(ps, k, n, c.search());
  e.input = Json{{"patterns", set_json(ps)}, {"k", k}, {"n", n}, {"budget_nodes", c.budget_nodes}};
  e.result = search_json(r);
  e.stats = Json{{"nodes", r.nodes_explored}, {"threads", c.threads}};
  e.table.header = kSearchColumns;
  e.table.rows.push_back(search_row(r));
  return r.exhaustive ? kOk : kBudget;
}

int cmd_series(const Common& c, const std::vector<std::string>& patterns, const std::string& range, int k,
               Envelope& e) {
  const auto ps = parse_set(patterns);
  const auto [lo, hi] = parse_range(range);
  const KPolicy policy = k >= 1 ? KPolicy::Fixed : KPolicy::Diagonal;
  const auto rep = delta_series(ps, lo, hi, policy, k, c.search());
  e.input = Json{{"patterns", set_json(ps)},
                 {"n_range", {lo, hi}},
                 {"k", policy == KPolicy::Fixed ? Json(k) : Json("n")},
                 {"budget_nodes", c.budget_nodes}};
  Json rows = Json::array();
  Json nodes = Json::array();
  bool exhaustive = true;
  e.table.header = kSearchColumns;
  for (const auto& r : rep.rows) {
    rows.push_back(search_json(r));
    nodes.push_back(r.nodes_explored);
    e.table.rows.push_back(search_row(r));
    exhaustive = exhaustive && r.exhaustive;
  }
  Json violations = Json::array();
  for (const auto& v : rep.violations) {
    violations.push_back(Json{{"n", v.n},
                              {"k", v.k},
                              {"kind", v.kind},
                              {"value", rational_json(v.value)},
                              {"neighbour", rational_json(v.neighbour)}});
  }
  e.result = Json{{"rows", rows},
                  {"violations", violations},
                  {"audit_complete", rep.audit_complete},
                  {"infimum_so_far", rational_json(rep.infimum_so_far)}};
  e.stats = Json{{"nodes", nodes}, {"threads", c.threads}};
  if (!rep.violations.empty() && rep.audit_complete) throw InternalError("monotonicity violated on exact values");
  return exhaustive ? kOk : kBudget;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.emplace_back(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + item + "'");
    }
  }
  return out;
}

std::vector<LayerKind> parse_kinds(const std::string& text, std::size_t count) {
  std::vector<LayerKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "dec" || item == "decreasing") {
      out.push_back(LayerKind::Decreasing);
    } else if (item == "const" || item == "constant") {
      out.push_back(LayerKind::Constant);
    } else {
      throw std::invalid_argument("layer kind must be dec or const, got '" + item + "'");
    }
  }
  if (text.empty()) out.assign(count, LayerKind::Decreasing);
  return out;
}

struct ConstructArgs {
  std::string family;
  int n = -1, k = -1, d = -1, depth = 1, l = -1, m = -1;
  std::string pattern = "11-2";
  std::string pqr = "1,1,1";
  std::string proportions;
  std::string kinds;
  std::string shape;
  std::string emit = "json";
};

int cmd_construct(const Common& c, const ConstructArgs& a, std::ostream& out, Envelope& e) {
  auto need = [](int v, const char* name) {
    if (v < 0) throw std::invalid_argument(std::string(name) + " is required for this family");
    return v;
  };
  e.input = Json{{"family", a.family}};
  std::optional<Construction> built;
  Word word;
  if (a.family == "balanced") {
    const Pattern target = parse_pattern_notation(a.pattern).pattern;
    built = balanced_construction(need(a.n, "-n"), need(a.k, "-k"), target);
    e.input.update(Json{{"n", a.n}, {"k", a.k}, {"pattern", format_pattern_notation(target)}});
  } else if (a.family == "pqr" || a.family == "nested") {
    auto v = parse_rationals(a.pqr);
    if (v.size() != 3) throw std::invalid_argument("--pqr takes p,q,r");
    const int p = v[0].convert_to<int>(), q = v[1].convert_to<int>(), r = v[2].convert_to<int>();
    e.input.update(Json{{"n", a.n}, {"pqr", {p, q, r}}});
    if (a.family == "pqr") {
      built = pqr_word(p, q, r, need(a.n, "-n"));
    } else {
      built = nested_word(p, q, a.depth, need(a.n, "-n"), r);
      e.input["depth"] = a.depth;
    }
  } else if (a.family == "layered") {
    if (a.proportions.empty()) throw std::invalid_argument("--proportions is required for the layered family");
    auto props = parse_rationals(a.proportions);
    auto kinds = parse_kinds(a.kinds, props.size());
    std::optional<LayeredShape> shape;
    if (!a.shape.empty()) {
      std::vector<int> lengths;
      for (const auto& x : parse_rationals(a.shape)) lengths.push_back(x.convert_to<int>());
      shape = LayeredShape(lengths);
    }
    built = layered_word(props, kinds, need(a.n, "-n"), shape);
    e.input.update(Json{{"n", a.n}, {"proportions", a.proportions}, {"kinds", a.kinds}, {"shape", a.shape}});
  } else if (a.family == "twelve-one") {
    const int n = need(a.n, "-n");
    const int d = a.d >= 0 ? a.d : best_twelve_one_d(n);
    built = twelve_one_word(n, d);
    e.input.update(Json{{"n", n}, {"d", d}});
  } else if (a.family == "sqrt-layer") {
    built = sqrt_layer_perm(need(a.n, "-n"));
    e.input["n"] = a.n;
  } else if (a.family == "superpattern") {
    const int l = need(a.l, "-l"), m = need(a.m, "-m");
    word = superpattern_word(std::min(l, m), m);
    e.input.update(Json{{"l", l}, {"m", m}});
    const auto check = is_universal(word, l, m);
    if (!check.universal) throw InternalError("superpattern word is not universal");
    e.result = Json{{"word", format_word(word)}, {"length", word.size()}, {"universal", true}};
    e.table.header = {"word", "length", "universal"};
    e.table.rows.push_back({format_word(word), std::to_string(word.size()), "true"});
  } else {
    throw std::invalid_argument("unknown family '" + a.family +
                                "' (balanced, pqr, nested, layered, twelve-one, sqrt-layer, superpattern)");
  }
  if (built) {
    word = built->word;
    const BigInt got = recount(*built);
    if (got != built->predicted_count) throw InternalError("recount disagrees with the recipe's prediction");
    e.result = Json{{"word", format_word(word)},
                    {"recipe", built->recipe},
                    {"target", set_json(built->target)},
                    {"predicted_count", built->predicted_count.str()},
                    {"recount", got.str()},
                    {"density", rational_json(built->predicted_density)}};
    e.table.header = {"word", "recipe", "target", "count", "density_decimal"};
    e.table.rows.push_back({format_word(word), built->recipe, set_text(built->target), got.str(),
                            to_decimal(built->predicted_density)});
  }
  if (a.emit == "word") {
    out << format_word(word) << "\n";
    return kOk;
  }
  emit(out, c.format, e);
  return -1;  // already written
}

int cmd_super(const Common& c, int l, int m, int max_letters, Envelope& e) {
  if (l < 1 || m < 1) throw std::invalid_argument("-l and -m are required");
  SuperSearchOptions variant;
  variant.max_letters = max_letters;
  const auto r = shortest_superpattern(l, m, c.search(), variant);
  e.input = Json{{"l", l}, {"m", m}, {"max_letters", max_letters}, {"budget_nodes", c.budget_nodes}};
  Json log = Json::array();
  Json log_nodes = Json::array();
  for (const auto& v : r.log) {
    log.push_back(Json{{"length", v.length}, {"verdict", v.verdict}});
    log_nodes.push_back(Json{{"length", v.length}, {"nodes", v.nodes}});
  }
  if (!is_universal(r.witness, l, m).universal) throw InternalError("returned witness is not universal");
  if (r.length > r.upper_bound) throw InternalError("result exceeds the l(m-1)+1 bound");
  e.result = Json{{"l", r.l},
                  {"m", r.m},
                  {"length", r.length},
                  {"witness", format_word(r.witness)},
                  {"lower_bound_certified", r.lower_bound_certified},
                  {"certified_lower_bound", r.certified_lower_bound},
                  {"upper_bound", r.upper_bound},
                  {"proof_log", log}};
  e.stats = Json{{"nodes", r.nodes}, {"nodes_per_length", log_nodes}, {"threads", c.threads}};
  e.table.header = {"l", "m", "length", "witness", "certified", "certified_lower_bound", "upper_bound", "nodes"};
  e.table.rows.push_back({std::to_string(r.l), std::to_string(r.m), std::to_string(r.length), format_word(r.witness),
                          r.lower_bound_certified ? "true" : "false", std::to_string(r.certified_lower_bound),
                          std::to_string(r.upper_bound), std::to_string(r.nodes)});
  return r.lower_bound_certified ? kOk : kBudget;
}

int cmd_table3(const Common&, Envelope& e) {
  Json rows = Json::array();
  e.table.header = {"pattern", "closed_form", "value", "error_bound", "provenance"};
  for (const auto& row : three_letter_table()) {
    Json j{{"pattern", row.representative}, {"closed_form", row.closed_form}};
    j.update(density_json(row.density));
    rows.push_back(j);
    e.table.rows.push_back({row.representative, row.closed_form, decimal(row.density.value),
                            decimal(row.density.error_bound), row.density.provenance});
  }
  e.result = Json{{"rows", rows}};
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct Suite {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;
};

Suite verify_grid(int nmax, const SearchOptions& opt) {
  Suite s{"monotonicity grid", 0, {}};
  for (auto text : {"112", "121", "1122", "12-1"}) {
    const WeightedPatternSet ps(parse_pattern_notation(text).pattern);
    const int m = static_cast<int>(ps.pattern_length());
    // delta[k][n] for 1 <= k <= n + 1.
    std::map<std::pair<int, int>, Rational> delta;
    for (int n = m; n <= nmax; ++n)
      for (int k = 1; k <= n + 1; ++k) delta[{k, n}] = delta_exact(ps, k, n, opt).delta;
    for (int n = m; n <= nmax; ++n) {
      for (int k = 1; k <= n; ++k) {
        if (n > m) {
          ++s.checks;
          if (delta[{k, n}] > delta[{k, n - 1}])
            s.failures.push_back(std::string(text) + ": delta(k=" + std::to_string(k) + ", n) rises at n=" +
                                 std::to_string(n));
        }
        if (k > 1) {
          ++s.checks;
          if (delta[{k, n}] < delta[{k - 1, n}])
            s.failures.push_back(std::string(text) + ": delta(k, n=" + std::to_string(n) + ") falls at k=" +
                                 std::to_string(k));
        }
      }
      ++s.checks;
      if (delta[{n + 1, n}] != delta[{n, n}])
        s.failures.push_back(std::string(text) + ": saturation fails at n=" + std::to_string(n));
    }
  }
  return s;
}

Suite verify_restriction(int nmax, const SearchOptions& opt) {
  Suite s{"restriction to permutations", 0, {}};
  for (auto text : {"132", "123", "2143"}) {
    const WeightedPatternSet ps(parse_pattern_notation(text).pattern);
    for (int n = static_cast<int>(ps.pattern_length()); n <= nmax; ++n) {
      ++s.checks;
      const auto r = verify_perm_restriction(ps, n, opt);
      if (!r.equal) s.failures.push_back(std::string(text) + ": maxima differ at n=" + std::to_string(n));
    }
  }
  return s;
}

Suite verify_layered(int nmax) {
  Suite s{"layered witness", 0, {}};
  for (auto text : {"2143", "132", "21354"}) {
    const WeightedPatternSet ps(parse_pattern_notation(text).pattern);
    for (int n = static_cast<int>(ps.pattern_length()); n <= std::min(nmax, 7); ++n) {
      ++s.checks;
      const auto r = verify_layered_witness(ps, n);
      if (!r.holds) s.failures.push_back(std::string(text) + ": no layered maximizer at n=" + std::to_string(n));
    }
  }
  return s;
}

Suite verify_overlap() {
  Suite s{"overlap shift formula", 0, {}};
  for (int m = 2; m <= 8; ++m) {
    for (unsigned mask = 1; mask < (1u << (m - 1)); ++mask) {
      std::vector<int> letters{1};
      for (int i = 1; i < m; ++i) letters.push_back(letters.back() + static_cast<int>((mask >> (i - 1)) & 1));
      std::vector<bool> gaps(m - 1, false);
      const auto shift = m_overlap(Pattern(letters, gaps));
      ++s.checks;
      if (!shift.agree()) s.failures.push_back("formula and oracle differ on " + format_letters(letters));
    }
  }
  return s;
}

int cmd_verify(const Common& c, int nmax, Envelope& e) {
  if (nmax < 0) nmax = 6;
  const auto opt = c.search();
  std::vector<Suite> suites{verify_grid(nmax, opt), verify_restriction(nmax, opt), verify_layered(nmax),
                            verify_overlap()};
  e.input = Json{{"n_max", nmax}};
  Json arr = Json::array();
  bool ok = true;
  e.table.header = {"suite", "checks", "failures", "passed"};
  for (const auto& s : suites) {
    arr.push_back(Json{{"suite", s.name},
                       {"checks", s.checks},
                       {"failures", s.failures},
                       {"passed", s.failures.empty()}});
    e.table.rows.push_back(
        {s.name, std::to_string(s.checks), std::to_string(s.failures.size()), s.failures.empty() ? "true" : "false"});
    ok = ok && s.failures.empty();
  }
  e.result = Json{{"suites", arr}, {"all_passed", ok}};
  return ok ? kOk : kInternal;
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("PACKING_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern packing statistics for words", "packing"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  common.threads = default_threads();
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--threads", common.threads, "Worker threads (default $PACKING_THREADS or 1)")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--budget-nodes", common.budget_nodes, "Node budget for searches (0 = unlimited)");
  app.add_option("--budget-seconds", common.budget_seconds, "Wall-clock cap for searches (0 = none)");
  app.add_option("--seed", common.seed, "Seed for the multistart optimizer");

  std::vector<std::string> patterns;
  std::string pattern;
  std::string word;
  std::string route = "auto";
  std::string range;
  int k = -1, n = -1, cap = 0, l = -1, m = -1;
  ConstructArgs ca;

  auto* count = app.add_subcommand("count", "Occurrences and density of a pattern set in a word");
  count->add_option("-p,--pattern", patterns, "Pattern (repeatable; suffix :w for a weight)")->required();
  count->add_option("-w,--word", word, "Word")->required();

  auto* dens = app.add_subcommand("density", "Asymptotic packing density through a closed form");
  dens->add_option("-p,--pattern", pattern, "Pattern")->required();
  dens->add_option("--route", route, "Formula route")->check(CLI::IsMember(density_routes()));
  dens->add_option("--cap", cap, "Number of layers for the cap route");

  auto* search = app.add_subcommand("search", "Exact maximum over words of length n on k letters");
  search->add_option("-p,--pattern", patterns, "Pattern (repeatable; suffix :w for a weight)")->required();
  search->add_option("-n", n, "Word length")->required();
  search->add_option("-k", k, "Alphabet size (default n)");

  auto* series = app.add_subcommand("series", "Exact densities over a range of lengths, with a monotonicity audit");
  series->add_option("-p,--pattern", patterns, "Pattern (repeatable)")->required();
  series->add_option("--n-range", range, "Lengths a..b")->required();
  series->add_option("-k", k, "Fixed alphabet size (default k = n)");

  auto* construct = app.add_subcommand("construct", "Build an extremal word");
  construct->add_option("family", ca.family, "balanced, pqr, nested, layered, twelve-one, sqrt-layer, superpattern")
      ->required();
  construct->add_option("-n", ca.n, "Word length");
  construct->add_option("-k", ca.k, "Number of letters (balanced)");
  construct->add_option("-p,--pattern", ca.pattern, "Target for balanced: 11-2 or an increasing pattern");
  construct->add_option("--pqr", ca.pqr, "p,q,r for pqr and nested");
  construct->add_option("--depth", ca.depth, "Nesting depth");
  construct->add_option("-d", ca.d, "Number of 12 pairs (twelve-one; default optimal)");
  construct->add_option("-l", ca.l, "Letters (superpattern)");
  construct->add_option("-m", ca.m, "Pattern length (superpattern)");
  construct->add_option("--proportions", ca.proportions, "Layer proportions, e.g. 2/3,1/3");
  construct->add_option("--kinds", ca.kinds, "Layer kinds, e.g. dec,const");
  construct->add_option("--shape", ca.shape, "Target layered shape, e.g. 2,1");
  construct->add_option("--emit", ca.emit, "word or json")->check(CLI::IsMember({"word", "json"}));

  auto* super = app.add_subcommand("super", "Shortest word containing every pattern of length m on l letters");
  super->add_option("-l", l, "Letters")->required();
  super->add_option("-m", m, "Pattern length")->required();
  int max_letters = 0;
  super->add_option("--max-letters", max_letters, "Limit the word to this many distinct letters (0 = no limit)");

  auto* table3 = app.add_subcommand("table3", "Densities of the patterns of length three");

  auto* verify = app.add_subcommand("verify", "Run the built-in property suites");
  verify->add_option("-n", n, "Largest word length (default 6)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Envelope env;
  try {
    int code = kOk;
    if (*count) {
      env.command = "count";
      code = cmd_count(common, patterns, word, env);
    } else if (*dens) {
      env.command = "density";
      code = cmd_density(common, pattern, route, cap, env);
    } else if (*search) {
      env.command = "search";
      code = cmd_search(common, patterns, k, n, env);
    } else if (*series) {
      env.command = "series";
      code = cmd_series(common, patterns, range, k, env);
    } else if (*construct) {
      env.command = "construct";
      code = cmd_construct(common, ca, out, env);
      if (code < 0) return kOk;
      return code;
    } else if (*super) {
      env.command = "super";
      code = cmd_super(common, l, m, max_letters, env);
    } else if (*table3) {
      env.command = "table3";
      code = cmd_table3(common, env);
    } else if (*verify) {
      env.command = "verify";
      code = cmd_verify(common, n, env);
    }
    emit(out, common.format, env);
    if (code == kBudget) err << "packing: budget exhausted; results are partial\n";
    if (code == kInternal) err << "packing: a consistency check failed\n";
    return code;
  } catch (const InternalError& e) {
    err << "packing: internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const NonConvergence& e) {
    err << "packing: optimizer did not converge (best starts " << decimal(e.lo) << " and " << decimal(e.hi)
        << ")\n";
    return kBudget;
  } catch (const NoClosedForm& e) {
    err << "packing: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "packing: " << e.what() << "\n";
    return kUsage;
  } catch (const std::length_error& e) {
    err << "packing: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "packing: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace packing::cli
