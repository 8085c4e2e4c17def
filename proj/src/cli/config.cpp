#include "ergolab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ergolab/builtin_functions.hpp"
#include "ergolab/processes.hpp"
#include "ergolab/rng.hpp"

namespace ergolab::cli {

namespace {

std::string describe_error(const std::string& key, std::size_t line, const std::string& message) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!key.empty()) out += key + ": ";
  return out + message;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    out.push_back(trim(std::string_view(value).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_word(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "tags", "space.kind", "space.atoms", "space.weights", "space.cyclic", "space.inner",
      "flow.kind", "flow.theta", "flow.map", "flow.shift", "flow.h", "function.kind", "function.dim",
      "function.slopes", "function.offsets", "function.amplitudes", "function.frequencies", "function.phases",
      "function.breaks", "function.degree", "function.coeffs", "function.values", "function.pieces", "norm",
      "filtration.direction", "filtration.max_level", "t_grid", "t_grid.start", "t_grid.ratio", "t_grid.count",
      "s_grid", "s_grid.start", "s_grid.ratio", "s_grid.count", "p", "epsilon", "threshold", "t_max", "checks",
      "seed", "families", "members", "cases"};
  return keys;
}

// Typed access to the raw entries. Every key read is marked used; keys left
// over at the end are known but irrelevant for the chosen kinds.
class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    throw ConfigError(key, it == entries_.end() ? 0 : it->second.line, message);
  }

  const std::string& raw(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing required key");
    used_.insert(key);
    return it->second.value;
  }

  std::string word(const std::string& key) {
    const auto v = trim(raw(key));
    if (!is_word(v)) fail(key, "expected a single word, got '" + v + "'");
    return v;
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> options) {
    const auto v = word(key);
    std::string list;
    for (const char* o : options) {
      if (v == o) return v;
      list += list.empty() ? o : std::string(", ") + o;
    }
    fail(key, "expected one of " + list + ", got '" + v + "'");
  }

  double real_value(const std::string& key, const std::string& text) const {
    double out = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out) || text.empty()) {
      fail(key, "expected a finite real, got '" + text + "'");
    }
    return out;
  }

  double real(const std::string& key) { return real_value(key, trim(raw(key))); }

  template <typename Int>
  Int integer_value(const std::string& key, const std::string& text) const {
    Int out{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
      fail(key, "expected a nonnegative integer, got '" + text + "'");
    }
    return out;
  }

  template <typename Int>
  Int integer(const std::string& key) {
    return integer_value<Int>(key, trim(raw(key)));
  }

  std::vector<double> reals(const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) out.push_back(real_value(key, item));
    return out;
  }

  std::vector<std::size_t> indices(const std::string& key) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(raw(key))) out.push_back(integer_value<std::size_t>(key, item));
    return out;
  }

  std::vector<std::string> words(const std::string& key) {
    std::vector<std::string> out;
    for (const auto& item : split_list(raw(key))) {
      if (!is_word(item)) fail(key, "bad list item '" + item + "'");
      out.push_back(item);
    }
    return out;
  }

  template <typename T, typename Read>
  void optional(const std::string& key, T& target, Read read) {
    if (has(key)) target = read(key);
  }

  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) throw ConfigError(key, entry.line, "key is not used by this configuration");
    }
  }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

GridSpec read_grid(Reader& r, const std::string& key) {
  const bool list = r.has(key);
  const bool geo = r.has(key + ".start") || r.has(key + ".ratio") || r.has(key + ".count");
  if (list && geo) r.fail(key, "give an explicit list or " + key + ".start/ratio/count, not both");
  GridSpec grid;
  if (list) {
    grid.values = r.reals(key);
    if (grid.values.empty()) r.fail(key, "grid must be nonempty");
    return grid;
  }
  if (!geo) r.fail(key, "missing required key");
  GeometricSpec g;
  g.start = r.real(key + ".start");
  g.ratio = r.real(key + ".ratio");
  g.count = r.integer<int>(key + ".count");
  if (g.count < 1) r.fail(key + ".count", "count must be at least 1");
  if (g.ratio <= 1.0 && g.count > 1) r.fail(key + ".ratio", "ratio must exceed 1");
  grid.geometric = g;
  grid.values = expand(g);
  return grid;
}

void require_positive(Reader& r, const std::string& key, double v) {
  if (!(v > 0.0)) r.fail(key, "must be positive");
}

ScenarioConfig read(Reader& r) {
  ScenarioConfig c;
  c.name = r.word("name");
  r.optional("tags", c.tags, [&](const std::string& k) { return r.words(k); });

  auto& sp = c.space;
  sp.kind = r.choice("space.kind", {"circle", "discrete", "product"});
  if (sp.kind == "discrete") {
    const bool a = r.has("space.atoms"), w = r.has("space.weights");
    if (a == w) r.fail("space.atoms", "discrete spaces need exactly one of space.atoms, space.weights");
    if (a) {
      sp.atoms = r.integer<std::size_t>("space.atoms");
      if (sp.atoms == 0) r.fail("space.atoms", "must be positive");
    } else {
      sp.weights = r.reals("space.weights");
      if (sp.weights.empty()) r.fail("space.weights", "must be nonempty");
    }
  } else if (sp.kind == "product") {
    sp.cyclic = r.integer<std::size_t>("space.cyclic");
    if (sp.cyclic == 0) r.fail("space.cyclic", "must be positive");
    sp.inner = r.reals("space.inner");
    if (sp.inner.empty()) r.fail("space.inner", "must be nonempty");
  }

  auto& fl = c.flow;
  fl.kind = r.choice("flow.kind", {"identity", "rotation", "step", "shift"});
  if (fl.kind == "rotation") {
    if (sp.kind != "circle") r.fail("flow.kind", "rotation needs space.kind = circle");
    r.optional("flow.theta", fl.theta, [&](const std::string& k) { return r.real(k); });
    if (!(fl.theta > 0.0 && fl.theta < 1.0)) r.fail("flow.theta", "must lie in (0, 1)");
  } else if (fl.kind == "step" || fl.kind == "shift") {
    if (sp.kind == "circle") r.fail("flow.kind", fl.kind + " needs an atomic space");
    if (fl.kind == "step") {
      fl.map = r.indices("flow.map");
    } else {
      r.optional("flow.shift", fl.shift, [&](const std::string& k) { return r.integer<std::size_t>(k); });
    }
    r.optional("flow.h", fl.h, [&](const std::string& k) { return r.real(k); });
    require_positive(r, "flow.h", fl.h);
  }

  auto& fn = c.function;
  fn.kind = r.choice("function.kind", {"sawtooth", "hat", "smooth", "explicit", "atoms", "random"});
  fn.dim = r.integer<std::size_t>("function.dim");
  if (fn.dim == 0) r.fail("function.dim", "must be positive");
  const bool circle = sp.kind == "circle";
  auto reals = [&](const std::string& k) { return r.reals(k); };
  if (fn.kind == "sawtooth" || fn.kind == "hat" || fn.kind == "smooth" || fn.kind == "explicit") {
    if (!circle) r.fail("function.kind", fn.kind + " needs space.kind = circle");
  }
  if (fn.kind == "atoms" && circle) r.fail("function.kind", "atoms needs an atomic space");
  if (fn.kind == "sawtooth") {
    r.optional("function.slopes", fn.slopes, reals);
    r.optional("function.offsets", fn.offsets, reals);
  } else if (fn.kind == "hat") {
    r.optional("function.amplitudes", fn.amplitudes, reals);
  } else if (fn.kind == "smooth") {
    r.optional("function.amplitudes", fn.amplitudes, reals);
    r.optional("function.frequencies", fn.frequencies, reals);
    r.optional("function.phases", fn.phases, reals);
  } else if (fn.kind == "explicit") {
    fn.breaks = r.reals("function.breaks");
    fn.degree = r.integer<int>("function.degree");
    fn.coeffs = r.reals("function.coeffs");
  } else if (fn.kind == "atoms") {
    fn.values = r.reals("function.values");
  } else if (circle) {
    r.optional("function.pieces", fn.pieces, [&](const std::string& k) { return r.integer<std::size_t>(k); });
    r.optional("function.degree", fn.degree, [&](const std::string& k) { return r.integer<int>(k); });
    if (fn.pieces == 0) r.fail("function.pieces", "must be positive");
  }

  r.optional("norm", c.norm, [&](const std::string& k) { return r.choice(k, {"euclidean", "max", "sum"}); });
  c.direction = r.choice("filtration.direction", {"increasing", "decreasing"});
  c.max_level = r.integer<int>("filtration.max_level");

  c.t_grid = read_grid(r, "t_grid");
  c.s_grid = read_grid(r, "s_grid");
  try {
    validate_grids(c.t_grid.values, c.s_grid.values);
  } catch (const std::invalid_argument& e) {
    const bool t_bad = [&] {
      try {
        validate_grids(c.t_grid.values, std::vector<double>{0.0});
        return false;
      } catch (const std::invalid_argument&) {
        return true;
      }
    }();
    r.fail(t_bad ? "t_grid" : "s_grid", e.what());
  }

  r.optional("p", c.p, [&](const std::string& k) { return r.real(k); });
  if (!(c.p > 1.0)) r.fail("p", "inequality checks require p > 1");
  r.optional("epsilon", c.epsilon, [&](const std::string& k) { return r.real(k); });
  require_positive(r, "epsilon", c.epsilon);
  r.optional("threshold", c.threshold, [&](const std::string& k) { return r.real(k); });
  require_positive(r, "threshold", c.threshold);
  if (r.has("t_max")) {
    c.t_max = r.real("t_max");
    if (*c.t_max < c.t_grid.values.back()) r.fail("t_max", "must be at least the largest grid time");
  }
  r.optional("checks", c.checks, [&](const std::string& k) { return r.words(k); });
  for (const auto& check : c.checks) {
    if (std::find(check_names().begin(), check_names().end(), check) == check_names().end()) {
      r.fail("checks", "unknown check '" + check + "'");
    }
  }
  r.optional("seed", c.seed, [&](const std::string& k) { return r.integer<std::uint64_t>(k); });
  r.optional("families", c.families, [&](const std::string& k) { return r.integer<std::size_t>(k); });
  r.optional("members", c.members, [&](const std::string& k) { return r.integer<std::size_t>(k); });
  r.optional("cases", c.cases, [&](const std::string& k) { return r.integer<std::size_t>(k); });
  if (c.families == 0) r.fail("families", "must be positive");
  if (c.members == 0) r.fail("members", "must be positive");
  if (c.cases == 0) r.fail("cases", "must be positive");
  r.reject_unused();

  // Semantic checks that need the built objects.
  SpacePtr space;
  try {
    space = build_space(c);
  } catch (const std::invalid_argument& e) {
    r.fail("space.kind", e.what());
  }
  if (c.max_level > space->max_partition_level()) {
    r.fail("filtration.max_level",
           "exceeds the space's maximum level " + std::to_string(space->max_partition_level()));
  }
  try {
    (void)build_flow(c, space);
  } catch (const std::invalid_argument& e) {
    r.fail(fl.kind == "step" ? "flow.map" : "flow.kind", e.what());
  }
  try {
    (void)build_function(c, space);
  } catch (const std::invalid_argument& e) {
    r.fail("function.kind", e.what());
  }
  return c;
}

void put(std::ostringstream& out, const std::string& key, const std::string& value) {
  out << key << " = " << value << '\n';
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& items, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += fmt(items[i]);
  }
  return out;
}

std::string reals_text(const std::vector<double>& v) { return join(v, format_real); }

void put_grid(std::ostringstream& out, const std::string& key, const GridSpec& grid) {
  if (grid.geometric) {
    put(out, key + ".start", format_real(grid.geometric->start));
    put(out, key + ".ratio", format_real(grid.geometric->ratio));
    put(out, key + ".count", std::to_string(grid.geometric->count));
  } else {
    put(out, key, reals_text(grid.values));
  }
}

}  // namespace

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& message)
    : std::runtime_error(describe_error(key, line, message)), key_(std::move(key)), line_(line) {}

std::vector<double> expand(const GeometricSpec& spec) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) out.push_back(spec.start * std::pow(spec.ratio, k));
  return out;
}

bool ScenarioConfig::has_tag(const std::string& tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "decomposition",      "commutation",        "me_em_coincidence", "limits",
      "me_convergence",     "em_convergence",     "diagonal",          "ergodic_envelope",
      "martingale_convergence", "sup_integrability", "dominant_ineq_me", "dominant_ineq_em",
      "maximal_ineq_me",    "maximal_ineq_em",    "domination_chain",  "operator_contract",
      "strong_continuity",  "submartingale"};
  return names;
}

ScenarioConfig parse_config_text(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("", number, "expected 'key = value'");
    const auto key = trim(std::string_view(content).substr(0, eq));
    if (!known_keys().count(key)) throw ConfigError(key, number, "unknown key");
    if (entries.count(key)) throw ConfigError(key, number, "duplicate key");
    entries.emplace(key, Entry{trim(std::string_view(content).substr(eq + 1)), number});
  }
  Reader reader(std::move(entries));
  return read(reader);
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string out(buf, ptr);
  if (out.find_first_of(".eni") == std::string::npos) out += ".0";
  return out;
}

std::string echo(const ScenarioConfig& c) {
  std::ostringstream out;
  const auto words = [](const std::vector<std::string>& v) { return join(v, [](const std::string& s) { return s; }); };
  put(out, "name", c.name);
  if (!c.tags.empty()) put(out, "tags", words(c.tags));

  put(out, "space.kind", c.space.kind);
  if (c.space.kind == "discrete") {
    if (c.space.weights.empty()) {
      put(out, "space.atoms", std::to_string(c.space.atoms));
    } else {
      put(out, "space.weights", reals_text(c.space.weights));
    }
  } else if (c.space.kind == "product") {
    put(out, "space.cyclic", std::to_string(c.space.cyclic));
    put(out, "space.inner", reals_text(c.space.inner));
  }

  put(out, "flow.kind", c.flow.kind);
  if (c.flow.kind == "rotation") put(out, "flow.theta", format_real(c.flow.theta));
  if (c.flow.kind == "step") put(out, "flow.map", join(c.flow.map, [](std::size_t v) { return std::to_string(v); }));
  if (c.flow.kind == "shift") put(out, "flow.shift", std::to_string(c.flow.shift));
  if (c.flow.kind == "step" || c.flow.kind == "shift") put(out, "flow.h", format_real(c.flow.h));

  const auto& fn = c.function;
  put(out, "function.kind", fn.kind);
  put(out, "function.dim", std::to_string(fn.dim));
  const auto opt = [&](const char* key, const std::vector<double>& v) {
    if (!v.empty()) put(out, key, reals_text(v));
  };
  opt("function.slopes", fn.slopes);
  opt("function.offsets", fn.offsets);
  opt("function.amplitudes", fn.amplitudes);
  opt("function.frequencies", fn.frequencies);
  opt("function.phases", fn.phases);
  if (fn.kind == "explicit") {
    put(out, "function.breaks", reals_text(fn.breaks));
    put(out, "function.degree", std::to_string(fn.degree));
    put(out, "function.coeffs", reals_text(fn.coeffs));
  }
  if (fn.kind == "atoms") put(out, "function.values", reals_text(fn.values));
  if (fn.kind == "random" && c.space.kind == "circle") {
    put(out, "function.pieces", std::to_string(fn.pieces));
    put(out, "function.degree", std::to_string(fn.degree));
  }

  put(out, "norm", c.norm);
  put(out, "filtration.direction", c.direction);
  put(out, "filtration.max_level", std::to_string(c.max_level));
  put_grid(out, "t_grid", c.t_grid);
  put_grid(out, "s_grid", c.s_grid);
  put(out, "p", format_real(c.p));
  put(out, "epsilon", format_real(c.epsilon));
  put(out, "threshold", format_real(c.threshold));
  if (c.t_max) put(out, "t_max", format_real(*c.t_max));
  put(out, "checks", words(c.checks));
  put(out, "seed", std::to_string(c.seed));
  put(out, "families", std::to_string(c.families));
  put(out, "members", std::to_string(c.members));
  put(out, "cases", std::to_string(c.cases));
  return out.str();
}

SpacePtr build_space(const ScenarioConfig& c) {
  if (c.space.kind == "circle") return MeasureSpace::circle();
  if (c.space.kind == "product") return MeasureSpace::product(c.space.cyclic, c.space.inner);
  if (c.space.weights.empty()) return MeasureSpace::uniform(c.space.atoms);
  return MeasureSpace::discrete(c.space.weights);
}

Flow build_flow(const ScenarioConfig& c, const SpacePtr& space) {
  if (c.flow.kind == "identity") return Flow::identity(space);
  if (c.flow.kind == "rotation") return Flow::rotation(c.flow.theta);
  if (c.flow.kind == "step") return Flow::step(space, c.flow.map, c.flow.h);
  return Flow::shift(space, c.flow.shift, c.flow.h);
}

VectorFunction build_function(const ScenarioConfig& c, const SpacePtr& space) {
  const auto& fn = c.function;
  if (fn.kind == "sawtooth") return builtin::sawtooth(fn.dim, fn.slopes, fn.offsets);
  if (fn.kind == "hat") return builtin::hat(fn.dim, fn.amplitudes);
  if (fn.kind == "smooth") return builtin::smooth(fn.dim, fn.amplitudes, fn.frequencies, fn.phases);
  if (fn.kind == "explicit") return VectorFunction::piecewise(fn.breaks, fn.degree, fn.dim, fn.coeffs);
  if (fn.kind == "atoms") return VectorFunction::atoms(space, fn.dim, fn.values);
  Rng rng(c.seed);
  return builtin::random_function(rng, space, fn.dim, fn.pieces, fn.degree);
}

VectorNorm build_norm(const ScenarioConfig& c) {
  return VectorNorm(*VectorNorm::parse_kind(c.norm), c.function.dim);
}

Filtration build_filtration(const ScenarioConfig& c, const SpacePtr& space) {
  return Filtration(space,
                    c.direction == "increasing" ? Filtration::Direction::increasing
                                                : Filtration::Direction::decreasing,
                    c.max_level);
}

}  // namespace ergolab::cli
