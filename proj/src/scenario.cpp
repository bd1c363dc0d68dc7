#include "wavelab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "wavelab/error.hpp"

namespace wavelab {
namespace {

constexpr std::pair<CheckKind, std::string_view> kCheckNames[] = {
    {CheckKind::norm_drift, "norm_drift"},
    {CheckKind::energy_drift, "energy_drift"},
    {CheckKind::stationarity, "stationarity"},
    {CheckKind::expectation_agreement, "expectation_agreement"},
    {CheckKind::fisher_identity, "fisher_identity"},
    {CheckKind::local_energy, "local_energy"},
    {CheckKind::continuity_residual, "continuity_residual"},
    {CheckKind::qhj_residual, "qhj_residual"},
    {CheckKind::recover_potential, "recover_potential"},
    {CheckKind::dispersion, "dispersion"},
    {CheckKind::hydro_equivalence, "hydro_equivalence"},
    {CheckKind::scheme_agreement, "scheme_agreement"},
    {CheckKind::temporal_order, "temporal_order"},
    {CheckKind::classical_limit, "classical_limit"},
    {CheckKind::tunneling, "tunneling"},
};

const std::map<std::string, std::set<std::string>, std::less<>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>, std::less<>> keys = [] {
    std::map<std::string, std::set<std::string>, std::less<>> k;
    k["scenario"] = {"name", "description"};
    k["grid"] = {"points", "length", "hbar", "mass"};
    k["state"] = {"kind", "k0", "x0", "sigma0", "n", "omega", "displacement", "periodize"};
    k["potential"] = {"kind",  "value", "omega", "coefficient", "center", "height",
                      "depth", "x_a",   "x_b",   "nodes",       "values", "ramp_rate"};
    k["schedule"] = {"t0", "t1", "dt", "snapshot_every", "scheme"};
    k["checks"] = {};
    for (const auto& [kind, name] : kCheckNames) k["checks"].insert(std::string(name));
    k["outputs"] = {"density", "phase", "local_fields", "observables", "residuals"};
    k["classical"] = {"hbar", "x0", "p0", "sigma0", "t1", "dt"};
    return k;
  }();
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry, std::less<>> entries;
};

double parse_real(std::string_view text, int line, std::string_view key) {
  std::string_view body = trim(text);
  double factor = 1.0;
  if (body == "pi") return std::numbers::pi;
  if (body == "-pi") return -std::numbers::pi;
  if (body.size() > 3 && body.substr(body.size() - 3) == "*pi") {
    factor = std::numbers::pi;
    body = trim(body.substr(0, body.size() - 3));
  }
  double v = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), v);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size() || !std::isfinite(v)) {
    throw ParseError("'" + std::string(key) + "': malformed number '" + std::string(text) + "'", line);
  }
  return v * factor;
}

long long parse_integer(std::string_view text, int line, std::string_view key) {
  const std::string_view body = trim(text);
  long long v = 0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), v);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
    throw ParseError("'" + std::string(key) + "': malformed integer '" + std::string(text) + "'", line);
  }
  return v;
}

bool parse_bool(std::string_view text, int line, std::string_view key) {
  const std::string_view body = trim(text);
  if (body == "true" || body == "yes" || body == "1") return true;
  if (body == "false" || body == "no" || body == "0") return false;
  throw ParseError("'" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'", line);
}

std::vector<double> parse_list(std::string_view text, int line, std::string_view key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_real(item, line, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Typed access to one section.
class Reader {
 public:
  Reader(const Section* s, std::string name) : s_(s), name_(std::move(name)) {}

  bool has(std::string_view key) const { return s_ && s_->entries.count(key) > 0; }
  int line() const { return s_ ? s_->line : 0; }
  int line_of(std::string_view key) const { return has(key) ? s_->entries.find(key)->second.line : line(); }

  const Entry& require(std::string_view key) const {
    if (!has(key)) throw ParseError("[" + name_ + "] is missing required key '" + std::string(key) + "'", line());
    return s_->entries.find(key)->second;
  }
  std::string text(std::string_view key, std::string fallback) const {
    return has(key) ? s_->entries.find(key)->second.value : fallback;
  }
  std::string text(std::string_view key) const { return require(key).value; }
  double real(std::string_view key) const {
    const Entry& e = require(key);
    return parse_real(e.value, e.line, key);
  }
  double real(std::string_view key, double fallback) const { return has(key) ? real(key) : fallback; }
  long long integer(std::string_view key) const {
    const Entry& e = require(key);
    return parse_integer(e.value, e.line, key);
  }
  long long integer(std::string_view key, long long fallback) const { return has(key) ? integer(key) : fallback; }
  bool boolean(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = require(key);
    return parse_bool(e.value, e.line, key);
  }
  std::vector<double> list(std::string_view key) const {
    const Entry& e = require(key);
    return parse_list(e.value, e.line, key);
  }

 private:
  const Section* s_;
  std::string name_;
};

// Runs `build`, turning ConfigError into a ParseError at `line`.
template <class F>
auto at_line(int line, F&& build) {
  try {
    return build();
  } catch (const ConfigError& e) {
    throw ParseError(e.what(), line);
  }
}

StateSpec build_state(const Reader& r) {
  const std::string kind = r.text("kind");
  const int line = r.line_of("kind");
  StateSpec s = at_line(line, [&] {
    if (kind == "plane_wave") return StateSpec::plane_wave(r.real("k0"));
    if (kind == "gaussian_packet") return StateSpec::gaussian_packet(r.real("x0"), r.real("sigma0"), r.real("k0", 0.0));
    if (kind == "ho_eigenstate") {
      return StateSpec::ho_eigenstate(static_cast<int>(r.integer("n", 0)), r.real("omega", 1.0));
    }
    if (kind == "ho_coherent") {
      return StateSpec::ho_coherent(r.real("omega", 1.0), r.real("displacement", 0.0), r.real("k0", 0.0));
    }
    throw ParseError("unknown state kind '" + kind + "'", line);
  });
  s.periodize = r.boolean("periodize", false);
  return s;
}

PotentialSpec build_base_potential(const Reader& r, const std::string& kind) {
  std::optional<double> center;
  if (r.has("center")) center = r.real("center");
  if (kind == "zero") return PotentialSpec::zero();
  if (kind == "constant") return PotentialSpec::constant(r.real("value"));
  if (kind == "harmonic") return PotentialSpec::harmonic(r.real("omega"), center);
  if (kind == "quartic") return PotentialSpec::quartic(r.real("coefficient"), center);
  if (kind == "barrier") return PotentialSpec::barrier(r.real("height"), r.real("x_a"), r.real("x_b"));
  if (kind == "well") return PotentialSpec::well(r.real("depth"), r.real("x_a"), r.real("x_b"));
  throw ParseError("unknown potential kind '" + kind + "'", r.line_of("kind"));
}

Scheme parse_scheme(const std::string& text, int line) {
  if (text == "split") return Scheme::split;
  if (text == "cn") return Scheme::crank_nicolson;
  throw ParseError("scheme must be 'split' or 'cn', got '" + text + "'", line);
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

}  // namespace

std::string_view to_string(CheckKind kind) noexcept {
  for (const auto& [k, name] : kCheckNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<CheckKind> check_kind_from_string(std::string_view name) noexcept {
  for (const auto& [k, n] : kCheckNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Scenario parse_scenario(std::string_view text, bool strict) {
  Scenario sc;
  std::map<std::string, Section, std::less<>> sections;
  Section* current = nullptr;
  std::string current_name;
  bool header_seen = false;
  bool skipping = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::size_t hash = raw.find('#');
    const std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != kScenarioHeader) {
        throw ParseError("expected header '" + std::string(kScenarioHeader) + "', got '" + std::string(line) + "'",
                         line_no);
      }
      header_seen = true;
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed section header '" + std::string(line) + "'", line_no);
      current_name = std::string(trim(line.substr(1, line.size() - 2)));
      if (!allowed_keys().count(current_name)) {
        if (strict) throw ParseError("unknown section [" + current_name + "]", line_no);
        sc.warnings.push_back("line " + std::to_string(line_no) + ": section [" + current_name + "]");
        skipping = true;
        current = nullptr;
        continue;
      }
      if (sections.count(current_name)) throw ParseError("duplicate section [" + current_name + "]", line_no);
      skipping = false;
      current = &sections[current_name];
      current->line = line_no;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (skipping) continue;
    if (!current) throw ParseError("key '" + key + "' outside any section", line_no);
    if (key.empty()) throw ParseError("empty key", line_no);
    if (value.empty()) throw ParseError("key '" + key + "' has no value", line_no);
    if (!allowed_keys().at(current_name).count(key)) {
      if (strict) throw ParseError("unknown key '" + key + "' in [" + current_name + "]", line_no);
      sc.warnings.push_back("line " + std::to_string(line_no) + ": " + key);
      continue;
    }
    if (current->entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    current->entries[key] = Entry{value, line_no};
  }
  if (!header_seen) throw ParseError("empty scenario (missing header)", line_no);

  auto section = [&](const std::string& name, bool required) {
    auto it = sections.find(name);
    if (it == sections.end()) {
      if (required) throw ParseError("missing section [" + name + "]", line_no);
      return Reader(nullptr, name);
    }
    return Reader(&it->second, name);
  };

  const Reader meta = section("scenario", true);
  sc.name = meta.text("name");
  if (!valid_name(sc.name)) {
    throw ParseError("scenario name must be non-empty [A-Za-z0-9_-], got '" + sc.name + "'", meta.line_of("name"));
  }
  sc.description = meta.text("description", "");

  const Reader grid = section("grid", true);
  const long long points = grid.integer("points");
  if (points < 3) throw ParseError("points must be >= 3", grid.line_of("points"));
  sc.points = static_cast<std::size_t>(points);
  sc.length = grid.real("length");
  sc.hbar = grid.real("hbar", 1.0);
  sc.mass = grid.real("mass", 1.0);
  const Grid g = at_line(grid.line(), [&] { return sc.grid(); });

  const Reader state = section("state", true);
  sc.state = build_state(state);
  at_line(state.line(), [&] {
    sc.state.validate();
    sample(sc.state, g);
    return 0;
  });

  const Reader pot = section("potential", true);
  const std::string kind = pot.text("kind");
  sc.potential = at_line(pot.line(), [&] {
    PotentialSpec p = kind == "custom_tabulated"
                          ? PotentialSpec::tabulated(pot.list("nodes"), pot.list("values"), sc.length)
                          : build_base_potential(pot, kind);
    if (pot.has("ramp_rate")) p = PotentialSpec::time_ramped(p, pot.real("ramp_rate"));
    p.validate(g);
    return p;
  });

  const Reader sched = section("schedule", true);
  sc.t0 = sched.real("t0", 0.0);
  sc.t1 = sched.real("t1");
  sc.dt = sched.real("dt");
  const long long every = sched.integer("snapshot_every", 1);
  if (every < 1) throw ParseError("snapshot_every must be >= 1", sched.line_of("snapshot_every"));
  sc.snapshot_every = static_cast<std::size_t>(every);
  sc.scheme = parse_scheme(sched.text("scheme", "split"), sched.line_of("scheme"));
  at_line(sched.line(), [&] { return step_count(sc.t0, sc.t1, sc.dt); });
  if (sc.scheme == Scheme::crank_nicolson && sc.dt < 0.0) {
    throw ParseError("Crank-Nicolson needs dt > 0", sched.line_of("dt"));
  }

  if (auto it = sections.find("checks"); it != sections.end()) {
    std::vector<std::pair<int, std::string>> ordered;
    for (const auto& [key, entry] : it->second.entries) ordered.emplace_back(entry.line, key);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [line, key] : ordered) {
      const double tol = parse_real(it->second.entries.at(key).value, line, key);
      if (!(tol > 0.0)) throw ParseError("tolerance for '" + key + "' must be > 0", line);
      const CheckKind ck = *check_kind_from_string(key);
      if (ck == CheckKind::dispersion) {
        if (sc.state.kind != StateKind::plane_wave ||
            (sc.potential.kind() != PotentialKind::zero && sc.potential.kind() != PotentialKind::constant)) {
          throw ParseError("dispersion needs a plane_wave state and a zero or constant potential", line);
        }
      }
      if (ck == CheckKind::tunneling && sc.potential.kind() != PotentialKind::barrier) {
        throw ParseError("tunneling needs a barrier potential", line);
      }
      if (ck == CheckKind::classical_limit && !sections.count("classical")) {
        throw ParseError("classical_limit needs a [classical] section", line);
      }
      if (ck == CheckKind::energy_drift && sc.potential.is_time_dependent()) {
        throw ParseError("energy_drift needs a time-independent potential", line);
      }
      sc.checks.push_back({ck, tol});
    }
  }

  const Reader out = section("outputs", false);
  sc.outputs.density = out.boolean("density", false);
  sc.outputs.phase = out.boolean("phase", false);
  sc.outputs.local_fields = out.boolean("local_fields", false);
  sc.outputs.observables = out.boolean("observables", false);
  sc.outputs.residuals = out.boolean("residuals", false);

  if (sections.count("classical")) {
    const Reader cl = section("classical", true);
    ClassicalSpec c;
    c.hbar_values = cl.list("hbar");
    c.x0 = cl.real("x0");
    c.p0 = cl.real("p0");
    c.sigma0 = cl.real("sigma0");
    c.t1 = cl.real("t1", 1.0);
    c.dt = cl.real("dt", 1e-4);
    for (std::size_t i = 0; i < c.hbar_values.size(); ++i) {
      if (!(c.hbar_values[i] > 0.0) || (i > 0 && !(c.hbar_values[i] < c.hbar_values[i - 1]))) {
        throw ParseError("hbar sweep must be positive and strictly decreasing", cl.line_of("hbar"));
      }
    }
    if (!(c.sigma0 > 0.0)) throw ParseError("sigma0 must be > 0", cl.line_of("sigma0"));
    at_line(cl.line(), [&] { return step_count(0.0, c.t1, c.dt); });
    sc.classical = c;
  }
  return sc;
}

Scenario load_scenario(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), strict);
}

}  // namespace wavelab
