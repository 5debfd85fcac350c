#include "crd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "crd/error.hpp"

namespace crd {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(trim(current));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

// Collects every syntax and semantic violation before failing.
struct Diagnostics {
  std::vector<std::string> syntax;
  std::vector<std::string> semantic;

  void parse_error(const Entry& e, const std::string& section, const std::string& what) {
    syntax.push_back("line " + std::to_string(e.line) + ": " + section + "." + e.key + ": " + what);
  }
  void invalid(const std::string& field, const std::string& what) { semantic.push_back(field + ": " + what); }
};

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  bool parse(std::vector<InitialTerm>& terms, std::string& error) {
    skip();
    double sign = 1.0;
    if (peek() == '-') {
      sign = -1.0;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    while (true) {
      InitialTerm term;
      if (!parse_term(term, error)) return false;
      term.coefficient *= sign;
      terms.push_back(std::move(term));
      skip();
      if (pos_ >= text_.size()) return true;
      const char c = text_[pos_];
      if (c != '+' && c != '-') {
        error = "unexpected '" + std::string(1, c) + "' at column " + std::to_string(pos_ + 1);
        return false;
      }
      sign = c == '-' ? -1.0 : 1.0;
      ++pos_;
      skip();
      if (peek() == '-' || peek() == '+') {
        if (peek() == '-') sign = -sign;
        ++pos_;
      }
    }
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool parse_number(double& out) {
    skip();
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    out = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) return false;
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    skip();
    if (text_.substr(pos_, 2) == "pi") {
      out *= std::numbers::pi;
      pos_ += 2;
    } else if (text_.substr(pos_, 3) == "*pi") {
      out *= std::numbers::pi;
      pos_ += 3;
    }
    return true;
  }

  bool parse_identifier(std::string& out) {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    out = std::string(text_.substr(start, pos_ - start));
    return !out.empty();
  }

  bool parse_call(InitialTerm& term, std::string& error) {
    if (!parse_identifier(term.kind)) {
      error = "expected a function name at column " + std::to_string(pos_ + 1);
      return false;
    }
    if (term.kind == "pi") {
      term.kind = "const";
      term.coefficient *= std::numbers::pi;
      return true;
    }
    skip();
    if (peek() != '(') {
      error = "expected '(' after '" + term.kind + "'";
      return false;
    }
    ++pos_;
    skip();
    if (peek() != ')') {
      while (true) {
        double value = 0.0;
        if (!parse_number(value)) {
          error = "expected a number in the arguments of '" + term.kind + "'";
          return false;
        }
        term.args.push_back(value);
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    if (peek() != ')') {
      error = "expected ')' closing '" + term.kind + "'";
      return false;
    }
    ++pos_;
    if (term.kind == "const") {
      if (term.args.size() != 1) {
        error = "const takes one argument";
        return false;
      }
      term.coefficient *= term.args[0];
      term.args.clear();
    }
    return true;
  }

  bool parse_term(InitialTerm& term, std::string& error) {
    skip();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      if (!parse_number(value)) {
        error = "bad number at column " + std::to_string(pos_ + 1);
        return false;
      }
      term.coefficient = value;
      skip();
      if (peek() == '*') {
        ++pos_;
        return parse_call(term, error);
      }
      term.kind = "const";
      return true;
    }
    return parse_call(term, error);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string serialize_term(const InitialTerm& t) {
  if (t.kind == "const") return fmt(t.coefficient);
  std::string out = fmt(t.coefficient) + "*" + t.kind + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += fmt(t.args[i]);
  }
  return out + ")";
}

const std::map<std::string, std::set<std::string>> kReactionParams{
    {"zero", {}}, {"linear_decay", {"rate"}}, {"cubic_decay", {"coefficient"}}};

const std::map<std::string, std::set<std::string>> kSectionKeys{
    {"domain", {"space_dim", "lengths", "bc"}},
    {"grid", {"modes"}},
    {"matrix", {"d", "entries"}},
    {"reaction", {}},  // open: name, orientation plus parameters
    {"kouachi", {"alpha", "beta", "gamma", "sigma", "rho", "f", "m", "strict", "orientation"}},
    {"time", {"dt", "t_final", "frame_stride", "scheme"}},
    {"stationary", {"epsilon", "lambda"}},
    {"solver", {"newton_tol", "newton_max_iter"}},
    {"probe", {"lo", "hi", "pairs", "seed"}},
    {"initial", {}},  // open: seed, u1..ud
    {"output", {"directory", "formats"}},
};

std::optional<Orientation> parse_orientation(const std::string& s) {
  const std::string v = lower(s);
  if (v == "dissipative") return Orientation::Dissipative;
  if (v == "literal") return Orientation::Literal;
  return std::nullopt;
}

std::size_t arg_count(const std::string& kind, int space_dim, bool& known) {
  known = true;
  if (kind == "sin" || kind == "cos") return static_cast<std::size_t>(space_dim);
  if (kind == "gauss") return static_cast<std::size_t>(space_dim + 1);
  if (kind == "const" || kind == "noise") return 0;
  known = false;
  return 0;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "analyze") return Command::Analyze;
  if (name == "simulate") return Command::Simulate;
  if (name == "stationary") return Command::Stationary;
  if (name == "kouachi") return Command::Kouachi;
  return std::nullopt;
}

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Simulate: return "simulate";
    case Command::Stationary: return "stationary";
    case Command::Kouachi: return "kouachi";
  }
  return "unknown";
}

std::optional<double> parse_number(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty() || s == "+") return factor;
    if (s == "-") return -factor;
  }
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return value * factor;
}

SimulationConfig parse_config(const std::string& text) {
  Diagnostics diag;
  std::vector<Section> sections;
  {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::set<std::string> seen_sections;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          diag.syntax.push_back("line " + std::to_string(line_no) + ": unterminated section header");
          continue;
        }
        const std::string name = lower(trim(line.substr(1, line.size() - 2)));
        if (!kSectionKeys.count(name)) {
          diag.syntax.push_back("line " + std::to_string(line_no) + ": unknown section [" + name + "]");
        } else if (!seen_sections.insert(name).second) {
          diag.syntax.push_back("line " + std::to_string(line_no) + ": duplicate section [" + name + "]");
        }
        sections.push_back({name, line_no, {}});
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        diag.syntax.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
        continue;
      }
      if (sections.empty()) {
        diag.syntax.push_back("line " + std::to_string(line_no) + ": key outside of any section");
        continue;
      }
      Entry entry{lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1)), line_no};
      auto& entries = sections.back().entries;
      if (std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == entry.key; })) {
        diag.syntax.push_back("line " + std::to_string(line_no) + ": duplicate key '" + entry.key + "'");
        continue;
      }
      entries.push_back(std::move(entry));
    }
  }

  SimulationConfig config;
  std::map<std::string, const Section*> by_name;
  for (const auto& s : sections) by_name.emplace(s.name, &s);

  auto number = [&](const Section& s, const Entry& e, double& out) {
    if (auto v = parse_number(e.value)) {
      out = *v;
      return true;
    }
    diag.parse_error(e, s.name, "'" + e.value + "' is not a number");
    return false;
  };
  auto integer = [&](const Section& s, const Entry& e, long long& out) {
    double v = 0.0;
    if (!number(s, e, v)) return false;
    if (std::floor(v) != v || std::abs(v) > 9e15) {
      diag.parse_error(e, s.name, "'" + e.value + "' is not an integer");
      return false;
    }
    out = static_cast<long long>(v);
    return true;
  };
  auto numbers = [&](const Section& s, const Entry& e, std::vector<double>& out) {
    out.clear();
    for (const auto& item : split_list(e.value)) {
      auto v = parse_number(item);
      if (!v) {
        diag.parse_error(e, s.name, "'" + item + "' is not a number");
        return false;
      }
      out.push_back(*v);
    }
    return true;
  };
  auto boolean = [&](const Section& s, const Entry& e, bool& out) {
    const std::string v = lower(e.value);
    if (v == "true" || v == "yes" || v == "1") {
      out = true;
    } else if (v == "false" || v == "no" || v == "0") {
      out = false;
    } else {
      diag.parse_error(e, s.name, "'" + e.value + "' is not a boolean");
      return false;
    }
    return true;
  };
  auto check_known = [&](const Section& s) {
    const auto& keys = kSectionKeys.at(s.name);
    if (keys.empty()) return;
    for (const auto& e : s.entries) {
      if (!keys.count(e.key)) diag.invalid(s.name + "." + e.key, "unknown key");
    }
  };
  for (const auto& s : sections) {
    if (kSectionKeys.count(s.name)) check_known(s);
  }

  bool bc_given = false;
  bool modes_given = false;
  if (auto it = by_name.find("domain"); it != by_name.end()) {
    const Section& s = *it->second;
    for (const auto& e : s.entries) {
      if (e.key == "space_dim") {
        long long v = 0;
        if (integer(s, e, v)) config.domain.space_dim = static_cast<int>(v);
      } else if (e.key == "lengths") {
        numbers(s, e, config.domain.lengths);
      } else if (e.key == "bc") {
        bc_given = true;
        const std::string v = lower(e.value);
        if (v == "dirichlet") {
          config.domain.bc = BoundaryKind::Dirichlet;
        } else if (v == "neumann") {
          config.domain.bc = BoundaryKind::Neumann;
        } else {
          diag.invalid("domain.bc", "expected dirichlet or neumann, got '" + e.value + "'");
        }
      }
    }
  }
  if (auto it = by_name.find("grid"); it != by_name.end()) {
    const Section& s = *it->second;
    for (const auto& e : s.entries) {
      if (e.key != "modes") continue;
      std::vector<double> values;
      if (!numbers(s, e, values)) continue;
      modes_given = true;
      for (double v : values) {
        if (std::floor(v) != v) diag.parse_error(e, s.name, "mode counts must be integers");
        config.grid.modes.push_back(static_cast<int>(v));
      }
    }
  }
  if (auto it = by_name.find("matrix"); it != by_name.end()) {
    const Section& s = *it->second;
    SimulationConfig::Matrix m;
    bool has_d = false, has_entries = false;
    for (const auto& e : s.entries) {
      if (e.key == "d") {
        long long v = 0;
        if (integer(s, e, v)) {
          m.d = static_cast<int>(v);
          has_d = true;
        }
      } else if (e.key == "entries") {
        has_entries = numbers(s, e, m.entries);
      }
    }
    if (!has_d) diag.invalid("matrix.d", "missing");
    if (!has_entries) diag.invalid("matrix.entries", "missing");
    config.matrix = m;
  }
  bool reaction_given = false;
  if (auto it = by_name.find("reaction"); it != by_name.end()) {
    reaction_given = true;
    const Section& s = *it->second;
    for (const auto& e : s.entries) {
      if (e.key == "name") {
        config.reaction.name = lower(e.value);
      } else if (e.key == "orientation") {
        if (auto o = parse_orientation(e.value)) {
          config.reaction.orientation = *o;
        } else {
          diag.invalid("reaction.orientation", "expected dissipative or literal, got '" + e.value + "'");
        }
      } else {
        double v = 0.0;
        if (number(s, e, v)) config.reaction.params[e.key] = v;
      }
    }
  }
  if (auto it = by_name.find("kouachi"); it != by_name.end()) {
    const Section& s = *it->second;
    SimulationConfig::Kouachi k;
    std::set<std::string> given;
    for (const auto& e : s.entries) {
      given.insert(e.key);
      double v = 0.0;
      if (e.key == "alpha" && number(s, e, v)) k.params.alpha = v;
      if (e.key == "beta" && number(s, e, v)) k.params.beta = v;
      if (e.key == "gamma" && number(s, e, v)) k.params.gamma = v;
      if (e.key == "sigma" && number(s, e, v)) k.params.sigma = v;
      if (e.key == "rho" && number(s, e, v)) k.params.rho = v;
      if (e.key == "m" && number(s, e, v)) k.params.f_params["m"] = v;
      if (e.key == "f") k.params.f_name = lower(e.value);
      if (e.key == "strict") boolean(s, e, k.strict);
      if (e.key == "orientation") {
        if (auto o = parse_orientation(e.value)) {
          config.reaction.orientation = *o;
        } else {
          diag.invalid("kouachi.orientation", "expected dissipative or literal, got '" + e.value + "'");
        }
      }
    }
    for (const char* required : {"alpha", "beta", "gamma", "sigma", "rho"}) {
      if (!given.count(required)) diag.invalid(std::string("kouachi.") + required, "missing");
    }
    config.kouachi = k;
  }
  if (auto it = by_name.find("time"); it != by_name.end()) {
    const Section& s = *it->second;
    SimulationConfig::Time t;
    bool has_dt = false, has_final = false;
    for (const auto& e : s.entries) {
      long long iv = 0;
      if (e.key == "dt") has_dt = number(s, e, t.dt);
      if (e.key == "t_final") has_final = number(s, e, t.t_final);
      if (e.key == "frame_stride" && integer(s, e, iv)) t.frame_stride = static_cast<int>(iv);
      if (e.key == "scheme") {
        const std::string v = lower(e.value);
        if (v == "lie") {
          t.scheme = SplitOrder::Lie;
        } else if (v == "strang") {
          t.scheme = SplitOrder::Strang;
        } else {
          diag.invalid("time.scheme", "expected lie or strang, got '" + e.value + "'");
        }
      }
    }
    if (!has_dt) diag.invalid("time.dt", "missing");
    if (!has_final) diag.invalid("time.t_final", "missing");
    config.time = t;
  }
  if (auto it = by_name.find("stationary"); it != by_name.end()) {
    const Section& s = *it->second;
    SimulationConfig::Stationary st;
    bool has_eps = false, has_lambda = false;
    for (const auto& e : s.entries) {
      if (e.key == "epsilon") has_eps = number(s, e, st.epsilon);
      if (e.key == "lambda") has_lambda = number(s, e, st.lambda);
    }
    if (!has_eps) diag.invalid("stationary.epsilon", "missing");
    if (!has_lambda) diag.invalid("stationary.lambda", "missing");
    config.stationary = st;
  }
  if (auto it = by_name.find("solver"); it != by_name.end()) {
    const Section& s = *it->second;
    for (const auto& e : s.entries) {
      long long iv = 0;
      if (e.key == "newton_tol") number(s, e, config.solver.newton_tol);
      if (e.key == "newton_max_iter" && integer(s, e, iv)) config.solver.newton_max_iter = static_cast<int>(iv);
    }
  }
  if (auto it = by_name.find("probe"); it != by_name.end()) {
    const Section& s = *it->second;
    for (const auto& e : s.entries) {
      long long iv = 0;
      if (e.key == "lo") number(s, e, config.probe.lo);
      if (e.key == "hi") number(s, e, config.probe.hi);
      if (e.key == "pairs" && integer(s, e, iv)) config.probe.pairs = static_cast<int>(iv);
      if (e.key == "seed" && integer(s, e, iv)) config.probe.seed = static_cast<unsigned long long>(iv);
    }
  }
  if (auto it = by_name.find("initial"); it != by_name.end()) {
    const Section& s = *it->second;
    SimulationConfig::Initial init;
    std::map<int, InitialComponent> components;
    for (const auto& e : s.entries) {
      if (e.key == "seed") {
        long long iv = 0;
        if (integer(s, e, iv)) init.seed = static_cast<unsigned long long>(iv);
        continue;
      }
      if (e.key.size() < 2 || e.key[0] != 'u' ||
          !std::all_of(e.key.begin() + 1, e.key.end(), [](unsigned char c) { return std::isdigit(c); })) {
        diag.invalid("initial." + e.key, "unknown key (expected seed or u1..ud)");
        continue;
      }
      const int index = std::atoi(e.key.c_str() + 1);
      InitialComponent comp;
      if (!e.value.empty() && e.value.front() == '[') {
        if (e.value.back() != ']') {
          diag.parse_error(e, s.name, "unterminated inline value list");
          continue;
        }
        std::vector<double> values;
        const Entry inner{e.key, e.value.substr(1, e.value.size() - 2), e.line};
        if (!numbers(s, inner, values)) continue;
        if (values.empty()) {
          diag.parse_error(e, s.name, "empty inline value list");
          continue;
        }
        comp.values = std::move(values);
      } else {
        std::string error;
        ExpressionParser parser(e.value);
        if (!parser.parse(comp.terms, error)) {
          diag.parse_error(e, s.name, error);
          continue;
        }
      }
      components[index] = std::move(comp);
    }
    int expected = 1;
    for (auto& [index, comp] : components) {
      if (index != expected) {
        diag.invalid("initial.u" + std::to_string(expected), "missing (components must be numbered u1..ud)");
        break;
      }
      init.components.push_back(std::move(comp));
      ++expected;
    }
    config.initial = std::move(init);
  }
  if (auto it = by_name.find("output"); it != by_name.end()) {
    const Section& s = *it->second;
    for (const auto& e : s.entries) {
      if (e.key == "directory") config.output.directory = e.value;
      if (e.key == "formats") config.output.formats = split_list(lower(e.value));
    }
  }

  // Semantic validation.
  auto& dom = config.domain;
  if (dom.space_dim != 1 && dom.space_dim != 2) {
    diag.invalid("domain.space_dim", "UnsupportedDim: must be 1 or 2, got " + std::to_string(dom.space_dim));
  }
  if (dom.lengths.empty()) {
    diag.invalid("domain.lengths", "missing");
  } else if (dom.lengths.size() != static_cast<std::size_t>(dom.space_dim)) {
    diag.invalid("domain.lengths", "expected " + std::to_string(dom.space_dim) + " values, got " +
                                       std::to_string(dom.lengths.size()));
  }
  for (double l : dom.lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) diag.invalid("domain.lengths", "lengths must be positive");
  }
  const int axes = (dom.space_dim == 1 || dom.space_dim == 2) ? dom.space_dim : 1;
  if (!modes_given) {
    config.grid.modes.assign(static_cast<std::size_t>(axes), 32);
  } else if (config.grid.modes.size() == 1 && axes == 2) {
    config.grid.modes.push_back(config.grid.modes.front());
  }
  if (config.grid.modes.size() != static_cast<std::size_t>(axes)) {
    diag.invalid("grid.modes", "expected " + std::to_string(axes) + " values, got " +
                                   std::to_string(config.grid.modes.size()));
  }
  for (int n : config.grid.modes) {
    if (n < 1 || n > 4096) diag.invalid("grid.modes", "mode counts must be in 1..4096");
  }

  if (config.kouachi) {
    if (config.matrix) diag.invalid("matrix", "not allowed together with [kouachi] (the preset defines M)");
    if (reaction_given) diag.invalid("reaction", "not allowed together with [kouachi] (the preset defines F)");
    if (bc_given && dom.bc != BoundaryKind::Neumann) {
      diag.invalid("domain.bc", "the kouachi preset uses Neumann boundaries");
    }
    dom.bc = BoundaryKind::Neumann;
    try {
      config.kouachi->params.validate();
    } catch (const Error& e) {
      for (const auto& d : e.details()) diag.invalid("kouachi", d);
    }
    const auto& p = config.kouachi->params;
    config.matrix = SimulationConfig::Matrix{2, {p.alpha, p.beta, p.gamma, p.alpha}};
    config.reaction.name = "kouachi";
    config.reaction.params = {{"rho", p.rho}, {"sigma", p.sigma}};
  } else {
    auto known = kReactionParams.find(config.reaction.name);
    if (known == kReactionParams.end()) {
      diag.invalid("reaction.name", "unknown reaction '" + config.reaction.name +
                                        "' (expected zero, linear_decay or cubic_decay)");
    } else {
      for (const auto& [key, value] : config.reaction.params) {
        if (!known->second.count(key)) {
          diag.invalid("reaction." + key, "unknown parameter for reaction '" + config.reaction.name + "'");
        }
        if (!std::isfinite(value)) diag.invalid("reaction." + key, "must be finite");
      }
    }
  }

  int d = 0;
  if (config.matrix) {
    const auto& m = *config.matrix;
    d = m.d;
    if (m.d < 1) diag.invalid("matrix.d", "must be >= 1");
    if (m.d >= 1 && m.entries.size() != static_cast<std::size_t>(m.d) * static_cast<std::size_t>(m.d)) {
      diag.invalid("matrix.entries", "expected d*d = " + std::to_string(m.d * m.d) + " values for d = " +
                                         std::to_string(m.d) + ", got " + std::to_string(m.entries.size()));
    }
    for (double x : m.entries) {
      if (!std::isfinite(x)) diag.invalid("matrix.entries", "entries must be finite");
    }
  }
  if (config.time) {
    const auto& t = *config.time;
    if (!(t.dt > 0.0)) diag.invalid("time.dt", "must be > 0");
    if (!(t.t_final > 0.0)) diag.invalid("time.t_final", "must be > 0");
    if (t.frame_stride < 1) diag.invalid("time.frame_stride", "must be >= 1");
  }
  if (config.stationary) {
    if (!(config.stationary->epsilon > 0.0)) diag.invalid("stationary.epsilon", "must be > 0");
    if (!(config.stationary->lambda > 0.0)) diag.invalid("stationary.lambda", "must be > 0");
  }
  if (!(config.solver.newton_tol > 0.0)) diag.invalid("solver.newton_tol", "must be > 0");
  if (config.solver.newton_max_iter < 1) diag.invalid("solver.newton_max_iter", "must be >= 1");
  if (!(config.probe.lo < config.probe.hi)) diag.invalid("probe", "lo must be < hi");
  if (config.probe.pairs < 1) diag.invalid("probe.pairs", "must be >= 1");
  if (config.initial) {
    long long nodes = 1;
    for (int n : config.grid.modes) nodes *= n;
    const auto& comps = config.initial->components;
    if (d >= 1 && comps.size() != static_cast<std::size_t>(d)) {
      diag.invalid("initial", "expected " + std::to_string(d) + " components u1..u" + std::to_string(d) + ", got " +
                                  std::to_string(comps.size()));
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const std::string field = "initial.u" + std::to_string(c + 1);
      if (comps[c].is_inline()) {
        if (static_cast<long long>(comps[c].values.size()) != nodes) {
          diag.invalid(field, "inline values need one entry per grid node (" + std::to_string(nodes) + "), got " +
                                  std::to_string(comps[c].values.size()));
        }
        continue;
      }
      for (const auto& term : comps[c].terms) {
        bool known = false;
        const std::size_t want = arg_count(term.kind, axes, known);
        if (!known) {
          diag.invalid(field, "unknown term '" + term.kind + "' (catalogue: sin, cos, gauss, const, noise)");
        } else if (term.args.size() != want) {
          diag.invalid(field, term.kind + " takes " + std::to_string(want) + " argument(s) in " +
                                  std::to_string(axes) + "-D, got " + std::to_string(term.args.size()));
        } else if (term.kind == "gauss" && !(term.args.back() > 0.0)) {
          diag.invalid(field, "gauss width must be > 0");
        }
      }
    }
  }
  for (const auto& f : config.output.formats) {
    if (f != "csv") diag.invalid("output.formats", "unsupported format '" + f + "' (csv)");
  }

  if (!diag.syntax.empty()) {
    std::vector<std::string> all = diag.syntax;
    all.insert(all.end(), diag.semantic.begin(), diag.semantic.end());
    throw Error(ErrorKind::ParseError, "configuration has " + std::to_string(diag.syntax.size()) + " syntax error(s)",
                all);
  }
  if (!diag.semantic.empty()) {
    throw Error(ErrorKind::ValidationError,
                "configuration has " + std::to_string(diag.semantic.size()) + " validation error(s)", diag.semantic);
  }
  return config;
}

std::string serialize_config(const SimulationConfig& c) {
  std::ostringstream out;
  out << "[domain]\n"
      << "space_dim = " << c.domain.space_dim << "\n"
      << "lengths = " << join(c.domain.lengths) << "\n"
      << "bc = " << to_string(c.domain.bc) << "\n\n";
  out << "[grid]\nmodes = " << join(c.grid.modes) << "\n\n";
  if (c.kouachi) {
    const auto& p = c.kouachi->params;
    out << "[kouachi]\n"
        << "alpha = " << fmt(p.alpha) << "\nbeta = " << fmt(p.beta) << "\ngamma = " << fmt(p.gamma)
        << "\nsigma = " << fmt(p.sigma) << "\nrho = " << fmt(p.rho) << "\nf = " << p.f_name << "\n";
    for (const auto& [key, value] : p.f_params) out << key << " = " << fmt(value) << "\n";
    out << "strict = " << (c.kouachi->strict ? "true" : "false") << "\n"
        << "orientation = " << to_string(c.reaction.orientation) << "\n\n";
  } else {
    if (c.matrix) {
      out << "[matrix]\nd = " << c.matrix->d << "\nentries = " << join(c.matrix->entries) << "\n\n";
    }
    out << "[reaction]\nname = " << c.reaction.name << "\norientation = " << to_string(c.reaction.orientation) << "\n";
    for (const auto& [key, value] : c.reaction.params) out << key << " = " << fmt(value) << "\n";
    out << "\n";
  }
  if (c.time) {
    out << "[time]\ndt = " << fmt(c.time->dt) << "\nt_final = " << fmt(c.time->t_final)
        << "\nframe_stride = " << c.time->frame_stride << "\nscheme = " << to_string(c.time->scheme) << "\n\n";
  }
  if (c.stationary) {
    out << "[stationary]\nepsilon = " << fmt(c.stationary->epsilon) << "\nlambda = " << fmt(c.stationary->lambda)
        << "\n\n";
  }
  out << "[solver]\nnewton_tol = " << fmt(c.solver.newton_tol) << "\nnewton_max_iter = " << c.solver.newton_max_iter
      << "\n\n";
  out << "[probe]\nlo = " << fmt(c.probe.lo) << "\nhi = " << fmt(c.probe.hi) << "\npairs = " << c.probe.pairs
      << "\nseed = " << c.probe.seed << "\n\n";
  if (c.initial) {
    out << "[initial]\nseed = " << c.initial->seed << "\n";
    for (std::size_t i = 0; i < c.initial->components.size(); ++i) {
      const auto& comp = c.initial->components[i];
      out << "u" << (i + 1) << " = ";
      if (comp.is_inline()) {
        out << "[" << join(comp.values) << "]";
      } else {
        for (std::size_t t = 0; t < comp.terms.size(); ++t) {
          InitialTerm term = comp.terms[t];
          if (t) {
            out << (std::signbit(term.coefficient) ? " - " : " + ");
            term.coefficient = std::abs(term.coefficient);
          }
          out << serialize_term(term);
        }
      }
      out << "\n";
    }
    out << "\n";
  }
  out << "[output]\ndirectory = " << c.output.directory << "\nformats = ";
  for (std::size_t i = 0; i < c.output.formats.size(); ++i) out << (i ? ", " : "") << c.output.formats[i];
  out << "\n";
  return out.str();
}

std::vector<std::string> command_requirements(const SimulationConfig& config, Command command) {
  std::vector<std::string> out;
  if (!config.matrix) out.push_back("[matrix] (or [kouachi]) is required");
  switch (command) {
    case Command::Analyze:
      break;
    case Command::Kouachi:
      if (!config.kouachi) out.push_back("[kouachi] is required by the kouachi command");
      [[fallthrough]];
    case Command::Simulate:
      if (!config.time) out.push_back("[time] is required");
      if (!config.initial) out.push_back("[initial] is required");
      break;
    case Command::Stationary:
      if (!config.stationary) out.push_back("[stationary] is required");
      if (!config.initial) out.push_back("[initial] is required (it supplies the right-hand side v)");
      if (config.domain.bc != BoundaryKind::Dirichlet) out.push_back("domain.bc must be dirichlet for stationary");
      break;
  }
  return out;
}

BasisPtr make_basis(const SimulationConfig& config) {
  return SpectralBasis::build(config.domain.space_dim, config.domain.lengths, config.domain.bc, config.grid.modes);
}

DiffusionMatrix make_matrix(const SimulationConfig& config) {
  if (!config.matrix) throw Error(ErrorKind::ValidationError, "configuration has no matrix");
  return DiffusionMatrix(config.matrix->d, config.matrix->entries);
}

ReactionSpec make_reaction(const SimulationConfig& config) {
  const auto& r = config.reaction;
  auto param = [&](const char* key, double fallback) {
    auto it = r.params.find(key);
    return it == r.params.end() ? fallback : it->second;
  };
  const int d = config.matrix ? config.matrix->d : 1;
  ReactionSpec spec = [&] {
    if (config.kouachi) {
      const auto& p = config.kouachi->params;
      return ReactionSpec::kouachi(p.sigma, p.rho, make_scalar_field(p.f_name, p.f_params));
    }
    if (r.name == "zero") return ReactionSpec::zero(d);
    if (r.name == "linear_decay") return ReactionSpec::linear_decay(d, param("rate", 1.0));
    if (r.name == "cubic_decay") return ReactionSpec::cubic_decay(d, param("coefficient", 1.0));
    throw Error(ErrorKind::ValidationError, "unknown reaction '" + r.name + "'");
  }();
  return spec.with_orientation(r.orientation);
}

FieldState make_initial_field(const SimulationConfig& config, const BasisPtr& basis) {
  if (!config.initial) throw Error(ErrorKind::ValidationError, "configuration has no [initial] section");
  const auto& comps = config.initial->components;
  const int nodes = basis->size();
  const int dim = basis->space_dim();
  const auto& lengths = basis->lengths();
  Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(nodes, static_cast<Eigen::Index>(comps.size()));
  const double pi = std::numbers::pi;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.is_inline()) {
      if (static_cast<int>(comp.values.size()) != nodes) {
        throw Error(ErrorKind::ValidationError, "inline initial values do not match the grid");
      }
      for (int i = 0; i < nodes; ++i) grid(i, static_cast<Eigen::Index>(c)) = comp.values[static_cast<std::size_t>(i)];
      continue;
    }
    std::seed_seq seq{config.initial->seed, static_cast<unsigned long long>(c)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (const auto& term : comp.terms) {
      for (int i = 0; i < nodes; ++i) {
        const auto p = basis->node(i);
        double value = 1.0;
        if (term.kind == "sin" || term.kind == "cos") {
          for (int a = 0; a < dim; ++a) {
            const double arg = term.args[static_cast<std::size_t>(a)] * pi * p[static_cast<std::size_t>(a)] /
                               lengths[static_cast<std::size_t>(a)];
            value *= term.kind == "sin" ? std::sin(arg) : std::cos(arg);
          }
        } else if (term.kind == "gauss") {
          const double width = term.args.back();
          double r2 = 0.0;
          for (int a = 0; a < dim; ++a) {
            const double dx = p[static_cast<std::size_t>(a)] - term.args[static_cast<std::size_t>(a)];
            r2 += dx * dx;
          }
          value = std::exp(-r2 / (2.0 * width * width));
        } else if (term.kind == "noise") {
          value = noise(rng);
        }
        grid(i, static_cast<Eigen::Index>(c)) += term.coefficient * value;
      }
    }
  }
  return FieldState::from_grid(basis, std::move(grid));
}

}  // namespace crd
