#include "crn/parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "crn/error.hpp"

namespace crn {

namespace {

bool ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

// Species name -> coefficient for one side of a reaction line.
using SideMap = std::map<std::string, int>;

struct ParsedLine {
  SideMap lhs;
  SideMap rhs;
  bool reversible = false;
  std::vector<double> rates;
  SourceSpan span;
};

class LineScanner {
 public:
  LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

  ParsedLine parse(std::vector<std::string>& species_order) {
    ParsedLine out;
    skip_ws();
    out.span = span();
    out.lhs = side(species_order);
    skip_ws();
    out.reversible = arrow();
    skip_ws();
    out.rhs = side(species_order);
    skip_ws();
    expect(':');
    out.rates.push_back(rate());
    skip_ws();
    if (peek() == ',') {
      ++pos_;
      out.rates.push_back(rate());
      skip_ws();
    }
    if (!at_end()) fail("unexpected trailing input");
    const std::size_t want = out.reversible ? 2 : 1;
    if (out.rates.size() != want) {
      throw Error(ErrorCode::RateArityError,
                  std::string(out.reversible ? "'<->' requires two rate constants"
                                             : "'->' requires exactly one rate constant"),
                  out.span);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, msg, span());
  }

  SourceSpan span() const { return {line_, static_cast<int>(pos_) + 1}; }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && is_space(text_[pos_])) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool arrow() {
    if (text_.substr(pos_, 3) == "<->") {
      pos_ += 3;
      return true;
    }
    if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return false;
    }
    fail("expected '->' or '<->'");
  }

  SideMap side(std::vector<std::string>& species_order) {
    SideMap out;
    // The empty complex is the lone digit 0 not followed by a species name.
    if (peek() == '0') {
      std::size_t save = pos_;
      ++pos_;
      std::size_t after_digits = pos_;
      while (!at_end() && is_digit(text_[pos_])) ++pos_;
      bool only_zero = (pos_ == after_digits);
      skip_ws();
      if (only_zero && !ident_start(peek())) return out;
      pos_ = save;
    }
    for (;;) {
      skip_ws();
      term(out, species_order);
      skip_ws();
      if (peek() != '+') break;
      ++pos_;
    }
    return out;
  }

  void term(SideMap& out, std::vector<std::string>& species_order) {
    SourceSpan where = span();
    long long coeff = 1;
    if (is_digit(peek())) {
      std::size_t start = pos_;
      while (!at_end() && is_digit(text_[pos_])) ++pos_;
      auto digits = text_.substr(start, pos_ - start);
      if (digits.size() > 6) {
        throw Error(ErrorCode::SyntaxError, "stoichiometric coefficient too large", where);
      }
      std::from_chars(digits.data(), digits.data() + digits.size(), coeff);
      skip_ws();
      if (coeff == 0) {
        if (ident_start(peek())) {
          throw Error(ErrorCode::ZeroCoefficient, "explicit zero coefficient", where);
        }
        fail("expected a species name");
      }
    }
    if (!ident_start(peek())) fail("expected a species name");
    std::size_t start = pos_;
    while (!at_end() && ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (std::find(species_order.begin(), species_order.end(), name) == species_order.end()) {
      species_order.push_back(name);
    }
    out[name] += static_cast<int>(coeff);
  }

  double rate() {
    skip_ws();
    SourceSpan where = span();
    std::size_t start = pos_;
    auto numeric = [](char c) {
      return is_digit(c) || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-';
    };
    while (!at_end() && numeric(text_[pos_])) ++pos_;
    auto lit = text_.substr(start, pos_ - start);
    if (lit.empty()) fail("expected a rate constant");
    std::string_view body = lit;
    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
      negative = body.front() == '-';
      body.remove_prefix(1);
    }
    if (body.empty() || !(is_digit(body.front()) || body.front() == '.')) {
      throw Error(ErrorCode::SyntaxError, "malformed rate constant '" + std::string(lit) + "'", where);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::SyntaxError, "malformed rate constant '" + std::string(lit) + "'", where);
    }
    if (negative) v = -v;
    if (!(v > 0.0)) {
      throw Error(ErrorCode::NonpositiveRate, "rate constants must be positive", where);
    }
    return v;
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

Complex to_complex(const SideMap& side, const std::vector<std::string>& species) {
  Complex y;
  y.coeffs.assign(species.size(), 0);
  for (const auto& [name, c] : side) {
    auto it = std::find(species.begin(), species.end(), name);
    y.coeffs[static_cast<std::size_t>(it - species.begin())] = c;
  }
  return y;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (is_space(s.front()) || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (is_space(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

}  // namespace

MassActionSystem parse_network(std::string_view text) {
  std::vector<ParsedLine> lines;
  std::vector<std::string> species_order;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = std::all_of(line.begin(), line.end(), is_space);
    if (!blank) lines.push_back(LineScanner(line, line_no).parse(species_order));
    if (eol == text.size()) break;
    pos = eol + 1;
  }

  std::vector<MassActionSystem::ReactionSpec> specs;
  std::set<std::pair<SideMap, SideMap>> seen;
  auto add = [&](const SideMap& from, const SideMap& to, double k, const SourceSpan& span) {
    if (from == to) throw Error(ErrorCode::SelfLoop, "reaction from a complex to itself", span);
    if (!seen.emplace(from, to).second) {
      throw Error(ErrorCode::DuplicateReaction, "reaction listed more than once", span);
    }
    specs.push_back({to_complex(from, species_order), to_complex(to, species_order), k});
  };
  for (const auto& l : lines) {
    add(l.lhs, l.rhs, l.rates[0], l.span);
    if (l.reversible) add(l.rhs, l.lhs, l.rates[1], l.span);
  }
  if (specs.empty()) return MassActionSystem{};
  return MassActionSystem::from_reactions(SpeciesTable(species_order), specs);
}

MassActionSystem load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::variant<DetState, DiscreteState> parse_state(std::string_view text,
                                                   const SpeciesTable& species,
                                                   StateKind kind) {
  std::vector<double> values(species.size(), 0.0);
  std::vector<bool> assigned(species.size(), false);
  std::string_view rest = trim(text);
  int column = 1;
  while (!rest.empty()) {
    std::size_t comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    SourceSpan where{1, column};
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::SyntaxError, "expected NAME=VALUE", where);
    }
    std::string name(trim(item.substr(0, eq)));
    std::string_view value = trim(item.substr(eq + 1));
    auto idx = species.index_of(name);
    if (!idx) throw Error(ErrorCode::UnknownSpecies, "unknown species '" + name + "'", where);
    if (assigned[*idx]) throw Error(ErrorCode::SyntaxError, "species '" + name + "' given twice", where);
    std::string_view body = value;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
      negative = body.front() == '-';
      body.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::SyntaxError, "malformed value '" + std::string(value) + "'", where);
    }
    values[*idx] = negative ? -v : v;
    assigned[*idx] = true;
    column += static_cast<int>(item.size()) + 1;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (kind == StateKind::Continuous) return DetState{values};
  DiscreteState x;
  x.values.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (v != std::floor(v) || std::abs(v) > 9.0e15) {
      throw Error(ErrorCode::NonIntegerCount,
                  "count for '" + species.name(i) + "' is not an integer");
    }
    x.values.push_back(static_cast<std::int64_t>(v));
  }
  return x;
}

DetState parse_det_state(std::string_view text, const SpeciesTable& species) {
  return std::get<DetState>(parse_state(text, species, StateKind::Continuous));
}

DiscreteState parse_discrete_state(std::string_view text, const SpeciesTable& species) {
  return std::get<DiscreteState>(parse_state(text, species, StateKind::Discrete));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

struct Line {
  std::size_t fwd;                  // reaction printed left to right
  std::optional<std::size_t> back;  // its reverse, for `<->` lines
};

// Species of y in the order they are printed.
void append_species(const Complex& y, std::vector<std::size_t>& order) {
  for (std::size_t i = 0; i < y.coeffs.size(); ++i) {
    if (y.coeffs[i] != 0) order.push_back(i);
  }
}

}  // namespace

// Lines come out in canonical (source, target) order, except that species
// order is only recoverable from first appearance in the text. When the next
// sorted line would introduce a species early, the first line that keeps
// first appearance in table order is taken instead, with `<->` lines free to
// print either way round.
std::string format_network(const MassActionSystem& sys) {
  const auto& net = sys.network();
  std::vector<Line> lines;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    auto back = net.find_reaction(rx.target, rx.source);
    if (back && rx.source > rx.target) continue;
    lines.push_back({r, back});
  }

  std::vector<bool> seen(net.num_species(), false);
  std::size_t next = 0;
  // True if printing reaction r first keeps first appearances in order.
  auto fits = [&](std::size_t r) {
    std::vector<std::size_t> order;
    append_species(net.complexes()[net.reactions()[r].source], order);
    append_species(net.complexes()[net.reactions()[r].target], order);
    std::size_t expect = next;
    std::vector<bool> local = seen;
    for (auto i : order) {
      if (local[i]) continue;
      if (i != expect) return false;
      local[i] = true;
      ++expect;
    }
    return true;
  };
  auto mark = [&](std::size_t r) {
    for (auto c : {net.reactions()[r].source, net.reactions()[r].target}) {
      const auto& y = net.complexes()[c];
      for (std::size_t i = 0; i < y.coeffs.size(); ++i) {
        if (y.coeffs[i] != 0 && !seen[i]) seen[i] = true;
      }
    }
    while (next < seen.size() && seen[next]) ++next;
  };

  std::string out;
  std::vector<bool> done(lines.size(), false);
  for (std::size_t emitted = 0; emitted < lines.size(); ++emitted) {
    std::size_t pick = lines.size();
    bool flip = false;
    for (std::size_t k = 0; k < lines.size() && pick == lines.size(); ++k) {
      if (done[k]) continue;
      if (fits(lines[k].fwd)) {
        pick = k;
      } else if (lines[k].back && fits(*lines[k].back)) {
        pick = k;
        flip = true;
      }
    }
    // No text yields this species order (possible only for systems built in
    // code); fall back to plain canonical order.
    if (pick == lines.size()) {
      pick = static_cast<std::size_t>(std::find(done.begin(), done.end(), false) - done.begin());
    }
    done[pick] = true;
    const std::size_t left = flip ? *lines[pick].back : lines[pick].fwd;
    const auto right = flip ? std::optional<std::size_t>(lines[pick].fwd) : lines[pick].back;
    mark(left);
    const auto& rx = net.reactions()[left];
    out += net.complex_string(rx.source);
    out += right ? " <-> " : " -> ";
    out += net.complex_string(rx.target);
    out += " : ";
    out += format_double(sys.kappa(left));
    if (right) {
      out += ", ";
      out += format_double(sys.kappa(*right));
    }
    out += '\n';
  }
  return out;
}

std::string format_state(const DiscreteState& x, const SpeciesTable& species) {
  std::string out;
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (i) out += ',';
    out += species.name(i) + "=" + std::to_string(x[i]);
  }
  return out;
}

std::string format_state(const DetState& c, const SpeciesTable& species) {
  std::string out;
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (i) out += ',';
    out += species.name(i) + "=" + format_double(c[i]);
  }
  return out;
}

bool equivalent(const MassActionSystem& a, const MassActionSystem& b) {
  const auto& na = a.network();
  const auto& nb = b.network();
  if (na.num_species() != nb.num_species() || na.num_reactions() != nb.num_reactions()) return false;
  // Express b's complexes in a's species order.
  std::vector<std::size_t> perm(nb.num_species());
  for (std::size_t i = 0; i < nb.num_species(); ++i) {
    auto idx = na.species().index_of(nb.species().name(i));
    if (!idx) return false;
    perm[i] = *idx;
  }
  using Key = std::tuple<std::vector<int>, std::vector<int>, double>;
  auto keys_of = [](const MassActionSystem& s, auto&& remap) {
    std::vector<Key> keys;
    const auto& n = s.network();
    for (std::size_t r = 0; r < n.num_reactions(); ++r) {
      const auto& rx = n.reactions()[r];
      keys.emplace_back(remap(n.complexes()[rx.source].coeffs),
                        remap(n.complexes()[rx.target].coeffs), s.kappa(r));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  auto identity = [](const std::vector<int>& v) { return v; };
  auto to_a = [&](const std::vector<int>& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[perm[i]] = v[i];
    return out;
  };
  return keys_of(a, identity) == keys_of(b, to_a);
}

}  // namespace crn
