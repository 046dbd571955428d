#include "epidrive/rule_file.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "epidrive/error.hpp"
#include "shipped_rules.inc"

namespace epidrive {

namespace {

struct Token {
  std::string text;
  int column = 1;
};

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({std::string(line.substr(start, i - start)),
                      static_cast<int>(start) + 1});
  }
  return tokens;
}

std::optional<double> parse_plain(std::string_view s) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<double> parse_number(std::string_view s) {
  const std::size_t slash = s.find('/');
  if (slash == std::string_view::npos) return parse_plain(s);
  const auto num = parse_plain(s.substr(0, slash));
  const auto den = parse_plain(s.substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

struct PendingVariable {
  bool is_input = true;
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::vector<fuzzy::TriangularMF> terms;
  int line = 0;
};

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  fuzzy::RuleBase parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      handle_line(raw);
    }
    if (pending_) {
      fail(pending_->line, 1, fmt::format("variable '{}' is missing 'end'",
                                          pending_->name));
    }
    try {
      return fuzzy::RuleBase(std::move(inputs_), std::move(outputs_),
                             std::move(rules_));
    } catch (const ValidationError& e) {
      fail(line_, 1, e.what());
    }
  }

 private:
  [[noreturn]] void fail(int line, int column, const std::string& message) const {
    throw ParseError(source_, line, column, message);
  }

  double number(const Token& tok) const {
    const auto v = parse_number(tok.text);
    if (!v) fail(line_, tok.column, fmt::format("expected a number, got '{}'", tok.text));
    return *v;
  }

  void handle_line(const std::string& raw) {
    std::string body = raw;
    std::string comment;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      body = raw.substr(0, hash);
      comment = trim(std::string_view(raw).substr(hash + 1));
    }
    const std::vector<Token> tokens = tokenize(body);
    if (tokens.empty()) return;
    const std::string& head = tokens[0].text;

    if (iequals(head, "input") || iequals(head, "output")) {
      open_variable(tokens, iequals(head, "input"));
    } else if (iequals(head, "term")) {
      add_term(tokens);
    } else if (iequals(head, "end")) {
      close_variable(tokens);
    } else if (iequals(head, "IF")) {
      add_rule(tokens, comment);
    } else {
      fail(line_, tokens[0].column, fmt::format("unexpected '{}'", head));
    }
  }

  void open_variable(const std::vector<Token>& t, bool is_input) {
    if (pending_) fail(line_, t[0].column, "nested variable block");
    if (t.size() != 4) {
      fail(line_, t[0].column,
           fmt::format("expected '{} <name> <min> <max>'", t[0].text));
    }
    if (find_variable(t[1].text, true) != fuzzy::FuzzyVariable::npos ||
        find_variable(t[1].text, false) != fuzzy::FuzzyVariable::npos) {
      fail(line_, t[1].column, fmt::format("variable '{}' declared twice", t[1].text));
    }
    pending_ = PendingVariable{is_input, t[1].text, number(t[2]), number(t[3]), {}, line_};
  }

  void add_term(const std::vector<Token>& t) {
    if (!pending_) fail(line_, t[0].column, "'term' outside a variable block");
    if (t.size() != 5) fail(line_, t[0].column, "expected 'term <name> <a> <b> <c>'");
    pending_->terms.push_back({t[1].text, number(t[2]), number(t[3]), number(t[4])});
  }

  void close_variable(const std::vector<Token>& t) {
    if (!pending_) fail(line_, t[0].column, "'end' without a variable block");
    if (t.size() != 1) fail(line_, t[1].column, "unexpected text after 'end'");
    try {
      fuzzy::FuzzyVariable var(pending_->name, pending_->min, pending_->max,
                               std::move(pending_->terms));
      (pending_->is_input ? inputs_ : outputs_).push_back(std::move(var));
    } catch (const ValidationError& e) {
      fail(pending_->line, 1, e.what());
    }
    pending_.reset();
  }

  std::size_t find_variable(std::string_view name, bool input) const {
    const auto& vars = input ? inputs_ : outputs_;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name() == name) return i;
    }
    return fuzzy::FuzzyVariable::npos;
  }

  // Parses "<var> IS <term> (AND <var> IS <term>)*" starting at pos.
  std::vector<fuzzy::Clause> clauses(const std::vector<Token>& t, std::size_t& pos,
                                     bool input, std::string_view stop) {
    std::vector<fuzzy::Clause> out;
    const auto& vars = input ? inputs_ : outputs_;
    while (true) {
      if (pos + 3 > t.size()) {
        const int col = pos < t.size() ? t[pos].column : t.back().column;
        fail(line_, col, "expected '<variable> IS <term>'");
      }
      const Token& var_tok = t[pos];
      const Token& is_tok = t[pos + 1];
      const Token& term_tok = t[pos + 2];
      if (!iequals(is_tok.text, "IS")) {
        fail(line_, is_tok.column, fmt::format("expected 'IS', got '{}'", is_tok.text));
      }
      const std::size_t v = find_variable(var_tok.text, input);
      if (v == fuzzy::FuzzyVariable::npos) {
        fail(line_, var_tok.column,
             fmt::format("unknown {} variable '{}'", input ? "input" : "output",
                         var_tok.text));
      }
      const std::size_t term = vars[v].find_term(term_tok.text);
      if (term == fuzzy::FuzzyVariable::npos) {
        fail(line_, term_tok.column,
             fmt::format("variable '{}' has no term '{}'", var_tok.text,
                         term_tok.text));
      }
      out.push_back({v, term});
      pos += 3;
      if (pos == t.size()) {
        if (!stop.empty()) fail(line_, t.back().column, fmt::format("missing '{}'", stop));
        return out;
      }
      if (!stop.empty() && iequals(t[pos].text, stop)) return out;
      if (!iequals(t[pos].text, "AND")) {
        fail(line_, t[pos].column, fmt::format("expected 'AND', got '{}'", t[pos].text));
      }
      ++pos;
    }
  }

  void add_rule(const std::vector<Token>& t, const std::string& comment) {
    if (pending_) fail(line_, t[0].column, "rule inside a variable block");
    std::size_t pos = 1;
    fuzzy::Rule rule;
    rule.antecedent = clauses(t, pos, true, "THEN");
    ++pos;
    rule.consequent = clauses(t, pos, false, "");
    rule.comment = comment;
    if (!comment.empty() && comment.front() == '[') {
      const auto close = comment.find(']');
      if (close == std::string::npos) fail(line_, 1, "unterminated condition tag list");
      std::string list = comment.substr(1, close - 1);
      std::stringstream ss(list);
      std::string tag;
      while (std::getline(ss, tag, ',')) {
        tag = trim(tag);
        if (!tag.empty()) rule.tags.push_back(tag);
      }
      rule.comment = trim(std::string_view(comment).substr(close + 1));
    }
    rules_.push_back(std::move(rule));
  }

  std::string source_;
  int line_ = 0;
  std::optional<PendingVariable> pending_;
  std::vector<fuzzy::FuzzyVariable> inputs_;
  std::vector<fuzzy::FuzzyVariable> outputs_;
  std::vector<fuzzy::Rule> rules_;
};

}  // namespace

fuzzy::RuleBase parse_rule_base(std::string_view text, const std::string& source) {
  return Parser(source).parse(text);
}

fuzzy::RuleBase load_rule_base(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCategory::io,
                fmt::format("cannot open rule file '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_rule_base(buffer.str(), path.string());
}

std::string format_rule_base(const fuzzy::RuleBase& rb) {
  std::string out;
  auto emit_vars = [&out](const std::vector<fuzzy::FuzzyVariable>& vars,
                          const char* kind) {
    for (const fuzzy::FuzzyVariable& v : vars) {
      out += fmt::format("{} {} {} {}\n", kind, v.name(), v.min(), v.max());
      for (const fuzzy::TriangularMF& t : v.terms()) {
        out += fmt::format("  term {} {} {} {}\n", t.name, t.a, t.b, t.c);
      }
      out += "end\n";
    }
  };
  emit_vars(rb.inputs(), "input");
  emit_vars(rb.outputs(), "output");
  for (const fuzzy::Rule& rule : rb.rules()) {
    out += rb.describe(rule);
    if (!rule.tags.empty() || !rule.comment.empty()) {
      out += "  # ";
      if (!rule.tags.empty()) {
        out += "[";
        for (std::size_t i = 0; i < rule.tags.size(); ++i) {
          out += (i ? ", " : "") + rule.tags[i];
        }
        out += "] ";
      }
      out += rule.comment;
    }
    out += "\n";
  }
  return out;
}

std::string_view shipped_rule_text() { return kShippedRuleText; }

}  // namespace epidrive
