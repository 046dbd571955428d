#include "epidrive/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "epidrive/error.hpp"

namespace epidrive::fuzzy {

double membership(const TriangularMF& mf, double x) noexcept {
  if (x < mf.a || x > mf.c) return 0.0;
  if (x == mf.b) return 1.0;
  if (x < mf.b) return (x - mf.a) / (mf.b - mf.a);
  return (mf.c - x) / (mf.c - mf.b);
}

double max_slope(const TriangularMF& mf) noexcept {
  double slope = 0.0;
  if (mf.b > mf.a) slope = std::max(slope, 1.0 / (mf.b - mf.a));
  if (mf.c > mf.b) slope = std::max(slope, 1.0 / (mf.c - mf.b));
  return slope;
}

FuzzyVariable::FuzzyVariable(std::string name, double min, double max,
                             std::vector<TriangularMF> terms)
    : name_(std::move(name)), min_(min), max_(max), terms_(std::move(terms)) {
  if (!std::isfinite(min_) || !std::isfinite(max_) || !(min_ < max_)) {
    throw ValidationError(name_, fmt::format("universe [{}, {}] must satisfy "
                                             "min < max",
                                             min_, max_));
  }
  if (terms_.empty()) {
    throw ValidationError(name_, "variable needs at least one term");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const TriangularMF& t = terms_[i];
    const std::string field = name_ + "." + t.name;
    if (!seen.insert(t.name).second) {
      throw ValidationError(field, "duplicate term name");
    }
    if (!(t.a <= t.b && t.b <= t.c)) {
      throw ValidationError(field, fmt::format("triangle ({}, {}, {}) needs "
                                               "a <= b <= c",
                                               t.a, t.b, t.c));
    }
    if (t.a < min_ || t.c > max_) {
      throw ValidationError(field, fmt::format("support [{}, {}] leaves the "
                                               "universe [{}, {}]",
                                               t.a, t.c, min_, max_));
    }
    if (i > 0 && !(terms_[i - 1].b < t.b)) {
      throw ValidationError(field, "term peaks must be strictly increasing");
    }
  }
}

std::size_t FuzzyVariable::find_term(std::string_view term) const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].name == term) return i;
  }
  return npos;
}

double FuzzyVariable::clamp(double x) const noexcept {
  return std::clamp(x, min_, max_);
}

FuzzyVariable uniform_partition(std::string name, double min, double max,
                                const std::vector<std::string>& term_names) {
  const std::size_t n = term_names.size();
  std::vector<double> peaks(n);
  for (std::size_t i = 0; i < n; ++i) {
    peaks[i] = n == 1 ? 0.5 * (min + max)
                      : min + (max - min) * static_cast<double>(i) /
                                  static_cast<double>(n - 1);
  }
  if (n > 1) peaks.back() = max;
  std::vector<TriangularMF> terms;
  terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i == 0 ? (n == 1 ? min : peaks[0]) : peaks[i - 1];
    const double c = i + 1 == n ? (n == 1 ? max : peaks[i]) : peaks[i + 1];
    terms.push_back({term_names[i], a, peaks[i], c});
  }
  return FuzzyVariable(std::move(name), min, max, std::move(terms));
}

std::vector<double> fuzzify(const FuzzyVariable& var, double x) {
  const double clamped = var.clamp(x);
  std::vector<double> degrees;
  degrees.reserve(var.terms().size());
  for (const TriangularMF& mf : var.terms()) {
    degrees.push_back(membership(mf, clamped));
  }
  return degrees;
}

RuleBase::RuleBase(std::vector<FuzzyVariable> inputs,
                   std::vector<FuzzyVariable> outputs, std::vector<Rule> rules)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      rules_(std::move(rules)) {
  std::set<std::string> names;
  for (const auto* group : {&inputs_, &outputs_}) {
    for (const FuzzyVariable& v : *group) {
      if (!names.insert(v.name()).second) {
        throw ValidationError(v.name(), "duplicate variable name");
      }
    }
  }
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const Rule& rule = rules_[r];
    const std::string field = fmt::format("rule[{}]", r + 1);
    if (rule.antecedent.empty()) {
      throw ValidationError(field, "antecedent must not be empty");
    }
    if (rule.consequent.empty()) {
      throw ValidationError(field, "consequent must not be empty");
    }
    auto check = [&](const std::vector<Clause>& clauses,
                     const std::vector<FuzzyVariable>& vars) {
      for (const Clause& c : clauses) {
        if (c.variable >= vars.size() ||
            c.term >= vars[c.variable].terms().size()) {
          throw ValidationError(field, "clause references an unknown "
                                       "variable or term");
        }
      }
    };
    check(rule.antecedent, inputs_);
    check(rule.consequent, outputs_);
  }
}

std::size_t RuleBase::find_input(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i].name() == name) return i;
  }
  return FuzzyVariable::npos;
}

std::size_t RuleBase::find_output(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    if (outputs_[i].name() == name) return i;
  }
  return FuzzyVariable::npos;
}

std::string RuleBase::describe(const Rule& rule) const {
  std::string text = "IF";
  for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
    const Clause& c = rule.antecedent[i];
    const FuzzyVariable& v = inputs_[c.variable];
    text += fmt::format("{} {} IS {}", i == 0 ? "" : " AND", v.name(),
                        v.terms()[c.term].name);
  }
  text += " THEN";
  for (std::size_t i = 0; i < rule.consequent.size(); ++i) {
    const Clause& c = rule.consequent[i];
    const FuzzyVariable& v = outputs_[c.variable];
    text += fmt::format("{} {} IS {}", i == 0 ? "" : " AND", v.name(),
                        v.terms()[c.term].name);
  }
  return text;
}

double SampledSet::x(std::size_t i) const noexcept {
  const std::size_t n = degrees.size();
  if (n < 2) return min;
  if (i + 1 == n) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::vector<double> firing_strengths(const RuleBase& rb,
                                     std::span<const double> inputs) {
  if (inputs.size() != rb.inputs().size()) {
    throw Error(ErrorCategory::inference,
                fmt::format("expected {} crisp inputs, got {}",
                            rb.inputs().size(), inputs.size()));
  }
  std::vector<std::vector<double>> degrees;
  degrees.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!std::isfinite(inputs[i])) {
      throw Error(ErrorCategory::inference,
                  fmt::format("input '{}' is not finite",
                              rb.inputs()[i].name()));
    }
    degrees.push_back(fuzzify(rb.inputs()[i], inputs[i]));
  }
  std::vector<double> strengths;
  strengths.reserve(rb.rules().size());
  for (const Rule& rule : rb.rules()) {
    double s = 1.0;
    for (const Clause& c : rule.antecedent) {
      s = std::min(s, degrees[c.variable][c.term]);
    }
    strengths.push_back(s);
  }
  return strengths;
}

std::vector<SampledSet> infer(const RuleBase& rb, std::span<const double> inputs,
                              std::size_t grid_points) {
  const std::vector<double> strengths = firing_strengths(rb, inputs);

  std::vector<SampledSet> sets;
  sets.reserve(rb.outputs().size());
  for (const FuzzyVariable& out : rb.outputs()) {
    sets.push_back({out.min(), out.max(), std::vector<double>(grid_points, 0.0)});
  }
  for (std::size_t r = 0; r < rb.rules().size(); ++r) {
    const double s = strengths[r];
    if (s <= 0.0) continue;
    for (const Clause& c : rb.rules()[r].consequent) {
      SampledSet& set = sets[c.variable];
      const TriangularMF& mf = rb.outputs()[c.variable].terms()[c.term];
      for (std::size_t i = 0; i < grid_points; ++i) {
        const double clipped = std::min(s, membership(mf, set.x(i)));
        set.degrees[i] = std::max(set.degrees[i], clipped);
      }
    }
  }
  return sets;
}

std::vector<SampledSet> infer(const RuleBase& rb,
                              const std::map<std::string, double>& inputs,
                              std::size_t grid_points) {
  std::vector<double> ordered;
  ordered.reserve(rb.inputs().size());
  for (const FuzzyVariable& v : rb.inputs()) {
    auto it = inputs.find(v.name());
    if (it == inputs.end()) {
      throw Error(ErrorCategory::inference,
                  fmt::format("missing crisp input '{}'", v.name()));
    }
    ordered.push_back(it->second);
  }
  return infer(rb, ordered, grid_points);
}

Defuzzified defuzzify(const SampledSet& set) {
  if (set.degrees.size() < 2) {
    throw Error(ErrorCategory::defuzzification,
                fmt::format("centroid needs at least 2 grid points (got {})",
                            set.degrees.size()));
  }
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < set.degrees.size(); ++i) {
    weighted += set.x(i) * set.degrees[i];
    total += set.degrees[i];
  }
  if (total <= 0.0) {
    return {0.5 * (set.min + set.max), true};
  }
  return {weighted / total, false};
}

}  // namespace epidrive::fuzzy
