#pragma once

// Mamdani inference with triangular memberships: AND and implication by min,
// aggregation by max, centroid defuzzification on a uniform grid.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epidrive::fuzzy {

struct TriangularMF {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  friend bool operator==(const TriangularMF&, const TriangularMF&) = default;
};

double membership(const TriangularMF& mf, double x) noexcept;

// Largest |dmu/dx| of the triangle, 0 for a degenerate point.
double max_slope(const TriangularMF& mf) noexcept;

class FuzzyVariable {
 public:
  FuzzyVariable() = default;
  FuzzyVariable(std::string name, double min, double max,
                std::vector<TriangularMF> terms);

  const std::string& name() const noexcept { return name_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  const std::vector<TriangularMF>& terms() const noexcept { return terms_; }

  // Index of the named term, or npos.
  std::size_t find_term(std::string_view term) const noexcept;
  double clamp(double x) const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const FuzzyVariable&, const FuzzyVariable&) = default;

 private:
  std::string name_;
  double min_ = 0.0;
  double max_ = 1.0;
  std::vector<TriangularMF> terms_;
};

// Equally spaced peaks with each foot on the neighbouring peak.
FuzzyVariable uniform_partition(std::string name, double min, double max,
                                const std::vector<std::string>& term_names);

// One degree per term, in term order; x is clamped to the universe first.
std::vector<double> fuzzify(const FuzzyVariable& var, double x);

struct Clause {
  std::size_t variable = 0;
  std::size_t term = 0;

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Rule {
  std::vector<Clause> antecedent;  // inputs, combined with AND
  std::vector<Clause> consequent;  // outputs
  std::vector<std::string> tags;
  std::string comment;

  friend bool operator==(const Rule&, const Rule&) = default;
};

class RuleBase {
 public:
  RuleBase() = default;
  RuleBase(std::vector<FuzzyVariable> inputs, std::vector<FuzzyVariable> outputs,
           std::vector<Rule> rules);

  const std::vector<FuzzyVariable>& inputs() const noexcept { return inputs_; }
  const std::vector<FuzzyVariable>& outputs() const noexcept { return outputs_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }

  std::size_t find_input(std::string_view name) const noexcept;
  std::size_t find_output(std::string_view name) const noexcept;

  std::string describe(const Rule& rule) const;

  friend bool operator==(const RuleBase&, const RuleBase&) = default;

 private:
  std::vector<FuzzyVariable> inputs_;
  std::vector<FuzzyVariable> outputs_;
  std::vector<Rule> rules_;
};

struct SampledSet {
  double min = 0.0;
  double max = 0.0;
  std::vector<double> degrees;

  double x(std::size_t i) const noexcept;
};

inline constexpr std::size_t kDefaultGridPoints = 201;

// Crisp inputs are given in rule-base input order.
std::vector<SampledSet> infer(const RuleBase& rb, std::span<const double> inputs,
                              std::size_t grid_points = kDefaultGridPoints);

std::vector<SampledSet> infer(const RuleBase& rb,
                              const std::map<std::string, double>& inputs,
                              std::size_t grid_points = kDefaultGridPoints);

// Firing strength of every rule for the given crisp inputs.
std::vector<double> firing_strengths(const RuleBase& rb,
                                     std::span<const double> inputs);

struct Defuzzified {
  double value = 0.0;
  bool no_fire = false;
};

Defuzzified defuzzify(const SampledSet& set);

}  // namespace epidrive::fuzzy
