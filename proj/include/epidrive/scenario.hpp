#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "epidrive/sim.hpp"

namespace epidrive {

struct Knot {
  double t = 0.0;
  double value = 0.0;

  friend bool operator==(const Knot&, const Knot&) = default;
};

// Linear between knots, held flat before the first and after the last.
// An empty profile reads 0.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {}

  double operator()(double t) const noexcept;
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

 private:
  std::vector<Knot> knots_;
};

struct SwitchEvent {
  double t = 0.0;
  bool on = false;

  friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

// State of the last event at or before t, or `initial` before any event.
class SwitchSchedule {
 public:
  SwitchSchedule() = default;
  SwitchSchedule(std::vector<SwitchEvent> events, bool initial)
      : events_(std::move(events)), initial_(initial) {}

  bool operator()(double t) const noexcept;
  const std::vector<SwitchEvent>& events() const noexcept { return events_; }
  bool initial() const noexcept { return initial_; }

  friend bool operator==(const SwitchSchedule&, const SwitchSchedule&) = default;

 private:
  std::vector<SwitchEvent> events_;
  bool initial_ = false;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  double duration = 0.0;  // s
  double dt = 0.001;      // s
  PiecewiseLinear accel;
  PiecewiseLinear brake;
  SwitchSchedule reverse{{}, false};
  SwitchSchedule ignition{{}, true};
  PlantConfig plant;

  std::size_t tick_count() const;
  PedalState pedals_at(double t) const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

void validate(const ScenarioSpec& spec);

// `source` names the document in parse errors; relative rule-base paths are
// resolved against `base_dir`.
ScenarioSpec parse_scenario(std::string_view text, const std::string& source = "<scenario>",
                            const std::filesystem::path& base_dir = {});
ScenarioSpec load_scenario(const std::filesystem::path& path);

// Default-filled YAML document that parse_scenario reads back unchanged.
std::string dump_scenario(const ScenarioSpec& spec);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

Trace run(const Simulator& sim, const ScenarioSpec& scenario);
Trace run(const ScenarioSpec& scenario);

}  // namespace epidrive
