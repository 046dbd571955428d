#include "epidrive/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "epidrive/error.hpp"

namespace epidrive {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCategory::io, fmt::format("cannot open '{}' for writing", path.string()));
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error(ErrorCategory::io, fmt::format("write failed for '{}'", path.string()));
  }
}

// Avoids "-0.000000" for tiny negatives.
std::string fixed(double v) {
  std::string s = fmt::format("{:.{}f}", v, kCsvDecimals);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace

std::string format_csv(const Trace& trace) {
  std::string out;
  out += fmt::format("# scenario={} dt={} precision=fixed,{} decimals\n", trace.scenario,
                     trace.dt, kCsvDecimals);
  out +=
      "t[s],accel[1],brake[1],reverse[bool],ignition[bool],accel_rate[1/s],"
      "brake_rate[1/s],v_eng[V],v_mot[V],omega2[rad/s],omega5[rad/s],"
      "omega_arm[rad/s],flc_eng[V],flc_mot[V],no_fire[bool],omega2_sp[rad/s],"
      "omega5_sp[rad/s],wheel_demand[rad/s],mode\n";
  auto it = std::back_inserter(out);
  for (const TraceSample& s : trace.samples) {
    fmt::format_to(it, "{},{},{},{:d},{:d},{},{},{},{},{},{},{},{},{},{:d},{},{},{},{}\n",
                   fixed(s.time), fixed(s.accel), fixed(s.brake), s.reverse ? 1 : 0,
                   s.ignition ? 1 : 0, fixed(s.accel_rate), fixed(s.brake_rate),
                   fixed(s.engine_voltage), fixed(s.motor_voltage), fixed(s.omega_engine),
                   fixed(s.omega_motor), fixed(s.omega_arm), fixed(s.flc_engine),
                   fixed(s.flc_motor), s.no_fire ? 1 : 0, fixed(s.engine_setpoint),
                   fixed(s.motor_setpoint), fixed(s.wheel_demand), mode_name(s.mode));
  }
  return out;
}

void export_csv(const Trace& trace, const std::filesystem::path& path) {
  write_file(path, format_csv(trace));
}

namespace {

// 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_plot(const Trace& trace) {
  if (trace.samples.empty()) {
    throw Error(ErrorCategory::io, "cannot plot an empty trace");
  }
  constexpr double width = 900, height = 500;
  constexpr double left = 70, right = 170, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double t0 = trace.samples.front().time;
  double t1 = trace.samples.back().time;
  if (t1 <= t0) t1 = t0 + 1.0;
  double lo = 0.0, hi = 0.0;
  for (const TraceSample& s : trace.samples) {
    for (double v : {s.omega_engine, s.omega_motor, s.omega_arm}) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double ystep = nice_step(hi - lo, 8);
  lo = std::floor(lo / ystep) * ystep;
  hi = std::ceil(hi / ystep) * ystep;
  const double tstep = nice_step(t1 - t0, 10);

  auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
  auto py = [&](double v) { return top + (hi - v) / (hi - lo) * ph; };

  std::string svg;
  auto it = std::back_inserter(svg);
  fmt::format_to(it,
                 "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                 "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
                 "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                 width, height);
  fmt::format_to(it, "<text x=\"{}\" y=\"24\" font-size=\"15\">{}</text>\n", left,
                 trace.scenario.empty() ? "trace" : trace.scenario);

  for (double v = lo; v <= hi + 1e-9 * ystep; v += ystep) {
    fmt::format_to(it,
                   "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                   "stroke=\"#dddddd\"/>\n<text x=\"{3:.2f}\" y=\"{4:.2f}\" "
                   "text-anchor=\"end\">{5:g}</text>\n",
                   left, py(v), left + pw, left - 6, py(v) + 4, std::abs(v) < 1e-12 ? 0.0 : v);
  }
  for (double t = std::ceil(t0 / tstep) * tstep; t <= t1 + 1e-9 * tstep; t += tstep) {
    fmt::format_to(it,
                   "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                   "stroke=\"#eeeeee\"/>\n<text x=\"{0:.2f}\" y=\"{3:.2f}\" "
                   "text-anchor=\"middle\">{4:g}</text>\n",
                   px(t), top, top + ph, top + ph + 18, t);
  }
  if (lo < 0.0 && hi > 0.0) {
    fmt::format_to(it,
                   "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                   "stroke=\"#888888\"/>\n",
                   left, py(0.0), left + pw);
  }
  fmt::format_to(it,
                 "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                 "stroke=\"black\"/>\n",
                 left, top, pw, ph);
  fmt::format_to(it, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">time [s]</text>\n",
                 left + pw / 2, height - 15);
  fmt::format_to(it,
                 "<text transform=\"translate(18 {:.2f}) rotate(-90)\" "
                 "text-anchor=\"middle\">speed [rad/s]</text>\n",
                 top + ph / 2);

  struct Series {
    const char* label;
    const char* color;
    double TraceSample::*field;
  };
  const Series series[] = {
      {"omega2 (engine)", "#1f77b4", &TraceSample::omega_engine},
      {"omega5 (DC motor)", "#d62728", &TraceSample::omega_motor},
      {"omega_arm (wheels)", "#2ca02c", &TraceSample::omega_arm},
  };
  // Keep files small for long traces: at most ~2000 vertices per series.
  const std::size_t stride = std::max<std::size_t>(1, trace.samples.size() / 2000);
  for (std::size_t k = 0; k < std::size(series); ++k) {
    const Series& s = series[k];
    svg += "<polyline fill=\"none\" stroke-width=\"1.8\" stroke=\"";
    svg += s.color;
    svg += "\" points=\"";
    for (std::size_t i = 0; i < trace.samples.size(); i += stride) {
      const TraceSample& smp = trace.samples[i];
      fmt::format_to(it, "{:.2f},{:.2f} ", px(smp.time), py(smp.*s.field));
    }
    const TraceSample& last = trace.samples.back();
    fmt::format_to(it, "{:.2f},{:.2f}\"/>\n", px(last.time), py(last.*s.field));

    const double ly = top + 20 + 22 * static_cast<double>(k);
    fmt::format_to(it,
                   "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                   "stroke=\"{3}\" stroke-width=\"3\"/>\n<text x=\"{4:.2f}\" "
                   "y=\"{5:.2f}\">{6}</text>\n",
                   left + pw + 12, ly, left + pw + 36, s.color, left + pw + 42, ly + 4,
                   s.label);
  }
  svg += "</svg>\n";
  return svg;
}

void export_plot(const Trace& trace, const std::filesystem::path& path) {
  write_file(path, render_plot(trace));
}

}  // namespace epidrive
