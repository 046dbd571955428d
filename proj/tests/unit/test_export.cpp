#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "epidrive/error.hpp"
#include "epidrive/export.hpp"
#include "epidrive/scenario.hpp"

using namespace epidrive;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trace idle_trace() {
  return run(load_scenario(std::filesystem::path(EPIDRIVE_DATA_DIR) / "scenarios/idle.yaml"));
}

}  // namespace

TEST_SUITE("export") {

TEST_CASE("empty trace gives a header-only CSV") {
  Trace t;
  t.scenario = "empty";
  t.dt = 0.001;
  const std::string csv = format_csv(t);
  CHECK(csv.rfind("# ", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("CSV schema") {
  const Trace t = idle_trace();
  const std::string csv = format_csv(t);
  std::istringstream in(csv);
  std::string comment, header, first;
  std::getline(in, comment);
  std::getline(in, header);
  std::getline(in, first);
  CHECK(comment.find("precision=fixed,6") != std::string::npos);
  CHECK(header.rfind("t[s],accel[1],brake[1],reverse[bool]", 0) == 0);
  for (const char* col : {"v_eng[V]", "v_mot[V]", "omega2[rad/s]", "omega5[rad/s]",
                          "omega_arm[rad/s]", "flc_eng[V]", "flc_mot[V]", "no_fire[bool]"}) {
    CHECK(header.find(col) != std::string::npos);
  }
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(first.begin(), first.end(), ','));
  CHECK(first.rfind("0.001000,", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) ==
        t.samples.size() + 2);
  CHECK(csv.find("-0.000000") == std::string::npos);
}

TEST_CASE("re-export is byte-identical") {
  const Trace t = idle_trace();
  const auto dir = std::filesystem::temp_directory_path();
  export_csv(t, dir / "epidrive_a.csv");
  export_csv(t, dir / "epidrive_b.csv");
  CHECK(slurp(dir / "epidrive_a.csv") == slurp(dir / "epidrive_b.csv"));
  std::filesystem::remove(dir / "epidrive_a.csv");
  std::filesystem::remove(dir / "epidrive_b.csv");
}

TEST_CASE("unwritable path is an I/O error naming it") {
  try {
    export_csv(Trace{}, "/nonexistent/dir/out.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("SVG plot") {
  const std::string svg = render_plot(idle_trace());
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos;
       p = svg.find("<polyline", p + 1)) {
    ++polylines;
  }
  CHECK(polylines == 3);
  for (const char* label : {"omega2", "omega5", "omega_arm"}) {
    CHECK(svg.find(label) != std::string::npos);
  }
}

TEST_CASE("single-sample trace still renders") {
  Trace t;
  t.scenario = "one";
  t.dt = 0.1;
  t.samples.push_back(TraceSample{});
  t.samples.back().time = 0.1;
  const std::string svg = render_plot(t);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("empty trace cannot be plotted") {
  CHECK_THROWS_AS(render_plot(Trace{}), Error);
}

}  // TEST_SUITE
