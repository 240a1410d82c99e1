#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "bmatch/dynamics.hpp"
#include "bmatch/generators.hpp"
#include "bmatch/io.hpp"
#include "bmatch/preferences.hpp"
#include "oracles.hpp"

using namespace bmatch;

TEST_CASE("marks files round-trip exactly") {
  const auto m = random_symmetric_marks(50, 123);
  std::stringstream buffer;
  write_marks(buffer, m);
  CHECK(read_marks(buffer) == m);

  const auto hi = test::matrix_m1();
  std::stringstream buffer2;
  write_marks(buffer2, hi);
  const auto back = read_marks(buffer2);
  CHECK(back == hi);
  CHECK(back.orientation() == Orientation::kHigherIsBetter);
}

TEST_CASE("marks parsing reports the offending line") {
  std::istringstream missing_header("1 2\n3 4\n");
  CHECK_THROWS_AS(read_marks(missing_header), ParseError);

  std::istringstream short_row("n=2 orientation=lo\ninf\n1 inf\n");
  try {
    read_marks(short_row);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream bad_value("n=2 orientation=lo\ninf x\n1 inf\n");
  CHECK_THROWS_AS(read_marks(bad_value), ParseError);

  std::istringstream bad_orientation("n=2 orientation=down\ninf 1\n1 inf\n");
  CHECK_THROWS_AS(read_marks(bad_orientation), ParseError);
}

TEST_CASE("instance files round-trip and match the documented format") {
  const auto L = PreferenceInstance::from_lists(test::four_peer_lists());
  std::stringstream buffer;
  write_instance(buffer, L);
  CHECK(buffer.str() == "0: 1 2 3\n1: 0 2 3\n2: 3 0 1\n3: 2 0 1\n");
  CHECK(read_instance(buffer) == L);

  const auto empty = PreferenceInstance::from_lists({{}, {}});
  std::stringstream buffer2;
  write_instance(buffer2, empty);
  CHECK(buffer2.str() == "0:\n1:\n");
  CHECK(read_instance(buffer2) == empty);
}

TEST_CASE("instance parsing rejects malformed files") {
  std::istringstream no_colon("0 1 2\n");
  CHECK_THROWS_AS(read_instance(no_colon), ParseError);

  std::istringstream duplicate_peer("0: 1\n0: 1\n");
  CHECK_THROWS_AS(read_instance(duplicate_peer), ParseError);

  std::istringstream asymmetric("0: 1\n1:\n");
  CHECK_THROWS_AS(read_instance(asymmetric), StructuralError);
}

TEST_CASE("configuration files are exactly one sorted edge per line") {
  const Configuration c({{3, 4}, {1, 2}});
  std::stringstream buffer;
  write_configuration(buffer, c);
  CHECK(buffer.str() == "1 2\n3 4\n");
  CHECK(read_configuration(buffer) == c);

  std::istringstream bad("1 2\n3\n");
  CHECK_THROWS_AS(read_configuration(bad), ParseError);
  std::istringstream loop("2 2\n");
  CHECK_THROWS_AS(read_configuration(loop), ParseError);
}

TEST_CASE("trace export is one JSON record per line") {
  const auto L = PreferenceInstance::from_lists(test::k4_global_lists());
  const auto result = run_dynamics(L, QuotaVector::uniform(4, 1), Configuration(),
                                   ActivationPolicy::uniform(8), 0);
  std::stringstream buffer;
  write_trace(buffer, result);

  std::string line;
  std::size_t steps = 0;
  bool saw_meta = false, saw_final = false;
  while (std::getline(buffer, line)) {
    const auto record = nlohmann::json::parse(line);
    const std::string kind = record.at("record");
    if (kind == "meta") {
      saw_meta = true;
      CHECK(record.at("seed") == 8);
      CHECK(record.at("converged") == true);
    } else if (kind == "step") {
      ++steps;
    } else {
      CHECK(kind == "final");
      saw_final = true;
    }
  }
  CHECK(saw_meta);
  CHECK(saw_final);
  CHECK(steps == result.trace.size());
}

TEST_CASE("dot export lists vertices and edges") {
  const std::string dot = to_dot(Configuration({{0, 2}}), 3);
  CHECK(dot.find("graph") != std::string::npos);
  CHECK(dot.find("0 -- 2;") != std::string::npos);
  CHECK(dot.find("1;") != std::string::npos);
}

TEST_CASE("file helpers raise IoError for missing paths") {
  CHECK_THROWS_AS(read_marks_file("/nonexistent/marks.txt"), IoError);
  CHECK_THROWS_AS(write_marks_file("/nonexistent/dir/marks.txt",
                                   random_symmetric_marks(3, 1)),
                  IoError);
}

TEST_CASE("format_double round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 12345.6789, 1e-300, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
