#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "latticeqfi/config.hpp"
#include "latticeqfi/errors.hpp"
#include "latticeqfi/output.hpp"

using namespace latticeqfi;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config("{}");
  CHECK(c.kind == ModelKind::effective);
  CHECK(c.params.N == 1);
  CHECK(c.params.M == 2);
  CHECK(c.params.J == 1.0);
  CHECK(c.params.gamma == 33.0);
  CHECK(c.params.omega == 33.0);
  CHECK(c.params.V0 == 30.4);
  CHECK(c.params.theta == doctest::Approx(3.14159265358979));
  CHECK_FALSE(c.params.K.has_value());
  CHECK(c.method == QfiMethod::generator);
  CHECK(c.initial.kind == InitialStateSpec::Kind::fock);
  CHECK(c.times.size() == 400);
  CHECK(c.times.back() == doctest::Approx(3.0));
  CHECK(c.U_axis.size() == 101);
  CHECK(c.U_axis[48] == doctest::Approx(1.92));
  CHECK(c.M_axis == std::vector<int>{2});
  CHECK(c.output_dir == ".");
}

TEST_CASE("explicit values") {
  const RunConfig c = parse_config(R"({
    "model": "dbh", "N": 2, "M": 4, "J": 0.5, "gamma": 20, "U": 1.5, "V0": 10,
    "theta": 0, "phi0": 0.3, "K": 0.25, "Gamma": 1.0, "initial_state": [1, 0, 1, 0],
    "method": "finite-difference", "co_vary_omega": true, "times": [1, 2, 3],
    "U_axis": {"start": 0, "stop": 1, "step": 0.25}, "M_axis": [2, 4],
    "steps_per_period": 80, "dgamma": 1e-6, "output_dir": "out"})");
  CHECK(c.kind == ModelKind::dbh);
  CHECK(c.params.omega == 20.0);
  CHECK(*c.params.K == 0.25);
  CHECK(c.params.co_vary_omega);
  CHECK(c.initial.kind == InitialStateSpec::Kind::occupations);
  CHECK(c.initial.occupations == Occupation{1, 0, 1, 0});
  CHECK(c.method == QfiMethod::finite_difference);
  CHECK(c.times == std::vector<double>{1, 2, 3});
  CHECK(c.U_axis == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  CHECK(c.M_axis == std::vector<int>{2, 4});
  CHECK(c.steps_per_period == 80);
  CHECK(*c.dgamma == 1e-6);
  CHECK(c.output_dir == "out");

  const RunConfig w = parse_config(R"({"gamma": 20, "omega": 25, "K": "auto"})");
  CHECK(w.params.omega == 25.0);
  CHECK_FALSE(w.params.K.has_value());
}

TEST_CASE("axis forms") {
  CHECK(parse_config(R"({"times": {"start": 1, "stop": 2, "points": 3}})").times ==
        std::vector<double>{1.0, 1.5, 2.0});
  const RunConfig e = parse_config(R"({"times": {"end": 80, "points": 400}})");
  CHECK(e.times.size() == 400);
  CHECK(e.times.front() == doctest::Approx(0.2));
  CHECK(e.times.back() == 80.0);
  CHECK(parse_config(R"({"U_axis": [0]})").U_axis == std::vector<double>{0.0});
  const RunConfig d = parse_config(R"({"M": 4, "T_end_per_mode": 2, "time_points": 10})");
  CHECK(d.times.size() == 10);
  CHECK(d.times.back() == doctest::Approx(8.0));
}

TEST_CASE("strict keys and type errors name the key") {
  CHECK(message_of(R"({"Uu": 1})").find("'Uu'") != std::string::npos);
  CHECK(message_of(R"({"N": 2.5})").find("'N'") != std::string::npos);
  CHECK(message_of(R"({"N": 0})").find("'N'") != std::string::npos);
  CHECK(message_of(R"({"M": 1})").find("'M'") != std::string::npos);
  CHECK(message_of(R"({"J": "one"})").find("'J'") != std::string::npos);
  CHECK(message_of(R"({"K": "zero"})").find("'K'") != std::string::npos);
  CHECK(message_of(R"({"model": "xyz"})").find("'model'") != std::string::npos);
  CHECK(message_of(R"({"method": "sld"})").find("'method'") != std::string::npos);
  CHECK(message_of(R"({"initial_state": "vacuum"})").find("'initial_state'") != std::string::npos);
  CHECK(message_of(R"({"initial_state": [1, -1, 0]})").find("'initial_state'") !=
        std::string::npos);
  CHECK(message_of(R"({"co_vary_omega": 1})").find("'co_vary_omega'") != std::string::npos);
  CHECK(message_of(R"({"times": [2, 1]})").find("'times'") != std::string::npos);
  CHECK(message_of(R"({"times": [-1, 1]})").find("'times'") != std::string::npos);
  CHECK(message_of(R"({"times": []})").find("'times'") != std::string::npos);
  CHECK(message_of(R"({"times": {"start": 0, "stop": 1}})").find("'times'") != std::string::npos);
  CHECK(message_of(R"({"times": {"end": 1, "points": 2, "pts": 3}})").find("'times.pts'") !=
        std::string::npos);
  CHECK(message_of(R"({"U_axis": {"start": 0, "stop": 1, "step": 0.5, "points": 3}})")
            .find("'U_axis'") != std::string::npos);
  CHECK(message_of(R"({"M_axis": [1, 2]})").find("'M_axis'") != std::string::npos);
  CHECK(message_of(R"({"steps_per_period": 5})").find("'steps_per_period'") != std::string::npos);
  CHECK(message_of(R"({"dgamma": 0})").find("'dgamma'") != std::string::npos);
  CHECK(message_of(R"([1, 2])").find("top level") != std::string::npos);
  CHECK(message_of(R"({"gamma": 1e999})").find("cfg.json") == 0);
}

TEST_CASE("syntax errors report line and column") {
  const std::string msg = message_of("{\n  \"N\": 3,\n  \"M\": ,\n}");
  CHECK(msg.find("cfg.json") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("canonical form and hash") {
  const RunConfig a = parse_config(R"({"N": 2, "U": 1})");
  const RunConfig b = parse_config("{ \"U\": 1.0,\n \"N\": 2, \"output_dir\": \"elsewhere\" }");
  CHECK(a.canonical == b.canonical);
  CHECK(content_hash(a.canonical) == content_hash(b.canonical));
  const RunConfig c = parse_config(R"({"N": 2, "U": 1.01})");
  CHECK(a.canonical != c.canonical);
  CHECK(content_hash(a.canonical) != content_hash(c.canonical));
  CHECK(parse_config(R"({"K": "auto"})").canonical == parse_config("{}").canonical);
}

TEST_CASE("loading from a file") {
  const auto path = std::filesystem::temp_directory_path() / "latticeqfi_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"N": 2, "M": 2})";
  }
  CHECK(load_config(path.string()).params.N == 2);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
    CHECK(format_number(2.5) == "2.5");
    std::setlocale(LC_NUMERIC, "C");
  }
}

TEST_CASE("hashes and csv rendering") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(content_hash("a") == "fnv1a64:af63dc4c8601ec8c");

  CsvTable t;
  t.columns = {"x", "y"};
  t.add({"1", "2"});
  t.add({"3", "4"});
  CHECK(t.render("# pre\n") == "# pre\nx,y\n1,2\n3,4\n");
  CHECK_THROWS(t.add({"5"}));

  const std::string h = provenance_header("qfi", "{}");
  CHECK(h.find("# latticeqfi ") == 0);
  CHECK(h.find("# command: qfi\n") != std::string::npos);
  CHECK(h.find(content_hash("{}")) != std::string::npos);
}

TEST_CASE("atomic writes replace the target") {
  const auto path = std::filesystem::temp_directory_path() / "latticeqfi_atomic.txt";
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}
