#include "latticeqfi/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "latticeqfi/errors.hpp"
#include "latticeqfi/scan.hpp"

namespace latticeqfi {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "model",  "N",     "M",          "J",        "gamma",         "U",
    "V0",     "omega", "theta",      "phi0",     "K",             "Gamma",
    "initial_state",   "method",     "co_vary_omega", "times",    "U_axis",
    "M_axis", "steps_per_period",    "dgamma",   "T_end_per_mode", "time_points",
    "output_dir"};

[[noreturn]] void fail(std::string_view origin, const std::string& key, const std::string& what) {
  throw ConfigError(std::string(origin) + ": key '" + key + "': " + what);
}

double number(const json& v, std::string_view origin, const std::string& key) {
  if (!v.is_number()) fail(origin, key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(origin, key, "must be finite");
  return x;
}

long long integer(const json& v, std::string_view origin, const std::string& key) {
  if (!v.is_number_integer()) fail(origin, key, "expected an integer");
  return v.get<long long>();
}

std::vector<double> axis(const json& v, std::string_view origin, const std::string& key) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const json& x : v) out.push_back(number(x, origin, key));
  } else if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (k != "start" && k != "stop" && k != "step" && k != "points" && k != "end") {
        fail(origin, key + "." + k, "unknown key");
      }
    }
    auto points = [&]() -> std::size_t {
      const long long n = integer(v.at("points"), origin, key + ".points");
      if (n < 1) fail(origin, key + ".points", "must be >= 1");
      return static_cast<std::size_t>(n);
    };
    try {
      if (v.contains("end")) {
        if (v.contains("start") || v.contains("stop") || v.contains("step")) {
          fail(origin, key, "'end' cannot be combined with start/stop/step");
        }
        const double end = number(v.at("end"), origin, key + ".end");
        if (!(end > 0.0)) fail(origin, key + ".end", "must be positive");
        const std::size_t n = points();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = end * static_cast<double>(i + 1) / static_cast<double>(n);
        }
      } else {
        const double a = number(v.at("start"), origin, key + ".start");
        const double b = number(v.at("stop"), origin, key + ".stop");
        if (v.contains("step") == v.contains("points")) {
          fail(origin, key, "give exactly one of 'step' and 'points'");
        }
        std::size_t n = 0;
        if (v.contains("step")) {
          const double h = number(v.at("step"), origin, key + ".step");
          if (!(h > 0.0) || b < a) fail(origin, key + ".step", "needs step > 0 and stop >= start");
          n = static_cast<std::size_t>(std::llround((b - a) / h)) + 1;
        } else {
          n = points();
        }
        out = linear_axis(a, b, n);
      }
    } catch (const json::out_of_range& e) {
      fail(origin, key, std::string("missing field: ") + e.what());
    }
  } else {
    fail(origin, key, "expected an array or an axis object");
  }
  if (out.empty()) fail(origin, key, "axis is empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) fail(origin, key, "axis must be strictly increasing");
  }
  return out;
}

json to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    // nlohmann reports "line L, column C" in the message.
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(std::string(origin) + ": top level must be an object");
  for (const auto& [k, v] : doc.items()) {
    if (!kKeys.count(k)) fail(origin, k, "unknown key");
  }

  RunConfig c;
  ModelParams& p = c.params;
  auto real = [&](const char* key, double& dst) {
    if (doc.contains(key)) dst = number(doc[key], origin, key);
  };

  if (doc.contains("model")) {
    if (!doc["model"].is_string()) fail(origin, "model", "expected a string");
    try {
      c.kind = parse_model_kind(doc["model"].get<std::string>());
    } catch (const DomainError& e) {
      fail(origin, "model", e.what());
    }
  }
  if (doc.contains("N")) {
    const long long n = integer(doc["N"], origin, "N");
    if (n < 1 || n > 1000) fail(origin, "N", "must be in [1, 1000]");
    p.N = static_cast<int>(n);
  }
  if (doc.contains("M")) {
    const long long m = integer(doc["M"], origin, "M");
    if (m < 2 || m > 100000) fail(origin, "M", "must be in [2, 100000]");
    p.M = static_cast<int>(m);
  }
  real("J", p.J);
  real("gamma", p.gamma);
  real("U", p.U);
  real("V0", p.V0);
  p.omega = p.gamma;
  real("omega", p.omega);
  real("theta", p.theta);
  real("phi0", p.phi0);
  real("Gamma", p.Gamma);
  if (doc.contains("K")) {
    const json& k = doc["K"];
    if (k.is_string()) {
      if (k.get<std::string>() != "auto") fail(origin, "K", "expected a number or \"auto\"");
    } else {
      p.K = number(k, origin, "K");
    }
  }
  if (doc.contains("co_vary_omega")) {
    if (!doc["co_vary_omega"].is_boolean()) fail(origin, "co_vary_omega", "expected a boolean");
    p.co_vary_omega = doc["co_vary_omega"].get<bool>();
  }

  if (doc.contains("initial_state")) {
    const json& s = doc["initial_state"];
    if (s.is_string()) {
      const std::string name = s.get<std::string>();
      if (name == "fock") {
        c.initial.kind = InitialStateSpec::Kind::fock;
      } else if (name == "noon") {
        c.initial.kind = InitialStateSpec::Kind::noon;
      } else {
        fail(origin, "initial_state", "expected \"fock\", \"noon\" or an occupation list");
      }
    } else if (s.is_array()) {
      c.initial.kind = InitialStateSpec::Kind::occupations;
      for (const json& x : s) {
        const long long n = integer(x, origin, "initial_state");
        if (n < 0) fail(origin, "initial_state", "occupations must be >= 0");
        c.initial.occupations.push_back(static_cast<int>(n));
      }
    } else {
      fail(origin, "initial_state", "expected a string or an occupation list");
    }
  }
  if (doc.contains("method")) {
    if (!doc["method"].is_string()) fail(origin, "method", "expected a string");
    try {
      c.method = parse_qfi_method(doc["method"].get<std::string>());
    } catch (const DomainError& e) {
      fail(origin, "method", e.what());
    }
  }

  if (doc.contains("steps_per_period")) {
    const long long s = integer(doc["steps_per_period"], origin, "steps_per_period");
    if (s < kMinStepsPerPeriod) {
      fail(origin, "steps_per_period", "must be >= " + std::to_string(kMinStepsPerPeriod));
    }
    c.steps_per_period = static_cast<int>(s);
  }
  if (doc.contains("dgamma")) {
    const double d = number(doc["dgamma"], origin, "dgamma");
    if (!(d > 0.0)) fail(origin, "dgamma", "must be positive");
    c.dgamma = d;
  }
  if (doc.contains("T_end_per_mode")) {
    c.T_end_per_mode = number(doc["T_end_per_mode"], origin, "T_end_per_mode");
    if (!(c.T_end_per_mode > 0.0)) fail(origin, "T_end_per_mode", "must be positive");
  }
  if (doc.contains("time_points")) {
    const long long n = integer(doc["time_points"], origin, "time_points");
    if (n < 1) fail(origin, "time_points", "must be >= 1");
    c.time_points = static_cast<std::size_t>(n);
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail(origin, "output_dir", "expected a string");
    c.output_dir = doc["output_dir"].get<std::string>();
  }

  c.times = doc.contains("times")
                ? axis(doc["times"], origin, "times")
                : default_time_axis(p.M, c.T_end_per_mode * p.M, c.time_points);
  for (double t : c.times) {
    if (t < 0.0) fail(origin, "times", "times must be >= 0");
  }
  c.U_axis = doc.contains("U_axis") ? axis(doc["U_axis"], origin, "U_axis")
                                    : linear_axis(0.0, 4.0, 101);
  if (doc.contains("M_axis")) {
    if (!doc["M_axis"].is_array() || doc["M_axis"].empty()) {
      fail(origin, "M_axis", "expected a non-empty integer array");
    }
    for (const json& x : doc["M_axis"]) {
      const long long m = integer(x, origin, "M_axis");
      if (m < 2 || m > 100000) fail(origin, "M_axis", "entries must be in [2, 100000]");
      c.M_axis.push_back(static_cast<int>(m));
    }
  } else {
    for (int m = 2; m <= p.M; ++m) c.M_axis.push_back(m);
  }

  json canon;
  canon["model"] = std::string(to_string(c.kind));
  canon["N"] = p.N;
  canon["M"] = p.M;
  canon["J"] = p.J;
  canon["gamma"] = p.gamma;
  canon["U"] = p.U;
  canon["V0"] = p.V0;
  canon["omega"] = p.omega;
  canon["theta"] = p.theta;
  canon["phi0"] = p.phi0;
  canon["K"] = p.K ? json(*p.K) : json("auto");
  canon["Gamma"] = p.Gamma;
  canon["co_vary_omega"] = p.co_vary_omega;
  switch (c.initial.kind) {
    case InitialStateSpec::Kind::fock: canon["initial_state"] = "fock"; break;
    case InitialStateSpec::Kind::noon: canon["initial_state"] = "noon"; break;
    case InitialStateSpec::Kind::occupations:
      canon["initial_state"] = c.initial.occupations;
      break;
  }
  canon["method"] = std::string(to_string(c.method));
  canon["times"] = to_json(c.times);
  canon["U_axis"] = to_json(c.U_axis);
  canon["M_axis"] = c.M_axis;
  canon["steps_per_period"] = c.steps_per_period;
  canon["dgamma"] = c.dgamma ? json(*c.dgamma) : json("auto");
  canon["T_end_per_mode"] = c.T_end_per_mode;
  canon["time_points"] = c.time_points;
  c.canonical = canon.dump();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace latticeqfi
