// Copyright 2026 The emachine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emachine/report.hpp"

#include <sstream>

#include "emachine/script.hpp"

namespace emachine {

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["protocol"] = report.protocol;
  j["pass"] = report.pass;
  j["nu0"] = report.nu0;
  j["nu1"] = report.nu1;
  j["nu2"] = report.nu2;
  j["probes"] = report.probes;
  j["mismatches"] = report.mismatches;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.metrics) metrics[name] = value;
  j["metrics"] = std::move(metrics);
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    records.push_back({{"nu", r.nu}, {"input", r.input}, {"expected", r.expected},
                       {"actual", r.actual}, {"ok", r.expected == r.actual}});
  }
  j["records"] = std::move(records);
  return j;
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport report;
  report.protocol = j.at("protocol").get<std::string>();
  report.nu0 = j.at("nu0").get<std::uint64_t>();
  report.nu1 = j.at("nu1").get<std::uint64_t>();
  report.nu2 = j.at("nu2").get<std::uint64_t>();
  for (const auto& r : j.at("records")) {
    report.add_probe({r.at("nu").get<std::uint64_t>(), r.at("input").get<std::string>(),
                      r.at("expected").get<std::string>(), r.at("actual").get<std::string>()},
                     r.at("ok").get<bool>());
  }
  // Metrics come back in key order; nlohmann::json sorts object keys.
  for (const auto& [name, value] : j.at("metrics").items()) {
    report.set_metric(name, value.get<double>());
  }
  return report;
}

std::string report_summary(const ExperimentReport& report) {
  std::ostringstream os;
  os << report.protocol << ": " << (report.pass ? "PASS" : "FAIL") << " probes=" << report.probes
     << " mismatches=" << report.mismatches;
  for (const auto& [name, value] : report.metrics) os << ' ' << name << '=' << format_real(value);
  return os.str();
}

}  // namespace emachine
