/*
 * Copyright 2026 The rewa-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Machine-readable reports: one JSON document per run (keys sorted, so output is
// byte-stable) and a flat CSV for plotting.

#include <string>

#include <json.hpp>

#include "rewa/harness/config.hpp"
#include "rewa/harness/experiments.hpp"

namespace rewa::harness {

inline constexpr const char* kReportSchema = "rewa-report/1";

[[nodiscard]] nlohmann::json config_json(const ExperimentConfig& config);

[[nodiscard]] nlohmann::json to_json(const RankingReport& report);
[[nodiscard]] nlohmann::json to_json(const GapSweepReport& report);
[[nodiscard]] nlohmann::json to_json(const EquivalenceReport& report);
[[nodiscard]] nlohmann::json to_json(const FailureReport& report);
[[nodiscard]] nlohmann::json to_json(const HybridReport& report);
[[nodiscard]] nlohmann::json to_json(const SelftestReport& report);

// N,n,success_rate
[[nodiscard]] std::string to_csv(const RankingReport& report);
// gap,N,n,success_rate
[[nodiscard]] std::string to_csv(const FailureReport& report);
// channel,N,n,success_rate
[[nodiscard]] std::string to_csv(const HybridReport& report);
// method,metric,value
[[nodiscard]] std::string to_csv(const EquivalenceReport& report);
// check,passed
[[nodiscard]] std::string to_csv(const SelftestReport& report);

// Wraps a report body with the schema tag, experiment name and effective config.
[[nodiscard]] nlohmann::json envelope(const std::string& experiment, const ExperimentConfig& config,
                                      nlohmann::json body);

[[nodiscard]] std::string format_number(double v);

}  // namespace rewa::harness
