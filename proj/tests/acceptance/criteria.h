/*
 * Copyright 2026 The FedAudit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDAUDIT_TESTS_ACCEPTANCE_CRITERIA_H_
#define FEDAUDIT_TESTS_ACCEPTANCE_CRITERIA_H_

#include <string>

namespace fedaudit::acceptance {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kFail;
  std::string detail;
};

struct Context {
  // Scratch and artefact directory for this invocation.
  std::string work_dir;
  size_t jobs = 1;
  // Optional experiment config for the real-data reproduction.
  std::string reproduction_config;
};

Outcome GradientOracle(const Context& ctx);
Outcome FedAvgExactness(const Context& ctx);
Outcome DpMechanics(const Context& ctx);
Outcome ApOracle(const Context& ctx);
Outcome DegenerateFederation(const Context& ctx);
Outcome SplitRoundTrip(const Context& ctx);
Outcome InjectionIdentifiability(const Context& ctx);
Outcome Determinism(const Context& ctx);
Outcome SyntheticEndToEnd(const Context& ctx);
Outcome DpRobustness(const Context& ctx);
Outcome CutLayerTrend(const Context& ctx);
Outcome FullReproduction(const Context& ctx);

}  // namespace fedaudit::acceptance

#endif  // FEDAUDIT_TESTS_ACCEPTANCE_CRITERIA_H_
