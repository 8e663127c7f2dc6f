/*
 * Copyright 2026 The linchk Authors
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

#include <string>
#include <vector>

#include "linchk/client.hpp"
#include "linchk/lts.hpp"
#include "linchk/modelir.hpp"

namespace linchk {

/**
 * \brief Object system of `model` under the bounded client `config`.
 *
 * Breadth-first; state ids follow discovery order, threads are expanded in
 * increasing order, then methods and argument tuples in declaration order.
 * Throws ModelError on a stuck location or a faulting step and
 * ResourceLimitError when a ceiling is exceeded.
 */
Lts explore(const ObjectModel& model, const ClientConfig& config);

/// explore(make_spec(model), config).
Lts explore_spec(const ObjectModel& model, const ClientConfig& config);

/// Stuck locations and out-of-domain steps reachable under `config`.
/// Empty means the model is clean at this bound.
std::vector<std::string> validate(const ObjectModel& model, const ClientConfig& config);

}  // namespace linchk
