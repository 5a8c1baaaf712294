// Copyright 2026 The hywf Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "hywf/engine.hpp"

namespace hywf::engine {

/// load_trajectory, bipartite_distances, lebm, write_cv, noop.
void register_builtin_actions(Engine &engine);
/// circuit, swap_distance, vqe_lebm.
void register_builtin_routines(Engine &engine);

} // namespace hywf::engine
