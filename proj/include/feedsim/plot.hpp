// Copyright 2026 The feedsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Displacement-vs-time plots of a sampled trajectory as standalone SVG.

#pragma once

#include <iosfwd>
#include <span>
#include <string_view>

#include "feedsim/trajectory.hpp"

namespace feedsim {

// Three stacked panels: t vs x, t vs y and t vs z of the spoon tip.
// Throws std::invalid_argument for an empty point list.
void write_displacement_svg(std::ostream& out, std::span<const TrajectoryPoint> points,
                            std::string_view title);

}  // namespace feedsim
