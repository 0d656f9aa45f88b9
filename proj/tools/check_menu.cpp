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


// Build-time gate on the shipped menu: every scoop pose must put the spoon
// tip on its bowl, and the solver must find the bowl again from the
// approach waypoint. Exits nonzero on the first failure.

#include <cstdio>
#include <exception>

#include "feedsim/ik.hpp"
#include "feedsim/json_io.hpp"

int main(int argc, char** argv) {
  using namespace feedsim;
  if (argc != 3) {
    std::fprintf(stderr, "usage: check_menu ROBOT_JSON MENU_JSON\n");
    return 2;
  }
  try {
    const RobotModel model = load_robot_model(argv[1]);
    const Menu menu = load_menu(argv[2], model);
    int failures = 0;
    for (const FoodSlot& slot : menu.slots) {
      if (!slot.bowl) {
        std::fprintf(stderr, "%s: no bowl position recorded\n", slot.name.c_str());
        ++failures;
        continue;
      }
      const Vec3 tip = forward_kinematics(model, slot.scoop_q).position;
      const double off = (tip - *slot.bowl).norm();
      IKRequest req;
      req.target = *slot.bowl;
      req.seed = slot.approach_q;
      const IKResult ik = solve_ik(model, req);
      const bool ok = off <= req.tol && ik.reachable && ik.converged;
      std::printf("%-8s bowl (%.3f, %.3f, %.3f)  scoop tip off by %.2e in  ik %s in %d iterations\n",
                  slot.name.c_str(), slot.bowl->x(), slot.bowl->y(), slot.bowl->z(), off,
                  ik.converged ? "converged" : "FAILED", ik.iterations);
      if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
}
