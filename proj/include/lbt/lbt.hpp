/*
   Copyright 2026 The lbtopt Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "lbt/analysis.hpp"
#include "lbt/channel.hpp"
#include "lbt/config.hpp"
#include "lbt/csv.hpp"
#include "lbt/error.hpp"
#include "lbt/experiments.hpp"
#include "lbt/params.hpp"
#include "lbt/policy.hpp"
#include "lbt/quadrature.hpp"
#include "lbt/rng.hpp"
#include "lbt/sim.hpp"
#include "lbt/solver.hpp"
#include "lbt/special.hpp"
