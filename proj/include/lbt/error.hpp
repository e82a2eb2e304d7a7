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

#include <stdexcept>
#include <string>
#include <vector>

namespace lbt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input is syntactically fine but mathematically degenerate (tau = 1,
/// zeta = 0, threshold above the channel support, ...).
struct DegenerateInput : Error {
    using Error::Error;
};

/// Adaptive integration could not reach the requested tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

/// Root bracketing failed; only happens with a broken channel model.
struct BracketFailure : Error {
    using Error::Error;
};

/// Iteration budget exhausted. Carries the iterate trace for diagnosis.
struct MaxIterExceeded : Error {
    std::vector<double> trace;
    MaxIterExceeded(const std::string& msg, std::vector<double> t)
        : Error(msg), trace(std::move(t)) {}
};

/// Internal consistency check failed after a solve.
struct SolverFailure : Error {
    using Error::Error;
};

}  // namespace lbt
