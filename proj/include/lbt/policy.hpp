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

namespace lbt {

/// Rule applied after each ECCA phase: transmit now or keep listening.
struct StoppingPolicy {
    enum class Kind { threshold, always_transmit };

    Kind kind = Kind::threshold;
    double cutoff_bpshz = 0.0;  // transmit iff probed R >= cutoff

    static StoppingPolicy threshold(double cutoff) {
        if (!(cutoff >= 0.0)) throw std::invalid_argument("threshold cutoff must be nonnegative");
        return {Kind::threshold, cutoff};
    }

    static StoppingPolicy always_transmit() { return {Kind::always_transmit, 0.0}; }
};

}  // namespace lbt
