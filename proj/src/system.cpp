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

#include "emachine/system.hpp"

#include <algorithm>

namespace emachine {

System::System(SystemConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed), rng_(seed), brain_(config_.brain) {
  if (config_.world) world_.emplace(*config_.world);
  if (config_.brain.as && !config_.world) throw ConfigError("AS requires a world");
  if (config_.brain.am_layout.sensory_from_ns && !config_.world) {
    throw ConfigError("NS needs a world to feed AM");
  }
}

void System::attach(CycleObserver* observer) { observers_.push_back(observer); }

void System::detach(CycleObserver* observer) {
  observers_.erase(std::remove(observers_.begin(), observers_.end(), observer), observers_.end());
}

CycleRecord System::cycle(BrainInputs inputs) {
  if (world_) {
    if (!inputs.addr) throw ConfigError("the world needs an address every cycle");
    if (!inputs.din) inputs.din = world_->alphabets().data->epsilon();
    GramState next = *world_;
    inputs.dout = gram_apply(next, *inputs.addr, *inputs.din);
    // Commit the world only once the brain accepted the cycle.
    CycleRecord record{nu_, inputs, brain_.selectors(), brain_.cycle(inputs, rng_)};
    *world_ = std::move(next);
    ++nu_;
    for (auto* o : observers_) o->on_cycle(*this, record);
    return record;
  }
  CycleRecord record{nu_, inputs, brain_.selectors(), brain_.cycle(inputs, rng_)};
  ++nu_;
  for (auto* o : observers_) o->on_cycle(*this, record);
  return record;
}

void System::reset() {
  brain_.reset();
  for (auto* o : observers_) o->on_reset(*this);
}

}  // namespace emachine
