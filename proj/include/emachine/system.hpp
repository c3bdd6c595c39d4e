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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "emachine/brain.hpp"
#include "emachine/gram.hpp"

namespace emachine {

/// A (Robot, World) configuration: declared alphabets, an optional GRAM
/// world, and the brain.
struct SystemConfig {
  std::vector<AlphabetRef> alphabets;  ///< declaration order, for printing
  std::optional<GramAlphabets> world;
  BrainConfig brain;
};

/// One completed global cycle as seen by observers.
struct CycleRecord {
  std::uint64_t nu = 0;
  BrainInputs inputs;  ///< dout filled in from the world when attached
  Selectors selectors;
  BrainOutputs outputs;
};

class System;

/// Receives every state change of a System in order.
class CycleObserver {
 public:
  virtual ~CycleObserver() = default;
  virtual void on_reset(const System& system) = 0;
  virtual void on_cycle(const System& system, const CycleRecord& record) = 0;
};

/// World, brain, session generator and cycle counter.
class System {
 public:
  System(SystemConfig config, std::uint64_t seed);

  const SystemConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t nu() const noexcept { return nu_; }

  const std::optional<GramState>& world() const noexcept { return world_; }
  const BrainAssembly& brain() const noexcept { return brain_; }
  const Selectors& selectors() const noexcept { return brain_.selectors(); }
  void set_selectors(const Selectors& sel) noexcept { brain_.set_selectors(sel); }

  /// Observers are not owned and must outlive the System or be detached.
  void attach(CycleObserver* observer);
  void detach(CycleObserver* observer);

  /// One global cycle: the world answers (addr, din), then the brain runs.
  /// dout in the inputs is ignored when a world is attached.
  CycleRecord cycle(BrainInputs inputs);

  /// The RESET button: brain E-states and delay register cleared.
  void reset();

 private:
  SystemConfig config_;
  std::uint64_t seed_;
  std::uint64_t nu_ = 0;
  ChoiceRng rng_;
  std::optional<GramState> world_;
  BrainAssembly brain_;
  std::vector<CycleObserver*> observers_;
};

}  // namespace emachine
