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

#include <optional>
#include <span>
#include <vector>

#include "emachine/pem.hpp"

namespace emachine {

/// Multiplexer NS: 1 selects the eye (dout), 0 the imagined output of AS.
Symbol ns_mux(bool sel, const Symbol& dout, const Symbol& as_y);

/// Multiplexer NM, componentwise: 1 selects the teacher, 0 the unit AM.
/// Throws ConfigError when widths differ.
std::vector<Symbol> nm_mux(bool sel, std::span<const Symbol> teacher_y,
                           std::span<const Symbol> am_y);

/// How the input vector of AM is assembled, in slot order:
/// [auditory] sensory... [feedback].
struct AmLayout {
  AlphabetRef aud;                       ///< null: no auditory slot
  std::vector<AlphabetRef> sensory;      ///< sensory slots
  bool sensory_from_ns = false;          ///< single sensory slot fed by NS.y
  std::optional<std::size_t> feedback;   ///< NM component fed back (0-based)

  std::size_t width() const noexcept {
    return (aud ? 1 : 0) + sensory.size() + (feedback ? 1 : 0);
  }
};

struct BrainConfig {
  std::optional<PemParams> as;  ///< inputs (addr, data), output (data)
  std::optional<PemParams> am;
  AmLayout am_layout;
};

/// Experimenter-controlled switches. They persist across cycles.
struct Selectors {
  bool ns_sel = true;        ///< NS.y = dout (1) or AS.y (0)
  bool nm_sel = true;        ///< NM.y = teacher (1) or AM.y (0)
  bool feedback_on = false;  ///< AM feedback slot reads the delay register
  bool refresh_on = false;   ///< two-step cycle with proprioceptive refresh

  friend bool operator==(const Selectors&, const Selectors&) = default;
};

/// Signals arriving at the brain during one cycle.
struct BrainInputs {
  std::optional<Symbol> addr;   ///< eye position (motor)
  std::optional<Symbol> din;    ///< typed character (motor)
  std::optional<Symbol> dout;   ///< what the eye sees
  std::vector<Symbol> vis;      ///< AM sensory slots when not fed by NS
  std::optional<Symbol> aud;    ///< auditory input, epsilon when absent
  std::vector<Symbol> teach;    ///< teacher output T.y; empty means all epsilon
  bool wen_as = false;
  bool wen_am = false;
};

struct BrainOutputs {
  std::optional<CycleIO> as_io;
  std::optional<CycleIO> am_io;
  std::optional<Symbol> ns_y;
  std::vector<Symbol> nm_y;
  bool refreshed = false;
};

/// Units AS and AM, centers NS and NM, and the one-cycle delay register
/// carrying NM.y back to AM.
///
/// A cycle evaluates AS, NS, AM, NM, then the register. The multiplexers are
/// combinational, so AS.y reaches AM through NS within the same cycle.
class BrainAssembly {
 public:
  explicit BrainAssembly(BrainConfig config);

  const BrainConfig& config() const noexcept { return config_; }
  const Pem* as_unit() const noexcept { return as_ ? &*as_ : nullptr; }
  const Pem* am_unit() const noexcept { return am_ ? &*am_ : nullptr; }
  const Selectors& selectors() const noexcept { return sel_; }
  void set_selectors(const Selectors& sel) noexcept { sel_ = sel; }

  /// NM output of the previous cycle; epsilon after reset.
  std::span<const Symbol> feedback_register() const noexcept { return feedback_reg_; }

  BrainOutputs cycle(const BrainInputs& in, ChoiceRng& rng);

  /// Zeroes every E-state and clears the delay register. LTM is kept.
  void reset();

 private:
  std::vector<Symbol> am_input(const BrainInputs& in, const std::optional<Symbol>& ns_y,
                               std::span<const Symbol> teach) const;

  BrainConfig config_;
  std::optional<Pem> as_;
  std::optional<Pem> am_;
  Selectors sel_;
  std::vector<Symbol> feedback_reg_;
};

}  // namespace emachine
