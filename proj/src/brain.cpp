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

#include "emachine/brain.hpp"

#include <string>

namespace emachine {
namespace {

void require_alphabet(const Symbol& s, const AlphabetRef& alphabet, const char* what) {
  if (&s.alphabet() != alphabet.get()) {
    throw SymbolError(std::string(what) + " '" + s.name() + "' is not from alphabet '" +
                      alphabet->name() + "'");
  }
}

}  // namespace

Symbol ns_mux(bool sel, const Symbol& dout, const Symbol& as_y) { return sel ? dout : as_y; }

std::vector<Symbol> nm_mux(bool sel, std::span<const Symbol> teacher_y,
                           std::span<const Symbol> am_y) {
  if (teacher_y.size() != am_y.size()) {
    throw ConfigError("NM inputs differ in width: " + std::to_string(teacher_y.size()) + " vs " +
                      std::to_string(am_y.size()));
  }
  const auto& chosen = sel ? teacher_y : am_y;
  return {chosen.begin(), chosen.end()};
}

BrainAssembly::BrainAssembly(BrainConfig config) : config_(std::move(config)) {
  if (config_.as) {
    const auto& p = *config_.as;
    if (p.m() != 2 || p.p() != 1 || p.inputs[1] != p.outputs[0]) {
      throw ConfigError("AS must read (addr, data) and produce one data symbol");
    }
    as_.emplace(p);
  }
  if (config_.am) {
    const auto& p = *config_.am;
    const AmLayout& layout = config_.am_layout;
    if (layout.width() != p.m()) {
      throw ConfigError("AM has " + std::to_string(p.m()) + " inputs but its layout has " +
                        std::to_string(layout.width()) + " slots");
    }
    std::size_t slot = 0;
    if (layout.aud && p.inputs[slot++] != layout.aud) {
      throw ConfigError("AM auditory slot alphabet mismatch");
    }
    for (const auto& a : layout.sensory) {
      if (p.inputs[slot++] != a) throw ConfigError("AM sensory slot alphabet mismatch");
    }
    if (layout.sensory_from_ns) {
      if (layout.sensory.size() != 1) throw ConfigError("NS feeds exactly one AM slot");
    }
    if (layout.feedback) {
      if (*layout.feedback >= p.p()) throw ConfigError("AM feedback index out of range");
      if (p.inputs[slot] != p.outputs[*layout.feedback]) {
        throw ConfigError("AM feedback slot must use the alphabet of the fed-back output");
      }
    }
    am_.emplace(p);
    feedback_reg_ = epsilon_vector(p.outputs);
  }
}

std::vector<Symbol> BrainAssembly::am_input(const BrainInputs& in,
                                            const std::optional<Symbol>& ns_y,
                                            std::span<const Symbol> teach) const {
  const AmLayout& layout = config_.am_layout;
  std::vector<Symbol> x;
  x.reserve(layout.width());
  if (layout.aud) {
    if (in.aud) {
      require_alphabet(*in.aud, layout.aud, "aud");
      x.push_back(*in.aud);
    } else {
      x.push_back(layout.aud->epsilon());
    }
  }
  if (layout.sensory_from_ns) {
    x.push_back(ns_y ? *ns_y : layout.sensory[0]->epsilon());
  } else if (in.vis.empty()) {
    for (const auto& a : layout.sensory) x.push_back(a->epsilon());
  } else {
    if (in.vis.size() != layout.sensory.size()) {
      throw ConfigError("visual input has " + std::to_string(in.vis.size()) +
                        " symbols, expected " + std::to_string(layout.sensory.size()));
    }
    x.insert(x.end(), in.vis.begin(), in.vis.end());
  }
  if (layout.feedback) {
    const std::size_t k = *layout.feedback;
    if (sel_.refresh_on && in.wen_am && sel_.nm_sel) {
      // Training with refresh records the production's own spoken output.
      x.push_back(teach[k]);
    } else if (sel_.feedback_on) {
      x.push_back(feedback_reg_[k]);
    } else {
      x.push_back(config_.am->outputs[k]->epsilon());
    }
  }
  return x;
}

BrainOutputs BrainAssembly::cycle(const BrainInputs& in, ChoiceRng& rng) {
  BrainOutputs out;

  if (as_) {
    if (!in.addr || !in.din) throw ConfigError("AS needs addr and din every cycle");
    const std::vector<Symbol> x{*in.addr, *in.din};
    std::optional<std::span<const Symbol>> xy;
    if (sel_.ns_sel) {
      if (!in.dout) throw ConfigError("NS selects dout but the world produced none");
      xy = std::span<const Symbol>(&*in.dout, 1);
    }
    out.as_io = as_->cycle(x, xy, in.wen_as, rng);
  }

  if (in.dout || out.as_io) {
    const Symbol as_y = out.as_io ? out.as_io->y[0] : in.dout->alphabet().epsilon();
    const Symbol dout = in.dout ? *in.dout : as_y.alphabet().epsilon();
    out.ns_y = ns_mux(sel_.ns_sel, dout, as_y);
  }

  if (am_) {
    const auto& outputs = config_.am->outputs;
    std::vector<Symbol> teach = in.teach.empty() ? epsilon_vector(outputs) : in.teach;
    if (teach.size() != outputs.size()) {
      throw ConfigError("teacher output has " + std::to_string(teach.size()) +
                        " symbols, expected " + std::to_string(outputs.size()));
    }
    for (std::size_t k = 0; k < teach.size(); ++k) require_alphabet(teach[k], outputs[k], "teach");

    std::vector<Symbol> x = am_input(in, out.ns_y, teach);
    std::optional<std::span<const Symbol>> xy;
    if (sel_.nm_sel) xy = std::span<const Symbol>(teach);
    out.am_io = am_->cycle(x, xy, in.wen_am, rng);
    out.nm_y = nm_mux(sel_.nm_sel, teach, out.am_io->y);

    if (sel_.refresh_on && config_.am_layout.feedback && out.am_io->iwin) {
      x.back() = out.nm_y[*config_.am_layout.feedback];
      out.refreshed = am_->refresh(x);
    }
    feedback_reg_ = out.nm_y;
  }
  return out;
}

void BrainAssembly::reset() {
  if (as_) as_->reset_e();
  if (am_) {
    am_->reset_e();
    feedback_reg_ = epsilon_vector(config_.am->outputs);
  }
}

}  // namespace emachine
