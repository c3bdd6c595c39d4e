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

#include "emachine/pem.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "emachine/kernels.hpp"

namespace emachine {
namespace {

void check_symbols(std::span<const Symbol> symbols, std::span<const AlphabetRef> alphabets,
                   const char* what) {
  if (symbols.size() != alphabets.size()) {
    throw ConfigError(std::string(what) + " has " + std::to_string(symbols.size()) +
                      " components, expected " + std::to_string(alphabets.size()));
  }
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    if (&symbols[j].alphabet() != alphabets[j].get()) {
      throw SymbolError(std::string(what) + "(" + std::to_string(j + 1) + ") = '" +
                        symbols[j].name() + "' is not from alphabet '" + alphabets[j]->name() +
                        "'");
    }
  }
}

void accumulate_similarity(std::span<const Symbol> x, std::span<const double> wx,
                           const PemGState& g, std::span<double> s) {
  const auto& k = kernels::active();
  const std::size_t n = g.written();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_epsilon()) continue;
    k.accumulate_matches(g.input_row(j).first(n), x[j].token(), wx[j], s.first(n));
  }
}

}  // namespace

double PemParams::emax() const noexcept { return std::accumulate(wx.begin(), wx.end(), 0.0); }

void PemParams::validate() const {
  if (inputs.empty()) throw ConfigError("PEM needs at least one input slot");
  if (outputs.empty()) throw ConfigError("PEM needs at least one output slot");
  for (const auto& a : inputs) {
    if (!a) throw ConfigError("PEM input alphabet is null");
  }
  for (const auto& a : outputs) {
    if (!a) throw ConfigError("PEM output alphabet is null");
  }
  if (wx.size() != inputs.size()) {
    throw ConfigError("PEM has " + std::to_string(inputs.size()) + " inputs but " +
                      std::to_string(wx.size()) + " weights");
  }
  for (double w : wx) {
    if (!(w >= 1.0) || !std::isfinite(w)) {
      throw ConfigError("PEM input weights must be finite and >= 1");
    }
  }
  if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("PEM modulation a must be >= 0");
  if (!(tau > 1.0) || !std::isfinite(tau)) throw ConfigError("PEM tau must be > 1");
  if (capacity == 0) throw ConfigError("PEM capacity must be positive");
}

PemGState::PemGState(const PemParams& params)
    : inputs_(params.inputs), outputs_(params.outputs), capacity_(params.capacity) {
  gx_.resize(m() * capacity_);
  gy_.resize(p() * capacity_);
  for (std::size_t j = 0; j < m(); ++j) {
    std::fill_n(gx_.begin() + j * capacity_, capacity_, inputs_[j]->epsilon_token());
  }
  for (std::size_t k = 0; k < p(); ++k) {
    std::fill_n(gy_.begin() + k * capacity_, capacity_, outputs_[k]->epsilon_token());
  }
}

std::span<const Token> PemGState::input_row(std::size_t j) const {
  return std::span<const Token>(gx_).subspan(j * capacity_, capacity_);
}

Symbol PemGState::input(std::size_t j, std::size_t location) const {
  return Symbol(*inputs_.at(j), gx_.at(j * capacity_ + location));
}

Symbol PemGState::output(std::size_t k, std::size_t location) const {
  return Symbol(*outputs_.at(k), gy_.at(k * capacity_ + location));
}

std::vector<Symbol> PemGState::input_column(std::size_t location) const {
  std::vector<Symbol> out;
  for (std::size_t j = 0; j < m(); ++j) out.push_back(input(j, location));
  return out;
}

std::vector<Symbol> PemGState::output_column(std::size_t location) const {
  std::vector<Symbol> out;
  for (std::size_t k = 0; k < p(); ++k) out.push_back(output(k, location));
  return out;
}

void PemGState::record(std::span<const Symbol> x, std::span<const Symbol> xy) {
  check_symbols(x, inputs_, "x");
  check_symbols(xy, outputs_, "xy");
  if (written_ >= capacity_) {
    throw CapacityError("LTM is full (" + std::to_string(capacity_) +
                        " locations); increase the capacity and rerun");
  }
  for (std::size_t j = 0; j < m(); ++j) gx_[j * capacity_ + written_] = x[j].token();
  for (std::size_t k = 0; k < p(); ++k) gy_[k * capacity_ + written_] = xy[k].token();
  ++written_;
}

std::vector<double> decode(std::span<const Symbol> x, std::span<const double> wx,
                           const PemGState& g) {
  if (x.size() != g.m() || wx.size() != g.m()) {
    throw ConfigError("decode: x and wx must have one entry per input slot");
  }
  std::vector<double> s(g.capacity(), 0.0);
  accumulate_similarity(x, wx, g, s);
  return s;
}

std::vector<double> modulate(std::span<const double> s, std::span<const double> e, double a) {
  if (s.size() != e.size()) throw ConfigError("modulate: s and e differ in length");
  std::vector<double> se(s.size());
  kernels::active().modulate(s, e, a, se);
  return se;
}

std::optional<std::size_t> choose(std::span<const double> se, ChoiceRng& rng) {
  const double best = kernels::active().max_value(se);
  if (!(best > 0.0)) return std::nullopt;
  std::vector<std::size_t> mset;
  for (std::size_t i = 0; i < se.size(); ++i) {
    if (se[i] == best) mset.push_back(i);
  }
  if (mset.size() == 1) return mset.front();
  return mset[uniform_below(rng, mset.size())];
}

std::vector<Symbol> encode(const PemGState& g, std::optional<std::size_t> iwin) {
  if (!iwin) {
    std::vector<Symbol> y;
    for (std::size_t k = 0; k < g.p(); ++k) y.push_back(g.output(k, 0).alphabet().epsilon());
    return y;
  }
  return g.output_column(*iwin);
}

std::vector<double> next_e(std::span<const double> s, std::span<const double> e, double c) {
  if (s.size() != e.size()) throw ConfigError("next_e: s and e differ in length");
  std::vector<double> out(e.begin(), e.end());
  kernels::active().next_e(s, c, out);
  return out;
}

PemGState learn(std::span<const Symbol> x, std::span<const Symbol> xy, bool wen, PemGState g) {
  if (wen) g.record(x, xy);
  return g;
}

double self_similarity(std::span<const Symbol> x, std::span<const double> wx) {
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    total += x[j].is_epsilon() ? 0.0 : wx[j];
  }
  return total;
}

PemEState seed_e_on_write(PemEState estate, std::size_t location, std::span<const Symbol> x,
                          std::span<const double> wx) {
  estate.e.at(location) = self_similarity(x, wx);
  return estate;
}

Pem::Pem(PemParams params) : params_((params.validate(), std::move(params))), g_(params_) {
  e_.e.assign(params_.capacity, 0.0);
}

void Pem::check_inputs(std::span<const Symbol> x) const { check_symbols(x, params_.inputs, "x"); }

CycleIO Pem::cycle(std::span<const Symbol> x, std::optional<std::span<const Symbol>> xy, bool wen,
                   ChoiceRng& rng, std::span<const double> wx) {
  check_inputs(x);
  if (xy) check_symbols(*xy, params_.outputs, "xy");
  if (wx.empty()) {
    wx = params_.wx;
  } else if (wx.size() != params_.m()) {
    throw ConfigError("wx override must have one weight per input slot");
  }
  if (wen && g_.written() >= g_.capacity()) {
    throw CapacityError("LTM is full (" + std::to_string(g_.capacity()) +
                        " locations); increase the capacity and rerun");
  }

  const auto& k = kernels::active();
  const std::size_t n = g_.written();
  CycleIO io;
  io.x.assign(x.begin(), x.end());
  io.wen = wen;
  io.s.assign(params_.capacity, 0.0);
  io.se.assign(params_.capacity, 0.0);

  std::span<double> s = std::span(io.s).first(n);
  std::span<double> se = std::span(io.se).first(n);
  std::span<double> e = std::span(e_.e).first(n);

  accumulate_similarity(x, wx, g_, io.s);
  k.modulate(s, e, params_.a, se);
  io.iwin = choose(se, rng);
  io.y = encode(g_, io.iwin);
  if (xy) {
    io.xy.assign(xy->begin(), xy->end());
  } else {
    io.xy = io.y;
  }

  k.next_e(s, params_.c(), e);
  if (wen) {
    const std::size_t location = g_.written();
    g_.record(io.x, io.xy);
    e_.e[location] = self_similarity(x, wx);
  }
  last_winner_ = io.iwin;
  return io;
}

bool Pem::refresh(std::span<const Symbol> x) {
  check_inputs(x);
  if (!last_winner_) return false;
  const std::size_t i = *last_winner_;
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!x[j].is_epsilon() && g_.input(j, i).token() == x[j].token()) s += params_.wx[j];
  }
  if (s > e_.e[i]) e_.e[i] = s;
  return true;
}

void Pem::reset_e() {
  std::fill(e_.e.begin(), e_.e.end(), 0.0);
  last_winner_.reset();
}

}  // namespace emachine
