// Copyright 2026 The STAC Authors
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
#include <memory>
#include <span>
#include <vector>

#include "stac/formula.hpp"
#include "stac/rng.hpp"

namespace stac {

/// H(x) = a0 XOR (XOR over i of a_i x_i). coeffs[i - 1] holds a_i.
struct XorHash {
  bool a0 = false;
  std::vector<bool> coeffs;

  Var num_vars() const { return static_cast<Var>(coeffs.size()); }
  bool evaluate(const Assignment& alpha) const;

  friend bool operator==(const XorHash&, const XorHash&) = default;
};

/// Draws a0, a1, ..., an as independent fair coins, in that order.
XorHash draw_hash(Var n, RngStream& stream);

/// The constraint H(x) = true: parity over {i : a_i = 1} equals NOT a0.
/// An all-zero coefficient vector yields a tautology (a0 = 1) or the empty
/// contradiction (a0 = 0); both are kept.
XorConstraint hash_to_constraint(const XorHash& h);

/// F together with an ordered list of hashes; the formula at depth i is
/// F AND H_1 AND ... AND H_i. Extending returns a new chain and never alters
/// the shared prefix.
class HashedChain {
 public:
  explicit HashedChain(std::shared_ptr<const CnfFormula> base);

  std::size_t depth() const { return hashes_.size(); }
  const CnfFormula& base() const { return *base_; }
  const std::vector<XorHash>& hashes() const { return hashes_; }

  HashedChain extend(const XorHash& h) const;
  HashedChain prefix(std::size_t depth) const;
  /// Constraints of H_1..H_depth.
  std::vector<XorConstraint> constraints(std::size_t depth) const;
  /// F_depth as a standalone formula.
  CnfFormula formula_at(std::size_t depth) const;

 private:
  std::shared_ptr<const CnfFormula> base_;
  std::vector<XorHash> hashes_;
};

HashedChain chain_extend(const HashedChain& chain, const XorHash& h);

/// A chain whose hashes are drawn on demand and cached. Hash k of run r comes
/// from its own stream (seed, r, k), so the chain is a fixed object no matter
/// which depths are probed or in what order.
class LazyChain {
 public:
  LazyChain(Var num_vars, std::uint64_t seed, std::uint32_t run);

  /// Constraints of H_1..H_depth, drawing any missing hashes.
  std::span<const XorConstraint> prefix(std::size_t depth);
  const XorHash& hash(std::size_t k);  // 1-based
  std::size_t materialized() const { return hashes_.size(); }

 private:
  void materialize(std::size_t depth);

  Var num_vars_;
  std::uint64_t seed_;
  std::uint32_t run_;
  std::vector<XorHash> hashes_;
  std::vector<XorConstraint> constraints_;
};

}  // namespace stac
