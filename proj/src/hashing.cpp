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

#include "stac/hashing.hpp"

#include <stdexcept>

namespace stac {

bool XorHash::evaluate(const Assignment& alpha) const {
  bool value = a0;
  for (Var i = 1; i <= num_vars(); ++i) {
    if (coeffs[i - 1] && alpha[i]) value = !value;
  }
  return value;
}

XorHash draw_hash(Var n, RngStream& stream) {
  XorHash h;
  h.a0 = stream.next_bit();
  h.coeffs.resize(n);
  for (Var i = 0; i < n; ++i) h.coeffs[i] = stream.next_bit();
  return h;
}

XorConstraint hash_to_constraint(const XorHash& h) {
  XorConstraint x;
  for (Var i = 1; i <= h.num_vars(); ++i) {
    if (h.coeffs[i - 1]) x.vars.push_back(i);
  }
  x.rhs = !h.a0;
  return x;
}

HashedChain::HashedChain(std::shared_ptr<const CnfFormula> base) : base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("HashedChain: null base formula");
}

HashedChain HashedChain::extend(const XorHash& h) const {
  if (h.num_vars() != base_->num_vars()) {
    throw std::invalid_argument("hash dimension " + std::to_string(h.num_vars()) +
                                " does not match formula with " +
                                std::to_string(base_->num_vars()) + " variables");
  }
  HashedChain next = *this;
  next.hashes_.push_back(h);
  return next;
}

HashedChain HashedChain::prefix(std::size_t depth) const {
  if (depth > hashes_.size()) throw std::out_of_range("chain prefix deeper than chain");
  HashedChain p(base_);
  p.hashes_.assign(hashes_.begin(), hashes_.begin() + static_cast<std::ptrdiff_t>(depth));
  return p;
}

std::vector<XorConstraint> HashedChain::constraints(std::size_t depth) const {
  if (depth > hashes_.size()) throw std::out_of_range("chain prefix deeper than chain");
  std::vector<XorConstraint> out;
  out.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) out.push_back(hash_to_constraint(hashes_[i]));
  return out;
}

CnfFormula HashedChain::formula_at(std::size_t depth) const {
  return base_->with_xors(constraints(depth));
}

HashedChain chain_extend(const HashedChain& chain, const XorHash& h) { return chain.extend(h); }

LazyChain::LazyChain(Var num_vars, std::uint64_t seed, std::uint32_t run)
    : num_vars_(num_vars), seed_(seed), run_(run) {}

void LazyChain::materialize(std::size_t depth) {
  while (hashes_.size() < depth) {
    const auto k = static_cast<std::uint32_t>(hashes_.size() + 1);
    RngStream stream(seed_, StreamDomain::kHash, run_, k);
    hashes_.push_back(draw_hash(num_vars_, stream));
    constraints_.push_back(hash_to_constraint(hashes_.back()));
  }
}

std::span<const XorConstraint> LazyChain::prefix(std::size_t depth) {
  materialize(depth);
  return std::span<const XorConstraint>(constraints_.data(), depth);
}

const XorHash& LazyChain::hash(std::size_t k) {
  if (k == 0) throw std::out_of_range("hash index is 1-based");
  materialize(k);
  return hashes_[k - 1];
}

}  // namespace stac
