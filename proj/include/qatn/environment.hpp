#pragma once

#include "qatn/tensor.hpp"

// Building blocks for contracting <bra| MPO |ket> networks one site at a time.
// Environment axes: left env (bra-bond, mpo-bond, ket-bond), right env the same
// with right-side bonds. Overlap environments drop the mpo axis. The bra site
// tensor is passed as stored and conjugated internally.

namespace qatn::env {

/// Trivial boundary environment of shape (1, 1, 1).
Tensor boundary();
/// Trivial boundary overlap environment of shape (1, 1).
Tensor overlap_boundary();

Tensor grow_left(const Tensor& left, const Tensor& bra, const Tensor& mpo, const Tensor& ket);
Tensor grow_right(const Tensor& right, const Tensor& bra, const Tensor& mpo, const Tensor& ket);

Tensor grow_left_overlap(const Tensor& left, const Tensor& bra, const Tensor& ket);
Tensor grow_right_overlap(const Tensor& right, const Tensor& bra, const Tensor& ket);

/// Applies L * W1 * W2 * R to a two-site block with axes (left, phys, phys, right).
Tensor apply_two_site(const Tensor& left, const Tensor& w1, const Tensor& w2, const Tensor& right,
                      const Tensor& block);

/// Applies L * W * R to a one-site block with axes (left, phys, right).
Tensor apply_one_site(const Tensor& left, const Tensor& w, const Tensor& right, const Tensor& block);

}  // namespace qatn::env
