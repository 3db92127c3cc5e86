#include "qatn/environment.hpp"

namespace qatn::env {

Tensor boundary() { return Tensor({1, 1, 1}, {cplx{1.0, 0.0}}); }

Tensor overlap_boundary() { return Tensor({1, 1}, {cplx{1.0, 0.0}}); }

Tensor grow_left(const Tensor& left, const Tensor& bra, const Tensor& mpo, const Tensor& ket) {
  Tensor t = contract(left, ket, {{2, 0}});             // (a', w, s, b)
  t = contract(t, mpo, {{1, 0}, {2, 2}});                // (a', b, s', w')
  t = contract(bra.conj(), t, {{0, 0}, {1, 2}});         // (b', b, w')
  return permute(t, {0, 2, 1});
}

Tensor grow_right(const Tensor& right, const Tensor& bra, const Tensor& mpo, const Tensor& ket) {
  Tensor t = contract(ket, right, {{2, 2}});             // (a, s, b', w')
  t = contract(mpo, t, {{3, 3}, {2, 1}});                // (w, s', a, b')
  return contract(bra.conj(), t, {{1, 1}, {2, 3}});      // (a', w, a)
}

Tensor grow_left_overlap(const Tensor& left, const Tensor& bra, const Tensor& ket) {
  Tensor t = contract(left, ket, {{1, 0}});              // (a', s, b)
  return contract(bra.conj(), t, {{0, 0}, {1, 1}});      // (b', b)
}

Tensor grow_right_overlap(const Tensor& right, const Tensor& bra, const Tensor& ket) {
  Tensor t = contract(ket, right, {{2, 1}});             // (a, s, b')
  return contract(bra.conj(), t, {{1, 1}, {2, 2}});      // (a', a)
}

Tensor apply_two_site(const Tensor& left, const Tensor& w1, const Tensor& w2, const Tensor& right,
                      const Tensor& block) {
  Tensor t = contract(left, block, {{2, 0}});            // (a', w, s1, s2, b)
  t = contract(t, w1, {{1, 0}, {2, 2}});                 // (a', s2, b, s1', wm)
  t = contract(t, w2, {{4, 0}, {1, 2}});                 // (a', b, s1', s2', w')
  t = contract(t, right, {{1, 2}, {4, 1}});              // (a', s1', s2', b')
  return t;
}

Tensor apply_one_site(const Tensor& left, const Tensor& w, const Tensor& right, const Tensor& block) {
  Tensor t = contract(left, block, {{2, 0}});            // (a', w, s, b)
  t = contract(t, w, {{1, 0}, {2, 2}});                  // (a', b, s', w')
  return contract(t, right, {{1, 2}, {3, 1}});           // (a', s', b')
}

}  // namespace qatn::env
