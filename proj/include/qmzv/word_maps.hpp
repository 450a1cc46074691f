#pragma once

#include <utility>
#include <vector>

#include "qmzv/indices.hpp"
#include "qmzv/word.hpp"

namespace qmzv {

// Harmonic (stuffle-type) product rho : d_xi x d -> d. The first argument must lie in d_xi.
// Throws std::invalid_argument otherwise.
//   rho(1, w) = w,  rho(v, 1) = v,
//   rho(xi_k v, z_l w)  = xi_k rho(v, z_l w)  + z_l  rho(xi_k v, w) + z_{k+l}  rho(v, w),
//   rho(xi_k v, xi_l w) = xi_k rho(v, xi_l w) + xi_l rho(xi_k v, w) + xi_{k+l} rho(v, w).
WordPoly rho(const WordPoly& v, const WordPoly& w);

// xi_k o 1 = 0, xi_k o (xi_l v) = xi_{k+l} v.
WordPoly circ(int k, const WordPoly& v);

// d(1) = 1, d(xi_k v) = xi_k d(v) + xi_k o d(v).
WordPoly d_map(const WordPoly& v);

// phi_s : d_1 -> d_1. phi_0 = id, phi_s(1) = xi_1 z_1^{s-1},
//   phi_s(z_1 w)  = z_1 phi_s(w) + xi_1 sum_{i=1..s} z_1^i phi_{s-i}(w),
//   phi_s(xi_1 w) = xi_1 sum_{i=0..s} z_1^i phi_{s-i}(w).
WordPoly phi(int s, const WordPoly& w);

// Phi_0 = id, Phi_l = sum_{r=1..l} (-1)^r sum_{c in I(r,l)} phi_{c_1} ... phi_{c_r}.
WordPoly Phi(int l, const WordPoly& w);

// Z_s(w) = sum_{l=0..s} rho(d(xi_1^{s-l}), Phi_l(w)).
WordPoly Z_map(int s, const WordPoly& w);

// eta_{a,n}: sum over weak compositions c of n into a parts of xi_1 z_1^{c_1} ... xi_1 z_1^{c_a}.
// eta_{0,n} = delta_{n,0}; zero for n < 0.
WordPoly eta(int a, int n);

// Reads a z-word polynomial as a linear combination of indices z_{i_1}...z_{i_r} -> (i_1,...,i_r).
// Throws std::invalid_argument naming the offending word for non-z letters, the empty word,
// or (when require_admissible) a leading index below 2.
std::vector<std::pair<Integer, Composition>> poly_to_index_combination(const WordPoly& p,
                                                                       bool require_admissible = false);

// Drops all memoized values (tests use this to check memoization has no semantic effect).
void clear_word_map_caches();

}  // namespace qmzv
