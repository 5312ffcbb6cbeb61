#pragma once

#include <cstddef>

#include "qccp/bound_report.hpp"
#include "qccp/instance.hpp"
#include "qccp/lp.hpp"

namespace qccp {

struct LbbOptions {
  // lbb2 and lbb3 constrain every arc pair; refuse LPs above this row count.
  std::size_t max_rows = 2'000'000;
  lp::Options lp;
};

// Strongest bound max 1^T y, [U^T, V^T] y <= p_hat, over linearizable
// under-estimators Q_hat <= Q of a fixed class. Diagonal (linear) costs are
// exactly linearizable and are added to p_hat directly.
//
// lbb1: incident weak sums, b_e + c_f <= Q_ef on successor pairs,
//       p_hat = b + c. Witnesses "b", "c".
BoundReport lbb1(const QccpInstance& inst, const LbbOptions& options = {});

// lbb2: restricted generalized weak sums over all arc pairs,
//       b_ij + c_{ij,l} + d_{i,jl} + t_jl <= Q_{ij,jl}   (successive)
//       c_{ij,l} + d_{i,kl} <= Q_{ij,kl}                  (j != k)
//       p_hat_ij = b_ij + sum_k c_{ij,k} + sum_k d_{k,ij} + t_ij.
BoundReport lbb2(const QccpInstance& inst, const LbbOptions& options = {});

// lbb3: generalized weak sums,
//       b_{ij,k} + c_{ij,l} + d_{i,kl} + t_{j,kl} <= Q_{ij,kl} for all pairs,
//       p_hat = row and column sums of the four supports.
BoundReport lbb3(const QccpInstance& inst, const LbbOptions& options = {});

// lbb1 plus a skew-symmetric M on the 2-cycle pairs e = (i,j), f = (j,i):
//       b_e + c_f + M_ef <= Q_ef,  b_f + c_e - M_ef <= Q_fe.
// x^T M x = 0 on covers, so any such M keeps the bound valid.
BoundReport lbb1_skew(const QccpInstance& inst, const LbbOptions& options = {});

}  // namespace qccp
