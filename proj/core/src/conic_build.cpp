// Copyright 2026 The gsmp Authors. All Rights Reserved.
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

#include <cmath>
#include <ostream>

#include "gsmp/conic.hpp"
#include "gsmp/gp.hpp"

namespace gsmp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kMaxIter: return "max_iter";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

void ConeProgram::validate() const {
  if (c.size() != num_vars) throw InvalidArgument("objective length != num_vars");
  if (A.rows() != b.size()) throw InvalidArgument("equality rows != rhs length");
  if (A.rows() > 0 && A.cols() != num_vars) throw InvalidArgument("equality cols != num_vars");
  for (int k : nonneg)
    if (k < 0 || k >= num_vars) throw InvalidArgument("nonneg index out of range");
  for (const auto& cone : cones) {
    if (cone.dim() < 1) throw InvalidArgument("cone of dimension 0");
    if (cone.D.rows() != cone.dim() ||
        cone.D.cols() != static_cast<Eigen::Index>(cone.members.size()))
      throw InvalidArgument("cone coefficient shape mismatch");
    for (int k : cone.members)
      if (k < 0 || k >= num_vars) throw InvalidArgument("cone member out of range");
  }
  if (eliminate) {
    const VarRange r = *eliminate;
    if (r.offset < 0 || r.offset + r.length > num_vars || r.length != A.rows())
      throw InvalidArgument("elimination block must be square in the equality system");
    if (!A.middleCols(r.offset, r.length).allFinite())
      throw InvalidArgument("elimination block is not finite");
  }
}

Matrix frozen_covariance(const std::vector<int>& block, const Weights& theta,
                         const KernelWorkspace& ws) {
  Weights frozen = theta;
  for (int q : block) frozen(q) = 0.0;
  Matrix M = covariance(frozen, ws);
  // Same jitter as the likelihood at theta, so the program agrees with it.
  M.diagonal().array() += kJitterFactor * (ws.noise_var + theta.sum());
  return M;
}

namespace {

ConeProgram assemble(const std::vector<int>& block, const Matrix& F,
                     const KernelWorkspace& ws, const Vector& grad_h_block,
                     const Vector& y, bool prox) {
  const int b = static_cast<int>(block.size());
  const int n = ws.n();
  if (b < 1) throw InvalidArgument("empty block");
  if (grad_h_block.size() != b) throw InvalidArgument("gradient slice length != block size");
  if (y.size() != n || F.rows() != n || F.cols() != n)
    throw InvalidArgument("data length mismatch in block program");

  ConeProgram prog;
  VariableLayout& lay = prog.layout;
  lay.theta = {0, b};
  lay.z = {b, b + 1};
  lay.w0 = {2 * b + 1, n};
  int off = lay.w0.offset + n;
  for (int q : block) {
    const int r = static_cast<int>(ws.lowrank[static_cast<std::size_t>(q)].cols());
    lay.w.push_back({off, r});
    off += r;
  }
  if (prox) lay.v = off++;
  prog.num_vars = off;

  prog.c = Vector::Zero(off);
  for (int k = 0; k < b; ++k) prog.c(k) = -grad_h_block(k);
  prog.c.segment(lay.z.offset, lay.z.length).setOnes();

  prog.A = Matrix::Zero(n, off);
  prog.A.block(0, lay.w0.offset, n, n) = F;
  for (int k = 0; k < b; ++k)
    prog.A.block(0, lay.w[k].offset, n, lay.w[k].length) =
        ws.lowrank[static_cast<std::size_t>(block[k])];
  prog.b = y;

  // z_0 >= ||w_0||^2 as (z_0 + 1, 2 w_0, z_0 - 1) in SOC.
  {
    SocConstraint c0;
    c0.members.push_back(lay.z.offset);
    for (int i = 0; i < n; ++i) c0.members.push_back(lay.w0.offset + i);
    c0.D = Matrix::Zero(n + 2, n + 1);
    c0.e = Vector::Zero(n + 2);
    c0.D(0, 0) = 1.0;
    c0.e(0) = 1.0;
    for (int i = 0; i < n; ++i) c0.D(1 + i, 1 + i) = 2.0;
    c0.D(n + 1, 0) = 1.0;
    c0.e(n + 1) = -1.0;
    prog.cones.push_back(std::move(c0));
  }
  // z_j theta_j >= ||w_j||^2 as (z_j + theta_j, 2 w_j, z_j - theta_j) in SOC.
  for (int k = 0; k < b; ++k) {
    const int r = lay.w[k].length;
    SocConstraint cj;
    cj.members = {lay.z.offset + 1 + k, lay.theta.offset + k};
    for (int i = 0; i < r; ++i) cj.members.push_back(lay.w[k].offset + i);
    cj.D = Matrix::Zero(r + 2, r + 2);
    cj.e = Vector::Zero(r + 2);
    cj.D(0, 0) = 1.0;
    cj.D(0, 1) = 1.0;
    for (int i = 0; i < r; ++i) cj.D(1 + i, 2 + i) = 2.0;
    cj.D(r + 1, 0) = 1.0;
    cj.D(r + 1, 1) = -1.0;
    prog.cones.push_back(std::move(cj));
  }

  for (int k = 0; k < b; ++k) prog.nonneg.push_back(lay.theta.offset + k);
  for (int k = 0; k <= b; ++k) prog.nonneg.push_back(lay.z.offset + k);
  prog.eliminate = lay.w0;
  return prog;
}

Matrix factor_frozen(const std::vector<int>& block, const Weights& theta,
                     const KernelWorkspace& ws) {
  const Matrix M = frozen_covariance(block, theta, ws);
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success)
    throw FactorizationFailure("frozen part is not positive definite", M.diagonal().minCoeff());
  return llt.matrixL();
}

}  // namespace

ConeProgram build_block_socp_with_factor(const std::vector<int>& block,
                                         const Matrix& F, const KernelWorkspace& ws,
                                         const Vector& grad_h_block, const Vector& y) {
  ConeProgram prog = assemble(block, F, ws, grad_h_block, y, false);
  prog.validate();
  return prog;
}

ConeProgram build_block_socp(const std::vector<int>& block, const Weights& theta_t,
                             const KernelWorkspace& ws, const Vector& grad_h_block,
                             const Vector& y) {
  return build_block_socp_with_factor(block, factor_frozen(block, theta_t, ws), ws,
                                      grad_h_block, y);
}

ConeProgram build_local_socp(const std::vector<int>& block, const Weights& zeta_frozen,
                             const Vector& theta_global_block, const Vector& dual_block,
                             double rho, const KernelWorkspace& ws,
                             const Vector& grad_h_block, const Vector& y) {
  if (!(rho > 0.0)) throw InvalidArgument("penalty must be > 0");
  const int b = static_cast<int>(block.size());
  if (theta_global_block.size() != b || dual_block.size() != b)
    throw InvalidArgument("consensus slice length != block size");
  ConeProgram prog = assemble(block, factor_frozen(block, zeta_frozen, ws), ws,
                              grad_h_block, y, true);
  const int v = *prog.layout.v;
  for (int k = 0; k < b; ++k) prog.c(k) += dual_block(k);
  prog.c(v) = 0.5 * rho;

  // v >= ||zeta - theta||^2 as (v + 1/2, sqrt2 (zeta - theta), v - 1/2) in SOC.
  SocConstraint cp;
  cp.members.push_back(v);
  for (int k = 0; k < b; ++k) cp.members.push_back(prog.layout.theta.offset + k);
  cp.D = Matrix::Zero(b + 2, b + 1);
  cp.e = Vector::Zero(b + 2);
  cp.D(0, 0) = 1.0;
  cp.e(0) = 0.5;
  for (int k = 0; k < b; ++k) {
    cp.D(1 + k, 1 + k) = std::sqrt(2.0);
    cp.e(1 + k) = -std::sqrt(2.0) * theta_global_block(k);
  }
  cp.D(b + 1, 0) = 1.0;
  cp.e(b + 1) = -0.5;
  prog.cones.push_back(std::move(cp));
  prog.nonneg.push_back(v);
  prog.validate();
  return prog;
}

void dump(const ConeProgram& prog, std::ostream& os) {
  const auto prec = os.precision(17);
  os << "VARS " << prog.num_vars << "\n";
  os << "OBJ";
  for (Eigen::Index k = 0; k < prog.c.size(); ++k)
    if (prog.c(k) != 0.0) os << " " << k << ":" << prog.c(k);
  os << "\n";
  os << "EQ " << prog.A.rows() << "\n";
  for (Eigen::Index i = 0; i < prog.A.rows(); ++i) {
    os << "row " << i << " rhs " << prog.b(i);
    for (Eigen::Index k = 0; k < prog.A.cols(); ++k)
      if (prog.A(i, k) != 0.0) os << " " << k << ":" << prog.A(i, k);
    os << "\n";
  }
  os << "NONNEG " << prog.nonneg.size();
  for (int k : prog.nonneg) os << " " << k;
  os << "\n";
  os << "CONES " << prog.cones.size() << "\n";
  for (std::size_t j = 0; j < prog.cones.size(); ++j) {
    const SocConstraint& cone = prog.cones[j];
    os << "cone " << j << " dim " << cone.dim() << "\n";
    for (int r = 0; r < cone.dim(); ++r) {
      os << "  " << r << " const " << cone.e(r);
      for (std::size_t m = 0; m < cone.members.size(); ++m)
        if (cone.D(r, static_cast<Eigen::Index>(m)) != 0.0)
          os << " " << cone.members[m] << ":" << cone.D(r, static_cast<Eigen::Index>(m));
      os << "\n";
    }
  }
  if (prog.eliminate)
    os << "ELIMINATE " << prog.eliminate->offset << " " << prog.eliminate->length << "\n";
  os.precision(prec);
}

}  // namespace gsmp
