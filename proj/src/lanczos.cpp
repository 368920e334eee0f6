#include "oddity/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "oddity/errors.hpp"

namespace oddity {

namespace {

using Locked = std::vector<std::vector<double>>;

struct RitzPair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
};

void project_out(const Locked& locked, Eigen::Ref<Eigen::VectorXd> w) {
  for (const auto& q : locked) {
    const Eigen::Map<const Eigen::VectorXd> qv(q.data(), static_cast<Eigen::Index>(q.size()));
    w -= qv.dot(w) * qv;
  }
}

double explicit_residual(const LinearOperator& op, const Locked& locked,
                         const Eigen::VectorXd& x, double theta) {
  Eigen::VectorXd ax(x.size());
  op(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
     std::span<double>(ax.data(), static_cast<std::size_t>(ax.size())));
  ax -= theta * x;
  project_out(locked, ax);
  return ax.norm();
}

RitzPair lowest_ritz_pair(const LinearOperator& op, std::size_t dim, const Locked& locked,
                          const std::vector<double>& start, double tol,
                          const LanczosOptions& opt, long& matvecs) {
  const auto n = static_cast<Eigen::Index>(dim);
  const auto free_dim = static_cast<int>(std::min<std::size_t>(
      dim - locked.size(), static_cast<std::size_t>(std::numeric_limits<int>::max())));
  const int m = std::max(1, std::min(opt.krylov_dim, free_dim));
  const int keep = std::max(0, std::min(opt.keep, m - 1));

  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);

  v.col(0) = Eigen::Map<const Eigen::VectorXd>(start.data(), n);
  project_out(locked, v.col(0));
  project_out(locked, v.col(0));
  const double start_norm = v.col(0).norm();
  if (!(start_norm > 0.0)) throw SolverError("start vector lies in the locked subspace", 0.0);
  v.col(0) /= start_norm;

  int first = 0;
  double last_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    int end = m;
    double beta = 0.0;
    bool invariant = false;
    for (int j = first; j < m; ++j) {
      op(std::span<const double>(v.col(j).data(), dim), std::span<double>(v.col(j + 1).data(), dim));
      ++matvecs;
      // Two passes of classical Gram-Schmidt against locked and Krylov vectors.
      for (int pass = 0; pass < 2; ++pass) {
        project_out(locked, v.col(j + 1));
        const Eigen::VectorXd c = v.leftCols(j + 1).transpose() * v.col(j + 1);
        v.col(j + 1).noalias() -= v.leftCols(j + 1) * c;
        if (pass == 0) {
          t.col(j).head(j + 1) = c;
        } else {
          t.col(j).head(j + 1) += c;
        }
      }
      t.row(j).head(j + 1) = t.col(j).head(j + 1).transpose();
      beta = v.col(j + 1).norm();
      const double scale = std::max(1.0, t.col(j).head(j + 1).cwiseAbs().maxCoeff());
      if (beta <= 1e-13 * scale) {
        invariant = true;
        end = j + 1;
        break;
      }
      v.col(j + 1) /= beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t.topLeftCorner(end, end));
    const Eigen::VectorXd& theta = eig.eigenvalues();
    const Eigen::MatrixXd& y = eig.eigenvectors();
    const double estimate = invariant ? 0.0 : beta * std::abs(y(end - 1, 0));
    last_residual = estimate;

    if (estimate <= tol) {
      Eigen::VectorXd x = v.leftCols(end) * y.col(0);
      project_out(locked, x);
      x.normalize();
      const double r = explicit_residual(op, locked, x, theta(0));
      ++matvecs;
      last_residual = r;
      if (r <= tol) {
        return {theta(0), std::vector<double>(x.data(), x.data() + x.size()), r};
      }
      if (invariant) {
        std::ostringstream msg;
        msg << "Lanczos: invariant subspace reached but residual " << r << " exceeds " << tol;
        throw SolverError(msg.str(), r);
      }
    }
    if (invariant) {
      // Exhausted subspace whose lowest pair did not pass: restart from it.
      Eigen::VectorXd x = v.leftCols(end) * y.col(0);
      v.col(0) = x.normalized();
      t.setZero();
      first = 0;
      continue;
    }

    const int kept = std::min(keep, end - 1);
    if (kept > 0) {
      const Eigen::MatrixXd ritz = v.leftCols(end) * y.leftCols(kept);
      v.leftCols(kept) = ritz;
    }
    v.col(kept) = v.col(end);
    t.setZero();
    for (int i = 0; i < kept; ++i) t(i, i) = theta(i);
    first = kept;
  }

  std::ostringstream msg;
  msg << "Lanczos did not converge after " << opt.max_restarts << " restarts (residual "
      << last_residual << ", target " << tol << ")";
  throw SolverError(msg.str(), last_residual);
}

}  // namespace

std::vector<double> seeded_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> out(dim);
  for (auto& x : out) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    x = 2.0 * u - 1.0;
  }
  return out;
}

Eigenspace lowest_eigenspace(const LinearOperator& op, std::size_t dim,
                             const LanczosOptions& options) {
  if (dim == 0) throw ContractError("lowest_eigenspace: empty space");
  Eigenspace space;
  Locked locked;
  std::uint64_t seed = options.seed;

  RitzPair ground = lowest_ritz_pair(op, dim, locked, seeded_vector(dim, seed), options.tolerance,
                                     options, space.matvecs);
  space.energy = ground.value;
  space.residual = ground.residual;
  space.values.push_back(ground.value);
  locked.push_back(std::move(ground.vector));
  space.next_value = std::numeric_limits<double>::quiet_NaN();

  while (locked.size() < dim) {
    ++seed;
    RitzPair probe = lowest_ritz_pair(op, dim, locked, seeded_vector(dim, seed),
                                      options.probe_tolerance, options, space.matvecs);
    if (probe.value - space.energy > options.degeneracy_tolerance) {
      space.next_value = probe.value;
      break;
    }
    if (static_cast<int>(locked.size()) >= options.max_multiplicity) {
      throw SolverError("lowest eigenspace exceeds max_multiplicity", probe.residual);
    }
    RitzPair partner = lowest_ritz_pair(op, dim, locked, probe.vector, options.tolerance, options,
                                        space.matvecs);
    space.energy = std::min(space.energy, partner.value);
    space.residual = std::max(space.residual, partner.residual);
    space.values.push_back(partner.value);
    locked.push_back(std::move(partner.vector));
  }
  space.vectors = std::move(locked);
  return space;
}

}  // namespace oddity
