#include "tsqm/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "tsqm/rng.hpp"

namespace tsqm {

bool is_finite(const Vec& v) { return v.allFinite(); }
bool is_finite(const Mat& m) { return m.allFinite(); }

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

bool is_normalized(const Vec& v, double tol) {
  return std::abs(v.squaredNorm() - 1.0) <= tol;
}

namespace {

void check_capacity(std::size_t entries, std::size_t cap) {
  if (entries > cap) {
    throw CapacityError("tensor product would have " + std::to_string(entries) +
                        " entries, exceeding the configured cap of " + std::to_string(cap));
  }
}

void check_finite_operands(bool ok) {
  if (!ok) throw ValidationError("tensor operands must be finite");
}

// First component with |c| > 1e-12 is made real positive.
void fix_phase(Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-12) {
      v *= std::conj(v[i]) / mag;
      return;
    }
  }
}

}  // namespace

Vec tensor(const Vec& a, const Vec& b, std::size_t cap) {
  check_finite_operands(is_finite(a) && is_finite(b));
  check_capacity(static_cast<std::size_t>(a.size()) * static_cast<std::size_t>(b.size()), cap);
  return Eigen::kroneckerProduct(a, b);
}

Mat tensor(const Mat& a, const Mat& b, std::size_t cap) {
  check_finite_operands(is_finite(a) && is_finite(b));
  check_capacity(static_cast<std::size_t>(a.size()) * static_cast<std::size_t>(b.size()), cap);
  return Eigen::kroneckerProduct(a, b);
}

EigenSystem eig_hermitian(const Mat& a, double herm_tol) {
  if (a.rows() != a.cols()) throw DimensionError("eig_hermitian: matrix must be square");
  if (!is_hermitian(a, herm_tol)) {
    throw ValidationError("eig_hermitian: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  }
  EigenSystem es;
  es.values = solver.eigenvalues();
  es.vectors.reserve(a.rows());
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    Vec v = solver.eigenvectors().col(k);
    fix_phase(v);
    es.vectors.push_back(std::move(v));
  }
  return es;
}

Mat eig_reconstruct(const EigenSystem& es) {
  const Eigen::Index n = es.vectors.empty() ? 0 : es.vectors.front().size();
  Mat out = Mat::Zero(n, n);
  for (std::size_t k = 0; k < es.vectors.size(); ++k) {
    out += es.values[static_cast<Eigen::Index>(k)] * (es.vectors[k] * es.vectors[k].adjoint());
  }
  return out;
}

Vec random_state(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("random_state: dim must be >= 1");
  std::mt19937_64 rng(seed);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    v[i] = Complex(re, im);
  }
  const double n = v.norm();
  if (n == 0.0) {
    v.setZero();
    v[0] = 1.0;
  } else {
    v /= n;
  }
  fix_phase(v);
  return v;
}

std::vector<EigenSpace> eigenspaces(const Mat& a, double herm_tol, double degeneracy_tol) {
  const EigenSystem es = eig_hermitian(a, herm_tol);
  const double scale = std::max(1.0, std::abs(es.values[es.values.size() - 1] - es.values[0]));
  std::vector<EigenSpace> spaces;
  Eigen::Index k = 0;
  while (k < es.values.size()) {
    Eigen::Index j = k;
    Mat proj = Mat::Zero(a.rows(), a.cols());
    double sum = 0.0;
    while (j < es.values.size() && es.values[j] - es.values[k] <= degeneracy_tol * scale) {
      proj += es.vectors[static_cast<std::size_t>(j)] * es.vectors[static_cast<std::size_t>(j)].adjoint();
      sum += es.values[j];
      ++j;
    }
    spaces.push_back({sum / static_cast<double>(j - k), std::move(proj)});
    k = j;
  }
  return spaces;
}

}  // namespace tsqm
