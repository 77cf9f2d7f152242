#include "redstates/linop.hpp"

#include "redstates/detail/indexing.hpp"

namespace redstates {

namespace detail {

IndexSplit split_offsets(const SpaceSpec& space, const std::vector<int>& split_positions) {
  const int nf = space.factor_count();
  std::vector<bool> is_split(static_cast<std::size_t>(nf), false);
  for (int p : split_positions) is_split[static_cast<std::size_t>(p)] = true;

  Eigen::Index kept_count = 1, split_count = 1;
  for (int k = 0; k < nf; ++k)
    (is_split[static_cast<std::size_t>(k)] ? split_count : kept_count) *= space.factor(k).dim;

  IndexSplit out;
  out.kept_offsets.assign(static_cast<std::size_t>(kept_count), 0);
  out.split_offsets.assign(static_cast<std::size_t>(split_count), 0);

  // Row-major enumeration of the selected factors, offsets in the composite
  // index.
  auto fill = [&](std::vector<Eigen::Index>& offsets, bool want_split) {
    Eigen::Index period = 1;  // repeats of the current digit pattern
    for (int k = nf - 1; k >= 0; --k) {
      if (is_split[static_cast<std::size_t>(k)] != want_split) continue;
      const Eigen::Index dim = space.factor(k).dim;
      const Eigen::Index stride = space.strides()[static_cast<std::size_t>(k)];
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(offsets.size()); ++i) {
        const Eigen::Index digit = (i / period) % dim;
        offsets[static_cast<std::size_t>(i)] += digit * stride;
      }
      period *= dim;
    }
  };
  fill(out.kept_offsets, false);
  fill(out.split_offsets, true);
  return out;
}

}  // namespace detail

LinOp::LinOp(SpaceSpec space, Eigen::MatrixXcd matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim())
    throw std::invalid_argument("LinOp: matrix size does not match space " + space_.describe());
}

LinOp LinOp::identity(const SpaceSpec& space) {
  return LinOp(space, Eigen::MatrixXcd::Identity(space.total_dim(), space.total_dim()));
}

LinOp LinOp::zero(const SpaceSpec& space) {
  return LinOp(space, Eigen::MatrixXcd::Zero(space.total_dim(), space.total_dim()));
}

LinOp LinOp::adjoint() const { return LinOp(space_, matrix_.adjoint()); }

bool LinOp::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).norm() <= tol;
}

namespace {
void require_same_space(const LinOp& a, const LinOp& b, const char* what) {
  if (a.space() != b.space())
    throw std::invalid_argument(std::string(what) + ": space mismatch (" + a.space().describe() +
                                " vs " + b.space().describe() + ")");
}
}  // namespace

LinOp LinOp::operator+(const LinOp& other) const {
  require_same_space(*this, other, "LinOp::operator+");
  return LinOp(space_, matrix_ + other.matrix_);
}

LinOp LinOp::operator-(const LinOp& other) const {
  require_same_space(*this, other, "LinOp::operator-");
  return LinOp(space_, matrix_ - other.matrix_);
}

LinOp LinOp::operator*(const LinOp& other) const {
  require_same_space(*this, other, "LinOp::operator*");
  return LinOp(space_, matrix_ * other.matrix_);
}

LinOp operator*(std::complex<double> scalar, const LinOp& op) {
  return LinOp(op.space(), scalar * op.matrix());
}

LinOp tensor_product(const LinOp& a, const LinOp& b) {
  SpaceSpec product = concat(a.space(), b.space());  // checks labels and the cap
  const Eigen::Index da = a.matrix().rows(), db = b.matrix().rows();
  Eigen::MatrixXcd out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return LinOp(std::move(product), std::move(out));
}

LinOp lift(const LinOp& op, const SpaceSpec& target) {
  const std::vector<std::string> own = op.space().labels();
  std::vector<int> own_positions;
  own_positions.reserve(own.size());
  for (const std::string& l : own) own_positions.push_back(target.position(l));
  for (std::size_t i = 0; i + 1 < own_positions.size(); ++i)
    if (own_positions[i] >= own_positions[i + 1])
      throw std::invalid_argument("lift: factor order differs from the target's");
  if (op.space() != target.subspace(own))
    throw std::invalid_argument("lift: factor dims differ from the target's");

  std::vector<int> others;
  for (int k = 0; k < target.factor_count(); ++k)
    if (!op.space().has_label(target.factor(k).label)) others.push_back(k);

  detail::IndexSplit split = detail::split_offsets(target, others);
  const Eigen::Index d_own = static_cast<Eigen::Index>(split.kept_offsets.size());
  const Eigen::Index d_rest = static_cast<Eigen::Index>(split.split_offsets.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(target.total_dim(), target.total_dim());
  for (Eigen::Index a = 0; a < d_own; ++a)
    for (Eigen::Index b = 0; b < d_own; ++b) {
      const std::complex<double> v = op.matrix()(a, b);
      if (v == std::complex<double>(0.0, 0.0)) continue;
      for (Eigen::Index m = 0; m < d_rest; ++m)
        out(split.kept_offsets[a] + split.split_offsets[m],
            split.kept_offsets[b] + split.split_offsets[m]) = v;
    }
  return LinOp(target, std::move(out));
}

LinOp embed(const LinOp& o1, const SpaceSpec& target, const std::string& at) {
  if (o1.space().factor_count() != 1)
    throw std::invalid_argument("embed: operator must live on a single factor");
  const int pos = target.position(at);
  if (o1.space().total_dim() != target.factor(pos).dim)
    throw std::invalid_argument("embed: dimension mismatch at factor '" + at + "'");
  return lift(LinOp(SpaceSpec::single(at, target.factor(pos).dim), o1.matrix()), target);
}

LinOp commutator(const LinOp& a, const LinOp& b) {
  require_same_space(a, b, "commutator");
  return LinOp(a.space(), a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double frobenius_distance(const LinOp& a, const LinOp& b) {
  require_same_space(a, b, "frobenius_distance");
  return (a.matrix() - b.matrix()).norm();
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << std::complex<double>(0, 0), std::complex<double>(0, -1), std::complex<double>(0, 1),
      std::complex<double>(0, 0);
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace redstates
