#include "redstates/reduction.hpp"

#include "redstates/detail/indexing.hpp"

namespace redstates {

namespace {

std::vector<int> traced_positions_checked(const SpaceSpec& space,
                                          const std::vector<std::string>& traced) {
  if (traced.empty()) throw std::invalid_argument("partial trace: traced set is empty");
  std::vector<int> pos = space.positions(traced);
  if (static_cast<int>(pos.size()) == space.factor_count())
    throw std::invalid_argument("partial trace: cannot trace every factor");
  return pos;
}

// rho_r(a, b) = sum_m rho(a+m, b+m) over the traced offsets; no factor
// permutation involved.
Eigen::MatrixXcd trace_out(const Eigen::MatrixXcd& m, const detail::IndexSplit& split) {
  const Eigen::Index d_kept = static_cast<Eigen::Index>(split.kept_offsets.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_kept, d_kept);
  for (Eigen::Index a = 0; a < d_kept; ++a)
    for (Eigen::Index b = 0; b < d_kept; ++b) {
      std::complex<double> sum = 0.0;
      for (Eigen::Index offset : split.split_offsets)
        sum += m(split.kept_offsets[a] + offset, split.kept_offsets[b] + offset);
      out(a, b) = sum;
    }
  return out;
}

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& traced) {
  const SpaceSpec& space = rho.space();
  std::vector<int> pos = traced_positions_checked(space, traced);
  detail::IndexSplit split = detail::split_offsets(space, pos);
  SpaceSpec retained = space.subspace(space.complement(traced));
  return DensityOperator(LinOp(std::move(retained), trace_out(rho.matrix(), split)),
                         Provenance::Reduced);
}

DensityOperator partial_trace(const StateVector& psi, const std::vector<std::string>& traced) {
  const SpaceSpec& space = psi.space();
  std::vector<int> pos = traced_positions_checked(space, traced);
  detail::IndexSplit split = detail::split_offsets(space, pos);
  const Eigen::Index d_kept = static_cast<Eigen::Index>(split.kept_offsets.size());
  const Eigen::VectorXcd& amp = psi.amplitudes();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d_kept, d_kept);
  for (Eigen::Index a = 0; a < d_kept; ++a)
    for (Eigen::Index b = 0; b < d_kept; ++b) {
      std::complex<double> sum = 0.0;
      for (Eigen::Index offset : split.split_offsets)
        sum += amp(split.kept_offsets[a] + offset) * std::conj(amp(split.kept_offsets[b] + offset));
      out(a, b) = sum;
    }
  SpaceSpec retained = space.subspace(space.complement(traced));
  return DensityOperator(LinOp(std::move(retained), std::move(out)), Provenance::Reduced);
}

std::vector<LinOp> hermitian_basis(const SpaceSpec& space) {
  const Eigen::Index d = space.total_dim();
  std::vector<LinOp> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    m(k, k) = 1.0;
    basis.emplace_back(space, std::move(m));
  }
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = k + 1; l < d; ++l) {
      Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, d);
      x(k, l) = 1.0;
      x(l, k) = 1.0;
      basis.emplace_back(space, std::move(x));
      Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(d, d);
      y(k, l) = std::complex<double>(0.0, 1.0);
      y(l, k) = std::complex<double>(0.0, -1.0);
      basis.emplace_back(space, std::move(y));
    }
  return basis;
}

double verify_reduced_definition(const DensityOperator& rho, const DensityOperator& rho_r,
                                 const std::vector<std::string>& retained) {
  const SpaceSpec retained_space = rho.space().subspace(retained);
  if (rho_r.space() != retained_space)
    throw std::invalid_argument("verify_reduced_definition: mismatched spaces");
  double max_residual = 0.0;
  for (const LinOp& o1 : hermitian_basis(retained_space)) {
    const double lhs = expectation(rho, lift(o1, rho.space()));
    const double rhs = expectation(rho_r, o1);
    max_residual = std::max(max_residual, std::abs(lhs - rhs));
  }
  return max_residual;
}

LinOp apply_coarse_graining(const LinOp& op, const std::vector<std::string>& traced) {
  const SpaceSpec& space = op.space();
  std::vector<int> pos = traced_positions_checked(space, traced);
  detail::IndexSplit split = detail::split_offsets(space, pos);
  const Eigen::Index d_kept = static_cast<Eigen::Index>(split.kept_offsets.size());
  const Eigen::Index d_traced = static_cast<Eigen::Index>(split.split_offsets.size());
  Eigen::MatrixXcd reduced = trace_out(op.matrix(), split);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(space.total_dim(), space.total_dim());
  const double inv = 1.0 / static_cast<double>(d_traced);
  for (Eigen::Index a = 0; a < d_kept; ++a)
    for (Eigen::Index b = 0; b < d_kept; ++b) {
      const std::complex<double> v = reduced(a, b) * inv;
      if (v == std::complex<double>(0.0, 0.0)) continue;
      for (Eigen::Index m = 0; m < d_traced; ++m)
        out(split.kept_offsets[a] + split.split_offsets[m],
            split.kept_offsets[b] + split.split_offsets[m]) = v;
    }
  return LinOp(space, std::move(out));
}

CoarseGrainedState coarse_grain(const DensityOperator& rho,
                                const std::vector<std::string>& traced) {
  LinOp cg = apply_coarse_graining(rho.op(), traced);
  const SpaceSpec traced_space = rho.space().subspace(traced);
  LinOp delta(traced_space,
              Eigen::MatrixXcd::Identity(traced_space.total_dim(), traced_space.total_dim()) /
                  static_cast<double>(traced_space.total_dim()));
  return CoarseGrainedState{DensityOperator(std::move(cg), Provenance::CoarseGrained),
                            traced, std::move(delta)};
}

DensityOperator recover_reduced(const CoarseGrainedState& cg) {
  return partial_trace(cg.rho_cg, cg.traced_labels);
}

double coarse_grained_expectation_check(const DensityOperator& rho, const LinOp& o1,
                                        const std::vector<std::string>& traced) {
  const std::vector<std::string> retained = rho.space().complement(traced);
  if (o1.space() != rho.space().subspace(retained))
    throw std::invalid_argument("coarse_grained_expectation_check: observable space mismatch");
  CoarseGrainedState cg = coarse_grain(rho, traced);
  const double via_cg = expectation(cg.rho_cg, lift(o1, rho.space()));
  const double via_reduced = expectation(partial_trace(rho, traced), o1);
  return std::abs(via_cg - via_reduced);
}

std::vector<CoarseGrainedState> coarse_grained_trajectory(
    const DensityOperator& rho0, const Hamiltonian& h,
    const std::vector<double>& times, const std::vector<std::string>& traced) {
  if (rho0.space() != h.space())
    throw std::invalid_argument("coarse_grained_trajectory: state/Hamiltonian space mismatch");
  EvolutionPlan plan(h);
  std::vector<CoarseGrainedState> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(coarse_grain(plan.evolve(rho0, t), traced));
  return out;
}

Eigen::MatrixXcd materialize_projector(const SpaceSpec& space,
                                       const std::vector<std::string>& traced) {
  const Eigen::Index d = space.total_dim();
  if (d > 36)
    throw std::invalid_argument("materialize_projector: total dimension above the test cap (36)");
  Eigen::MatrixXcd out(d * d, d * d);
  for (Eigen::Index l = 0; l < d; ++l)
    for (Eigen::Index k = 0; k < d; ++k) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
      unit(k, l) = 1.0;
      Eigen::MatrixXcd image = apply_coarse_graining(LinOp(space, std::move(unit)), traced).matrix();
      out.col(l * d + k) = Eigen::Map<const Eigen::VectorXcd>(image.data(), d * d);
    }
  return out;
}

}  // namespace redstates
