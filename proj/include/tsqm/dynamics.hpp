#ifndef TSQM_DYNAMICS_HPP
#define TSQM_DYNAMICS_HPP

#include "tsqm/multistate.hpp"
#include "tsqm/two_state.hpp"

namespace tsqm {

// Piecewise-constant Hamiltonian segment, hbar = 1.
struct EvolutionSpec {
  Mat hamiltonian;
  double t0 = 0.0;
  double t1 = 0.0;
};

// U r U^dag with U = exp(-iH(t1-t0)), computed by exact eigendecomposition
// (dimensions in this library stay small). Preserves the trace and the
// two-state inner product.
TwoState evolve(const TwoState& r, const EvolutionSpec& spec);

// The corresponding unitary, exposed for Heisenberg-picture checks.
Mat evolution_operator(const EvolutionSpec& spec);

// Factor-wise per-interval conjugation, linear over terms.
MultipleState evolve_multi(const MultipleState& m, const std::vector<EvolutionSpec>& specs);

// A two-amplitude rho(x', x'') on a uniform 1D lattice with hard-wall
// (Dirichlet) boundaries, mass m and a local potential. The generator is
// H(x',p') - H(x'',p'') with centered second-difference Laplacians.
struct LatticeTwoAmplitude {
  Eigen::Index points = 0;
  double dx = 0.0;
  double mass = 1.0;
  RVec potential;  // V at each grid point
  Mat values;      // rho(x'_j, x''_k), points x points

  void validate() const;
};

// Unconditionally stable Cayley (Crank-Nicolson) stepping of
// i d(rho)/dt = H rho - rho H. Each step is a unitary conjugation on the
// lattice, so sum |rho|^2 dx^2 is conserved to roundoff. Steps larger than
// the accuracy guard dt*lambda_max <= 2 are rejected up front.
LatticeTwoAmplitude evolve_lattice(const LatticeTwoAmplitude& rho, double dt, int steps);

// Max-norm of the discrete continuity defect
//   d/dt(rho1* rho2) + div_x' J' - div_x'' J''
// for two states on the same grid, evaluated at the midpoint of one dt
// step with half-cell currents matched to the evolution stencil. The three
// cells nearest each hard wall are excluded.
double continuity_residual(const LatticeTwoAmplitude& r1, const LatticeTwoAmplitude& r2,
                           double dt);

}  // namespace tsqm

#endif  // TSQM_DYNAMICS_HPP
