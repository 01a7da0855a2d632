"""Aleksandrov-Clark measures of finite Blaschke products.

For a finite Blaschke product f with f(0) = 0 and alpha on the circle, the
measure mu_alpha is purely atomic: its atoms are the deg(f) boundary
solutions of f(zeta) = alpha, each carrying weight 1 / |f'(zeta)|.  Atoms
are located by unwrapping the strictly increasing boundary phase on a
coarse grid and bisecting each branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blaschke import TWO_PI, BlaschkeProduct, CirclePoint, jet_of_iterate, \
    iterate_derivative_on_circle
from .errors import BudgetExceeded, NonConvergence, RootBracketFailure
from .quadrature import circle_grid, degree_aware_grid, integrate, next_power_of_two

ATOM_COUNT_CAP = 4096
ANGLE_TOL = 1e-13
WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True)
class ClarkMeasure:
    alpha: CirclePoint
    atoms: tuple  # of (CirclePoint, weight)
    source_degree: int

    @property
    def angles(self) -> np.ndarray:
        return np.array([p.theta for p, _ in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    def moment(self, order: int) -> complex:
        """int z^order d mu_alpha as an atomic sum."""
        return complex(np.sum(self.weights * np.exp(1j * order * self.angles)))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha.theta,
            "atoms": [[p.theta, w] for p, w in self.atoms],
        }


@dataclass(frozen=True)
class MomentPolynomial:
    """Coefficients of the trigonometric polynomial alpha -> int conj(z)^l d mu_alpha.

    For l > 0 the polynomial is sum_k coeffs[k-1] * conj(alpha)^k; for l < 0
    it is the conjugate expansion in powers of alpha.
    """

    order: int
    coeffs: tuple

    def eval_at(self, alpha: complex) -> complex:
        base = np.conj(alpha) if self.order > 0 else alpha
        return complex(sum(c * base ** (k + 1) for k, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class MomentBoundCheck:
    passed: bool
    max_coeff: float
    bound: float
    vacuous: bool


class BoundaryAtomSolver:
    """Caches the unwrapped boundary phase of f^n and solves f^n(zeta) = alpha.

    The lifted phase increases by 2 pi deg(f)^n over one turn, so each of
    the deg(f)^n branches is bracketed on the grid and bisected.
    """

    def __init__(self, f: BlaschkeProduct, power: int = 1, grid_factor: int = 16):
        if power < 1:
            raise ValueError("power must be >= 1")
        self.f = f
        self.power = power
        self.total_degree = f.degree ** power
        if self.total_degree > ATOM_COUNT_CAP:
            raise BudgetExceeded(
                f"degree {f.degree}^{power} = {self.total_degree} exceeds atom cap {ATOM_COUNT_CAP}")
        grid_size = max(4096, next_power_of_two(grid_factor * self.total_degree))
        while True:
            if self._try_build(grid_size):
                return
            if grid_size >= 2 ** 18:
                raise RootBracketFailure(
                    f"boundary phase not monotone on grid {grid_size}")
            grid_size *= 2

    def _try_build(self, grid_size: int) -> bool:
        thetas = TWO_PI * np.arange(grid_size) / grid_size
        vals = self.f.boundary_orbit(np.exp(1j * thetas), self.power)
        phases = np.unwrap(np.angle(vals))
        wrap_increment = (phases[0] + TWO_PI * self.total_degree) - phases[-1]
        increments = np.append(np.diff(phases), wrap_increment)
        # per-cell swing must stay below pi/2 so bracketing and the relative
        # phase used by the bisection cannot wrap
        if np.any(increments <= 0) or np.max(increments) > 0.5 * math.pi:
            return False
        self.grid_size = grid_size
        self.grid_thetas = np.append(thetas, TWO_PI)
        self.phases = np.append(phases, phases[0] + TWO_PI * self.total_degree)
        return True

    def _orbit_value(self, theta: np.ndarray) -> np.ndarray:
        return self.f.boundary_orbit(np.exp(1j * theta), self.power)

    def atom_angles(self, alpha_theta: float) -> np.ndarray:
        """All solutions theta of f^n(e^{i theta}) = e^{i alpha_theta}."""
        d = self.total_degree
        base = self.phases[0]
        offset = (alpha_theta - base) % TWO_PI
        levels = base + offset + TWO_PI * np.arange(d)
        hi_idx = np.searchsorted(self.phases, levels)
        hi_idx = np.clip(hi_idx, 1, self.grid_size)
        lo = self.grid_thetas[hi_idx - 1].copy()
        hi = self.grid_thetas[hi_idx].copy()
        # per-cell phase swing < pi, so the relative phase has no wraparound
        targets = np.exp(1j * levels)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            u = np.angle(self._orbit_value(mid) * np.conj(targets))
            below = u < 0
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.max(hi - lo) < ANGLE_TOL:
                break
        return (0.5 * (lo + hi)) % TWO_PI

    def atoms(self, alpha_theta: float):
        angles = self.atom_angles(alpha_theta)
        deriv = iterate_derivative_on_circle(self.f, np.exp(1j * angles), self.power)
        weights = 1.0 / np.abs(deriv)
        return angles, weights


def clark_measure(f: BlaschkeProduct, alpha: CirclePoint, power: int = 1) -> ClarkMeasure:
    """The Clark measure of f^power at spectral parameter alpha."""
    solver = BoundaryAtomSolver(f, power)
    angles, weights = solver.atoms(alpha.theta)
    total = float(np.sum(weights))
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise RootBracketFailure(
            f"clark weights sum to {total}, not 1; atom solve is suspect")
    atoms = tuple((CirclePoint(t), float(w)) for t, w in zip(angles, weights))
    return ClarkMeasure(alpha=alpha, atoms=atoms, source_degree=solver.total_degree)


def check_first_moment(f: BlaschkeProduct, alpha: CirclePoint, power: int = 1) -> float:
    """Residual of int z d mu_alpha = conj(f'(0)) alpha for f^power."""
    mu = clark_measure(f, alpha, power)
    jet = jet_of_iterate(f, power)
    target = np.conj(jet.c1) * alpha.value
    return abs(mu.moment(1) - target)


def check_second_moment(f: BlaschkeProduct, alpha: CirclePoint, power: int = 1) -> float:
    """Residual of int z^2 d mu_alpha = conj(f''(0)/2) alpha + conj(f'(0))^2 alpha^2."""
    mu = clark_measure(f, alpha, power)
    jet = jet_of_iterate(f, power)
    a = alpha.value
    target = np.conj(jet.c2) * a + np.conj(jet.c1) ** 2 * a ** 2
    return abs(mu.moment(2) - target)


def desintegrate(f: BlaschkeProduct, observable, k_alpha: int = 512, power: int = 1):
    """Average the atomic Clark integrals of observable over alpha.

    Returns (double integral value, residual against int observable dm),
    realizing m = int mu_alpha dm(alpha).
    """
    if k_alpha < 64:
        raise ValueError("k_alpha must be >= 64")
    solver = BoundaryAtomSolver(f, power)
    alphas = TWO_PI * np.arange(k_alpha) / k_alpha
    inner = np.empty(k_alpha, dtype=complex)
    for i, at in enumerate(alphas):
        angles, weights = solver.atoms(at)
        inner[i] = np.sum(weights * observable(np.exp(1j * angles)))
    double = complex(np.mean(inner))
    direct = integrate(observable, tol=1e-13).value
    return double, abs(double - direct)


def moment_polynomial(f: BlaschkeProduct, power: int, order: int,
                      tol: float = 1e-12) -> MomentPolynomial:
    """Coefficients c_k = k-th alpha-coefficient of int conj(z)^order d mu_alpha.

    The measures are those of f^power; c_k is the Taylor coefficient of
    z^|order| in (f^power)^k, extracted by circle quadrature.
    """
    if order == 0:
        raise ValueError("order must be nonzero")
    ell = abs(order)
    top_degree = ell * (f.degree ** power) + ell
    grid = degree_aware_grid(top_degree)
    coeffs = []
    for k in range(1, ell + 1):
        def g(z, k=k):
            fn = f.boundary_orbit(z, power)
            return fn ** k * np.conj(z) ** ell
        c = integrate(g, tol=tol, min_grid=grid).value
        coeffs.append(c if order > 0 else np.conj(c))
    return MomentPolynomial(order=order, coeffs=tuple(coeffs))


def check_moment_bound(f: BlaschkeProduct, power: int, order: int) -> MomentBoundCheck:
    """Check max_k |c_k| <= |f'(0)|^{power/2} for the moments of f^power."""
    if not 1 <= abs(order) <= power:
        raise ValueError("need 1 <= |order| <= power")
    a = abs(f.taylor_at_zero().c1)
    poly = moment_polynomial(f, power, order)
    max_coeff = max(abs(c) for c in poly.coeffs)
    if a == 0.0:
        return MomentBoundCheck(max_coeff <= 1e-12, max_coeff, 0.0, True)
    bound = a ** (power / 2.0)
    return MomentBoundCheck(max_coeff <= bound + 1e-12, max_coeff, bound, False)


def moment_bound_onset(f: BlaschkeProduct, power_values, order_cap: int = 3):
    """Smallest power from which the moment bound holds for all tested orders.

    Returns None if no tested power starts an all-pass suffix.
    """
    powers = sorted(power_values)
    passes = {}
    for n in powers:
        ok = True
        for ell in range(1, min(n, order_cap) + 1):
            try:
                if not check_moment_bound(f, n, ell).passed:
                    ok = False
                    break
            except (BudgetExceeded, NonConvergence):
                ok = False
                break
        passes[n] = ok
    onset = None
    for n in reversed(powers):
        if passes[n]:
            onset = n
        else:
            break
    return onset
