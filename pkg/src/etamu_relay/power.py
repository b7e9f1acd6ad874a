"""
Power allocation across the source and the relays.

The high-SNR SER is a sum of monomials in the power fractions,

    f(a) = Σ_z c_z · a₀^(−2 e_{z,0}) · Π_k a_k^(−2 e_{z,k}),

with e_{z,0} = μ_SD + Σ_{k∉z} μ_{S,Rk} and e_{z,k} = μ_{Rk,D} for relays in
the decoding set z.  Every term is convex on the positive orthant, so a
projected gradient method on the simplex reaches the global minimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .network import NetworkModel, PowerAllocation, epa
from .ser import asymptotic_ser, asymptotic_terms

__all__ = [
    "OpaReport",
    "PowerObjective",
    "optimize_power",
    "kkt_residual",
    "verify_convexity",
    "epa",
    "project_simplex",
]

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class OpaReport:
    allocation: PowerAllocation
    ser: float
    kkt_residual: float
    iterations: int
    converged: bool
    boundary: bool = False


class PowerObjective:
    """Asymptotic SER as a function of the power-fraction vector.

    Values are normalised by the EPA value so the optimiser works on O(1)
    numbers regardless of the SNR.
    """

    def __init__(self, network: NetworkModel, mod):
        K = network.K
        self.network, self.mod, self.K = network, mod, K
        base = epa(K).as_array()
        terms = asymptotic_terms(network.with_allocation(epa(K)), mod)
        self.scale = float(terms.sum())
        mu_sd = network.sd.shape.mu
        mu_sr = np.array([ln.shape.mu for ln in network.sr])
        mu_rd = np.array([ln.shape.mu for ln in network.rd])
        n = 2**K
        E = np.zeros((n, K + 1))
        for z in range(n):
            mask = np.array([bool(z >> k & 1) for k in range(K)], dtype=bool)
            E[z, 0] = mu_sd + mu_sr[~mask].sum()
            E[z, 1:] = np.where(mask, mu_rd, 0.0)
        self.exponents = 2.0 * E
        # log c_z with the EPA point factored out
        self.log_c = np.log(terms / self.scale) + self.exponents @ np.log(base)

    def _terms(self, a):
        a = np.asarray(a, dtype=float)
        if np.any(a <= 0.0):
            return None
        return np.exp(self.log_c - self.exponents @ np.log(a))

    def value(self, a) -> float:
        t = self._terms(a)
        return math.inf if t is None else float(t.sum())

    def grad(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        t = self._terms(a)
        if t is None:
            raise DomainError("gradient is undefined on the simplex boundary")
        return -(t @ self.exponents) / a

    def ser(self, a) -> float:
        return self.value(a) * self.scale


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto {x ≥ 0, Σx = 1} (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _tangent_norm(g):
    return float(np.linalg.norm(g - g.mean()))


def optimize_power(
    network: NetworkModel,
    mod,
    max_iter: int = 100_000,
    gtol: float = 1e-10,
    ftol: float = 1e-14,
    start=None,
) -> OpaReport:
    """SER-minimising power split under the total-power constraint.

    Projected gradient descent with Barzilai-Borwein trial steps and Armijo
    backtracking, started from EPA unless ``start`` is given.
    """
    K = network.K
    if K < 1:
        raise DomainError("power optimisation needs at least one relay")
    obj = PowerObjective(network, mod)
    x = epa(K).as_array() if start is None else project_simplex(np.asarray(start, dtype=float))
    if np.any(x <= 0.0):
        raise DomainError("start point must lie in the simplex interior")
    fx = obj.value(x)
    g = obj.grad(x)
    step = 1.0 / max(np.linalg.norm(g), 1e-300)
    converged = False
    it = 0
    small = 0
    for it in range(1, max_iter + 1):
        if _tangent_norm(g) < gtol:
            converged = True
            break
        t = step
        while True:
            y = project_simplex(x - t * g)
            fy = obj.value(y)
            if fy <= fx + 1e-4 * float(g @ (y - x)):
                break
            t *= 0.5
            if t < 1e-300:
                break
        if not fy < math.inf or t < 1e-300:
            # no descent left in floating point: stationary if the tangent
            # gradient is negligible next to the full gradient
            converged = _tangent_norm(g) <= 1e-8 * max(1.0, float(np.linalg.norm(g)))
            break
        # stop after a few consecutive steps that barely move the objective
        if fx - fy <= ftol * abs(fx):
            small += 1
            if small >= 3:
                x, fx = (y, fy) if fy < fx else (x, fx)
                converged = True
                break
        else:
            small = 0
        gy = obj.grad(y)
        s, r = y - x, gy - g
        sr = float(s @ r)
        step = float(s @ s) / sr if sr > 0.0 else 2.0 * t
        x, fx, g = y, fy, gy
    boundary = bool(np.any(x < BOUNDARY_TOL))
    alloc = PowerAllocation.from_array(x / x.sum())
    res = math.nan if boundary else kkt_residual(network, mod, alloc)
    return OpaReport(alloc, asymptotic_ser(network.with_allocation(alloc), mod).value, res, it, converged, boundary)


def kkt_residual(network: NetworkModel, mod, alloc: PowerAllocation) -> float:
    """max_k |∂f/∂a₀ − ∂f/∂a_k| / |∂f/∂a₀| at an interior allocation."""
    a = alloc.as_array()
    if np.any(a <= 0.0):
        raise DomainError("KKT residual is defined for interior allocations only")
    g = PowerObjective(network, mod).grad(a)
    return float(np.max(np.abs(g[0] - g[1:])) / abs(g[0]))


def _tangent_basis(n: int) -> np.ndarray:
    # orthonormal basis of {v : Σv = 0}
    q, _ = np.linalg.qr(np.eye(n) - 1.0 / n)
    return q[:, : n - 1]


def verify_convexity(network: NetworkModel, mod, trials: int = 100, rng=None, objective=None) -> bool:
    """Check the tangent-space Hessian is PSD at random interior points.

    ``objective`` overrides the function under test (it receives the
    allocation vector); by default the normalised asymptotic SER is used.
    """
    K = network.K
    if K < 1:
        raise DomainError("convexity check needs at least one relay")
    rng = np.random.default_rng(rng)
    f = objective if objective is not None else PowerObjective(network, mod).value
    V = _tangent_basis(K + 1)
    for _ in range(trials):
        x = rng.dirichlet(np.ones(K + 1))
        x = 0.9 * x + 0.1 / (K + 1)  # keep away from the boundary
        h = 1e-4 * x.min()
        n = K
        H = np.empty((n, n))
        f0 = f(x)
        for i in range(n):
            for j in range(i, n):
                ei, ej = h * V[:, i], h * V[:, j]
                if i == j:
                    H[i, i] = (f(x + ei) - 2.0 * f0 + f(x - ei)) / (h * h)
                else:
                    H[i, j] = H[j, i] = (
                        f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
                    ) / (4.0 * h * h)
        lam = np.linalg.eigvalsh(H)
        scale = max(abs(np.trace(H)), 1e-300)
        if lam.min() < -1e-6 * scale:
            return False
    return True
