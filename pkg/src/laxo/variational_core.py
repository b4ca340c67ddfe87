"""The variational solution formula.

For u_t + f(u)_x = 0 the functional is

    E(u; x, t) = t * int_0^u f''(s) ( phi(x - t f'(s)) - s ) ds,

whose maximizer set U(x,t) yields the entropy solution through its extreme
points: u(x,t) = u+ = inf U(x,t) and the left trace u- = sup U(x,t).

E is evaluated in closed form through the substitution y = x - t f'(s):

    E(u; x, t) = Phi(x - t f'(0)) - Phi(x - t f'(u)) - t * int_0^u s f''(s) ds,

with the exact primitive Phi carrying all the data roughness; the remaining
integrand is smooth and handled by fixed high-order Gauss panels.  The same
pipeline serves the general pair U(u)_t + F(u)_x = 0 with H = F'/U', where
Phi is replaced by a primitive of U(phi).
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._quad import _GL_W, _GL_X, adaptive_simpson
from .flux import GeneralFluxPair
from .initial_data import SampledData

N_SCAN = 2048
VAL_TOL = 1e-9
JUMP_TOL = 1e-6
TOL_U = 1e-12


def _identity(a):
    return a


def _ones(a):
    return np.ones_like(np.asarray(a, dtype=float))


@dataclass(frozen=True)
class MaximizerSet:
    components: tuple          # sorted tuple of (lo, hi) closed intervals
    u_plus: float
    u_minus: float
    max_value: float


@dataclass(frozen=True)
class SolutionSample:
    x: float
    t: float
    u_minus: float
    u_plus: float
    is_shock: bool
    maximizer: MaximizerSet


class _NumericPrimitive:
    """Vectorized primitive of U(phi) for piecewise data, W(0) = 0.

    Precomputes cumulative integrals at dense knots inside each smooth
    segment of the data window; off-window behaviour follows the data's
    constant tails or periodicity.
    """

    def __init__(self, U, data, knots_per_segment=256):
        self._U = U
        self._d = data
        g = U(data.phi(np.asarray([0.0])))  # smoke evaluation
        del g
        if data.is_sampled:
            # phi is constant between knots: cumulative sums are exact
            self._k = np.asarray(data.xs, dtype=float)
            seg = np.asarray(U(data.us[:-1])) * np.diff(self._k)
            self._v = np.concatenate([[0.0], np.cumsum(seg)])
        else:
            bks = [p.lo for p in data.pieces] + [data.w_hi]
            if not data.pieces:
                bks = [data.w_lo, data.w_hi]
            knots = [np.asarray(bks[:1])]
            for a, b in zip(bks[:-1], bks[1:]):
                if b > a:
                    knots.append(np.linspace(a, b, knots_per_segment + 1)[1:])
            self._k = np.concatenate(knots)
            f = lambda y: U(data.phi(y))
            vals = [0.0]
            for a, b in zip(self._k[:-1], self._k[1:]):
                vals.append(vals[-1] + adaptive_simpson(f, a, b, 1e-13, max_depth=24))
            self._v = np.asarray(vals)
        self._win = self._v[-1]
        self._ul = U(data.phi(data.w_lo - 1.0)) if data.period is None else None
        self._ur = U(data.phi(data.w_hi + 1.0)) if data.period is None else None
        self._norm = 0.0
        self._norm = float(self(0.0))

    def __call__(self, x):
        d = self._d
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x).astype(float)
        if d.period is not None:
            kk = np.floor((x - d.w_lo) / d.period)
            r = np.clip(x - kk * d.period, d.w_lo, d.w_hi)
            out = self._interior(r) + kk * self._win
        else:
            r = np.clip(x, d.w_lo, d.w_hi)
            out = self._interior(r)
            out = np.where(x < d.w_lo, self._ul * (x - d.w_lo), out)
            out = np.where(x > d.w_hi, self._win + self._ur * (x - d.w_hi), out)
        out = out - self._norm
        return float(out[0]) if scalar else out

    def _interior(self, r):
        idx = np.clip(np.searchsorted(self._k, r, side="right") - 1,
                      0, len(self._k) - 2)
        x0 = self._k[idx]
        h = r - x0
        f = lambda y: self._U(self._d.phi(y))
        # Simpson from the base knot; knots never straddle data breakpoints
        return self._v[idx] + h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(r))


class GeneralProblem:
    """Variational problem for the pair (U, F); U = id gives the scalar case."""

    def __init__(self, pair, data, n_scan=N_SCAN, val_tol=VAL_TOL,
                 jump_tol=JUMP_TOL, tol_u=TOL_U):
        self.pair = pair
        self.data = data
        self.n_scan = int(n_scan)
        self.val_tol = float(val_tol)
        self.jump_tol = float(jump_tol)
        self.tol_u = float(tol_u)
        self._H = pair.H
        self._Hp = pair.Hprime
        self._U = pair.U
        if pair.U is _identity:
            self._W = data.primitive
        else:
            self._W = _NumericPrimitive(pair.U, data)
        M = data.bound
        self.M = M
        delta = 1e-6 * (1.0 + M)
        self._s = np.linspace(-M - delta, M + delta, self.n_scan + 1)
        self._Hs = np.asarray(self._H(self._s), dtype=float)
        self._H0 = float(self._H(0.0))
        # cumulative int H'(s) U(s) ds along the grid (5-point Gauss panels)
        a, b = self._s[:-1], self._s[1:]
        mid = 0.5 * (a + b)[:, None]
        half = 0.5 * (b - a)[:, None]
        nodes = mid + half * _GL_X[None, :]
        gi = np.asarray(self._Hp(nodes)) * np.asarray(self._U(nodes))
        panel = (half[:, 0]) * (gi @ _GL_W)
        self._P2 = np.concatenate([[0.0], np.cumsum(panel)])
        self._P2 -= self._p2_raw(0.0)

    # -- scalar helpers ---------------------------------------------------

    def _p2_raw(self, u):
        """int from s[0] to u of H'(s)U(s) ds, u inside the scan range."""
        k = int(np.clip(np.searchsorted(self._s, u) - 1, 0, self.n_scan - 1))
        a = self._s[k]
        mid, half = 0.5 * (a + u), 0.5 * (u - a)
        nodes = mid + half * _GL_X
        return self._P2[k] + half * float(
            (np.asarray(self._Hp(nodes)) * np.asarray(self._U(nodes))) @ _GL_W)

    def _p2(self, u):
        return self._p2_raw(u)

    def eval_E(self, u, x, t):
        """E(u; x, t), exact up to the smooth Gauss panels."""
        W = self._W
        return float(W(x - t * self._H0) - W(x - t * self._H(u))
                     - t * self._p2(u))

    def _psi(self, u, x, t):
        """sign(dE/du) carrier: U(phi(x - t H(u))) - U(u)."""
        return float(self._U(self.data.phi(x - t * self._H(u)))
                     - self._U(u))

    # -- maximization ------------------------------------------------------

    def maximize(self, x, t):
        if t <= 0:
            raise ValueError("t must be positive")
        s, Hs = self._s, self._Hs
        W = self._W
        feet = x - t * Hs
        Wf = np.asarray(W(feet))
        Ev = (W(x - t * self._H0) - Wf) - t * self._P2
        g = np.abs(np.asarray(self._Hp(s))
                   * (np.asarray(self._U(self.data.phi(feet)))
                      - np.asarray(self._U(s))))
        h = s[1] - s[0]
        Emax_grid = float(np.max(Ev))

        # local maxima (group plateaus, keep representatives)
        lm = np.zeros(len(s), dtype=bool)
        lm[1:-1] = (Ev[1:-1] >= Ev[:-2]) & (Ev[1:-1] >= Ev[2:])
        lm[0] = Ev[0] >= Ev[1]
        lm[-1] = Ev[-1] >= Ev[-2]
        idxs = np.flatnonzero(lm)
        reps = []
        for j in idxs:
            if reps and j - reps[-1][-1] == 1:
                reps[-1].append(j)
            else:
                reps.append([j])
        cands = []
        for grp in reps:
            j = grp[len(grp) // 2]
            lo, hi = max(j - 1, 0), min(j + 1, len(s) - 1)
            gloc = float(np.max(g[lo:hi + 1]))
            if Ev[j] + t * h * gloc < Emax_grid - 10.0 * self.val_tol:
                continue
            cands.append((s[lo], s[hi]))

        refined = []
        for lo, hi in cands:
            u_star = self._refine_bracket(lo, hi, x, t)
            refined.append((u_star, self.eval_E(u_star, x, t)))
        Emax = max([Emax_grid] + [e for _, e in refined])
        thresh = Emax - self.val_tol

        # value-band runs on the grid
        mask = Ev >= thresh
        runs = []
        j = 0
        while j < len(s):
            if mask[j]:
                j0 = j
                while j + 1 < len(s) and mask[j + 1]:
                    j += 1
                runs.append((s[max(j0 - 1, 0)], s[j0], s[j], s[min(j + 1, len(s) - 1)]))
            j += 1
        pts = sorted(u for u, e in refined if e >= thresh)
        flat_tol = 1e-11 * (1.0 + abs(Emax))
        comps = []
        for out_lo, lo, hi, out_hi in runs:
            inside = [u for u in pts if lo - 1.5 * h <= u <= hi + 1.5 * h]
            if hi - lo > 2.5 * h:
                # genuine maximizer intervals have exactly constant E;
                # otherwise the band is a flat peak of a degenerate flux
                probes = np.linspace(lo, hi, 7)[1:-1]
                spread = Emax - min(self.eval_E(u, x, t) for u in probes)
                if spread <= flat_tol:
                    a = self._edge_refine(out_lo, lo, x, t, thresh)
                    b = self._edge_refine(out_hi, hi, x, t, thresh)
                    comps.append([min(a, b), max(a, b)])
                    continue
            if inside:
                comps.extend([u, u] for u in inside)
                pts = [u for u in pts if u not in inside]
            else:
                u = self._golden(lo, hi, x, t)
                comps.append([u, u])
        comps.extend([u, u] for u in pts)   # refined points missed by the band
        comps.sort()
        merged = []
        for c in comps:
            if merged and c[0] <= merged[-1][1] + self.tol_u:
                merged[-1][1] = max(merged[-1][1], c[1])
            else:
                merged.append(c)
        components = tuple((float(a), float(b)) for a, b in merged)
        return MaximizerSet(components, components[0][0], components[-1][1],
                            float(Emax))

    def _refine_bracket(self, lo, hi, x, t):
        pl, ph = self._psi(lo, x, t), self._psi(hi, x, t)
        if pl > 0.0 >= ph or pl >= 0.0 > ph:
            a, b = lo, hi
            for _ in range(60):
                m = 0.5 * (a + b)
                if self._psi(m, x, t) > 0.0:
                    a = m
                else:
                    b = m
                if b - a <= self.tol_u:
                    break
            return 0.5 * (a + b)
        return self._golden(lo, hi, x, t)

    def _golden(self, lo, hi, x, t):
        invphi = (np.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = self.eval_E(c, x, t), self.eval_E(d, x, t)
        while b - a > self.tol_u:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = self.eval_E(c, x, t)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = self.eval_E(d, x, t)
        return 0.5 * (a + b)

    def _edge_refine(self, u_out, u_in, x, t, thresh):
        """Boundary of {E >= thresh} between an outside and an inside point."""
        if u_out == u_in:
            return u_in
        a, b = u_out, u_in
        for _ in range(60):
            m = 0.5 * (a + b)
            if self.eval_E(m, x, t) >= thresh:
                b = m
            else:
                a = m
            if abs(b - a) <= self.tol_u:
                break
        return b

    # -- public solution API ----------------------------------------------

    def solve(self, x, t):
        ms = self.maximize(x, t)
        return SolutionSample(float(x), float(t), ms.u_minus, ms.u_plus,
                              ms.u_minus - ms.u_plus > self.jump_tol, ms)

    def solve_grid(self, xs, t):
        xs = list(xs)
        n_threads = int(os.environ.get("LAXO_THREADS", "1") or "1")
        if n_threads > 1 and len(xs) > 8:
            with ThreadPoolExecutor(max_workers=n_threads) as ex:
                return list(ex.map(lambda x: self.solve(x, t), xs))
        return [self.solve(x, t) for x in xs]

    def e_hat(self, x, t):
        ms = self.maximize(x, t)
        return float(ms.max_value - self._W(x - t * self._H0))


class Problem(GeneralProblem):
    """Scalar conservation law u_t + f(u)_x = 0 with data phi."""

    def __init__(self, flux, data, **kw):
        pair = GeneralFluxPair(_identity, _ones, H=flux.deriv,
                               Hprime=flux.second,
                               domain_hint=flux.domain_hint)
        super().__init__(pair, data, **kw)
        self.flux = flux

    def restart(self, tau, xs=None):
        """Problem restarted from the computed solution at time tau.

        Returns a wrapper whose ``solve(x, t)`` (absolute time t > tau)
        evaluates the variational formula for the sampled data u(., tau).
        """
        if tau <= 0:
            raise ValueError("tau must be positive")
        if xs is None:
            if self.data.period is not None:
                xs = np.linspace(self.data.w_lo, self.data.w_hi, 4097)
            else:
                speed = max(abs(self._H(self.M)), abs(self._H(-self.M)))
                pad = tau * speed + 1.0
                xs = np.linspace(self.data.w_lo - pad, self.data.w_hi + pad, 4097)
        xs = np.asarray(xs, dtype=float)
        mids = 0.5 * (xs[:-1] + xs[1:])
        us = np.array([self.solve(x, tau).u_plus for x in mids])
        us = np.append(us, us[-1] if self.data.period is None else us[0])
        sd = SampledData(xs, us, period=self.data.period)
        inner = Problem(self.flux, sd, n_scan=self.n_scan,
                        val_tol=self.val_tol, jump_tol=self.jump_tol,
                        tol_u=self.tol_u)
        return RestartedProblem(inner, tau)


class RestartedProblem:
    """Absolute-time view of a problem restarted at time tau."""

    def __init__(self, problem, tau):
        self.problem = problem
        self.tau = float(tau)

    def maximize(self, x, t):
        return self.problem.maximize(x, t - self.tau)

    def solve(self, x, t):
        s = self.problem.solve(x, t - self.tau)
        return SolutionSample(s.x, float(t), s.u_minus, s.u_plus, s.is_shock,
                              s.maximizer)

    def solve_grid(self, xs, t):
        return [self.solve(x, t) for x in xs]


def identity_pair(flux):
    """GeneralFluxPair reducing to the scalar flux (U = id)."""
    return GeneralFluxPair(_identity, _ones, F=flux.eval, Fprime=flux.deriv,
                           H=flux.deriv, Hprime=flux.second,
                           domain_hint=flux.domain_hint)


def solve_general(pair, data, x, t, **kw):
    """One-shot solve for the general pair U(u)_t + F(u)_x = 0."""
    return GeneralProblem(pair, data, **kw).solve(x, t)
