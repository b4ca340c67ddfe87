"""Global long-time structure: hulls, divides, partition, asymptotic profiles.

The lower convex envelope of the primitive controls everything here: its
contact set K0 locates the divides, the gaps between contact components
carry one persistent shock each, and the envelope's derivative is the
initial data of the rarefaction-constant profile the solution decays to.
"""

from dataclasses import dataclass

import numpy as np

from .errors import HullInfinite, NoDivides

HULL_TOL_SCALE = 1e-9


@dataclass(frozen=True)
class DivideFan:
    x0: float
    empty: bool
    lo: float = np.nan
    hi: float = np.nan


@dataclass(frozen=True)
class Region:
    kind: str          # divide | gap | left_infinite | right_infinite
    interval: tuple    # (e_n, h_n) for gaps, component for divides
    speed: float       # c_n for gaps, tail slope for infinite regions


@dataclass(frozen=True)
class Partition:
    regions: tuple


class HullReport:
    """Lower convex envelope of the primitive with its contact set."""

    def __init__(self, structure, N, grid_h):
        data = structure.data
        self.period = data.period
        self.window = (data.w_lo - 0.0, data.w_hi + 0.0)
        ti = data.tail_invariants()
        self.slope_left = ti.ubar_l
        self.slope_right = ti.ulow_r
        if self.slope_left > self.slope_right + 1e-12:
            raise HullInfinite("left tail mean exceeds right tail mean")
        self.finite = True
        w = max(data.w_hi - data.w_lo, 1.0)
        h = grid_h if grid_h is not None else 1e-3 * w
        if self.period is not None:
            self._build_periodic(data, h)
        else:
            self._build_tailed(data, N, h)

    # -- construction ------------------------------------------------------

    def _build_periodic(self, data, h):
        m = self.slope_left
        xs = np.arange(data.w_lo, data.w_hi + 0.5 * h, h)
        g = data.primitive(xs) - m * xs
        self.hull_tol = HULL_TOL_SCALE * (1.0 + float(np.max(np.abs(g))))
        b0 = float(np.min(g))
        # golden refinement of each discrete minimizer cluster
        mask = g - b0 <= max(self.hull_tol, np.min(g - b0) + 1e-15)
        comps = _mask_components(xs, g - b0 <= self.hull_tol)
        refined = []
        for lo, hi in comps:
            if hi - lo <= h * 1.5:
                x_star = _golden_min(lambda x: float(data.primitive(x) - m * x),
                                     lo - h, hi + h)
                b0 = min(b0, float(data.primitive(x_star) - m * x_star))
                refined.append((x_star, x_star))
            else:
                refined.append((lo, hi))
        del mask
        self.b0 = b0
        if (len(refined) > 1
                and abs(refined[-1][0] - data.period - refined[0][0]) <= 2 * h):
            refined = refined[:-1]     # same divide modulo the period
        self.K0 = tuple(refined)
        self.xs = xs
        self.left_unbounded = self.right_unbounded = False
        self._m = m

    def _build_tailed(self, data, N, h):
        lo = data.w_lo if N is None else -abs(N)
        hi = data.w_hi if N is None else abs(N)
        lo, hi = min(lo, data.w_lo), max(hi, data.w_hi)
        xs = np.unique(np.concatenate([
            np.arange(lo, hi + 0.5 * h, h),
            [data.w_lo, data.w_hi],
            [p.lo for p in getattr(data, "pieces", ())],
        ]))
        ys = data.primitive(xs)
        self.hull_tol = HULL_TOL_SCALE * (1.0 + float(np.max(np.abs(ys))))
        vs = _lower_hull(xs, ys)
        sl, sr = self.slope_left, self.slope_right
        # tangency of the tail lines with the window hull
        gl = np.array([y - sl * x for x, y in vs])
        gr = np.array([y - sr * x for x, y in vs])
        i_l = int(np.argmin(gl))
        i_r = len(vs) - 1 - int(np.argmin(gr[::-1]))
        self.b_left = float(gl[i_l])
        self.b_right = float(gr[i_r])
        self.vertices = tuple(vs[i_l:i_r + 1])
        self.xs = xs
        hull_ys = self.value(xs)
        comps = _mask_components(xs, ys - hull_ys <= self.hull_tol)
        self.K0 = tuple(comps)
        self.left_unbounded = abs(
            float(data.primitive(data.w_lo)) - sl * data.w_lo
            - self.b_left) <= self.hull_tol
        self.right_unbounded = abs(
            float(data.primitive(data.w_hi)) - sr * data.w_hi
            - self.b_right) <= self.hull_tol

    # -- evaluation --------------------------------------------------------

    def value(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        if self.period is not None:
            out = self._m * x + self.b0
            return float(out[0]) if scalar else out
        vx = np.array([v[0] for v in self.vertices])
        vy = np.array([v[1] for v in self.vertices])
        out = np.empty_like(x)
        left = x <= vx[0]
        right = x >= vx[-1]
        midm = ~(left | right)
        out[left] = self.slope_left * x[left] + self.b_left
        out[right] = self.slope_right * x[right] + self.b_right
        if np.any(midm):
            out[midm] = np.interp(x[midm], vx, vy)
        return float(out[0]) if scalar else out

    def slopes_at(self, x0):
        """One-sided derivatives of the envelope at x0."""
        if self.period is not None:
            return self._m, self._m
        vx = np.array([v[0] for v in self.vertices])
        vy = np.array([v[1] for v in self.vertices])
        segs_x = np.concatenate([[-np.inf], vx, [np.inf]])
        slopes = np.concatenate([[self.slope_left],
                                 np.diff(vy) / np.diff(vx)
                                 if len(vx) > 1 else [],
                                 [self.slope_right]])
        # slope on segment i covers (segs_x[i], segs_x[i+1])
        i = int(np.searchsorted(segs_x, x0, side="right")) - 1
        i = min(max(i, 0), len(slopes) - 1)
        on_vertex = np.any(np.abs(vx - x0) <= 1e-12)
        if on_vertex:
            j = int(np.argmin(np.abs(vx - x0)))
            left = slopes[j] if j >= 0 else self.slope_left
            right = slopes[j + 1] if j + 1 < len(slopes) else self.slope_right
            return float(left), float(right)
        return float(slopes[i]), float(slopes[i])

    def envelope_derivative(self, xi):
        """Right-continuous derivative of the envelope (the profile data)."""
        return self.slopes_at(xi)[1]


def _lower_hull(xs, ys):
    pts = list(zip(xs, ys))
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _mask_components(xs, mask):
    comps = []
    i = 0
    n = len(xs)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            comps.append((float(xs[i]), float(xs[j])))
            i = j + 1
        else:
            i += 1
    return comps


def _golden_min(f, a, b, tol=1e-12):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


class GlobalStructure:
    """Hull, divides, partition and asymptotic profiles for one problem."""

    def __init__(self, problem):
        self.problem = problem
        self.flux = problem.flux
        self.data = problem.data
        self._hull = None

    def convex_hull(self, N=None, grid_h=None):
        if self._hull is None or N is not None or grid_h is not None:
            self._hull = HullReport(self, N, grid_h)
        return self._hull

    def divide_fan(self, x0):
        hull = self.convex_hull()
        gap = float(self.data.primitive(x0)) - float(hull.value(x0))
        if gap > hull.hull_tol:
            return DivideFan(float(x0), True)
        lo, hi = hull.slopes_at(self._reduce(x0, hull))
        return DivideFan(float(x0), False, lo, hi)

    def _reduce(self, x0, hull):
        if hull.period is None:
            return x0
        d = self.data
        return d.w_lo + (x0 - d.w_lo) % d.period

    def verify_divide(self, x0, c, L, n=4001, check_tol=None):
        ls = np.linspace(-L, L, n)
        vals = (self.data.primitive(x0 + ls) - self.data.primitive(x0)
                - c * ls)
        tol = check_tol if check_tol is not None else \
            1e-9 * (1.0 + float(np.max(np.abs(vals))))
        return bool(np.min(vals) >= -tol)

    def partition(self):
        try:
            hull = self.convex_hull()
        except HullInfinite as err:
            raise NoDivides(str(err)) from err
        if not hull.K0:
            raise NoDivides("the contact set of the envelope is empty")
        regions = []
        P = self.data.primitive
        for comp in hull.K0:
            regions.append(Region("divide", comp, np.nan))
        for (lo1, hi1), (lo2, hi2) in zip(hull.K0, hull.K0[1:]):
            e, h = hi1, lo2
            c = float((P(h) - P(e)) / (h - e))
            regions.append(Region("gap", (e, h), c))
        if hull.period is not None:
            # wrap-around gap of the tiled contact set
            e = hull.K0[-1][1]
            h = hull.K0[0][0] + self.data.period
            if h - e > 1e-12:
                c = float((P(h) - P(e)) / (h - e))
                regions.append(Region("gap", (e, h), c))
        else:
            if not hull.left_unbounded:
                regions.append(Region("left_infinite",
                                      (-np.inf, hull.K0[0][0]),
                                      hull.slope_left))
            if not hull.right_unbounded:
                regions.append(Region("right_infinite",
                                      (hull.K0[-1][1], np.inf),
                                      hull.slope_right))
        return Partition(tuple(regions))

    # -- asymptotic profiles ----------------------------------------------

    def profile_u_tilde(self, x, t):
        """Rarefaction-constant profile: the solution with envelope data.

        Solves the monotone characteristic relation xi + t f'(phibar(xi)) = x
        for the foot xi, then returns (f')^{-1}((x - xi)/t).
        """
        hull = self.convex_hull()
        fl = self.flux
        if hull.period is not None:
            return float(hull._m)
        M = self.data.bound + 1.0
        span = abs(t) * max(abs(fl.deriv(-M)), abs(fl.deriv(M))) + 1.0
        lo = min(hull.vertices[0][0], x) - span
        hi = max(hull.vertices[-1][0], x) + span

        def g(xi):
            return xi + t * fl.deriv(hull.envelope_derivative(xi)) - x

        for _ in range(100):
            m = 0.5 * (lo + hi)
            if g(m) <= 0:
                lo = m
            else:
                hi = m
            if hi - lo <= 1e-13 * (1.0 + abs(x)):
                break
        xi = 0.5 * (lo + hi)
        v = (x - xi) / t
        vlo, vhi = fl.deriv(-M), fl.deriv(M)
        v = min(max(v, vlo), vhi)
        return float(fl.invert_deriv(v, (-M, M)))

    def nwave(self, x, t, shock_positions=None):
        """Generalized N-wave profile; shock positions supplied per gap."""
        hull = self.convex_hull()
        fl = self.flux
        part = self.partition()
        gaps = [r for r in part.regions if r.kind == "gap"]
        M = self.data.bound + 1.0
        xq = x
        if hull.period is not None:
            # work in the tile containing the backward foot
            p = self.data.period
            shift = np.floor((x - t * fl.deriv(hull._m) - self.data.w_lo) / p)
            xq = x - shift * p
        for n, r in enumerate(gaps):
            e, h = r.interval
            left = e + t * fl.deriv(r.speed)
            right = h + t * fl.deriv(r.speed)
            if left < xq < right:
                xn = None
                if shock_positions is not None:
                    xn = shock_positions.get(n) if hasattr(shock_positions, "get") \
                        else shock_positions[n]
                if xn is None:
                    xn = 0.5 * (e + h) + t * fl.deriv(r.speed)
                foot = e if xq < xn else h
                v = (xq - foot) / t
                v = min(max(v, fl.deriv(-M)), fl.deriv(M))
                return float(fl.invert_deriv(v, (-M, M)))
        if hull.period is not None:
            return float(hull._m)
        return self.profile_u_tilde(x, t)

    # -- decay measurement -------------------------------------------------

    def measure_decay(self, norm, region, t_list, target=None):
        """Fit ||u - target||(t) ~ C t^e on the given region.

        ``norm`` in {"sup", "l1", "l2"}; target defaults to the
        rarefaction-constant profile.  Returns (exponent, constant, series)
        with series = [(t, value)].
        """
        lo, hi = region
        xs = np.linspace(lo, hi, 801)
        series = []
        for t in t_list:
            us = np.array([s.u_plus for s in self.problem.solve_grid(xs, t)])
            if target is None:
                tv = np.array([self.profile_u_tilde(x, t) for x in xs])
            else:
                tv = np.array([target(x, t) for x in xs])
            diff = np.abs(us - tv)
            if norm == "sup":
                val = float(np.max(diff))
            elif norm == "l1":
                val = float(np.trapezoid(diff, xs))
            elif norm == "l2":
                val = float(np.sqrt(np.trapezoid(diff ** 2, xs)))
            else:
                raise ValueError(f"unknown norm {norm!r}")
            series.append((float(t), val))
        ts = np.log([t for t, _ in series])
        vs = np.log([max(v, 1e-300) for _, v in series])
        slope, intercept = np.polyfit(ts, vs, 1)
        return float(slope), float(np.exp(intercept)), series
