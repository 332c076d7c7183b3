"""Integer monodromy matrices from action-derivative jumps across l = 0.

A loop at fixed energy h in the (g, l) plane crossing l = 0 at g_a < g_b
picks up, for each of the eta and regularized-xi actions, the difference of
the across-zero jumps of dI/dl at the two crossings:

    m = J_xi_mod(g_a) - J_xi_mod(g_b),   n = J_eta(g_a) - J_eta(g_b),

with J(g) = lim_{l->0+} dI/dl - lim_{l->0-} dI/dl = 2 lim_{l->0+} dI/dl.
The resulting matrix in the cycle basis (xi, eta, phi) is unipotent with
third column (m, n, 1); the phi row/column is trivial because the z angular
momentum generates a global circle action.  The orientation convention (the
g_a-crossing first) is fixed so the attractive case 0 < mu2 < mu1 with the
o2 Kepler comparison yields ((1,0,0),(0,1,1),(0,0,1)) around the first line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import actions
from .bifurcation import classify, critical_lines, min_distance_to_critical
from .errors import LoopGeometryError
from .model import InvariantPoint, Params, ReferenceChoice

#: residual above which a rounded matrix is flagged unreliable
RESIDUAL_LIMIT = 0.05


@dataclass(frozen=True)
class LoopPath:
    """An ellipse in the (g, l) plane at fixed energy, centered on l = 0.

    Crosses l = 0 exactly twice, at center_g -+ dg.  orientation +1 means
    the parametrization (g, l) = (center_g + dg cos t, dl sin t).
    """

    h: float
    center_g: float
    dg: float
    dl: float
    orientation: int = 1

    def __post_init__(self):
        if self.dg <= 0 or self.dl <= 0:
            raise LoopGeometryError("loop semi-axes must be positive")
        if self.orientation not in (-1, 1):
            raise LoopGeometryError("orientation must be +-1")

    def crossings(self) -> tuple[float, float]:
        return (self.center_g - self.dg, self.center_g + self.dg)

    def points(self, n: int = 256, t_offset: float = 0.0) -> np.ndarray:
        t = t_offset + self.orientation * np.linspace(0.0, 2.0 * math.pi, n,
                                                      endpoint=False)
        return np.column_stack([self.center_g + self.dg * np.cos(t),
                                self.dl * np.sin(t)])

    def enclosed_lines(self, params: Params) -> tuple[int, ...]:
        g_a, g_b = self.crossings()
        return tuple(ln.index for ln in critical_lines(params)
                     if g_a < ln.g_at(self.h) < g_b)


def loop_around_lines(params: Params, h: float, line_indices: tuple[int, ...],
                      dg_margin: float = 0.4, dl: float = 0.25,
                      orientation: int = 1) -> LoopPath:
    """Smallest ellipse enclosing exactly the requested critical lines."""
    lines = critical_lines(params)
    wanted = [ln for ln in lines if ln.index in line_indices]
    if len(wanted) != len(set(line_indices)):
        raise LoopGeometryError(f"unknown line indices {line_indices}")
    gs = [ln.g_at(h) for ln in wanted]
    lo, hi = min(gs) - dg_margin, max(gs) + dg_margin
    loop = LoopPath(h, 0.5 * (lo + hi), 0.5 * (hi - lo), dl, orientation)
    got = loop.enclosed_lines(params)
    want_set = {ln.g_at(h) for ln in wanted}
    got_set = {ln.g_at(h) for ln in lines if ln.index in got}
    if got_set != want_set:
        raise LoopGeometryError(
            f"loop around lines {line_indices} also encloses others: {got}")
    return loop


def validate_loop(loop: LoopPath, params: Params, margin: float = 0.05,
                  n_check: int = 64) -> None:
    """Every sampled loop point must be physical, scattering and clear of the critical set."""
    if loop.h <= 0:
        raise LoopGeometryError("loops must sit in a positive-energy slice")
    from .bifurcation import critical_curves_spatial
    spatial = critical_curves_spatial(params, loop.h)
    for g, l in loop.points(n_check, t_offset=1e-3):
        cl = classify(InvariantPoint(loop.h, l, g), params)
        if not cl.physical or not cl.scattering:
            raise LoopGeometryError(
                f"loop point (g={g:.4f}, l={l:.4f}) is not a scattering value")
        d = min_distance_to_critical(loop.h, l, g, params, spatial)
        if d < margin:
            raise LoopGeometryError(
                f"loop point (g={g:.4f}, l={l:.4f}) within {d:.3g} of the critical set")


@dataclass(frozen=True)
class MonodromyResult:
    """Integer matrix plus the raw jump arithmetic it was rounded from."""

    matrix: np.ndarray
    raw_m: float
    raw_n: float
    residual: float
    reference: ReferenceChoice
    loop: LoopPath
    jumps: dict = field(default_factory=dict, compare=False)

    @property
    def reliable(self) -> bool:
        return self.residual < RESIDUAL_LIMIT

    @property
    def mn(self) -> tuple[int, int]:
        return (int(self.matrix[0, 2]), int(self.matrix[1, 2]))


def _unipotent(m: int, n: int) -> np.ndarray:
    return np.array([[1, 0, m], [0, 1, n], [0, 0, 1]], dtype=int)


def monodromy_matrix(loop: LoopPath, params: Params,
                     ref: ReferenceChoice = ReferenceChoice.KEPLER_AT_O2,
                     eps: float = actions.DL_EPS, validate: bool = True,
                     margin: float = 0.05) -> MonodromyResult:
    """Monodromy of the glued fibration along ``loop`` w.r.t. the comparison system."""
    if validate:
        validate_loop(loop, params, margin=margin)
    g_a, g_b = loop.crossings()
    cutoff = actions.default_cutoff(InvariantPoint(loop.h, 0.0, max(abs(g_a), abs(g_b))),
                                    params, ref)
    jump = {}
    for g in (g_a, g_b):
        j_eta = actions.dl_limit("eta", loop.h, g, params, eps=eps).jump
        j_xi = actions.dl_limit("xi_mod", loop.h, g, params, ref=ref,
                                cutoff=cutoff, eps=eps).jump
        jump[g] = (j_xi, j_eta)
    raw_m = jump[g_a][0] - jump[g_b][0]
    raw_n = jump[g_a][1] - jump[g_b][1]
    if loop.orientation < 0:
        raw_m, raw_n = -raw_m, -raw_n
    m, n = round(raw_m), round(raw_n)
    residual = max(abs(raw_m - m), abs(raw_n - n))
    return MonodromyResult(_unipotent(m, n), raw_m, raw_n, residual, ref, loop,
                           jumps={g: jump[g] for g in (g_a, g_b)})


def hamiltonian_monodromy(loop: LoopPath, params: Params,
                          eps: float = actions.DL_EPS,
                          validate: bool = True) -> MonodromyResult:
    """Classical torus-bundle monodromy: the system used as its own comparison."""
    return monodromy_matrix(loop, params, ReferenceChoice.SELF, eps=eps,
                            validate=validate)


@dataclass(frozen=True)
class TableRow:
    label: str
    line_indices: tuple[int, ...]
    result: MonodromyResult


def line_clusters(params: Params, tol: float = 1e-12) -> list[tuple[int, ...]]:
    """Indices of coincident critical lines, grouped, ordered by offset."""
    lines = sorted(critical_lines(params), key=lambda ln: ln.offset)
    clusters: list[list[int]] = [[lines[0].index]]
    last = lines[0].offset
    for ln in lines[1:]:
        if abs(ln.offset - last) < tol:
            clusters[-1].append(ln.index)
        else:
            clusters.append([ln.index])
        last = ln.offset
    return [tuple(sorted(c)) for c in clusters]


def default_slice_energy(params: Params) -> float:
    """An energy high enough that every loop sits among scattering values."""
    return 2.0 + abs(params.mu1) + abs(params.mu2)


def table_rows(params: Params, ref: ReferenceChoice, h: float | None = None,
               dg_margin: float = 0.4, dl: float = 0.25) -> list[TableRow]:
    """Monodromy around each (cluster of) critical line(s) for one strength case.

    Coincident lines get a single merged loop; its matrix equals the product
    of the would-be individual matrices.
    """
    if h is None:
        h = default_slice_energy(params)
    rows = []
    for cluster in line_clusters(params):
        gap = _cluster_gap(params, cluster)
        margin = min(dg_margin, gap / 3.0) if gap < math.inf else dg_margin
        loop = loop_around_lines(params, h, cluster, dg_margin=margin, dl=dl)
        res = monodromy_matrix(loop, params, ref)
        label = "gamma" + "".join(str(i) for i in cluster)
        rows.append(TableRow(label, cluster, res))
    return rows


def _cluster_gap(params: Params, cluster: tuple[int, ...]) -> float:
    lines = {ln.index: ln.offset for ln in critical_lines(params)}
    mine = [lines[i] for i in cluster]
    others = [off for i, off in lines.items() if i not in cluster]
    if not others:
        return math.inf
    return min(abs(a - b) for a in mine for b in others)
