"""Spectrum extraction from the connection functions.

Regular eigenvalues are zeros of G; the scanner excludes small windows
around every singular energy (the pole ladder plus the normalization pole),
brackets sign changes on the remaining grid, re-brackets between each window
edge and the pole itself (zeros can sit arbitrarily close to a pole near a
level crossing), and refines by bisection.  Candidate energies where the
sign change comes from a pole rather than a zero are rejected by comparing
|G| at the refined point against the bracket endpoints.

Exceptional candidates live on the pole ladder; a candidate is a two-fold
degenerate eigenvalue (a parity-crossing point) exactly when the recursion's
right-hand-side vector vanishes along with the step determinant.  Sweeps
over the coupling g assemble parity-labeled level tables, from which
crossings, avoided crossings and near-degeneracy onsets are detected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import (
    ModelParams,
    ParitySector,
    constants,
    g0_levels,
    normalization_pole_energy,
    pole_energies,
    pole_index,
    sector_couplings,
    validate_params,
)
from .series import (
    DEFAULT_N_TERMS,
    SERIES_MIN_G,
    PoleEncountered,
    SingularInitialization,
    _g_table,
    initial_coefficients,
    recurse,
)

__all__ = [
    "PoleCollision",
    "TrackingAmbiguity",
    "ExceptionalKind",
    "CrossingKind",
    "ExceptionalPoint",
    "CrossingEvent",
    "LevelEntry",
    "SpectrumTable",
    "find_regular_zeros",
    "classify_exceptional",
    "find_degenerate_g",
    "spectrum_sweep",
    "detect_crossings",
]

#: Half-width (in energy) of the exclusion window around singular energies.
POLE_WINDOW = 1e-4

#: Probe distance from a pole used to read off the sign of the divergence;
#: far outside the recursion's abort zone (~1e-9) yet deep inside the window.
POLE_PROBE = POLE_WINDOW * 1e-4

#: Bisection convergence in energy.
TOL_E = 1e-10

#: |G| ceiling under which a sign-preserving local minimum counts as a
#: grazing-zero candidate.
GRAZE_TOL = 1e-5

#: Relative residual below which the recursion vector counts as vanished.
TOL_V = 1e-8

#: Relative residual above which it is clearly nonzero.
CLEAR_V = 1e-4


class PoleCollision(ArithmeticError):
    """E_pole(n) also sits on the ladder at some lower index m < n."""

    def __init__(self, m: int, n: int):
        super().__init__(f"pole n={n} collides with pole m={m}")
        self.m = m
        self.n = n


class TrackingAmbiguity(RuntimeError):
    """Level continuation between sweep columns is ambiguous."""

    def __init__(self, g_column: float, detail: str = ""):
        super().__init__(f"ambiguous level tracking at g={g_column}" + (f": {detail}" if detail else ""))
        self.g_column = g_column


class ExceptionalKind(enum.Enum):
    DEGENERATE = "degenerate"
    NONDEGENERATE_CANDIDATE = "nondegenerate-candidate"
    UNRESOLVED = "unresolved"


class CrossingKind(enum.Enum):
    PARITY_CROSSING = "parity-crossing"
    AVOIDED_CROSSING = "avoided-crossing"
    NEAR_DEGENERACY_ONSET = "near-degeneracy-onset"


@dataclass(frozen=True)
class ExceptionalPoint:
    n: int
    energy: float
    x: float
    classification: ExceptionalKind
    residual: float


@dataclass(frozen=True)
class CrossingEvent:
    kind: CrossingKind
    g_at: float
    energy_at: float
    gap: float
    level_indices: tuple[tuple[int, int], tuple[int, int]]


class LevelEntry(NamedTuple):
    energy: float
    parity: int
    resolved: bool


@dataclass
class SpectrumTable:
    """Parity-labeled levels over a grid of couplings g.

    ``energy_resolution`` is the energy-scan spacing the columns were built
    with; crossing detection refuses to track levels that approach within
    half of it (the table cannot distinguish them there).
    """

    delta: float
    gamma: float
    g_grid: np.ndarray
    columns: list[list[LevelEntry]]
    requested_count: int
    energy_resolution: float = 0.0


def _singular_energies(
    params: ModelParams, sector: ParitySector, e_lo: float, e_hi: float
) -> np.ndarray:
    """All singular energies of G in [e_lo, e_hi]: pole ladder + normalization pole."""
    out = []
    n_lo = max(1, int(np.ceil(pole_index(params, sector, e_lo))))
    n_hi = int(np.floor(pole_index(params, sector, e_hi)))
    if n_hi >= n_lo:
        ladder = pole_energies(params, sector, n_hi)
        out.extend(e for n, e in ladder if n >= n_lo)
    e_star = normalization_pole_energy(params, sector)
    if e_lo <= e_star <= e_hi:
        out.append(e_star)
    return np.array(sorted(out))


def _bisect_zeros(params, sector, lo, hi, flo, n_terms, tol_e):
    """Lockstep bisection of all brackets; returns refined midpoints."""
    lo = lo.copy()
    hi = hi.copy()
    flo = flo.copy()
    for _ in range(200):
        if np.all(hi - lo <= tol_e):
            break
        mid = 0.5 * (lo + hi)
        fm = _g_table(params, sector, mid, n_terms)[0]
        # nan cannot occur: brackets never contain a singular energy
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _refine_min_abs(params, sector, a, b, n_terms, iters=60):
    """Golden-section minimum of |G| on [a, b]."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - (b - a) * inv_phi
    d = a + (b - a) * inv_phi
    fc = abs(_g_table(params, sector, np.array([c]), n_terms)[0][0])
    fd = abs(_g_table(params, sector, np.array([d]), n_terms)[0][0])
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * inv_phi
            fc = abs(_g_table(params, sector, np.array([c]), n_terms)[0][0])
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * inv_phi
            fd = abs(_g_table(params, sector, np.array([d]), n_terms)[0][0])
        if b - a < 1e-12:
            break
    return (0.5 * (a + b), min(fc, fd))


def find_regular_zeros(
    params: ModelParams,
    sector: ParitySector,
    e_min: float,
    e_max: float,
    grid: int,
    n_terms: int = DEFAULT_N_TERMS,
    tol_e: float = TOL_E,
    pole_window: float = POLE_WINDOW,
    graze_tol: float = GRAZE_TOL,
) -> list[tuple[float, bool]]:
    """Regular-spectrum zeros of G in [e_min, e_max].

    Returns (energy, resolved) pairs sorted by energy.  Bisected sign-change
    zeros are resolved; grazing candidates (a local |G| minimum below
    ``graze_tol`` without a sign change, typically an unresolved close pair
    of zeros) are emitted with resolved = False rather than dropped.
    """
    if not e_min < e_max:
        raise ValueError(f"e_min < e_max required (got {e_min}, {e_max})")
    if grid < 16:
        raise ValueError(f"grid >= 16 required (got {grid})")

    sing = _singular_energies(params, sector, e_min - pole_window, e_max + pole_window)
    base = np.linspace(e_min, e_max, grid)
    keep = np.ones(base.size, dtype=bool)
    for s in sing:
        keep &= np.abs(base - s) >= pole_window

    extra = []
    for s in sing:
        for p in (s - pole_window, s - POLE_PROBE, s + POLE_PROBE, s + pole_window):
            if e_min <= p <= e_max:
                extra.append(p)
    pts = np.unique(np.concatenate([base[keep], np.array(extra)])) if extra else base[keep]
    if pts.size < 2:
        return []

    values, _, _, dead = _g_table(params, sector, pts, n_terms)
    alive = ~dead & np.isfinite(values)
    pts = pts[alive]
    values = values[alive]
    if pts.size < 2:
        return []

    # an interval is unusable if a singular energy lies strictly inside it
    pos = np.searchsorted(sing, pts)
    broken = pos[1:] != pos[:-1]
    flips = (np.sign(values[1:]) * np.sign(values[:-1]) < 0) & ~broken

    results: list[tuple[float, bool]] = []
    idx = np.where(flips)[0]
    if idx.size:
        lo, hi, flo = pts[idx], pts[idx + 1], values[idx]
        roots = _bisect_zeros(params, sector, lo, hi, flo, n_terms, tol_e)
        at_root = _g_table(params, sector, roots, n_terms)[0]
        bound = np.minimum(np.abs(values[idx]), np.abs(values[idx + 1]))
        for r, fr, b in zip(roots, at_root, bound):
            # a pole masquerading as a sign change explodes instead of collapsing
            if np.isfinite(fr) and abs(fr) < b:
                results.append((float(r), True))

    # grazing candidates on the uniform part of the grid
    spacing = (e_max - e_min) / (grid - 1)
    graze: list[tuple[float, bool]] = []
    bv = np.interp(base, pts, values)  # exact at kept base points, which are in pts
    for i in range(1, base.size - 1):
        if not (keep[i - 1] and keep[i] and keep[i + 1]):
            continue
        v0, v1, v2 = bv[i - 1], bv[i], bv[i + 1]
        if abs(v1) < graze_tol and abs(v1) <= abs(v0) and abs(v1) <= abs(v2) \
                and np.sign(v0) == np.sign(v1) == np.sign(v2):
            e_at, f_at = _refine_min_abs(params, sector, base[i - 1], base[i + 1], n_terms)
            if f_at < graze_tol:
                graze.append((float(e_at), False))

    near = max(4.0 * tol_e, 1e-13)
    merged: list[tuple[float, bool]] = []
    for e, res in sorted(results + graze):
        if merged and abs(e - merged[-1][0]) < max(near, 2.5 * spacing if not (res and merged[-1][1]) else near):
            if res and not merged[-1][1]:
                merged[-1] = (e, res)
            continue
        merged.append((e, res))
    return merged


def _exceptional_vector(params: ModelParams, sector: ParitySector, n: int):
    """Signed components and scales of the step-n right-hand-side vector at E_pole(n).

    Returns (v1, v2, scale1, scale2, e_pole).  The two components are
    proportional on the pole (the adjugate has rank one), so their common
    vanishing is a single scalar condition in any one parameter.
    """
    if n < 1:
        raise ValueError(f"n >= 1 required (got {n})")
    e_pole = pole_energies(params, sector, n)[n - 1][1]
    cs = constants(params, sector, e_pole)
    if n == 1:
        t1, tb1 = initial_coefficients(cs)
        t2 = tb2 = 0.0
    else:
        try:
            coeffs = recurse(cs, params, n - 1)
        except PoleEncountered as exc:
            raise PoleCollision(exc.n, n) from exc
        t1, tb1 = coeffs.alpha[n - 1], coeffs.alpha_bar[n - 1]
        t2, tb2 = coeffs.alpha[n - 2], coeffs.alpha_bar[n - 2]
    w = params.w
    delta_s, gamma_s = sector_couplings(params, sector)
    beta = 1.0 - gamma_s * gamma_s
    w2 = w * w
    k0n = 2.0 * w * beta * n + cs.k0
    cb0n = 2.0 * w * beta * n + cs.cbar0
    k1m = beta * (n - 1) - cs.k1
    cb1m = beta * (n - 1) - cs.cbar1
    b1 = w * (k1m * t1 - cs.kbar1 * tb1) - w2 * (cs.k2 * t2 + cs.kbar2 * tb2)
    b2 = w * (-cs.c1 * t1 + cb1m * tb1) - w2 * (cs.c2 * t2 + cs.cbar2 * tb2)
    v1 = cb0n * b1 - cs.kbar0 * b2
    v2 = k0n * b2 - cs.c0 * b1
    # At a lift b1 and b2 vanish individually, so a useful scale has to come
    # from the fully expanded monomials, not from cb0n*b1 and kbar0*b2.
    mono_b1 = (abs(w * k1m * t1), abs(w * cs.kbar1 * tb1),
               abs(w2 * cs.k2 * t2), abs(w2 * cs.kbar2 * tb2))
    mono_b2 = (abs(w * cs.c1 * t1), abs(w * cb1m * tb1),
               abs(w2 * cs.c2 * t2), abs(w2 * cs.cbar2 * tb2))
    scale1 = max(max(mono_b1) * abs(cb0n), max(mono_b2) * abs(cs.kbar0))
    scale2 = max(max(mono_b2) * abs(k0n), max(mono_b1) * abs(cs.c0))
    return v1, v2, scale1, scale2, e_pole


def classify_exceptional(
    params: ModelParams, sector: ParitySector, n: int
) -> ExceptionalPoint:
    """Classify the ladder candidate at E_pole(n).

    Degenerate (residual <= 1e-8): the singularity is lifted in both sectors
    and E_pole(n) is a two-fold degenerate eigenvalue, a parity crossing.
    Clearly nonzero residual (>= 1e-4): a nondegenerate-spectrum candidate,
    reported but never placed into level tables.  Anything between is
    Unresolved.  Residuals are relative to each component's largest additive
    term (zero scale counts as zero residual, which settles the fully
    decoupled delta = gamma = 0 case where the vector vanishes identically).

    Raises:
        PoleCollision: if the recursion hits the ladder before step n.
    """
    v1, v2, s1, s2, e_pole = _exceptional_vector(params, sector, n)
    r1 = abs(v1) / s1 if s1 > 0.0 else 0.0
    r2 = abs(v2) / s2 if s2 > 0.0 else 0.0
    residual = max(r1, r2)
    if residual <= TOL_V:
        kind = ExceptionalKind.DEGENERATE
    elif residual >= CLEAR_V:
        kind = ExceptionalKind.NONDEGENERATE_CANDIDATE
    else:
        kind = ExceptionalKind.UNRESOLVED
    return ExceptionalPoint(
        n=n,
        energy=e_pole,
        x=e_pole + params.g * params.g,
        classification=kind,
        residual=residual,
    )


def find_degenerate_g(
    delta: float,
    gamma: float,
    sector: ParitySector,
    n: int,
    g_lo: float,
    g_hi: float,
    tol_g: float = 1e-6,
) -> float | None:
    """Coupling g_s in [g_lo, g_hi] at which the ladder-n singularity lifts.

    Solves for a sign change of the (normalized) recursion vector at
    E_pole(n) as a function of g; returns None when no sign structure
    indicates a lift in the window (including the identically degenerate
    delta = 0 case, where the vector vanishes for every g).
    """
    if not g_lo < g_hi:
        return None
    g_lo = max(g_lo, SERIES_MIN_G)
    if not g_lo < g_hi:
        return None

    def signed(g: float) -> tuple[float, float] | None:
        try:
            params = validate_params(delta, gamma, g)
            v1, v2, s1, s2, _ = _exceptional_vector(params, sector, n)
        except (PoleCollision, SingularInitialization):
            return None
        r1 = v1 / s1 if s1 > 0.0 else 0.0
        r2 = v2 / s2 if s2 > 0.0 else 0.0
        return r1, r2

    n_pts = max(33, min(1025, int((g_hi - g_lo) / 0.002) + 2))
    gs = np.linspace(g_lo, g_hi, n_pts)
    samples = [signed(g) for g in gs]
    for i in range(n_pts - 1):
        a, b = samples[i], samples[i + 1]
        if a is None or b is None:
            continue
        flip1 = a[0] * b[0] < 0.0
        flip2 = a[1] * b[1] < 0.0
        if not (flip1 and flip2):
            continue
        comp = 0 if min(abs(a[0]), abs(b[0])) >= min(abs(a[1]), abs(b[1])) else 1
        lo, hi = gs[i], gs[i + 1]
        flo = a[comp]
        for _ in range(200):
            if hi - lo <= tol_g:
                break
            mid = 0.5 * (lo + hi)
            smp = signed(mid)
            if smp is None:
                break
            if np.sign(smp[comp]) == np.sign(flo):
                lo, flo = mid, smp[comp]
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        check = signed(root)
        if check is not None and max(abs(check[0]), abs(check[1])) < 1e-3:
            return float(root)
    return None


def _scan_spacing(gamma: float) -> float:
    """Energy-scan step fine enough to separate same-parity level pairs."""
    return min(2e-3, (1.0 - abs(gamma)) / 8.0)


def _column_window(delta: float, gamma: float, g: float, level_count: int):
    """Initial energy window and scan density for one sweep column.

    The lower edge is a variational bound on the ground state,
    E0 >= -g^2/(1 - |gamma|) - delta; the upper edge starts from the free
    spectrum and is extended by the caller if the window comes up short.
    """
    params = validate_params(delta, gamma, g)
    e_lo = -g * g / (1.0 - abs(gamma)) - delta - 0.5
    cap = g0_levels(params, level_count)[-1].energy
    e_hi = cap + 1.0 + 0.5 * g
    return params, e_lo, e_hi, _scan_spacing(gamma)


def _sweep_column(
    delta: float,
    gamma: float,
    g: float,
    level_count: int,
    n_terms: int,
    tol_e: float,
) -> list[LevelEntry]:
    if g < SERIES_MIN_G:
        params = validate_params(delta, gamma, 0.0)
        return [
            LevelEntry(lv.energy, lv.parity, True)
            for lv in g0_levels(params, level_count)
        ]
    params, e_lo, e_hi, spacing = _column_window(delta, gamma, g, level_count)
    entries: list[LevelEntry] = []
    for _ in range(8):
        entries = []
        for sector in (ParitySector.PLUS, ParitySector.MINUS):
            grid = max(64, int((e_hi - e_lo) / spacing) + 2)
            zeros = find_regular_zeros(
                params, sector, e_lo, e_hi, grid, n_terms=n_terms, tol_e=tol_e
            )
            entries.extend(LevelEntry(e, sector.sign, res) for e, res in zeros)
        n_hi = int(np.floor(pole_index(params, ParitySector.PLUS, e_hi)))
        for m in range(1, max(0, n_hi) + 1):
            try:
                point = classify_exceptional(params, ParitySector.PLUS, m)
            except (PoleCollision, SingularInitialization):
                continue
            if point.classification is not ExceptionalKind.DEGENERATE:
                continue
            if point.energy < e_lo or point.energy > e_hi:
                continue
            for parity in (1, -1):
                hit = any(
                    entry.parity == parity and abs(entry.energy - point.energy) < 1e-7
                    for entry in entries
                )
                if not hit:
                    entries.append(LevelEntry(point.energy, parity, True))
        if len(entries) >= level_count:
            break
        e_hi += 1.5
    entries.sort(key=lambda item: (item.energy, -item.parity))
    return entries[:level_count]


def spectrum_sweep(
    delta: float,
    gamma: float,
    g_min: float,
    g_max: float,
    g_steps: int,
    level_count: int,
    n_terms: int = DEFAULT_N_TERMS,
    tol_e: float = TOL_E,
) -> SpectrumTable:
    """Lowest ``level_count`` levels of both sectors over a uniform g grid.

    The g = 0 column (anything below the series floor) is filled from the
    exact free-limit levels; degenerate exceptional energies fill
    parity-crossing punctures of the regular spectrum when a column lands on
    one.
    """
    if g_steps < 2:
        raise ValueError(f"g_steps >= 2 required (got {g_steps})")
    if level_count < 1:
        raise ValueError(f"level_count >= 1 required (got {level_count})")
    if not g_min < g_max:
        raise ValueError(f"g_min < g_max required (got {g_min}, {g_max})")
    validate_params(delta, gamma, g_max)
    g_grid = np.linspace(g_min, g_max, g_steps)
    columns = [
        _sweep_column(delta, gamma, float(g), level_count, n_terms, tol_e)
        for g in g_grid
    ]
    return SpectrumTable(
        delta=delta, gamma=gamma, g_grid=g_grid, columns=columns,
        requested_count=level_count, energy_resolution=_scan_spacing(gamma),
    )


def _tracked_matrix(table: SpectrumTable, parity: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-column sorted energies of one parity, truncated to the common count."""
    per_column = [
        [entry for entry in column if entry.parity == parity]
        for column in table.columns
    ]
    k = min(len(entries) for entries in per_column)
    energies = np.array([[e.energy for e in entries[:k]] for entries in per_column])
    resolved = np.array([[e.resolved for e in entries[:k]] for entries in per_column])
    return energies, resolved


def _check_tracking(table: SpectrumTable, energies: np.ndarray) -> None:
    """Continuation sanity for sorted-index tracking within one parity.

    Same-parity levels never cross in this model, so sorted order is a valid
    continuation as long as adjacent levels stay distinguishable; once two of
    them approach within half the table's scan resolution the column cannot
    tell them apart and tracking refuses to guess.
    """
    if energies.shape[1] < 2 or table.energy_resolution <= 0.0:
        return
    gaps = np.diff(energies, axis=1)
    bad = gaps < 0.5 * table.energy_resolution
    if np.any(bad):
        j, k = np.argwhere(bad)[0]
        raise TrackingAmbiguity(
            float(table.g_grid[j]),
            f"levels {k} and {k + 1} are {gaps[j, k]:.3g} apart, below half "
            f"the scan resolution {table.energy_resolution:.3g}",
        )


def detect_crossings(table: SpectrumTable, gap_threshold: float) -> list[CrossingEvent]:
    """Crossing structure of a tracked level table.

    ParityCrossing: sign change of an opposite-parity pair gap, refined to
    the lift point of the corresponding ladder singularity (gap exactly 0).
    AvoidedCrossing: strict local minimum of an adjacent same-parity gap
    (always strictly positive).  NearDegeneracyOnset: the smallest g from
    which an opposite-parity pair gap stays below ``gap_threshold`` through
    the end of the window.

    Raises:
        TrackingAmbiguity: when two same-parity levels approach within half
            the table's scan resolution, where sorted-order continuation can
            no longer tell them apart.
    """
    g = np.asarray(table.g_grid, dtype=float)
    e_plus, _ = _tracked_matrix(table, 1)
    e_minus, _ = _tracked_matrix(table, -1)
    _check_tracking(table, e_plus)
    _check_tracking(table, e_minus)
    k_pairs = min(e_plus.shape[1], e_minus.shape[1])
    events: list[CrossingEvent] = []

    for k in range(k_pairs):
        gap = e_plus[:, k] - e_minus[:, k]
        for j in range(g.size - 1):
            if not (gap[j] == 0.0 or gap[j] * gap[j + 1] < 0.0):
                continue
            if gap[j] == 0.0 and j > 0 and gap[j - 1] == 0.0:
                continue
            frac = abs(gap[j]) / (abs(gap[j]) + abs(gap[j + 1])) if gap[j] != 0.0 else 0.0
            g_est = g[j] + frac * (g[j + 1] - g[j])
            e_est = e_plus[j, k] + frac * (e_plus[j + 1, k] - e_plus[j, k])
            params_mid = validate_params(table.delta, table.gamma, max(g_est, SERIES_MIN_G))
            n_est = int(round(pole_index(params_mid, ParitySector.PLUS, e_est)))
            g_at, e_at = g_est, e_est
            if n_est >= 1:
                refined = find_degenerate_g(
                    table.delta, table.gamma, ParitySector.PLUS, n_est,
                    g[j], g[j + 1], tol_g=1e-9,
                )
                if refined is not None:
                    g_at = refined
                    params_at = validate_params(table.delta, table.gamma, g_at)
                    e_at = pole_energies(params_at, ParitySector.PLUS, n_est)[n_est - 1][1]
            events.append(
                CrossingEvent(
                    kind=CrossingKind.PARITY_CROSSING,
                    g_at=float(g_at), energy_at=float(e_at), gap=0.0,
                    level_indices=((1, k), (-1, k)),
                )
            )

    for parity, mat in ((1, e_plus), (-1, e_minus)):
        for k in range(mat.shape[1] - 1):
            d = mat[:, k + 1] - mat[:, k]
            for j in range(1, g.size - 1):
                dip = min(d[j - 1], d[j + 1]) - d[j]
                if d[j] < d[j - 1] and d[j] < d[j + 1] and dip > max(1e-9, 1e-6 * d[j]):
                    denom = d[j - 1] - 2.0 * d[j] + d[j + 1]
                    shift = 0.5 * (d[j - 1] - d[j + 1]) / denom if denom > 0 else 0.0
                    shift = float(np.clip(shift, -1.0, 1.0))
                    g_at = g[j] + shift * (g[j + 1] - g[j])
                    events.append(
                        CrossingEvent(
                            kind=CrossingKind.AVOIDED_CROSSING,
                            g_at=float(g_at),
                            energy_at=float(0.5 * (mat[j, k] + mat[j, k + 1])),
                            gap=float(d[j]),
                            level_indices=((parity, k), (parity, k + 1)),
                        )
                    )

    for k in range(k_pairs):
        gap = np.abs(e_plus[:, k] - e_minus[:, k])
        below = gap < gap_threshold
        if below.size and below[-1] and np.any(below):
            tail = np.where(~below)[0]
            j_star = 0 if tail.size == 0 else int(tail[-1]) + 1
            events.append(
                CrossingEvent(
                    kind=CrossingKind.NEAR_DEGENERACY_ONSET,
                    g_at=float(g[j_star]),
                    energy_at=float(0.5 * (e_plus[j_star, k] + e_minus[j_star, k])),
                    gap=float(gap[j_star]),
                    level_indices=((1, k), (-1, k)),
                )
            )

    events.sort(key=lambda ev: (ev.g_at, ev.kind.value, ev.level_indices))
    return events
