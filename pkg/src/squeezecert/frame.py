"""Contact frames and the triangular normalizer of a domain around the origin.

The frame is built stage by stage: each stage minimizes the boundary exit
distance from the origin over unit directions of the current complex subspace,
records the contact point, and passes to the orthogonal complement of all
contacts so far.  The normalizer then consists of the diagonalizing map T
built from the contacts and a unit lower triangular correction A assembled
from transported tangent hyperplanes.

The direction search is a batched multi-start pattern search with a
golden-section polish.  Ties between minimizing directions are broken
deterministically: candidates within the tie window are ordered by the
lexicographic key (-Re v_1, |arg v_1|, -Re v_2, |arg v_2|, ...), so symmetric
domains reproduce the same contacts run after run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import DomainSpec, contains, ray_exit_batch, tangent_functional
from .errors import (
    AlphaBoundError,
    ArgumentError,
    FrameDegenerateError,
    NonsmoothBoundaryError,
    TriangularityError,
)
from .numerics import CMatrix, orthonormal_complement, unit_lower

DEFAULT_STARTS_PER_DIM = 64

# agreement window used to flag unreliable multi-start convergence, and the
# relative window within which exit values count as tied
AGREE_TOL = 1e-3
TIE_REL_WINDOW = 1e-9


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one subspace direction search."""

    direction: np.ndarray
    radius: float
    agreement: int
    flags: tuple

    def __post_init__(self):
        arr = np.asarray(self.direction, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "direction", arr)


@dataclass(frozen=True)
class ContactFrame:
    """Orthogonal boundary contacts and their subspace inradii.

    `bases[j]` spans the complex subspace searched at stage j: the full space
    first, then the orthogonal complement of the contacts found so far.
    """

    contacts: np.ndarray     # (n, n), row j is the j-th contact point
    radii: np.ndarray        # (n,), nondecreasing
    bases: tuple             # n orthonormal row bases, shapes (n-j, n)
    search_flags: tuple

    def __post_init__(self):
        for name in ("contacts", "radii"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        frozen = []
        for b in self.bases:
            arr = np.asarray(b, dtype=complex)
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "bases", tuple(frozen))

    @property
    def n(self) -> int:
        return self.contacts.shape[0]


@dataclass(frozen=True)
class Normalizer:
    """Diagonalizing map T and unit lower triangular correction A.

    T has rows conj(a_j)/r_j^2, so T a_j = e_j; its exact inverse has the
    contacts as columns.  Row j of A is the transported tangent hyperplane at
    a_j normalized to pivot 1, with entries above the diagonal identically
    zero.  `margins` records the residuals measured while assembling A.
    """

    frame: ContactFrame
    t_matrix: CMatrix
    t_inverse: CMatrix
    a_matrix: CMatrix
    functionals: tuple
    margins: dict

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def composite(self) -> np.ndarray:
        """The full normalizing map A.T as a plain matrix."""
        return self.a_matrix.entries @ self.t_matrix.entries


# -- direction search --------------------------------------------------------

def _embed(basis, coeffs):
    """Map complex subspace coordinates (m,) or (k, m) to ambient vectors."""
    return coeffs @ basis


def _u_to_coeffs(u, m):
    return u[..., :m] + 1j * u[..., m:]


def _canonical_coeffs(basis):
    """Deterministic starting directions in subspace coordinates."""
    m = basis.shape[0]
    out = []
    eye = np.eye(m, dtype=complex)
    for k in range(m):
        out.append(eye[k])
        out.append(1j * eye[k])
        out.append(-eye[k])
        out.append(-1j * eye[k])
        # phase rotations making each ambient coordinate of basis row k real
        row = basis[k]
        for l in range(basis.shape[1]):
            if abs(row[l]) > 1e-9:
                out.append(eye[k] * (np.conj(row[l]) / abs(row[l])))
    for j in range(m):
        for k in range(j + 1, m):
            for ph in (1.0, -1.0, 1j, -1j):
                out.append((eye[j] + ph * eye[k]) / math.sqrt(2.0))
    out.append(np.ones(m, dtype=complex) / math.sqrt(m))
    return np.array(out)


def _tie_key(v, quantum=1e-9):
    key = []
    for z in v:
        key.append(round(-z.real / quantum) * quantum)
        key.append(round((abs(np.angle(z)) if abs(z) > 1e-9 else 0.0) / quantum) * quantum)
    return tuple(key)


def min_boundary_point(d: DomainSpec, subspace_basis=None, n_starts=None, seed=0,
                       exit_tol=1e-12) -> SearchResult:
    """Minimize the boundary exit distance from 0 over unit subspace directions.

    `subspace_basis` holds orthonormal rows spanning a complex subspace
    (default: the full space).  Multi-start batched pattern search with a
    golden-section polish; `agreement` counts polished starts landing within
    AGREE_TOL of the best value, and a lone best start raises the
    search_disagreement flag rather than an error.
    """
    if subspace_basis is None:
        basis = np.eye(d.n, dtype=complex)
    else:
        basis = np.asarray(subspace_basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[1] != d.n:
            raise ArgumentError(f"subspace basis must have shape (m, {d.n})")
        gram = basis @ np.conj(basis.T)
        if not np.allclose(gram, np.eye(basis.shape[0]), atol=1e-9):
            raise ArgumentError("subspace basis rows must be orthonormal")
    m = basis.shape[0]
    if n_starts is None:
        n_starts = DEFAULT_STARTS_PER_DIM * m
    rng = np.random.default_rng(seed)
    origin = np.zeros(d.n, dtype=complex)

    def evaluate(coeffs):
        dirs = _embed(basis, coeffs)
        return ray_exit_batch(d, origin, dirs, tol=exit_tol)

    canonical = _canonical_coeffs(basis)
    u = rng.normal(size=(n_starts, 2 * m))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    random_coeffs = _u_to_coeffs(u, m)
    coeffs = np.concatenate([canonical, random_coeffs])
    values = evaluate(coeffs)

    # refine the most promising starts with a shrinking compass pattern
    k_keep = min(12, coeffs.shape[0])
    order = np.argsort(values, kind="stable")[:k_keep]
    survivors = np.concatenate([coeffs[order].real, coeffs[order].imag], axis=1)
    surv_vals = values[order].copy()
    step = 0.25
    steps = np.concatenate([np.eye(2 * m), -np.eye(2 * m)])
    budget = 400
    while step > 1e-5 and budget > 0:
        budget -= 1
        cand = survivors[:, None, :] + step * steps[None, :, :]
        cand /= np.linalg.norm(cand, axis=2, keepdims=True)
        flat = cand.reshape(-1, 2 * m)
        vals = evaluate(_u_to_coeffs(flat, m)).reshape(k_keep, -1)
        best_idx = np.argmin(vals, axis=1)
        best_vals = vals[np.arange(k_keep), best_idx]
        improve = best_vals < surv_vals - 1e-15
        if np.any(improve):
            survivors[improve] = cand[improve, best_idx[improve]]
            surv_vals[improve] = best_vals[improve]
        else:
            step *= 0.5

    # golden-section polish along tangent great circles of the best survivor
    top = int(np.argmin(surv_vals))
    u_best, val_best = survivors[top].copy(), surv_vals[top]
    u_best, val_best = _golden_polish(evaluate, m, u_best, val_best)

    # polish resolution is limited by the exit tolerance, which only pins the
    # direction to ~sqrt(tol) in angle.  At a smooth minimum the supporting
    # functional is parallel to the conjugate direction, and iterating on that
    # identity recovers the remaining digits.
    c_best, val_best = _stationary_refine(
        d, basis, _u_to_coeffs(u_best, m), val_best, evaluate)
    survivors[top] = np.concatenate([c_best.real, c_best.imag])
    surv_vals[top] = val_best

    agreement = int(np.count_nonzero(surv_vals <= surv_vals.min() + AGREE_TOL))
    flags = () if agreement >= 2 else ("search_disagreement",)

    pool_coeffs = np.concatenate([coeffs, _u_to_coeffs(survivors, m)])
    pool_vals = np.concatenate([values, surv_vals])
    best = pool_vals.min()
    window = best * (1.0 + TIE_REL_WINDOW) + 1e-13

    # exact canonical candidates that tie the optimum win outright, so the
    # symmetric catalog bodies reproduce their contacts to the last bit
    tied_canonical = np.flatnonzero(pool_vals[: len(canonical)] <= window)
    if tied_canonical.size:
        tied_dirs = _embed(basis, pool_coeffs[tied_canonical])
        pick = min(range(len(tied_canonical)), key=lambda i: _tie_key(tied_dirs[i]))
        direction = tied_dirs[pick] / np.linalg.norm(tied_dirs[pick])
        return SearchResult(direction=direction,
                            radius=float(pool_vals[tied_canonical[pick]]),
                            agreement=agreement, flags=flags)

    # otherwise compare only stationarity-refined directions: the raw tie
    # window admits angular dirt of order sqrt(window), and a value-blind key
    # would latch onto whichever perturbation shifts it furthest
    tied = np.flatnonzero(pool_vals <= window)
    tied = tied[np.argsort(pool_vals[tied], kind="stable")][:24]
    refined, refined_vals = [], []
    for idx in tied:
        v_r, val_r = _stationary_refine(d, basis, pool_coeffs[idx],
                                        float(pool_vals[idx]), evaluate)
        refined.append(v_r)
        refined_vals.append(val_r)
    refined = np.array(refined)
    refined_vals = np.array(refined_vals)
    snapped = _snap_directions(_embed(basis, refined))
    snap_coeffs = snapped @ np.conj(basis.T)
    norms = np.linalg.norm(snap_coeffs, axis=1)
    snap_coeffs = snap_coeffs[norms > 0.5] / norms[norms > 0.5, None]
    if snap_coeffs.shape[0]:
        refined = np.concatenate([refined, snap_coeffs])
        refined_vals = np.concatenate([refined_vals, evaluate(snap_coeffs)])
    best = refined_vals.min()
    final = np.flatnonzero(refined_vals <= best * (1.0 + 1e-11) + 1e-13)
    tied_dirs = _embed(basis, refined[final])
    pick = min(range(len(final)), key=lambda i: _tie_key(tied_dirs[i]))
    direction = tied_dirs[pick] / np.linalg.norm(tied_dirs[pick])
    return SearchResult(direction=direction,
                        radius=float(refined_vals[final[pick]]),
                        agreement=agreement, flags=flags)


def _stationary_refine(d, basis, coeff, value, evaluate, max_iter=60):
    """Drive a polished direction to the stationarity identity.

    Where the inscribed sphere touches a smooth boundary piece, the tangent
    functional coefficients are a positive multiple of the contact direction
    (up to phase for the complex flavor).  Replacing the direction with the
    subspace projection of the coefficients converges at a rate set by the
    curvature gap, and the final increment bounds how far the functional
    still tilts away from the direction.  A real supporting functional has no
    phase freedom, so its projection is adopted outright; that also pulls the
    direction's global phase to the representative the normalizer needs,
    which the exit value alone cannot see.  The complex flavor carries an
    arbitrary functional phase and is aligned to the current iterate instead.
    Corner contacts and any step that raises the exit value end the iteration
    with the input kept.
    """
    flavor = "real_supporting" if d.convexity_class == "convex" else "complex_avoiding"
    v, val = coeff.copy(), value
    for _ in range(max_iter):
        point = val * _embed(basis, v)
        try:
            lam = tangent_functional(d, point, flavor, samples=0).coefficients
        except (NonsmoothBoundaryError, ArgumentError):
            break
        w = lam @ np.conj(basis.T)
        norm = np.linalg.norm(w)
        s = np.vdot(w, v)
        if norm < 1e-12 * np.linalg.norm(lam) or abs(s) < 0.5 * norm:
            break
        if flavor == "real_supporting":
            v_new = w / norm
        else:
            v_new = w * (s / (abs(s) * norm))
        new_val = float(evaluate(v_new[None])[0])
        # the divergence gate must sit well above the exit-bisection noise, or
        # curved boundaries stall the contraction at sqrt(noise) in angle
        if new_val > val + 1e-9:
            break
        step = np.linalg.norm(v_new - v)
        v, val = v_new, new_val
        if step < 1e-14:
            break
    return v, val


def _snap_directions(dirs, zero_tol=1e-10, arg_tol=1e-10):
    """Structured variants of numeric directions: tiny coordinates dropped,
    arguments snapped to quarter turns, global phase rotated to make one
    coordinate real positive.  Candidates only; each is kept by the caller
    solely if its exit value still ties the optimum.

    Both tolerances sit just above the stationarity refine's convergence
    noise.  They must stay below the normalizer's triangularity gate: a snap
    displaces the direction by up to the tolerance while moving the exit
    value only quadratically, so a looser snap can slip through the value
    tie window yet poison the transported functional."""
    out = []
    for v in dirs:
        variants = [v]
        mods = np.abs(v)
        for l in np.flatnonzero(mods > 0.1 * mods.max()):
            variants.append(v * (np.conj(v[l]) / mods[l]))
        for w in variants:
            w = w.copy()
            m = np.abs(w)
            w[m < zero_tol * m.max()] = 0.0
            args = np.angle(w)
            quarter = np.round(args / (np.pi / 2)) * (np.pi / 2)
            close = np.abs(args - quarter) < arg_tol
            w[close] = np.abs(w[close]) * np.exp(1j * quarter[close])
            norm = np.linalg.norm(w)
            if norm > 0:
                out.append(w / norm)
    return np.array(out) if out else np.zeros((0, dirs.shape[1]), dtype=complex)


def _golden_polish(evaluate, m, u, value, span=2e-2, sweeps=2, tol=1e-9):
    """Golden-section searches along coordinate tangent circles, batched.

    Every iteration evaluates both golden probes of every circle in a single
    batch; after the brackets collapse, the best single circle improvement is
    taken and the sweep repeats from the new point.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(sweeps):
        tangents = np.eye(2 * m) - np.outer(u, u)
        norms = np.linalg.norm(tangents, axis=1)
        keep = norms > 1e-12
        tangents = tangents[keep] / norms[keep, None]
        k = tangents.shape[0]
        if k == 0:
            break

        def on_circles(thetas):
            w = np.cos(thetas)[:, None] * u[None, :] + np.sin(thetas)[:, None] * tangents
            return w / np.linalg.norm(w, axis=1, keepdims=True)

        a = np.full(k, -span)
        b = np.full(k, span)
        while (b - a).max() > tol:
            c = b - (b - a) * invphi
            dmid = a + (b - a) * invphi
            pts = np.concatenate([on_circles(c), on_circles(dmid)])
            vals = evaluate(_u_to_coeffs(pts, m))
            left, right = vals[:k], vals[k:]
            take_left = left < right
            b[take_left] = dmid[take_left]
            a[~take_left] = c[~take_left]
        theta = 0.5 * (a + b)
        pts = on_circles(theta)
        vals = evaluate(_u_to_coeffs(pts, m))
        best = int(np.argmin(vals))
        if vals[best] < value:
            u, value = pts[best], float(vals[best])
    return u, value


# -- frame construction ------------------------------------------------------

def build_frame(d: DomainSpec, seed=0, n_starts=None) -> ContactFrame:
    """Stagewise minimal boundary contacts over shrinking complex subspaces.

    Raises FrameDegenerateError if a stage radius collapses below 1e-9, and
    validates contact orthogonality, the nondecreasing radius ladder, and that
    every contact sits on the boundary bracket of its ray.
    """
    if not contains(d, np.zeros(d.n, dtype=complex)):
        raise ArgumentError("frame construction requires the origin inside the domain")
    contacts = []
    radii = []
    bases = []
    flags = []
    for stage in range(d.n):
        if stage == 0:
            basis = np.eye(d.n, dtype=complex)
        else:
            basis = orthonormal_complement(contacts, n=d.n)
        bases.append(basis)
        res = min_boundary_point(
            d, basis, n_starts=n_starts,
            seed=np.random.SeedSequence(entropy=(seed, stage)))
        if res.radius < 1e-9:
            raise FrameDegenerateError(f"stage {stage} radius {res.radius:.3e} collapsed")
        contacts.append(res.radius * res.direction)
        radii.append(res.radius)
        flags.extend(f"stage{stage}:{f}" for f in res.flags)

    contacts = np.array(contacts)
    radii = np.array(radii)
    gram = contacts @ np.conj(contacts.T)
    off = gram - np.diag(np.diagonal(gram))
    if np.abs(off).max() > 1e-9 * radii.max() ** 2:
        raise FrameDegenerateError("contacts lost mutual orthogonality")
    if np.any(np.diff(radii) < -1e-9):
        raise FrameDegenerateError("stage radii decreased along the ladder")
    for j in range(d.n):
        unit = contacts[j] / radii[j]
        if not contains(d, (radii[j] - 1e-9) * unit):
            raise FrameDegenerateError(f"contact {j} is not an inner boundary bracket")
        # past the crossing a C-convex domain may re-enter, a convex one cannot
        if d.convexity_class == "convex" and contains(d, (radii[j] + 1e-9) * unit):
            raise FrameDegenerateError(f"contact {j} is not an outer boundary bracket")
    return ContactFrame(contacts=contacts, radii=radii, bases=tuple(bases),
                        search_flags=tuple(flags))


# -- normalizer --------------------------------------------------------------

def build_normalizer(d: DomainSpec, frame: ContactFrame, samples=1000, seed=0,
                     triangular_tol=1e-8, alpha_tol=1e-9) -> Normalizer:
    """Assemble T from the contacts and A from transported tangent hyperplanes.

    The tangent flavor follows the declared class: real supporting hyperplanes
    for convex domains (pivot must come out real-positive), complex avoiding
    hyperplanes for C-convex ones.  Transported coefficients above the pivot
    must vanish within `triangular_tol`; subdiagonal entries of A must stay
    inside the closed unit disc within `alpha_tol`.
    """
    n = frame.n
    if n != d.n:
        raise ArgumentError("frame dimension does not match the domain")
    t_entries = np.conj(frame.contacts) / (frame.radii**2)[:, None]
    t_inv_entries = frame.contacts.T.copy()
    t_residual = float(np.abs(t_entries @ t_inv_entries - np.eye(n)).max())
    if t_residual > 1e-8:
        raise TriangularityError(f"contact matrix inverse residual {t_residual:.3e}")

    flavor = "real_supporting" if d.convexity_class == "convex" else "complex_avoiding"
    pullback = np.conj(t_inv_entries).T
    rows = np.zeros((n, n), dtype=complex)
    functionals = []
    tri_resid = 0.0
    pivot_imag = 0.0
    alpha_max = 0.0
    for j in range(n):
        tf = tangent_functional(
            d, frame.contacts[j], flavor, samples=samples,
            seed=np.random.SeedSequence(entropy=(seed, 17, j)))
        mu = pullback @ tf.coefficients
        scale = np.linalg.norm(mu)
        if scale == 0.0:
            raise TriangularityError(f"transported functional {j} vanished")
        tail = np.abs(mu[j + 1:]).max() / scale if j + 1 < n else 0.0
        tri_resid = max(tri_resid, tail)
        if tail > triangular_tol:
            raise TriangularityError(
                f"row {j}: coefficients past the pivot reach {tail:.3e} of the norm")
        pivot = mu[j]
        if abs(pivot) <= triangular_tol * scale:
            raise TriangularityError(f"row {j}: pivot vanished")
        if flavor == "real_supporting":
            rel_imag = abs(pivot.imag) / abs(pivot)
            pivot_imag = max(pivot_imag, rel_imag)
            if rel_imag > triangular_tol or pivot.real <= 0.0:
                raise TriangularityError(
                    f"row {j}: supporting pivot {pivot:.3e} is not real-positive")
            pivot = complex(pivot.real)
        row = np.conj(mu / pivot)
        if j:
            alpha_row = float(np.abs(row[:j]).max())
            alpha_max = max(alpha_max, alpha_row)
            if alpha_row > 1.0 + alpha_tol:
                raise AlphaBoundError(
                    f"row {j}: subdiagonal modulus {alpha_row:.12f} exceeds 1")
        rows[j, :j] = row[:j]
        rows[j, j] = 1.0
        functionals.append(tf)

    margins = {
        "t_inverse_residual": t_residual,
        "triangularity_residual": tri_resid,
        "pivot_imag_residual": pivot_imag,
        "alpha_max": alpha_max,
    }
    return Normalizer(
        frame=frame,
        t_matrix=CMatrix(t_entries),
        t_inverse=CMatrix(t_inv_entries),
        a_matrix=unit_lower(rows),
        functionals=tuple(functionals),
        margins=margins,
    )


# -- serialization -----------------------------------------------------------

def _cvec_json(v):
    return [[z.real, z.imag] for z in np.asarray(v, dtype=complex)]


def _cmat_json(m):
    return [_cvec_json(row) for row in np.asarray(m, dtype=complex)]


def frame_to_json(frame: ContactFrame) -> dict:
    return {
        "contacts": _cmat_json(frame.contacts),
        "radii": [float(r) for r in frame.radii],
        "search_flags": list(frame.search_flags),
    }


def normalizer_to_json(norm: Normalizer) -> dict:
    return {
        "frame": frame_to_json(norm.frame),
        "t_matrix": _cmat_json(norm.t_matrix.entries),
        "t_inverse": _cmat_json(norm.t_inverse.entries),
        "a_matrix": _cmat_json(norm.a_matrix.entries),
        "functionals": [
            {
                "point": _cvec_json(tf.point),
                "coefficients": _cvec_json(tf.coefficients),
                "flavor": tf.flavor,
                "value": [tf.value.real, tf.value.imag],
                "samples_checked": tf.samples_checked,
                "min_margin": tf.min_margin,
            }
            for tf in norm.functionals
        ],
        "margins": dict(norm.margins),
    }
