"""Standalone property suites and the empirical infimum probe.

Each suite replays one layer of the certificate against independent random
instances: the triangular coefficient bounds and their symbolic expansion,
the three containment lemmas, and the strictness of the witness bounds over
the catalog fixtures.  kappa_probe sweeps a parameterized family of domains
and records the smallest observed bounds; it never claims the infimum.

Suites fail only on violations below -1e-10: positive margins of any size are
expected, since boundary tangencies sample arbitrarily close to zero slack.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    ball_shape,
    certify,
    containment_check,
    polydisc_shape,
    simplex_shape,
)
from .domains import (
    affine_image,
    ball,
    domain_to_json,
    l1ball,
    polydisc,
    projective_image,
    translate,
)
from .errors import ArgumentError
from .numerics import (
    c_const,
    count_inverse_monomials,
    inverse_coefficients,
    unit_lower,
    universal_bounds,
)
from .planar import (
    half_plane,
    rho_radius_check,
    riemann_catalog,
    slit_plane,
    tau_radius_check,
    unit_disc,
)

VIOLATION_TOL = -1e-10

SYMBOLIC_LIMIT = 8
NUMERIC_LIMIT = 16

# parameters the lemma radius checks are exercised at; the closed endpoint is
# the boundary case of the half-plane containment
RADIUS_PARAMETERS = (1.0 / 3.0, 1.0 / math.sqrt(5.0), 1.0)


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one property suite over random instances."""

    suite: str
    dims: tuple
    trials: int
    seed: int
    violations: int
    worst_margin: float
    worst_case: dict

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "dims": list(self.dims),
            "trials": self.trials,
            "seed": self.seed,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "worst_case": self.worst_case,
        }


@dataclass(frozen=True)
class KappaProbeReport:
    """Smallest bounds observed over a family sweep; an upper estimate only."""

    family: str
    n: int
    convexity_class: str
    budget: int
    seed: int
    universal_s: float
    universal_s_hat: float
    min_certified_s: float
    min_certified_s_hat: float
    min_witness_s: float | None
    min_witness_s_hat: float | None
    witness_runs: int
    argmin: dict

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "class": self.convexity_class,
            "budget": self.budget,
            "seed": self.seed,
            "universal_s": self.universal_s,
            "universal_s_hat": self.universal_s_hat,
            "min_certified_s": self.min_certified_s,
            "min_certified_s_hat": self.min_certified_s_hat,
            "min_witness_s": self.min_witness_s,
            "min_witness_s_hat": self.min_witness_s_hat,
            "witness_runs": self.witness_runs,
            "argmin": self.argmin,
        }


class _Tracker:
    """Accumulates margins, counting violations and keeping the worst case."""

    def __init__(self):
        self.violations = 0
        self.worst = math.inf
        self.case = {}

    def add(self, margin, case):
        margin = float(margin)
        if margin < VIOLATION_TOL:
            self.violations += 1
        if margin < self.worst:
            self.worst = margin
            self.case = case


def _check_dims(dims, limit, label):
    dims = tuple(int(n) for n in dims)
    if not dims:
        raise ArgumentError("empty dimension list")
    for n in dims:
        if n < 2 or n > limit:
            raise ArgumentError(f"{label} runs for 2 <= n <= {limit}, got {n}")
    return dims


def _random_alpha(n, rng):
    raw = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    mods = np.abs(raw)
    raw[mods > 1.0] /= mods[mods > 1.0]
    return np.tril(raw, -1) + np.eye(n)


def _all_minus_one(n):
    return np.tril(-np.ones((n, n)), -1) + np.eye(n)


def _cmat_pairs(mat):
    return [[[float(z.real), float(z.imag)] for z in row]
            for row in np.asarray(mat, dtype=complex)]


# -- triangular coefficient suite ---------------------------------------------

def suite_star(dims=(2, 3, 4, 5), trials=100, seed=0) -> SuiteReport:
    """Coefficient bounds of inverted unit triangular shears.

    For random matrices with subdiagonal moduli at most one: every inverse
    coefficient satisfies |c_{j,k}| <= 2**(j-k-1), the symbolic expansion has
    exactly that many monomials (dimensions up to 8), and the l1 norm of an
    inverted sample is bounded by sum_j 2**(n-j) |Z_j|.  The all-(-1) matrix
    with an all-ones sample runs first and attains equality.
    """
    dims = _check_dims(dims, NUMERIC_LIMIT, "suite_star")
    if trials < 1:
        raise ArgumentError("trials must be positive")
    track = _Tracker()
    for n in dims:
        if n <= SYMBOLIC_LIMIT:
            counts = count_inverse_monomials(n)
            for j in range(n):
                for k in range(j):
                    expected = 2 ** (j - k - 1)
                    track.add(0.0 if counts[j, k] == expected else -1.0,
                              {"check": "symbolic_count", "n": n, "j": j, "k": k,
                               "count": int(counts[j, k])})
        bound = np.zeros((n, n))
        for j in range(n):
            bound[j, :j] = 2.0 ** (j - np.arange(j) - 1)
        weights = 2.0 ** (n - 1 - np.arange(n))
        for trial in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, n, trial)))
            alpha = _all_minus_one(n) if trial == 0 else _random_alpha(n, rng)
            inv = inverse_coefficients(unit_lower(alpha)).entries
            coeff_margin = float(np.min(
                (bound - np.abs(np.tril(inv, -1))) / np.maximum(1.0, bound)))
            track.add(coeff_margin,
                      {"check": "coefficient_bound", "n": n, "trial": trial,
                       "alpha": _cmat_pairs(alpha)})
            z = rng.normal(size=(8, 2 * n)).view(complex)
            if trial == 0:
                z[0] = 1.0
            lhs = np.abs(z @ inv.T).sum(axis=1)
            rhs = np.abs(z) @ weights
            bound_margin = float(np.min((rhs - lhs) / (1.0 + rhs)))
            track.add(bound_margin,
                      {"check": "weighted_bound", "n": n, "trial": trial,
                       "alpha": _cmat_pairs(alpha)})
    return SuiteReport(suite="star", dims=dims, trials=trials, seed=seed,
                       violations=track.violations, worst_margin=track.worst,
                       worst_case=track.case)


# -- containment lemma suite --------------------------------------------------

def suite_lemmas(dims=(2, 3, 4, 5), trials=100, samples=200, seed=0) -> SuiteReport:
    """Sampled containments behind the certificates.

    Random triangular shears must keep the small polydisc and the small ball
    inside the sheared simplex; the tau radius must survive the half-plane
    product and the rho radius the catalog map products.  The all-(-1) shear
    runs first in every dimension and is tight at the all-ones corner.
    """
    dims = _check_dims(dims, NUMERIC_LIMIT, "suite_lemmas")
    if trials < 1 or samples < 1:
        raise ArgumentError("trials and samples must be positive")
    track = _Tracker()
    for n in dims:
        pd_small = polydisc_shape(n, 1.0 / (2.0**n - 1.0))
        ball_small = ball_shape(n, 1.0 / c_const(n))
        outer = simplex_shape(n)
        for trial in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, 3, n, trial)))
            alpha = _all_minus_one(n) if trial == 0 else _random_alpha(n, rng)
            inv = inverse_coefficients(unit_lower(alpha)).entries
            for label, inner in (("polydisc_in_shear", pd_small),
                                 ("ball_in_shear", ball_small)):
                rep = containment_check(
                    inner, inv, outer, samples=samples,
                    seed=np.random.SeedSequence(entropy=(seed, 4, n, trial)))
                track.add(rep.min_slack,
                          {"check": label, "n": n, "trial": trial,
                           "alpha": _cmat_pairs(alpha)})
        slit_maps = [riemann_catalog(slit_plane()) for _ in range(n)]
        mixed = [riemann_catalog(k()) for k in (slit_plane, half_plane, unit_disc)]
        for ci, c in enumerate(RADIUS_PARAMETERS):
            rep = tau_radius_check(n, c, samples=samples * 10,
                                   seed=np.random.SeedSequence(entropy=(seed, 5, n, ci)))
            track.add(rep.min_slack, {"check": "tau_radius", "n": n, "c": c})
            rep = rho_radius_check(slit_maps, c, samples=samples * 10,
                                   seed=np.random.SeedSequence(entropy=(seed, 6, n, ci)))
            track.add(rep.min_slack, {"check": "rho_radius_slit", "n": n, "c": c})
        rep = rho_radius_check(mixed, 1.0, samples=samples * 10,
                               seed=np.random.SeedSequence(entropy=(seed, 7, n)))
        track.add(rep.min_slack, {"check": "rho_radius_mixed", "n": n})
    return SuiteReport(suite="lemmas", dims=dims, trials=trials, seed=seed,
                       violations=track.violations, worst_margin=track.worst,
                       worst_case=track.case)


# -- strictness suite ---------------------------------------------------------

def default_strictness_fixtures():
    """Catalog fixtures with a witness: name, domain, class to certify."""
    shear = np.array([[1.0, 0.0], [0.5, 1.0]])
    return (
        ("polydisc2", polydisc(2), "convex"),
        ("l1ball2", l1ball(2), "convex"),
        ("ball2", ball(2), "convex"),
        ("sheared_polydisc", affine_image(polydisc(2), shear), "convex"),
        ("polydisc2_cconvex", polydisc(2), "cconvex"),
    )


def suite_strictness(fixtures=None, seed=0, samples=1000, rays=4000) -> SuiteReport:
    """Strict inequality of the witness bounds over the catalog fixtures.

    For every fixture the normalizer must avoid a fully saturated row, i.e.
    min over rows j >= 2 of max_k (1 - |alpha_{j,k}|) stays positive, and the
    witness bounds must land strictly above the certified universal values.
    """
    fixtures = default_strictness_fixtures() if fixtures is None else tuple(fixtures)
    if not fixtures:
        raise ArgumentError("strictness suite needs at least one fixture")
    track = _Tracker()
    for name, domain, cls in fixtures:
        rep = certify(domain, convexity_class=cls, samples=samples, seed=seed,
                      rays=rays, spot_trials=0)
        alpha = np.abs(rep.normalizer.a_matrix.entries)
        n = rep.n
        if n >= 2:
            gap = min(max(1.0 - alpha[j, k] for k in range(j)) for j in range(1, n))
            track.add(gap, {"check": "row_saturation_gap", "fixture": name})
        if rep.witness is None:
            track.add(-1.0, {"check": "witness_missing", "fixture": name})
            continue
        track.add(rep.witness_s - rep.certified_s,
                  {"check": "ball_gap", "fixture": name})
        track.add(rep.witness_s_hat - rep.certified_s_hat,
                  {"check": "polydisc_gap", "fixture": name})
    return SuiteReport(suite="strictness", dims=tuple(sorted({f[1].n for f in fixtures})),
                       trials=len(fixtures), seed=seed,
                       violations=track.violations, worst_margin=track.worst,
                       worst_case=track.case)


# -- empirical infimum probe --------------------------------------------------

KAPPA_FAMILIES = ("shears", "projective", "base_points")


def _family_domains(family, n, budget, seed):
    """Deterministic half-grid half-random parameter sweep of one family."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, 9)))
    grid = budget // 2
    for idx in range(budget):
        if family == "shears":
            if idx < grid:
                s = -0.9 + 1.8 * idx / max(1, grid - 1)
            else:
                raw = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
                s = 0.9 * raw / max(1.0, abs(raw))
            mat = np.eye(n, dtype=complex)
            mat[1, 0] = s
            yield affine_image(polydisc(n), mat), {"shear": [complex(s).real, complex(s).imag]}
        elif family == "projective":
            if idx < grid:
                t = -0.9 + 1.8 * idx / max(1, grid - 1)
            else:
                raw = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
                t = 0.9 * raw / max(1.0, abs(raw))
            den = np.zeros(n + 1, dtype=complex)
            den[0], den[1] = 2.0, t
            yield projective_image(polydisc(n), np.eye(n), np.zeros(n), den,
                                   bounding_radius=100.0), \
                {"denominator_1": [complex(t).real, complex(t).imag]}
        else:
            if idx == 0:
                p = np.zeros(n, dtype=complex)
            else:
                g = rng.normal(size=2 * n).view(complex)
                p = 0.5 * rng.uniform() ** (1.0 / (2 * n)) * g / np.linalg.norm(g)
            yield translate(ball(n), p), {"base_point": [[z.real, z.imag] for z in p]}


def kappa_probe(family, n=2, budget=100, seed=0, convexity_class=None,
                samples=400, rays=800, cloud_samples=20_000,
                n_starts=24) -> KappaProbeReport:
    """Sweep one domain family and record the smallest observed bounds.

    Certification runs at the origin of each swept domain (base-point sweeps
    recenter by translation first, which is legitimate because the squeezing
    functions are invariant under biholomorphisms).  The certified minima are
    the class constants by construction; the witness minima estimate the
    family's infimum from above and stay strictly over the constants.
    """
    if family not in KAPPA_FAMILIES:
        raise ArgumentError(f"unknown family {family!r}; pick one of {KAPPA_FAMILIES}")
    if budget < 1:
        raise ArgumentError("budget must be positive")
    if convexity_class is None:
        convexity_class = "cconvex" if family == "projective" else "convex"
    consts = universal_bounds(n)
    if convexity_class == "convex":
        uni_s, uni_s_hat = consts.convex_ball, consts.convex_polydisc
    else:
        uni_s, uni_s_hat = consts.cconvex_ball, consts.cconvex_polydisc

    min_cert_s = min_cert_s_hat = math.inf
    min_wit_s = min_wit_s_hat = None
    witness_runs = 0
    argmin = {}
    for idx, (domain, params) in enumerate(_family_domains(family, n, budget, seed)):
        rep = certify(domain, convexity_class=convexity_class, samples=samples,
                      seed=seed, cloud_samples=cloud_samples, rays=rays,
                      spot_trials=0, n_starts=n_starts)
        min_cert_s = min(min_cert_s, rep.certified_s)
        min_cert_s_hat = min(min_cert_s_hat, rep.certified_s_hat)
        if rep.witness_s is None:
            continue
        witness_runs += 1
        if min_wit_s is None or rep.witness_s < min_wit_s:
            min_wit_s = rep.witness_s
            argmin = {"index": idx, "params": params,
                      "domain": domain_to_json(domain),
                      "witness_s": rep.witness_s,
                      "witness_s_hat": rep.witness_s_hat}
        if min_wit_s_hat is None or rep.witness_s_hat < min_wit_s_hat:
            min_wit_s_hat = rep.witness_s_hat
    return KappaProbeReport(
        family=family, n=n, convexity_class=convexity_class, budget=budget,
        seed=seed, universal_s=uni_s, universal_s_hat=uni_s_hat,
        min_certified_s=min_cert_s, min_certified_s_hat=min_cert_s_hat,
        min_witness_s=min_wit_s, min_witness_s_hat=min_wit_s_hat,
        witness_runs=witness_runs, argmin=argmin)
