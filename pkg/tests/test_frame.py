"""Contact frame and normalizer tests.

Worked examples pin the catalog fixtures to their closed-form frames; the
invariant tests exercise generic affine and projective images where the
search has no canonical direction to fall back on.
"""
import numpy as np
import pytest

from squeezecert.domains import (
    affine_image,
    ball,
    interior_samples,
    l1ball,
    polydisc,
    projective_image,
    translate,
)
from squeezecert.errors import (
    ArgumentError,
    FrameDegenerateError,
    NonsmoothBoundaryError,
    TriangularityError,
)
from squeezecert.frame import (
    ContactFrame,
    Normalizer,
    build_frame,
    build_normalizer,
    frame_to_json,
    min_boundary_point,
    normalizer_to_json,
)


def cayley_polydisc():
    # image of the bidisc under w -> w / (2 - w_1); bounded, not convex
    return projective_image(polydisc(2), np.eye(2), np.zeros(2),
                            [2.0, -1.0, 0.0], bounding_radius=10.0)


# -- direction search ---------------------------------------------------------

def test_search_polydisc_picks_first_axis():
    res = min_boundary_point(polydisc(2), seed=0)
    assert abs(res.radius - 1.0) < 1e-9
    assert np.allclose(res.direction, [1.0, 0.0], atol=1e-9)


def test_search_l1ball_equal_modulus_direction():
    res = min_boundary_point(l1ball(2), seed=0)
    assert abs(res.radius - 1.0 / np.sqrt(2.0)) < 1e-6
    assert np.allclose(res.direction, np.array([1.0, 1.0]) / np.sqrt(2.0),
                       atol=1e-9)


def test_search_ball_subspace_returns_first_basis_vector():
    basis = np.zeros((2, 3), dtype=complex)
    basis[0, 1] = 1.0
    basis[1, 2] = 1.0
    res = min_boundary_point(ball(3), subspace_basis=basis, seed=0)
    assert abs(res.radius - 1.0) < 1e-9
    assert np.allclose(res.direction, basis[0], atol=1e-9)


def test_search_ball_rotated_subspace_ties_canonically():
    # every direction ties on the ball; the combination candidates let the
    # tie-break recover a coordinate axis even from a rotated basis
    basis = np.array([[0.0, 1.0, 1.0], [0.0, 1.0, -1.0]], dtype=complex)
    basis /= np.sqrt(2.0)
    res = min_boundary_point(ball(3), subspace_basis=basis, seed=0)
    assert abs(res.radius - 1.0) < 1e-9
    assert np.allclose(res.direction, [0.0, 1.0, 0.0], atol=1e-9)


def test_search_rejects_non_orthonormal_basis():
    basis = np.array([[1.0, 1.0]], dtype=complex)
    with pytest.raises(ArgumentError):
        min_boundary_point(polydisc(2), subspace_basis=basis)


def test_search_deterministic_across_runs():
    a = min_boundary_point(l1ball(2), seed=3)
    b = min_boundary_point(l1ball(2), seed=3)
    assert np.array_equal(a.direction, b.direction)
    assert a.radius == b.radius


# -- frames for the worked examples ------------------------------------------

def test_polydisc_frame_and_normalizer_are_identity():
    d = polydisc(2)
    fr = build_frame(d, seed=0)
    assert np.allclose(fr.contacts, np.eye(2), atol=1e-9)
    assert np.allclose(fr.radii, [1.0, 1.0], atol=1e-9)
    nz = build_normalizer(d, fr)
    for mat in (nz.t_matrix.entries, nz.a_matrix.entries, nz.composite):
        assert np.abs(mat - np.eye(2)).max() < 1e-9


def test_l1ball_frame_and_normalizer():
    d = l1ball(2)
    fr = build_frame(d, seed=0)
    root2 = np.sqrt(2.0)
    assert np.allclose(fr.radii, [1 / root2, 1 / root2], atol=1e-6)
    assert np.allclose(fr.contacts, [[0.5, 0.5], [0.5, -0.5]], atol=1e-9)
    nz = build_normalizer(d, fr)
    assert np.allclose(nz.t_matrix.entries, [[1, 1], [1, -1]], atol=1e-9)
    assert np.abs(nz.a_matrix.entries - np.eye(2)).max() < 1e-9


def test_ball3_frame_is_orthonormal_triple():
    d = ball(3)
    fr = build_frame(d, seed=0)
    assert np.allclose(fr.radii, [1.0, 1.0, 1.0], atol=1e-9)
    gram = fr.contacts @ np.conj(fr.contacts.T)
    assert np.abs(gram - np.eye(3)).max() < 1e-9
    nz = build_normalizer(d, fr)
    assert np.abs(nz.a_matrix.entries - np.eye(3)).max() < 1e-9
    assert np.allclose(nz.t_matrix.entries, np.conj(fr.contacts), atol=1e-9)


def test_projective_fixture_frame_and_normalizer():
    d = cayley_polydisc()
    fr = build_frame(d, seed=0)
    assert np.allclose(fr.contacts, [[-1 / 3, 0.0], [0.0, 0.5]], atol=1e-9)
    assert np.allclose(fr.radii, [1 / 3, 0.5], atol=1e-9)
    nz = build_normalizer(d, fr)
    assert np.allclose(nz.t_matrix.entries, [[-3.0, 0.0], [0.0, 2.0]], atol=1e-7)
    assert np.allclose(nz.a_matrix.entries, [[1.0, 0.0], [1 / 3, 1.0]], atol=1e-7)
    assert nz.margins["alpha_max"] <= 1.0 + 1e-9


def test_sheared_polydisc_frame_matches_closed_form():
    # for z = (w1, s*w1 + w2) the nearest boundary point solves a one-line
    # least squares problem: w1 = -s/(1+s^2), w2 = 1, up to a phase flip
    s = 0.7
    M = np.array([[1.0, 0.0], [s, 1.0]], dtype=complex)
    d = affine_image(polydisc(2), M, np.zeros(2))
    fr = build_frame(d, seed=0)
    q = 1.0 + s * s
    assert abs(fr.radii[0] - 1.0 / np.sqrt(q)) < 1e-9
    assert abs(fr.radii[1] - np.sqrt(q)) < 1e-9
    assert np.allclose(np.abs(fr.contacts[0]), [s / q, 1.0 / q], atol=1e-9)
    nz = build_normalizer(d, fr)
    alpha = nz.a_matrix.entries[1, 0]
    assert abs(alpha - s / q) < 1e-9
    assert nz.margins["triangularity_residual"] < 1e-10


# -- frame invariants ---------------------------------------------------------

FIXTURES = [
    ("polydisc", lambda: polydisc(2)),
    ("l1ball", lambda: l1ball(2)),
    ("ball3", lambda: ball(3)),
    ("shear", lambda: affine_image(
        polydisc(2), np.array([[1.0, 0.0], [0.6 + 0.2j, 1.0]]), np.zeros(2))),
    ("projective", cayley_polydisc),
]


@pytest.mark.parametrize("name,make", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_frame_invariants(name, make):
    d = make()
    fr = build_frame(d, seed=0)
    gram = fr.contacts @ np.conj(fr.contacts.T)
    off = gram - np.diag(np.diagonal(gram))
    assert np.abs(off).max() < 1e-9 * fr.radii.max() ** 2
    assert np.all(np.diff(fr.radii) > -1e-9)
    assert fr.bases[0].shape == (d.n, d.n)
    for j, b in enumerate(fr.bases):
        assert b.shape == (d.n - j, d.n)
        assert np.allclose(b @ np.conj(b.T), np.eye(d.n - j), atol=1e-9)


@pytest.mark.parametrize("name,make", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_normalizer_invariants(name, make):
    d = make()
    fr = build_frame(d, seed=0)
    nz = build_normalizer(d, fr)
    n = d.n
    t = nz.t_matrix.entries
    for j in range(n):
        assert np.allclose(t @ fr.contacts[j], np.eye(n)[j], atol=1e-9)
    a = nz.a_matrix.entries
    assert np.abs(np.triu(a, 1)).max() == 0.0
    assert np.allclose(np.diagonal(a), 1.0)
    mags = np.abs(np.tril(a, -1))
    assert mags.max() <= 1.0 + 1e-9
    assert nz.margins["triangularity_residual"] <= 1e-8


@pytest.mark.parametrize("name,make", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_normalized_hyperplanes_clear_the_domain(name, make):
    # in normalized coordinates row j's hyperplane is {Re Z_j = 1} for the
    # convex flavor and {Z_j = 1} for the complex one; interior samples must
    # stay on the proper side, respectively off the plane
    d = make()
    nz = build_normalizer(d, build_frame(d, seed=0))
    z = interior_samples(d, 400, np.random.default_rng(11))
    big_z = z @ nz.composite.T
    if d.convexity_class == "convex":
        assert big_z.real.max() < 1.0 + 1e-9
    else:
        assert np.abs(big_z - 1.0).min() > 1e-9


@pytest.mark.parametrize("name,make", [f for f in FIXTURES if f[0] != "projective"],
                         ids=[f[0] for f in FIXTURES if f[0] != "projective"])
def test_simplex_sits_inside_t_image(name, make):
    # T maps the domain over the set {sum |w_j| < 1}; push simplex samples
    # back through the contacts and check membership
    d = make()
    fr = build_frame(d, seed=0)
    rng = np.random.default_rng(5)
    n = d.n
    w = rng.normal(size=(300, n)) + 1j * rng.normal(size=(300, n))
    w *= (rng.uniform(size=(300, 1)) ** (1 / (2 * n))
          / np.abs(w).sum(axis=1, keepdims=True)) * 0.999
    z = w @ fr.contacts
    from squeezecert.domains import contains
    assert np.all(contains(d, z))


def test_unitary_rotation_preserves_radii():
    theta = 0.4
    u = np.array([[np.cos(theta), -np.sin(theta)],
                  [np.sin(theta), np.cos(theta)]], dtype=complex)
    fr0 = build_frame(l1ball(2), seed=0)
    fr1 = build_frame(affine_image(l1ball(2), u, np.zeros(2)), seed=0)
    assert np.allclose(fr0.radii, fr1.radii, atol=1e-6)


def test_frame_deterministic_same_seed():
    d = cayley_polydisc()
    a = build_frame(d, seed=7)
    b = build_frame(d, seed=7)
    assert np.array_equal(a.contacts, b.contacts)
    assert np.array_equal(a.radii, b.radii)


# -- error paths --------------------------------------------------------------

def test_frame_requires_origin_inside():
    d = translate(polydisc(2), np.array([5.0, 0.0]))
    with pytest.raises(ArgumentError):
        build_frame(d)


def test_normalizer_rejects_nonminimal_contact():
    # orthogonal boundary pair of the bidisc whose first point is not a
    # closest point; its face hyperplane cannot contain the second contact
    contacts = np.array([[1.0, 0.5], [-0.5, 1.0]], dtype=complex)
    radii = np.array([np.sqrt(1.25), np.sqrt(1.25)])
    bases = (np.eye(2, dtype=complex),
             np.array([[-0.5, 1.0]], dtype=complex) / np.sqrt(1.25))
    fr = ContactFrame(contacts=contacts, radii=radii, bases=bases,
                      search_flags=())
    with pytest.raises(TriangularityError):
        build_normalizer(polydisc(2), fr)


def test_normalizer_propagates_corner_contacts():
    # corners of the l1 ball have no single supporting face
    contacts = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex)
    radii = np.array([1.0, 1.0])
    bases = (np.eye(2, dtype=complex),
             np.array([[0.0, 1.0]], dtype=complex))
    fr = ContactFrame(contacts=contacts, radii=radii, bases=bases,
                      search_flags=())
    with pytest.raises(NonsmoothBoundaryError):
        build_normalizer(l1ball(2), fr)


# -- serialization ------------------------------------------------------------

def test_frame_json_round_structure():
    d = l1ball(2)
    fr = build_frame(d, seed=0)
    doc = frame_to_json(fr)
    assert doc["radii"] == [float(r) for r in fr.radii]
    assert doc["contacts"][0][0] == [fr.contacts[0, 0].real, fr.contacts[0, 0].imag]
    nz = build_normalizer(d, fr)
    ndoc = normalizer_to_json(nz)
    assert set(ndoc) == {"frame", "t_matrix", "t_inverse", "a_matrix",
                         "functionals", "margins"}
    assert ndoc["functionals"][0]["flavor"] == "real_supporting"
    assert all(isinstance(v, float) for v in ndoc["margins"].values())
