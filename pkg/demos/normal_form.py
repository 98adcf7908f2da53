"""Build the linear normal form of two concrete domains.

The frame search finds boundary contacts of shrinking complex subspaces; the
normalizer turns them into a diagonalizing map T and a unit lower triangular
correction A whose subdiagonal moduli never exceed one.  A sheared polydisc
shows a nontrivial A; a translated ball shows that recentring is invisible to
the certified constants but not to the contacts.
"""
import numpy as np

from squeezecert.domains import affine_image, ball, polydisc, translate
from squeezecert.frame import build_frame, build_normalizer


def show(name, domain):
    frame = build_frame(domain, seed=0)
    norm = build_normalizer(domain, frame)
    print(f"{name}:")
    print(f"   radii     {np.round(frame.radii, 8)}")
    with np.printoptions(precision=6, suppress=True):
        print(f"   contacts  {frame.contacts.tolist()}")
        print(f"   T         {np.round(norm.t_matrix.entries, 6).tolist()}")
        print(f"   A         {np.round(norm.a_matrix.entries, 6).tolist()}")
    print(f"   margins   { {k: float(f'{v:.3e}') for k, v in norm.margins.items()} }")
    print()


shear = np.array([[1.0, 0.0], [0.5, 1.0]])
show("polydisc sheared by 0.5", affine_image(polydisc(2), shear))

# the triangular correction balances the shear: alpha_21 lands at s/q where q
# is the second contact's first coordinate
show("plain polydisc", polydisc(2))
show("ball recentred at (0.2, 0.1i)", translate(ball(2), [0.2, 0.1j]))
