"""Walk the universal constants from dimension 2 upward.

Every bound is a closed-form expression in the dimension alone; nothing here
touches a concrete domain.  The three families are strictly ordered, and the
polydisc-target bounds are rational in dimension 2.
"""
from squeezecert import constants_csv, universal_bounds

print("universal lower bounds by dimension")
print("-" * 68)
for n in range(2, 7):
    c = universal_bounds(n)
    print(f"n={n}:  c_n={c.c_n:.6f}")
    print(f"   convex    ball {c.convex_ball:.9f}   polydisc {c.convex_polydisc:.9f}")
    print(f"   C-convex  ball {c.cconvex_ball:.9f}   polydisc {c.cconvex_polydisc:.9f}")
    print(f"   weak form ball {c.weak_ball:.9f}   polydisc {c.weak_polydisc:.9f}")

two = universal_bounds(2)
print()
print("dimension 2 landmarks:")
print(f"   convex polydisc bound = 1/7          ({two.convex_polydisc:.17g})")
print(f"   weak polydisc bound   = 1/14         ({two.weak_polydisc:.17g})")
print(f"   convex ball bound     = 1/(sqrt(2)(2 sqrt(5)+1)) = {two.convex_ball:.17g}")

print()
print("machine-readable table (17 significant digits per cell):")
print(constants_csv(4))
