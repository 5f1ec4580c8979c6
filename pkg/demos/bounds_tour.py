"""Rank bounds for forms on the boundary, with the extremal monomial ideal behind each."""

from sosborder.bounds import bound_data, table_N

print("n  2d  N-1  dim  Pythagoras")
for r in table_N():
    print(f"{r.n}  {r.deg:2d}  {r.N_minus_1:3d}  {r.dim_H:3d}  [{r.p_lower}, {r.p_upper}]")

b = bound_data(4, 3, 6)
print(f"\nn=4, d=3, k=6: C={b.C}, N={b.N}, extremal monomial {b.extremal}")
