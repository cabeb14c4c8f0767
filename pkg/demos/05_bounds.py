"""Closed-form bounds as CSV tables."""

from daisyturan import bounds

for kind, values in [
    ("euler", [2, 3, 4, 5, 7, 8, 9]),
    ("turan", range(3, 8)),
    ("decaen", range(3, 8)),
    ("blowup", [(2, 2), (2, 3), (2, 4), (3, 3)]),
    ("gamma-master", range(6, 16)),
    ("aks", [2, 6, 10, 20]),
]:
    print(f"# {kind}")
    print(bounds.bound_table_csv(bounds.theorem_bound_table(kind, values)))
