"""Ground truth: brute-force oracles, repair semantics, reduction generators
and the independent combinatorial solvers they are checked against."""
