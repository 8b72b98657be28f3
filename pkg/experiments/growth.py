"""
Growth experiment – the number of model generators in degree n+1 should be
the dimension of the free graded Lie algebra in degree n on the
desuspended cohomology classes (degrees {1, 2, 2} for S² ∨ S³ ∨ S³).

The Lie dimensions come from the tensor-algebra Hilbert series
1 / (1 - Σ t^dᵢ) by peeling off the Poincaré–Birkhoff–Witt product
Π (1 + tⁱ)^{lᵢ} (i odd) · Π (1 - tⁱ)^{-lᵢ} (i even).

Usage:
    python -m experiments.growth [cap]
"""

from __future__ import annotations
import sys
from math import comb
from typing import Dict, List, Sequence

import pandas as pd

from experiments import run_spec


def tensor_series(degrees: Sequence[int], n: int) -> List[int]:
    """Coefficients 0..n of 1 / (1 - Σ t^d)."""
    a = [1] + [0] * n
    for k in range(1, n + 1):
        a[k] = sum(a[k - d] for d in degrees if d <= k)
    return a


def _factor(i: int, mult: int, n: int) -> List[int]:
    """Series of (1 + t^i)^mult for odd i, (1 - t^i)^(-mult) for even i."""
    out = [0] * (n + 1)
    for j in range(0, n // i + 1):
        out[i * j] = comb(mult, j) if i % 2 else comb(mult + j - 1, j)
    return out


def _mul(p: List[int], q: List[int], n: int) -> List[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(p):
        if x:
            for j in range(0, n + 1 - i):
                out[i + j] += x * q[j]
    return out


def free_lie_dimensions(degrees: Sequence[int], n: int) -> Dict[int, int]:
    """dim L_k for k = 1..n, L free graded Lie on generators of the given degrees."""
    target = tensor_series(degrees, n)
    prod = [1] + [0] * n
    dims: Dict[int, int] = {}
    for k in range(1, n + 1):
        dims[k] = target[k] - prod[k]
        if dims[k]:
            prod = _mul(prod, _factor(k, dims[k], n), n)
    return dims


def growth_table(spec: str = "wedge-s2-s3-s3", cap: int = 8) -> pd.DataFrame:
    model, _ = run_spec(spec, cap)
    desuspended = [d - 1 for _, d in model.spec.classes]
    lie = free_lie_dimensions(desuspended, cap - 1)
    counts = model.degree_counts()
    rows = [{"degree": k + 1, "generators": counts.get(k + 1, 0), "lie_dim": lie[k]} for k in range(1, cap)]
    df = pd.DataFrame(rows).set_index("degree")
    df["match"] = df["generators"] == df["lie_dim"]
    return df


def main():
    cap = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    df = growth_table(cap=cap)
    print(df.to_string())
    print(f"\nall degrees match: {bool(df['match'].all())}")


if __name__ == "__main__":
    main()
