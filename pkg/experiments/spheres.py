"""
Spheres experiment – build and verify the bigraded models of S², S³ ∨ S³
and S² ∨ S³ ∨ S³, printing the generator and cohomology tables.

Usage:
    python -m experiments.spheres [cap]
"""

import sys

from experiments import run_spec
from sullivan.report import cohomology_table, format_build, generator_table

SPECS = ("s2", "s3-wedge-s3", "wedge-s2-s3-s3")


def main():
    cap = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    for spec in SPECS:
        model, report = run_spec(spec, cap)
        print(format_build(model, report))
        print(generator_table(model).to_string())
        print(cohomology_table(model, report).to_string())
        print()


if __name__ == "__main__":
    main()
