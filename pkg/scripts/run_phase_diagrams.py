#!/usr/bin/env python3
"""Full-scale phase-transition diagrams for the 2-, 3- and 4-sparse signals.

The complete grid is m = 10..220 step 10 and log10(sigma) = -3.5..-2.0
step 0.1 with 100 trials per cell, for both solvers; that is 22 x 16 x 100
trials per diagram, so expect a long run (use --jobs, or shrink with
--trials / --coarse).  Outputs CSV + JSON (+ PGM) per family and method.
"""

import argparse
from pathlib import Path

from superres import fileio
from superres.experiments import default_jobs, k_sparse_family, phase_diagram

FULL_M = list(range(10, 221, 10))
FULL_LOG_SIGMA = [round(-3.5 + 0.1 * i, 10) for i in range(16)]
COARSE_M = [40, 80, 120, 160, 200]
COARSE_LOG_SIGMA = [-3.5, -3.0, -2.5, -2.0]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sparsities", type=int, nargs="+", default=[2, 3, 4])
    parser.add_argument("--methods", nargs="+", default=["superset", "pencil"])
    parser.add_argument("--coarse", action="store_true",
                        help="5 x 4 grid instead of the full 22 x 16 one")
    parser.add_argument("--jobs", type=int, default=None)
    parser.add_argument("--pgm", action="store_true")
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    m_grid = COARSE_M if args.coarse else FULL_M
    sigmas = [10.0 ** e for e in (COARSE_LOG_SIGMA if args.coarse else FULL_LOG_SIGMA)]
    jobs = args.jobs if args.jobs is not None else default_jobs()

    for k in args.sparsities:
        family = k_sparse_family(k)
        for method in args.methods:
            diagram = phase_diagram(family, args.n, m_grid, sigmas, args.trials,
                                    method, base_seed=args.seed, jobs=jobs)
            stem = args.out / f"phase_k{k}_{method}"
            fileio.write_phase_diagram_csv(diagram, f"{stem}.csv")
            fileio.write_phase_diagram_json(diagram, f"{stem}.json")
            if args.pgm:
                fileio.write_phase_diagram_pgm(diagram, f"{stem}.pgm")
            print(f"k{k} {method:8s} aggregate success "
                  f"{diagram.success.mean():.3f} -> {stem}.csv")


if __name__ == "__main__":
    main()
