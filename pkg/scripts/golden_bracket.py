"""Radius bracket for the golden pair under several word sources.

Prints per-n bounds for the balanced ell=2 constraint, the alternating
Markov chain and the full shift, with every norm.
"""

import argparse
import math
from dataclasses import dataclass

from slidefreq import AllWords, ConstrainedWords, FrequencyConstraint, MarkovWords, MatrixSet, NormKind, bracket
from slidefreq import exact_radius_if_forced_periodic

PHI = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class Config:
    n_max: int = 16


def main(cfg: Config) -> None:
    ms = MatrixSet([[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
    c = FrequencyConstraint(2, 2, ("0.4", "0.4"), ("0.6", "0.6"))
    print(f"exact (forced 2-cycle): {exact_radius_if_forced_periodic(ms, c):.12f}   phi = {PHI:.12f}")
    sources = {
        "balanced": ConstrainedWords(c),
        "markov": MarkovWords([[0, 1], [1, 0]]),
        "all": AllWords(2),
    }
    for name, src in sources.items():
        for kind in NormKind:
            br = bracket(ms, src, cfg.n_max, kind)
            print(f"\n{name} / {kind.value}")
            print(" n  lower_per   lower       upper       gap")
            for row in br.rows:
                print(f"{row.n:2d}  {row.lower_per:.8f}  {row.lower:.8f}  {row.upper:.8f}  {row.gap:.2e}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-max", type=int, default=Config.n_max)
    main(Config(n_max=p.parse_args().n_max))
