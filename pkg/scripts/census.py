"""Integer bounds, block census and samples for the r=3, ell=10 instance.

    python scripts/census.py --delta 0.1 --samples 3
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from slidefreq import FrequencyConstraint, check_nonempty, classify_rigidity, count_words, enumerate_blocks
from slidefreq.blocks import symbol_counts
from slidefreq.subshift import sample_sequence


@dataclass(frozen=True)
class Config:
    target: tuple[str, ...] = ("0.23", "0.33", "0.44")
    ell: int = 10
    delta: str = "0.1"
    samples: int = 3
    length: int = 31
    seed: int = 0


def main(cfg: Config) -> None:
    c = FrequencyConstraint.around(cfg.target, cfg.delta, cfg.ell)
    rep = check_nonempty(c)
    print(f"bounds lo={rep.bounds.lo} hi={rep.bounds.hi}")
    print(f"sum condition {rep.sum_lo} <= {cfg.ell} <= {rep.sum_hi}: {rep.sum_ok}")
    print(f"rigidity: {classify_rigidity(c).value}")
    if not rep.nonempty:
        return
    blocks = enumerate_blocks(c)
    census = Counter(tuple(symbol_counts(b, c.r)) for b in blocks)
    print(f"{len(blocks)} blocks")
    for vec, k in sorted(census.items()):
        print(f"  counts {vec}: {k}")
    for n in (cfg.ell, 2 * cfg.ell, 4 * cfg.ell):
        print(f"words of length {n}: {count_words(c, n)}")
    for i in range(cfg.samples):
        w = sample_sequence(c, cfg.length, cfg.seed + i)
        print("sample", ",".join(map(str, w)))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--delta", default=Config.delta)
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--length", type=int, default=Config.length)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    main(Config(delta=a.delta, samples=a.samples, length=a.length, seed=a.seed))
