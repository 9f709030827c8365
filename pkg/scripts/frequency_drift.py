"""An admissible sequence whose running symbol frequencies keep drifting.

Periodic stretches built from two blocks with different count vectors are
glued by shortest graph paths; the stretches grow geometrically, so the
running frequency of each symbol oscillates instead of converging while
every ell-window stays admissible.
"""

import argparse
from collections import deque
from dataclasses import dataclass

import numpy as np

from slidefreq import FrequencyConstraint, build_graph, is_admissible_word
from slidefreq.blocks import symbol_counts


@dataclass(frozen=True)
class Config:
    target: tuple[str, ...] = ("0.23", "0.33", "0.44")
    delta: str = "0.1"
    ell: int = 10
    counts_a: tuple[int, ...] = (2, 3, 5)
    counts_b: tuple[int, ...] = (3, 3, 4)
    rounds: int = 6
    growth: float = 2.5


def shortest_path(g, src: int, dst: int) -> list[int]:
    prev = {src: None}
    queue = deque([src])
    while queue:
        i = queue.popleft()
        if i == dst:
            break
        for j in g.successors[i]:
            if j not in prev:
                prev[j] = i
                queue.append(j)
    path, i = [], dst
    while i is not None:
        path.append(i)
        i = prev[i]
    return path[::-1]


def main(cfg: Config) -> None:
    c = FrequencyConstraint.around(cfg.target, cfg.delta, cfg.ell)
    g = build_graph(c)
    pick = {}
    for i, u in enumerate(g.nodes):
        pick.setdefault(tuple(symbol_counts(u, c.r)), i)
    a, b = pick[cfg.counts_a], pick[cfg.counts_b]

    seq = list(g.nodes[a])
    node, periods = a, 1.0
    for k in range(2 * cfg.rounds):
        home = a if k % 2 == 0 else b
        # stay on the rotation cycle of the current block
        for _ in range(int(periods) * cfg.ell):
            (node,) = [j for j in g.successors[node] if g.nodes[j] == g.nodes[node][1:] + g.nodes[node][:1]]
            seq.append(g.nodes[node][-1])
        away = b if home == a else a
        for j in shortest_path(g, node, away)[1:]:
            seq.append(g.nodes[j][-1])
        node = away
        periods *= cfg.growth
        freq = np.bincount(seq, minlength=c.r + 1)[1:] / len(seq)
        print(f"after stretch {k + 1:2d} (len {len(seq):6d}): freq = {np.round(freq, 4)}")
    print("every window admissible:", is_admissible_word(seq, c))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rounds", type=int, default=Config.rounds)
    p.add_argument("--growth", type=float, default=Config.growth)
    a = p.parse_args()
    main(Config(rounds=a.rounds, growth=a.growth))
