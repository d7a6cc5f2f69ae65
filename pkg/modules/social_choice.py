"""
Pairwise preference profiles, majority aggregation and cycle detection.

Candidates and representatives are numbered from 1. A representative's
preferences are the ordered pairs (i, j) it states, meaning candidate i is
preferred to candidate j; unstated pairs are abstentions.
"""

import logging
import pandas as pd
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

class ProfileError(ValueError):
    """Invalid candidate count or inconsistent pairwise preferences."""

@dataclass(frozen=True)
class PreferenceProfile:
    n: int
    prefs: Tuple[FrozenSet[Pair], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ProfileError(f"n: need at least one candidate, got {self.n}")
        prefs = tuple(frozenset((int(i), int(j)) for i, j in pairs) for pairs in self.prefs)
        for k, pairs in enumerate(prefs, start=1):
            for i, j in pairs:
                if i == j:
                    raise ProfileError(f"representative {k}: pair ({i}, {i}) compares a candidate with itself")
                if not (1 <= i <= self.n and 1 <= j <= self.n):
                    raise ProfileError(f"representative {k}: pair ({i}, {j}) names an unknown candidate")
                if (j, i) in pairs:
                    raise ProfileError(f"representative {k}: holds both ({i}, {j}) and ({j}, {i})")
        object.__setattr__(self, 'prefs', prefs)

    @property
    def n_representatives(self) -> int:
        return len(self.prefs)

    def count(self, pair: Pair) -> int:
        """Number of representatives stating this ordered pair."""
        return sum(1 for pairs in self.prefs if pair in pairs)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {'representative': k, 'preferred': i, 'over': j}
            for k, pairs in enumerate(self.prefs, start=1)
            for i, j in sorted(pairs)
        ]
        return pd.DataFrame(rows, columns=['representative', 'preferred', 'over'])

@dataclass(frozen=True)
class MajorityGraph:
    """Edge (i, j) when strictly more representatives prefer i to j than j to i."""

    n: int
    edges: Dict[Pair, Fraction]

    def successors(self, i: int) -> List[int]:
        return sorted(j for (a, j) in self.edges if a == i)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {'from': i, 'to': j, 'share': f"{share.numerator}/{share.denominator}"}
            for (i, j), share in sorted(self.edges.items())
        ]
        return pd.DataFrame(rows, columns=['from', 'to', 'share'])

def leader_election_profile(n: int) -> PreferenceProfile:
    """Every representative ranks its own candidate above all others and states nothing else."""
    if n < 2:
        raise ProfileError(f"n: leader election needs at least 2 groups, got {n}")
    prefs = tuple(
        frozenset((i, j) for j in range(1, n + 1) if j != i)
        for i in range(1, n + 1)
    )
    return PreferenceProfile(n, prefs)

def condorcet_profile(n: int) -> PreferenceProfile:
    """
    Generalized Condorcet construction.

    Representative 1 states every adjacent pair (i, i+1). Representative k,
    2 <= k <= n-1, states (i, i+1) for i outside {k-1} plus (n, 1), abstaining
    on (k-1, k). Representative n states (i, i+1) for i <= n-2 plus (n, 1).
    """
    if n < 3:
        raise ProfileError(f"n: the Condorcet construction needs at least 3 candidates, got {n}")

    prefs = [frozenset((i, i + 1) for i in range(1, n))]
    for k in range(2, n):
        pairs = {(i, i + 1) for i in range(1, n) if i != k - 1}
        pairs.add((n, 1))
        prefs.append(frozenset(pairs))
    prefs.append(frozenset({(i, i + 1) for i in range(1, n - 1)} | {(n, 1)}))
    return PreferenceProfile(n, tuple(prefs))

def support_share(profile: PreferenceProfile, pair: Pair) -> Fraction:
    """Exact share of representatives stating this pair."""
    if profile.n_representatives == 0:
        return Fraction(0)
    return Fraction(profile.count(pair), profile.n_representatives)

def top_choice_shares(profile: PreferenceProfile) -> Dict[int, Fraction]:
    """Exact share of representatives whose stated pairs put each candidate above all others."""
    shares = {}
    for c in range(1, profile.n + 1):
        best = {(c, j) for j in range(1, profile.n + 1) if j != c}
        votes = sum(1 for pairs in profile.prefs if best <= pairs)
        shares[c] = Fraction(votes, max(profile.n_representatives, 1))
    return shares

def majority_aggregate(profile: PreferenceProfile) -> MajorityGraph:
    """Strict pairwise majority; abstentions count for neither side."""
    tally: Dict[Pair, int] = {}
    for pairs in profile.prefs:
        for pair in pairs:
            tally[pair] = tally.get(pair, 0) + 1

    edges = {}
    for (i, j), count in tally.items():
        if count > tally.get((j, i), 0):
            edges[(i, j)] = Fraction(count, profile.n_representatives)

    logger.debug(f"Majority graph over {profile.n} candidates has {len(edges)} edges")
    return MajorityGraph(profile.n, edges)

def find_cycle(graph: MajorityGraph) -> Optional[List[int]]:
    """Depth-first search for a directed cycle; candidates and successors are visited in ascending order."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {c: WHITE for c in range(1, graph.n + 1)}
    for i, j in graph.edges:
        color.setdefault(i, WHITE)
        color.setdefault(j, WHITE)

    for root in sorted(color):
        if color[root] != WHITE:
            continue
        path = [root]
        stack = [iter(graph.successors(root))]
        color[root] = GRAY
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = BLACK
                stack.pop()
            elif color[nxt] == GRAY:
                return path[path.index(nxt):]
            elif color[nxt] == WHITE:
                color[nxt] = GRAY
                path.append(nxt)
                stack.append(iter(graph.successors(nxt)))
    return None

def permute_representatives(profile: PreferenceProfile, order: Sequence[int]) -> PreferenceProfile:
    """Profile with representatives reordered; order is a permutation of 0..r-1."""
    return PreferenceProfile(profile.n, tuple(profile.prefs[k] for k in order))
