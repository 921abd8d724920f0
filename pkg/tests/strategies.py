from hypothesis import strategies as st

from costly_attention.oracle import GridPrior
from costly_attention.dist import PosteriorMeanDistribution, Prior
from costly_attention.policy import from_distribution

UNIFORM = Prior("uniform")


def pooled_atoms(K, cuts, prior=None):
    """Cell-mean atoms of the uniform prior (or ``prior``) pooled into contiguous blocks.

    ``cuts[i]`` true starts a new block after atom i.
    """
    grid = GridPrior.from_prior(prior or UNIFORM, K)
    pts, ms = [], []
    start = 0
    for i in range(grid.K):
        if i == grid.K - 1 or cuts[i % len(cuts)]:
            block = slice(start, i + 1)
            m = grid.masses[block].sum()
            pts.append(float(grid.points[block] @ grid.masses[block] / m))
            ms.append(float(m))
            start = i + 1
    return pts, ms


@st.composite
def atomic_policies(draw, prior=UNIFORM):
    """(policy, points, masses) for a random pooling of a grid prior."""
    K = draw(st.integers(2, 25))
    cuts = draw(st.lists(st.booleans(), min_size=1, max_size=25))
    pts, ms = pooled_atoms(K, cuts, prior)
    F = PosteriorMeanDistribution.from_atoms(pts, ms)
    return from_distribution(prior, F), pts, ms
