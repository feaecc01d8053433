"""Affine iterated function systems, attractors, and the lifted shift.

An IFS is a finite family of affine contractions x -> A x + b whose
singular values lie in [c1, c2] with 0 < c1 <= c2 < 1.  The induced set
map K -> union of images contracts the Hausdorff metric with ratio c2, so
forward iteration from any point converges to the unique attractor.

Branch images of the attractor may overlap, so the maps need not invert a
single local homeomorphism; attaching the symbolic address (a word over
{1..n}) disjoinctifies the branches, and dropping the leading letter of an
address is the induced shift.  Words here are the same tuples used by the
shift algebra, so the symbolic machinery applies verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import CheckError
from .shiftalgebra import Word


@dataclass(frozen=True)
class AffineIFS:
    """Maps x -> A_i x + b_i with singular values inside [c1, c2]."""

    dim: int
    maps: list            # [(A, b)] with A (d, d) and b (d,)
    c1: float
    c2: float

    def __post_init__(self):
        if not 0.0 < self.c1 <= self.c2 < 1.0:
            raise CheckError("BAD_CONTRACTION",
                             "need 0 < c1 <= c2 < 1 for a bi-Lipschitz system")
        fixed = []
        for a, b in self.maps:
            a = np.asarray(a, dtype=np.float64)
            b = np.asarray(b, dtype=np.float64)
            if a.shape != (self.dim, self.dim) or b.shape != (self.dim,):
                raise CheckError("DIM_MISMATCH", "map shapes do not match dim")
            sv = np.linalg.svd(a, compute_uv=False)
            if sv.max() > self.c2 + 1e-12 or sv.min() < self.c1 - 1e-12:
                raise CheckError(
                    "BAD_CONTRACTION",
                    f"singular values {sv} escape [{self.c1}, {self.c2}]")
            fixed.append((a, b))
        object.__setattr__(self, "maps", fixed)

    @property
    def n(self) -> int:
        return len(self.maps)

    def apply(self, i: int, pts: np.ndarray) -> np.ndarray:
        """Image of points under map i (1-based, matching word letters)."""
        a, b = self.maps[i - 1]
        return pts @ a.T + b

    def fixed_point(self, i: int) -> np.ndarray:
        a, b = self.maps[i - 1]
        return np.linalg.solve(np.eye(self.dim) - a, b)

    def diameter_bound(self) -> float:
        """Diameter bound for the attractor: ball about the first fixed point."""
        p = self.fixed_point(1)
        shift = max(float(np.linalg.norm(self.apply(i, p[None, :])[0] - p))
                    for i in range(1, self.n + 1))
        return 2.0 * shift / (1.0 - self.c2) if self.n > 1 else 0.0


@dataclass(frozen=True)
class PointCloud:
    dim: int
    points: np.ndarray      # (count, dim)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, self.dim)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def count(self) -> int:
        return len(self.points)


def hutchinson_step(cloud: PointCloud, ifs: AffineIFS,
                    snap: float | None = None) -> PointCloud:
    """Union of the branch images, optionally snapped to a grid of pitch snap."""
    if cloud.dim != ifs.dim:
        raise CheckError("DIM_MISMATCH",
                         f"cloud dim {cloud.dim} vs system dim {ifs.dim}")
    images = np.vstack([ifs.apply(i, cloud.points) for i in range(1, ifs.n + 1)])
    if snap is not None and snap > 0:
        images = np.unique(np.round(images / snap) * snap, axis=0)
    return PointCloud(ifs.dim, images)


def hausdorff_distance(a: PointCloud, b: PointCloud) -> float:
    """Symmetric Hausdorff distance between finite clouds (KD-tree based)."""
    if a.count == 0 or b.count == 0:
        raise CheckError("EMPTY_SET", "Hausdorff distance needs nonempty sets")
    d_ab = cKDTree(b.points).query(a.points, k=1)[0].max()
    d_ba = cKDTree(a.points).query(b.points, k=1)[0].max()
    return float(max(d_ab, d_ba))


@dataclass
class AttractorResult:
    cloud: PointCloud
    steps: list           # Hausdorff distance between successive iterates
    snap: float | None


def attractor(ifs: AffineIFS, iters: int, snap: float | None = None,
              start: np.ndarray | None = None) -> AttractorResult:
    """Iterate the set map from a singleton, logging successive distances.

    The log decays geometrically with ratio <= c2 (up to 2*snap of grid
    slack); callers assert that, we just record it.
    """
    if iters < 1:
        raise CheckError("BAD_ITERS", "need at least one iteration")
    x0 = ifs.fixed_point(1) if start is None else np.asarray(start, float)
    cloud = PointCloud(ifs.dim, x0[None, :])
    steps = []
    for _ in range(iters):
        nxt = hutchinson_step(cloud, ifs, snap)
        steps.append(hausdorff_distance(cloud, nxt))
        cloud = nxt
    return AttractorResult(cloud, steps, snap)


# ------------------------------------------------------------ coded points

@dataclass(frozen=True)
class CodedPoint:
    """Address word plus the anchor phi_w(x0) and its contraction radius."""

    prefix: Word
    anchor: np.ndarray
    radius: float

    @property
    def depth(self) -> int:
        return len(self.prefix)


def address_point(word: Word, ifs: AffineIFS,
                  x0: np.ndarray | None = None) -> CodedPoint:
    """Anchor of the cylinder named by ``word``: the composite map at x0.

    Maps are applied innermost first, so extending the word on the left by
    a letter reproduces exactly (bit for bit) one more map application.
    """
    if len(word) < 1:
        raise CheckError("EMPTY_CODE", "address words must be nonempty")
    x = (ifs.fixed_point(1) if x0 is None else np.asarray(x0, float))[None, :]
    for letter in reversed(word):
        x = ifs.apply(letter, x)
    return CodedPoint(tuple(word), x[0],
                      (ifs.c2 ** len(word)) * ifs.diameter_bound())


def lifted_map(p: CodedPoint, letter: int, ifs: AffineIFS) -> CodedPoint:
    """Branch i of the lifted system: prepend the letter, move the anchor."""
    return CodedPoint((letter,) + p.prefix, ifs.apply(letter, p.anchor[None, :])[0],
                      p.radius * ifs.c2)


def lifted_shift(p: CodedPoint, ifs: AffineIFS,
                 x0: np.ndarray | None = None) -> CodedPoint:
    """Drop the leading letter; inverse of every lifted branch.

    The anchor is recomputed from the shortened word, which matches the
    original anchor exactly because composites are evaluated innermost
    first.
    """
    if p.depth < 1:
        raise CheckError("EMPTY_CODE", "cannot shift the empty address")
    if p.depth == 1:
        base = ifs.fixed_point(1) if x0 is None else np.asarray(x0, float)
        return CodedPoint((), base, ifs.diameter_bound())
    return address_point(p.prefix[1:], ifs, x0)


@dataclass
class DisjointnessReport:
    lifted_disjoint: bool         # always true: first letters differ
    unlifted_min_distance: float  # min over branch pairs on the approximation
    depth: int

    def to_dict(self):
        return {"lifted_disjoint": self.lifted_disjoint,
                "unlifted_min_distance": self.unlifted_min_distance,
                "depth": self.depth}


def branch_disjointness(ifs: AffineIFS, depth: int,
                        snap: float | None = None) -> DisjointnessReport:
    """Quantify the branch overlap that the symbolic lift removes.

    Lifted branch ranges are disjoint by the first letter of the address;
    for the plain system we report the minimal distance between distinct
    branch images of a depth-``depth`` attractor approximation.
    """
    if depth < 1:
        raise CheckError("BAD_ITERS", "depth must be >= 1")
    base = attractor(ifs, depth, snap).cloud
    images = [ifs.apply(i, base.points) for i in range(1, ifs.n + 1)]
    best = np.inf
    for i in range(len(images)):
        tree = cKDTree(images[i])
        for j in range(i + 1, len(images)):
            best = min(best, float(tree.query(images[j], k=1)[0].min()))
    return DisjointnessReport(True, best, depth)


# -------------------------------------------------------- builtin systems

def sierpinski() -> AffineIFS:
    h = 0.5 * np.eye(2)
    return AffineIFS(2, [(h, np.zeros(2)), (h, np.array([0.5, 0.0])),
                         (h, np.array([0.0, 0.5]))], 0.5, 0.5)


def cantor() -> AffineIFS:
    third = np.array([[1.0 / 3.0]])
    return AffineIFS(1, [(third, np.zeros(1)), (third, np.array([2.0 / 3.0]))],
                     1.0 / 3.0, 1.0 / 3.0)


# ------------------------------------------------------------------ file I/O

def load_ifs(path) -> AffineIFS:
    """Schema: {"dim": d, "maps": [{"A": [[...]], "b": [...]}], "c1": , "c2": }."""
    with open(path) as fh:
        data = json.load(fh)
    maps = [(np.array(m["A"], dtype=float), np.array(m["b"], dtype=float))
            for m in data["maps"]]
    return AffineIFS(int(data["dim"]), maps, float(data["c1"]), float(data["c2"]))


def save_ifs(path, ifs: AffineIFS) -> None:
    with open(path, "w") as fh:
        json.dump({
            "dim": ifs.dim,
            "maps": [{"A": a.tolist(), "b": b.tolist()} for a, b in ifs.maps],
            "c1": ifs.c1,
            "c2": ifs.c2,
        }, fh, indent=2)


def save_points_csv(path, cloud: PointCloud) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(f"x{i}" for i in range(cloud.dim)) + "\n")
        for row in cloud.points:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
