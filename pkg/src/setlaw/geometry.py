"""Nonempty compact convex subsets of R^d.

Bodies are immutable values in one of several representations (interval,
box, vertex polytope, ellipsoid, or support values on a direction grid).
All arithmetic goes through the support function: Minkowski sums add
supports, scalar multiples scale them, and the Hausdorff distance between
convex bodies is the sup of |support difference| over unit directions.
For d = 1 the unit sphere is exactly {+1, -1}, so every metric quantity
is computed exactly; for d >= 2 a finite antipodal-closed grid gives a
lower bound that tightens as the grid refines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

NORM_TOL = 1e-12        # allowed deviation of a direction from unit norm
DUPLICATE_TOL = 1e-9    # minimum chordal separation between grid directions
SUBLINEAR_TOL = 1e-9    # slack for support-value consistency checks

# Grids with at most this many directions get the complete pairwise
# sublinearity check; larger grids check a fixed-stride subsample.
_FULL_CHECK_LIMIT = 512
_SUBSAMPLE_PAIRS = 20_000

_DEFAULT_GRID_COUNT = 256


class GeometryError(ValueError):
    """Invalid geometric construction or query."""


def _readonly(arr, dtype=float) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Direction:
    """Unit vector in R^d used to probe support functions."""

    components: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 1:
            raise GeometryError("direction needs at least one component")
        if not all(math.isfinite(c) for c in comps):
            raise GeometryError("direction components must be finite")
        norm = math.hypot(*comps)
        if abs(norm - 1.0) > NORM_TOL:
            raise GeometryError(f"direction norm {norm!r} is not 1 within {NORM_TOL}")

    @classmethod
    def unit(cls, vector) -> "Direction":
        """Normalize an arbitrary nonzero vector into a Direction."""
        v = np.asarray(vector, dtype=float)
        norm = float(np.linalg.norm(v))
        if not norm > 0.0:
            raise GeometryError("cannot normalize a zero vector")
        return cls(tuple(v / norm))

    @property
    def dim(self) -> int:
        return len(self.components)

    @cached_property
    def vector(self) -> np.ndarray:
        return _readonly(self.components)

    def negated(self) -> "Direction":
        return Direction(tuple(-c for c in self.components))


PLUS_ONE = Direction((1.0,))
MINUS_ONE = Direction((-1.0,))


class DirectionGrid:
    """Finite duplicate-free set of directions discretizing the unit sphere.

    For dim 1 the grid must be exactly {+1, -1}; that case is an exact
    description of the sphere rather than a discretization.  Antipodal
    closure (every u accompanied by -u) is detected at construction and
    is required by operations that reflect bodies, such as negative
    scalar multiples of embedded bodies.
    """

    def __init__(self, directions: Sequence[Direction], label: str | None = None):
        dirs = tuple(directions)
        if not dirs:
            raise GeometryError("direction grid must be nonempty")
        dim = dirs[0].dim
        if any(d.dim != dim for d in dirs):
            raise GeometryError("all grid directions must share one dimension")
        self._directions = dirs
        self._dim = dim
        self._matrix = _readonly([d.components for d in dirs])
        self.label = label or f"custom dim={dim} count={len(dirs)}"
        self._check_duplicates()
        self._antipode_index = self._build_antipode_map()
        if dim == 1:
            comps = sorted(d.components[0] for d in dirs)
            if len(dirs) != 2 or comps != [-1.0, 1.0]:
                raise GeometryError("a one-dimensional grid must be exactly {+1, -1}")

    # -- construction checks -------------------------------------------------

    def _near_pairs(self, sign: float, tol: float) -> list[tuple[int, int]]:
        """Index pairs (i < j) with ||u_i + sign*u_j|| <= tol.

        A Gram-matrix prefilter finds candidates; the distance is then
        recomputed by direct subtraction, which is exact for identical
        vectors where 1 - <u_i, u_j> loses all precision.
        """
        m = self._matrix
        count = len(self._directions)
        pairs = []
        chunk = max(1, min(count, 8_000_000 // max(count, 1)))
        for start in range(0, count, chunk):
            stop = min(count, start + chunk)
            gram = m[start:stop] @ m.T
            # dist^2 = 2 + 2*sign*gram; candidates where that may be tiny
            cand = np.argwhere(2.0 + 2.0 * sign * gram < 1e-12)
            for loc, j in cand:
                i = start + int(loc)
                j = int(j)
                if i >= j:
                    continue
                if float(np.linalg.norm(m[i] + sign * m[j])) <= tol:
                    pairs.append((i, j))
        return pairs

    def _check_duplicates(self):
        dupes = self._near_pairs(-1.0, DUPLICATE_TOL)
        if dupes:
            i, j = dupes[0]
            raise GeometryError(f"grid directions {i} and {j} coincide within {DUPLICATE_TOL}")

    def _build_antipode_map(self) -> np.ndarray | None:
        mapping = np.full(len(self._directions), -1, dtype=int)
        for i, j in self._near_pairs(+1.0, DUPLICATE_TOL):
            mapping[i] = j
            mapping[j] = i
        if np.any(mapping < 0):
            return None
        return _readonly(mapping, dtype=int)

    # -- basic access --------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def directions(self) -> tuple[Direction, ...]:
        return self._directions

    @property
    def matrix(self) -> np.ndarray:
        """(count, dim) array of direction components."""
        return self._matrix

    @property
    def antipodal_closed(self) -> bool:
        return self._antipode_index is not None

    @property
    def antipode_index(self) -> np.ndarray:
        if self._antipode_index is None:
            raise GeometryError("grid is not antipodal-closed")
        return self._antipode_index

    def __len__(self) -> int:
        return len(self._directions)

    def __iter__(self) -> Iterator[Direction]:
        return iter(self._directions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectionGrid):
            return NotImplemented
        return self._directions == other._directions

    def __hash__(self) -> int:
        return hash(self._directions)

    def __repr__(self) -> str:
        return f"DirectionGrid({self.label})"

    def index_of(self, u: Direction, tol: float = DUPLICATE_TOL) -> int | None:
        """Index of the grid direction matching u within chordal tol, else None."""
        if u.dim != self._dim:
            return None
        d2 = np.sum((self._matrix - u.vector) ** 2, axis=1)
        k = int(np.argmin(d2))
        if float(np.linalg.norm(self._matrix[k] - u.vector)) <= tol:
            return k
        return None

    @cached_property
    def _midpoint_triples(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Pairs (i, j) whose normalized sum lands on grid index k.

        Returns (i, j, k, norm_of_sum) arrays; used to test sublinearity of
        support values on this grid.  Complete for small grids, a fixed
        deterministic subsample for large ones.
        """
        m = self._matrix
        count = len(self._directions)
        ii, jj = np.triu_indices(count, k=1)
        if count > _FULL_CHECK_LIMIT and len(ii) > _SUBSAMPLE_PAIRS:
            stride = len(ii) // _SUBSAMPLE_PAIRS + 1
            ii, jj = ii[::stride], jj[::stride]
        out_i, out_j, out_k, out_s = [], [], [], []
        # keep each candidate matmul against the grid under ~64 MB
        chunk = max(256, 8_000_000 // max(count, 1))
        for start in range(0, len(ii), chunk):
            ci, cj = ii[start:start + chunk], jj[start:start + chunk]
            sums = m[ci] + m[cj]
            norms = np.linalg.norm(sums, axis=1)
            keep = norms > 1e-12
            ci, cj, sums, norms = ci[keep], cj[keep], sums[keep], norms[keep]
            mids = sums / norms[:, None]
            nearest = np.argmax(mids @ m.T, axis=1)
            hit = np.linalg.norm(mids - m[nearest], axis=1) <= DUPLICATE_TOL
            out_i.append(ci[hit])
            out_j.append(cj[hit])
            out_k.append(nearest[hit])
            out_s.append(norms[hit])
        if not out_i:
            empty = np.empty(0)
            return empty.astype(int), empty.astype(int), empty.astype(int), empty
        return (np.concatenate(out_i), np.concatenate(out_j),
                np.concatenate(out_k), np.concatenate(out_s))


def make_direction_grid(dim: int, count: int, scheme: str, seed: int = 0) -> DirectionGrid:
    """Build an antipodal-closed direction grid.

    Schemes: ``exact1d`` (dim 1, the two signs), ``uniform_angles_2d``
    (dim 2, equally spaced angles), ``fibonacci_3d`` (dim 3, spiral points
    plus antipodes), ``seeded_random`` (dim >= 2, normalized Gaussian
    directions plus antipodes, deterministic in ``seed``).  For antipodal
    schemes ``count`` must be even: count/2 directions are generated and
    their exact negations appended.
    """
    if dim < 1:
        raise GeometryError("dim must be >= 1")
    if count < 2:
        raise GeometryError("count must be >= 2")
    if scheme == "exact1d":
        if dim != 1:
            raise GeometryError("scheme exact1d requires dim 1")
        return DirectionGrid((PLUS_ONE, MINUS_ONE), label="exact1d count=2")
    if dim == 1:
        raise GeometryError("dim 1 supports only the exact1d scheme")
    if count % 2 != 0:
        raise GeometryError(f"scheme {scheme} needs an even count to close under antipodes")
    half = count // 2
    if scheme == "uniform_angles_2d":
        if dim != 2:
            raise GeometryError("scheme uniform_angles_2d requires dim 2")
        angles = 2.0 * math.pi * np.arange(half) / count
        pts = np.column_stack([np.cos(angles), np.sin(angles)])
        label = f"uniform_angles_2d count={count}"
    elif scheme == "fibonacci_3d":
        if dim != 3:
            raise GeometryError("scheme fibonacci_3d requires dim 3")
        i = np.arange(half)
        z = 1.0 - (2.0 * i + 1.0) / half
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        theta = i * math.pi * (3.0 - math.sqrt(5.0))
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        label = f"fibonacci_3d count={count}"
    elif scheme == "seeded_random":
        if dim < 2:
            raise GeometryError("scheme seeded_random requires dim >= 2")
        rng = np.random.default_rng(seed)
        pts = np.empty((half, dim))
        filled = 0
        while filled < half:
            z = rng.standard_normal((half - filled, dim))
            norms = np.linalg.norm(z, axis=1)
            ok = norms > 1e-12
            z = z[ok] / norms[ok, None]
            pts[filled:filled + len(z)] = z
            filled += len(z)
        label = f"seeded_random count={count} seed={seed}"
    else:
        raise GeometryError(f"unknown grid scheme {scheme!r}")
    dirs = [Direction(tuple(p)) for p in pts]
    dirs += [d.negated() for d in dirs]
    return DirectionGrid(dirs, label=label)


# ---------------------------------------------------------------------------
# Body representations
# ---------------------------------------------------------------------------


class ConvexBody:
    """Base class for nonempty compact convex set representations."""

    @property
    def dim(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Interval(ConvexBody):
    """Closed interval [lo, hi] in R (lo == hi is a legal singleton)."""

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise GeometryError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise GeometryError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def dim(self) -> int:
        return 1


@dataclass(frozen=True)
class Box(ConvexBody):
    """Axis-aligned box given by componentwise bounds lo <= hi."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(c) for c in self.lo)
        hi = tuple(float(c) for c in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or not lo:
            raise GeometryError("box bounds must be nonempty and of equal length")
        if not all(math.isfinite(a) and math.isfinite(b) for a, b in zip(lo, hi)):
            raise GeometryError("box bounds must be finite")
        if any(a > b for a, b in zip(lo, hi)):
            raise GeometryError("box requires lo <= hi componentwise")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @cached_property
    def lo_vec(self) -> np.ndarray:
        return _readonly(self.lo)

    @cached_property
    def hi_vec(self) -> np.ndarray:
        return _readonly(self.hi)


class Polytope(ConvexBody):
    """Convex hull of a finite vertex list, stored as an (k, d) array.

    The stored vertices need not be in minimal (extreme-point) position;
    Minkowski sums in d <= 2 prune to the hull, higher dimensions keep the
    raw vertex set.
    """

    def __init__(self, vertices):
        arr = np.array(vertices, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise GeometryError("polytope needs at least one vertex of dimension >= 1")
        if not np.all(np.isfinite(arr)):
            raise GeometryError("polytope vertices must be finite")
        arr.setflags(write=False)
        self._vertices = arr

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def dim(self) -> int:
        return self._vertices.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polytope):
            return NotImplemented
        return self._vertices.shape == other._vertices.shape and bool(
            np.array_equal(self._vertices, other._vertices))

    def __repr__(self) -> str:
        return f"Polytope({self._vertices.tolist()})"


@dataclass(frozen=True)
class Ellipsoid(ConvexBody):
    """Solid axis-aligned ellipsoid: sum((x_i - c_i)^2 / a_i^2) <= 1."""

    center: tuple[float, ...]
    semi_axes: tuple[float, ...]

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        axes = tuple(float(a) for a in self.semi_axes)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "semi_axes", axes)
        if len(center) != len(axes) or not center:
            raise GeometryError("ellipsoid center and semi_axes must be nonempty and match")
        if not all(math.isfinite(c) for c in center + axes):
            raise GeometryError("ellipsoid parameters must be finite")
        if any(a <= 0.0 for a in axes):
            raise GeometryError("ellipsoid semi-axes must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    @cached_property
    def center_vec(self) -> np.ndarray:
        return _readonly(self.center)

    @cached_property
    def axes_vec(self) -> np.ndarray:
        return _readonly(self.semi_axes)


@dataclass(frozen=True)
class SupportVector:
    """Support-function values of one body on one direction grid."""

    grid: DirectionGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _readonly(self.values)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or len(vals) != len(self.grid):
            raise GeometryError("support vector length must equal the grid size")
        if not np.all(np.isfinite(vals)):
            raise GeometryError("support values must be finite")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SupportVector):
            return NotImplemented
        return self.grid == other.grid and bool(np.array_equal(self.values, other.values))


class Embedded(ConvexBody):
    """Body known only through its support values on a grid.

    Construction checks sublinearity on every grid pair whose normalized
    midpoint is itself a grid direction; values that cannot come from a
    convex body are rejected.
    """

    def __init__(self, support: SupportVector):
        self._support = support
        i, j, k, norms = support.grid._midpoint_triples
        if len(i):
            vals = support.values
            excess = vals[k] - (vals[i] + vals[j]) / norms
            worst = float(excess.max(initial=0.0))
            if worst > SUBLINEAR_TOL:
                raise GeometryError(
                    f"support values violate sublinearity by {worst:.3e}; not a convex body")

    @property
    def support(self) -> SupportVector:
        return self._support

    @property
    def grid(self) -> DirectionGrid:
        return self._support.grid

    @property
    def dim(self) -> int:
        return self._support.grid.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Embedded):
            return NotImplemented
        return self._support == other._support

    def __repr__(self) -> str:
        return f"Embedded(grid={self.grid.label}, count={len(self.grid)})"


# ---------------------------------------------------------------------------
# Support function and derived operations
# ---------------------------------------------------------------------------


def support_function(body: ConvexBody, u: Direction) -> float:
    """Largest inner product <u, x> over points x of the body.

    Closed form per representation.  Embedded bodies answer only on their
    own grid; off-grid queries raise instead of interpolating.
    """
    if u.dim != body.dim:
        raise GeometryError(f"direction dim {u.dim} does not match body dim {body.dim}")
    if isinstance(body, Interval):
        c = u.components[0]
        return body.hi * c if c > 0.0 else body.lo * c
    if isinstance(body, Box):
        total = 0.0
        for c, lo, hi in zip(u.components, body.lo, body.hi):
            total += hi * c if c > 0.0 else lo * c
        return total
    if isinstance(body, Polytope):
        return float(np.dot(body.vertices, u.vector).max())
    if isinstance(body, Ellipsoid):
        radius = math.sqrt(float(np.sum((body.axes_vec * u.vector) ** 2)))
        return float(np.dot(body.center_vec, u.vector)) + radius
    if isinstance(body, Embedded):
        idx = body.grid.index_of(u)
        if idx is None:
            raise GeometryError(
                "embedded body queried off its grid; support values are not interpolated")
        return float(body.support.values[idx])
    raise GeometryError(f"unsupported body type {type(body).__name__}")


def embed(body: ConvexBody, grid: DirectionGrid) -> SupportVector:
    """Support values of the body on every grid direction."""
    if grid.dim != body.dim:
        raise GeometryError(f"grid dim {grid.dim} does not match body dim {body.dim}")
    values = np.fromiter(
        (support_function(body, u) for u in grid), dtype=float, count=len(grid))
    return SupportVector(grid, values)


def _default_grid(dim: int) -> DirectionGrid:
    if dim == 1:
        return make_direction_grid(1, 2, "exact1d")
    if dim == 2:
        return make_direction_grid(2, _DEFAULT_GRID_COUNT, "uniform_angles_2d")
    if dim == 3:
        return make_direction_grid(3, _DEFAULT_GRID_COUNT, "fibonacci_3d")
    return make_direction_grid(dim, _DEFAULT_GRID_COUNT, "seeded_random", seed=0)


def _hull_prune(vertices: np.ndarray) -> np.ndarray:
    """Extreme points of a vertex set in d <= 2 (exact arithmetic on floats)."""
    if vertices.shape[1] == 1:
        lo, hi = float(vertices.min()), float(vertices.max())
        return np.array([[lo]]) if lo == hi else np.array([[lo], [hi]])
    pts = np.unique(vertices, axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if not hull:  # all points collinear were popped down to endpoints
        hull = [pts[0], pts[-1]]
    return np.array(hull)


def minkowski_sum(a: ConvexBody, b: ConvexBody,
                  grid: DirectionGrid | None = None) -> ConvexBody:
    """Pointwise set sum {x + y}.

    Like representations stay exact (intervals add endpoints, boxes add
    bounds, polytopes add vertex pairs, hull-pruned for d <= 2).  Any other
    mix is embedded on ``grid`` (or a default grid for the dimension) by
    adding support values, which is exact on the grid.
    """
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if isinstance(a, Interval) and isinstance(b, Interval):
        return Interval(a.lo + b.lo, a.hi + b.hi)
    if isinstance(a, Box) and isinstance(b, Box):
        return Box(tuple(x + y for x, y in zip(a.lo, b.lo)),
                   tuple(x + y for x, y in zip(a.hi, b.hi)))
    if isinstance(a, Polytope) and isinstance(b, Polytope):
        sums = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.dim)
        if a.dim <= 2:
            return Polytope(_hull_prune(sums))
        return Polytope(np.unique(sums, axis=0))
    if grid is None:
        if isinstance(a, Embedded) and isinstance(b, Embedded) and a.grid == b.grid:
            grid = a.grid
        else:
            grid = _default_grid(a.dim)
    return Embedded(SupportVector(grid, embed(a, grid).values + embed(b, grid).values))


def scalar_mul(lam: float, body: ConvexBody) -> ConvexBody:
    """Scaled body {lam * x}; lam = 0 collapses to the singleton origin."""
    lam = float(lam)
    if not math.isfinite(lam):
        raise GeometryError("scalar must be finite")
    if lam == 0.0:
        if isinstance(body, Interval):
            return Interval(0.0, 0.0)
        if isinstance(body, Box):
            zeros = (0.0,) * body.dim
            return Box(zeros, zeros)
        if isinstance(body, Embedded):
            return Embedded(SupportVector(body.grid, np.zeros(len(body.grid))))
        return Polytope(np.zeros((1, body.dim)))
    if isinstance(body, Interval):
        x, y = lam * body.lo, lam * body.hi
        return Interval(min(x, y), max(x, y))
    if isinstance(body, Box):
        x = lam * body.lo_vec
        y = lam * body.hi_vec
        return Box(tuple(np.minimum(x, y)), tuple(np.maximum(x, y)))
    if isinstance(body, Polytope):
        return Polytope(lam * body.vertices)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(tuple(lam * c for c in body.center),
                         tuple(abs(lam) * a for a in body.semi_axes))
    if isinstance(body, Embedded):
        if lam > 0.0:
            return Embedded(SupportVector(body.grid, lam * body.support.values))
        if not body.grid.antipodal_closed:
            raise GeometryError(
                "negative scaling of an embedded body needs an antipodal-closed grid")
        reflected = body.support.values[body.grid.antipode_index]
        return Embedded(SupportVector(body.grid, abs(lam) * reflected))
    raise GeometryError(f"unsupported body type {type(body).__name__}")


def hausdorff_distance(a: ConvexBody, b: ConvexBody,
                       grid: DirectionGrid | None = None) -> float:
    """Hausdorff distance via the support identity sup |s(u,a) - s(u,b)|.

    Exact for d = 1 (the two sign directions are the whole sphere; any
    grid argument is ignored).  For d >= 2 the max runs over the grid and
    is a lower bound on the true distance that converges as the grid
    refines; callers should record the grid size next to the value.
    """
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.dim == 1:
        return max(abs(support_function(a, PLUS_ONE) - support_function(b, PLUS_ONE)),
                   abs(support_function(a, MINUS_ONE) - support_function(b, MINUS_ONE)))
    if grid is None:
        if isinstance(a, Embedded) and isinstance(b, Embedded) and a.grid == b.grid:
            grid = a.grid
        else:
            raise GeometryError("a direction grid is required for dimension >= 2")
    if grid.dim != a.dim:
        raise GeometryError(f"grid dim {grid.dim} does not match body dim {a.dim}")
    best = 0.0
    for u in grid:
        gap = abs(support_function(a, u) - support_function(b, u))
        if gap > best:
            best = gap
    return best


def zero_body(dim: int) -> ConvexBody:
    """The singleton {0} in R^dim."""
    if dim == 1:
        return Interval(0.0, 0.0)
    return Polytope(np.zeros((1, dim)))


def set_norm(body: ConvexBody, grid: DirectionGrid | None = None) -> float:
    """Distance from {0} to the body, i.e. sup of ||x|| over the body."""
    return hausdorff_distance(body, zero_body(body.dim), grid)


# ---------------------------------------------------------------------------
# Line-oriented text form
# ---------------------------------------------------------------------------


def format_body(body: ConvexBody) -> str:
    """One-line text form; floats are repr-exact so parsing round-trips."""
    if isinstance(body, Interval):
        return f"interval {body.lo!r} {body.hi!r}"
    if isinstance(body, Box):
        parts = [str(body.dim)] + [repr(c) for c in body.lo] + [repr(c) for c in body.hi]
        return "box " + " ".join(parts)
    if isinstance(body, Polytope):
        k, d = body.vertices.shape
        coords = " ".join(repr(float(c)) for c in body.vertices.ravel())
        return f"polytope {d} {k} {coords}"
    if isinstance(body, Ellipsoid):
        parts = [str(body.dim)] + [repr(c) for c in body.center] + \
            [repr(a) for a in body.semi_axes]
        return "ellipsoid " + " ".join(parts)
    raise GeometryError(f"body type {type(body).__name__} has no text form")


def parse_body(line: str) -> ConvexBody:
    """Parse the text form produced by format_body."""
    tokens = line.split()
    if not tokens:
        raise GeometryError("empty body line")
    kind, args = tokens[0], tokens[1:]
    try:
        if kind == "interval":
            if len(args) != 2:
                raise GeometryError("interval needs exactly 2 numbers")
            return Interval(float(args[0]), float(args[1]))
        if kind == "box":
            d = int(args[0])
            nums = [float(t) for t in args[1:]]
            if len(nums) != 2 * d:
                raise GeometryError(f"box dim {d} needs {2 * d} numbers")
            return Box(tuple(nums[:d]), tuple(nums[d:]))
        if kind == "polytope":
            d, k = int(args[0]), int(args[1])
            nums = [float(t) for t in args[2:]]
            if len(nums) != d * k:
                raise GeometryError(f"polytope {k}x{d} needs {d * k} numbers")
            return Polytope(np.array(nums).reshape(k, d))
        if kind == "ellipsoid":
            d = int(args[0])
            nums = [float(t) for t in args[1:]]
            if len(nums) != 2 * d:
                raise GeometryError(f"ellipsoid dim {d} needs {2 * d} numbers")
            return Ellipsoid(tuple(nums[:d]), tuple(nums[d:]))
    except (ValueError, IndexError) as exc:
        raise GeometryError(f"malformed body line {line!r}: {exc}") from exc
    raise GeometryError(f"unknown body kind {kind!r}")
