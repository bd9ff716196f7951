"""Modules over a monomial bound quiver algebra.

An algebra here is kQ/I for a finite quiver Q (cycles allowed) and an
admissible monomial ideal I; its basis is the set of nonzero paths.  A
module assigns a vector space over F_p to each vertex and a matrix to
each arrow killing every ideal generator; a hom is a vertex-indexed
family of matrices intertwining the arrow actions.

On top of the abelian-category plumbing (kernels, cokernels, images,
direct sums) this module provides radicals and tops, minimal projective
covers, syzygies and resolutions, Ext dimensions from Hom complexes,
vector-space duality, the Hom(-, algebra) star with its evaluation map,
torsionless/reflexivity tests, and bounded semi-Gorenstein-projective /
Gorenstein-projective certificates.

Modules and homs are immutable; every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exactla import FpMatrix, Subspace, null_space, column_space, rows_array, solve, solve_many
from .quiver import (
    MonomialIdeal,
    Path,
    Quiver,
    nonzero_paths,
    opposite_bound_quiver,
)

__all__ = [
    "AlgebraMismatch",
    "ShapeMismatch",
    "Algebra",
    "Module",
    "Hom",
    "HomBasis",
    "Certificate",
    "IsoResult",
    "hom_space",
    "kernel",
    "cokernel",
    "image",
    "direct_sum",
    "check_module",
    "radical",
    "top",
    "projective_cover",
    "syzygy",
    "resolve",
    "ext_dims",
    "ext_dim",
    "pd_up_to",
    "dual_module",
    "dual_hom",
    "star_module",
    "evaluation_map",
    "is_torsionless",
    "is_reflexive",
    "left_projective_approximation",
    "semi_gp_cert",
    "gp_cert",
    "random_module",
    "iso_probe",
]


class AlgebraMismatch(ValueError):
    """Modules over different algebras were combined."""


class ShapeMismatch(ValueError):
    """Matrix shapes inconsistent with the declared dimension vector."""


class Algebra:
    """A monomial bound quiver algebra kQ/I over F_p.

    The path basis and the per-vertex-pair path lists are computed once;
    projectives, simples, injectives, the regular module, and the
    opposite algebra are cached on first use.
    """

    def __init__(self, quiver: Quiver, ideal: MonomialIdeal, p: int, cap: int = 64):
        if ideal.quiver != quiver:
            raise ValueError("ideal was built over a different quiver")
        self.quiver = quiver
        self.ideal = ideal
        self.p = p
        self.cap = cap
        self.paths = nonzero_paths(quiver, ideal, cap)  # NotAdmissible on failure
        self.dim = len(self.paths)
        self._between: dict[tuple[int, int], list[Path]] = {}
        for path in self.paths:
            self._between.setdefault((path.source, path.target), []).append(path)
        self._fiber_index: dict[tuple[int, int], dict[Path, int]] = {
            key: {q: i for i, q in enumerate(paths)} for key, paths in self._between.items()
        }
        self._projectives: dict[int, Module] = {}
        self._simples: dict[int, Module] = {}
        self._injectives: dict[int, Module] = {}
        self._right_mult: dict[str, Hom] = {}
        self._regular: DirectSum | None = None
        self._opposite: Algebra | None = None

    # -- path bookkeeping --------------------------------------------------

    def paths_between(self, v: int, w: int) -> list[Path]:
        return self._between.get((v, w), [])

    def paths_from(self, v: int) -> list[Path]:
        return sorted(q for q in self.paths if q.source == v)

    def path_index(self, v: int, w: int, path: Path) -> int:
        return self._fiber_index[(v, w)][path]

    # -- distinguished modules ----------------------------------------------

    def simple(self, v: int) -> "Module":
        if v not in self._simples:
            dims = tuple(1 if w == v else 0 for w in self.quiver.vertices)
            mats = {
                a.name: FpMatrix.zeros(self.p, dims[a.target - 1], dims[a.source - 1])
                for a in self.quiver.arrows
            }
            self._simples[v] = Module(self, dims, mats)
        return self._simples[v]

    def projective(self, v: int) -> "Module":
        if v not in self._projectives:
            dims = tuple(len(self.paths_between(v, w)) for w in self.quiver.vertices)
            mats = {}
            for a in self.quiver.arrows:
                src = self.paths_between(v, a.source)
                mat = np.zeros((dims[a.target - 1], dims[a.source - 1]), dtype=np.int64)
                for col, q in enumerate(src):
                    seq = q.arrows + (a.name,)
                    if self.ideal.kills_extension(seq):
                        continue
                    longer = Path(v, a.target, seq)
                    mat[self.path_index(v, a.target, longer), col] = 1
                mats[a.name] = FpMatrix(self.p, mat)
            self._projectives[v] = Module(self, dims, mats)
        return self._projectives[v]

    def injective(self, v: int) -> "Module":
        if v not in self._injectives:
            self._injectives[v] = dual_module(self.opposite().projective(v))
        return self._injectives[v]

    def regular(self) -> "DirectSum":
        """The algebra as a left module over itself, with its projective summands."""
        if self._regular is None:
            self._regular = direct_sum([self.projective(v) for v in self.quiver.vertices])
        return self._regular

    def right_multiplication(self, arrow_name: str) -> "Hom":
        """Right multiplication by an arrow a as a left-module map P(e(a)) -> P(s(a))."""
        if arrow_name not in self._right_mult:
            a = self.quiver.arrow(arrow_name)
            src, tgt = self.projective(a.target), self.projective(a.source)
            mats = []
            for w in self.quiver.vertices:
                mat = np.zeros((tgt.dim(w), src.dim(w)), dtype=np.int64)
                for col, q in enumerate(self.paths_between(a.target, w)):
                    seq = (a.name,) + q.arrows
                    composite = Path(a.source, w, seq)
                    if not self.ideal.contains(composite):
                        mat[self.path_index(a.source, w, composite), col] = 1
                mats.append(FpMatrix(self.p, mat))
            self._right_mult[arrow_name] = Hom(src, tgt, tuple(mats))
        return self._right_mult[arrow_name]

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            oq, oi = opposite_bound_quiver(self.quiver, self.ideal)
            opp = Algebra(oq, oi, self.p, self.cap)
            opp._opposite = self
            self._opposite = opp
        return self._opposite

    def zero_module(self) -> "Module":
        dims = tuple(0 for _ in self.quiver.vertices)
        mats = {a.name: FpMatrix.zeros(self.p, 0, 0) for a in self.quiver.arrows}
        return Module(self, dims, mats)

    def __repr__(self) -> str:
        return f"Algebra(p={self.p}, dim={self.dim}, {self.quiver!r})"


class Module:
    """A finite-dimensional left module, i.e. a representation of (Q, I)."""

    __slots__ = ("algebra", "dims", "mats", "_path_cache")

    def __init__(self, algebra: Algebra, dims: tuple[int, ...], mats: dict[str, FpMatrix]):
        if len(dims) != algebra.quiver.n:
            raise ShapeMismatch(f"dimension vector of length {len(dims)} for {algebra.quiver.n} vertices")
        for a in algebra.quiver.arrows:
            mat = mats.get(a.name)
            if mat is None:
                raise ShapeMismatch(f"missing matrix for arrow {a.name}")
            want = (dims[a.target - 1], dims[a.source - 1])
            if mat.shape != want:
                raise ShapeMismatch(f"arrow {a.name}: matrix shape {mat.shape}, expected {want}")
            if mat.p != algebra.p:
                raise ShapeMismatch(f"arrow {a.name}: prime {mat.p} != {algebra.p}")
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.mats = dict(mats)
        self._path_cache: dict[Path, FpMatrix] = {}

    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: Path) -> FpMatrix:
        """Action of a path as a matrix fiber(s(path)) -> fiber(e(path))."""
        cached = self._path_cache.get(path)
        if cached is not None:
            return cached
        if path.is_trivial:
            mat = FpMatrix.identity(self.algebra.p, self.dim(path.source))
        else:
            last = self.algebra.quiver.arrow(path.arrows[-1])
            parent = Path(path.source, last.source, path.arrows[:-1])
            mat = self.mats[last.name] @ self.path_matrix(parent)
        self._path_cache[path] = mat
        return mat

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Module):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.dims == other.dims
            and all(self.mats[k] == other.mats[k] for k in self.mats)
        )

    def __repr__(self) -> str:
        return f"Module(dims={self.dims})"


def check_module(m: Module) -> list[str]:
    """Evaluate every ideal generator on the module; list the violated ones."""
    out = []
    for g in m.algebra.ideal.generators:
        if not m.path_matrix(g).is_zero():
            out.append(str(g))
    return out


class Hom:
    """A module homomorphism: one matrix per vertex, natural in every arrow."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Module, target: Module, mats: tuple[FpMatrix, ...], check: bool = True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("hom between modules over different algebras")
        if len(mats) != source.algebra.quiver.n:
            raise ShapeMismatch(f"{len(mats)} matrices for {source.algebra.quiver.n} vertices")
        for v in source.algebra.quiver.vertices:
            want = (target.dim(v), source.dim(v))
            if mats[v - 1].shape != want:
                raise ShapeMismatch(f"vertex {v}: matrix shape {mats[v - 1].shape}, expected {want}")
        self.source = source
        self.target = target
        self.mats = tuple(mats)
        if check and not self.is_natural():
            raise ShapeMismatch("matrices do not commute with the arrow actions")

    def mat(self, v: int) -> FpMatrix:
        return self.mats[v - 1]

    def is_natural(self) -> bool:
        for a in self.source.algebra.quiver.arrows:
            lhs = self.target.mats[a.name] @ self.mat(a.source)
            rhs = self.mat(a.target) @ self.source.mats[a.name]
            if lhs != rhs:
                return False
        return True

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def is_injective(self) -> bool:
        return all(m.rank() == m.cols for m in self.mats)

    def is_surjective(self) -> bool:
        return all(m.rank() == m.rows for m in self.mats)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __matmul__(self, other: "Hom") -> "Hom":
        if other.target != self.source:
            raise ShapeMismatch("homs do not compose: middle modules differ")
        mats = tuple(self.mats[i] @ other.mats[i] for i in range(len(self.mats)))
        return Hom(other.source, self.target, mats, check=False)

    def __add__(self, other: "Hom") -> "Hom":
        if other.source != self.source or other.target != self.target:
            raise ShapeMismatch("homs with different endpoints")
        return Hom(self.source, self.target, tuple(a + b for a, b in zip(self.mats, other.mats)), check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hom):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.mats == other.mats

    def __repr__(self) -> str:
        return f"Hom({self.source!r} -> {self.target!r})"


def identity_hom(m: Module) -> Hom:
    return Hom(m, m, tuple(FpMatrix.identity(m.algebra.p, d) for d in m.dims), check=False)


def zero_hom(source: Module, target: Module) -> Hom:
    mats = tuple(
        FpMatrix.zeros(source.algebra.p, target.dims[i], source.dims[i])
        for i in range(len(source.dims))
    )
    return Hom(source, target, mats, check=False)


# -- the Hom functor as a linear system ------------------------------------


def _vec(h: Hom) -> np.ndarray:
    return np.concatenate([m.data.reshape(-1) for m in h.mats]) if h.mats else np.zeros(0, dtype=np.int64)


class HomBasis:
    """Canonical echelon basis of Hom(source, target).

    Homs are flattened to row-major vectors blocked by vertex; the basis
    subspace is a reduced echelon form, so coordinates of any member hom
    are read off pivot positions.
    """

    def __init__(self, source: Module, target: Module, space: Subspace):
        self.source = source
        self.target = target
        self.space = space
        self._homs: list[Hom] | None = None

    @property
    def dim(self) -> int:
        return self.space.dim

    def from_vector(self, vec: np.ndarray) -> Hom:
        mats = []
        off = 0
        p = self.source.algebra.p
        for v in self.source.algebra.quiver.vertices:
            r, c = self.target.dim(v), self.source.dim(v)
            mats.append(FpMatrix(p, vec[off : off + r * c].reshape(r, c)))
            off += r * c
        return Hom(self.source, self.target, tuple(mats), check=False)

    def homs(self) -> list[Hom]:
        if self._homs is None:
            self._homs = [self.from_vector(row) for row in self.space.basis.data]
        return self._homs

    def coords(self, h: Hom) -> np.ndarray:
        return self.space.coords(_vec(h))


def _naturality_rows(m: Module, n: Module) -> np.ndarray:
    """Constraint matrix whose kernel is Hom(m, n) in the blocked vec layout."""
    alg = m.algebra
    p = alg.p
    sizes = [n.dim(v) * m.dim(v) for v in alg.quiver.vertices]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offs[-1])
    blocks = []
    for a in alg.quiver.arrows:
        s, e = a.source, a.target
        rows = n.dim(e) * m.dim(s)
        if rows == 0:
            continue
        block = np.zeros((rows, total), dtype=np.int64)
        na, ma = n.mats[a.name].data, m.mats[a.name].data
        block[:, offs[s - 1] : offs[s]] = np.kron(na, np.eye(m.dim(s), dtype=np.int64))
        block[:, offs[e - 1] : offs[e]] = (
            block[:, offs[e - 1] : offs[e]] - np.kron(np.eye(n.dim(e), dtype=np.int64), ma.T)
        ) % p
        blocks.append(block)
    if not blocks:
        return np.zeros((0, total), dtype=np.int64)
    return np.concatenate(blocks, axis=0) % p


def hom_space(m: Module, n: Module) -> HomBasis:
    """Basis of all homomorphisms m -> n, solved from the naturality equations."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("hom between modules over different algebras")
    rows = _naturality_rows(m, n)
    return HomBasis(m, n, null_space(FpMatrix(m.algebra.p, rows)))


def hom_dim(m: Module, n: Module) -> int:
    return hom_space(m, n).dim


# -- kernels, cokernels, images, sums ----------------------------------------


class KernelPair(NamedTuple):
    module: Module
    inclusion: Hom


class CokernelPair(NamedTuple):
    module: Module
    projection: Hom
    sections: tuple[FpMatrix, ...]


class ImageData(NamedTuple):
    module: Module
    inclusion: Hom
    corestriction: Hom


class DirectSum(NamedTuple):
    module: Module
    inclusions: tuple[Hom, ...]
    projections: tuple[Hom, ...]


def _submodule_from_subspaces(m: Module, spaces: list[Subspace]) -> KernelPair:
    """Realize vertexwise subspaces closed under the arrow action as a module."""
    alg = m.algebra
    dims = tuple(s.dim for s in spaces)
    incls = [FpMatrix(alg.p, s.basis.data.T) for s in spaces]
    mats = {}
    for a in alg.quiver.arrows:
        moved = (m.mats[a.name] @ incls[a.source - 1]).data
        coords = _coords_cols(spaces[a.target - 1], moved)
        mats[a.name] = FpMatrix(alg.p, coords)
    sub = Module(alg, dims, mats)
    incl = Hom(sub, m, tuple(incls))
    return KernelPair(sub, incl)


def _coords_cols(space: Subspace, cols: np.ndarray) -> np.ndarray:
    """Coordinates of many member columns in an echelon basis at once."""
    sel = cols[list(space.pivots), :] if space.dim else np.zeros((0, cols.shape[1]), dtype=np.int64)
    recon = (space.basis.data.T @ sel) % space.p
    if ((recon - cols) % space.p).any():
        raise ValueError("columns are not inside the subspace")
    return sel


def kernel(f: Hom) -> KernelPair:
    spaces = [null_space(f.mat(v)) for v in f.source.algebra.quiver.vertices]
    return _submodule_from_subspaces(f.source, spaces)


def cokernel(f: Hom) -> CokernelPair:
    alg = f.source.algebra
    projs, secs, dims = [], [], []
    for v in alg.quiver.vertices:
        im = column_space(f.mat(v))
        proj, sec = im.quotient_maps()
        projs.append(proj)
        secs.append(sec)
        dims.append(f.target.dim(v) - im.dim)
    mats = {}
    for a in alg.quiver.arrows:
        mats[a.name] = projs[a.target - 1] @ f.target.mats[a.name] @ secs[a.source - 1]
    coker = Module(alg, tuple(dims), mats)
    return CokernelPair(coker, Hom(f.target, coker, tuple(projs)), tuple(secs))


def image(f: Hom) -> ImageData:
    alg = f.source.algebra
    spaces = [column_space(f.mat(v)) for v in alg.quiver.vertices]
    sub, incl = _submodule_from_subspaces(f.target, spaces)
    cores = []
    for v in alg.quiver.vertices:
        cores.append(FpMatrix(alg.p, _coords_cols(spaces[v - 1], f.mat(v).data)))
    return ImageData(sub, incl, Hom(f.source, sub, tuple(cores)))


def direct_sum(mods: list[Module]) -> DirectSum:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    alg = mods[0].algebra
    for m in mods[1:]:
        if m.algebra is not alg:
            raise AlgebraMismatch("direct sum across algebras")
    dims = tuple(sum(m.dim(v) for m in mods) for v in alg.quiver.vertices)
    mats = {
        a.name: FpMatrix.block_diag(alg.p, [m.mats[a.name] for m in mods])
        for a in alg.quiver.arrows
    }
    total = Module(alg, dims, mats)
    incls, projs = [], []
    for i, m in enumerate(mods):
        inc_mats, proj_mats = [], []
        for v in alg.quiver.vertices:
            before = sum(x.dim(v) for x in mods[:i])
            inc = np.zeros((total.dim(v), m.dim(v)), dtype=np.int64)
            for j in range(m.dim(v)):
                inc[before + j, j] = 1
            inc_mats.append(FpMatrix(alg.p, inc))
            proj_mats.append(FpMatrix(alg.p, inc.T))
        incls.append(Hom(m, total, tuple(inc_mats), check=False))
        projs.append(Hom(total, m, tuple(proj_mats), check=False))
    return DirectSum(total, tuple(incls), tuple(projs))


def hom_from_columns(summands: DirectSum, target: Module, blocks: list[Hom]) -> Hom:
    """Assemble a hom out of a direct sum from homs on the summands."""
    p = target.algebra.p
    mats = []
    for v in target.algebra.quiver.vertices:
        mats.append(FpMatrix.hstack(p, target.dim(v), [b.mat(v) for b in blocks]))
    return Hom(summands.module, target, tuple(mats))


def factor_through_mono(mono: Hom, g: Hom) -> Hom:
    """The unique u with mono . u = g, for injective mono with im(g) inside im(mono)."""
    mats = []
    for v in g.source.algebra.quiver.vertices:
        sol = solve_many(mono.mat(v), g.mat(v).data)
        if sol is None:
            raise ValueError("map does not factor through the submodule")
        mats.append(FpMatrix(g.source.algebra.p, sol))
    return Hom(g.source, mono.source, tuple(mats))


def lift_through_epi(epi: Hom, g: Hom) -> Hom:
    """Some hom u with epi . u = g; exists whenever g's source is projective.

    Solved as one linear system combining the naturality equations with the
    composition constraint.
    """
    src, mid = g.source, epi.source
    alg = src.algebra
    p = alg.p
    nat = _naturality_rows(src, mid)
    sizes = [mid.dim(v) * src.dim(v) for v in alg.quiver.vertices]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offs[-1])
    comp_blocks, rhs = [], []
    for v in alg.quiver.vertices:
        rows = g.target.dim(v) * src.dim(v)
        if rows == 0:
            continue
        block = np.zeros((rows, total), dtype=np.int64)
        block[:, offs[v - 1] : offs[v]] = np.kron(
            epi.mat(v).data, np.eye(src.dim(v), dtype=np.int64)
        )
        comp_blocks.append(block)
        rhs.append(g.mat(v).data.reshape(-1))
    system = np.concatenate([nat] + comp_blocks, axis=0) if comp_blocks else nat
    target_vec = np.concatenate(
        [np.zeros(nat.shape[0], dtype=np.int64)] + rhs
    ) if comp_blocks else np.zeros(nat.shape[0], dtype=np.int64)
    sol = solve(FpMatrix(p, system % p), target_vec)
    if sol is None:
        raise ValueError("map does not lift through the epimorphism")
    basis = HomBasis(src, mid, Subspace.full(p, total))
    return basis.from_vector(sol)


# -- radical, top, covers, resolutions ---------------------------------------


def radical_subspaces(m: Module) -> list[Subspace]:
    """At each vertex, the sum of the images of the incoming arrow matrices."""
    alg = m.algebra
    out = []
    for v in alg.quiver.vertices:
        parts = [Subspace.zero(alg.p, m.dim(v))]
        for a in alg.quiver.arrows_into(v):
            parts.append(column_space(m.mats[a.name]))
        out.append(Subspace.sum_of(parts))
    return out


def radical(m: Module) -> KernelPair:
    return _submodule_from_subspaces(m, radical_subspaces(m))


def top(m: Module) -> CokernelPair:
    return cokernel(radical(m).inclusion)


class FormalProjective:
    """A direct sum of indecomposable projectives, kept as a vertex list.

    The realized module's fiber at w is ordered by (copy index, path),
    paths in canonical order; the copy's generator sits at its trivial
    path.  This layout is what makes Hom(-, N) complexes cheap: a hom out
    of the sum is just a generator image per copy.
    """

    def __init__(self, algebra: Algebra, vertices: tuple[int, ...]):
        self.algebra = algebra
        self.vertices = tuple(int(v) for v in vertices)
        self._fibers: dict[int, list[tuple[int, Path]]] = {
            w: [
                (t, q)
                for t, v in enumerate(self.vertices)
                for q in algebra.paths_between(v, w)
            ]
            for w in algebra.quiver.vertices
        }
        self._index: dict[int, dict[tuple[int, Path], int]] = {
            w: {key: i for i, key in enumerate(fiber)} for w, fiber in self._fibers.items()
        }
        self._module: Module | None = None

    @property
    def is_zero(self) -> bool:
        return not self.vertices

    def fiber(self, w: int) -> list[tuple[int, Path]]:
        return self._fibers[w]

    def generator_position(self, t: int) -> tuple[int, int]:
        v = self.vertices[t]
        return v, self._index[v][(t, self.algebra.quiver.trivial_path(v))]

    @property
    def module(self) -> Module:
        if self._module is None:
            alg = self.algebra
            dims = tuple(len(self._fibers[w]) for w in alg.quiver.vertices)
            mats = {}
            for a in alg.quiver.arrows:
                mat = np.zeros((dims[a.target - 1], dims[a.source - 1]), dtype=np.int64)
                for col, (t, q) in enumerate(self._fibers[a.source]):
                    seq = q.arrows + (a.name,)
                    if alg.ideal.kills_extension(seq):
                        continue
                    longer = Path(q.source, a.target, seq)
                    mat[self._index[a.target][(t, longer)], col] = 1
                mats[a.name] = FpMatrix(alg.p, mat)
            self._module = Module(alg, dims, mats)
        return self._module


@dataclass(frozen=True)
class Cover:
    formal: FormalProjective
    epi: Hom


def projective_cover(m: Module, pad_vertex: int | None = None) -> Cover:
    """Minimal projective cover; ``pad_vertex`` adds a redundant summand
    (used to exercise resolution-independence of Ext)."""
    alg = m.algebra
    rads = radical_subspaces(m)
    lifts: list[tuple[int, np.ndarray]] = []
    for v in alg.quiver.vertices:
        _, sec = rads[v - 1].quotient_maps()
        for j in range(sec.cols):
            lifts.append((v, sec.data[:, j]))
    vertices = tuple(v for v, _ in lifts)
    if pad_vertex is not None:
        vertices = vertices + (pad_vertex,)
        lifts.append((pad_vertex, np.zeros(m.dim(pad_vertex), dtype=np.int64)))
    formal = FormalProjective(alg, vertices)
    proj = formal.module
    mats = []
    for w in alg.quiver.vertices:
        mat = np.zeros((m.dim(w), proj.dim(w)), dtype=np.int64)
        for col, (t, q) in enumerate(formal.fiber(w)):
            mat[:, col] = m.path_matrix(q).apply(lifts[t][1])
        mats.append(FpMatrix(alg.p, mat))
    epi = Hom(proj, m, tuple(mats))
    for v in alg.quiver.vertices:
        if epi.mat(v).rank() != m.dim(v):
            raise RuntimeError("projective cover failed to surject (engine invariant)")
    return Cover(formal, epi)


def syzygy(m: Module) -> Module:
    return kernel(projective_cover(m).epi).module


@dataclass
class Resolution:
    """A projective resolution ... -> P_1 -> P_0 -> M -> 0 up to a length."""

    module: Module
    formals: list[FormalProjective]
    diffs: list[Hom]  # diffs[i]: P_{i+1}.module -> P_i.module
    augmentation: Hom

    def formal(self, i: int) -> FormalProjective | None:
        return self.formals[i] if i < len(self.formals) else None


def resolve(m: Module, length: int, pad_vertex: int | None = None) -> Resolution:
    """Minimal projective resolution out to P_length (padded first step on request)."""
    cover = projective_cover(m, pad_vertex=pad_vertex)
    formals = [cover.formal]
    diffs: list[Hom] = []
    epi = cover.epi
    current = cover
    for _ in range(length):
        ker, incl = kernel(current.epi)
        if ker.is_zero():
            break
        current = projective_cover(ker)
        formals.append(current.formal)
        diffs.append(incl @ current.epi)
    return Resolution(m, formals, diffs, epi)


def _hom_complex_ranks(res: Resolution, n: Module, kmax: int) -> tuple[list[int], list[int]]:
    """Dimensions of Hom(P_i, n) and ranks of the complex differentials.

    Uses Hom(P(v), n) = n_v: a hom out of a formal projective is its tuple
    of generator images, and precomposition acts through path actions on n.
    """
    alg = n.algebra
    p = alg.p
    cdims = []
    for i in range(kmax + 2):
        f = res.formal(i)
        cdims.append(0 if f is None else sum(n.dim(v) for v in f.vertices))
    ranks = []
    for i in range(kmax + 1):
        low, high = res.formal(i), res.formal(i + 1)
        if low is None or high is None or not cdims[i] or not cdims[i + 1]:
            ranks.append(0)
            continue
        d = res.diffs[i]
        col_offs = np.concatenate([[0], np.cumsum([n.dim(v) for v in low.vertices])])
        row_offs = np.concatenate([[0], np.cumsum([n.dim(v) for v in high.vertices])])
        delta = np.zeros((cdims[i + 1], cdims[i]), dtype=np.int64)
        for s, w in enumerate(high.vertices):
            gen_vertex, gen_idx = high.generator_position(s)
            col = d.mat(gen_vertex).data[:, gen_idx]
            for pos, (t, q) in enumerate(low.fiber(gen_vertex)):
                c = int(col[pos])
                if c == 0:
                    continue
                act = n.path_matrix(q).data
                delta[row_offs[s] : row_offs[s + 1], col_offs[t] : col_offs[t + 1]] = (
                    delta[row_offs[s] : row_offs[s + 1], col_offs[t] : col_offs[t + 1]] + c * act
                ) % p
        ranks.append(FpMatrix(p, delta).rank())
    return cdims, ranks


def ext_dims(m: Module, n: Module, kmax: int, resolution: Resolution | None = None) -> list[int]:
    """dim Ext^k(m, n) for k = 0..kmax, from one Hom complex."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("Ext between modules over different algebras")
    res = resolution if resolution is not None else resolve(m, kmax + 1)
    cdims, ranks = _hom_complex_ranks(res, n, kmax)
    out = []
    for k in range(kmax + 1):
        below = ranks[k - 1] if k else 0
        out.append(cdims[k] - ranks[k] - below)
    return out


def ext_dim(m: Module, n: Module, k: int) -> int:
    return ext_dims(m, n, k)[k]


def pd_up_to(m: Module, bound: int) -> int | None:
    """Projective dimension if <= bound, else None (meaning MORE_THAN(bound))."""
    res = resolve(m, bound + 1)
    for k in range(bound + 1):
        f = res.formal(k + 1)
        if f is None or f.is_zero:
            return k
    return None


# -- duality and the star ----------------------------------------------------


def dual_module(m: Module) -> Module:
    """Vector-space dual, as a module over the opposite algebra."""
    opp = m.algebra.opposite()
    mats = {a.name: m.mats[a.name].T for a in m.algebra.quiver.arrows}
    return Module(opp, m.dims, mats)


def dual_hom(f: Hom) -> Hom:
    """The dual map dual(target) -> dual(source) over the opposite algebra."""
    return Hom(dual_module(f.target), dual_module(f.source), tuple(m.T for m in f.mats))


def _star_with_bases(m: Module) -> tuple[Module, dict[int, HomBasis]]:
    alg = m.algebra
    opp = alg.opposite()
    bases = {v: hom_space(m, alg.projective(v)) for v in alg.quiver.vertices}
    dims = tuple(bases[v].dim for v in alg.quiver.vertices)
    mats: dict[str, FpMatrix] = {}
    for a in alg.quiver.arrows:
        rho = alg.right_multiplication(a.name)  # P(e(a)) -> P(s(a))
        cols = np.zeros((dims[a.source - 1], dims[a.target - 1]), dtype=np.int64)
        for j, g in enumerate(bases[a.target].homs()):
            cols[:, j] = bases[a.source].coords(rho @ g)
        mats[a.name] = FpMatrix(alg.p, cols)
    return Module(opp, dims, mats), bases


def star_module(m: Module) -> Module:
    """Hom(m, algebra) with its natural structure over the opposite algebra."""
    return _star_with_bases(m)[0]


def _star_hom(
    h: Hom,
    src_bases: dict[int, HomBasis],
    tgt_bases: dict[int, HomBasis],
    star_src: Module,
    star_tgt: Module,
) -> Hom:
    """Contravariant star on homs: star(target) -> star(source)."""
    alg = h.source.algebra
    mats = []
    for v in alg.quiver.vertices:
        mat = np.zeros((star_src.dim(v), star_tgt.dim(v)), dtype=np.int64)
        for j, g in enumerate(tgt_bases[v].homs()):
            mat[:, j] = src_bases[v].coords(g @ h)
        mats.append(FpMatrix(alg.p, mat))
    return Hom(star_tgt, star_src, tuple(mats))


def _evaluation_against(
    m: Module,
    star1: Module,
    bases1: dict[int, HomBasis],
    star2: Module,
    bases2: dict[int, HomBasis],
) -> Hom:
    alg = m.algebra
    opp = alg.opposite()
    p = alg.p
    mats = []
    for v in alg.quiver.vertices:
        ev = np.zeros((star2.dim(v), m.dim(v)), dtype=np.int64)
        opp_proj = opp.projective(v)
        for k in range(m.dim(v)):
            blocks = []
            for w in alg.quiver.vertices:
                block = np.zeros((opp_proj.dim(w), star1.dim(w)), dtype=np.int64)
                fiber = alg.paths_between(w, v)
                for j, g in enumerate(bases1[w].homs()):
                    val = g.mat(v).data[:, k]
                    for idx, q in enumerate(fiber):
                        rev = Path(v, w, tuple(reversed(q.arrows)))
                        block[opp.path_index(v, w, rev), j] = val[idx]
                blocks.append(block.reshape(-1))
            ev[:, k] = bases2[v].space.coords(np.concatenate(blocks) % p)
        mats.append(FpMatrix(p, ev))
    return Hom(m, star2, tuple(mats))


def evaluation_map(m: Module) -> Hom:
    """The canonical map m -> star(star(m))."""
    star1, b1 = _star_with_bases(m)
    star2, b2 = _star_with_bases(star1)
    return _evaluation_against(m, star1, b1, star2, b2)


def is_torsionless(m: Module) -> bool:
    return evaluation_map(m).is_injective()


def is_reflexive(m: Module) -> bool:
    return evaluation_map(m).is_bijective()


def left_projective_approximation(m: Module) -> Hom:
    """A minimal left approximation of m by a projective module.

    Built by covering star(m) over the opposite algebra, starring the
    cover back, and composing with the evaluation map.  The target is a
    projective module (presented through hom bases).
    """
    star1, b1 = _star_with_bases(m)
    cover = projective_cover(star1)
    star2, b2 = _star_with_bases(star1)
    cov_star, cov_bases = _star_with_bases(cover.formal.module)
    eps_star = _star_hom(cover.epi, cov_bases, b2, cov_star, star2)
    ev = _evaluation_against(m, star1, b1, star2, b2)
    return eps_star @ ev


def is_left_projective_approximation(phi: Hom) -> bool:
    """Whether precomposition with phi surjects Hom(target, A) onto Hom(source, A)."""
    alg = phi.source.algebra
    reg = alg.regular().module
    src_basis = hom_space(phi.source, reg)
    tgt_basis = hom_space(phi.target, reg)
    if src_basis.dim == 0:
        return True
    cols = np.zeros((src_basis.space.ambient, tgt_basis.dim), dtype=np.int64)
    for j, g in enumerate(tgt_basis.homs()):
        cols[:, j] = _vec(g @ phi)
    return FpMatrix(alg.p, cols).rank() == src_basis.dim


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Bounded-evidence verdict for an unbounded vanishing statement."""

    kind: str  # "CERTIFIED_UP_TO" | "REFUTED" | "UNKNOWN"
    bound: int
    reason: str = ""
    degree: int | None = None

    @property
    def certified(self) -> bool:
        return self.kind == "CERTIFIED_UP_TO"

    @property
    def refuted(self) -> bool:
        return self.kind == "REFUTED"

    def render(self) -> str:
        if self.certified:
            return f"CERTIFIED_UP_TO({self.bound})"
        if self.refuted:
            return f"REFUTED({self.reason})"
        return f"UNKNOWN({self.reason})"


def semi_gp_cert(m: Module, bound: int) -> Certificate:
    """Vanishing of Ext^i(m, algebra) for 1 <= i <= bound.

    A nonzero group refutes definitively; otherwise the verdict is
    certified up to the bound.
    """
    reg = m.algebra.regular().module
    dims = ext_dims(m, reg, bound)
    for i in range(1, bound + 1):
        if dims[i]:
            return Certificate("REFUTED", bound, f"ext^{i}(M, A) = {dims[i]}", i)
    return Certificate("CERTIFIED_UP_TO", bound)


def gp_cert(m: Module, bound: int) -> Certificate:
    """Bounded totally-reflexive test for Gorenstein-projectivity.

    Checks Ext vanishing against the algebra on both sides of the star
    plus bijectivity of the evaluation map; each failed part refutes
    definitively, joint success certifies up to the bound.
    """
    first = semi_gp_cert(m, bound)
    if first.refuted:
        return first
    star1, b1 = _star_with_bases(m)
    opp_reg = star1.algebra.regular().module
    dims = ext_dims(star1, opp_reg, bound)
    for i in range(1, bound + 1):
        if dims[i]:
            return Certificate("REFUTED", bound, f"ext^{i}(M*, A-op) = {dims[i]}", i)
    star2, b2 = _star_with_bases(star1)
    ev = _evaluation_against(m, star1, b1, star2, b2)
    if not ev.is_bijective():
        return Certificate("REFUTED", bound, "evaluation map is not bijective")
    return Certificate("CERTIFIED_UP_TO", bound)


# -- sampling and isomorphism probes ------------------------------------------


def submodule_generated(m: Module, seeds: list[tuple[int, np.ndarray]]) -> KernelPair:
    """Smallest submodule containing the given vectors (vertex, coordinates)."""
    alg = m.algebra
    spans: list[list[np.ndarray]] = [[] for _ in alg.quiver.vertices]
    for v, vec in seeds:
        spans[v - 1].append(np.mod(np.asarray(vec, dtype=np.int64), alg.p))
    spaces = [
        Subspace.from_spanning(alg.p, m.dim(v), rows_array(spans[v - 1], m.dim(v)))
        for v in alg.quiver.vertices
    ]
    changed = True
    while changed:
        changed = False
        for a in alg.quiver.arrows:
            src, tgt = spaces[a.source - 1], spaces[a.target - 1]
            if src.dim == 0:
                continue
            moved = (m.mats[a.name].data @ src.basis.data.T).T
            bigger = Subspace.sum_of([tgt, Subspace.from_spanning(alg.p, m.dim(a.target), moved)])
            if bigger.dim != tgt.dim:
                spaces[a.target - 1] = bigger
                changed = True
    return _submodule_from_subspaces(m, spaces)


def random_module(algebra: Algebra, budget: int, seed: int) -> Module:
    """A random quotient of a random sum of projectives by a submodule
    generated by random radical elements; deterministic in the seed."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    n = algebra.quiver.n
    count = 1 + int(rng.integers(0, budget))
    verts = sorted(int(rng.integers(1, n + 1)) for _ in range(count))
    proj = FormalProjective(algebra, tuple(verts)).module
    rads = radical_subspaces(proj)
    gens: list[tuple[int, np.ndarray]] = []
    for _ in range(int(rng.integers(0, budget))):
        v = int(rng.integers(1, n + 1))
        rad = rads[v - 1]
        if rad.dim == 0:
            continue
        coeffs = rng.integers(0, algebra.p, size=rad.dim)
        gens.append((v, (coeffs @ rad.basis.data) % algebra.p))
    if not gens:
        return proj
    sub = submodule_generated(proj, gens)
    return cokernel(sub.inclusion).module


@dataclass(frozen=True)
class IsoResult:
    kind: str  # "ISO" | "NOT_ISO" | "UNDECIDED"
    reason: str = ""
    witness: Hom | None = None


def iso_probe(m: Module, n: Module, trials: int = 32, seed: int = 0) -> IsoResult:
    """Sound isomorphism probe.

    NOT_ISO verdicts come from genuine invariants (dimension vectors,
    per-arrow ranks, hom-dimension fingerprints); ISO verdicts carry an
    explicit invertible hom; anything else stays UNDECIDED.
    """
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("iso probe across algebras")
    if m.dims != n.dims:
        return IsoResult("NOT_ISO", f"dimension vectors {m.dims} != {n.dims}")
    for a in m.algebra.quiver.arrows:
        rm, rn = m.mats[a.name].rank(), n.mats[a.name].rank()
        if rm != rn:
            return IsoResult("NOT_ISO", f"rank of arrow {a.name}: {rm} != {rn}")
    if m.is_zero():
        return IsoResult("ISO", "both zero", identity_hom(m))
    basis = hom_space(m, n)
    end_m, end_n = hom_dim(m, m), hom_dim(n, n)
    if not (basis.dim == hom_dim(n, m) == end_m == end_n):
        return IsoResult(
            "NOT_ISO",
            f"hom fingerprint (mn={basis.dim}, nm={hom_dim(n, m)}, mm={end_m}, nn={end_n})",
        )
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.integers(0, m.algebra.p, size=basis.dim)
        h = basis.from_vector((coeffs @ basis.space.basis.data) % m.algebra.p)
        if h.is_bijective():
            return IsoResult("ISO", "invertible hom found", h)
    return IsoResult("UNDECIDED", f"no invertible hom in {trials} random trials")
