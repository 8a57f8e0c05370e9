"""Finite graded modules over the mod-2 Steenrod algebra in a degree window.

Input format is the homology cell diagram: cells with degrees, and edges
``(src, dst, k)`` meaning the degree-lowering homology operation Sq_k
carries ``src`` to ``dst`` ("a line of length k").  Construction
dualizes to the cohomological left module (the convention every other
module here consumes): on dual bases, Sq^k transposes the Sq_k edges.
Powers of two are the free inputs; every other Sq^a is completed from
them through the Adem relations, and any non-2-power edge supplied in a
diagram is checked against the completed action.

A window [lo, hi] means the module is the quotient of the full
cohomology by degrees above hi (left actions raise degree, so that is a
genuine module).  Ext computed from such a truncation is exact in stems
<= hi - 1, which downstream chart readers rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import f2linalg, steenrod
from .errors import ConstructionError, ContractViolationError, DiagramError, InputError, RangeError
from .steenrod import SqSum, choose_mod2


@dataclass(frozen=True)
class Cell:
    label: str
    degree: int


@dataclass(frozen=True)
class Edge:
    """Homology operation Sq_k: src -> dst, with deg(src) - deg(dst) = k."""

    src: str
    dst: str
    sq: int


@dataclass(frozen=True)
class CellDiagram:
    cells: tuple[Cell, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        labels = [c.label for c in self.cells]
        if len(set(labels)) != len(labels):
            raise DiagramError("duplicate cell labels")
        degs = {c.label: c.degree for c in self.cells}
        for e in self.edges:
            if e.src not in degs or e.dst not in degs:
                raise DiagramError(f"edge {e} references unknown cell")
            if e.sq <= 0 or degs[e.src] - degs[e.dst] != e.sq:
                raise DiagramError(
                    f"edge {e.src}->{e.dst} labelled Sq_{e.sq} but degrees differ by "
                    f"{degs[e.src] - degs[e.dst]}")


def diagram(cells: Iterable[tuple[str, int]], edges: Iterable[tuple[str, str, int]]) -> CellDiagram:
    return CellDiagram(tuple(Cell(l, d) for l, d in cells),
                       tuple(Edge(s, t, k) for s, t, k in edges))


class GradedModule:
    """Cohomological left module over a degree window, with full Sq tables.

    ``basis[d]`` lists labels in degree d; ``action[(a, d)]`` holds one
    bit-packed vector per basis element of degree d, written in the
    basis of degree d + a.  Instances are immutable by convention.
    """

    def __init__(self, lo: int, hi: int, basis: dict[int, tuple[str, ...]],
                 action: dict[tuple[int, int], tuple[int, ...]],
                 unstable: bool = True, truncated: bool = True,
                 warnings: tuple[str, ...] = ()):
        if lo > hi:
            raise ContractViolationError("empty window")
        self.lo = lo
        self.hi = hi
        self.basis = {d: tuple(basis.get(d, ())) for d in range(lo, hi + 1)}
        self.action = dict(action)
        self.unstable = unstable
        self.truncated = truncated
        self.warnings = warnings
        self._index = {}
        for d in range(lo, hi + 1):
            for i, label in enumerate(self.basis[d]):
                if label in self._index:
                    raise DiagramError(f"duplicate basis label {label!r}")
                self._index[label] = (d, i)

    # -- views ----------------------------------------------------------

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def labels(self, d: int) -> tuple[str, ...]:
        return self.basis.get(d, ())

    def locate(self, label: str) -> tuple[int, int]:
        return self._index[label]

    @property
    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    @property
    def top_nonzero(self) -> Optional[int]:
        for d in range(self.hi, self.lo - 1, -1):
            if self.dim(d):
                return d
        return None

    @property
    def bottom_nonzero(self) -> Optional[int]:
        for d in range(self.lo, self.hi + 1):
            if self.dim(d):
                return d
        return None

    def __eq__(self, other):
        return (isinstance(other, GradedModule)
                and (self.lo, self.hi, self.basis) == (other.lo, other.hi, other.basis)
                and self._nonzero_action() == other._nonzero_action())

    def _nonzero_action(self):
        return {k: v for k, v in self.action.items() if any(v)}

    # -- acting by Steenrod operations -----------------------------------

    def sq_rows(self, a: int, d: int) -> tuple[int, ...]:
        """Vectors Sq^a(e_i) for the degree-d basis, in degree d + a."""
        if a == 0:
            return tuple(1 << i for i in range(self.dim(d)))
        return self.action.get((a, d), (0,) * self.dim(d))

    def act(self, a: int, d: int, vec: int) -> int:
        """Apply Sq^a to a bit-packed degree-d vector."""
        if a == 0:
            return vec
        if d + a > self.hi or d > self.hi or d < self.lo:
            return 0
        rows = self.sq_rows(a, d)
        out = 0
        v = vec
        while v:
            b = v & -v
            out ^= rows[b.bit_length() - 1]
            v ^= b
        return out

    def act_word(self, word: Sequence[int], d: int, vec: int) -> int:
        """Apply the composite Sq^{word[0]} ... Sq^{word[-1]}."""
        deg = d + sum(word)
        if deg > self.hi:
            return 0
        cur = vec
        pos = d
        for a in reversed(tuple(word)):
            cur = self.act(a, pos, cur)
            pos += a
            if cur == 0:
                return 0
        return cur

    def act_sum(self, s: SqSum, d: int, vec: int) -> int:
        out = 0
        for mon in s.terms:
            out ^= self.act_word(mon, d, vec)
        return out

    def element_name(self, d: int, vec: int) -> str:
        """Name a vector by the cells supporting it, in basis order."""
        names = [lbl for i, lbl in enumerate(self.labels(d)) if (vec >> i) & 1]
        return " + ".join(names) if names else "0"

    # -- validation -------------------------------------------------------

    def validate(self) -> list[str]:
        """Grading, unstability, and exhaustive in-window Adem checks."""
        report: list[str] = []
        for (a, d), rows in self.action.items():
            if len(rows) != self.dim(d):
                report.append(f"action table Sq^{a} at degree {d} has wrong width")
                continue
            bound = 1 << self.dim(d + a) if d + a <= self.hi else 1
            if any(r >= bound for r in rows):
                report.append(f"Sq^{a} at degree {d} does not respect grading")
        if self.unstable:
            for (a, d), rows in self.action.items():
                for i, r in enumerate(rows):
                    if r and a > d:
                        report.append(
                            f"unstable violation: Sq^{a} nonzero on degree-{d} "
                            f"class {self.labels(d)[i]}")
        width = self.hi - self.lo
        for b in range(1, width + 1):
            for a in range(1, min(2 * b - 1, width - b) + 1):
                rel = steenrod.adem_reduce((a, b))
                for d in range(self.lo, self.hi - a - b + 1):
                    for i in range(self.dim(d)):
                        lhs = self.act(a, d + b, self.act(b, d, 1 << i))
                        rhs = self.act_sum(rel, d, 1 << i)
                        if lhs != rhs:
                            report.append(
                                f"Adem relation ({a},{b}) violated on degree-{d} "
                                f"class {self.labels(d)[i]}")
        return report

    # -- export -----------------------------------------------------------

    def to_cells(self) -> CellDiagram:
        """Homology cell diagram: one Sq_k edge per power of two k."""
        cells = []
        for d in range(self.lo, self.hi + 1):
            cells.extend((lbl, d) for lbl in self.labels(d))
        edges = []
        k = 1
        while k <= self.hi - self.lo:
            for d in range(self.lo, self.hi - k + 1):
                rows = self.sq_rows(k, d)
                for i, r in enumerate(rows):
                    for j in f2linalg._bits(r):
                        # cohomology Sq^k(e_i^d) contains e_j^{d+k}
                        # <=> homology Sq_k carries cell j to cell i.
                        edges.append((self.labels(d + k)[j], self.labels(d)[i], k))
            k *= 2
        return diagram(cells, edges)

    def to_json(self) -> dict:
        cd = self.to_cells()
        return {
            "window": [self.lo, self.hi],
            "cells": [{"label": c.label, "degree": c.degree} for c in cd.cells],
            "edges": [{"from": e.src, "to": e.dst, "sq": e.sq} for e in cd.edges],
            "unstable": self.unstable,
        }


def from_json(obj: dict) -> GradedModule:
    try:
        lo, hi = (int(x) for x in obj["window"])
        cells = [(str(c["label"]), int(c["degree"])) for c in obj["cells"]]
        edges = [(str(e["from"]), str(e["to"]), int(e["sq"])) for e in obj.get("edges", ())]
        unstable = bool(obj.get("unstable", True))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad module JSON: {exc}") from exc
    return from_cells(diagram(cells, edges), (lo, hi), unstable=unstable)


# -- construction ----------------------------------------------------------


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def from_cells(diag: CellDiagram, window: tuple[int, int], unstable: bool = True,
               truncated: bool = True) -> GradedModule:
    """Dualize a homology cell diagram into a windowed cohomology module.

    Powers of two come from the edges (absent edge = zero, recorded in
    ``warnings`` when the target degree is inhabited); every other Sq^a
    is Adem-forced.  Non-2-power edges are verified against the forced
    values.  The result always passes :meth:`GradedModule.validate`.
    """
    lo, hi = window
    cells = [c for c in diag.cells if lo <= c.degree <= hi]
    basis: dict[int, tuple[str, ...]] = {}
    for c in cells:
        basis[c.degree] = basis.get(c.degree, ()) + (c.label,)
    mod = GradedModule(lo, hi, basis, {}, unstable=unstable, truncated=truncated)

    pos = {c.label: mod.locate(c.label) for c in cells}
    in_window = {c.label for c in cells}

    action: dict[tuple[int, int], list[int]] = {}
    width = hi - lo
    for a in range(1, width + 1):
        for d in range(lo, hi - a + 1):
            action[(a, d)] = [0] * mod.dim(d)

    asserted: list[Edge] = []
    for e in diag.edges:
        if e.src not in in_window or e.dst not in in_window:
            continue
        if not _is_pow2(e.sq):
            asserted.append(e)
            continue
        ds, i_src = pos[e.src]
        dd, i_dst = pos[e.dst]
        # Sq_k: src -> dst dualizes to Sq^k(dst-dual) containing src-dual.
        action[(e.sq, dd)][i_dst] ^= 1 << i_src

    constrained = {(e.sq, e.dst) for e in diag.edges if _is_pow2(e.sq)}
    warnings = []
    k = 1
    while k <= width:
        for c in cells:
            d = c.degree
            if d + k <= hi and mod.dim(d + k) and (k, c.label) not in constrained:
                warnings.append(f"Sq^{k} on {c.label} defaulted to zero (degree {d + k} inhabited)")
        k *= 2

    # Adem-force the non-2-power operations, lowest degree of operation first.
    work = GradedModule(lo, hi, basis, {k_: tuple(v) for k_, v in action.items()},
                        unstable=unstable, truncated=truncated)
    for a in range(2, width + 1):
        if _is_pow2(a):
            continue
        m = 1 << (a.bit_length() - 1)
        s = a - m
        for d in range(lo, hi - a + 1):
            rows = []
            for i in range(mod.dim(d)):
                v = work.act(s, d + m, work.act(m, d, 1 << i))
                for cc in range(1, s // 2 + 1):
                    if choose_mod2(m - cc - 1, s - 2 * cc):
                        v ^= work.act(a - cc, d + cc, work.act(cc, d, 1 << i))
                rows.append(v)
            work.action[(a, d)] = tuple(rows)

    for e in asserted:
        dd, i_dst = pos[e.dst]
        ds, i_src = pos[e.src]
        got = work.act(e.sq, dd, 1 << i_dst)
        if not (got >> i_src) & 1:
            raise ConstructionError(
                f"edge Sq_{e.sq}: {e.src} -> {e.dst} is not Adem-forced "
                f"(derived Sq^{e.sq} gives {work.element_name(dd + e.sq, got)})")

    out = GradedModule(lo, hi, basis, dict(work.action), unstable=unstable,
                       truncated=truncated, warnings=tuple(warnings))
    problems = out.validate()
    if problems:
        raise ConstructionError("; ".join(problems))
    return out


def validate(m: GradedModule) -> list[str]:
    """Module-level spelling of :meth:`GradedModule.validate`."""
    return m.validate()


def raw_module(lo: int, hi: int, basis: dict[int, tuple[str, ...]],
               action: dict[tuple[int, int], tuple[int, ...]],
               unstable: bool = True, truncated: bool = True) -> GradedModule:
    """Assemble a module directly from tables, without any checking."""
    return GradedModule(lo, hi, basis, action, unstable=unstable, truncated=truncated)


def tensor(m1: GradedModule, m2: GradedModule, window: tuple[int, int]) -> GradedModule:
    """Tensor product with the Cartan action Sq^a(x@y) = sum Sq^i x @ Sq^j y."""
    lo, hi = window
    if hi > m1.hi + m2.hi:
        raise RangeError("tensor window exceeds the factors' data")
    basis: dict[int, tuple[str, ...]] = {}
    index: dict[tuple[int, int, int, int], int] = {}  # (d1, i, d2, j) -> position
    pairs: dict[int, list[tuple[int, int, int]]] = {}
    for d in range(lo, hi + 1):
        lst: list[tuple[int, int, int]] = []
        names: list[str] = []
        for d1 in range(m1.lo, m1.hi + 1):
            d2 = d - d1
            if d2 < m2.lo or d2 > m2.hi:
                continue
            for i, x in enumerate(m1.labels(d1)):
                for j, y in enumerate(m2.labels(d2)):
                    index[(d1, i, d2, j)] = len(lst)
                    lst.append((d1, i, j))
                    names.append(f"{x}⊗{y}")
        pairs[d] = lst
        basis[d] = tuple(names)

    action: dict[tuple[int, int], tuple[int, ...]] = {}
    for a in range(1, hi - lo + 1):
        for d in range(lo, hi - a + 1):
            rows = []
            for (d1, i, j) in pairs[d]:
                d2 = d - d1
                out = 0
                for ia in range(a + 1):
                    vx = m1.act(ia, d1, 1 << i) if ia else (1 << i)
                    if not vx or d1 + ia > m1.hi:
                        continue
                    vy = m2.act(a - ia, d2, 1 << j) if a - ia else (1 << j)
                    if not vy or d2 + a - ia > m2.hi:
                        continue
                    for bi in f2linalg._bits(vx):
                        for bj in f2linalg._bits(vy):
                            p = index.get((d1 + ia, bi, d2 + a - ia, bj))
                            if p is not None:
                                out ^= 1 << p
                rows.append(out)
            action[(a, d)] = tuple(rows)
    return GradedModule(lo, hi, basis, action,
                        unstable=m1.unstable and m2.unstable, truncated=True)


# -- builtin modules --------------------------------------------------------


def sphere_module(max_t: int, label: str = "x0") -> GradedModule:
    """F_2 in degree 0: the cohomology of the sphere, complete (not truncated)."""
    return GradedModule(0, max_t, {0: (label,)}, {}, unstable=True, truncated=False)


def zero_module(window: tuple[int, int] = (0, 0)) -> GradedModule:
    return GradedModule(window[0], window[1], {}, {}, unstable=True, truncated=True)


def o_diagram(n: int) -> CellDiagram:
    """Bottom cells of the connective-cover spectrum, residues 0/1/4 mod 8.

    Degrees n-1..n+2; the pattern depends only on n mod 8.
    """
    r = n % 8
    y = lambda d: f"y{d}"
    if r == 0:
        return diagram([(y(n - 1), n - 1)], [])
    if r == 1:
        return diagram(
            [(y(n - 1), n - 1), (y(n), n), (y(n + 2), n + 2)],
            [(y(n), y(n - 1), 1), (y(n + 2), y(n), 2)])
    if r == 4:
        return diagram(
            [(y(n - 1), n - 1), (y(n + 1), n + 1), (y(n + 2), n + 2)],
            [(y(n + 1), y(n - 1), 2), (y(n + 2), y(n + 1), 1)])
    raise RangeError(f"no cell diagram for n = {n} (n mod 8 must be 0, 1 or 4)")


def z_diagram(shift: int = 0) -> CellDiagram:
    """Integral Eilenberg-MacLane homology F_2[z1^2, z2, ...], degrees <= shift+5."""
    i = f"i{shift}" if shift else "i"
    mk = lambda mono: f"{mono} {i}" if shift else (mono if mono else "1")
    c1 = i if shift else "1"
    cells = [(c1, shift), (mk("z1^2"), shift + 2), (mk("z2"), shift + 3),
             (mk("z1^4"), shift + 4), (mk("z1^2 z2"), shift + 5)]
    edges = [
        (mk("z1^2"), c1, 2),
        (mk("z2"), mk("z1^2"), 1),
        (mk("z1^4"), c1, 4),
        (mk("z1^2 z2"), mk("z1^4"), 1),
        (mk("z1^2 z2"), mk("z2"), 2),
    ]
    return CellDiagram(tuple(Cell(l, d) for l, d in cells),
                       tuple(Edge(s, t, k) for s, t, k in edges))


def sphere_cell_diagram(dim: int, label: Optional[str] = None) -> CellDiagram:
    return diagram([(label or f"i{dim}", dim)], [])


def builtin(name: str, n: Optional[int] = None,
            window: Optional[tuple[int, int]] = None) -> GradedModule:
    """Builtin modules: "o:0", "o:1", "o:4" (need n), "Z" (shift n), "sphere"."""
    if name == "sphere":
        hi = window[1] if window else 20
        return sphere_module(hi)
    if name in ("o:0", "o:1", "o:4"):
        if n is None:
            raise InputError(f"builtin {name!r} needs n")
        want = int(name.split(":")[1])
        if n % 8 != want:
            raise InputError(f"builtin {name!r} needs n = {want} mod 8, got {n}")
        win = window or (n - 1, n + 2)
        return from_cells(o_diagram(n), win)
    if name == "Z":
        shift = n or 0
        win = window or (shift, shift + 5)
        if win[1] > shift + 5:
            raise RangeError("builtin Z only carries degrees up to shift+5")
        # Spectrum-level homology: exempt from the unstability condition.
        return from_cells(z_diagram(shift), win, unstable=False)
    raise InputError(f"unknown builtin module {name!r}")
