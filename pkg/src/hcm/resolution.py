"""Minimal free resolutions over the Steenrod algebra and Ext charts.

The resolution is built degree by degree: at each stage the kernel of
the previous differential is computed with bit-packed linear algebra,
and new free generators are added only for the part of the kernel not
already reached by earlier generators, so the result is minimal (no
unit entries) by construction.  Generators are ordered by degree and
then by first-found kernel pivot, which pins labels and makes repeated
runs identical.

Charts record, besides dimensions and h_0/h_1/h_2 products, how far
they can be trusted:

* ``trusted_stem_max`` - a window module is the quotient of the full
  cohomology by top degrees, so Ext agrees with the untruncated answer
  only in stems <= top - 1;
* stage minimum degrees - over a connected algebra each stage of a
  minimal resolution starts at least one degree above the previous one,
  so a stem column is finished once the staircase passes it;
* cell degrees - positive-stem classes over a cell obey the classical
  vanishing line, bounding the filtration a column can reach.

Group assembly refuses anything these facts cannot certify.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from . import f2linalg, steenrod
from .errors import ContractViolationError, RangeError, RefusalError
from .f2linalg import _bits
from .groups import AbelianGroup
from .steenrod import SqSum
from .stmodule import GradedModule


@dataclass(frozen=True)
class Generator:
    s: int
    t: int
    index: int  # position within its stage
    label: str


@dataclass(frozen=True)
class FreeResolution:
    """Stages of generators plus differentials with SqSum entries.

    ``diff[s][i]`` maps stage-s generator i to a tuple of
    ``(target_index, SqSum)`` pairs over stage s-1 generators; stage-0
    generators instead carry augmentation vectors into the module.
    """

    module: GradedModule
    max_s: int
    max_t: int
    stages: tuple[tuple[Generator, ...], ...]
    diff: tuple[dict, ...]
    aug: tuple[int, ...]  # stage-0 generator -> bit-packed module vector
    stage_min_degree: tuple[int, ...]  # lower bound per stage (max_t+1 if none)

    def generators(self, s: int) -> tuple[Generator, ...]:
        return self.stages[s] if s <= self.max_s else ()

    def entry(self, s: int, i: int, j: int) -> SqSum:
        """Differential coefficient from stage-s generator i to stage-(s-1) generator j."""
        for tj, sq in self.diff[s].get(i, ()):
            if tj == j:
                return sq
        return SqSum.zero()

    @property
    def total_generators(self) -> int:
        return sum(len(st) for st in self.stages)


class _Stage:
    """Mutable workspace for one free module F_s during construction."""

    def __init__(self):
        self.gens: list[Generator] = []
        self.gen_t: list[int] = []
        self.dvec: list[int] = []  # differential/augmentation vectors
        self.basis: dict[int, list[tuple[int, tuple]]] = {}
        self.pos: dict[tuple[int, tuple], int] = {}
        self.img: dict[int, list[int]] = {}

    def dim(self, t: int) -> int:
        return len(self.basis.get(t, ()))


def _free_sq(i: int, vec: int, src_basis, dst_pos) -> int:
    """Left-multiply a free-module vector by Sq^i."""
    out = 0
    for b in _bits(vec):
        g, mon = src_basis[b]
        for m2 in steenrod._left_mul(i, mon):
            p = dst_pos.get((g, m2))
            if p is None:
                raise ContractViolationError("free module basis out of range")
            out ^= 1 << p
    return out


_H_LABEL = re.compile(r"^h(\d+)(?:\^(\d+))?·(.+)$")


def _h_label(k: int, src_label: str) -> str:
    m = _H_LABEL.match(src_label)
    if m and int(m.group(1)) == k:
        e = int(m.group(2) or 1) + 1
        return f"h{k}^{e}·{m.group(3)}"
    if any(ch in src_label for ch in " +⊗") and not src_label.startswith("("):
        return f"h{k}·({src_label})"
    return f"h{k}·{src_label}"


def minimal_resolution(m: GradedModule, max_s: int, max_t: int) -> FreeResolution:
    """Minimal resolution of ``m`` through homological degree max_s, internal degree max_t.

    Requires the module window to reach max_t unless the module is
    complete; a window module is resolved as the truncation quotient it
    is, which is exact for chart stems <= window top - 1.
    """
    if max_s < 0 or max_t < m.lo:
        raise RangeError("empty resolution range")
    stages: list[_Stage] = [_Stage() for _ in range(max_s + 1)]

    # -- stage 0: generators = basis of M / A+M, lifted to first free coordinates.
    st0 = stages[0]
    for t in range(m.lo, min(m.hi, max_t) + 1):
        dim = m.dim(t)
        _extend_basis(st0, t, module=m)
        if dim == 0:
            continue
        covered = [v for (g, mon), v in zip(st0.basis[t], st0.img[t]) if mon != ()]
        sub = f2linalg.span(covered, dim)
        pivots = {f2linalg._low_bit(b) for b in sub.basis}
        for f in range(dim):
            if f in pivots:
                continue
            phi = 1 << f
            for b in sub.basis:
                if (b >> f) & 1:
                    phi |= 1 << f2linalg._low_bit(b)
            label = m.element_name(t, phi)
            _add_generator(st0, 0, t, 1 << f, label)
            _refresh_basis(st0, t, module=m)
    for t in range(min(m.hi, max_t) + 1, max_t + 1):
        _extend_basis(st0, t, module=m)

    # -- higher stages: cover kernels degree by degree.
    for s in range(1, max_s + 1):
        prev, cur = stages[s - 1], stages[s]
        lowest = min((g.t for g in prev.gens), default=max_t + 1) + 1
        for t in range(lowest, max_t + 1):
            _extend_basis(cur, t, prev=prev)
            nprev = prev.dim(t)
            if nprev == 0:
                continue
            mat = f2linalg.F2Matrix.from_row_ints(tuple(prev.img[t]), _target_dim(prev, t))
            ker = f2linalg.kernel(mat.transpose())
            if ker.dim == 0:
                continue
            covered = f2linalg.span(
                [v for (g, mon), v in zip(cur.basis.get(t, ()), cur.img.get(t, ()))
                 if mon != ()], nprev)
            for kv in ker.basis:
                red = covered.reduce(kv)
                if red == 0:
                    continue
                ordinal = sum(1 for g in cur.gens if g.t == t)
                label = _label_for(s, t, red, prev, stages[0], m, ordinal)
                _add_generator(cur, s, t, red, label)
                _refresh_basis(cur, t, prev=prev)
                covered = f2linalg.span(tuple(covered.basis) + (red,), nprev)
        for t in range(lowest):
            cur.basis.setdefault(t, [])
            cur.img.setdefault(t, [])

    diffs: list[dict] = [dict() for _ in range(max_s + 1)]
    for s in range(1, max_s + 1):
        prev = stages[s - 1]
        for g, vec in zip(stages[s].gens, stages[s].dvec):
            entries: dict[int, set] = {}
            for b in _bits(vec):
                tg, mon = prev.basis[g.t][b]
                entries.setdefault(tg, set()).add(mon)
            diffs[s][g.index] = tuple(
                (tg, SqSum(tuple(sorted(mons, reverse=True))))
                for tg, mons in sorted(entries.items()))

    mins = []
    for s in range(max_s + 1):
        mins.append(min((g.t for g in stages[s].gens), default=max_t + 1))

    res = FreeResolution(
        module=m, max_s=max_s, max_t=max_t,
        stages=tuple(tuple(st.gens) for st in stages),
        diff=tuple(diffs),
        aug=tuple(stages[0].dvec),
        stage_min_degree=tuple(mins))
    problems = verify(res)
    if problems:
        raise ContractViolationError("resolution failed verification: " + "; ".join(problems))
    return res


def _target_dim(prev: _Stage, t: int) -> int:
    """Bit width needed to hold the image vectors at degree t."""
    return max((v.bit_length() for v in prev.img.get(t, ())), default=0)


def _add_generator(st: _Stage, s: int, t: int, dvec: int, label: str):
    st.gens.append(Generator(s, t, len(st.gens), label))
    st.gen_t.append(t)
    st.dvec.append(dvec)


def _extend_basis(st: _Stage, t: int, module: Optional[GradedModule] = None,
                  prev: Optional[_Stage] = None):
    if t in st.basis:
        return
    st.basis[t] = []
    st.img[t] = []
    for gi, gt in enumerate(st.gen_t):
        if gt > t:
            continue
        for mon in steenrod.basis(t - gt):
            _append_basis_elt(st, t, gi, mon, module, prev)


def _refresh_basis(st: _Stage, t: int, module: Optional[GradedModule] = None,
                   prev: Optional[_Stage] = None):
    # A generator was added at degree t: only its unit element joins degree t.
    gi = len(st.gen_t) - 1
    _append_basis_elt(st, t, gi, (), module, prev)


def _append_basis_elt(st: _Stage, t: int, gi: int, mon: tuple,
                      module: Optional[GradedModule], prev: Optional[_Stage]):
    st.pos[(gi, mon)] = len(st.basis[t])
    st.basis[t].append((gi, mon))
    if mon == ():
        st.img[t].append(st.dvec[gi])
        return
    i = mon[0]
    rest_pos = st.pos[(gi, mon[1:])]
    below = st.img[t - i][rest_pos]
    if module is not None:
        st.img[t].append(module.act(i, t - i, below))
    else:
        st.img[t].append(_free_sq(i, below, prev.basis[t - i], prev.pos))


def _label_for(s: int, t: int, dvec: int, prev: _Stage, st0: _Stage,
               m: GradedModule, ordinal: int) -> str:
    entries: dict[int, list[tuple]] = {}
    for b in _bits(dvec):
        g, mon = prev.basis[t][b]
        entries.setdefault(g, []).append(mon)
    # Rule 1: an h_k edge (a bare Sq^{2^k} entry); take the earliest source.
    best = None
    for g in sorted(entries):
        for mon in entries[g]:
            if len(mon) == 1 and mon[0] & (mon[0] - 1) == 0:
                k = mon[0].bit_length() - 1
                if best is None:
                    best = (prev.gens[g], k)
                break
        if best:
            break
    if best:
        return _h_label(best[1], best[0].label)
    # Rule 2: single composite entry starting with a 2-power, traced into the module.
    if s == 1 and len(entries) == 1:
        (g, mons), = entries.items()
        if len(mons) == 1 and len(mons[0]) >= 2 and mons[0][0] & (mons[0][0] - 1) == 0:
            k = mons[0][0].bit_length() - 1
            elem = m.act_word(mons[0][1:], prev.gens[g].t, st0.dvec[g])
            if elem:
                name = m.element_name(prev.gens[g].t + sum(mons[0][1:]), elem)
                return _h_label(k, name)
    return f"[{s},{t}]" if ordinal == 0 else f"[{s},{t}:{ordinal}]"


def verify(res: FreeResolution) -> list[str]:
    """Minimality (no unit entries) and d.d = 0 by full Steenrod expansion."""
    problems = []
    for s in range(1, res.max_s + 1):
        for i, entries in res.diff[s].items():
            for j, sq in entries:
                if any(mon == () for mon in sq.terms):
                    problems.append(f"unit entry in differential at stage {s}, generator {i}")
    # d(d(g)) expanded through Steenrod products, collected per target generator.
    for s in range(2, res.max_s + 1):
        for i, entries in res.diff[s].items():
            acc: dict[tuple[int, tuple], int] = {}
            for j, sq in entries:
                for j2, sq2 in res.diff[s - 1].get(j, ()):
                    prod = steenrod.product(sq, sq2)
                    for mon in prod.terms:
                        key = (j2, mon)
                        acc[key] = acc.get(key, 0) ^ 1
            if any(acc.values()):
                problems.append(f"d.d != 0 at stage {s}, generator {i}")
    for i, entries in res.diff[1].items() if res.max_s >= 1 else ():
        g = res.stages[1][i]
        out = 0
        for j, sq in entries:
            tgt = res.stages[0][j]
            out ^= res.module.act_sum(sq, tgt.t, res.aug[j])
        if out:
            problems.append(f"augmentation of d(stage-1 generator {i}) nonzero")
    return problems


# -- charts ------------------------------------------------------------------


@dataclass(frozen=True)
class ExtChart:
    """Bigraded dimensions with labels and h_0/h_1/h_2 product edges.

    ``products[k]`` lists ((s, t, i), (s+1, t+2^k, j)) pairs.  The trust
    metadata (stem bound from module truncation, stage floors from
    minimality) lets group assembly prove a column is complete.
    """

    max_s: int
    max_t: int
    dims: dict
    labels: dict
    products: dict
    trusted_stem_max: Optional[int] = None
    stage_min_degree: tuple[int, ...] = ()
    bottom: Optional[int] = None
    cell_degrees: tuple[int, ...] = ()
    torsion_free_top_stems: frozenset = frozenset()
    annotations: tuple[str, ...] = ()

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def label(self, s: int, t: int, i: int) -> str:
        return self.labels.get((s, t), ())[i]

    def classes(self):
        for (s, t), d in sorted(self.dims.items()):
            for i in range(d):
                yield s, t, i

    def stem_complete(self, stem: int) -> bool:
        """True when no class in this stem can sit outside the computed rectangle.

        Two certificates are tried.  Staircase: over a connected algebra
        each stage of a minimal resolution starts at least one degree
        above the previous one, so stems below the last stage's floor
        minus max_s are finished.  Vanishing line: a nonzero positive
        class over a cell in degree d has stem - d >= 2s - 3 (the
        classical edge, attained by the degree-doubling family), so a
        stem with no cell at its own degree is finished once the
        rectangle covers s up to max((stem - d + 3) // 2).
        """
        if self.trusted_stem_max is not None and stem > self.trusted_stem_max:
            return False
        if self.stage_min_degree and stem <= self.max_t - self.max_s \
                and stem < self.stage_min_degree[-1] - self.max_s:
            return True
        if stem in self.cell_degrees:
            return False
        s_bound = max(((stem - d + 3) // 2 for d in self.cell_degrees if d < stem),
                      default=0)
        return s_bound <= self.max_s and stem + s_bound <= self.max_t

    def with_annotations(self, *notes: str) -> "ExtChart":
        return replace(self, annotations=self.annotations + notes)

    def to_json(self) -> dict:
        return {
            "max_s": self.max_s,
            "max_t": self.max_t,
            "dims": [[s, t, d] for (s, t), d in sorted(self.dims.items()) if d],
            "labels": [[s, t, list(ls)] for (s, t), ls in sorted(self.labels.items()) if ls],
            "products": [
                {"k": k, "from": list(a), "to": list(b)}
                for k in sorted(self.products) for a, b in self.products[k]],
            "trusted_stem_max": self.trusted_stem_max,
            "stage_min_degree": list(self.stage_min_degree),
            "bottom": self.bottom,
            "cell_degrees": list(self.cell_degrees),
            "torsion_free_top_stems": sorted(self.torsion_free_top_stems),
            "annotations": list(self.annotations),
        }


def chart_from_json(obj: dict) -> ExtChart:
    dims = {(int(s), int(t)): int(d) for s, t, d in obj.get("dims", ())}
    labels = {(int(s), int(t)): tuple(ls) for s, t, ls in obj.get("labels", ())}
    products = {}
    for p in obj.get("products", ()):
        products.setdefault(int(p["k"]), []).append(
            (tuple(int(x) for x in p["from"]), tuple(int(x) for x in p["to"])))
    return ExtChart(
        max_s=int(obj["max_s"]), max_t=int(obj["max_t"]), dims=dims, labels=labels,
        products={k: tuple(v) for k, v in products.items()},
        trusted_stem_max=obj.get("trusted_stem_max"),
        stage_min_degree=tuple(obj.get("stage_min_degree", ())),
        bottom=obj.get("bottom"),
        cell_degrees=tuple(obj.get("cell_degrees", ())),
        torsion_free_top_stems=frozenset(obj.get("torsion_free_top_stems", ())),
        annotations=tuple(obj.get("annotations", ())))


def synthetic_chart(dims: dict, max_s: int, max_t: int, products: Optional[dict] = None,
                    **kw) -> ExtChart:
    """Hand-built chart (tests, positive controls)."""
    return ExtChart(max_s=max_s, max_t=max_t, dims=dict(dims),
                    labels={}, products=products or {}, **kw)


def ext_chart(res: FreeResolution,
              torsion_free_top_stems: Sequence[int] = ()) -> ExtChart:
    """Read the E2 chart off a minimal resolution.

    dims count generators; an h_k edge joins generators whose
    differential entry contains the bare monomial Sq^{2^k}.
    """
    dims: dict = {}
    labels: dict = {}
    at: dict = {}
    for s, stage in enumerate(res.stages):
        for g in stage:
            i = dims.get((s, g.t), 0)
            dims[(s, g.t)] = i + 1
            labels.setdefault((s, g.t), [])
            labels[(s, g.t)].append(g.label)
            at[(s, g.index)] = (s, g.t, i)
    labels = {k: tuple(v) for k, v in labels.items()}
    products: dict[int, list] = {0: [], 1: [], 2: []}
    for s in range(1, res.max_s + 1):
        for i, entries in res.diff[s].items():
            for j, sq in entries:
                for mon in sq.terms:
                    if len(mon) == 1 and mon[0] & (mon[0] - 1) == 0:
                        k = mon[0].bit_length() - 1
                        if k in products:
                            products[k].append((at[(s - 1, j)], at[(s, i)]))
    m = res.module
    # A window module is the truncation quotient at the window top, so
    # Ext is the untruncated answer exactly in stems <= hi - 1.
    trusted = m.hi - 1 if m.truncated else None
    return ExtChart(
        max_s=res.max_s, max_t=res.max_t, dims=dims, labels=labels,
        products={k: tuple(sorted(v)) for k, v in products.items()},
        trusted_stem_max=trusted,
        stage_min_degree=res.stage_min_degree,
        bottom=m.bottom_nonzero,
        cell_degrees=tuple(d for d in range(m.lo, m.hi + 1) if m.dim(d)),
        torsion_free_top_stems=frozenset(torsion_free_top_stems))


def check_no_differentials(chart: ExtChart, degree_window: tuple[int, int]) -> list[dict]:
    """All possible Adams d_r arrows between nonzero spots, source stem in window.

    An empty list certifies collapse in the window.  Arrows are reported
    for every r >= 2 with both endpoints inside the computed rectangle,
    except those ruled out by h_0-linearity: if the source class has a
    finite h_0 string (h_0^L kills it) and the target sits on a
    torsion-free infinite tower (flagged stem, string capped at the
    rectangle top), a nonzero d_r would make h_0^L of a tower class
    vanish, which it cannot.
    """
    h0_next = {a: b for a, b in chart.products.get(0, ())}
    tower_spots: set[tuple[int, int, int]] = set()
    finite_sources: set[tuple[int, int, int]] = set()
    for (s, t), d in chart.dims.items():
        for i in range(d):
            run = [(s, t, i)]
            while run[-1] in h0_next:
                run.append(h0_next[run[-1]])
            s_top, t_top = run[-1][0], run[-1][1]
            if s_top >= chart.max_s or t_top >= chart.max_t:
                if (t - s) in chart.torsion_free_top_stems:
                    tower_spots.update((s2, t2) for s2, t2, _ in run)
            else:
                finite_sources.add((s, t, i))

    arrows = []
    lo, hi = degree_window
    for (s, t), d in sorted(chart.dims.items()):
        if not d:
            continue
        stem = t - s
        if stem < lo or stem > hi:
            continue
        for r in range(2, chart.max_s - s + 1):
            s2, t2 = s + r, t + r - 1
            if t2 > chart.max_t or not chart.dim(s2, t2):
                continue
            if (s2, t2) in tower_spots and all(
                    (s, t, i) in finite_sources for i in range(d)):
                continue
            arrows.append({
                "r": r, "from": (stem, s), "to": (stem - 1, s2),
                "source": (s, t), "target": (s2, t2)})
    return arrows


def _strings(chart: ExtChart, stem: int) -> list[list[tuple[int, int, int]]]:
    """Maximal h_0 strings in one stem column, bottom-up.

    Refuses columns whose h_0 edges branch or merge; those need a basis
    change before they can be read as cyclic summands.
    """
    pairs = [(a, b) for a, b in chart.products.get(0, ())
             if a[1] - a[0] == stem]
    edges = dict(pairs)
    targets = [b for _, b in pairs]
    if len(edges) != len(pairs) or len(set(targets)) != len(targets):
        raise RefusalError(f"h0 structure in stem {stem} branches; refusing to read")
    hit = set(targets)
    col = [(s, t, i) for (s, t), d in sorted(chart.dims.items())
           if t - s == stem for i in range(d)]
    strings = []
    for c in col:
        if c in hit:
            continue
        run = [c]
        while run[-1] in edges:
            run.append(edges[run[-1]])
        strings.append(run)
    return strings


def homotopy_from_chart(chart: ExtChart, stem: int) -> AbelianGroup:
    """Assemble the stem's group from maximal h_0 strings.

    Bounded strings of length m give Z/2^m; a string that touches the
    top of the computed region counts as a 2-complete Z only when the
    stem is flagged torsion-free-at-top, and is refused otherwise.
    Refuses stems with possible Adams differentials or columns the
    resolution cannot certify complete.
    """
    if chart.trusted_stem_max is not None and stem > chart.trusted_stem_max:
        raise RefusalError(
            f"stem {stem} lies beyond the window truncation (trusted through "
            f"{chart.trusted_stem_max})")
    arrows = [a for a in check_no_differentials(chart, (stem, stem + 1))
              if a["from"][0] == stem or a["to"][0] == stem]
    if arrows:
        raise RefusalError(f"possible Adams differentials touch stem {stem}: {arrows}")
    flagged = stem in chart.torsion_free_top_stems
    if not chart.stem_complete(stem) and not flagged:
        raise RefusalError(
            f"stem {stem} column is not certified complete by the computed range")
    free = 0
    torsion = []
    for run in _strings(chart, stem):
        s_top, t_top = run[-1][0], run[-1][1]
        capped = s_top >= chart.max_s or t_top >= chart.max_t
        if capped:
            if flagged:
                free += 1
                continue
            raise RefusalError(
                f"h0 string in stem {stem} reaches the computed boundary; "
                "not flagged torsion-free-at-top")
        torsion.append(1 << len(run))
    return AbelianGroup(free, tuple(sorted(torsion, reverse=True)))
