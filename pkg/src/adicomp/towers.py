"""Inverse and directed systems with finite-depth pro/ind diagnostics.

Verdicts are three-valued.  ``holds`` carries witnesses that can be
recomputed; ``fails_up_to_depth`` says a counterexample survives the whole
window; ``undetermined`` means the window was too short to tell.

Pro-zero is decided with a uniform gap: g is the largest distance seen
between an index and its first vanishing composite, and every index that
this gap leaves testable must have a witness.  g is capped at depth - 2 so
that at least two indices are tested.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from .complexes import BoundedComplex, ChainMap, induced_map
from .modules import FpModule, ModuleMap, cokernel, is_isomorphism, kernel

HOLDS = "holds"
FAILS = "fails_up_to_depth"
UNDETERMINED = "undetermined"

GLYPHS = {HOLDS: "✔", FAILS: "✘", UNDETERMINED: "?"}

DEFAULT_DEPTH = 8


@dataclass
class Verdict:
    status: str
    depth: int
    witnesses: Any = None
    evidence: Any = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    @property
    def certified(self) -> bool:
        return self.status != UNDETERMINED

    @property
    def glyph(self) -> str:
        return GLYPHS[self.status]

    def to_dict(self) -> dict:
        out = {"status": self.status, "depth": self.depth}
        if self.witnesses is not None:
            out["witnesses"] = self.witnesses
        if self.evidence is not None:
            out["evidence"] = self.evidence
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(d["status"], d["depth"], d.get("witnesses"), d.get("evidence"), d.get("note", ""))


def Holds(depth: int, witnesses=None, note: str = "", evidence=None) -> Verdict:
    return Verdict(HOLDS, depth, witnesses, evidence, note)


def FailsUpToDepth(depth: int, evidence=None, note: str = "") -> Verdict:
    return Verdict(FAILS, depth, None, evidence, note)


def Undetermined(depth: int, note: str = "", evidence=None) -> Verdict:
    return Verdict(UNDETERMINED, depth, None, evidence, note)


def conjunction(verdicts: List[Verdict], depth: int, note: str = "") -> Verdict:
    if any(v.fails for v in verdicts):
        return FailsUpToDepth(depth, [v.to_dict() for v in verdicts if v.fails], note)
    if all(v.holds for v in verdicts):
        return Holds(depth, [v.witnesses for v in verdicts], note)
    return Undetermined(depth, note)


# ---------------------------------------------------------------- systems

Stage = Union[FpModule, BoundedComplex]
Arrow = Union[ModuleMap, ChainMap]


def _identity(X: Stage) -> Arrow:
    if isinstance(X, BoundedComplex):
        return ChainMap.identity(X)
    return ModuleMap.identity(X)


class _System:
    """Lazily materialized stages indexed by n >= 1."""

    def __init__(self, stage: Callable[[int], Stage], transition: Callable[[int], Arrow], name: str = ""):
        self._stage_fn = stage
        self._trans_fn = transition
        self.name = name
        self._stages: Dict[int, Stage] = {}
        self._trans: Dict[int, Arrow] = {}
        self._comp: Dict[Tuple[int, int], Arrow] = {}
        self._hom: Dict[int, "_System"] = {}
        self._lock = threading.RLock()

    def stage(self, n: int) -> Stage:
        if n < 1:
            raise IndexError("stages start at 1")
        with self._lock:
            s = self._stages.get(n)
            if s is None:
                s = self._stage_fn(n)
                self._stages[n] = s
            return s

    def transition(self, n: int) -> Arrow:
        with self._lock:
            t = self._trans.get(n)
            if t is None:
                t = self._trans_fn(n)
                self._trans[n] = t
            return t

    @property
    def materialized_depth(self) -> int:
        return max(self._stages, default=0)


class Tower(_System):
    """Inverse system; ``transition(n): stage(n+1) -> stage(n)``."""

    def composite(self, m: int, n: int) -> Arrow:
        """stage(m) -> stage(n) for m >= n."""
        if m < n:
            raise ValueError("composite needs m >= n")
        if m == n:
            return _identity(self.stage(n))
        with self._lock:
            c = self._comp.get((m, n))
            if c is None:
                c = self.transition(n) @ self.composite(m, n + 1) if m > n + 1 else self.transition(n)
                self._comp[(m, n)] = c
            return c

    def homology(self, i: int) -> "Tower":
        with self._lock:
            if i not in self._hom:
                self._hom[i] = Tower(lambda n: self.stage(n).homology(i),
                                     lambda n: induced_map(self.transition(n), i), f"H_{i}({self.name})")
            return self._hom[i]

    @classmethod
    def constant(cls, X: Stage, name: str = "") -> "Tower":
        return cls(lambda n: X, lambda n: _identity(X), name)

    def drop_first(self) -> "Tower":
        return Tower(lambda n: self.stage(n + 1), lambda n: self.transition(n + 1), self.name)


class IndSystem(_System):
    """Directed system; ``transition(n): stage(n) -> stage(n+1)``."""

    def composite(self, n: int, m: int) -> Arrow:
        """stage(n) -> stage(m) for m >= n."""
        if m < n:
            raise ValueError("composite needs m >= n")
        if m == n:
            return _identity(self.stage(n))
        with self._lock:
            c = self._comp.get((n, m))
            if c is None:
                c = self.transition(m - 1) @ self.composite(n, m - 1) if m > n + 1 else self.transition(n)
                self._comp[(n, m)] = c
            return c

    def homology(self, i: int) -> "IndSystem":
        with self._lock:
            if i not in self._hom:
                self._hom[i] = IndSystem(lambda n: self.stage(n).homology(i),
                                         lambda n: induced_map(self.transition(n), i), f"H_{i}({self.name})")
            return self._hom[i]


class LevelMap:
    """Levelwise maps ``source(n) -> target(n)`` between towers."""

    def __init__(self, source: Tower, target: Tower, comp: Callable[[int], Arrow]):
        self.source = source
        self.target = target
        self._comp_fn = comp
        self._comps: Dict[int, Arrow] = {}
        self._hom: Dict[int, "LevelMap"] = {}
        self._lock = threading.Lock()

    def component(self, n: int) -> Arrow:
        c = self._comps.get(n)
        if c is None:
            c = self._comp_fn(n)
            with self._lock:
                self._comps.setdefault(n, c)
        return c

    def homology(self, i: int) -> "LevelMap":
        if i in self._hom:
            return self._hom[i]
        self._hom[i] = LevelMap(self.source.homology(i), self.target.homology(i),
                        lambda n: induced_map(self.component(n), i))
        return self._hom[i]

    def check_commutes(self, depth: int) -> bool:
        for n in range(1, depth):
            lhs = self.target.transition(n) @ self.component(n + 1)
            rhs = self.component(n) @ self.source.transition(n)
            if not lhs.equals(rhs):
                return False
        return True


def kernel_tower(f: LevelMap) -> Tower:
    cache: Dict[int, Tuple[FpModule, ModuleMap]] = {}

    def cached(n):
        if n not in cache:
            cache[n] = kernel(f.component(n))
        return cache[n]

    def trans(n):
        K1, inc1 = cached(n + 1)
        K0, inc0 = cached(n)
        t = f.source.transition(n)
        rows = []
        for r in inc1.matrix:
            pre = inc0.lift(t.apply(r))
            if pre is None:
                raise ValueError("level map does not commute with transitions")
            rows.append(pre)
        return ModuleMap(K1, K0, rows, check=False)

    return Tower(lambda n: cached(n)[0], trans, "ker")


def cokernel_tower(f: LevelMap) -> Tower:
    cache: Dict[int, Tuple[FpModule, ModuleMap]] = {}

    def cached(n):
        if n not in cache:
            cache[n] = cokernel(f.component(n))
        return cache[n]

    def trans(n):
        C1, p1 = cached(n + 1)
        C0, p0 = cached(n)
        t = f.target.transition(n)
        # generators of C1 are images of target generators under p1; use a section
        rows = []
        for i in range(C1.ngens):
            pre = p1.lift(C1.gen(i))
            rows.append(p0.apply(t.apply(pre)))
        return ModuleMap(C1, C0, rows, check=False)

    return Tower(lambda n: cached(n)[0], trans, "coker")


# ---------------------------------------------------------------- verdicts

def _gap_search(zero_at: Callable[[int, int], bool], depth: int, stage_zero: Callable[[int], bool]):
    """Uniform vanishing gap read off the window 1..depth.

    first[n] is the least m >= n with a zero composite (m = n for zero
    stages).  The gap g is the largest observed first[n] - n; every index
    n <= depth - max(g, 1) must then have a witness.  Returns (g, None,
    first) on success, (None, n, first) when such an n has none, and
    (None, None, first) when the gap leaves fewer than two testable indices.
    """
    first: Dict[int, Optional[int]] = {}
    for n in range(1, depth + 1):
        if stage_zero(n):
            first[n] = n
            continue
        first[n] = next((m for m in range(n + 1, depth + 1) if zero_at(n, m)), None)
    g = max([m - n for n, m in first.items() if m is not None] + [0])
    span = depth - max(g, 1)
    missing = [n for n in range(1, span + 1) if first[n] is None]
    if missing:
        return None, missing[0], first
    if g > depth - 2:
        return None, None, first
    return g, None, first


def pro_zero(T: Tower, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Pro-vanishing of a tower of modules."""
    def zero_at(n, m):
        return T.composite(m, n).is_zero()

    g, bad, first = _gap_search(zero_at, depth, lambda n: T.stage(n).is_zero())
    if g is not None:
        wit = [[n, first[n]] for n in range(1, depth - max(g, 1) + 1)]
        return Holds(depth, wit, f"composites T_(n+{g}) -> T_n vanish", evidence={"gap": g})
    if bad is not None:
        c = T.composite(depth, bad)
        survivors = [i for i, r in enumerate(c.matrix) if not c.target.is_zero_element(r)]
        return FailsUpToDepth(depth, {"stage": depth, "into": bad, "surviving_generators": survivors},
                              f"generators of T_{depth} survive into T_{bad}")
    return Undetermined(depth, "vanishing gap grows beyond the window",
                        evidence={"first_zero": {str(k): v for k, v in first.items()}})


def ind_zero(S: IndSystem, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Every element of every stage dies further along the system."""
    def zero_at(n, m):
        return S.composite(n, m).is_zero()

    g, bad, first = _gap_search(zero_at, depth, lambda n: S.stage(n).is_zero())
    if g is not None:
        wit = [[n, first[n]] for n in range(1, depth - max(g, 1) + 1)]
        return Holds(depth, wit, f"stage n dies by stage n+{g}", evidence={"gap": g})
    if bad is not None:
        c = S.composite(bad, depth)
        survivors = [i for i, r in enumerate(c.matrix) if not c.target.is_zero_element(r)]
        return FailsUpToDepth(depth, {"stage": bad, "until": depth, "surviving_generators": survivors},
                              f"generators of stage {bad} survive to stage {depth}")
    return Undetermined(depth, "death gap grows beyond the window",
                        evidence={"first_zero": {str(k): v for k, v in first.items()}})


def pro_iso(f: LevelMap, depth: int = DEFAULT_DEPTH, check: bool = True) -> Verdict:
    """Kernel and cokernel towers both pro-zero."""
    if check and not f.check_commutes(depth):
        raise ValueError("levelwise maps do not commute with transitions")
    vk = pro_zero(kernel_tower(f), depth)
    vc = pro_zero(cokernel_tower(f), depth)
    ev = {"kernel": vk.to_dict(), "cokernel": vc.to_dict()}
    if vk.holds and vc.holds:
        shift = max(vk.evidence["gap"], vc.evidence["gap"])
        return Holds(depth, {"kernel": vk.witnesses, "cokernel": vc.witnesses}, f"pro-isomorphism with shift {shift}",
                     evidence={"shift": shift})
    if vk.fails or vc.fails:
        which = [k for k, v in (("kernel", vk), ("cokernel", vc)) if v.fails]
        return FailsUpToDepth(depth, ev, f"{' and '.join(which)} tower not pro-zero")
    return Undetermined(depth, "kernel or cokernel tower undetermined", ev)


def tower_map(source: Tower, target: Tower, comp: Callable[[int], Arrow]) -> LevelMap:
    return LevelMap(source, target, comp)


def _submodule_equal(a: ModuleMap, b: ModuleMap) -> bool:
    """im(a) == im(b) inside their common target, given im(b) ⊆ im(a)."""
    return all(b.in_image(r) for r in a.matrix)


def ml_lim_diagnostics(T: Tower, depth: int = DEFAULT_DEPTH) -> dict:
    gmax = depth // 2
    stable_from: Dict[int, Optional[int]] = {}
    for n in range(1, depth - gmax + 1):
        s = None
        # smallest m with im(T_m -> T_n) == im(T_k -> T_n) for all k in (m, depth]
        imgs = [T.composite(m, n) for m in range(n, depth + 1)]
        for idx in range(len(imgs) - 1):
            if all(_submodule_equal(imgs[idx], imgs[j]) for j in range(idx + 1, len(imgs))):
                s = n + idx
                break
        stable_from[n] = s
    bad = [n for n, s in stable_from.items() if s is None]
    if bad:
        n = bad[0]
        ml = FailsUpToDepth(depth, {"stage": n, "images": "strictly decreasing to depth"},
                            f"images into T_{n} still shrink at depth {depth}")
        lim1 = Undetermined(depth, "Mittag-Leffler fails within the window; for countable towers of finitely "
                                   "generated modules this forces lim^1 != 0, a criterion from outside this toolkit")
    else:
        gap = max(s - n for n, s in stable_from.items())
        ml = Holds(depth, [[n, s] for n, s in stable_from.items()], f"images stabilize after {gap} steps",
                   evidence={"gap": gap})
        lim1 = Holds(depth, None, "Mittag-Leffler implies lim^1 = 0")
    lim = None
    const_from = None
    for N in range(1, depth - 1):
        if all(is_isomorphism(T.transition(n)) for n in range(N, depth)):
            const_from = N
            break
    if const_from is not None:
        lim = T.stage(const_from)
    return {"ml": ml, "lim1_zero": lim1, "lim": lim, "constant_from": const_from,
            "stages": [T.stage(n) for n in range(1, depth + 1)]}


def revalidate(T: Union[Tower, IndSystem], v: Verdict) -> bool:
    """Recompute the zero certificates of a pro_zero/ind_zero Holds verdict."""
    if not v.holds:
        return False
    for n, m in v.witnesses:
        if isinstance(T, Tower):
            arrow = T.composite(m, n)
        else:
            arrow = T.composite(n, m)
        if not arrow.is_zero():
            return False
    return True
