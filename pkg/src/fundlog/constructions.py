"""Coproducts of frames, the product isomorphism, and closure checks for
classes of frames cut out by axioms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .bits import members
from .errors import BudgetExceeded, EmptyFamily
from .frames import RelFrame, canonical_code, frame_from_succ
from .lattice import product
from .logic.semantics import DEFAULT_BUDGET, is_valid
from .logic.syntax import Formula, as_formula
from .morphisms import MAP_SEARCH_CAP, FrameMap, f_morphisms, is_dense, is_embedding

DEFAULT_EXTENSION_BOUND = 64


def coproduct(frames: Sequence[RelFrame]) -> tuple[RelFrame, list[int]]:
    """Disjoint union; returns the frame and the offset of each summand.

    Point ``x`` of summand ``i`` becomes ``offsets[i] + x``, labelled ``"i:x"``.
    """
    if not frames:
        raise EmptyFamily("coproduct of an empty family")
    offsets = list(itertools.accumulate([0] + [f.size for f in frames[:-1]]))
    succ: list[int] = []
    labels: list[str] = []
    for i, (f, off) in enumerate(zip(frames, offsets)):
        succ.extend(s << off for s in f.succ)
        labels.extend(f"{i}:{lab}" for lab in f.labels)
    return frame_from_succ(succ, labels), offsets


def injection(frames: Sequence[RelFrame], i: int, total: RelFrame | None = None) -> FrameMap:
    total_frame, offsets = (total, None) if total is not None else coproduct(frames)
    if offsets is None:
        offsets = list(itertools.accumulate([0] + [f.size for f in frames[:-1]]))
    return FrameMap(frames[i], total_frame, tuple(offsets[i] + x for x in range(frames[i].size)))


def verify_prodlma(frames: Sequence[RelFrame]) -> dict:
    """Check that tuples of positive-algebra members, sent to the tagged union
    of their components, give an isomorphism from the product of the positive
    algebras onto the positive algebra of the coproduct."""
    total, offsets = coproduct(frames)
    algebras = [f.positive for f in frames]
    prod, tuples = product([a.fundamental() for a in algebras])
    target = total.positive

    def glue(t):
        m = 0
        for alg, off, k in zip(algebras, offsets, t):
            m |= alg.members[k] << off
        return m

    image = [glue(t) for t in tuples]
    checks: dict[str, dict] = {}

    def record(name, witness):
        checks[name] = {"ok": witness is None, "witness": witness}

    record("into_algebra", next((t for t, A in zip(tuples, image) if A not in target.index), None))
    record("bijective", None if sorted(set(image)) == list(target.members) and len(set(image)) == len(image)
           else {"image": len(set(image)), "algebra": len(target)})
    record("order_iso", next(
        ((i, j) for i in range(len(tuples)) for j in range(len(tuples))
         if prod.leq(i, j) != (image[i] & ~image[j] == 0)), None))
    record("negation", next(
        (tuples[i] for i in range(len(tuples)) if image[prod.neg[i]] != total.neg_pos(image[i])), None))
    return {"ok": all(c["ok"] for c in checks.values()), "checks": checks,
            "sizes": {"product": prod.size, "algebra": len(target)}}


# -- axiomatic classes -------------------------------------------------------


@dataclass
class FrameClassSpec:
    """A class K inside a finite universe of fundamental frames: either the
    frames validating ``axioms`` or, when ``members`` is given, the frames
    isomorphic to one of them."""

    universe: list[RelFrame]
    axioms: list[Formula] = field(default_factory=list)
    members: list[RelFrame] | None = None

    def __post_init__(self):
        self.axioms = [as_formula(f) for f in self.axioms]


class GTContext:
    """Per-universe caches shared by many closure checks.

    Morphism searches do not depend on the class, so sweeping many axiom sets
    over one universe reuses them.
    """

    def __init__(self, universe: Sequence[RelFrame], budget: int = DEFAULT_BUDGET,
                 map_cap: int = MAP_SEARCH_CAP, extension_bound: int = DEFAULT_EXTENSION_BOUND,
                 max_size: int | None = None):
        self.universe = list(universe)
        self.budget = budget
        self.map_cap = map_cap
        self.extension_bound = extension_bound
        self.max_size = max_size if max_size is not None else max((f.size for f in universe), default=0)
        self._validity: dict[tuple[int, Formula], bool] = {}
        self._extra: dict[tuple, RelFrame] = {}
        self._embeddings: list[tuple[int, int, tuple]] | None = None
        self._dense: list[tuple[int, int, tuple]] | None = None
        self._extensions: list | None = None

    def valid(self, frame: RelFrame, formula: Formula) -> bool:
        key = (id(frame), formula)
        if key not in self._validity:
            self._validity[key] = is_valid(frame, formula, self.budget)
        return self._validity[key]

    def _search(self):
        emb, dense = [], []
        for i, X in enumerate(self.universe):
            for j, Y in enumerate(self.universe):
                found_emb = found_dense = None
                for h in f_morphisms(X, Y, self.map_cap):
                    if found_emb is None and is_embedding(h):
                        found_emb = h.table
                    if found_dense is None and is_dense(h):
                        found_dense = h.table
                    if found_emb is not None and found_dense is not None:
                        break
                if found_emb is not None:
                    emb.append((i, j, found_emb))
                if found_dense is not None:
                    dense.append((i, j, found_dense))
        self._embeddings, self._dense = emb, dense

    @property
    def embeddings(self) -> list[tuple[int, int, tuple]]:
        """(i, j, table): universe[i] embeds into universe[j]."""
        if self._embeddings is None:
            self._search()
        return self._embeddings

    @property
    def dense_maps(self) -> list[tuple[int, int, tuple]]:
        """(i, j, table): a dense f-morphism universe[i] -> universe[j]."""
        if self._dense is None:
            self._search()
        return self._dense

    def coproduct_of(self, i: int, j: int) -> RelFrame:
        key = ("coproduct", i, j)
        if key not in self._extra:
            self._extra[key] = coproduct([self.universe[i], self.universe[j]])[0]
        return self._extra[key]

    @property
    def extensions(self) -> list[RelFrame | None]:
        """Filter extension frame per universe member, None when over bound."""
        if self._extensions is None:
            from .duality import filter_extension

            out = []
            for X in self.universe:
                fe = filter_extension(X).frame
                out.append(fe if fe.size <= self.extension_bound else None)
            self._extensions = out
        return self._extensions


def check_gt_closure(spec: FrameClassSpec, ctx: GTContext | None = None) -> dict:
    """Closure of K under subframes, dense images and coproducts, and reflection
    of filter extensions, all tested inside the universe.

    (a) an embedding X -> Y with Y in K forces X in K;
    (b) a dense f-morphism Y -> X with Y in K forces X in K;
    (c) the coproduct of two K-members (total size within the universe bound)
        is in K;
    (d) X whose filter extension is in K is in K; extensions larger than the
        bound are reported as not checkable.
    """
    ctx = ctx or GTContext(spec.universe)
    U = ctx.universe
    if spec.members is not None:
        codes = {canonical_code(m) for m in spec.members}
        sizes = {m.size for m in spec.members}

        def in_K(frame):
            # size check first: canonical codes are factorial in the size
            return frame.size in sizes and canonical_code(frame) in codes
    else:

        def in_K(frame):
            return all(ctx.valid(frame, f) for f in spec.axioms)

    errors: dict[str, str] = {}
    try:
        K = [i for i, X in enumerate(U) if in_K(X)]
    except BudgetExceeded as exc:
        return {"ok": False, "error": str(exc), "checks": {}}
    Kset = set(K)
    report: dict[str, dict] = {}

    def run(name, body):
        try:
            failures, checked, extra = body()
            report[name] = {"ok": not failures, "checked": checked, "witnesses": failures[:5], **extra}
        except BudgetExceeded as exc:
            errors[name] = str(exc)
            report[name] = {"ok": None, "checked": 0, "witnesses": [], "error": str(exc)}

    def subframes():
        fails = []
        checked = 0
        for i, j, table in ctx.embeddings:
            if j in Kset:
                checked += 1
                if i not in Kset:
                    fails.append({"subframe": i, "of": j, "map": list(table)})
        return fails, checked, {}

    def dense_images():
        fails = []
        checked = 0
        for j, i, table in ctx.dense_maps:
            if j in Kset:
                checked += 1
                if i not in Kset:
                    fails.append({"image": i, "of": j, "map": list(table)})
        return fails, checked, {}

    def coproducts():
        fails = []
        checked = 0
        for i, j in itertools.product(K, repeat=2):
            if U[i].size + U[j].size > ctx.max_size:
                continue
            checked += 1
            if not in_K(ctx.coproduct_of(i, j)):
                fails.append({"summands": [i, j]})
        return fails, checked, {}

    def reflects_extensions():
        fails = []
        checked = skipped = 0
        for i, fe in enumerate(ctx.extensions):
            if fe is None:
                skipped += 1
                continue
            checked += 1
            if in_K(fe) and i not in Kset:
                fails.append({"frame": i, "extension_size": fe.size})
        return fails, checked, {"not_checkable": skipped}

    run("subframes", subframes)
    run("dense_images", dense_images)
    run("coproducts", coproducts)
    run("reflects_filter_extensions", reflects_extensions)
    ok = all(r["ok"] is True for r in report.values())
    return {"ok": ok, "class_size": len(K), "universe_size": len(U), "members": K, "checks": report}
