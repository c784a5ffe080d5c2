"""Filtered shapes, directed posets, filtered colimits, f.p. witnesses.

Finite presentability quantifies over all filtered diagrams, so nothing here
ever claims to decide it: fp_witness aggregates hom-preservation checks over
the diagrams it was handed and says exactly that in its caveat.
"""
from dataclasses import dataclass

from .category import FinCategory
from .errors import NotAPoset, PreconditionFailed
from .functors import SetFunctor, covariant_hom
from .limits import (
    Cocone,
    Diagram,
    _UnionFind,
    _quotient_cocone,
    _stage_nodes,
    cocones_over,
    is_universal_cocone,
    set_colimit,
)
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True)
class FilterednessWitness:
    cocones: dict           # (i, j) object pair -> (k, f_i, f_j)
    coequalizers: dict      # (f, g) parallel pair -> w with w.f == w.g


@dataclass(frozen=True)
class FpVerdict:
    object_id: str
    entries: tuple          # (diagram label, Verdict) pairs
    overall: Verdict


def is_filtered(j: FinCategory) -> Verdict:
    """Nonempty, every object pair has a cocone, every parallel pair is
    coequalized by some later arrow; the passing witness records choices."""
    if not j.objects:
        return Verdict.failing("nonempty", None)
    cocones = {}
    for ia, a in enumerate(j.objects):
        for b in j.objects[ia:]:
            found = None
            for k in j.objects:
                for fa in j.hom(a, k):
                    for fb in j.hom(b, k):
                        METER.charge()
                        found = (k, fa, fb)
                        break
                    if found:
                        break
                if found:
                    break
            if found is None:
                return Verdict.failing("pair-without-cocone", {"pair": (a, b)})
            cocones[(a, b)] = found
    coeqs = {}
    for f in j.morphisms:
        for g in j.morphisms:
            if j.mor_index(f) >= j.mor_index(g):
                continue
            if j.src[f] != j.src[g] or j.tgt[f] != j.tgt[g]:
                continue
            found = None
            for w in j.morphisms:
                METER.charge()
                if j.src[w] == j.tgt[f] and j.comp[(w, f)] == j.comp[(w, g)]:
                    found = w
                    break
            if found is None:
                return Verdict.failing("parallel-pair-not-coequalized",
                                       {"pair": (f, g)})
            coeqs[(f, g)] = found
    return Verdict.passing(FilterednessWitness(cocones, coeqs))


def is_directed_poset(p: FinCategory) -> Verdict:
    """Thin antisymmetric category where every pair has an upper bound."""
    for a in p.objects:
        for b in p.objects:
            n = len(p.hom(a, b))
            if n > 1:
                raise NotAPoset("hom-set has more than one arrow", pair=(a, b))
            if a != b and n and p.hom(b, a):
                raise NotAPoset("antisymmetry fails", pair=(a, b))
    for ia, a in enumerate(p.objects):
        for b in p.objects[ia:]:
            METER.charge()
            if not any(p.hom(a, k) and p.hom(b, k) for k in p.objects):
                return Verdict.failing("pair-without-upper-bound", {"pair": (a, b)})
    return Verdict.passing()


def filtered_colimit(d: Diagram) -> Cocone:
    """Same answer as set_colimit, computed stage-pairwise: two stage elements
    are glued iff some later stage equalizes them. Legs are the injections."""
    filt = is_filtered(d.shape)
    if not filt.ok:
        raise PreconditionFailed("diagram shape is not filtered",
                                 law=filt.law, witness=filt.witness)
    shape, body = d.shape, d.body
    nodes = _stage_nodes(d)
    uf = _UnionFind(nodes)
    for ix, (i, x) in enumerate(nodes):
        for (j, y) in nodes[ix + 1:]:
            merged = False
            for k in shape.objects:
                for u in shape.hom(i, k):
                    for v in shape.hom(j, k):
                        METER.charge()
                        if body.action[u][x] == body.action[v][y]:
                            uf.union((i, x), (j, y))
                            merged = True
                            break
                    if merged:
                        break
                if merged:
                    break
    return _quotient_cocone(d, uf)


def verify_colimit_cocone(c: FinCategory, d: Diagram, cocone: Cocone) -> bool:
    """Re-establish universality by exhaustive search; used as a gate."""
    cocones = list(cocones_over(c, d))
    if not any(
        cand.apex == cocone.apex and cand.legs == cocone.legs for cand in cocones
    ):
        return False
    return is_universal_cocone(c, d, cocone, cocones)


def check_hom_preserves_filtered_colimit(c: FinCategory, a, d: Diagram,
                                         colim: Cocone) -> Verdict:
    """Pass iff hom(a, -) maps the verified colimit cocone of d to a colimit
    in Set (comparison bijection against the filtered colimit of the
    hom-diagram)."""
    filt = is_filtered(d.shape)
    if not filt.ok:
        raise PreconditionFailed("diagram shape is not filtered", law=filt.law)
    if not verify_colimit_cocone(c, d, colim):
        raise PreconditionFailed("supplied cocone is not a verified colimit",
                                 apex=colim.apex)
    h = covariant_hom(c, a)
    hom_body = SetFunctor(
        d.shape,
        {j: h.carrier[d.body.omap[j]] for j in d.shape.objects},
        {m: {g: c.comp[(d.body.mmap[m], g)]
             for g in h.carrier[d.body.omap[d.shape.src[m]]]}
         for m in d.shape.morphisms},
    )
    hom_diag = Diagram(d.shape, hom_body)
    classes = filtered_colimit(hom_diag)
    target = c.hom(a, colim.apex)

    comparison = {}
    for cls in classes.apex:
        values = set()
        for j in d.shape.objects:
            for g, rep in classes.legs[j].items():
                if rep == cls:
                    values.add(c.comp[(colim.legs[j], g)])
        METER.charge(len(values) + 1)
        if len(values) != 1:
            return Verdict.failing("comparison-ill-defined", {"class": cls})
        comparison[cls] = values.pop()
    vals = list(comparison.values())
    if len(set(vals)) != len(vals):
        return Verdict.failing("comparison-not-injective", {"object": a})
    if set(vals) != set(target):
        return Verdict.failing("comparison-not-surjective", {"object": a})
    return Verdict.passing()


_FP_CAVEAT = "witness over supplied diagrams only; finite presentability is not decided"


def fp_witness(c: FinCategory, a, diagrams) -> FpVerdict:
    """Aggregate hom-preservation over (diagram, cocone) pairs."""
    entries = []
    ok = True
    for ix, (d, colim) in enumerate(diagrams):
        verdict = check_hom_preserves_filtered_colimit(c, a, d, colim)
        entries.append((f"diagram{ix}", verdict))
        ok = ok and verdict.ok
    caveats = [_FP_CAVEAT]
    if not entries:
        caveats.append("no diagrams supplied; vacuous pass")
    if ok:
        overall = Verdict(True, "", None, tuple(caveats))
    else:
        first_bad = next(lbl for lbl, v in entries if not v.ok)
        overall = Verdict(False, "hom-preservation", {"diagram": first_bad},
                          tuple(caveats))
    return FpVerdict(a, tuple(entries), overall)


def shape_corpus(max_objects: int = 4, max_morphisms: int = 12) -> dict:
    """Deterministic family of small filtered shapes for f.p. sweeps."""
    from .corpus import chain, coequalizer_shape, cospan, diamond_lattice

    shapes = {
        "single": chain(1),
        "chain2": chain(2),
        "chain3": chain(3),
        "chain4": chain(4),
        "cospan": cospan(),
        "diamond": diamond_lattice(),
        "coequalizer": coequalizer_shape(),
    }
    return {
        name: s for name, s in shapes.items()
        if len(s.objects) <= max_objects and len(s.morphisms) <= max_morphisms
    }
