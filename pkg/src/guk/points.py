"""Points, stalks and global sections for presheaf topoi over finite sites.

Points are restricted to the canonical site-object points, whose inverse
image is evaluation at the object; global sections are computed two
independent ways (objectwise limit, and hom from the terminal presheaf) and
compared element for element.
"""
from dataclasses import dataclass

from .canon import canon_sorted
from .category import FinCategory, opposite
from .errors import NotLex, PreconditionFailed, UnknownId
from .functors import (
    NatTransform,
    SetFunctor,
    nat_transforms_between,
    terminal_presheaf,
    validate_nat,
    validate_set_functor,
)
from .limits import Diagram, check_lex_functor, lex_structure, set_limit
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True)
class SheafOfModels:
    index: FinCategory          # the lex index category
    site_base: FinCategory      # base of the finite site
    presheaves: dict            # index object -> presheaf on opposite(site_base)
    transitions: dict           # index morphism -> NatTransform between presheaves


def validate_sheaf_of_models(f: SheafOfModels) -> Verdict:
    op = opposite(f.site_base)
    for c in f.index.objects:
        p = f.presheaves.get(c)
        if p is None or p.dom != op:
            return Verdict.failing("presheaf-assignment", {"object": c})
        inner = validate_set_functor(p)
        if not inner.ok:
            return Verdict.failing("invalid-presheaf", {"object": c, "law": inner.law})
    for m in f.index.morphisms:
        nt = f.transitions.get(m)
        if nt is None:
            return Verdict.failing("transition-assignment", {"morphism": m})
        if nt.source != f.presheaves[f.index.src[m]] or \
                nt.target != f.presheaves[f.index.tgt[m]]:
            return Verdict.failing("transition-endpoints", {"morphism": m})
        inner = validate_nat(nt)
        if not inner.ok:
            return Verdict.failing("invalid-transition", {"morphism": m, "law": inner.law})
    for c in f.index.objects:
        i = f.index.identity[c]
        if any(f.transitions[i].components[d][x] != x
               for d in f.site_base.objects
               for x in f.presheaves[c].carrier[d]):
            return Verdict.failing("identity-transition", {"object": c})
    for (g, h), k in f.index.comp.items():
        METER.charge()
        for d in f.site_base.objects:
            left = f.transitions[k].components[d]
            for x in f.presheaves[f.index.src[h]].carrier[d]:
                if f.transitions[g].components[d][f.transitions[h].components[d][x]] \
                        != left[x]:
                    return Verdict.failing("transition-functoriality",
                                           {"pair": (g, h), "site_object": d})
    return Verdict.passing()


def _gamma_elements(f: SheafOfModels, c) -> tuple:
    """Matching tuples of the presheaf at c, computed by set_limit over the
    opposite of the site base and cross-checked against hom from the
    terminal presheaf."""
    p = f.presheaves[c]
    shape = p.dom                       # opposite(site_base)
    cone = set_limit(Diagram(shape, p))
    via_limit = cone.apex

    terminal = terminal_presheaf(f.site_base)
    via_hom = tuple(
        tuple(nt.components[d]["*"] for d in shape.objects)
        for nt in nat_transforms_between(terminal, p)
    )
    if canon_sorted(via_limit) != canon_sorted(via_hom):
        raise PreconditionFailed(
            "two global-section computations disagree", index_object=c
        )
    return canon_sorted(via_limit)


def global_sections(f: SheafOfModels) -> SetFunctor:
    """Postcomposition with hom(terminal, -): elements are matching tuples
    indexed by the site objects in canonical order."""
    site_objs = f.site_base.objects
    carrier = {c: _gamma_elements(f, c) for c in f.index.objects}
    action = {}
    for m in f.index.morphisms:
        a = f.index.src[m]
        nt = f.transitions[m]
        action[m] = {
            tup: tuple(nt.components[d][x] for d, x in zip(site_objs, tup))
            for tup in carrier[a]
        }
    return SetFunctor(f.index, carrier, action)


def stalk(f: SheafOfModels, d) -> SetFunctor:
    """Postcomposition with evaluation at the site object d (the inverse
    image of the canonical point at d)."""
    if d not in f.site_base._obj_ix:
        raise UnknownId(f"unknown site object {d!r}", object=d)
    carrier = {c: f.presheaves[c].carrier[d] for c in f.index.objects}
    action = {m: dict(f.transitions[m].components[d]) for m in f.index.morphisms}
    return SetFunctor(f.index, carrier, action)


def gamma_is_limit_of_stalks(f: SheafOfModels) -> Verdict:
    """Build the diagram of stalks indexed by the opposite of the site (a
    site morphism gamma: d -> d' moves the stalk at d' to the stalk at d),
    take its limit objectwise in Set, and compare with global sections."""
    gamma = global_sections(f)
    op = opposite(f.site_base)
    site_objs = f.site_base.objects
    stalks = {d: stalk(f, d) for d in site_objs}

    for c in f.index.objects:
        body = SetFunctor(
            op,
            {d: stalks[d].carrier[c] for d in site_objs},
            {g: {x: f.presheaves[c].action[g][x]
                 for x in stalks[op.src[g]].carrier[c]}
             for g in op.morphisms},
        )
        cone = set_limit(Diagram(op, body))
        METER.charge(len(cone.apex) + 1)
        if canon_sorted(cone.apex) != canon_sorted(gamma.carrier[c]):
            return Verdict.failing(
                "stalk-limit-mismatch",
                {"index_object": c,
                 "limit_size": len(cone.apex),
                 "gamma_size": len(gamma.carrier[c])},
            )
    for m in f.index.morphisms:
        a = f.index.src[m]
        nt = f.transitions[m]
        for tup in gamma.carrier[a]:
            expected = tuple(nt.components[d][x] for d, x in zip(site_objs, tup))
            if gamma.action[m][tup] != expected:
                return Verdict.failing("stalk-limit-naturality", {"morphism": m})
    return Verdict.passing()


def check_lex_composite(f: SheafOfModels) -> Verdict:
    """Global sections and every stalk must be lex when the index is lex."""
    structure, missing = lex_structure(f.index)
    if structure is None:
        raise NotLex("index category is not lex", instance=missing)
    gamma = global_sections(f)
    verdict = check_lex_functor(gamma)
    if not verdict.ok:
        return Verdict.failing("global-sections-not-lex", verdict.witness)
    for d in f.site_base.objects:
        verdict = check_lex_functor(stalk(f, d))
        if not verdict.ok:
            return Verdict.failing("stalk-not-lex",
                                   {"site_object": d, "inner": verdict.witness})
    return Verdict.passing()
