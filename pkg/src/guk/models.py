"""Lex set-models of a finite lex category and desk-scale duality checks.

A ModelFragment is the finite shadow of the category of lex models: every lex
SetFunctor with carriers up to max_size, deduplicated up to natural
isomorphism, with all natural transformations tabulated. Every verdict issued
from a fragment carries a fragment-restricted caveat; nothing here claims the
duality theorem itself.
"""
import itertools
from dataclasses import dataclass

from .category import FinCategory, hom_set, opposite
from .errors import NotLex, UnknownId
from .functors import (
    Functor,
    NatTransform,
    SetFunctor,
    check_fully_faithful,
    functor_fragment,
    hom_embedding,
    nat_transforms_between,
    naturally_isomorphic,
)
from .limits import (
    Cone,
    Diagram,
    check_lex_functor,
    discrete_shape,
    empty_shape,
    find_colimit,
    find_limit,
    lex_structure,
    parallel_pair_shape,
    set_colimit,
    set_limit,
)
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True)
class ModelFragment:
    base: FinCategory
    max_size: int
    models: tuple           # SetFunctors, canonical order, no two naturally iso
    model_names: tuple      # "M0", "M1", ...
    category: FinCategory   # the fragment tabulated as a category
    nat_of: dict            # fragment morphism id -> NatTransform

    def caveat(self) -> str:
        return f"fragment-restricted, maxSize = {self.max_size}"


@dataclass(frozen=True)
class DualityReport:
    conservativity: Verdict
    density: Verdict
    h_fully_faithful: Verdict
    epsilon_fully_faithful: Verdict
    epsilon_hom_counts: tuple   # rows (A, B, nat_count, hom_count)
    caveats: tuple


def _model_sort_key(c: FinCategory, sf: SetFunctor):
    sizes = tuple(len(sf.carrier[o]) for o in c.objects)
    tables = tuple(
        tuple(sf.action[m][x] for x in sf.carrier[c.src[m]])
        for m in c.morphisms
    )
    return (sizes, tables)


def enumerate_lex_models(c: FinCategory, max_size: int) -> ModelFragment:
    """Complete enumeration of lex SetFunctors with carriers <= max_size, up
    to natural isomorphism. The size search prunes assignments that already
    violate terminal or product cardinalities."""
    if max_size < 1:
        raise NotLex("max_size must be at least 1", max_size=max_size)
    structure, missing = lex_structure(c)
    if structure is None:
        raise NotLex("category does not have all finite limits", instance=missing)

    objs = c.objects
    prod_constraints = [
        (cone.apex, a, b) for (a, b), cone in structure.products.items()
    ]

    def sizes_admissible(size_of):
        if size_of[structure.terminal] != 1:
            return False
        for apex, a, b in prod_constraints:
            if size_of[apex] != size_of[a] * size_of[b]:
                return False
        for (f, g), cone in structure.equalizers.items():
            if size_of[cone.apex] > size_of[c.src[f]]:
                return False
        return True

    from .functors import enumerate_set_functors

    candidates = []
    for vec in itertools.product(range(max_size + 1), repeat=len(objs)):
        METER.charge()
        size_of = dict(zip(objs, vec))
        if not sizes_admissible(size_of):
            continue
        for sf in enumerate_set_functors(c, max_size, sizes=size_of):
            if check_lex_functor(sf).ok:
                candidates.append(sf)

    candidates.sort(key=lambda sf: _model_sort_key(c, sf))
    models = []
    for sf in candidates:
        if not any(naturally_isomorphic(sf, kept) for kept in models):
            models.append(sf)

    names = tuple(f"M{i}" for i in range(len(models)))
    frag_cat, nat_of, _locate = functor_fragment(models, list(names))
    return ModelFragment(c, max_size, tuple(models), names, frag_cat, nat_of)


def evaluation_functor(fragment: ModelFragment, a) -> SetFunctor:
    """Evaluation at a as a SetFunctor on the fragment category."""
    if a not in fragment.base._obj_ix:
        raise UnknownId(f"unknown object {a!r}", object=a)
    by_name = dict(zip(fragment.model_names, fragment.models))
    carrier = {name: by_name[name].carrier[a] for name in fragment.model_names}
    action = {
        m: dict(fragment.nat_of[m].components[a])
        for m in fragment.category.morphisms
    }
    return SetFunctor(fragment.category, carrier, action)


def _limit_shapes():
    return {"empty": empty_shape(), "discrete2": discrete_shape(2),
            "parallel": parallel_pair_shape()}


def _all_functors_into(shape: FinCategory, c: FinCategory):
    """Every functor shape -> c, canonically ordered."""
    objs = shape.objects
    non_id = [m for m in shape.morphisms if not shape.is_identity(m)]
    out = []
    for image in itertools.product(c.objects, repeat=len(objs)):
        omap = dict(zip(objs, image))
        mmaps = []
        for m in non_id:
            opts = c.hom(omap[shape.src[m]], omap[shape.tgt[m]])
            mmaps.append(opts)
        for picks in itertools.product(*mmaps):
            METER.charge()
            mmap = dict(zip(non_id, picks))
            for o in objs:
                mmap[shape.identity[o]] = c.identity[omap[o]]
            ok = all(
                c.comp[(mmap[g], mmap[f])] == mmap[h]
                for (g, f), h in shape.comp.items()
            )
            if ok:
                out.append(Functor(shape, c, omap, mmap))
    return out


def evaluation_preservation_check(fragment: ModelFragment, a) -> Verdict:
    """Evaluation at a must send every limit and every filtered colimit that
    exists inside the tabulated fragment to the corresponding one in Set."""
    from .filtered import shape_corpus

    ev = evaluation_functor(fragment, a)
    frag = fragment.category
    caveats = (fragment.caveat(),)

    for shape_name, shape in _limit_shapes().items():
        for fn in _all_functors_into(shape, frag):
            diag = Diagram(shape, fn)
            cone = find_limit(frag, diag)
            if cone is None:
                continue
            image = SetFunctor(
                shape,
                {j: ev.carrier[fn.omap[j]] for j in shape.objects},
                {m: dict(ev.action[fn.mmap[m]]) for m in shape.morphisms},
            )
            expected = set_limit(Diagram(shape, image))
            table = {}
            for x in ev.carrier[cone.apex]:
                table[x] = tuple(ev.action[cone.legs[j]][x] for j in shape.objects)
            vals = list(table.values())
            METER.charge(len(vals) + 1)
            if len(set(vals)) != len(vals) or set(vals) != set(expected.apex):
                return Verdict.failing(
                    "limit-preservation",
                    {"shape": shape_name, "apex": cone.apex}, caveats)

    for shape_name, shape in shape_corpus(max_objects=3).items():
        for fn in _all_functors_into(shape, frag):
            diag = Diagram(shape, fn)
            cocone = find_colimit(frag, diag)
            if cocone is None:
                continue
            image = SetFunctor(
                shape,
                {j: ev.carrier[fn.omap[j]] for j in shape.objects},
                {m: dict(ev.action[fn.mmap[m]]) for m in shape.morphisms},
            )
            expected = set_colimit(Diagram(shape, image))
            comparison = {}
            ill = False
            for cls in expected.apex:
                values = set()
                for j in shape.objects:
                    for x, rep in expected.legs[j].items():
                        if rep == cls:
                            values.add(ev.action[cocone.legs[j]][x])
                if len(values) != 1:
                    ill = True
                    break
                comparison[cls] = values.pop()
            vals = list(comparison.values())
            METER.charge(len(vals) + 1)
            if ill or len(set(vals)) != len(vals) or set(vals) != set(ev.carrier[cocone.apex]):
                return Verdict.failing(
                    "filtered-colimit-preservation",
                    {"shape": shape_name, "apex": cocone.apex}, caveats)
    return Verdict.passing(caveats=caveats)


def check_conservative(c: FinCategory, collection) -> Verdict:
    """Pass iff every morphism whose postcomposition maps hom(K, -) are all
    bijections, K in the collection, is an isomorphism."""
    collection = tuple(collection)
    for k in collection:
        if k not in c._obj_ix:
            raise UnknownId(f"unknown object {k!r}", object=k)
    for f in c.morphisms:
        a, b = c.src[f], c.tgt[f]
        premise = True
        for k in collection:
            table = {g: c.comp[(f, g)] for g in c.hom(k, a)}
            vals = list(table.values())
            METER.charge(len(vals) + 1)
            if len(set(vals)) != len(vals) or set(vals) != set(c.hom(k, b)):
                premise = False
                break
        if premise and not c.is_iso(f):
            return Verdict.failing("non-iso-with-bijective-homs", {"morphism": f})
    return Verdict.passing()


def comma_category(c: FinCategory, sub, a):
    """The comma category (S over a): objects are pairs (s, h: s -> a) with s
    in the full subcategory on sub; also returns the projection data."""
    pairs = [(s, h) for s in sub for h in c.hom(s, a)]
    names = {p: f"{p[0]}~{p[1]}" for p in pairs}
    objs = tuple(names[p] for p in pairs)
    arrows = []
    comp = {}
    mor_data = {}
    for (s1, h1) in pairs:
        for (s2, h2) in pairs:
            for m in c.hom(s1, s2):
                METER.charge()
                if c.comp[(h2, m)] != h1:
                    continue
                if (s1, h1) == (s2, h2) and c.is_identity(m):
                    continue
                nm = f"{m}:{names[(s1, h1)]}>{names[(s2, h2)]}"
                arrows.append((nm, names[(s1, h1)], names[(s2, h2)]))
                mor_data[nm] = (m, (s1, h1), (s2, h2))
    for n1, (m1, p1, q1) in mor_data.items():
        for n2, (m2, p2, q2) in mor_data.items():
            if q1 != p2:
                continue
            m = c.comp[(m2, m1)]
            if p1 == q2 and c.is_identity(m):
                continue
            comp[(n2, n1)] = f"{m}:{names[p1]}>{names[q2]}"
    from .category import table_category
    shape = table_category(objs, arrows, comp)
    omap = {names[p]: p[0] for p in pairs}
    mmap = {f"id_{names[p]}": c.identity[p[0]] for p in pairs}
    for nm, (m, _p, _q) in mor_data.items():
        mmap[nm] = m
    legs = {names[p]: p[1] for p in pairs}
    return shape, Functor(shape, c, omap, mmap), legs


def check_dense(c: FinCategory, sub) -> Verdict:
    """Pass iff for every object the canonical cocone from its comma diagram
    of sub-objects is a verified colimit cocone."""
    from .filtered import verify_colimit_cocone
    from .limits import Cocone

    sub = tuple(sub)
    for s in sub:
        if s not in c._obj_ix:
            raise UnknownId(f"unknown object {s!r}", object=s)
    for a in c.objects:
        shape, body, legs = comma_category(c, sub, a)
        cocone = Cocone(a, legs)
        if not verify_colimit_cocone(c, Diagram(shape, body), cocone):
            return Verdict.failing("comma-cocone-not-colimit", {"object": a})
    return Verdict.passing()


def duality_report(c: FinCategory, max_size: int) -> DualityReport:
    """Bundle the four desk-scale duality component checks."""
    fragment = enumerate_lex_models(c, max_size)
    caveat = fragment.caveat()

    evs = {a: evaluation_functor(fragment, a) for a in c.objects}

    eps_ok = True
    eps_witness = None
    counts = []
    for x in c.objects:
        for y in c.objects:
            nats = nat_transforms_between(evs[x], evs[y])
            homs = hom_set(c, x, y)
            induced = []
            for f in homs:
                induced.append({
                    name: {e: model.action[f][e] for e in model.carrier[x]}
                    for name, model in zip(fragment.model_names, fragment.models)
                })
            injective = all(induced[i] != induced[j]
                            for i in range(len(induced))
                            for j in range(i + 1, len(induced)))
            all_present = all(any(nt.components == comp for nt in nats)
                              for comp in induced)
            METER.charge(len(nats) + len(homs) + 1)
            if not (injective and all_present and len(nats) == len(homs)):
                eps_ok = False
                if eps_witness is None:
                    eps_witness = {"pair": (x, y), "nat_count": len(nats),
                                   "hom_count": len(homs)}
    # report rows in the (A, B) |-> |hom(B, A)| labeling
    for a in c.objects:
        for b in c.objects:
            counts.append((a, b, len(nat_transforms_between(evs[b], evs[a])),
                           len(hom_set(c, b, a))))
    epsilon = (Verdict.passing(caveats=(caveat,)) if eps_ok
               else Verdict.failing("evaluation-not-fully-faithful",
                                    eps_witness, (caveat,)))

    h_functor, _frag, _nats = hom_embedding(c)
    h_base = check_fully_faithful(h_functor)
    h_ff = Verdict(h_base.ok, h_base.law, h_base.witness, (caveat,))

    cons_base = check_conservative(fragment.category,
                                   fragment.category.objects)
    conservativity = Verdict(cons_base.ok, cons_base.law, cons_base.witness,
                             (caveat,))

    dense_base = check_dense(c, c.objects)
    density = Verdict(dense_base.ok, dense_base.law, dense_base.witness,
                      (caveat,))

    return DualityReport(conservativity, density, h_ff, epsilon,
                         tuple(counts), (caveat,))
