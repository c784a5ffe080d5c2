"""Finite limits and colimits, in finite categories and in finite sets.

Universality is verified, never assumed: a returned (co)cone has been checked
against every rival cone by exhaustive mediating-morphism search. In the
engine's vocabulary "left limits", "projective limits" and "limits" are
synonyms.
"""
import itertools
from dataclasses import dataclass

from .canon import canon_key, canon_sorted
from .category import FinCategory, opposite, validate_category
from .errors import PreconditionFailed
from .functors import Functor, SetFunctor, validate_functor, validate_set_functor
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True)
class Diagram:
    shape: FinCategory
    body: object            # Functor (into a FinCategory) or SetFunctor

    def is_set_valued(self) -> bool:
        return isinstance(self.body, SetFunctor)


@dataclass(frozen=True)
class Cone:
    apex: object            # object id, or carrier tuple for Set-valued cones
    legs: dict              # shape object -> morphism id / function table


@dataclass(frozen=True)
class Cocone:
    apex: object
    legs: dict


def validate_diagram(d: Diagram) -> Verdict:
    if d.body.dom != d.shape:
        return Verdict.failing("body-domain", None)
    if d.is_set_valued():
        return validate_set_functor(d.body)
    return validate_functor(d.body)


# ---------------------------------------------------------------- shapes

def empty_shape() -> FinCategory:
    return FinCategory((), (), {}, {}, {}, {})


def discrete_shape(n: int) -> FinCategory:
    objs = tuple(str(i) for i in range(n))
    return FinCategory(
        objs, tuple(f"id_{o}" for o in objs),
        {f"id_{o}": o for o in objs}, {f"id_{o}": o for o in objs},
        {o: f"id_{o}" for o in objs},
        {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in objs},
    )


def parallel_pair_shape() -> FinCategory:
    objs = ("0", "1")
    mors = ("id_0", "id_1", "a", "b")
    src = {"id_0": "0", "id_1": "1", "a": "0", "b": "0"}
    tgt = {"id_0": "0", "id_1": "1", "a": "1", "b": "1"}
    comp = {
        ("id_0", "id_0"): "id_0", ("id_1", "id_1"): "id_1",
        ("a", "id_0"): "a", ("id_1", "a"): "a",
        ("b", "id_0"): "b", ("id_1", "b"): "b",
    }
    return FinCategory(objs, mors, src, tgt, {"0": "id_0", "1": "id_1"}, comp)


def cospan_shape() -> FinCategory:
    objs = ("l", "r", "m")
    mors = ("id_l", "id_r", "id_m", "u", "v")
    src = {"id_l": "l", "id_r": "r", "id_m": "m", "u": "l", "v": "r"}
    tgt = {"id_l": "l", "id_r": "r", "id_m": "m", "u": "m", "v": "m"}
    comp = {
        ("id_l", "id_l"): "id_l", ("id_r", "id_r"): "id_r", ("id_m", "id_m"): "id_m",
        ("u", "id_l"): "u", ("id_m", "u"): "u",
        ("v", "id_r"): "v", ("id_m", "v"): "v",
    }
    return FinCategory(objs, mors, src, tgt,
                       {"l": "id_l", "r": "id_r", "m": "id_m"}, comp)


# ------------------------------------------------- (co)limits in a category

def cones_over(c: FinCategory, d: Diagram):
    """All cones over d in c, in canonical (apex, legs) order."""
    shape, body = d.shape, d.body
    objs = shape.objects
    non_id = [m for m in shape.morphisms if not shape.is_identity(m)]
    for apex in c.objects:
        legs = {}

        def go(i):
            if i == len(objs):
                yield Cone(apex, dict(legs))
                return
            j = objs[i]
            for leg in c.hom(apex, body.omap[j]):
                METER.charge()
                legs[j] = leg
                if all(
                    c.comp[(body.mmap[m], legs[shape.src[m]])] == legs[shape.tgt[m]]
                    for m in non_id
                    if shape.src[m] in legs and shape.tgt[m] in legs
                ):
                    yield from go(i + 1)
                del legs[j]

        yield from go(0)


def mediating_morphisms(c: FinCategory, universal: Cone, other: Cone):
    out = []
    for m in c.hom(other.apex, universal.apex):
        METER.charge()
        if all(c.comp[(universal.legs[j], m)] == other.legs[j] for j in universal.legs):
            out.append(m)
    return out


def is_universal_cone(c: FinCategory, d: Diagram, cone: Cone, cones=None) -> bool:
    if cones is None:
        cones = list(cones_over(c, d))
    return all(len(mediating_morphisms(c, cone, other)) == 1 for other in cones)


def find_limit(c: FinCategory, d: Diagram):
    """First universal cone in canonical order, or None."""
    cones = list(cones_over(c, d))
    for cone in cones:
        if is_universal_cone(c, d, cone, cones):
            return cone
    return None


def _co_diagram(d: Diagram) -> Diagram:
    op_shape = opposite(d.shape)
    return Diagram(op_shape, Functor(op_shape, opposite(d.body.cod),
                                     dict(d.body.omap), dict(d.body.mmap)))


def cocones_over(c: FinCategory, d: Diagram):
    for cone in cones_over(opposite(c), _co_diagram(d)):
        yield Cocone(cone.apex, cone.legs)


def mediating_from_cocone(c: FinCategory, universal: Cocone, other: Cocone):
    out = []
    for m in c.hom(universal.apex, other.apex):
        METER.charge()
        if all(c.comp[(m, universal.legs[j])] == other.legs[j] for j in universal.legs):
            out.append(m)
    return out


def is_universal_cocone(c: FinCategory, d: Diagram, cocone: Cocone, cocones=None) -> bool:
    if cocones is None:
        cocones = list(cocones_over(c, d))
    return all(len(mediating_from_cocone(c, cocone, other)) == 1 for other in cocones)


def find_colimit(c: FinCategory, d: Diagram):
    cocones = list(cocones_over(c, d))
    for cocone in cocones:
        if is_universal_cocone(c, d, cocone, cocones):
            return cocone
    return None


# ------------------------------------------------------- (co)limits in Set

def set_limit(d: Diagram) -> Cone:
    """Limit of a Set-valued diagram: all shape-indexed compatible tuples."""
    body = d.body
    shape = d.shape
    objs = shape.objects
    non_id = [m for m in shape.morphisms if not shape.is_identity(m)]
    tuples = []
    partial = {}

    def go(i):
        if i == len(objs):
            tuples.append(tuple(partial[o] for o in objs))
            return
        j = objs[i]
        for x in body.carrier[j]:
            METER.charge()
            partial[j] = x
            if all(
                body.action[m][partial[shape.src[m]]] == partial[shape.tgt[m]]
                for m in non_id
                if shape.src[m] in partial and shape.tgt[m] in partial
            ):
                go(i + 1)
            del partial[j]

    go(0)
    apex = tuple(tuples)
    legs = {
        j: {t: t[i] for t in apex}
        for i, j in enumerate(objs)
    }
    return Cone(apex, legs)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if canon_key(rb) < canon_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _stage_nodes(d: Diagram):
    return [(j, x) for j in d.shape.objects for x in d.body.carrier[j]]


def _quotient_cocone(d: Diagram, uf: _UnionFind) -> Cocone:
    nodes = _stage_nodes(d)

    def node_key(node):
        j, x = node
        return (d.shape.obj_index(j), canon_key(x))

    reps = {}
    for node in nodes:
        root = uf.find(node)
        if root not in reps or node_key(node) < node_key(reps[root]):
            reps[root] = node
    classes = tuple(sorted(reps.values(), key=node_key))
    rep_of = {node: reps[uf.find(node)] for node in nodes}
    legs = {
        j: {x: rep_of[(j, x)] for x in d.body.carrier[j]}
        for j in d.shape.objects
    }
    return Cocone(classes, legs)


def set_colimit(d: Diagram) -> Cocone:
    """Colimit of a Set-valued diagram: disjoint union mod the congruence
    generated by (i, x) ~ (j, action(f)(x)), computed by union-find."""
    uf = _UnionFind(_stage_nodes(d))
    for m in d.shape.morphisms:
        i, j = d.shape.src[m], d.shape.tgt[m]
        for x in d.body.carrier[i]:
            METER.charge()
            uf.union((i, x), (j, d.body.action[m][x]))
    return _quotient_cocone(d, uf)


# --------------------------------------------------------- lex structure

def pullback(c: FinCategory, f, g):
    """Chosen pullback of the cospan (f: A -> X, g: B -> X); returns the
    Cone with legs {"l": A-projection, "r": B-projection} or None."""
    if c.tgt[f] != c.tgt[g]:
        raise PreconditionFailed("pullback needs a cospan", f=f, g=g)
    shape = cospan_shape()
    body = Functor(shape, c,
                   {"l": c.src[f], "r": c.src[g], "m": c.tgt[f]},
                   {"id_l": c.identity[c.src[f]], "id_r": c.identity[c.src[g]],
                    "id_m": c.identity[c.tgt[f]], "u": f, "v": g})
    return find_limit(c, Diagram(shape, body))


@dataclass(frozen=True)
class LexStructure:
    terminal: str
    terminal_cone: Cone
    products: dict          # (a, b) unordered-normalized -> Cone with legs l, r
    equalizers: dict        # (f, g) -> Cone with legs {"0": e, ...}


def _product_diagram(c: FinCategory, a, b) -> Diagram:
    shape = discrete_shape(2)
    body = Functor(shape, c, {"0": a, "1": b},
                   {"id_0": c.identity[a], "id_1": c.identity[b]})
    return Diagram(shape, body)


def _equalizer_diagram(c: FinCategory, f, g) -> Diagram:
    shape = parallel_pair_shape()
    a, b = c.src[f], c.tgt[f]
    body = Functor(shape, c, {"0": a, "1": b},
                   {"id_0": c.identity[a], "id_1": c.identity[b], "a": f, "b": g})
    return Diagram(shape, body)


def lex_structure(c: FinCategory):
    """Chosen terminal, binary products and equalizers, or None with the
    first missing instance; the terminal+products+equalizers reduction is
    sufficient for all finite limits."""
    term = find_limit(c, Diagram(empty_shape(),
                                 Functor(empty_shape(), c, {}, {})))
    if term is None:
        return None, ("terminal",)
    products = {}
    for i, a in enumerate(c.objects):
        for b in c.objects[i:]:
            cone = find_limit(c, _product_diagram(c, a, b))
            if cone is None:
                return None, ("product", a, b)
            products[(a, b)] = cone
    equalizers = {}
    for f in c.morphisms:
        for g in c.morphisms:
            if f == g or c.src[f] != c.src[g] or c.tgt[f] != c.tgt[g]:
                continue
            cone = find_limit(c, _equalizer_diagram(c, f, g))
            if cone is None:
                return None, ("equalizer", f, g)
            equalizers[(f, g)] = cone
    return LexStructure(term.apex, term, products, equalizers), None


_REDUCTION_NOTE = ("finite-limit completeness checked via terminal object, "
                   "binary products and equalizers (sufficient for all finite limits)")


def has_all_finite_limits(c: FinCategory) -> Verdict:
    structure, missing = lex_structure(c)
    if structure is None:
        return Verdict.failing("missing-limit", {"instance": missing},
                               caveats=(_REDUCTION_NOTE,))
    return Verdict.passing(caveats=(_REDUCTION_NOTE,))


def _set_bijection(table: dict, target) -> bool:
    vals = list(table.values())
    return len(set(vals)) == len(vals) and set(vals) == set(target)


def check_lex_functor(fn) -> Verdict:
    """Pass iff fn sends the chosen terminal/product/equalizer cones of its
    domain to universal cones (for Set: the comparison map is a bijection)."""
    c = fn.dom
    structure, missing = lex_structure(c)
    if structure is None:
        raise PreconditionFailed("domain has no finite limits",
                                 instance=missing)
    set_valued = isinstance(fn, SetFunctor)

    if set_valued:
        if len(fn.carrier[structure.terminal]) != 1:
            return Verdict.failing("terminal-preservation",
                                   {"terminal": structure.terminal})
        for (a, b), cone in structure.products.items():
            table = {
                x: (fn.action[cone.legs["0"]][x], fn.action[cone.legs["1"]][x])
                for x in fn.carrier[cone.apex]
            }
            target = list(itertools.product(fn.carrier[a], fn.carrier[b]))
            METER.charge(len(target) + 1)
            if not _set_bijection(table, target):
                return Verdict.failing("product-preservation", {"pair": (a, b)})
        for (f, g), cone in structure.equalizers.items():
            e = cone.legs["0"]
            table = {x: fn.action[e][x] for x in fn.carrier[cone.apex]}
            target = [x for x in fn.carrier[c.src[f]]
                      if fn.action[f][x] == fn.action[g][x]]
            METER.charge(len(target) + 1)
            if not _set_bijection(table, target):
                return Verdict.failing("equalizer-preservation", {"pair": (f, g)})
        return Verdict.passing()

    cod = fn.cod
    instances = [("terminal", structure.terminal_cone,
                  Diagram(empty_shape(), Functor(empty_shape(), c, {}, {})))]
    for (a, b), cone in structure.products.items():
        instances.append((("product", a, b), cone, _product_diagram(c, a, b)))
    for (f, g), cone in structure.equalizers.items():
        instances.append((("equalizer", f, g), cone, _equalizer_diagram(c, f, g)))
    for label, cone, diag in instances:
        image_body = Functor(diag.shape, cod,
                             {o: fn.omap[diag.body.omap[o]] for o in diag.shape.objects},
                             {m: fn.mmap[diag.body.mmap[m]] for m in diag.shape.morphisms})
        image_diag = Diagram(diag.shape, image_body)
        image_cone = Cone(fn.omap[cone.apex],
                          {j: fn.mmap[leg] for j, leg in cone.legs.items()})
        if not is_universal_cone(cod, image_diag, image_cone):
            return Verdict.failing("limit-preservation", {"instance": label})
    return Verdict.passing()
