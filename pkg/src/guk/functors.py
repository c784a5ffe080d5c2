"""Functors, set-valued functors, natural transformations, Yoneda machinery.

Natural transformations are enumerated by brute force over component choices
with early pruning by naturality squares; every enumeration comes back in one
canonical order so reports and golden files never wobble.
"""
import itertools
from dataclasses import dataclass

from .canon import canon_key
from .category import FinCategory, hom_set, opposite
from .errors import PreconditionFailed, UnknownId
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True)
class Functor:
    dom: FinCategory
    cod: FinCategory
    omap: dict
    mmap: dict


@dataclass(frozen=True)
class SetFunctor:
    """Functor into finite sets: carriers are canonical tuples, actions are
    total function tables. With dom an opposite category this is a presheaf."""
    dom: FinCategory
    carrier: dict           # object -> tuple of elements
    action: dict            # morphism -> {element: element}


@dataclass(frozen=True)
class NatTransform:
    source: object          # Functor or SetFunctor
    target: object
    components: dict        # object -> function table (dict) or morphism id


def identity_functor(c: FinCategory) -> Functor:
    return Functor(c, c, {o: o for o in c.objects}, {m: m for m in c.morphisms})


def compose_functors(g: Functor, f: Functor) -> Functor:
    if f.cod is not g.dom and f.cod != g.dom:
        raise PreconditionFailed("functors not composable")
    return Functor(
        f.dom, g.cod,
        {o: g.omap[f.omap[o]] for o in f.dom.objects},
        {m: g.mmap[f.mmap[m]] for m in f.dom.morphisms},
    )


def validate_functor(fn: Functor) -> Verdict:
    c, d = fn.dom, fn.cod
    for o in c.objects:
        if fn.omap.get(o) not in d._obj_ix:
            return Verdict.failing("object-map-total", {"object": o})
    for m in c.morphisms:
        fm = fn.mmap.get(m)
        if fm not in d._mor_ix:
            return Verdict.failing("morphism-map-total", {"morphism": m})
        if d.src[fm] != fn.omap[c.src[m]] or d.tgt[fm] != fn.omap[c.tgt[m]]:
            return Verdict.failing("endpoint-preservation", {"morphism": m, "image": fm})
    for o in c.objects:
        if fn.mmap[c.identity[o]] != d.identity[fn.omap[o]]:
            return Verdict.failing("identity-preservation", {"object": o})
    for (g, f), h in c.comp.items():
        METER.charge()
        if d.comp[(fn.mmap[g], fn.mmap[f])] != fn.mmap[h]:
            return Verdict.failing("composition-preservation", {"pair": (g, f)})
    return Verdict.passing()


def validate_set_functor(sf: SetFunctor) -> Verdict:
    c = sf.dom
    for o in c.objects:
        elems = sf.carrier.get(o)
        if elems is None:
            return Verdict.failing("carrier-total", {"object": o})
        if len(set(elems)) != len(elems):
            return Verdict.failing("carrier-distinct", {"object": o})
    for m in c.morphisms:
        table = sf.action.get(m)
        if table is None:
            return Verdict.failing("action-total", {"morphism": m})
        dom_elems, cod_elems = sf.carrier[c.src[m]], set(sf.carrier[c.tgt[m]])
        if set(table) != set(dom_elems):
            return Verdict.failing("action-domain", {"morphism": m})
        for x, y in table.items():
            if y not in cod_elems:
                return Verdict.failing("action-codomain", {"morphism": m, "element": x})
    for o in c.objects:
        i = c.identity[o]
        if any(sf.action[i][x] != x for x in sf.carrier[o]):
            return Verdict.failing("identity-action", {"object": o})
    for (g, f), h in c.comp.items():
        METER.charge()
        for x in sf.carrier[c.src[f]]:
            if sf.action[g][sf.action[f][x]] != sf.action[h][x]:
                return Verdict.failing("composition-action", {"pair": (g, f), "element": x})
    return Verdict.passing()


def _is_set_valued(fn) -> bool:
    return isinstance(fn, SetFunctor)


def validate_nat(nt: NatTransform) -> Verdict:
    f, g = nt.source, nt.target
    if f.dom != g.dom:
        return Verdict.failing("parallel-domains", None)
    c = f.dom
    if _is_set_valued(f):
        for o in c.objects:
            comp = nt.components.get(o)
            if comp is None or set(comp) != set(f.carrier[o]):
                return Verdict.failing("component-domain", {"object": o})
            cod = set(g.carrier[o])
            if any(v not in cod for v in comp.values()):
                return Verdict.failing("component-codomain", {"object": o})
        for m in c.morphisms:
            a, b = c.src[m], c.tgt[m]
            for x in f.carrier[a]:
                METER.charge()
                if nt.components[b][f.action[m][x]] != g.action[m][nt.components[a][x]]:
                    return Verdict.failing(
                        "naturality", {"morphism": m, "object": a, "element": x}
                    )
        return Verdict.passing()
    if f.cod != g.cod:
        return Verdict.failing("parallel-codomains", None)
    d = f.cod
    for o in c.objects:
        comp = nt.components.get(o)
        if comp not in d._mor_ix:
            return Verdict.failing("component-total", {"object": o})
        if d.src[comp] != f.omap[o] or d.tgt[comp] != g.omap[o]:
            return Verdict.failing("component-endpoints", {"object": o})
    for m in c.morphisms:
        METER.charge()
        a, b = c.src[m], c.tgt[m]
        if d.comp[(nt.components[b], f.mmap[m])] != d.comp[(g.mmap[m], nt.components[a])]:
            return Verdict.failing("naturality", {"morphism": m})
    return Verdict.passing()


def yoneda(c: FinCategory, a) -> SetFunctor:
    """The presheaf hom(-, a) on opposite(c); action is precomposition."""
    if a not in c._obj_ix:
        raise UnknownId(f"unknown object {a!r}", object=a)
    op = opposite(c)
    carrier = {b: hom_set(c, b, a) for b in c.objects}
    action = {}
    for f in c.morphisms:
        x, y = c.src[f], c.tgt[f]
        action[f] = {g: c.comp[(g, f)] for g in carrier[y]}
    return SetFunctor(op, carrier, action)


def covariant_hom(c: FinCategory, a) -> SetFunctor:
    """The functor hom(a, -) on c; action is postcomposition."""
    if a not in c._obj_ix:
        raise UnknownId(f"unknown object {a!r}", object=a)
    carrier = {b: hom_set(c, a, b) for b in c.objects}
    action = {}
    for f in c.morphisms:
        action[f] = {g: c.comp[(f, g)] for g in carrier[c.src[f]]}
    return SetFunctor(c, carrier, action)


def constant_set_functor(c: FinCategory, elems) -> SetFunctor:
    elems = tuple(elems)
    return SetFunctor(
        c,
        {o: elems for o in c.objects},
        {m: {x: x for x in elems} for m in c.morphisms},
    )


def terminal_presheaf(base: FinCategory) -> SetFunctor:
    return constant_set_functor(opposite(base), ("*",))


def nat_transforms_between(f: SetFunctor, g: SetFunctor) -> tuple:
    """All natural transformations f -> g, complete and canonically ordered."""
    if f.dom != g.dom:
        raise PreconditionFailed("set functors must share their domain")
    c = f.dom
    objs = c.objects
    placed = {}
    out = []

    # naturality squares grouped by the later-assigned endpoint
    squares = {o: [] for o in objs}
    pos = {o: i for i, o in enumerate(objs)}
    for m in c.morphisms:
        a, b = c.src[m], c.tgt[m]
        squares[objs[max(pos[a], pos[b])]].append(m)

    def candidates(o):
        dom_elems, cod_elems = f.carrier[o], g.carrier[o]
        if not dom_elems:
            yield {}
            return
        if not cod_elems:
            return
        for images in itertools.product(cod_elems, repeat=len(dom_elems)):
            METER.charge()
            yield dict(zip(dom_elems, images))

    def ok(o):
        for m in squares[o]:
            a, b = c.src[m], c.tgt[m]
            for x in f.carrier[a]:
                if placed[b][f.action[m][x]] != g.action[m][placed[a][x]]:
                    return False
        return True

    def go(i):
        if i == len(objs):
            out.append(NatTransform(f, g, dict(placed)))
            return
        o = objs[i]
        for comp in candidates(o):
            placed[o] = comp
            if ok(o):
                go(i + 1)
            del placed[o]

    go(0)
    return tuple(out)


def identity_nat(f: SetFunctor) -> NatTransform:
    return NatTransform(f, f, {o: {x: x for x in f.carrier[o]} for o in f.dom.objects})


def compose_nats(beta: NatTransform, alpha: NatTransform) -> NatTransform:
    if alpha.target != beta.source:
        raise PreconditionFailed("natural transformations not composable")
    comps = {
        o: {x: beta.components[o][alpha.components[o][x]] for x in alpha.components[o]}
        for o in alpha.source.dom.objects
    }
    return NatTransform(alpha.source, beta.target, comps)


def is_natural_iso(nt: NatTransform) -> bool:
    for o in nt.source.dom.objects:
        table = nt.components[o]
        if len(set(table.values())) != len(table) or len(table) != len(nt.target.carrier[o]):
            return False
    return True


def naturally_isomorphic(f: SetFunctor, g: SetFunctor) -> bool:
    if any(len(f.carrier[o]) != len(g.carrier[o]) for o in f.dom.objects):
        return False
    return any(is_natural_iso(nt) for nt in nat_transforms_between(f, g))


def check_fully_faithful(fn: Functor) -> Verdict:
    """Pass iff every induced hom-map is a bijection; witness = first bad pair."""
    c, d = fn.dom, fn.cod
    for a in c.objects:
        for b in c.objects:
            source = hom_set(c, a, b)
            target = hom_set(d, fn.omap[a], fn.omap[b])
            images = [fn.mmap[m] for m in source]
            METER.charge(len(source) + 1)
            if len(set(images)) != len(images):
                return Verdict.failing("not-faithful", {"pair": (a, b)})
            if set(images) != set(target):
                return Verdict.failing("not-full", {"pair": (a, b)})
    return Verdict.passing()


def enumerate_set_functors(c: FinCategory, max_size: int, sizes=None):
    """Complete, canonically ordered enumeration of SetFunctors on c with all
    carriers of size <= max_size (or exactly the given per-object sizes).
    Carrier elements are 0..n-1."""
    objs = c.objects
    non_id = [m for m in c.morphisms if not c.is_identity(m)]
    pos = {m: i for i, m in enumerate(non_id)}

    # composition triples checked as soon as the last participant is placed
    triples_at = {m: [] for m in non_id}
    deferred = []
    for (g, f), h in c.comp.items():
        parts = [m for m in (g, f, h) if not c.is_identity(m)]
        if parts:
            last = max(parts, key=lambda m: pos[m])
            triples_at[last].append((g, f, h))
        else:
            deferred.append((g, f, h))

    out = []

    def size_vectors():
        if sizes is not None:
            yield dict(sizes)
            return
        for vec in itertools.product(range(max_size + 1), repeat=len(objs)):
            yield dict(zip(objs, vec))

    for size_of in size_vectors():
        carrier = {o: tuple(range(size_of[o])) for o in objs}
        id_tables = {o: {x: x for x in carrier[o]} for o in objs}
        action = {c.identity[o]: id_tables[o] for o in objs}

        def table_of(m):
            if c.is_identity(m):
                return id_tables[c.src[m]]
            return action[m]

        def consistent(m):
            for (g, f, h) in triples_at[m]:
                tg, tf, th = table_of(g), table_of(f), table_of(h)
                for x in carrier[c.src[f]]:
                    if tg[tf[x]] != th[x]:
                        return False
            return True

        def go(i):
            if i == len(non_id):
                out.append(SetFunctor(c, dict(carrier), dict(action)))
                return
            m = non_id[i]
            dom_elems, cod_elems = carrier[c.src[m]], carrier[c.tgt[m]]
            if not dom_elems:
                action[m] = {}
                if consistent(m):
                    go(i + 1)
                del action[m]
                return
            if not cod_elems:
                return
            for images in itertools.product(cod_elems, repeat=len(dom_elems)):
                METER.charge()
                action[m] = dict(zip(dom_elems, images))
                if consistent(m):
                    go(i + 1)
                del action[m]

        go(0)
    return out


def functor_fragment(functors, names):
    """Tabulate the full subcategory of the functor category on the given
    SetFunctors. Returns (category, nat_of_morphism, morphism_of_nat) where
    nat tables are keyed by the new morphism ids."""
    if len(functors) != len(names) or len(set(names)) != len(names):
        raise PreconditionFailed("fragment needs distinct names per functor")
    homs = {}
    for i, fi in enumerate(functors):
        for j, fj in enumerate(functors):
            homs[(i, j)] = nat_transforms_between(fi, fj)

    mor_name = {}
    nat_of = {}
    counter = 0
    for i in range(len(functors)):
        for j in range(len(functors)):
            for k, nt in enumerate(homs[(i, j)]):
                if i == j and nt == identity_nat(functors[i]):
                    name = f"id_{names[i]}"
                else:
                    name = f"n{counter}"
                    counter += 1
                mor_name[(i, j, k)] = name
                nat_of[name] = nt

    def locate(i, j, nt):
        for k, cand in enumerate(homs[(i, j)]):
            if cand.components == nt.components:
                return mor_name[(i, j, k)]
        raise PreconditionFailed("fragment homs not closed under composition")

    src, tgt = {}, {}
    morphisms = []
    for (i, j, k), name in mor_name.items():
        morphisms.append(name)
        src[name] = names[i]
        tgt[name] = names[j]
    identity = {names[i]: locate(i, i, identity_nat(functors[i]))
                for i in range(len(functors))}
    comp = {}
    for (i, j, k1), f_name in mor_name.items():
        for (j2, l, k2), g_name in mor_name.items():
            if j2 != j:
                continue
            METER.charge()
            comp[(g_name, f_name)] = locate(i, l, compose_nats(nat_of[g_name], nat_of[f_name]))
    cat = FinCategory(tuple(names), tuple(morphisms), src, tgt, identity, comp)
    return cat, nat_of, locate


def yoneda_embedding(c: FinCategory):
    """The functor A -> hom(-, A) from c into the tabulated fragment of
    presheaves on its representables."""
    presheaves = [yoneda(c, a) for a in c.objects]
    names = [f"y_{a}" for a in c.objects]
    frag, nat_of, locate = functor_fragment(presheaves, names)
    omap = {a: f"y_{a}" for a in c.objects}
    mmap = {}
    for f in c.morphisms:
        a, b = c.src[f], c.tgt[f]
        comps = {
            x: {g: c.comp[(f, g)] for g in hom_set(c, x, a)}
            for x in c.objects
        }
        nt = NatTransform(presheaves[c.obj_index(a)], presheaves[c.obj_index(b)], comps)
        mmap[f] = locate(c.obj_index(a), c.obj_index(b), nt)
    return Functor(c, frag, omap, mmap), frag, nat_of


def hom_embedding(c: FinCategory):
    """The functor A -> hom(A, -) from opposite(c) into the tabulated
    fragment of covariant hom functors."""
    homs = [covariant_hom(c, a) for a in c.objects]
    names = [f"h_{a}" for a in c.objects]
    frag, nat_of, locate = functor_fragment(homs, names)
    op = opposite(c)
    omap = {a: f"h_{a}" for a in c.objects}
    mmap = {}
    for f in c.morphisms:
        a, b = c.src[f], c.tgt[f]           # in c;  f: b -> a inside opposite(c)
        comps = {
            x: {u: c.comp[(u, f)] for u in hom_set(c, b, x)}
            for x in c.objects
        }
        nt = NatTransform(homs[c.obj_index(b)], homs[c.obj_index(a)], comps)
        mmap[f] = locate(c.obj_index(b), c.obj_index(a), nt)
    return Functor(op, frag, omap, mmap), frag, nat_of
