"""Explicitly finite categories: tables, validation, presentations, opposites.

A FinCategory stores the full composition table, so every later check is a
finite search. Presentations (generators and relations) are compiled eagerly
into tables by bounded word saturation; the word problem is undecidable in
general, so compilation fails fast with NotFinitelyClosed when the bound is
not enough to close the quotient.
"""
from dataclasses import dataclass

from .canon import canon_key
from .errors import InvalidPresentation, NotFinitelyClosed, UnknownId
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True, eq=True)
class FinCategory:
    objects: tuple
    morphisms: tuple
    src: dict
    tgt: dict
    identity: dict          # object -> morphism id
    comp: dict              # (g, f) -> g-after-f, defined iff tgt(f) == src(g)

    def __post_init__(self):
        hom = {}
        for f in self.morphisms:
            a, b = self.src.get(f), self.tgt.get(f)
            if a is not None and b is not None:
                hom.setdefault((a, b), []).append(f)
        object.__setattr__(self, "_hom", {k: tuple(v) for k, v in hom.items()})
        object.__setattr__(self, "_obj_ix", {o: i for i, o in enumerate(self.objects)})
        object.__setattr__(self, "_mor_ix", {m: i for i, m in enumerate(self.morphisms)})
        object.__setattr__(self, "_identity_set", frozenset(self.identity.values()))
        object.__setattr__(self, "_isos", None)

    def obj_index(self, a) -> int:
        return self._obj_ix[a]

    def mor_index(self, f) -> int:
        return self._mor_ix[f]

    def hom(self, a, b) -> tuple:
        return self._hom.get((a, b), ())

    def compose(self, g, f):
        return self.comp[(g, f)]

    def is_identity(self, f) -> bool:
        return f in self._identity_set

    def composable(self, g, f) -> bool:
        return self.tgt[f] == self.src[g]

    def is_iso(self, f) -> bool:
        return f in self.isos()

    def isos(self) -> frozenset:
        if self._isos is None:
            found = set()
            for f in self.morphisms:
                a, b = self.src[f], self.tgt[f]
                for g in self.hom(b, a):
                    if (self.comp.get((g, f)) == self.identity[a]
                            and self.comp.get((f, g)) == self.identity[b]):
                        found.add(f)
                        break
            object.__setattr__(self, "_isos", frozenset(found))
        return self._isos

    def inverse(self, f):
        a, b = self.src[f], self.tgt[f]
        for g in self.hom(b, a):
            if (self.comp.get((g, f)) == self.identity[a]
                    and self.comp.get((f, g)) == self.identity[b]):
                return g
        raise UnknownId(f"{f} is not invertible", morphism=f)


def validate_category(c: FinCategory) -> Verdict:
    """Total checker for the FinCategory laws; never raises."""
    if len(set(c.objects)) != len(c.objects):
        return Verdict.failing("distinct-object-ids", {"objects": c.objects})
    if len(set(c.morphisms)) != len(c.morphisms):
        return Verdict.failing("distinct-morphism-ids", {"morphisms": c.morphisms})
    objs, mors = set(c.objects), set(c.morphisms)
    for f in c.morphisms:
        if c.src.get(f) not in objs or c.tgt.get(f) not in objs:
            return Verdict.failing("src-tgt-total", {"morphism": f})
    if set(c.src) != mors or set(c.tgt) != mors:
        return Verdict.failing("src-tgt-total", {"extra": sorted(set(c.src) ^ mors)})
    for a in c.objects:
        i = c.identity.get(a)
        if i not in mors:
            return Verdict.failing("identity-total", {"object": a})
        if c.src[i] != a or c.tgt[i] != a:
            return Verdict.failing("identity-endpoints", {"object": a, "identity": i})
    if set(c.identity) != objs:
        return Verdict.failing("identity-total", {"extra": sorted(set(c.identity) ^ objs)})
    for (g, f), h in c.comp.items():
        if g not in mors or f not in mors:
            return Verdict.failing("comp-unknown-id", {"pair": (g, f)})
        if c.tgt[f] != c.src[g]:
            return Verdict.failing("comp-not-composable", {"pair": (g, f)})
        if h not in mors or c.src[h] != c.src[f] or c.tgt[h] != c.tgt[g]:
            return Verdict.failing("comp-typing", {"pair": (g, f), "value": h})
    for f in c.morphisms:
        for g in c.morphisms:
            METER.charge()
            if c.tgt[f] == c.src[g] and (g, f) not in c.comp:
                return Verdict.failing("comp-missing", {"pair": (g, f)})
    for f in c.morphisms:
        ida, idb = c.identity[c.src[f]], c.identity[c.tgt[f]]
        if c.comp[(idb, f)] != f:
            return Verdict.failing("left-unit", {"pair": (idb, f), "value": c.comp[(idb, f)]})
        if c.comp[(f, ida)] != f:
            return Verdict.failing("right-unit", {"pair": (f, ida), "value": c.comp[(f, ida)]})
    for f in c.morphisms:
        for g in c.morphisms:
            if c.tgt[f] != c.src[g]:
                continue
            gf = c.comp[(g, f)]
            for h in c.morphisms:
                if c.tgt[g] != c.src[h]:
                    continue
                METER.charge()
                if c.comp[(h, gf)] != c.comp[(c.comp[(h, g)], f)]:
                    return Verdict.failing("associativity", {"triple": (h, g, f)})
    return Verdict.passing()


def opposite(c: FinCategory) -> FinCategory:
    """Swap sources and targets; an involution on the nose."""
    return FinCategory(
        objects=c.objects,
        morphisms=c.morphisms,
        src=dict(c.tgt),
        tgt=dict(c.src),
        identity=dict(c.identity),
        comp={(f, g): h for (g, f), h in c.comp.items()},
    )


def hom_set(c: FinCategory, a, b) -> tuple:
    if a not in c._obj_ix:
        raise UnknownId(f"unknown object {a!r}", object=a)
    if b not in c._obj_ix:
        raise UnknownId(f"unknown object {b!r}", object=b)
    return c.hom(a, b)


def relabel(c: FinCategory, obj_map=None, mor_map=None) -> FinCategory:
    om = obj_map or {o: o for o in c.objects}
    mm = mor_map or {m: m for m in c.morphisms}
    return FinCategory(
        objects=tuple(om[o] for o in c.objects),
        morphisms=tuple(mm[m] for m in c.morphisms),
        src={mm[m]: om[c.src[m]] for m in c.morphisms},
        tgt={mm[m]: om[c.tgt[m]] for m in c.morphisms},
        identity={om[o]: mm[c.identity[o]] for o in c.objects},
        comp={(mm[g], mm[f]): mm[h] for (g, f), h in c.comp.items()},
    )


def table_category(objects, arrows, compositions) -> FinCategory:
    """Build a FinCategory from non-identity arrow declarations.

    arrows: iterable of (name, src, tgt); compositions: dict (g, f) -> h over
    non-identity pairs (identity composites are filled in automatically).
    Identities are named id_<object>.
    """
    objects = tuple(objects)
    names = [f"id_{o}" for o in objects] + [a[0] for a in arrows]
    src = {f"id_{o}": o for o in objects}
    tgt = dict(src)
    for name, a, b in arrows:
        src[name] = a
        tgt[name] = b
    identity = {o: f"id_{o}" for o in objects}
    comp = {}
    for f in names:
        for g in names:
            if tgt[f] != src[g]:
                continue
            if g == identity[tgt[f]]:
                comp[(g, f)] = f
            elif f == identity[src[g]]:
                comp[(g, f)] = g
            elif (g, f) in compositions:
                comp[(g, f)] = compositions[(g, f)]
    return FinCategory(objects, tuple(names), src, tgt, identity, comp)


@dataclass(frozen=True)
class CategoryPresentation:
    objects: tuple
    arrows: tuple           # (name, src, tgt) generator triples
    relations: tuple        # pairs of words; a word is a tuple of tokens,
                            # each a generator name or id_<object>
    bound: int = 12


def _word_endpoints(p: CategoryPresentation, word, arr_src, arr_tgt):
    """Resolve a token word, written in composition order (outermost first,
    as in "w . f" = w after f), to (application-order path, src, tgt)."""
    cur_src = None
    cur = None
    path = []
    for tok in reversed(word):
        if tok.startswith("id_") and tok[3:] in p.objects and tok not in arr_src:
            o = tok[3:]
            s, t = o, o
        elif tok in arr_src:
            s, t = arr_src[tok], arr_tgt[tok]
            path.append(tok)
        else:
            raise InvalidPresentation(f"unknown generator {tok!r}", token=tok)
        if cur is None:
            cur_src = s
        elif cur != s:
            raise InvalidPresentation("word not composable", word=word, at=tok)
        cur = t
    if cur is None:
        raise InvalidPresentation("empty word", word=word)
    return tuple(path), cur_src, cur


def compile_presentation_full(p: CategoryPresentation):
    """Compile generators-and-relations to a table; also return the map
    sending each generator to its morphism id in the quotient."""
    if p.bound < 1:
        raise InvalidPresentation("saturation bound must be positive", bound=p.bound)
    if len(set(p.objects)) != len(p.objects):
        raise InvalidPresentation("duplicate object ids")
    arr_src, arr_tgt = {}, {}
    gen_ix = {}
    for i, (name, a, b) in enumerate(p.arrows):
        if name in arr_src or name in (f"id_{o}" for o in p.objects):
            raise InvalidPresentation(f"arrow name {name!r} clashes", name=name)
        if a not in p.objects or b not in p.objects:
            raise InvalidPresentation(f"arrow {name!r} uses unknown object", name=name)
        arr_src[name], arr_tgt[name] = a, b
        gen_ix[name] = i

    rels = []
    for lhs, rhs in p.relations:
        lp, ls, lt = _word_endpoints(p, lhs, arr_src, arr_tgt)
        rp, rs, rt = _word_endpoints(p, rhs, arr_src, arr_tgt)
        if (ls, lt) != (rs, rt):
            raise InvalidPresentation("relation sides not parallel", lhs=lhs, rhs=rhs)
        rels.append(((ls, lp), (rs, rp)))

    by_src = {o: [] for o in p.objects}
    by_tgt = {o: [] for o in p.objects}
    for name in arr_src:
        by_src[arr_src[name]].append(name)
        by_tgt[arr_tgt[name]].append(name)

    # Key = (source object, generator path); enumerate all words up to the bound.
    words = {}
    frontier = [(o, ()) for o in p.objects]
    for w in frontier:
        words[w] = w[0]
    for _ in range(p.bound):
        nxt = []
        for (s, path) in frontier:
            t = arr_tgt[path[-1]] if path else s
            for g in by_src[t]:
                METER.charge()
                w = (s, path + (g,))
                if w not in words:
                    words[w] = s
                    nxt.append(w)
        frontier = nxt

    def word_tgt(w):
        s, path = w
        return arr_tgt[path[-1]] if path else s

    def wkey(w):
        s, path = w
        return (len(path), tuple(gen_ix[g] for g in path), p.objects.index(s))

    parent = {w: w for w in words}
    best = {w: w for w in words}

    def find(w):
        root = w
        while parent[root] != root:
            root = parent[root]
        while parent[w] != root:
            parent[w], w = root, parent[w]
        return root

    def union(a, b) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        if wkey(best[rb]) < wkey(best[ra]):
            ra, rb = rb, ra
        parent[rb] = ra
        if wkey(best[rb]) < wkey(best[ra]):
            best[ra] = best[rb]
        return True

    for (ls, lp), (rs, rp) in rels:
        if len(lp) > p.bound or len(rp) > p.bound:
            raise NotFinitelyClosed(
                "relation side exceeds the saturation bound", bound=p.bound
            )
        union((ls, lp), (rs, rp))

    changed = True
    while changed:
        changed = False
        for w in list(words):
            METER.charge()
            r = best[find(w)]
            if r == w:
                continue
            s, path = w
            rs, rpath = r
            if len(path) < p.bound:
                for g in by_src[word_tgt(w)]:
                    if union((s, path + (g,)), (rs, rpath + (g,))):
                        changed = True
                for g in by_tgt[s]:
                    if union((arr_src[g], (g,) + path), (arr_src[g], (g,) + rpath)):
                        changed = True

    classes = {}
    for w in words:
        classes.setdefault(find(w), []).append(w)
    reps = sorted((best[root] for root in classes), key=wkey)
    for (s, path) in reps:
        # Stepwise composition looks words up one generator beyond a normal
        # form, so every normal form must sit strictly inside the bound.
        if len(path) >= p.bound:
            raise NotFinitelyClosed(
                "word classes still growing at the saturation bound",
                bound=p.bound, witness=".".join(reversed(path)),
            )

    def mor_name(rep):
        s, path = rep
        if not path:
            return f"id_{s}"
        return ".".join(reversed(path))

    name_of = {rep: mor_name(rep) for rep in reps}
    rep_of_root = {find(rep): rep for rep in reps}

    def class_of(w):
        return rep_of_root[find(w)]

    def compose_reps(g_rep, f_rep):
        # g after f: walk g's generators over f's class, reducing stepwise.
        cur = f_rep
        for gen in g_rep[1]:
            s, path = cur
            cur = class_of((s, path + (gen,)))
        return cur

    morphisms = tuple(name_of[rep] for rep in reps)
    src = {name_of[rep]: rep[0] for rep in reps}
    tgt = {name_of[rep]: word_tgt(rep) for rep in reps}
    identity = {o: f"id_{o}" for o in p.objects}
    comp = {}
    for f_rep in reps:
        for g_rep in reps:
            if word_tgt(f_rep) != g_rep[0]:
                continue
            METER.charge()
            comp[(name_of[g_rep], name_of[f_rep])] = name_of[compose_reps(g_rep, f_rep)]

    cat = FinCategory(tuple(p.objects), morphisms, src, tgt, identity, comp)
    verdict = validate_category(cat)
    if not verdict.ok:
        raise NotFinitelyClosed(
            "bounded quotient is not a category; raise the bound",
            law=verdict.law, bound=p.bound,
        )
    gen_map = {g: name_of[class_of((arr_src[g], (g,)))] for g in arr_src}
    return cat, gen_map


def compile_presentation(p: CategoryPresentation) -> FinCategory:
    return compile_presentation_full(p)[0]
