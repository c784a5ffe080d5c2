"""Grothendieck topologies on finite categories, sheaf conditions, and the
associated-sheaf construction.

Covering families are finite indexed lists canonicalized to sorted
deduplicated tuples, so family identity is reindexing-invariant. The axiom
sweep treats monotonicity as subcover extraction: a subfamily through which a
covering family factors memberwise is again covering. Chosen pullbacks are
fixed once per site and reused everywhere, which makes the restriction maps
u, v1, v2 well-defined tables.
"""
import itertools
from dataclasses import dataclass

from .canon import canon_key, canon_set, canon_sorted
from .category import FinCategory, opposite
from .errors import MissingPullback, NotATopology, NotLex, PreconditionFailed
from .functors import NatTransform, SetFunctor, validate_set_functor
from .limits import check_lex_functor, pullback
from .verdict import Verdict
from .work import METER


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple
    opens: tuple            # frozensets of points, canonical (size, members) order


@dataclass(frozen=True)
class Site:
    base: FinCategory
    cov: dict               # object -> tuple of families (sorted member tuples)
    pullbacks: dict         # (f, g) cospan -> (apex, p1, p2), within-family pairs


@dataclass(frozen=True)
class SheafVerdict:
    kind: str               # "sheaf" | "separated-only" | "neither"
    counterexample: object

    @property
    def ok(self) -> bool:
        return self.kind == "sheaf"


def _chosen_pullback(base: FinCategory, f, g, memo):
    key = (f, g)
    if key not in memo:
        cone = pullback(base, f, g)
        if cone is None:
            raise MissingPullback(
                "base category lacks a required pullback", cospan=(f, g)
            )
        memo[key] = (cone.apex, cone.legs["l"], cone.legs["r"])
    return memo[key]


def build_site(base: FinCategory, cov) -> Site:
    """Canonicalize a raw covering assignment and fix the within-family
    pullbacks; raises MissingPullback when the base lacks one."""
    canonical = {}
    for a in base.objects:
        fams = []
        for fam in cov.get(a, ()):
            members = canon_set(fam)
            for f in members:
                if f not in base._mor_ix:
                    raise PreconditionFailed(f"unknown morphism {f!r} in cover", object=a)
                if base.tgt[f] != a:
                    raise PreconditionFailed(
                        "covering family member has the wrong target",
                        object=a, morphism=f,
                    )
            fams.append(members)
        canonical[a] = canon_set(fams)
    memo = {}
    for a in base.objects:
        for fam in canonical[a]:
            for f in fam:
                for g in fam:
                    _chosen_pullback(base, f, g, memo)
    return Site(base, canonical, memo)


def chaotic_site(base: FinCategory) -> Site:
    """Identity covers only."""
    return build_site(base, {a: ((base.identity[a],),) for a in base.objects})


def validate_space(points, opens) -> FiniteSpace:
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise NotATopology("duplicate points")
    sets = [frozenset(o) for o in opens]
    if len(set(sets)) != len(sets):
        raise NotATopology("duplicate opens")
    universe = frozenset(pts)
    for o in sets:
        if not o <= universe:
            raise NotATopology("open contains unknown point", open=canon_sorted(o))
    family = set(sets)
    if frozenset() not in family or universe not in family:
        raise NotATopology("opens must contain the empty set and the whole space")
    for o1 in family:
        for o2 in family:
            if o1 | o2 not in family:
                raise NotATopology("opens not closed under union",
                                   pair=(canon_sorted(o1), canon_sorted(o2)))
            if o1 & o2 not in family:
                raise NotATopology("opens not closed under intersection",
                                   pair=(canon_sorted(o1), canon_sorted(o2)))
    ordered = tuple(sorted(family, key=lambda o: (len(o), canon_sorted(o))))
    return FiniteSpace(pts, ordered)


def open_name(space: FiniteSpace, o: frozenset) -> str:
    return f"U{space.opens.index(o)}"


def space_category(space: FiniteSpace) -> FinCategory:
    """Poset of opens ordered by inclusion; object Ui is the i-th open in the
    canonical (size, members) order, morphisms le_Ui_Uj are the inclusions."""
    from .category import table_category

    names = {o: open_name(space, o) for o in space.opens}
    arrows = []
    comps = {}
    for o1 in space.opens:
        for o2 in space.opens:
            if o1 != o2 and o1 <= o2:
                arrows.append((f"le_{names[o1]}_{names[o2]}", names[o1], names[o2]))
    for o1 in space.opens:
        for o2 in space.opens:
            for o3 in space.opens:
                if o1 < o2 < o3:
                    comps[(f"le_{names[o2]}_{names[o3]}", f"le_{names[o1]}_{names[o2]}")] = \
                        f"le_{names[o1]}_{names[o3]}"
    return table_category(tuple(names[o] for o in space.opens), arrows, comps)


def open_set_site(space: FiniteSpace) -> Site:
    """Cov(U) = all families of opens below U whose union is U, including the
    empty family covering the empty open."""
    base = space_category(space)
    names = {o: open_name(space, o) for o in space.opens}
    cov = {}
    for u in space.opens:
        below = [o for o in space.opens if o <= u]
        fams = []
        for r in range(len(below) + 1):
            for combo in itertools.combinations(below, r):
                METER.charge()
                union = frozenset().union(*combo) if combo else frozenset()
                if union == u:
                    fam = tuple(
                        base.identity[names[u]] if o == u
                        else f"le_{names[o]}_{names[u]}"
                        for o in combo
                    )
                    fams.append(fam)
        cov[names[u]] = fams
    return build_site(base, cov)


def _factors_through(base: FinCategory, f, h) -> bool:
    """Does f factor as h . s for some s?"""
    for s in base.hom(base.src[f], base.src[h]):
        if base.comp[(h, s)] == f:
            return True
    return False


def validate_topology(site: Site) -> Verdict:
    """Check the four covering axioms; the counterexample names the axiom and
    the offending family. Raises MissingPullback when axiom (ii) needs a
    pullback the base does not have."""
    base = site.base
    cov_sets = {a: set(site.cov[a]) for a in base.objects}
    memo = dict(site.pullbacks)

    for f in base.isos():
        a = base.tgt[f]
        if (f,) not in cov_sets[a]:
            return Verdict.failing("axiom-i-iso-cover",
                                   {"object": a, "morphism": f})

    for a in base.objects:
        for fam in site.cov[a]:
            for g in base.morphisms:
                if base.tgt[g] != a:
                    continue
                METER.charge()
                b = base.src[g]
                pulled = canon_set(
                    _chosen_pullback(base, f, g, memo)[2] for f in fam
                )
                if pulled not in cov_sets[b]:
                    return Verdict.failing(
                        "axiom-ii-pullback-stability",
                        {"object": a, "family": fam, "along": g, "pulled": pulled},
                    )

    for a in base.objects:
        for fam in site.cov[a]:
            options = []
            for f in fam:
                src_covers = site.cov[base.src[f]]
                options.append(canon_set(
                    frozenset(base.comp[(f, g)] for g in sub)
                    for sub in src_covers
                ))
            options.sort(key=len, reverse=True)
            partials = {frozenset()}
            for opts in options:
                nxt = set()
                for p in partials:
                    for s in opts:
                        METER.charge()
                        nxt.add(p | s)
                partials = nxt
            for p in partials:
                composite = canon_sorted(p)
                if composite not in cov_sets[a]:
                    return Verdict.failing(
                        "axiom-iii-composition",
                        {"object": a, "family": fam, "composite": composite},
                    )

    for a in base.objects:
        for fam in site.cov[a]:
            for r in range(len(fam) + 1):
                for sub in itertools.combinations(fam, r):
                    METER.charge()
                    if canon_set(sub) in cov_sets[a]:
                        continue
                    if all(any(_factors_through(base, f, h) for h in sub)
                           for f in fam):
                        return Verdict.failing(
                            "axiom-iv-monotonicity",
                            {"object": a, "family": fam, "subfamily": canon_set(sub)},
                        )
    return Verdict.passing()


# ------------------------------------------------------------ sheaf checks

def _presheaf_on(site: Site, f: SetFunctor):
    if f.dom != opposite(site.base):
        raise PreconditionFailed("presheaf domain must be the opposite of the site base")


def compatible_families(f: SetFunctor, site: Site, a, fam) -> tuple:
    """All member-indexed element tuples whose restrictions agree on the
    chosen pullbacks."""
    base = site.base
    sources = [base.src[m] for m in fam]
    pulls = {}
    for i, fi in enumerate(fam):
        for j, fj in enumerate(fam):
            pulls[(i, j)] = site.pullbacks[(fi, fj)]
    out = []
    for combo in itertools.product(*(f.carrier[s] for s in sources)):
        METER.charge()
        ok = True
        for (i, j), (_apex, p1, p2) in pulls.items():
            if f.action[p1][combo[i]] != f.action[p2][combo[j]]:
                ok = False
                break
        if ok:
            out.append(tuple(combo))
    return tuple(out)


def _family_report(f: SetFunctor, site: Site, a, fam):
    """u, its image, and the equalizer of the two restriction maps."""
    u = {x: tuple(f.action[m][x] for m in fam) for x in f.carrier[a]}
    equalizer = compatible_families(f, site, a, fam)
    return u, equalizer


def check_sheaf(f: SetFunctor, site: Site) -> SheafVerdict:
    """sheaf iff u is a bijection onto the equalizer of v1, v2 for every
    covering family; separated-only iff u is always injective but some
    compatible family has no gluing."""
    _presheaf_on(site, f)
    injective_everywhere = True
    injectivity_witness = None
    gluing_witness = None
    for a in site.base.objects:
        for fam in site.cov[a]:
            u, equalizer = _family_report(f, site, a, fam)
            seen = {}
            for x, ux in u.items():
                METER.charge()
                if ux in seen:
                    injective_everywhere = False
                    if injectivity_witness is None:
                        injectivity_witness = {
                            "object": a, "family": fam,
                            "elements": (seen[ux], x), "restriction": ux,
                        }
                else:
                    seen[ux] = x
            if gluing_witness is None:
                for tup in equalizer:
                    if tup not in seen:
                        gluing_witness = {
                            "object": a, "family": fam, "compatible": tup,
                        }
                        break
    if not injective_everywhere:
        return SheafVerdict("neither", injectivity_witness)
    if gluing_witness is not None:
        return SheafVerdict("separated-only", gluing_witness)
    return SheafVerdict("sheaf", None)


def check_separated(f: SetFunctor, site: Site) -> Verdict:
    """Injectivity half of the sheaf condition only."""
    _presheaf_on(site, f)
    for a in site.base.objects:
        for fam in site.cov[a]:
            u, _eq = _family_report(f, site, a, fam)
            seen = {}
            for x, ux in u.items():
                METER.charge()
                if ux in seen:
                    return Verdict.failing(
                        "two-elements-with-equal-restrictions",
                        {"object": a, "family": fam, "elements": (seen[ux], x)},
                    )
                seen[ux] = x
    return Verdict.passing()


def check_continuous(psi, dom_site: Site, cod_site: Site) -> Verdict:
    """Left exact plus memberwise preservation of covering families."""
    if psi.dom != dom_site.base or psi.cod != cod_site.base:
        raise PreconditionFailed("functor endpoints must match the two sites")
    from .limits import lex_structure
    structure, missing = lex_structure(dom_site.base)
    if structure is None:
        raise NotLex("domain site base is not lex", instance=missing)
    lex = check_lex_functor(psi)
    if not lex.ok:
        return Verdict.failing("not-left-exact", lex.witness)
    cod_sets = {a: set(cod_site.cov[a]) for a in cod_site.base.objects}
    for a in dom_site.base.objects:
        for fam in dom_site.cov[a]:
            METER.charge()
            image = canon_set(psi.mmap[m] for m in fam)
            if image not in cod_sets[psi.omap[a]]:
                return Verdict.failing(
                    "covering-family-not-preserved",
                    {"object": a, "family": fam, "image": image},
                )
    return Verdict.passing()


# ---------------------------------------------------------- sheafification

def _refines(base: FinCategory, fine, coarse) -> bool:
    return all(any(_factors_through(base, h, f) for f in coarse) for h in fine)


def _restrict(f: SetFunctor, base: FinCategory, fam, values, fine):
    """Restrict a compatible family along a refinement; the value at each
    member of the finer family is independent of the chosen factorization
    because the site's pullbacks are verified universal."""
    out = []
    for h in fine:
        val = None
        for i, m in enumerate(fam):
            for s in base.hom(base.src[h], base.src[m]):
                if base.comp[(m, s)] == h:
                    val = f.action[s][values[i]]
                    break
            if val is not None:
                break
        if val is None:
            return None
        out.append(val)
    return tuple(out)


def plus_construction(f: SetFunctor, site: Site):
    """One application of the plus construction together with its unit.

    Elements at A are compatible families over coverings of A, identified
    when they agree on a common refining cover; the canonical representative
    is the least (family index, values) pair."""
    from .limits import _UnionFind

    _presheaf_on(site, f)
    base = site.base
    carrier = {}
    class_of = {}
    for a in base.objects:
        fams = site.cov[a]
        pairs = []
        for fi, fam in enumerate(fams):
            for values in compatible_families(f, site, a, fam):
                pairs.append((fi, values))
        uf = _UnionFind(pairs)
        restricted = {}
        for fi, fam in enumerate(fams):
            for fj, fine in enumerate(fams):
                if _refines(base, fine, fam):
                    for p in pairs:
                        if p[0] == fi:
                            METER.charge()
                            restricted[(p, fj)] = _restrict(
                                f, base, fam, p[1], fine
                            )
        for ix, p in enumerate(pairs):
            for q in pairs[ix + 1:]:
                for fj in range(len(fams)):
                    rp = restricted.get((p, fj))
                    rq = restricted.get((q, fj))
                    METER.charge()
                    if rp is not None and rp == rq:
                        uf.union(p, q)
                        break
        reps = {}
        for p in pairs:
            root = uf.find(p)
            if root not in reps or canon_key(p) < canon_key(reps[root]):
                reps[root] = p
        carrier[a] = tuple(sorted(reps.values(), key=canon_key))
        for p in pairs:
            class_of[(a, p)] = reps[uf.find(p)]

    action = {}
    for m in base.morphisms:
        b, a = base.src[m], base.tgt[m]      # restriction F+(a) -> F+(b)
        table = {}
        for rep in carrier[a]:
            images = set()
            for p in [q for q in class_of if q[0] == a and class_of[q] == rep]:
                fi, values = p[1]
                fam = site.cov[a][fi]
                if base.is_identity(m):
                    images.add(rep)
                    continue
                members = []
                vals = {}
                for i, fmem in enumerate(fam):
                    _apex, p1, p2 = _chosen_pullback(base, fmem, m, dict(site.pullbacks))
                    members.append(p2)
                    val = f.action[p1][values[i]]
                    if p2 in vals and vals[p2] != val:
                        raise PreconditionFailed(
                            "pullback restriction disagrees on a repeated member",
                            object=a, morphism=m,
                        )
                    vals[p2] = val
                pulled = canon_set(members)
                fj = site.cov[b].index(pulled)
                images.add(class_of[(b, (fj, tuple(vals[h] for h in pulled)))])
            if len(images) != 1:
                raise PreconditionFailed(
                    "plus-construction restriction not class-invariant",
                    object=a, morphism=m,
                )
            table[rep] = images.pop()
        action[m] = table
    plus = SetFunctor(f.dom, carrier, action)

    unit_components = {}
    for a in base.objects:
        identity_fam = (base.identity[a],)
        fi = site.cov[a].index(identity_fam)
        unit_components[a] = {
            x: class_of[(a, (fi, (x,)))] for x in f.carrier[a]
        }
    unit = NatTransform(f, plus, unit_components)
    return plus, unit


def _relabel_elements(sf: SetFunctor, prefix: str):
    """Rename carrier elements to short canonical ids; returns the renamed
    functor and the per-object renaming tables."""
    rename = {
        o: {x: f"{prefix}{i}" for i, x in enumerate(sf.carrier[o])}
        for o in sf.dom.objects
    }
    carrier = {o: tuple(rename[o][x] for x in sf.carrier[o]) for o in sf.dom.objects}
    action = {
        m: {rename[sf.dom.src[m]][x]: rename[sf.dom.tgt[m]][y]
            for x, y in sf.action[m].items()}
        for m in sf.dom.morphisms
    }
    return SetFunctor(sf.dom, carrier, action), rename


def sheafify(f: SetFunctor, site: Site):
    """Associated sheaf by the double plus construction; returns the sheaf
    and the unit natural transformation."""
    once, unit1 = plus_construction(f, site)
    twice, unit2 = plus_construction(once, site)
    sheaf, rename = _relabel_elements(twice, "s")
    components = {
        a: {x: rename[a][unit2.components[a][unit1.components[a][x]]]
            for x in f.carrier[a]}
        for a in site.base.objects
    }
    verdict = check_sheaf(sheaf, site)
    if verdict.kind != "sheaf":
        raise PreconditionFailed(
            "double plus construction did not return a sheaf",
            kind=verdict.kind,
        )
    return sheaf, NatTransform(f, sheaf, components)
