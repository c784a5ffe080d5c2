"""Shipped fixture categories, spaces and shapes used by tests and docs."""
import itertools

from .category import CategoryPresentation, FinCategory, compile_presentation, table_category


def terminal_category() -> FinCategory:
    return table_category(("T",), (), {})


def arrow_category() -> FinCategory:
    return table_category(("0", "1"), (("a", "0", "1"),), {})


def discrete(n: int) -> FinCategory:
    return table_category(tuple(str(i) for i in range(n)), (), {})


def parallel_pair() -> FinCategory:
    return table_category(("0", "1"), (("f", "0", "1"), ("g", "0", "1")), {})


def span() -> FinCategory:
    return table_category(("m", "l", "r"), (("f", "m", "l"), ("g", "m", "r")), {})


def cospan() -> FinCategory:
    return table_category(("l", "r", "m"), (("f", "l", "m"), ("g", "r", "m")), {})


def chain(n: int) -> FinCategory:
    """The poset 0 <= 1 <= ... <= n-1 as a thin category."""
    objs = tuple(str(i) for i in range(n))
    arrows = []
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            arrows.append((f"le_{i}_{j}", str(i), str(j)))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                comps[(f"le_{j}_{k}", f"le_{i}_{j}")] = f"le_{i}_{k}"
    return table_category(objs, arrows, comps)


def poset_category(elements, leq) -> FinCategory:
    """Thin category of a finite poset; leq(a, b) decides a <= b."""
    objs = tuple(elements)
    arrows = [(f"le_{a}_{b}", a, b) for a in objs for b in objs
              if a != b and leq(a, b)]
    comps = {}
    for (n1, a, b) in arrows:
        for (n2, b2, c) in arrows:
            if b == b2:
                comps[(n2, n1)] = f"le_{a}_{c}"
    return table_category(objs, arrows, comps)


def diamond_lattice() -> FinCategory:
    """Poset 0 < a, b < 1 with a, b incomparable: top, bottom, binary meets."""
    order = {("0", "a"), ("0", "b"), ("0", "1"), ("a", "1"), ("b", "1")}
    return poset_category(("0", "a", "b", "1"), lambda x, y: (x, y) in order)


def idempotent_loop() -> FinCategory:
    return compile_presentation(CategoryPresentation(
        objects=("A",), arrows=(("e", "A", "A"),),
        relations=(( ("e", "e"), ("e",) ),),
    ))


def cyclic2() -> FinCategory:
    return compile_presentation(CategoryPresentation(
        objects=("A",), arrows=(("s", "A", "A"),),
        relations=(( ("s", "s"), ("id_A",) ),),
    ))


def coequalizer_shape() -> FinCategory:
    """Parallel pair plus a coequalizing arrow: h => j -> k with w.f = w.g."""
    return compile_presentation(CategoryPresentation(
        objects=("h", "j", "k"),
        arrows=(("f", "h", "j"), ("g", "h", "j"), ("w", "j", "k")),
        relations=(( ("w", "f"), ("w", "g") ),),
    ))


def finset(max_size: int = 3) -> FinCategory:
    """Full subcategory of Set on the sets {0..k-1} for k <= max_size,
    tabulated. Morphism f from S_m to S_n with images (i_0..i_{m-1}) is
    named f<m><n>_<digits>."""
    objs = tuple(f"S{k}" for k in range(max_size + 1))

    def name(m, n, images):
        suffix = "".join(str(i) for i in images)
        return f"f{m}{n}_{suffix}" if suffix else f"f{m}{n}"

    arrows = []
    table = {}
    for m in range(max_size + 1):
        for n in range(max_size + 1):
            for images in itertools.product(range(n), repeat=m):
                is_id = m == n and images == tuple(range(m))
                nm = name(m, n, images)
                table[(m, n, images)] = nm
                if not is_id:
                    arrows.append((nm, f"S{m}", f"S{n}"))

    ids = {m: f"id_S{m}" for m in range(max_size + 1)}
    comps = {}
    for (m, n, im1), nm1 in table.items():
        for (n2, p, im2), nm2 in table.items():
            if n2 != n:
                continue
            composite = tuple(im2[i] for i in im1)
            left = table[(m, p, composite)]
            key_g = nm2 if not (n == p and im2 == tuple(range(n))) else None
            key_f = nm1 if not (m == n and im1 == tuple(range(m))) else None
            if key_g and key_f:
                target = left if not (m == p and composite == tuple(range(m))) else ids[m]
                comps[(key_g, key_f)] = target
    return table_category(objs, arrows, comps)


CORPUS_BUILDERS = {
    "terminal": terminal_category,
    "arrow": arrow_category,
    "discrete2": lambda: discrete(2),
    "discrete3": lambda: discrete(3),
    "parallel_pair": parallel_pair,
    "span": span,
    "cospan": cospan,
    "chain3": lambda: chain(3),
    "diamond": diamond_lattice,
    "idempotent_loop": idempotent_loop,
    "cyclic2": cyclic2,
}

LEX_NAMES = ("terminal", "arrow", "chain3", "diamond")


def corpus() -> dict:
    return {name: build() for name, build in CORPUS_BUILDERS.items()}


def lex_corpus() -> dict:
    built = corpus()
    return {name: built[name] for name in LEX_NAMES}


def small_corpus(max_morphisms: int = 6) -> dict:
    return {name: c for name, c in corpus().items()
            if len(c.morphisms) <= max_morphisms}
