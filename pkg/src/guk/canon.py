"""Canonical total order used for every derived enumeration.

All sets the engine constructs (hom-sets, limit tuples, colimit classes,
natural transformations) are stored as tuples sorted by canon_key so that
reports and golden files are byte-stable.
"""


def canon_key(x):
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(canon_key(e) for e in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(canon_key(e) for e in x)))
    raise TypeError(f"no canonical order for {type(x).__name__}")


def canon_sorted(xs) -> tuple:
    return tuple(sorted(xs, key=canon_key))


def canon_set(xs) -> tuple:
    """Deduplicate and sort."""
    return canon_sorted(set(xs))
