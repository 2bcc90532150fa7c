"""Published bilinear counts used as reference rows by the ``table`` command."""

# Published counts of the increasing-degree construction, q = 2, 3, 4, n = 2..18.
DEG_COUNTS = {
    2: dict(zip(range(2, 19), [3, 6, 11, 15, 18, 26, 29, 37, 40, 48, 51, 60, 65, 70, 78, 81, 90])),
    3: dict(zip(range(2, 19), [3, 6, 9, 12, 16, 19, 24, 28, 31, 36, 40, 43, 48, 52, 55, 60, 64])),
    4: dict(zip(range(2, 19), [3, 5, 8, 11, 14, 17, 20, 23, 27, 30, 33, 37, 40, 43, 47, 50, 53])),
}

# Published counts using derivative evaluations at rational places; a missing
# n means no improvement over DEG_COUNTS was listed.
OPT_COUNTS = {
    2: {4: 10, 5: 14, 7: 22, 8: 28, 9: 32, 10: 38, 11: 42, 12: 48, 13: 52, 14: 58,
        15: 64, 16: 68, 17: 76, 18: 80},
    3: {6: 15, 8: 23, 9: 27, 11: 35, 12: 39, 14: 47, 15: 51, 17: 59, 18: 63},
    4: {},
}


def reference_count(q: int, n: int, strategy: str):
    """Reference value and whether it is an upper bound (opt) or exact (deg)."""
    if strategy == "deg":
        return DEG_COUNTS.get(q, {}).get(n), False
    if strategy == "opt":
        ref = OPT_COUNTS.get(q, {}).get(n)
        if ref is None:
            ref = DEG_COUNTS.get(q, {}).get(n)
        return ref, True
    return None, False
