"""Shared golden data and independent oracles for the test suite."""

import pytest

from reglinked.qalgebra import BiPoly, Q as q, RationalFunction, RfMatrix, X as x

ONE = BiPoly.const(1)

# Transition table of the minimal 8-state forbidden-language DFA
# (rows = states 0..7, columns = symbols 0..4; accept state is 6).
GOLDEN_DFA_TABLE = (
    (0, 1, 2, 3, 4),
    (5, 1, 6, 6, 6),
    (7, 6, 6, 6, 6),
    (5, 1, 6, 3, 6),
    (7, 4, 6, 6, 6),
    (0, 1, 2, 3, 6),
    (6, 6, 6, 6, 6),
    (0, 1, 2, 6, 6),
)
GOLDEN_DFA_ACCEPT = frozenset({6})

# The 7x7 coupled-system matrix over the non-accepting states, in the
# order (0, 1, 2, 3, 4, 5, 7).
GOLDEN_SYSTEM_ROWS = (
    (1, x * q**2, x**2 * q**4, x * q, x**2 * q**2, 0, 0),
    (0, x * q**2, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 1),
    (0, x * q**2, 0, x * q, 0, 1, 0),
    (0, 0, 0, 0, x * q**2, 0, 1),
    (1, x * q**2, x**2 * q**4, x * q, 0, 0, 0),
    (1, x * q**2, x**2 * q**4, 0, 0, 0, 0),
)

# Coefficients p_0, p_2, ..., p_10 of the single equation for each class.
GOLDEN_EQUATION = {
    1: (ONE,
        -1 - x * (q**2 + q**3 + q**4),
        x * q**4 * (1 - x + x * q**3 + x * q**4 + x * q**5),
        x**2 * q**6 * (-1 + x * q**4 * (1 + q + q**2 - q**5)),
        x**3 * q**13 * (1 + q + q**2) * (1 - x * q**6),
        x**3 * q**17 * (1 - x * q**6) * (1 - x * q**8)),
    2: (ONE,
        -1 - x * (q + q**2 + q**4),
        x * q**4 * (1 + x * q + x * q**3),
        x**2 * q**10 * (-1 + x * q**4 + x * q**6),
        x**3 * q**15 * (1 + q**2 + q**3) * (1 - x * q**6),
        x**3 * q**19 * (1 - x * q**6) * (1 - x * q**8)),
    3: (ONE,
        -1 - x * (q**2 + q**4 + q**5),
        x * q**4 * (1 + x * q**5 + x * q**7),
        x**2 * q**10 * (-1 + x * q**4 + x * q**6),
        x**3 * q**18 * (1 + q + q**3) * (1 - x * q**6),
        x**3 * q**23 * (1 - x * q**6) * (1 - x * q**8)),
}

# Hand-picked component orderings for which the reduced matrices below
# are reached without any swap.
NO_SWAP_ORDER = {1: (7, 1, 2, 3, 4, 5, 0), 2: (3, 1, 2, 4, 7, 5, 0),
               3: (4, 7, 2, 3, 5, 1, 0)}

CLASS_STATE = {1: 7, 2: 3, 3: 4}
CLASS_PREFIXES = {1: "3U4", 2: "2U4U04", 3: "2U3U4U04U1*03"}


def _rf_rows(rows):
    return RfMatrix([[RationalFunction._coerce(e) for e in row] for row in rows])


GOLDEN_P5 = {
    1: _rf_rows([
        [0, 1, 0, 0, 0, 0, 0],
        [x**2, x + ONE, 1, 0, 0, 0, 0],
        [(x**2 - x**3) / q**2, x / q, RationalFunction(1, q), 1, 0, 0, 0],
        [-x**2 / q**3, (-x * q**2 + x**2) / q**4, (x - q**2) / q**4,
         (x - q**2) / q**3, 1, 0, 0],
        [-x**3 / q**7, 0, 0, 0, x / q**4, 0, 0],
        [0, 1, 0, q / (x - ONE), q**3 / (x - x**2), 0, 0],
        [0, 1, 0, q / (x - ONE), q**3 / (ONE - x), 0, 0],
    ]),
    2: _rf_rows([
        [x * q, 1, 0, 0, 0, 0, 0],
        [x * q, x + ONE, 1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, x**2 / q**4, x**2 / q**4, x / q**2, 1, 0, 0],
        [0, (x**2 * q**2 - x**3) / q**8, (x**2 * q**2 - x**3) / q**8, 0, 0, 0, 0],
        [x * q, 1, 1, 0, 0, 0, 0],
        [x * q, 1, 1, 1, q**2 / (x - ONE), 0, 0],
    ]),
    3: _rf_rows([
        [x * q**2, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [x**2 * q**2, x**2, 1, 1, 0, 0, 0],
        [0, 0, x / q**2, (x * q + x) / q**2, 1, 0, 0],
        [0, 0, (x * q**2 - x**2) / q**5, (x * q**2 - x**2) / q**5, 0, 0, 0],
        [0, 0, 0, 0, q / (x - x**2), 0, 0],
        [x**2 * q**2, 0, 1, 1, -q / (ONE - x), 0, 0],
    ]),
}


# ---------------------------------------------------------------------------
# independent brute-force oracles
# ---------------------------------------------------------------------------

def brute_partition_counts(order, predicate):
    """Counts of partitions of n <= order satisfying the predicate, done by
    plain exhaustive enumeration over part lists (independent of the
    library's enumerator)."""
    def gen(n, maxpart):
        if n == 0:
            yield ()
            return
        for k in range(min(n, maxpart), 0, -1):
            for rest in gen(n - k, k):
                yield (k,) + rest

    return [sum(1 for p in gen(n, n) if predicate(p)) for n in range(order + 1)]


def regex_match_words(node, word, memo=None):
    """Direct semantic matcher for the regex AST (tuple words), used as the
    oracle for automaton constructions."""
    from reglinked import automata as A

    if memo is None:
        memo = {}
    key = (id(node), word)
    if key in memo:
        return memo[key]
    if isinstance(node, A.Empty):
        out = False
    elif isinstance(node, A.Epsilon):
        out = word == ()
    elif isinstance(node, A.Symbol):
        out = word == (node.name,)
    elif isinstance(node, A.Union):
        out = (regex_match_words(node.left, word, memo)
               or regex_match_words(node.right, word, memo))
    elif isinstance(node, A.Concat):
        out = any(regex_match_words(node.left, word[:k], memo)
                  and regex_match_words(node.right, word[k:], memo)
                  for k in range(len(word) + 1))
    elif isinstance(node, A.Star):
        if word == ():
            out = True
        else:
            out = any(regex_match_words(node.inner, word[:k], memo)
                      and regex_match_words(node, word[k:], memo)
                      for k in range(1, len(word) + 1))
    else:
        raise TypeError(node)
    memo[key] = out
    return out


def all_words(alphabet, max_len):
    import itertools
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


@pytest.fixture(scope="session")
def nandi_system():
    from reglinked import linked
    return linked.derive_system(linked.nandi_spec())
