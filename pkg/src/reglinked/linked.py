"""Block specifications for partition classes cut out by forbidden regular
patterns, the derived coupled q-difference system, state/class
identification, and the conversion from classical finite linking data.

A specification consists of a block length m, an ordered alphabet I, an
injective map pi from symbols to partitions with parts <= m, and two
regular languages over I: forbidden patterns X (matched anywhere) and
forbidden prefixes X'.  A partition belongs to the class when its
multiplicity vector, cut into length-m blocks and read as an infinite
symbol sequence (padded with the trivial symbol), avoids both.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import yaml

from . import automata
from .automata import (
    Dfa, Empty, Regex, Star, Symbol, concat_all, dfa_from_regex, nullable,
    parse_regex, union_all,
)
from .partitions import (
    EMPTY, MultiplicityVector, Partition, from_multiplicities, oplus,
    phi_plus, to_multiplicities, weight_monomial,
)
from .qalgebra import BiPoly, QSeries, RationalFunction, RfMatrix


class SpecError(ValueError):
    pass


class BlockEncodingError(ValueError):
    """A multiplicity block is not in the image of pi."""


class MissingTrivialSymbolError(ValueError):
    """The alphabet has no symbol mapping to the empty partition, so
    infinite padded sequences do not exist and membership is undefined."""


@dataclass(frozen=True)
class LinkedSpec:
    """(m, I, pi, X, X') with pi injective into the partitions with parts <= m."""

    m: int
    alphabet: tuple[str, ...]
    pi: tuple[tuple[str, Partition], ...]
    forbidden_patterns: Regex
    forbidden_prefixes: Regex

    def __post_init__(self):
        if self.m < 1:
            raise SpecError("block length m must be >= 1")
        if not self.alphabet:
            raise SpecError("alphabet must be nonempty")
        if tuple(s for s, _ in self.pi) != self.alphabet:
            raise SpecError("pi must list exactly the alphabet symbols, in order")
        blocks = [p.parts for _, p in self.pi]
        if len(set(blocks)) != len(blocks):
            raise SpecError("pi must be injective")
        for _, p in self.pi:
            if p.parts and p.parts[0] > self.m:
                raise SpecError(f"pi image {p} has a part exceeding m = {self.m}")
        for name, r in (("forbidden_patterns", self.forbidden_patterns),
                        ("forbidden_prefixes", self.forbidden_prefixes)):
            for s in automata.regex_symbols(r):
                if s not in self.alphabet:
                    raise SpecError(f"{name} uses unknown symbol {s!r}")
            if nullable(r):
                raise SpecError(f"{name} must not contain the empty word")

    @property
    def pi_map(self):
        return dict(self.pi)

    @property
    def trivial_symbol(self):
        for s, p in self.pi:
            if p.is_empty():
                return s
        return None

    def block_of(self, symbol):
        """Length-m multiplicity block of pi(symbol)."""
        p = self.pi_map[symbol]
        f = to_multiplicities(p)
        return tuple(f[i] for i in range(1, self.m + 1))


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------

def parse_spec_text(text: str) -> LinkedSpec:
    """Parse the YAML spec format.

    Fields: ``m`` (int), ``alphabet`` (list), ``pi`` (symbol -> length-<=m
    multiplicity list), ``forbidden_patterns`` / ``forbidden_prefixes``
    (regex text; empty or missing means the empty language).  Purely
    numeric regex strings must be quoted, or YAML reads them as numbers.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise SpecError(f"malformed spec file: {e}") from e
    if not isinstance(doc, dict):
        raise SpecError("spec file must be a mapping")
    try:
        m = int(doc["m"])
        alphabet = tuple(str(s) for s in doc["alphabet"])
        pi_raw = {str(k): v for k, v in doc["pi"].items()}
    except (KeyError, TypeError, AttributeError) as e:
        raise SpecError(f"spec file missing field: {e}") from e
    pi = []
    for s in alphabet:
        if s not in pi_raw:
            raise SpecError(f"pi missing symbol {s!r}")
        mults = [int(v) for v in (pi_raw[s] or [])]
        if len(mults) > m:
            raise SpecError(f"pi[{s!r}] longer than the block length")
        pi.append((s, from_multiplicities(MultiplicityVector(mults))))

    def rx(field):
        text = doc.get(field) or ""
        text = str(text).strip()
        if not text:
            return Empty()
        try:
            return parse_regex(text, alphabet)
        except ValueError as e:
            raise SpecError(f"{field}: {e}") from e

    return LinkedSpec(m, alphabet, tuple(pi), rx("forbidden_patterns"),
                      rx("forbidden_prefixes"))


def load_spec(path) -> LinkedSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec_text(fh.read())


@lru_cache(maxsize=1)
def nandi_spec() -> LinkedSpec:
    """The shipped mod-14 block specification."""
    text = resources.files("reglinked.data").joinpath("nandi.spec").read_text("utf-8")
    return parse_spec_text(text)


def nandi_spec_path() -> str:
    return str(resources.files("reglinked.data").joinpath("nandi.spec"))


# ---------------------------------------------------------------------------
# block encoding
# ---------------------------------------------------------------------------

def encode(p: Partition, spec: LinkedSpec):
    """Cut the multiplicity vector into length-m blocks and name each block.

    Returns the symbol sequence with trailing trivial symbols trimmed;
    raises BlockEncodingError when some block is not in the image of pi.
    """
    f = to_multiplicities(p)
    lookup = {spec.block_of(s): s for s in spec.alphabet}
    n_blocks = -(-f.support_bound() // spec.m)
    word = []
    for b in range(n_blocks):
        block = tuple(f[spec.m * b + i] for i in range(1, spec.m + 1))
        sym = lookup.get(block)
        if sym is None:
            raise BlockEncodingError(f"block {block} at offset {b} not in the image of pi")
        word.append(sym)
    triv = spec.trivial_symbol
    while word and word[-1] == triv:
        word.pop()
    return tuple(word)


def decode(word, spec: LinkedSpec) -> Partition:
    """Inverse of encode on its image: assemble shifted blocks."""
    out = EMPTY
    for k, sym in enumerate(word):
        try:
            p = spec.pi_map[sym]
        except KeyError:
            raise SpecError(f"unknown symbol {sym!r}") from None
        out = oplus(out, phi_plus(p, spec.m * k))
    return out


# ---------------------------------------------------------------------------
# the forbidden-language machine and the derived system
# ---------------------------------------------------------------------------

def _sigma_star(spec):
    return Star(union_all([Symbol(s) for s in spec.alphabet]))


@lru_cache(maxsize=64)
def build_forbidden_dfa(spec: LinkedSpec) -> Dfa:
    """Minimal DFA for  I* X I*  union  X' I*  (canonical numbering).

    Its start state is never accepting because neither language contains
    the empty word.
    """
    istar = _sigma_star(spec)
    r = automata.Union(
        concat_all([istar, spec.forbidden_patterns, istar]),
        automata.Concat(spec.forbidden_prefixes, istar),
    )
    return dfa_from_regex(r, spec.alphabet)


@dataclass(frozen=True)
class QDifferenceSystem:
    """Coupled system F_v(x) = sum_u A[v][u] F_u(x q^m) over the non-accepting
    states; entries are polynomial weights sum_a x^len(pi_a) q^|pi_a|."""

    step: int
    labels: tuple[int, ...]
    matrix: RfMatrix
    start: int

    def row_of(self, label):
        return self.labels.index(label)


def derive_system(spec: LinkedSpec) -> QDifferenceSystem:
    dfa = build_forbidden_dfa(spec)
    labels = tuple(v for v in range(dfa.num_states) if v not in dfa.accept)
    col = {v: i for i, v in enumerate(labels)}
    weights = {s: weight_monomial(p) for s, p in spec.pi}
    rows = []
    for v in labels:
        row = [BiPoly() for _ in labels]
        for s in spec.alphabet:
            u = dfa.step(v, s)
            if u in dfa.accept:
                continue
            row[col[u]] = row[col[u]] + weights[s]
        rows.append([RationalFunction(e) for e in row])
    return QDifferenceSystem(spec.m, labels, RfMatrix(rows), dfa.start)


def state_for_class(spec: LinkedSpec, extra_prefixes: Regex):
    """The non-accepting state whose restarted language is
    I* X I*  union  L(extra_prefixes) I*, or None if no state matches."""
    istar = _sigma_star(spec)
    target = dfa_from_regex(
        automata.Union(
            concat_all([istar, spec.forbidden_patterns, istar]),
            automata.Concat(extra_prefixes, istar),
        ),
        spec.alphabet,
    )
    dfa = build_forbidden_dfa(spec)
    for v in range(dfa.num_states):
        if v in dfa.accept:
            continue
        if automata.equivalent(automata.restart(dfa, v), target):
            return v
    return None


# ---------------------------------------------------------------------------
# series solutions of the system
# ---------------------------------------------------------------------------

def _system_monomials(sys: QDifferenceSystem):
    """Matrix entries as term lists [(coef, deg_x, deg_q)]; entries must be
    polynomial by the system invariant."""
    mono = []
    for row in sys.matrix.entries:
        mrow = []
        for e in row:
            if not e.is_polynomial():
                raise ValueError("system entries must be polynomial")
            mrow.append([(c, i, j) for (i, j), c in e.num.terms.items()])
        mono.append(mrow)
    return mono


def _trivial_successors(mono):
    """Per state, the unique successor reached by a weight-1 transition."""
    n = len(mono)
    succ = [None] * n
    for v in range(n):
        for u in range(n):
            c00 = sum(c for c, i, j in mono[v][u] if i == 0 and j == 0)
            if c00 == 0:
                continue
            if c00 != 1 or succ[v] is not None:
                raise ValueError("system is not of automaton shape: "
                                 "multiple weight-1 transitions from one state")
            succ[v] = u
    return succ


def _empty_word_survives(succ):
    """survive[v] = 1 iff the all-trivial tail from v never dies."""
    n = len(succ)
    survive = [None] * n
    for v in range(n):
        path = []
        on_path = set()
        u = v
        while True:
            if survive[u] is not None:
                val = survive[u]
                break
            if u in on_path:
                val = 1  # entered a cycle of trivial moves
                break
            on_path.add(u)
            path.append(u)
            if succ[u] is None:
                val = 0
                break
            u = succ[u]
        for w in path:
            survive[w] = val
    return survive


def series_from_system(sys: QDifferenceSystem, state, order: int, x_value=1):
    """Coefficients of the generating function attached to one state.

    Fixed-point iteration of the system on bivariate series truncated at
    q^order: the x-degree-0 layer is seeded from the trivial-symbol tail
    (the empty partition belongs to the class iff that tail survives), and
    each iteration then determines one more q-order because the
    substitution x -> x q^m raises the q-order of every x-carrying
    monomial.  With x_value=1 the result is a QSeries; with
    x_value="symbolic" the list of x-coefficients, each a QSeries.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if x_value not in (1, "symbolic"):
        raise ValueError("x_value must be 1 or 'symbolic'")
    mono = _system_monomials(sys)
    succ = _trivial_successors(mono)
    survive = _empty_word_survives(succ)
    m = sys.step
    n = len(sys.labels)
    cur = [({(0, 0): 1} if survive[v] else {}) for v in range(n)]
    for _ in range(order + 1):
        new = [{} for _ in range(n)]
        for v in range(n):
            acc = new[v]
            for u in range(n):
                terms = mono[v][u]
                if not terms:
                    continue
                src = cur[u]
                for c, dx, dq in terms:
                    for (i, nq), val in src.items():
                        n2 = nq + m * i + dq
                        if n2 > order:
                            continue
                        key = (i + dx, n2)
                        acc[key] = acc.get(key, 0) + c * val
        cur = [{k: v for k, v in d.items() if v} for d in new]
    d = cur[sys.row_of(state)]
    if x_value == 1:
        out = [0] * (order + 1)
        for (_, nq), val in d.items():
            out[nq] += val
        return QSeries(out, order)
    top = max((i for i, _ in d), default=0)
    coeffs = []
    for i in range(top + 1):
        ql = [0] * (order + 1)
        for (a, nq), val in d.items():
            if a == i:
                ql[nq] = val
        coeffs.append(QSeries(ql, order))
    return coeffs


def member(p: Partition, spec: LinkedSpec, state=None) -> bool:
    """Decide membership of a partition in the class attached to a state.

    Runs the encoded word from the state through the forbidden-language
    machine, then follows the trivial symbol for |Q| further steps: the
    trivial trajectory becomes periodic within |Q| steps, so this finite
    check decides the infinite-tail condition.
    """
    dfa = build_forbidden_dfa(spec)
    triv = spec.trivial_symbol
    if triv is None:
        raise MissingTrivialSymbolError(
            "no symbol maps to the empty partition; padded sequences do not exist")
    v = dfa.start if state is None else state
    if v in dfa.accept:
        return False
    try:
        word = encode(p, spec)
    except BlockEncodingError:
        return False
    for sym in word:
        v = dfa.step(v, sym)
        if v in dfa.accept:
            return False
    for _ in range(dfa.num_states):
        v = dfa.step(v, triv)
        if v in dfa.accept:
            return False
    return True


# ---------------------------------------------------------------------------
# conversion from finite linking data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LpiData:
    """Classical finite linking data: blocks (the partitions with parts <= m),
    a linking map giving the blocks allowed after each block's span, and the
    span lengths."""

    m: int
    blocks: tuple[Partition, ...]
    links: tuple[tuple[int, ...], ...]   # indices into blocks
    spans: tuple[int, ...]

    def __post_init__(self):
        n = len(self.blocks)
        if n == 0:
            raise SpecError("empty block set")
        if len(set(b.parts for b in self.blocks)) != n:
            raise SpecError("blocks must be distinct")
        if len(self.links) != n or len(self.spans) != n:
            raise SpecError("links/spans must align with the block list")
        for link in self.links:
            if any(not 0 <= t < n for t in link):
                raise SpecError("link target out of range")
        if any(s < 1 for s in self.spans):
            raise SpecError("spans must be >= 1")
        if all(b.parts for b in self.blocks):
            raise SpecError("the empty partition must be one of the blocks")
        for b in self.blocks:
            if b.parts and b.parts[0] > self.m:
                raise SpecError("block has a part exceeding m")


def lpi_to_spec(lpi: LpiData) -> LinkedSpec:
    """Render finite linking data as a block specification.

    The forbidden patterns detect a violation at the earliest symbol that
    exhibits it: a non-trivial symbol inside a span, or a disallowed
    successor right after it.  This is language-equivalent on infinite
    sequences to forbidding every bad length-(span+1) window at once.
    """
    alphabet = tuple(str(i) for i in range(len(lpi.blocks)))
    pi = tuple(zip(alphabet, lpi.blocks))
    triv = next(s for s, b in pi if b.is_empty())
    nontrivial = [s for s in alphabet if s != triv]
    pieces = []
    for idx, sym in enumerate(alphabet):
        span = lpi.spans[idx]
        allowed = {alphabet[t] for t in lpi.links[idx]}
        for gap in range(span - 1):
            if nontrivial:
                pieces.append(concat_all(
                    [Symbol(sym)] + [Symbol(triv)] * gap
                    + [union_all([Symbol(s) for s in nontrivial])]))
        blocked = [s for s in alphabet if s not in allowed]
        if blocked:
            pieces.append(concat_all(
                [Symbol(sym)] + [Symbol(triv)] * (span - 1)
                + [union_all([Symbol(s) for s in blocked])]))
    x = union_all(pieces) if pieces else Empty()
    return LinkedSpec(lpi.m, alphabet, pi, x, Empty())
