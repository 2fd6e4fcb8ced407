"""Subspaces of F_q^d in canonical reduced row echelon form.

Two ``Subspace`` values are equal exactly when they span the same row space.
Over F_2 the heavy lifting runs on rows packed into Python ints (column 0 is
the most significant bit), which keeps integer order aligned with the
lexicographic order of the unpacked rows.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NonCanonical
from .field import FieldSpec, make_field

Row = tuple[int, ...]


class Subspace:
    __slots__ = ("field", "ambient_dim", "basis", "pivots", "_hash", "_words")

    def __init__(self, field: FieldSpec, ambient_dim: int, basis: tuple[Row, ...], pivots):
        # trusted constructor: basis must already be RREF
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)
        self._hash = None
        self._words = None

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def words(self) -> tuple[int, ...]:
        """Bit-packed rows (F_2 only)."""
        if self._words is None:
            self._words = tuple(_pack(r) for r in self.basis)
        return self._words

    def key(self) -> tuple[Row, ...]:
        return self.basis

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field.q == other.field.q
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __lt__(self, other: "Subspace") -> bool:
        return self.basis < other.basis

    def __le__(self, other: "Subspace") -> bool:
        return self.basis <= other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.q, self.ambient_dim, self.basis))
        return self._hash

    def __repr__(self):
        rows = " ".join("".join(map(str, r)) for r in self.basis) or "0"
        return f"Subspace(q={self.q}, d={self.ambient_dim}, [{rows}])"

    def contains_vector(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dim {self.ambient_dim}")
        f = self.field
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            if v[p]:
                v = f.axpy(v, v[p], row)
        return not any(v)

    def vectors(self):
        """Every vector of the subspace, in coefficient order."""
        f, d = self.field, self.ambient_dim
        for coeffs in product(range(f.q), repeat=self.dim):
            yield tuple(f.lincomb(coeffs, self.basis, d))

    def to_record(self) -> dict:
        return {
            "q": self.q,
            "ambient_dim": self.ambient_dim,
            "basis": [list(r) for r in self.basis],
        }


def _pack(row: Sequence[int]) -> int:
    w = 0
    for x in row:
        w = (w << 1) | x
    return w


def _unpack(word: int, d: int) -> Row:
    return tuple((word >> (d - 1 - j)) & 1 for j in range(d))


def _rref_words(words: Iterable[int]) -> list[int]:
    """RREF over F_2 on packed rows; returned rows sorted by descending value."""
    basis: list[int] = []
    for w in words:
        for b in basis:
            if w ^ b < w:
                w ^= b
        if not w:
            continue
        top = 1 << (w.bit_length() - 1)
        basis = [b ^ w if b & top else b for b in basis]
        basis.append(w)
        basis.sort(reverse=True)
    return basis


def rank_words(words: Iterable[int]) -> int:
    """Rank of packed F_2 rows (no reduction of earlier rows needed)."""
    basis: list[int] = []
    for w in words:
        for b in basis:
            if w ^ b < w:
                w ^= b
        if w:
            basis.append(w)
            basis.sort(reverse=True)
    return len(basis)


def _rref_generic(field: FieldSpec, rows: list[list[int]], d: int):
    rows = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(d):
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if rows[r][col] != 1:
            rows[r] = field.scale(rows[r], field.inv(rows[r][col]))
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                rows[i] = field.axpy(rows[i], rows[i][col], pr)
        pivots.append(col)
        r += 1
    return tuple(tuple(x) for x in rows[:r]), tuple(pivots)


def _from_words(field: FieldSpec, d: int, words: list[int]) -> Subspace:
    basis = tuple(_unpack(w, d) for w in words)
    pivots = tuple(d - w.bit_length() for w in words)
    s = Subspace(field, d, basis, pivots)
    s._words = tuple(words)
    return s


def canonicalize(rows: Sequence[Sequence[int]], field: FieldSpec | int, ambient_dim: int | None = None,
                 *, bitpacked: bool = True) -> Subspace:
    """Row space of ``rows`` in canonical RREF.

    ``ambient_dim`` is required only when ``rows`` is empty.  ``bitpacked``
    selects the F_2 fast path; it has no observable effect.
    """
    if isinstance(field, int):
        field = make_field(field)
    rows = [tuple(r) for r in rows]
    if rows:
        d = len(rows[0])
        if any(len(r) != d for r in rows):
            raise DimensionMismatch("rows of unequal length")
        if ambient_dim is not None and ambient_dim != d:
            raise DimensionMismatch(f"rows have length {d}, expected {ambient_dim}")
    elif ambient_dim is None:
        raise DimensionMismatch("ambient_dim is required for an empty row list")
    else:
        d = ambient_dim
    for r in rows:
        for x in r:
            if not 0 <= x < field.q:
                raise ValueError(f"{x} is not an element of F_{field.q}")
    if field.q == 2 and bitpacked:
        return _from_words(field, d, _rref_words(_pack(r) for r in rows))
    basis, pivots = _rref_generic(field, rows, d)
    return Subspace(field, d, basis, pivots)


def zero(field: FieldSpec | int, d: int) -> Subspace:
    if isinstance(field, int):
        field = make_field(field)
    return Subspace(field, d, (), ())


def full(field: FieldSpec | int, d: int) -> Subspace:
    if isinstance(field, int):
        field = make_field(field)
    basis = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    return Subspace(field, d, basis, range(d))


def _same_space(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim or a.field.q != b.field.q:
        raise DimensionMismatch(
            f"subspaces live in F_{a.q}^{a.ambient_dim} and F_{b.q}^{b.ambient_dim}"
        )


def span_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_space(a, b)
    if a.field.q == 2:
        return _from_words(a.field, a.ambient_dim, _rref_words(a.words + b.words))
    return canonicalize(a.basis + b.basis, a.field, a.ambient_dim)


def sum_dim(a: Subspace, b: Subspace) -> int:
    _same_space(a, b)
    if a.field.q == 2:
        return rank_words(a.words + b.words)
    return span_sum(a, b).dim


def intersection_dim(a: Subspace, b: Subspace) -> int:
    return a.dim + b.dim - sum_dim(a, b)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the Zassenhaus block matrix [[A, A], [B, 0]]."""
    _same_space(a, b)
    d, f = a.ambient_dim, a.field
    if not a.dim or not b.dim:
        return zero(f, d)
    if f.q == 2:
        words = [(w << d) | w for w in a.words] + [w << d for w in b.words]
        low = (1 << d) - 1
        return _from_words(f, d, [w & low for w in _rref_words(words) if not w >> d])
    rows = [r + r for r in a.basis] + [r + (0,) * d for r in b.basis]
    basis, pivots = _rref_generic(f, rows, 2 * d)
    return canonicalize([r[d:] for r, p in zip(basis, pivots) if p >= d], f, d)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subspace of a."""
    _same_space(a, b)
    if b.dim > a.dim:
        return False
    if a.field.q == 2:
        return rank_words(a.words + b.words) == a.dim
    return all(a.contains_vector(v) for v in b.basis)


def from_record(rec: dict, *, strict: bool = False) -> Subspace:
    """Inverse of ``Subspace.to_record``; strict mode rejects non-canonical bases."""
    try:
        q, d, rows = rec["q"], rec["ambient_dim"], rec["basis"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed subspace record: {rec!r}") from exc
    if not isinstance(q, int) or not isinstance(d, int) or not isinstance(rows, list):
        raise ValueError(f"malformed subspace record: {rec!r}")
    s = canonicalize(rows, q, d)
    if strict and [list(r) for r in s.basis] != [list(r) for r in rows]:
        raise NonCanonical(f"basis {rows!r} is not in reduced row echelon form")
    return s
