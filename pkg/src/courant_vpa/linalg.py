"""Exact rational linear algebra over named finite bases.

Everything downstream (algebra multiplications, brackets, pairings,
derivations) is stored as structure constants against the bases defined
here, so equality of canonical sparse forms is equality of the
mathematical objects.  All arithmetic is over Q via ``fractions.Fraction``;
no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class SpaceMismatch(ValueError):
    """Raised when vectors or maps are combined across different spaces."""


def scalar_from_str(text: str) -> Scalar:
    """Parse ``p`` or ``p/q`` into an exact rational.

    Raises ValueError on malformed input or a zero denominator.
    """
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        d = int(den)
        if d == 0:
            raise ValueError("zero denominator in %r" % text)
        return Fraction(int(num), d)
    return Fraction(int(text))


def scalar_to_str(value: Scalar) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return "%d/%d" % (value.numerator, value.denominator)


class BasedSpace:
    """A finite-dimensional Q-vector space with an ordered, named basis."""

    __slots__ = ("name", "basis", "_index")

    def __init__(self, name: str, basis: Iterable[str]):
        self.name = name
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate basis labels in space %r" % name)
        self._index = {label: i for i, label in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError("no basis label %r in space %r" % (label, self.name)) from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BasedSpace)
            and self.name == other.name
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.name, self.basis))

    def __repr__(self) -> str:
        return "BasedSpace(%r, dim=%d)" % (self.name, self.dim)

    def zero(self) -> "Vector":
        return Vector(self, {})

    def unit_vector(self, label: str) -> "Vector":
        return Vector(self, {self.index(label): ONE})

    def vector(self, coeffs: Mapping[str, object]) -> "Vector":
        """Vector from a {label: coefficient} mapping."""
        return Vector(self, {self.index(l): Fraction(c) for l, c in coeffs.items()})

    def basis_vectors(self) -> list["Vector"]:
        return [self.unit_vector(l) for l in self.basis]


class Vector:
    """Sparse vector in a BasedSpace; canonical zero-free sorted form.

    Immutable after construction, so structural equality is mathematical
    equality and instances can be shared freely and hashed.
    """

    __slots__ = ("space", "items")

    def __init__(self, space: BasedSpace, coeffs: Mapping[int, object]):
        items = []
        dim = space.dim
        for i in sorted(coeffs):
            c = coeffs[i]
            if type(c) is not Fraction:
                c = Fraction(c)
            if c == 0:
                continue
            if not 0 <= i < dim:
                raise IndexError("index %d out of range for space %r" % (i, space.name))
            items.append((i, c))
        self.space = space
        self.items = tuple(items)

    def __getitem__(self, i: int) -> Scalar:
        for j, c in self.items:
            if j == i:
                return c
        return ZERO

    def is_zero(self) -> bool:
        return not self.items

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vector)
            and self.space == other.space
            and self.items == other.items
        )

    def __hash__(self) -> int:
        return hash((self.space, self.items))

    def __add__(self, other: "Vector") -> "Vector":
        if self.space != other.space:
            raise SpaceMismatch(
                "cannot add vectors from %r and %r" % (self.space.name, other.space.name)
            )
        coeffs = dict(self.items)
        for i, c in other.items:
            coeffs[i] = coeffs.get(i, ZERO) + c
        return Vector(self.space, coeffs)

    def __sub__(self, other: "Vector") -> "Vector":
        return self + other.scale(Fraction(-1))

    def __neg__(self) -> "Vector":
        return self.scale(Fraction(-1))

    def scale(self, factor) -> "Vector":
        f = Fraction(factor)
        if f == 0:
            return Vector(self.space, {})
        return Vector(self.space, {i: c * f for i, c in self.items})

    def __repr__(self) -> str:
        return "Vector(%s: %s)" % (self.space.name, format_vector(self))


def format_vector(v: Vector) -> str:
    """Render a vector as e.g. ``2*E - 1/2*H``; the zero vector as ``0``."""
    if v.is_zero():
        return "0"
    parts = []
    for i, c in v.items:
        label = v.space.basis[i]
        if c == 1:
            term = label
        elif c == -1:
            term = "-" + label
        else:
            term = "%s*%s" % (scalar_to_str(c), label)
        if parts and not term.startswith("-"):
            parts.append("+ " + term)
        elif parts:
            parts.append("- " + term[1:])
        else:
            parts.append(term)
    return " ".join(parts)


def vec_combine(terms: Iterable[tuple[object, Vector]]) -> Vector:
    """Exact linear combination sum(c * v) of vectors in one space."""
    terms = list(terms)
    if not terms:
        raise ValueError("vec_combine needs at least one term")
    space = terms[0][1].space
    coeffs: dict[int, Scalar] = {}
    for c, v in terms:
        if v.space != space:
            raise SpaceMismatch(
                "vec_combine across %r and %r" % (space.name, v.space.name)
            )
        f = Fraction(c)
        for i, w in v.items:
            coeffs[i] = coeffs.get(i, ZERO) + f * w
    return Vector(space, coeffs)


class LinearMap:
    """Linear map given by its columns on the domain basis."""

    __slots__ = ("domain", "codomain", "columns")

    def __init__(self, domain: BasedSpace, codomain: BasedSpace, columns: Iterable[Vector]):
        cols = tuple(columns)
        if len(cols) != domain.dim:
            raise ValueError(
                "map needs %d columns, got %d" % (domain.dim, len(cols))
            )
        for col in cols:
            if col.space != codomain:
                raise SpaceMismatch("column not in codomain %r" % codomain.name)
        self.domain = domain
        self.codomain = codomain
        self.columns = cols

    @classmethod
    def zero(cls, domain: BasedSpace, codomain: BasedSpace) -> "LinearMap":
        return cls(domain, codomain, [codomain.zero()] * domain.dim)

    @classmethod
    def identity(cls, space: BasedSpace) -> "LinearMap":
        return cls(space, space, space.basis_vectors())

    @classmethod
    def from_entries(
        cls,
        domain: BasedSpace,
        codomain: BasedSpace,
        entries: Mapping[str, Mapping[str, object]],
    ) -> "LinearMap":
        """Columns from {domain_label: {codomain_label: coeff}}; missing -> 0."""
        cols = []
        for label in domain.basis:
            cols.append(codomain.vector(entries.get(label, {})))
        return cls(domain, codomain, cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.columns == other.columns
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.columns))

    def __repr__(self) -> str:
        return "LinearMap(%s -> %s)" % (self.domain.name, self.codomain.name)


def map_apply(m: LinearMap, v: Vector) -> Vector:
    if v.space != m.domain:
        raise SpaceMismatch(
            "map_apply: vector in %r, domain is %r" % (v.space.name, m.domain.name)
        )
    out: dict[int, Scalar] = {}
    for i, c in v.items:
        for j, w in m.columns[i].items:
            out[j] = out.get(j, ZERO) + c * w
    return Vector(m.codomain, out)


class BilinearMap:
    """Bilinear map by structure constants: a full table over basis pairs.

    The symmetric / antisymmetric flags are assertion-only metadata: when
    set they are validated once at construction.  Axiom checkers never rely
    on them and re-verify symmetry explicitly, so deliberately broken tables
    can be built with the flags off.
    """

    __slots__ = ("left", "right", "codomain", "table", "symmetric", "antisymmetric")

    def __init__(
        self,
        left: BasedSpace,
        right: BasedSpace,
        codomain: BasedSpace,
        table: Iterable[Iterable[Vector]],
        symmetric: bool = False,
        antisymmetric: bool = False,
    ):
        rows = tuple(tuple(row) for row in table)
        if len(rows) != left.dim or any(len(r) != right.dim for r in rows):
            raise ValueError("structure-constant table has wrong shape")
        for row in rows:
            for v in row:
                if v.space != codomain:
                    raise SpaceMismatch("table entry not in codomain %r" % codomain.name)
        if (symmetric or antisymmetric) and left != right:
            raise ValueError("symmetry flags need matching left/right spaces")
        if symmetric:
            for i in range(left.dim):
                for j in range(right.dim):
                    if rows[i][j] != rows[j][i]:
                        raise ValueError(
                            "symmetric flag set but table(%s,%s) != table(%s,%s)"
                            % (left.basis[i], right.basis[j], right.basis[j], left.basis[i])
                        )
        if antisymmetric:
            for i in range(left.dim):
                for j in range(right.dim):
                    if rows[i][j] != -rows[j][i]:
                        raise ValueError("antisymmetric flag set but table is not")
        self.left = left
        self.right = right
        self.codomain = codomain
        self.table = rows
        self.symmetric = symmetric
        self.antisymmetric = antisymmetric

    @classmethod
    def zero(cls, left: BasedSpace, right: BasedSpace, codomain: BasedSpace) -> "BilinearMap":
        z = codomain.zero()
        return cls(left, right, codomain, [[z] * right.dim for _ in range(left.dim)])

    @classmethod
    def from_entries(
        cls,
        left: BasedSpace,
        right: BasedSpace,
        codomain: BasedSpace,
        entries: Mapping[tuple[str, str], Mapping[str, object]],
        symmetric: bool = False,
        antisymmetric: bool = False,
    ) -> "BilinearMap":
        """Table from {(left_label, right_label): {codomain_label: coeff}}."""
        rows = []
        for l in left.basis:
            row = []
            for r in right.basis:
                row.append(codomain.vector(entries.get((l, r), {})))
            rows.append(row)
        return cls(left, right, codomain, rows, symmetric=symmetric, antisymmetric=antisymmetric)

    def entry(self, i: int, j: int) -> Vector:
        return self.table[i][j]

    def __eq__(self, other) -> bool:
        """Equality of the underlying tables; flags are metadata only."""
        return (
            isinstance(other, BilinearMap)
            and self.left == other.left
            and self.right == other.right
            and self.codomain == other.codomain
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.left, self.right, self.codomain, self.table))

    def __repr__(self) -> str:
        return "BilinearMap(%s x %s -> %s)" % (
            self.left.name,
            self.right.name,
            self.codomain.name,
        )


def bilin_apply(b: BilinearMap, u: Vector, v: Vector) -> Vector:
    if u.space != b.left:
        raise SpaceMismatch(
            "bilin_apply: left vector in %r, expected %r" % (u.space.name, b.left.name)
        )
    if v.space != b.right:
        raise SpaceMismatch(
            "bilin_apply: right vector in %r, expected %r" % (v.space.name, b.right.name)
        )
    out: dict[int, Scalar] = {}
    for i, c in u.items:
        row = b.table[i]
        for j, d in v.items:
            for k, w in row[j].items:
                out[k] = out.get(k, ZERO) + c * d * w
    return Vector(b.codomain, out)


def rank(vectors: Iterable[Vector]) -> int:
    """Rank of a family of vectors, by exact Gaussian elimination."""
    rows = [dict(v.items) for v in vectors if not v.is_zero()]
    r = 0
    pivots: list[tuple[int, dict[int, Scalar]]] = []
    for row in rows:
        for piv, prow in pivots:
            c = row.get(piv)
            if c:
                f = c / prow[piv]
                for j, w in prow.items():
                    nv = row.get(j, ZERO) - f * w
                    if nv == 0:
                        row.pop(j, None)
                    else:
                        row[j] = nv
        if row:
            piv = min(row)
            pivots.append((piv, row))
            r += 1
    return r


def solve_linear(rows: list[list[Scalar]], rhs: list[Scalar]) -> list[Scalar] | None:
    """One exact solution of rows * x = rhs, or None if inconsistent.

    Free variables are set to 0.  Dense elimination; fine at desk scale.
    """
    m = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(rows, rhs)]
    n_rows = len(m)
    n_cols = len(rows[0]) if rows else 0
    piv_cols = []
    pr = 0
    for pc in range(n_cols):
        pivot = None
        for r in range(pr, n_rows):
            if m[r][pc] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[pr], m[pivot] = m[pivot], m[pr]
        f = m[pr][pc]
        m[pr] = [x / f for x in m[pr]]
        for r in range(n_rows):
            if r != pr and m[r][pc] != 0:
                g = m[r][pc]
                m[r] = [x - g * y for x, y in zip(m[r], m[pr])]
        piv_cols.append(pc)
        pr += 1
        if pr == n_rows:
            break
    for r in range(pr, n_rows):
        if m[r][n_cols] != 0:
            return None
    sol = [ZERO] * n_cols
    for r, pc in enumerate(piv_cols):
        sol[pc] = m[r][n_cols]
    return sol
