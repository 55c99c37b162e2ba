"""Sparse integer polynomials in weighted variables, truncated above a weight bound.

Monomials are packed into a single Python int: the total weight sits in the
high bits and each exponent gets an 8-bit field below it, first variable most
significant.  Multiplying monomials is then integer addition, and sorting the
packed keys gives graded-lexicographic order on (weight, exponent vector).
"""
from __future__ import annotations

from math import comb
from typing import Iterable, Iterator, Mapping

from .errors import UsageError

FIELD_BITS = 8
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_BOUND = FIELD_MASK


class VariableTable:
    """Ordered, immutable list of (name, weight) pairs."""

    __slots__ = ("names", "weights", "_index", "_shifts", "_units", "_wshift", "_hash")

    def __init__(self, entries: Iterable[tuple[str, int]] = ()):
        entries = tuple((str(n), int(w)) for n, w in entries)
        names = tuple(n for n, _ in entries)
        weights = tuple(w for _, w in entries)
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise UsageError(f"duplicate variable names {dup}")
        for n, w in entries:
            if w < 1:
                raise UsageError(f"variable {n!r} has weight {w}; weights must be >= 1")
        self.names = names
        self.weights = weights
        self._index = {n: i for i, n in enumerate(names)}
        count = len(names)
        self._wshift = FIELD_BITS * count
        self._shifts = tuple(FIELD_BITS * (count - 1 - i) for i in range(count))
        self._units = tuple(
            (w << self._wshift) | (1 << s) for w, s in zip(weights, self._shifts)
        )
        self._hash = hash(entries)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, VariableTable):
            return NotImplemented
        return self.names == other.names and self.weights == other.weights

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"VariableTable({inner})"

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"variable {name!r} is not in {self!r}") from None

    def weight_of(self, name: str) -> int:
        return self.weights[self.index(name)]

    def extend(self, entries: Iterable[tuple[str, int]]) -> "VariableTable":
        return VariableTable(tuple(zip(self.names, self.weights)) + tuple(entries))

    def is_prefix_of(self, other: "VariableTable") -> bool:
        k = len(self.names)
        return other.names[:k] == self.names and other.weights[:k] == self.weights

    def fresh_name(self, wanted: str) -> str:
        if wanted not in self._index:
            return wanted
        k = 2
        while f"{wanted}{k}" in self._index:
            k += 1
        return f"{wanted}{k}"

    # packed-monomial helpers

    def pack(self, exps: tuple[int, ...]) -> int:
        if len(exps) != len(self.names):
            raise UsageError(f"exponent vector {exps} has wrong length for {self!r}")
        key = 0
        for e, unit in zip(exps, self._units):
            if e < 0:
                raise UsageError(f"negative exponent in {exps}")
            key += e * unit
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & FIELD_MASK for s in self._shifts)

    def key_weight(self, key: int) -> int:
        return key >> self._wshift

    def unit(self, name: str) -> int:
        return self._units[self.index(name)]

    def shift(self, name: str) -> int:
        return self._shifts[self.index(name)]

    def weight_limit(self, bound: int) -> int:
        """Packed keys of weight <= bound are exactly those below this value."""
        return (bound + 1) << self._wshift


def _check_bound(bound: int) -> int:
    bound = int(bound)
    if bound < 0 or bound > MAX_BOUND:
        raise UsageError(f"bound {bound} outside 0..{MAX_BOUND}")
    return bound


class GradedPolynomial:
    """Immutable polynomial with integer coefficients, truncated above `bound`."""

    __slots__ = ("table", "bound", "_terms", "_sorted")

    def __init__(
        self,
        table: VariableTable,
        terms: Mapping[tuple[int, ...], int] | None = None,
        bound: int = 0,
    ):
        self.table = table
        self.bound = _check_bound(bound)
        packed: dict[int, int] = {}
        limit = table.weight_limit(self.bound)
        for exps, coeff in (terms or {}).items():
            coeff = int(coeff)
            if coeff == 0:
                continue
            key = table.pack(tuple(exps))
            if key >= limit:
                continue
            packed[key] = packed.get(key, 0) + coeff
        self._terms = {k: c for k, c in packed.items() if c}
        self._sorted = None

    @classmethod
    def _raw(cls, table: VariableTable, bound: int, terms: dict[int, int]) -> "GradedPolynomial":
        # terms must already be zero-free and within the bound
        obj = cls.__new__(cls)
        obj.table = table
        obj.bound = bound
        obj._terms = terms
        obj._sorted = None
        return obj

    # constructors

    @classmethod
    def zero(cls, table: VariableTable, bound: int) -> "GradedPolynomial":
        return cls._raw(table, _check_bound(bound), {})

    @classmethod
    def constant(cls, table: VariableTable, bound: int, value: int = 1) -> "GradedPolynomial":
        value = int(value)
        return cls._raw(table, _check_bound(bound), {0: value} if value else {})

    @classmethod
    def one(cls, table: VariableTable, bound: int) -> "GradedPolynomial":
        return cls.constant(table, bound, 1)

    @classmethod
    def var(cls, table: VariableTable, name: str, bound: int, power: int = 1) -> "GradedPolynomial":
        bound = _check_bound(bound)
        key = power * table.unit(name)
        if key >= table.weight_limit(bound):
            return cls._raw(table, bound, {})
        return cls._raw(table, bound, {key: 1})

    @classmethod
    def monomial(cls, table: VariableTable, exps: tuple[int, ...], bound: int, coeff: int = 1):
        return cls(table, {tuple(exps): coeff}, bound)

    # inspection

    def _items(self) -> list[tuple[int, int]]:
        if self._sorted is None:
            self._sorted = sorted(self._terms.items())
        return self._sorted

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """(exponent vector, coefficient) pairs in graded-lexicographic order."""
        unpack = self.table.unpack
        for key, coeff in self._items():
            yield unpack(key), coeff

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: tuple[int, ...]) -> int:
        return self._terms.get(self.table.pack(tuple(exps)), 0)

    def constant_term(self) -> int:
        return self._terms.get(0, 0)

    def weights(self) -> set[int]:
        kw = self.table.key_weight
        return {kw(k) for k in self._terms}

    def max_weight(self) -> int:
        return max(self.weights(), default=-1)

    def is_homogeneous(self, weight: int | None = None) -> bool:
        ws = self.weights()
        if not ws:
            return True
        return len(ws) == 1 and (weight is None or weight in ws)

    def homogeneous(self, weight: int) -> "GradedPolynomial":
        kw = self.table.key_weight
        return GradedPolynomial._raw(
            self.table, self.bound, {k: c for k, c in self._terms.items() if kw(k) == weight}
        )

    def components(self) -> dict[int, "GradedPolynomial"]:
        kw = self.table.key_weight
        parts: dict[int, dict[int, int]] = {}
        for k, c in self._terms.items():
            parts.setdefault(kw(k), {})[k] = c
        return {w: GradedPolynomial._raw(self.table, self.bound, t) for w, t in sorted(parts.items())}

    def degree_in(self, name: str) -> int:
        s = self.table.shift(name)
        return max(((k >> s) & FIELD_MASK for k in self._terms), default=-1)

    def split_by(self, name: str) -> dict[int, "GradedPolynomial"]:
        """Coefficients of each power of `name`, with that variable removed."""
        s = self.table.shift(name)
        unit = self.table.unit(name)
        parts: dict[int, dict[int, int]] = {}
        for k, c in self._terms.items():
            e = (k >> s) & FIELD_MASK
            parts.setdefault(e, {})[k - e * unit] = c
        return {e: GradedPolynomial._raw(self.table, self.bound, t) for e, t in sorted(parts.items())}

    def variables_used(self) -> set[str]:
        used = set()
        for exps, _ in self.items():
            used.update(n for n, e in zip(self.table.names, exps) if e)
        return used

    # arithmetic

    def _check(self, other: "GradedPolynomial") -> None:
        if not isinstance(other, GradedPolynomial):
            raise UsageError(f"cannot combine GradedPolynomial with {type(other).__name__}")
        if other.table != self.table:
            raise UsageError(f"variable tables differ: {self.table!r} vs {other.table!r}")
        if other.bound != self.bound:
            raise UsageError(f"bounds differ: {self.bound} vs {other.bound}")

    def _coerce(self, other) -> "GradedPolynomial":
        if isinstance(other, int):
            return GradedPolynomial.constant(self.table, self.bound, other)
        self._check(other)
        return other

    def __add__(self, other) -> "GradedPolynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return GradedPolynomial._raw(self.table, self.bound, out)

    __radd__ = __add__

    def __neg__(self) -> "GradedPolynomial":
        return GradedPolynomial._raw(self.table, self.bound, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "GradedPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GradedPolynomial":
        return self._coerce(other) - self

    def scale(self, factor: int) -> "GradedPolynomial":
        factor = int(factor)
        if factor == 0:
            return GradedPolynomial._raw(self.table, self.bound, {})
        return GradedPolynomial._raw(
            self.table, self.bound, {k: c * factor for k, c in self._terms.items()}
        )

    def __mul__(self, other) -> "GradedPolynomial":
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return GradedPolynomial._raw(
            self.table,
            self.bound,
            _mul_terms(self._items(), other._items(), self.table.weight_limit(self.bound)),
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "GradedPolynomial":
        if exponent < 0:
            raise UsageError("negative powers are not defined; use invert_unit_series")
        result = GradedPolynomial.one(self.table, self.bound)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def shift_by(self, name: str, power: int = 1) -> "GradedPolynomial":
        """Multiply by name**power without a general product."""
        delta = power * self.table.unit(name)
        limit = self.table.weight_limit(self.bound)
        return GradedPolynomial._raw(
            self.table,
            self.bound,
            {k + delta: c for k, c in self._terms.items() if k + delta < limit},
        )

    def below(self, weight: int) -> "GradedPolynomial":
        """Drop terms of weight above `weight`, keeping the bound."""
        limit = self.table.weight_limit(min(weight, self.bound)) if weight >= 0 else 0
        return GradedPolynomial._raw(
            self.table, self.bound, {k: c for k, c in self._terms.items() if k < limit}
        )

    def truncate(self, bound: int) -> "GradedPolynomial":
        bound = min(_check_bound(bound), self.bound)
        limit = self.table.weight_limit(bound)
        return GradedPolynomial._raw(
            self.table, bound, {k: c for k, c in self._terms.items() if k < limit}
        )

    def with_bound(self, bound: int) -> "GradedPolynomial":
        """Same terms under a different bound; terms above a smaller bound are dropped."""
        bound = _check_bound(bound)
        limit = self.table.weight_limit(bound)
        return GradedPolynomial._raw(
            self.table, bound, {k: c for k, c in self._terms.items() if k < limit}
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self.table == other.table and self.bound == other.bound and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.table, self.bound, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"GradedPolynomial({self}, bound={self.bound})"

    def __str__(self) -> str:
        return format_terms(self.items(), self.table)


def _mul_terms(a: list[tuple[int, int]], b: list[tuple[int, int]], limit: int) -> dict[int, int]:
    out: dict[int, int] = {}
    get = out.get
    for ka, ca in a:
        room = limit - ka
        if room <= 0:
            break
        for kb, cb in b:
            if kb >= room:
                break
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def format_monomial(exps: tuple[int, ...], table: VariableTable) -> str:
    parts = []
    for name, e in zip(table.names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_terms(items: Iterable[tuple[tuple[int, ...], int]], table: VariableTable) -> str:
    out = []
    for exps, coeff in items:
        mono = format_monomial(exps, table)
        mag = abs(coeff)
        if mono == "1":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if coeff > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(out) if out else "0"


# free functions named after the operations they perform


def add(p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
    return p + q


def mul(p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
    return p * q


def invert_unit_series(p: GradedPolynomial) -> GradedPolynomial:
    """Inverse of p in the truncated ring; the constant term must be +1 or -1."""
    unit = p.constant_term()
    if unit not in (1, -1):
        raise UsageError(f"constant term {unit} is not a unit in Z")
    comps = p.components()
    pieces = {w: c for w, c in comps.items() if w > 0}
    inverse: dict[int, GradedPolynomial] = {0: GradedPolynomial.constant(p.table, p.bound, unit)}
    for d in range(1, p.bound + 1):
        acc = GradedPolynomial.zero(p.table, p.bound)
        for k, piece in pieces.items():
            if k > d:
                break
            prev = inverse.get(d - k)
            if prev is not None and prev:
                acc = acc + piece * prev
        # unit * unit == 1, so dividing by the unit is multiplying by it
        inverse[d] = acc.scale(-unit)
    total: dict[int, int] = {}
    for part in inverse.values():
        total.update(part._terms)
    return GradedPolynomial._raw(p.table, p.bound, total)


def apply_map(
    p: GradedPolynomial,
    images: Mapping[str, GradedPolynomial],
    table: VariableTable | None = None,
    bound: int | None = None,
) -> GradedPolynomial:
    """Ring homomorphism sending each variable of p to its image."""
    targets = {(img.table, img.bound) for img in images.values()}
    if table is not None:
        if bound is None:
            raise UsageError("an explicit target table needs an explicit bound")
        targets.add((table, _check_bound(bound)))
    if len(targets) > 1:
        raise UsageError("images do not share one variable table and bound")
    if not targets:
        raise UsageError("apply_map needs at least one image or an explicit target table")
    t_table, t_bound = targets.pop()
    src = p.table
    for name, w in zip(src.names, src.weights):
        img = images.get(name)
        if img is None:
            continue
        if not img.is_homogeneous(w):
            raise UsageError(f"image of {name!r} is not homogeneous of weight {w}")
    power_cache: dict[tuple[int, int], GradedPolynomial] = {}

    def power(i: int, e: int) -> GradedPolynomial:
        key = (i, e)
        if key not in power_cache:
            power_cache[key] = images[src.names[i]] ** e
        return power_cache[key]

    result = GradedPolynomial.zero(t_table, t_bound)
    for exps, coeff in p.items():
        term = GradedPolynomial.constant(t_table, t_bound, coeff)
        for i, e in enumerate(exps):
            if not e:
                continue
            if src.names[i] not in images:
                raise UsageError(f"no image given for variable {src.names[i]!r}")
            term = term * power(i, e)
            if not term:
                break
        result = result + term
    return result


def retable(
    p: GradedPolynomial,
    table: VariableTable,
    bound: int | None = None,
    rename: Mapping[str, str] | None = None,
) -> GradedPolynomial:
    """Re-express p over another table by variable name, truncating at `bound`."""
    bound = p.bound if bound is None else _check_bound(bound)
    if table == p.table and not rename:
        return p.with_bound(bound)
    rename = rename or {}
    src = p.table
    units = []
    for name, w in zip(src.names, src.weights):
        target = rename.get(name, name)
        if target in table:
            if table.weight_of(target) != w:
                raise UsageError(f"variable {name!r} changes weight under retabling")
            units.append(table.unit(target))
        else:
            units.append(None)
    limit = table.weight_limit(bound)
    out: dict[int, int] = {}
    for key, coeff in p._terms.items():
        exps = src.unpack(key)
        new_key = 0
        for e, unit, name in zip(exps, units, src.names):
            if not e:
                continue
            if unit is None:
                raise UsageError(f"variable {name!r} has no counterpart in {table!r}")
            new_key += e * unit
        if new_key < limit:
            out[new_key] = out.get(new_key, 0) + coeff
    return GradedPolynomial._raw(table, bound, {k: c for k, c in out.items() if c})


def generalized_binomial(n: int, k: int) -> int:
    """binom(n, k) for any integer n and k >= 0."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(k - n - 1, k)


def monomials_of_weight(table: VariableTable, weight: int, indices: Iterable[int] | None = None):
    """Exponent vectors of the given total weight using only the listed variables."""
    idx = list(range(len(table))) if indices is None else list(indices)
    out: list[tuple[int, ...]] = []
    exps = [0] * len(table)

    def rec(pos: int, remaining: int) -> None:
        if pos == len(idx):
            if remaining == 0:
                out.append(tuple(exps))
            return
        i = idx[pos]
        w = table.weights[i]
        for e in range(remaining // w + 1):
            exps[i] = e
            rec(pos + 1, remaining - e * w)
        exps[i] = 0

    rec(0, weight)
    return sorted(out, key=table.pack)
