"""Exact scalar arithmetic: rationals and prime fields.

Scalars are plain Python values.  Over the rationals they are ``Fraction``
instances (or ``gmpy2.mpq`` when available, which is faster but prints the
same way); over a prime field they are ints kept canonical in ``[0, p)``.
The field objects supply arithmetic, parsing of ``"a/b"`` strings, and the
row kernels the elimination code runs hot.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError

try:  # pragma: no cover - exercised implicitly, depends on environment
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover
    _RAT = Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field of rational numbers with exact arithmetic."""

    kind = "Q"
    p = None

    def __init__(self):
        self.zero = _RAT(0)
        self.one = _RAT(1)

    def from_int(self, n: int):
        return _RAT(n)

    def parse(self, s: str):
        try:
            return _RAT(Fraction(str(s)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational literal {s!r}", literal=str(s)) from exc

    def fmt(self, x) -> str:
        return str(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return self.one / a

    def dot(self, row: dict, vec: dict):
        """Sum of row[c] * vec[c] over shared keys."""
        if len(vec) < len(row):
            row, vec = vec, row
        s = self.zero
        for c, a in row.items():
            b = vec.get(c)
            if b is not None:
                s = s + a * b
        return s

    def axpy_row(self, dst: dict, src: dict, c) -> None:
        """dst += c * src, deleting entries that cancel to zero."""
        get = dst.get
        for k, v in src.items():
            w = get(k, 0) + c * v
            if w:
                dst[k] = w
            elif k in dst:
                del dst[k]

    def axpy_row_indexed(self, dst: dict, src: dict, c, colindex, dst_id) -> None:
        """Like axpy_row but keeps a column -> row-ids index in sync."""
        get = dst.get
        for k, v in src.items():
            w = get(k, 0) + c * v
            if w:
                dst[k] = w
                colindex[k].add(dst_id)
            elif k in dst:
                del dst[k]
                colindex[k].discard(dst_id)

    def scale_row(self, row: dict, c) -> None:
        for k in row:
            row[k] = row[k] * c

    def to_json(self) -> dict:
        return {"kind": "Q"}

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field with p elements, p prime; scalars are ints in [0, p)."""

    kind = "Fp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime", p=p)
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n: int):
        return n % self.p

    def parse(self, s: str):
        frac = Fraction(str(s))
        den = frac.denominator % self.p
        if den == 0:
            raise ValidationError(
                f"denominator of {s!r} vanishes modulo {self.p}",
                literal=str(s),
                p=self.p,
            )
        return (frac.numerator * pow(den, -1, self.p)) % self.p

    def fmt(self, x) -> str:
        return str(x)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def dot(self, row: dict, vec: dict):
        if len(vec) < len(row):
            row, vec = vec, row
        s = 0
        for c, a in row.items():
            b = vec.get(c)
            if b is not None:
                s += a * b
        return s % self.p

    def axpy_row(self, dst: dict, src: dict, c) -> None:
        p = self.p
        get = dst.get
        for k, v in src.items():
            w = (get(k, 0) + c * v) % p
            if w:
                dst[k] = w
            elif k in dst:
                del dst[k]

    def axpy_row_indexed(self, dst: dict, src: dict, c, colindex, dst_id) -> None:
        p = self.p
        get = dst.get
        for k, v in src.items():
            w = (get(k, 0) + c * v) % p
            if w:
                dst[k] = w
                colindex[k].add(dst_id)
            elif k in dst:
                del dst[k]
                colindex[k].discard(dst_id)

    def scale_row(self, row: dict, c) -> None:
        p = self.p
        for k in row:
            row[k] = (row[k] * c) % p

    def to_json(self) -> dict:
        return {"kind": "Fp", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F{self.p}"


RATIONALS = Rationals()


def field_from_json(obj) -> Rationals | PrimeField:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("field spec must be an object with a 'kind' key", got=obj)
    kind = obj["kind"]
    if kind == "Q":
        return RATIONALS
    if kind == "Fp":
        if "p" not in obj:
            raise ValidationError("prime field spec needs 'p'", got=obj)
        return PrimeField(int(obj["p"]))
    raise ValidationError(f"unknown field kind {kind!r}", got=obj)


def field_to_json(field) -> dict:
    return field.to_json()


def parse_field_flag(flag: str) -> Rationals | PrimeField:
    """Parse a CLI field override: 'q' or 'fp:<prime>'."""
    low = flag.strip().lower()
    if low == "q":
        return RATIONALS
    if low.startswith("fp:"):
        try:
            p = int(low[3:])
        except ValueError as exc:
            raise ValidationError(f"bad field flag {flag!r}", flag=flag) from exc
        return PrimeField(p)
    raise ValidationError(f"bad field flag {flag!r} (expected 'q' or 'fp:<p>')", flag=flag)
