"""Graded dimension bookkeeping.

Every Hom and cohomology computation in this package returns a
:class:`GradedDim`: a finitely supported map from cohomological degree to
multiplicity.  The convention, fixed once for the whole engine, is that
``C[-a]`` denotes one dimension in degree ``a``.  The bracket acts by

    shift(g, m)(k) = g(k + m)

so that ``Hom^j(A[m], B) = Hom^{j-m}(A, B)`` and
``Hom^j(A, B[m]) = Hom^{j+m}(A, B)``.  Multiplicities are dimensions of
vector spaces: strictly positive where stored, no formal differences.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GradedDim:
    """A finite formal sum of shifted copies of the ground field C.

    ``entries`` is a sorted tuple of (degree, multiplicity) pairs with all
    multiplicities > 0; absent degrees mean zero.
    """

    entries: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_dict(d: dict[int, int]) -> "GradedDim":
        items = tuple(sorted((k, v) for k, v in d.items() if v != 0))
        for _, v in items:
            if v < 0:
                raise ValueError("multiplicities must be nonnegative")
        return GradedDim(items)

    @staticmethod
    def zero() -> "GradedDim":
        return _ZERO

    @staticmethod
    def point(degree: int = 0, mult: int = 1) -> "GradedDim":
        """The graded dimension of C^mult placed in the given degree."""
        if mult == 0:
            return _ZERO
        return GradedDim(((degree, mult),))

    def dim(self, degree: int) -> int:
        for k, v in self.entries:
            if k == degree:
                return v
        return 0

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    def total(self) -> int:
        return sum(v for _, v in self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __add__(self, other: "GradedDim") -> "GradedDim":
        d = dict(self.entries)
        for k, v in other.entries:
            d[k] = d.get(k, 0) + v
        return GradedDim.from_dict(d)

    def scale(self, r: int) -> "GradedDim":
        if r < 0:
            raise ValueError("multiplicities must stay nonnegative")
        if r == 0:
            return _ZERO
        return GradedDim(tuple((k, r * v) for k, v in self.entries))

    def shift(self, m: int) -> "GradedDim":
        # entry at degree a moves to degree a - m
        if m == 0:
            return self
        return GradedDim(tuple((k - m, v) for k, v in self.entries))

    def dual(self) -> "GradedDim":
        return GradedDim(tuple(sorted((-k, v) for k, v in self.entries)))

    def euler(self) -> int:
        return sum(v if k % 2 == 0 else -v for k, v in self.entries)

    def tensor(self, other: "GradedDim") -> "GradedDim":
        """Graded tensor product (convolution of dimension vectors)."""
        d: dict[int, int] = {}
        for k1, v1 in self.entries:
            for k2, v2 in other.entries:
                d[k1 + k2] = d.get(k1 + k2, 0) + v1 * v2
        return GradedDim.from_dict(d)

    def render(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for k, v in self.entries:
            s = "C" if v == 1 else f"C^{v}"
            if k != 0:
                s += f"[{-k}]"
            parts.append(s)
        return " + ".join(parts)

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self.entries}

    @staticmethod
    def from_json(d: dict[str, int]) -> "GradedDim":
        return GradedDim.from_dict({int(k): v for k, v in d.items()})

    def __str__(self) -> str:
        return self.render()


_ZERO = GradedDim(())


def shift(g: GradedDim, m: int) -> GradedDim:
    """Apply the bracket [m] to a graded dimension vector."""
    return g.shift(m)


def dual(g: GradedDim) -> GradedDim:
    """Graded linear dual: negate all degrees."""
    return g.dual()


def euler(g: GradedDim) -> int:
    """Alternating sum of dimensions."""
    return g.euler()
