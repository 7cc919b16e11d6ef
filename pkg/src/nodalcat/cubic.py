"""The nodal cubic fourfold pipeline.

The blow-up of a nodal cubic fourfold at its node is simultaneously the
blow-up of P^4 along a degree-6 K3 surface S (the surface of lines
through the node).  Its Picard lattice is generated by h (hyperplane of
P^4) and H (hyperplane section of the cubic), with the exceptional
divisors expressed as

    D = 3h - H   (over the K3)        Q = H - h   (over the node),

the second identity forced by j^*O(H) = O_Q, j^*O(h) = O_Q(1) and the
conormal convention j^*O(-Q) = O_Q(1); it is machine-checked below.

This module replays the identification of the resolution kernel inside
the K3 side: the left adjoint of the comparison equivalence is the chain

    p_* o i^* o T_{O(-3h+D)[1]} o L_{O(3h-D)} o L_{O(4h-D)}

and applying it to j_*S is a sequence of four certified rewrite rules:

  R1  a mutation through a line bundle whose Hom into the object is an
      actually computed zero (evidence recorded in the trace);
  R2  a twist absorbed by the projection formula, j_*F tensor O(c) =
      j_*(F tensor j^*O(c));
  R3  base change i^* j_* = s_* t^* across the cartesian square of the
      two exceptional divisors;
  R4  the retraction p_* s_* = id of the K3 inside D.

Shifts are accumulated explicitly and reported, never discarded.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import mukai, nodal, quadric
from .errors import NodalcatError, RuleNotApplicable

# ---------------------------------------------------------------------------
# Picard classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PicClass:
    """The divisor class a h + b H on the blown-up cubic fourfold."""

    a: int
    b: int

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "PicClass") -> "PicClass":
        return PicClass(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "PicClass":
        return PicClass(-self.a, -self.b)

    def restrict_to_quadric(self) -> int:
        """j^*: h pulls back to O_Q(1), H pulls back trivially."""
        return self.a

    def render(self) -> str:
        def term(c, sym):
            if c == 0:
                return None
            if c == 1:
                return sym
            if c == -1:
                return f"-{sym}"
            return f"{c}{sym}"

        bits = [t for t in (term(self.a, "h"), term(self.b, "H")) if t]
        if not bits:
            return "0"
        out = bits[0]
        for t in bits[1:]:
            out += f"+{t}" if not t.startswith("-") else t
        return out

    def __str__(self) -> str:
        return self.render()


H_HYPERPLANE = PicClass(0, 1)
H_PROJECTION = PicClass(1, 0)
D_K3 = PicClass(3, -1)  # exceptional divisor over the K3 surface
Q_NODE = PicClass(-1, 1)  # exceptional divisor over the node


def pic_consistency() -> bool:
    """j^*O(Q) computed two ways: conormal convention vs Q = H - h."""
    return Q_NODE.restrict_to_quadric() == -1


# ---------------------------------------------------------------------------
# objects moved by the chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PushedSheaf:
    """j_* of a sheaf on the exceptional quadric, with an explicit shift."""

    sheaf: quadric.QuadricSheaf
    shift: int = 0

    def render(self) -> str:
        base = "j*" + self.sheaf.render()
        return base if self.shift == 0 else f"{base}[{self.shift}]"


@dataclass(frozen=True)
class DSideObj:
    """s_* t^* of a sheaf on the quadric, living on the divisor D."""

    sheaf: quadric.QuadricSheaf
    shift: int = 0

    def render(self) -> str:
        base = "s*t*" + self.sheaf.render()
        return base if self.shift == 0 else f"{base}[{self.shift}]"


@dataclass(frozen=True)
class K3Obj:
    """t^* of a sheaf on the quadric, an object of the K3 category."""

    sheaf: quadric.QuadricSheaf
    shift: int = 0

    def render(self) -> str:
        base = "t*" + self.sheaf.render()
        return base if self.shift == 0 else f"{base}[{self.shift}]"


# ---------------------------------------------------------------------------
# the functor chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistBy:
    cls: PicClass
    shift: int
    label: str


@dataclass(frozen=True)
class MutateLeft:
    cls: PicClass
    label: str


@dataclass(frozen=True)
class PushPullBaseChange:
    label: str = "p_*-side restriction i^*"


@dataclass(frozen=True)
class ContractRetraction:
    label: str = "projection p_* back to the K3"


FunctorStep = TwistBy | MutateLeft | PushPullBaseChange | ContractRetraction


def build_psi() -> tuple[FunctorStep, ...]:
    """The left adjoint chain, in composition order (rightmost acts first)."""
    return (
        ContractRetraction(),
        PushPullBaseChange(),
        TwistBy(D_K3 - PicClass(3, 0), 1, "T_{O(-3h+D)[1]}"),
        MutateLeft(PicClass(3, 0) - D_K3, "L_{O(3h-D)}"),
        MutateLeft(PicClass(4, 0) - D_K3, "L_{O(4h-D)}"),
    )


def _apply_step(step: FunctorStep, obj, trace: list) -> object:
    if isinstance(step, MutateLeft):
        if not isinstance(obj, PushedSheaf):
            raise RuleNotApplicable(f"{step.label} expects a pushforward object")
        a = step.cls.restrict_to_quadric()
        evidence = quadric.cohomology(3, obj.sheaf.twisted(-a))
        if not evidence.is_zero:
            raise RuleNotApplicable(
                f"{step.label}: mutation is non-trivial, Hom = {evidence.render()}"
            )
        trace.append(
            {
                "step": step.label,
                "rule": "R1",
                "citation": (
                    f"Hom(O({step.cls}), {obj.render()}) restricts along j to "
                    f"H^*(Q, {obj.sheaf.twisted(-a).render()}) = 0, so the left "
                    "mutation leaves the object unchanged"
                ),
                "hom_evidence": evidence.to_json(),
                "result": obj.render(),
            }
        )
        return obj
    if isinstance(step, TwistBy):
        if not isinstance(obj, PushedSheaf):
            raise RuleNotApplicable(f"{step.label} expects a pushforward object")
        a = step.cls.restrict_to_quadric()
        out = PushedSheaf(obj.sheaf.twisted(a), obj.shift + step.shift)
        trace.append(
            {
                "step": step.label,
                "rule": "R2",
                "citation": (
                    f"projection formula: j_*F tensor O({step.cls}) = "
                    f"j_*(F({a})); the shift [{step.shift}] is carried along"
                ),
                "hom_evidence": None,
                "result": out.render(),
            }
        )
        return out
    if isinstance(step, PushPullBaseChange):
        if not isinstance(obj, PushedSheaf):
            raise RuleNotApplicable("base change expects a pushforward object")
        out = DSideObj(obj.sheaf, obj.shift)
        trace.append(
            {
                "step": "i^*",
                "rule": "R3",
                "citation": (
                    "base change across the cartesian square of the two "
                    "exceptional divisors: i^* j_* = s_* t^*"
                ),
                "hom_evidence": None,
                "result": out.render(),
            }
        )
        return out
    if isinstance(step, ContractRetraction):
        if not isinstance(obj, DSideObj):
            raise RuleNotApplicable("the retraction expects an object on D")
        out = K3Obj(obj.sheaf, obj.shift)
        trace.append(
            {
                "step": "p_*",
                "rule": "R4",
                "citation": "the K3 is a retract of D: p_* s_* = id",
                "hom_evidence": None,
                "result": out.render(),
            }
        )
        return out
    raise RuleNotApplicable(f"unknown step {step!r}")


def apply_chain(chain: tuple[FunctorStep, ...], obj) -> tuple[object, list[dict]]:
    """Apply a functor chain right-to-left, returning object and trace."""
    trace: list[dict] = []
    for step in reversed(chain):
        obj = _apply_step(step, obj, trace)
    return obj, trace


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify_cubic() -> dict:
    """Membership, chain replay, and lattice certification, as a report."""
    items: list[dict] = []

    def add(id: str, citation: str, expected: str, compute) -> None:
        try:
            got, ok = compute()
        except NodalcatError as exc:
            got, ok = f"error: {exc}", False
        items.append(
            {"id": id, "citation": citation, "expected": expected, "got": str(got), "pass": ok}
        )

    def membership():
        bad = []
        spinor = quadric.QuadricSheaf(quadric.SPINOR, 0)
        for k in range(3):
            restricted = PicClass(0, k).restrict_to_quadric()
            value = quadric.cohomology(3, spinor.twisted(-restricted))
            if not value.is_zero:
                bad.append(f"Hom(O({k}H), j*S) = {value.render()}")
        for k in (-1, -2):
            value = nodal.hom_push(3, spinor, quadric.QuadricSheaf(quadric.LINE, k))
            if not value.is_zero:
                bad.append(f"Hom(j*S, j*O({k})) = {value.render()}")
        return ("all zero" if not bad else "; ".join(bad), not bad)

    add(
        "membership",
        "j*S lies in the residual component: O(kH) pulls back trivially to the "
        "exceptional quadric so Hom(O(kH), j*S) = H^*(S) = 0, and the pushed "
        "line bundles of the orthogonal collection receive no Homs from j*S",
        "all zero",
        membership,
    )

    chain = build_psi()
    result, trace = apply_chain(chain, PushedSheaf(quadric.QuadricSheaf(quadric.SPINOR, 0)))

    def replay():
        ok = isinstance(result, K3Obj) and result.sheaf == quadric.QuadricSheaf(quadric.SPINOR, 0)
        return f"{result.render()} (accumulated shift [{result.shift}])", ok

    add(
        "kernel-image",
        "the adjoint chain carries j*S to the restriction of the spinor bundle "
        "to the K3 surface; the accumulated shift is reported alongside",
        "t*S up to shift",
        replay,
    )

    def lattice():
        v = mukai.restrict_to_k3(mukai.ch_spinor_odd(3))
        pairing = mukai.mukai_pairing(v, v)
        chi = mukai.chi_k3(v, v)
        return (
            f"v = {v.render()}, <v,v> = {pairing}, chi = {chi}",
            pairing == -2 and chi == 2,
        )

    add(
        "mukai-numerics",
        "the Mukai self-pairing of the restricted spinor bundle is -2 "
        "(numerically 2-spherical) with Euler pairing 2",
        "<v,v> = -2, chi = 2",
        lattice,
    )

    return {
        "items": items,
        "all_pass": all(item["pass"] for item in items),
        "trace": trace,
    }
