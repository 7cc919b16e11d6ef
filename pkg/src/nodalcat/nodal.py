"""Blow-up contexts for varieties with one nodal point.

For a d-dimensional variety with a single node, the blow-up has a smooth
quadric Q of dimension n = d - 1 as exceptional divisor, with the conormal
convention O_Q(1) = j^* O(-Q).  This module builds the formal context of
pushforward sheaves j_*F, computes their graded Homs by splicing the long
exact sequence of the restriction triangle

    j^* j_* F -> F -> F(1)[2]

out of quadric-level Homs (`hom_push`), produces the kernel generator of
the categorical resolution by actually running the mutation chain, and
packages the whole dimension-by-dimension verification as a structured
report.

Ambient Serre data: the blow-up is (n+1)-dimensional with
j^* omega = O_Q(1-n), so the pair-Serre functor sends j_*F to
j_*F(1-n)[n+1]; the relative dualizing twist sends j_*F to j_*F(1-n).
Graded Homs of pushforwards depend only on the twist difference (twisting
by the O(Q)-powers is an equivalence), which is how the finite roster of
advertised generators coexists with Serre images at arbitrary twists.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache

from . import formalcat, quadric
from .errors import IndeterminateHom, NodalcatError, UnknownGenerator
from .formalcat import Cone, Context, Gen, ObjExpr, SOD, Shift, Triangle
from .graded import GradedDim

_PUSH_RE = re.compile(r"^j\*(O|S''|S'|S)(?:\((-?\d+)\))?$")


def push_name(F: quadric.QuadricSheaf) -> str:
    return "j*" + F.render()


def parse_push_name(name: str) -> quadric.QuadricSheaf:
    m = _PUSH_RE.match(name)
    if not m:
        raise UnknownGenerator(f"{name!r} is not a pushforward sheaf generator")
    return quadric.QuadricSheaf(m.group(1), int(m.group(2) or 0))


def hom_push(n: int, F: quadric.QuadricSheaf, G: quadric.QuadricSheaf) -> GradedDim:
    """Hom^*(j_*F, j_*G) via the restriction triangle.

    Hom(j_*F, j_*G) = Hom(j^*j_*F, G), and the long exact sequence of the
    restriction triangle splices Hom^k(F, G) (same degree) with
    Hom^{k-1}(F(1), G) (one degree up):

      ... -> R_{k-2} -> P_k -> C_k -> R_{k-1} -> P_{k+1} -> ...

    with P = Hom_Q(F, G) and R = Hom_Q(F(1), G).  A degree is accepted
    only when the two bounding maps are forced by a vanishing neighbor.
    """
    P = quadric.hom_quadric(n, F, G)
    R = quadric.hom_quadric(n, F.twisted(1), G)
    out: dict[int, int] = {}
    bad: list[int] = []
    for k in sorted(set(P.support()) | {r + 1 for r in R.support()}):
        pk, rk2 = P.dim(k), R.dim(k - 2)
        rk1, pk1 = R.dim(k - 1), P.dim(k + 1)
        if pk == 0:
            part1 = 0
        elif rk2 == 0:
            part1 = pk
        else:
            bad.append(k)
            continue
        if rk1 == 0:
            part2 = 0
        elif pk1 == 0:
            part2 = rk1
        else:
            bad.append(k)
            continue
        if part1 + part2:
            out[k] = part1 + part2
    if bad:
        raise IndeterminateHom(bad, f"Hom(j_*{F}, j_*{G})")
    return GradedDim.from_dict(out)


@cache
def _pair_value(n: int, kind1: str, c: int, kind2: str) -> GradedDim:
    return hom_push(n, quadric.QuadricSheaf(kind1, c), quadric.QuadricSheaf(kind2, 0))


@dataclass(frozen=True)
class NodalSetup:
    """Roster and derived data of the nodal blow-up context in dimension d."""

    d: int
    n: int
    context: Context
    perp: tuple[str, ...]
    spinor_kinds: tuple[str, ...]


def _spinor_kinds(d: int) -> tuple[str, ...]:
    if d % 2 == 0:
        return (quadric.SPINOR,)
    return (quadric.SPINOR_P, quadric.SPINOR_PP)


@cache
def _setup(d: int) -> NodalSetup:
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    n = d - 1
    kinds = _spinor_kinds(d)
    twists = range(1 - n, 2)

    roster = [push_name(quadric.QuadricSheaf(quadric.LINE, k)) for k in twists]
    roster += [push_name(quadric.QuadricSheaf(kd, k)) for k in twists for kd in kinds]

    def resolve(name: str) -> quadric.QuadricSheaf:
        F = parse_push_name(name)
        try:
            quadric.check_parity(n, F)
        except NodalcatError as exc:
            raise UnknownGenerator(f"{name}: {exc}") from None
        return F

    def base_hom(a: str, b: str) -> GradedDim:
        Fa, Fb = resolve(a), resolve(b)
        return _pair_value(n, Fa.kind, Fa.twist - Fb.twist, Fb.kind)

    def twist(name: str, k: int) -> str:
        return push_name(resolve(name).twisted(k))

    def serre(name: str) -> ObjExpr:
        return Shift(Gen(push_name(resolve(name).twisted(1 - n))), n + 1)

    def relative(name: str) -> ObjExpr:
        return Gen(push_name(resolve(name).twisted(1 - n)))

    exceptional = set()
    if d >= 3:
        exceptional.update(push_name(quadric.QuadricSheaf(quadric.LINE, k)) for k in twists)
        if d % 2 == 1:
            exceptional.update(push_name(quadric.QuadricSheaf(kd, k)) for k in twists for kd in kinds)

    # pushed-forward tautological sequences for every roster spinor twist
    triangles = []
    r = quadric.taut_rank(n)
    for k in range(1 - n, 1):
        for kd in kinds:
            nxt = quadric.SPINOR if d % 2 == 0 else quadric._flip(kd)
            triangles.append(
                Triangle(
                    Gen(push_name(quadric.QuadricSheaf(kd, k))),
                    formalcat.sum_of(Gen(push_name(quadric.QuadricSheaf(quadric.LINE, k))), r),
                    Gen(push_name(quadric.QuadricSheaf(nxt, k + 1))),
                    tag=f"pushforward of the tautological sequence of {kd} at twist {k}",
                )
            )

    zero_facts = set()
    if d % 2 == 1:
        # the context carries the kernel cone T and its companion T'
        sp, spp = Gen("j*S'"), Gen("j*S''")
        t_cone = Cone(sp, Shift(spp, 2), tag="kernel mutation cone")
        triangles.append(Triangle(sp, Shift(spp, 2), t_cone, tag="kernel mutation cone"))
        triangles.append(
            Triangle(spp, Shift(sp, 2), Cone(spp, Shift(sp, 2), tag="companion cone with spinors swapped"),
                     tag="companion cone with spinors swapped")
        )
        # defining orthogonality of the mutation producing T
        zero_facts.add((t_cone, spp))

    ctx = Context(
        name=f"nodal:{d}",
        generators=tuple(roster),
        base_hom=base_hom,
        gen_resolve=resolve,
        twist_gen=twist,
        serre_action=serre,
        relative_twist=relative,
        exceptional=frozenset(exceptional),
        triangles=tuple(t.normalized() for t in triangles),
        zero_facts=frozenset(zero_facts),
    )

    # stored orthogonal collection of the resolution subcategory: the
    # pushed Lefschetz blocks B_{n-1}(1-n), ..., B_1(-1); for odd d the
    # spinor entry is mutated across its line-bundle neighbor, which the
    # builder executes and checks
    perp: list[str] = []
    blocks = quadric.lefschetz_blocks(n).blocks
    for i in range(n - 1, 0, -1):
        for kd in blocks[i]:
            perp.append(push_name(quadric.QuadricSheaf(kd, -i)))
    if d % 2 == 1 and n >= 2:
        mutated = formalcat.mutate_right(ctx, Gen("j*O(-1)"), Gen("j*S'(-1)"))
        expected = Shift(Gen("j*S''"), -1)
        if mutated != expected:
            raise NodalcatError(
                f"perp mutation sanity check failed: got {formalcat.render(mutated)}"
            )
        perp = [g for g in perp if g != "j*S'(-1)"]
        perp.append("j*S''")
    return NodalSetup(d=d, n=n, context=ctx, perp=tuple(perp), spinor_kinds=kinds)


def build_context(d: int) -> Context:
    """The formal context of pushforward sheaves for dimension d."""
    return _setup(d).context


def perp_collection(d: int) -> tuple[str, ...]:
    """The stored orthogonal collection (semiorthogonal order)."""
    return _setup(d).perp


def kernel_generator(d: int) -> ObjExpr:
    """Classical generator of the resolution kernel, built by mutation.

    Runs the right mutation through the stored orthogonal collection on the
    pushed spinor bundle; even d gives j_*S back, odd d produces the cone
    on j_*S' -> j_*S''[2] (the mutation's [-1] is dropped: classical
    generation is shift-insensitive and the cone itself is the stated
    generator).
    """
    setup = _setup(d)
    ctx = setup.context
    start = Gen("j*S") if d % 2 == 0 else Gen("j*S'")
    moved = formalcat.mutate_right(ctx, setup.perp, start)
    if d % 2 == 0:
        if moved != start:
            raise NodalcatError(f"kernel mutation did not fix j*S: {formalcat.render(moved)}")
        return moved
    expected = Shift(Cone(Gen("j*S'"), Shift(Gen("j*S''"), 2), tag="kernel mutation cone"), -1)
    if moved != expected:
        raise NodalcatError(f"unexpected kernel mutation result: {formalcat.render(moved)}")
    return formalcat.shift_expr(moved, 1)


def relative_serre(d: int, F: ObjExpr) -> ObjExpr:
    """Relative Serre functor: dualizing twist, then mutation into the resolution."""
    setup = _setup(d)
    return formalcat.mutate_right(
        setup.context, setup.perp, formalcat.apply_relative_twist(setup.context, F)
    )


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReportItem:
    id: str
    citation: str
    expected: str
    got: str
    passed: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "citation": self.citation,
            "expected": self.expected,
            "got": self.got,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    dim: int
    items: tuple[ReportItem, ...]

    @property
    def all_pass(self) -> bool:
        return all(item.passed for item in self.items)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "items": [item.to_json() for item in self.items],
            "all_pass": self.all_pass,
        }


def _item(items: list, id: str, citation: str, expected: str, compute) -> None:
    """Run one check, trapping engine errors as failures, never aborting."""
    try:
        got, ok = compute()
    except NodalcatError as exc:
        got, ok = f"error: {exc}", False
    items.append(ReportItem(id, citation, expected, str(got), ok))


def verify_dim(d: int) -> VerificationReport:
    """Full verification battery for dimension d."""
    setup = _setup(d)
    ctx = setup.context
    n = setup.n
    items: list[ReportItem] = []
    even = d % 2 == 0
    spin = "j*S" if even else "j*S'"

    if d >= 3:
        def check_line_exc():
            bad = [g for g in ctx.generators
                   if parse_push_name(g).is_line and not formalcat.check_exceptional(ctx, Gen(g))]
            return ("all exceptional" if not bad else f"not exceptional: {bad}", not bad)

        _item(items, "line-bundles-exceptional",
              "pushforwards of line bundles from the exceptional quadric are exceptional",
              "all exceptional", check_line_exc)

    if even:
        _item(items, "spinor-endomorphisms",
              "the pushed spinor bundle has graded endomorphism algebra C + C[-2]",
              "C + C[-2]",
              lambda: (lambda v: (v.render(), v == GradedDim.from_dict({0: 1, 2: 1})))(
                  formalcat.hom(ctx, Gen("j*S"), Gen("j*S"))))
    else:
        def check_spin_exc():
            bad = [g for g in ctx.generators
                   if not parse_push_name(g).is_line and not formalcat.check_exceptional(ctx, Gen(g))]
            return ("all exceptional" if not bad else f"not exceptional: {bad}", not bad)

        _item(items, "spinors-exceptional",
              "pushforwards of both spinor bundles are exceptional when the dimension is odd",
              "all exceptional", check_spin_exc)
        _item(items, "spinor-cross-hom",
              "Hom(j*S', j*S'') is one dimension in degree 2",
              "C[-2]",
              lambda: (lambda v: (v.render(), v == GradedDim.point(2)))(
                  formalcat.hom(ctx, Gen("j*S'"), Gen("j*S''"))))
        _item(items, "spinor-cross-hom-reverse",
              "Hom(j*S'', j*S') computed independently agrees with the spinor-swapped value",
              "C[-2]",
              lambda: (lambda v: (v.render(), v == GradedDim.point(2)))(
                  formalcat.hom(ctx, Gen("j*S''"), Gen("j*S'"))))

    if d >= 3:
        def check_fix():
            for k in range(2 - d, 0):
                got = formalcat.mutate_right(ctx, Gen(f"j*O({k})"), Gen(spin))
                if got != Gen(spin):
                    return f"k={k}: {formalcat.render(got)}", False
            return f"{spin} fixed for k in {2 - d}..-1", True

        _item(items, "mutation-fixes-spinor",
              f"right mutation through j*O(k) fixes {spin} for 2-d <= k <= -1",
              f"{spin} fixed for k in {2 - d}..-1", check_fix)

        def check_steps():
            for k in range(1 - n, 0):
                for kd in setup.spinor_kinds:
                    nxt = quadric.SPINOR if even else quadric._flip(kd)
                    src = Gen(push_name(quadric.QuadricSheaf(kd, k)))
                    want = Shift(Gen(push_name(quadric.QuadricSheaf(nxt, k + 1))), -1)
                    got = formalcat.mutate_right(ctx, Gen(f"j*O({k})"), src)
                    if got != want:
                        return f"k={k}, {kd}: {formalcat.render(got)}", False
            return "all twisted mutation steps identified", True

        _item(items, "mutation-twist-steps",
              "right mutation through j*O(k) turns the pushed spinor at twist k into "
              "its successor at twist k+1, shifted by [-1], via the tautological triangle",
              "all twisted mutation steps identified", check_steps)

    if not even and d >= 3:
        def check_cross_mutation():
            got = formalcat.mutate_right(ctx, Gen("j*S''"), Gen("j*S'"))
            want = Shift(Cone(Gen("j*S'"), Shift(Gen("j*S''"), 2)), -1)
            return formalcat.render(got), got == want

        _item(items, "mutation-across-spinor",
              "right mutation of j*S' through j*S'' is the cone on j*S' -> j*S''[2], shifted by [-1]",
              "cone(j*S' -> j*S''[2])[-1]", check_cross_mutation)

    def check_perp():
        sod = SOD(tuple((g,) for g in setup.perp))
        ok = formalcat.check_semiorthogonal(ctx, sod)
        return ("semiorthogonal" if ok else "not semiorthogonal", ok)

    _item(items, "perp-semiorthogonal",
          "the stored orthogonal collection of the resolution is semiorthogonal",
          "semiorthogonal", check_perp)

    expected_kernel = "j*S" if even else "cone(j*S' -> j*S''[2])"
    _item(items, "kernel-generator",
          "mutating the pushed spinor bundle through the orthogonal collection "
          "yields the kernel generator",
          expected_kernel,
          lambda: (lambda T: (formalcat.render(T), formalcat.render(T) == expected_kernel))(
              kernel_generator(d)))

    k_spherical = 2 if even else 3
    def check_sph():
        T = kernel_generator(d)
        report = formalcat.check_spherical(ctx, setup.perp, T, k_spherical)
        serre_desc = (
            formalcat.render(report.serre_value) if report.serre_value is not None
            else "not evaluated"
        )
        desc = (f"hom={report.hom_value.render()} ({'ok' if report.hom_ok else 'BAD'}), "
                f"serre={serre_desc} ({'ok' if report.serre_ok else 'BAD'})")
        return desc, report.passed

    _item(items, "kernel-spherical",
          f"the kernel generator is {k_spherical}-spherical: endomorphisms C + C[-{k_spherical}] "
          f"and Serre image shifted by [{k_spherical}]",
          f"{k_spherical}-spherical", check_sph)

    rel_shift = (2 - d) if even else (3 - d)
    def check_rel():
        T = kernel_generator(d)
        got = relative_serre(d, T)
        want = formalcat.shift_expr(T, rel_shift)
        return formalcat.render(got), got == want

    _item(items, "relative-serre-shift",
          f"the relative Serre functor shifts the kernel generator by [{rel_shift}]; "
          "it is the identity on it exactly when the dimension is at most 3",
          f"kernel generator shifted by [{rel_shift}]", check_rel)

    return VerificationReport(dim=d, items=tuple(items))
