import pytest

from nodalcat import formalcat, nodal, quadric
from nodalcat.errors import UnsupportedPair
from nodalcat.formalcat import Cone, Gen, Shift, render
from nodalcat.graded import GradedDim
from nodalcat.quadric import QuadricSheaf as QS


def gd(d):
    return GradedDim.from_dict(d)


class TestHomPush:
    def test_spinor_self_even_dim(self):
        assert nodal.hom_push(3, QS("S"), QS("S")) == gd({0: 1, 2: 1})

    def test_spinor_cross_odd_dim(self):
        assert nodal.hom_push(2, QS("S'"), QS("S''")) == gd({2: 1})

    def test_push_pull_vanish(self):
        assert nodal.hom_push(3, QS("S", 1), QS("O")).is_zero
        for n in (2, 3, 4, 5):
            for k in range(1 - n, 0):
                spin = QS("S") if n % 2 else QS("S'")
                assert nodal.hom_push(n, spin, QS("O", k)).is_zero

    def test_reverse_direction_computed_independently(self):
        # the spinor-swapped row comes from its own splice and must agree
        for n in (2, 4, 6, 8, 10, 12):
            fwd = nodal.hom_push(n, QS("S'"), QS("S''"))
            rev = nodal.hom_push(n, QS("S''"), QS("S'"))
            assert fwd == rev == gd({2: 1})

    def test_line_bundle_exceptional_row(self):
        for n in (2, 3, 5, 8):
            assert nodal.hom_push(n, QS("O"), QS("O")) == gd({0: 1})

    def test_chi_bridge(self):
        # euler of the splice equals the difference of the two chi values
        for n in (1, 2, 3, 4, 5):
            kinds = ["O"] + (["S"] if n % 2 else ["S'", "S''"])
            sheaves = [QS(kd, k) for kd in kinds for k in range(1 - n, 2)]
            for F in sheaves:
                for G in sheaves:
                    try:
                        h = nodal.hom_push(n, F, G)
                    except UnsupportedPair:
                        continue
                    chi = quadric.chi_quadric(n, F, G) - quadric.chi_quadric(n, F.twisted(1), G)
                    assert h.euler() == chi, (n, str(F), str(G))

    def test_unsupported_propagates(self):
        with pytest.raises(UnsupportedPair):
            nodal.hom_push(4, QS("S'"), QS("S'", 1))


class TestBuildContext:
    def test_rejects_low_dimension(self):
        with pytest.raises(ValueError):
            nodal.build_context(1)

    def test_perp_even(self):
        assert nodal.perp_collection(4) == ("j*O(-2)", "j*O(-1)")

    def test_perp_odd_contains_mutated_spinor(self):
        perp = nodal.perp_collection(5)
        assert perp == ("j*O(-3)", "j*O(-2)", "j*O(-1)", "j*S''")
        assert "j*S'(-1)" not in perp

    def test_perp_d2_empty(self):
        assert nodal.perp_collection(2) == ()

    def test_roster(self):
        ctx = nodal.build_context(4)
        assert "j*O(-2)" in ctx.generators
        assert "j*S(1)" in ctx.generators
        ctx5 = nodal.build_context(5)
        assert "j*S''(-3)" in ctx5.generators

    def test_d2_hom_algebra(self):
        ctx = nodal.build_context(2)
        assert formalcat.hom(ctx, Gen("j*S"), Gen("j*S")) == gd({0: 1, 2: 1})
        # pushforward line bundles are NOT exceptional on a surface
        assert formalcat.hom(ctx, Gen("j*O"), Gen("j*O")) == gd({0: 1, 2: 1})

    def test_twist_equivariance_of_rows(self):
        ctx = nodal.build_context(5)
        a = formalcat.hom(ctx, Gen("j*S'(-1)"), Gen("j*S''(-1)"))
        b = formalcat.hom(ctx, Gen("j*S'"), Gen("j*S''"))
        assert a == b == gd({2: 1})

    def test_declared_exceptional_rows(self):
        # context invariant: every declared-exceptional generator has
        # endomorphism algebra C
        for d in range(2, 14):
            ctx = nodal.build_context(d)
            for g in ctx.exceptional:
                assert formalcat.hom(ctx, Gen(g), Gen(g)) == gd({0: 1}), (d, g)


class TestMutationIdentities:
    def test_fix_spinor(self):
        for d in (4, 5, 6, 7):
            ctx = nodal.build_context(d)
            spin = Gen("j*S") if d % 2 == 0 else Gen("j*S'")
            for k in range(2 - d, 0):
                assert formalcat.mutate_right(ctx, Gen(f"j*O({k})"), spin) == spin

    def test_twisted_steps_even(self):
        ctx = nodal.build_context(6)
        for k in range(-4, 0):
            got = formalcat.mutate_right(ctx, Gen(f"j*O({k})"), Gen(f"j*S({k})"))
            want = Shift(Gen(f"j*S({k + 1})" if k + 1 else "j*S"), -1)
            assert got == want

    def test_twisted_steps_odd_swap_primes(self):
        ctx = nodal.build_context(5)
        got = formalcat.mutate_right(ctx, Gen("j*O(-1)"), Gen("j*S'(-1)"))
        assert got == Shift(Gen("j*S''"), -1)
        got = formalcat.mutate_right(ctx, Gen("j*O(-1)"), Gen("j*S''(-1)"))
        assert got == Shift(Gen("j*S'"), -1)

    def test_cross_spinor_mutation(self):
        ctx = nodal.build_context(5)
        got = formalcat.mutate_right(ctx, Gen("j*S''"), Gen("j*S'"))
        want = Shift(Cone(Gen("j*S'"), Shift(Gen("j*S''"), 2)), -1)
        assert got == want

    def test_mutation_orthogonality_invariant(self):
        # after R_E the result receives no Homs into E
        for d in (4, 5, 6, 7):
            ctx = nodal.build_context(d)
            n = d - 1
            spin = "j*S" if d % 2 == 0 else "j*S'"
            for k in range(1 - n, 0):
                E = Gen(f"j*O({k})")
                for start in (Gen(spin), Gen(f"{spin}({k})")):
                    moved = formalcat.mutate_right(ctx, E, start)
                    assert formalcat.hom(ctx, moved, E).is_zero, (d, k, render(moved))
            if d % 2 == 1:
                moved = formalcat.mutate_right(ctx, Gen("j*S''"), Gen("j*S'"))
                assert formalcat.hom(ctx, moved, Gen("j*S''")).is_zero


class TestKernel:
    def test_even(self):
        assert nodal.kernel_generator(4) == Gen("j*S")
        assert nodal.kernel_generator(6) == Gen("j*S")

    def test_odd(self):
        T = nodal.kernel_generator(5)
        assert render(T) == "cone(j*S' -> j*S''[2])"

    def test_d2(self):
        assert nodal.kernel_generator(2) == Gen("j*S")


class TestKernelHomAlgebra:
    def test_endomorphisms_of_cone_generator(self):
        ctx = nodal.build_context(5)
        T = nodal.kernel_generator(5)
        assert formalcat.hom(ctx, T, T) == gd({0: 1, 3: 1})

    def test_defining_orthogonality(self):
        ctx = nodal.build_context(5)
        T = nodal.kernel_generator(5)
        assert formalcat.hom(ctx, T, Gen("j*S''")).is_zero

    def test_spherical_reports(self):
        for d, k in ((4, 2), (5, 3), (7, 3)):
            ctx = nodal.build_context(d)
            T = nodal.kernel_generator(d)
            report = formalcat.check_spherical(ctx, nodal.perp_collection(d), T, k)
            assert report.passed, d


class TestSerreChains:
    def test_even_serre(self):
        ctx = nodal.build_context(4)
        assert formalcat.serre_in(ctx, nodal.perp_collection(4), Gen("j*S")) == Shift(Gen("j*S"), 2)

    def test_odd_serre(self):
        for d in (5, 7):
            T = nodal.kernel_generator(d)
            ctx = nodal.build_context(d)
            got = formalcat.serre_in(ctx, nodal.perp_collection(d), T)
            assert got == formalcat.shift_expr(T, 3)

    def test_relative_shifts(self):
        for d in range(2, 14):
            T = nodal.kernel_generator(d)
            want_shift = 2 - d if d % 2 == 0 else 3 - d
            got = nodal.relative_serre(d, T)
            assert got == formalcat.shift_expr(T, want_shift), d

    def test_identity_exactly_up_to_dim3(self):
        for d in (2, 3):
            T = nodal.kernel_generator(d)
            assert nodal.relative_serre(d, T) == T
        for d in (4, 5, 6):
            T = nodal.kernel_generator(d)
            assert nodal.relative_serre(d, T) != T


class TestVerifyDim:
    def test_all_dimensions_pass(self):
        for d in range(2, 14):
            assert nodal.verify_dim(d).all_pass, d

    def test_spherical_degrees(self):
        rep4 = nodal.verify_dim(4)
        assert any("2-spherical" in item.expected for item in rep4.items
                   if item.id == "kernel-spherical")
        rep5 = nodal.verify_dim(5)
        assert any("3-spherical" in item.expected for item in rep5.items
                   if item.id == "kernel-spherical")

    def test_report_json_schema(self):
        rep = nodal.verify_dim(4)
        data = rep.to_json()
        assert set(data) == {"dim", "items", "all_pass"}
        assert data["dim"] == 4
        assert data["all_pass"] is True
        for item in data["items"]:
            assert set(item) == {"id", "citation", "expected", "got", "pass"}
            assert isinstance(item["pass"], bool)

    def test_byte_stable(self):
        import json

        a = json.dumps(nodal.verify_dim(5).to_json())
        b = json.dumps(nodal.verify_dim(5).to_json())
        assert a == b
