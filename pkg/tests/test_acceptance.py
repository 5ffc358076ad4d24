"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every test runs the corresponding named check of the verification harness
and then pins the specific values the criterion names.  Tolerance is exact:
dimensions and ranks must match, and isomorphisms need a certified witness.
"""

import pytest

from qhat.bondal import run_check


def _line(capsys, n, title, ok, detail=""):
    with capsys.disabled():
        print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {title}{'  ' + detail if detail else ''}")


def _run(fs, capsys, n, check, title, extra=lambda subs: (True, "")):
    res = run_check(check, fs)
    subs = {s["claim"]: s for s in res.witness}
    failed = [c for c, s in subs.items() if not s["ok"]]
    ok_extra, detail = extra(subs)
    ok = res.passed and ok_extra
    _line(capsys, n, title, ok, detail or (f"failed: {failed}" if failed else f"{len(subs)} sub-checks"))
    assert res.passed, failed
    assert ok_extra, detail
    return subs


def test_01_hom_table(fs, capsys):
    def extra(subs):
        got = [[subs[f"Hom(P{i},P{j})"]["dim"] for j in (1, 2, 3)] for i in (1, 2, 3)]
        return got == [[1, 0, 0], [2, 1, 0], [2, 2, 1]], f"table {got}"
    _run(fs, capsys, 1, "hom-table", "dim Hom(P_i, P_j)", extra)


def test_02_serre_on_projectives(fs, capsys):
    def extra(subs):
        isos = all(subs[f"S(P{i}) = I{i}"]["certified"] for i in (1, 2, 3))
        images = all(subs[f"S({p})"]["ok"] for p in ("p32_1", "p32_2", "p21_1", "p21_2"))
        return isos and images, "three certified isomorphisms, four morphism images"
    _run(fs, capsys, 2, "serre-projectives", "Serre functor on projectives", extra)


def test_03_exceptional_pair(fs, capsys):
    def extra(subs):
        return (subs["S(P) = P tilde[2]"]["certified"] and subs["S^2(P) = P[4]"]["certified"],
                "S(P) = P~[2], S^2(P) = P[4] certified")
    _run(fs, capsys, 3, "exceptional-pair", "exceptional objects P and P tilde", extra)


def test_04_spherical_object(fs, capsys):
    def extra(subs):
        ext = subs["Ext(E, E) = (1,0,0,1)"]["dims"]
        ok = [ext[n] for n in range(4)] == [1, 0, 0, 1] and subs["[E] = 0"]["k0"] == [0, 0, 0]
        return ok and subs["S_sub^-1(E) = E[-3]"]["certified"], f"Ext(E,E) = {[ext[n] for n in range(4)]}"
    _run(fs, capsys, 4, "spherical-object", "E is 3-spherical in the orthogonal of P", extra)


def test_05_orthogonal_membership(fs, capsys):
    def extra(subs):
        zero = all(not any(subs[f"Hom(P, {x}[n]) = 0"]["dims"].values()) for x in ("Ct", "D"))
        chi = subs["chi(P, D) = 0 (K0 route)"]["value"] == 0 == subs["chi(P, D) = 0 (Ext route)"]["value"]
        return zero and chi, "degrees -4..4 and both Euler routes"
    _run(fs, capsys, 5, "orthogonal-membership", "C tilde and D lie in the orthogonal of P", extra)


def test_06_decomposition_triangles(fs, capsys):
    def extra(subs):
        isos = [s for c, s in subs.items() if "certified" in s]
        return len(isos) == 12 and all(s["certified"] for s in isos), f"{len(isos)} certified isomorphisms"
    _run(fs, capsys, 6, "decomposition-triangles", "six decomposition triangles", extra)


def test_07_extension_algebras(fs, capsys):
    def extra(subs):
        got = [subs[f"Hom(P-side)({x}, P)"]["dims"] for x in ("Ct", "A", "D")]
        return got == [[0, 1, 1], [0, 1, 1], [1, 1, 0]], f"{got}"
    _run(fs, capsys, 7, "extension-algebras", "Hom(X, P[n]) for X = C tilde, A, D", extra)


def test_08_resolutions(fs, capsys):
    def extra(subs):
        pairs = ("P_A = A", "I_A = A", "P_Ct = Ct", "I_D = D")
        return all(subs[p]["certified"] for p in pairs), "four certified quasi-isomorphisms"
    _run(fs, capsys, 8, "resolutions", "displayed projective and injective resolutions", extra)


def test_09_triangularity(fs, capsys):
    def extra(subs):
        return (subs["Ext quiver acyclic"]["ok"] and subs["Ext^1(S2, S2) = 0"]["ok"]
                and subs["S2 resolved by P3+P3 -> P2"]["signature"] == {"-1": [3, 3], "0": [2]},
                f"Ext quiver arrows {subs['Ext quiver acyclic']['arrows']}")
    _run(fs, capsys, 9, "triangularity", "triangular algebra", extra)


def test_10_ladder_i3_i2(fs, capsys):
    def extra(subs):
        nulls = subs["auxiliary-null-1"]["ok"] and subs["auxiliary-null-2"]["ok"]
        final = subs["agreement/f1"]["ok"] and subs["agreement/f2"]["ok"]
        return nulls and final, "null witnesses found; final composites agree for f1, f2"
    _run(fs, capsys, 10, "ladder-i3-i2", "chain-level ladder for I3 -> I2", extra)


def test_11_ladder_i2_i1(fs, capsys):
    def extra(subs):
        final = subs["agreement/g1"]["ok"] and subs["agreement/g2"]["ok"]
        return final, "final composites agree for g1, g2"
    _run(fs, capsys, 11, "ladder-i2-i1", "chain-level ladder for I2 -> I1", extra)


def test_12_mutation_naturality(fs, capsys):
    def extra(subs):
        nat = subs["natural isomorphism on the sample"]
        return nat["ok"] and subs["L_S(P)(E) = S^-1(E)[1]"]["certified"], \
            f"{len(nat['morphisms'])} basis morphisms"
    _run(fs, capsys, 12, "mutation-naturality", "left mutation through S(P) against S^-1[1]", extra)


def test_13_twist_route(fs, capsys):
    def extra(subs):
        return len(subs) == 4 and all(s["certified"] for s in subs.values()), "C tilde, A, D[1], E"
    _run(fs, capsys, 13, "twist-route", "twist route against mutation route", extra)


def test_14_families(fs, capsys):
    def extra(subs):
        members = {c.split(" ")[0] for c in subs if c.startswith(("T_", "M_"))}
        return len(members) == 7, f"{len(members)} family members"
    _run(fs, capsys, 14, "families", "torsion and degree-zero families", extra)


def test_15_properties(fs, capsys):
    def extra(subs):
        euler = subs["Euler form: K0 route = Ext route"]["pairs"]
        return euler == 36, f"{euler} ordered module pairs"
    _run(fs, capsys, 15, "properties", "property suites", extra)
