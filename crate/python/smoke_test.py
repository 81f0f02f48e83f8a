#!/usr/bin/env python3
"""Smoke test for the absgl_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/
(release preferred), copies it next to a temp dir as an importable module,
and exercises the main types and operations end to end.

Run after `cargo build -p absgl-py --release`:

    python3 python/smoke_test.py
"""
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def locate_extension():
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    candidates = []
    for profile in ("release", "debug"):
        for name in ("libabsgl_py.so", "libabsgl_py.dylib", "absgl_py.dll"):
            path = os.path.join(target, profile, name)
            if os.path.exists(path):
                candidates.append(path)
    if not candidates:
        sys.exit("no built extension found; run `cargo build -p absgl-py --release` first")
    return max(candidates, key=os.path.getmtime)


def main():
    src = locate_extension()
    tmp = tempfile.mkdtemp(prefix="absgl_py_")
    ext = ".pyd" if src.endswith(".dll") else ".so"
    shutil.copy(src, os.path.join(tmp, "absgl_py" + ext))
    sys.path.insert(0, tmp)
    import absgl_py as ag

    # field arithmetic metadata
    f2 = ag.FieldContext(2, 1)
    f4 = ag.FieldContext(2, 2)
    assert f4.q == 4 and f4.modulus == [1, 1, 1]
    assert f4.element_order(f4.generator) == 3
    f9 = ag.FieldContext.parse("3^2")
    assert f9.name() == "3^2" and f9.q == 9
    print("[ok] field contexts: deterministic moduli and generators")

    # matrices and the absolute order
    c = ag.singer_cycle(f2, 3)
    assert str(c) == "0,0,1;1,0,1;0,1,0"
    assert c.char_poly() == [1, 1, 0, 1]
    assert c.is_regular_elliptic() and c.reflection_length() == 3
    word = c.reduced_word()
    assert len(word) == 3 and all(t.is_reflection() for t in word)
    prod = ag.Matrix.identity(f2, 3)
    for t in word:
        prod = prod.mul(t)
    assert prod == c and ag.Matrix.identity(f2, 3).leq(c)
    print("[ok] matrices: Singer cycle, factorization, order test")

    # interval queries against closed forms
    iv = ag.Interval(c)
    assert iv.rank_sizes() == [1, 14, 14, 1]
    assert iv.maximal_chains() == 49 == ag.flag_formula([1, 1, 1], 2)
    assert iv.flag([1, 2]) == 14 == ag.flag_formula([1, 2], 2)
    assert iv.mobius() == -22 == ag.mobius_formula(3, 2)
    print("[ok] intervals: rank sizes, flags, Mobius match the formulas")

    # counting functions
    assert ag.q_binomial(4, 2, 2) == 35
    assert ag.gl_order(4, 2) == 20160
    assert ag.rank_size(2, 1, 2) == 3
    assert ag.chen_tseng_g(4, 2, 1, 2) == 15
    assert ag.co_complement_f(4, 2, 0, 2) == 6
    assert ag.pk_poly(2, 1, 2) == {0: "-3/1", 1: "6/1"}
    count, formula = ag.count_cactus(4, [[3, 1], [2, 1, 1]])
    assert count == 4 and formula == 4
    print("[ok] closed-form counters: q-binomials, rank sizes, cactus")

    # a bigger cross-check: the GL_4(F_2) interval
    c4 = ag.singer_cycle(f2, 4)
    iv4 = ag.Interval(c4)
    assert iv4.rank_sizes() == [1, 60, 240, 60, 1]
    assert iv4.maximal_chains() == 3375
    assert iv4.mobius() == 1034 == ag.mobius_formula(4, 2)
    assert iv4.incidence_det_abs() == 573320760949506834432
    print("[ok] GL_4(F_2): 3375 maximal chains, mu = 1034, pinned incidence det")

    print("smoke test passed")


if __name__ == "__main__":
    main()
