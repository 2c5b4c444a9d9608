#!/usr/bin/env python3
"""Smoke test for the vortex_diagrams extension module.

Build the module first:

    cargo build --release -p vortex-diagrams-py

The script locates the cdylib under target/, copies it next to a build
directory as an importable module, and exercises the main surface.
"""
import pathlib
import shutil
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def import_module():
    build_dir = ROOT / "python" / "build"
    build_dir.mkdir(exist_ok=True)
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libvortex_diagrams_py.so"
        if lib.exists():
            target = build_dir / "vortex_diagrams.so"
            if not target.exists() or lib.stat().st_mtime > target.stat().st_mtime:
                shutil.copy2(lib, target)
            sys.path.insert(0, str(build_dir))
            import vortex_diagrams

            return vortex_diagrams
    raise SystemExit(
        "extension not built; run `cargo build --release -p vortex-diagrams-py`"
    )


def main():
    vd = import_module()
    print(f"vortex_diagrams {vd.__version__}")

    # Matrix basics.
    m = vd.Matrix.from_literal("M(n=5; d=00011; s=12,45)")
    assert m.n() == 5
    assert m.trace() == 2
    assert m.column_sums() == [1, 1, 0, 2, 2]
    assert m.components() == [[1, 2], [3], [4, 5]]
    assert vd.Matrix.from_encoding(m.encoding()) == m

    # Canonical forms and orbits.
    a = vd.Matrix.from_literal("M(n=3; d=100; s=12)")
    canon, key = a.canonical()
    assert canon.encoding() == "001001"
    assert key == "001001"
    assert len(vd.orbit(a)) == 6
    assert a.permute([3, 2, 1]).encoding() == "001001"

    # Rules on a known-good and a known-bad pair.
    z = vd.Matrix.from_literal("M(n=5; d=00000; s=34,35,45)")
    w = vd.Matrix.from_literal("M(n=5; d=00000; s=34,35,45)")
    good = vd.Diagram(z, w)
    assert good.passes_rules()
    assert good.classify_edges() == [(3, 4, "zw"), (3, 5, "zw"), (4, 5, "zw")]
    bad = vd.Diagram(
        vd.Matrix.from_literal("M(n=5; d=10000; s=12)"),
        vd.Matrix.from_literal("M(n=5; d=00000; s=12)"),
    )
    verdicts = dict((r, ok) for r, ok, _ in bad.rule_verdicts())
    assert not verdicts["trace"]
    assert not bad.passes_rules()

    # Full enumeration reproduces the published counts.
    diagrams, stats = vd.enumerate_diagrams(5)
    assert stats["initial"] == [84, 240, 240, 182, 84], stats
    assert stats["filtered"] == [3, 5, 4, 4, 2], stats
    assert stats["t_sets"] == [16, 90, 70, 55, 11], stats
    assert stats["u_sets"] == [726, 1130, 544, 264, 22], stats
    assert stats["final_count"] == 31
    assert len(diagrams) == 31
    assert all(d.passes_rules() for d in diagrams)

    # Brute-force oracle agrees at n=4.
    oracle = vd.brute_force(4)
    pipeline, _ = vd.enumerate_diagrams(4)
    assert [d.encoding() for d in oracle] == [d.encoding() for d in pipeline]
    assert len(oracle) == 6

    # Constraint annotation on an isolated circled stroke.
    iso = vd.Diagram(
        vd.Matrix.from_literal("M(n=5; d=11000; s=12)"),
        vd.Matrix.from_literal("M(n=5; d=00000; s=34,35,45)"),
    )
    constraints = iso.constraints()
    patterns = {(c["pattern"], c["color"]) for c in constraints}
    assert ("P-ISO2", "z") in patterns
    assert ("P-LI", "w") in patterns
    real = [
        c
        for c in constraints
        if c["pattern"] == "P-ISO2" and c["branch"] == "real" and c["kind"] == "eq0"
    ]
    assert real and real[0]["text"] == "G3 + G4 + G5"
    assert real[0]["poly"] == [
        (1, [0, 0, 0, 0, 1]),
        (1, [0, 0, 0, 1, 0]),
        (1, [0, 0, 1, 0, 0]),
    ]

    # Serialization surfaces.
    d0 = diagrams[0]
    assert d0.encoding() == "N=5;A=000000000000111;B=000000000000111"
    assert '"n":5' in d0.to_json().replace(" ", "")
    assert "graph d0 {" in d0.to_dot()

    print("smoke test OK")


if __name__ == "__main__":
    main()
