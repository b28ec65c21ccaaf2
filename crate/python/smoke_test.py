"""Smoke test for the `polarizability` extension module.

Build the module and put it on the path first, for example:

    cargo build --release -p polarizability-py
    cp target/release/libpolarizability.so python/polarizability.so
    python3 python/smoke_test.py
"""

import polarizability as pz


def main():
    s = pz.SurfaceClass(7, 0, -7)
    assert s.is_valid()
    assert (s.q, s.p, s.m, s.a, s.b) == (7, 7, 1, 0, -7)
    assert s.newton_type() == "supersingular"
    assert s.shape() == "irreducible"
    assert not s.principally_polarizable()
    assert s.cm_decision() == "inconclusive"

    record = pz.decide(7, 0, -7)
    assert list(record) == [
        "q", "p", "m", "a", "b", "valid", "admissibility", "newton", "shape",
        "principally_polarizable", "path", "evidence",
    ]
    assert record["principally_polarizable"] is False
    assert record["evidence"]["artin_symbol"] == -1

    assert pz.decide(4, 6, 0)["valid"] is False
    assert pz.main_criterion(2, 2, 2)
    assert not pz.trace_zero_criterion(0, 7)

    for q, expected in [(7, [(0, -7)]), (11, [(-2, -7), (2, -7)]), (13, [(0, -13)])]:
        report = pz.census(q)
        got = [(r["a"], r["b"]) for r in report["non_pp"]]
        assert got == expected, (q, got)
        assert report["total_valid"] == len(pz.valid_classes(q))

    a = pz.artin(7)
    assert a["d0"] == 21 and a["splitting"] == "inert" and a["psi"] == -1

    tz = pz.tzmodel(7)
    assert tz["all_pass"] and tz["polarization_degree"] == 9

    cc = pz.cross_check(30)
    assert cc["disagreements"] == []

    assert pz.factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert pz.kronecker(-3, 7) == 1

    try:
        pz.SurfaceClass(6, 0, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("q = 6 accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
