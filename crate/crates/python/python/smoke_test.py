"""Smoke test for the hopfw_py extension module."""

import hopfw_py as hw


def main():
    eps = hw.Form.signature(3)
    report = eps.analyze()
    assert report["preregular"], report
    assert report["twisting_element"] == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    assert report["polar_dimension"] == 18
    scale = hw.signature_polar_scale(3)
    assert scale == "1/2"
    assert eps.scale(scale).is_polar_of(eps)
    assert not eps.scale("1/3").is_polar_of(eps)
    assert hw.Form.from_json(eps.to_json()) == eps

    b = hw.Form.symplectic2()
    assert b.analyze()["twisting_element"] == [["-1", "0"], ["0", "-1"]]
    assert hw.Form(2, 2, [([1, 2], "1"), ([2, 1], "-1")]) == b

    w2 = hw.Form.cyclic2()
    assert len(w2.entries()) == 3
    pres = hw.Presentation.build("hw", w2)
    assert len(pres.generators) == 8
    assert hw.Presentation.from_json(pres.to_json()).relations == pres.relations

    system = hw.RewriteSystem.complete(pres, 6)
    assert system.normal_form("s[1,2]*u[2,1]+s[1,1]*u[1,1]-1") == "0"
    assert hw.RewriteSystem.from_dump(system.dump()).dump() == system.dump()

    verifier = hw.Verifier(pres, 6)
    rows = verifier.axioms()
    assert rows and all(r[1] == "PASS" for r in rows), rows
    polar, kernel = w2.polar()
    suite = verifier.universal_suite([polar])
    assert all(r[1] == "PASS" for r in suite), suite

    assert all(r[1] == "PASS" for r in hw.reflection_isomorphism(2, 3, 6))
    assert all(r[1] == "PASS" for r in hw.bilinear_identification(b, 4))

    separates, certified, verdict = hw.noninjectivity_probe(eps, eps.scale(scale), 6)
    assert separates and certified, verdict

    hweps = hw.Verifier(hw.Presentation.build("hw", eps), 4)
    assert hweps.normal_form("u[1,2]*u[1,3]-u[1,3]*u[1,2]") != "0"

    try:
        hw.Presentation.build("hww", eps)
    except ValueError:
        pass
    else:
        raise AssertionError("hww without a polar element must fail")

    print("smoke test passed")


if __name__ == "__main__":
    main()
