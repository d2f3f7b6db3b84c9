"""Smoke test for the milfib extension module.

Build and run from the repository root:

    cargo build --release -p milfib-py --features extension-module
    cp target/release/libmilfib.so python/milfib.so
    python3 python/smoke_test.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

import milfib  # noqa: E402


def main():
    braid = milfib.Arrangement.named("braid")
    assert braid.degree == 6
    assert [row["b1"] for row in braid.spectrum()] == [0, 1, 0, 1, 0]
    assert braid.grf(2) == (0, 1)
    assert braid.aomoto_h1(2, [0, 5]) == 1
    assert braid.nets(3) == [[0, 1, 2, 2, 1, 0]]
    assert braid.check_residue(2, [0, 5])["branch"] is not None

    hesse = milfib.Arrangement.named("hesse")
    assert hesse.b1(6) == 2

    ex = milfib.Arrangement.named("ex-3-1-iii")
    assert ex.search_residue(3) is None
    found = ex.realize([27])
    assert found["candidates"]
    assert all(c["induced_triples"] == 9 and c["new_triples"] == 0 for c in found["candidates"])

    doc = json.loads(milfib.Arrangement.named("pappus-dual").analyze_json())
    assert all(check["passed"] for check in doc["consistency"])

    c4 = (pathlib.Path(__file__).resolve().parent.parent / "data" / "braid-c4.json").read_text()
    section = milfib.Arrangement.from_json(c4, seed=7)
    assert [row["b1"] for row in section.spectrum()] == [0, 1, 0, 1, 0]

    try:
        milfib.Arrangement.named("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown names must raise ValueError")

    outcomes = milfib.examples(["braid"])
    assert len(outcomes) == 1 and all(c["passed"] for c in outcomes[0]["checks"])
    print("python smoke test passed")


if __name__ == "__main__":
    main()
