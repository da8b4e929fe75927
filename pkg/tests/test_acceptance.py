"""One test per acceptance criterion; each prints a [PASS]/[FAIL] line."""

import pytest

from nilcount import verify

EXPECTED = {
    1: lambda d: [d[n] for n in range(1, 6)] == [1, 3, 25, 543, 29281],
    2: lambda d: all(v == {"diagonal": 0, "antisymmetry": 0} for v in d.values()) and sorted(d) == [1, 2, 3, 4],
    3: lambda d: (d[(1, 1)], d[(2, 1)], d[(2, 2)], d[(3, 3)]) == (1, 2, 12, 405) and len(d) == 16,
    4: lambda d: len(d) == 9 and d[(2, 2)] == {"pairs": 12, "trees": 4} and d[(3, 3)]["trees"] == 81,
    5: lambda d: d[(2, 1, 1)] == 3 and d[(2, 2, 2)] == 112 and d[(3, 1, 2)] == 33 and (2, 3, 3) in d,
    6: lambda d: d["tuples"] == 324,
    7: lambda d: all(v["triples"] == v["image"] == q ** (2 * m * n) for (q, m, n), v in d.items()) and len(d) == 5,
    # l=1: (4-1)^2 * 2 * 2 * N(1,1) = 108; l=2: ((4-1)(4-2))^2 = 36
    8: lambda d: d[(2, 2, 2)] == [112, 108, 36] and all(sum(h) == q ** (2 * m * n) for (q, m, n), h in d.items()),
    9: lambda d: d[(2, 2)]["bb"] == d[(2, 2)]["uu"] + 256,
    10: lambda d: True,
}


@pytest.fixture(scope="module")
def results():
    return {i: c() for i, c in enumerate(verify.CRITERIA, start=1)}


@pytest.mark.parametrize("index", range(1, 11))
def test_criterion(results, index, capsys):
    res = results[index]
    ok = res.passed and res.elapsed_s < res.budget_s and EXPECTED[index](res.details)
    with capsys.disabled():
        print(f"\n{res.line()}{'' if ok else ' <- ' + repr([f.as_dict() for f in res.failures])}")
    assert res.passed, [f.as_dict() for f in res.failures]
    assert res.elapsed_s < res.budget_s
    assert EXPECTED[index](res.details), res.details
