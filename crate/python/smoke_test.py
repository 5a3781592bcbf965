"""Smoke test for the pygqplab extension module.

Build and install first:  pip install --no-build-isolation crates/py
"""

import pygqplab

UNIFORM3 = """\
states: 3
consequences: 3
order: 0 < 1
order: 1 < 2
model: expectation
weight 0: 1/3
weight 1: 1/3
weight 2: 1/3
utility 0: 0
utility 1: 1/2
utility 2: 1
"""

RANKED4 = """\
states: 4
consequences: 2
order: 0 < 1
model: ranked
rank: 0 1 2 3
"""

MISSING_EMPTY = """\
states: 1
relation:
10
11
"""


def main():
    rows = pygqplab.check_postulates(UNIFORM3)
    verdicts = {check: verdict for check, verdict, _, _ in rows}
    for name in ["Q1", "Q2", "Q3", "Q4", "Q'4", "Q5", "Q6", "R"]:
        assert verdicts[name] == "pass", (name, verdicts[name])

    derived = pygqplab.derive(UNIFORM3)
    assert pygqplab.check_gqp(derived)[1] == "pass"
    assert pygqplab.classify(derived) == (True, True, False)
    assert pygqplab.classify(pygqplab.derive(RANKED4)) == (True, False, True)

    check, verdict, witness, note = pygqplab.check_gqp(MISSING_EMPTY)
    assert verdict == "fail" and witness is not None, (verdict, witness, note)
    assert pygqplab.classify(MISSING_EMPTY) is None

    relations, complete = pygqplab.enumerate_gqps(2)
    assert complete and len(relations) == 9
    assert all(pygqplab.round_trip(r) for r in relations)
    assert len(pygqplab.sample_gqps(3, 10, seed=1)) == 10

    status, _, _ = pygqplab.intersection_conjecture(relations[0])
    assert status == "holds-on-instance"
    status, nodes, stats = pygqplab.q7_search(2, 2)
    assert status == "holds-on-instance" and nodes > 0, (status, stats)
    assert pygqplab.verify_theorem2(UNIFORM3)[1] == "pass"

    try:
        pygqplab.check_gqp("states: 2\nrelation:\n1111\n")
    except ValueError as e:
        assert "line 2, column 1" in str(e), e
    else:
        raise AssertionError("truncated relation accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
