from temporal_qcsp.polymorphisms import IC, preserved_vector, su
from temporal_qcsp.sweeps import SUITES, _run, format_table, run_sweeps


def test_all_suites_clean():
    results = run_sweeps()
    assert len(results) == len(SUITES)
    for r in results:
        assert r.checked == 8192 and r.ok, (r.name, r.counterexamples[:3])
    table = format_table(results)
    assert all(r.name in table for r in results)


def test_sweep_detects_a_false_law():
    ic, su1 = preserved_vector(IC, 3), preserved_vector(su(1), 3)
    res = _run("ic-su1", "ic alone => su1", lambda m: not ic[m] or bool(su1[m]))
    assert not res.ok
    assert res.to_json()["counterexamples"] == len(res.counterexamples) > 0
