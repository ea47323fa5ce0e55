"""Smoke test for the omv_py extension.

Build first:
    cargo build --release -p omv-py --features extension-module
then run:
    python3 python/smoke_test.py
"""

import importlib.util
import pathlib
import shutil
import sys
import tempfile
from fractions import Fraction


def load():
    try:
        import omv_py

        return omv_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        built = root / "target" / profile / "libomv_py.so"
        if built.exists():
            tmp = pathlib.Path(tempfile.mkdtemp()) / "omv_py.so"
            shutil.copy(built, tmp)
            spec = importlib.util.spec_from_file_location("omv_py", tmp)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("omv_py not built; run: cargo build --release -p omv-py --features extension-module")


def main():
    omv = load()

    m = omv.Matrix([[1, 0, 1], [0, 1, 0]])
    assert m.shape == (2, 3)
    assert m.mat_vec([0, 0, 1]) == [1, 0]
    assert m.vec_mat_vec([0, 1], [1, 0, 1]) is False
    assert omv.Matrix.parse(m.to_text()).rows() == m.rows()
    assert m.witnesses([1, 1], [1, 1, 1]) == ([0, 1], m.witnesses([1, 1], [1, 1, 1])[1])

    big = omv.Matrix.random(64, 48, "1/3", seed=5)
    naive, lookup = omv.Engine("naive"), omv.Engine("lookup:4")
    naive.preprocess(big)
    lookup.preprocess(big)
    v = [i % 3 == 0 and 1 or 0 for i in range(48)]
    assert naive.next(v) == lookup.next(v)
    assert lookup.table_bytes > 0

    names = omv.gadget_names()
    assert len(names) == 21 and "st-subconn" in names
    us, vs = [[1, 0], [0, 1]], [[1, 0, 0], [0, 1, 0]]
    for name in names:
        if name == "densest":
            continue
        run = omv.run_gadget(name, m, us, vs)
        assert run["recovered"] == [True, True], name
        assert run["within_budget"] and run["audit_mismatches"] == 0, name

    one = omv.Matrix([[1]])
    run = omv.run_gadget("densest", one, [[1]], [[1]])
    assert run["measured"] == [Fraction(13, 12)]
    k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    rho, members = omv.densest_subgraph(5, k4 + [(3, 4)])
    assert rho == Fraction(3, 2) and sorted(members) == [0, 1, 2, 3]

    out = omv.replay("subconn", "3 2\n0 1\n1 2\n", "q 0 2\noff 1\nq 0 2\n")
    assert out == "q 0 2 -> true\nq 0 2 -> false\nupdates=1 queries=2\n"

    passed, text = omv.verify(seed=1, trials=2, sizes="3x3x2", targets="st-subconn,triangle,naive")
    assert passed and text.endswith("status=pass\n")
    passed, _ = omv.verify(sizes="3x3x2", targets="pagh", inject_faults=True)
    assert not passed

    csv = omv.bench(sizes="32x32x4", targets="naive,lookup:4")
    assert csv.splitlines()[0].startswith("target,n1,n2,n3,trials")
    assert "ratio lookup:4/naive" in omv.report(csv)

    try:
        omv.Engine("warp-drive")
    except ValueError:
        pass
    else:
        raise AssertionError("bad engine spec accepted")

    print("omv_py smoke test: ok")


if __name__ == "__main__":
    main()
