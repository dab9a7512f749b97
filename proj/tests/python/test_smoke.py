import json
import os
import subprocess

import numpy as np
import pytest

import lassoeq


def duplicated_data(n=40, seed=0):
    rng = np.random.default_rng(seed)
    a, b, c = rng.standard_normal((3, n))
    X = np.column_stack([a, a, b, c])
    y = 3 * a + 2 * b - 1.5 * c + 0.3 * rng.standard_normal(n)
    X = (X - X.mean(0)) / X.std(0, ddof=1)
    return X, y - y.mean()


def test_fit_satisfies_optimality():
    X, y = duplicated_data()
    lam = 0.1 * lassoeq.lambda_max(X, y)
    sol = lassoeq.fit(X, y, lam)
    assert lassoeq.kkt_check(sol, X, y, lam) <= 1e-6


def test_strong_enumeration_swaps_copies():
    X, y = duplicated_data()
    ref = lassoeq.fit_reference(X, y, 0.1 * lassoeq.lambda_max(X, y))
    assert ref.support[:2] == [0, 1]
    total = ref.beta[0] + ref.beta[1]
    sols = lassoeq.enumerate_strong(ref, X, y).solutions
    assert len(sols) == 2
    tops = sorted(max(s.beta[0], s.beta[1]) for s in sols)
    assert tops == pytest.approx([total, total], abs=1e-8)
    for s in sols:
        assert np.allclose(X @ s.beta, X @ ref.beta, atol=1e-8)


def test_relaxed_and_categorize():
    X, y = duplicated_data(seed=1)
    ref = lassoeq.fit_reference(X, y, 0.1 * lassoeq.lambda_max(X, y))
    out = lassoeq.enumerate_relaxed(ref, X, y, tol=0.01)
    assert len(out.solutions) >= 2
    assert all(s.metric_value <= 1.01 * out.reference_metric * (1 + 1e-12) for s in out.solutions)
    labels = [b.label for b in lassoeq.categorize_variables(ref, X)]
    assert labels[:2] == ["replaceable", "replaceable"]
    assert set(labels[2:]) == {"indispensable"}


def test_report_helpers():
    assert lassoeq.jaccard([1, 2, 3], [1, 2, 3]) == 1.0
    assert lassoeq.jaccard([1, 2], [3, 4]) == 0.0
    assert lassoeq.jaccard([1, 2, 3, 4], [3, 4, 5, 6]) == pytest.approx(1 / 3)
    assert lassoeq.coefficient_of_variation([2.0, 2.0]) == 0.0
    rep = lassoeq.signature_report([[0, 1], [0, 2]], [0.5, 0.7])
    assert rep.groups[0].mean_jaccard == pytest.approx(1 / 3)
    assert rep.cov_performance is not None


def test_errors_map_to_python_exceptions():
    with pytest.raises(lassoeq.InputError):
        lassoeq.coefficient_of_variation([1.0])
    with pytest.raises(lassoeq.Error):
        lassoeq.thin_svd(np.zeros((0, 0)))


@pytest.mark.skipif("LASSOEQ_CLI" not in os.environ, reason="CLI binary not provided")
def test_cli_pipeline(tmp_path):
    X, y = duplicated_data(seed=2)
    csv = tmp_path / "data.csv"
    header = "a,a_copy,b,c,y"
    np.savetxt(csv, np.column_stack([X, y]), delimiter=",", header=header, comments="")
    cli = os.environ["LASSOEQ_CLI"]
    model, sols = tmp_path / "model.json", tmp_path / "sols.json"
    subprocess.run([cli, "fit", "--data", str(csv), "--target", "y", "--out", str(model)], check=True)
    subprocess.run([cli, "enumerate", "--model", str(model), "--out", str(sols)], check=True)
    assert len(json.loads(sols.read_text())["solutions"]) >= 2
    bad = subprocess.run([cli, "fit", "--data", str(tmp_path / "none.csv"), "--target", "y",
                          "--out", str(model)], capture_output=True)
    assert bad.returncode == 2
