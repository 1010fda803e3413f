import math

import numpy as np
import pytest

from qstatten.errors import InvalidArgumentError
from qstatten.povm import product_povm, sic_overlap, sic_povm, validate_povm


def hs_overlap(a, b):
    return float(np.real(np.trace(a @ b)))


def test_sic_overlap_formula_values():
    # (d*delta + 1)/(d^2 (d+1)) evaluated by hand
    assert sic_overlap(2, 0, 0) == pytest.approx(1 / 4)
    assert sic_overlap(2, 0, 1) == pytest.approx(1 / 12)
    assert sic_overlap(3, 2, 2) == pytest.approx(1 / 9)
    assert sic_overlap(3, 0, 5) == pytest.approx(1 / 36)


@pytest.mark.parametrize("d", [2, 3])
def test_sic_povm_certification(d):
    p = sic_povm(d)
    assert p.eta == d * d
    assert p.sic
    total = p.operators.sum(axis=0)
    assert np.max(np.abs(total - np.eye(d))) <= 1e-10
    for k in range(p.eta):
        assert np.trace(p.operators[k]).real == pytest.approx(1 / d, abs=1e-12)
        assert np.min(np.linalg.eigvalsh(p.operators[k])) >= -1e-12
    for j in range(p.eta):
        for k in range(p.eta):
            assert hs_overlap(p.operators[j], p.operators[k]) == pytest.approx(
                sic_overlap(d, j, k), abs=1e-10
            )


def test_sic_off_diagonal_overlaps_all_equal():
    for d in (2, 3):
        p = sic_povm(d)
        vals = [
            hs_overlap(p.operators[j], p.operators[k])
            for j in range(p.eta)
            for k in range(p.eta)
            if j != k
        ]
        assert max(vals) - min(vals) < 1e-12


def test_sic_povm_rejects_unsupported_dimension():
    with pytest.raises(InvalidArgumentError):
        sic_povm(4)


def test_qubit_operator_order_is_frozen():
    # first tetrahedron axis is (1,1,1)/sqrt(3); hand-built matrix
    s = 1 / math.sqrt(3)
    expected = np.array([[1 + s, s - 1j * s], [s + 1j * s, 1 - s]]) / 4
    assert np.allclose(sic_povm(2).operators[0], expected, atol=1e-15)


def test_qutrit_operator_order_is_frozen():
    # k=0 is (a,b)=(0,0): the bare fiducial (|0>-|1>)/sqrt(2), scaled by 1/3
    expected = np.array([[1, -1, 0], [-1, 1, 0], [0, 0, 0]], dtype=complex) / 6
    assert np.allclose(sic_povm(3).operators[0], expected, atol=1e-15)
    # k=3a+b ordering: k=3 applies the shift once, moving support off row 0
    m3 = sic_povm(3).operators[3]
    assert abs(m3[0, 0]) < 1e-15 and abs(m3[1, 1]) > 0.1


@pytest.mark.parametrize("d,eta", [(2, 16), (3, 81)])
def test_product_povm_complete(d, eta):
    p = sic_povm(d)
    pp = product_povm(p, p)
    assert pp.eta == eta
    assert pp.dim == d * d
    assert not pp.sic
    assert np.max(np.abs(pp.operators.sum(axis=0) - np.eye(d * d))) <= 1e-10


def test_product_povm_order_and_traces():
    p = sic_povm(2)
    pp = product_povm(p, p)
    for j in range(4):
        for k in range(4):
            got = pp.operators[j * 4 + k]
            want = np.kron(p.operators[j], p.operators[k])
            assert np.array_equal(got, want)
            tr = np.trace(p.operators[j]).real * np.trace(p.operators[k]).real
            assert np.trace(got).real == pytest.approx(tr, abs=1e-12)


def test_probability_normalization():
    gen = np.random.Generator(np.random.Philox(11))
    for p in (sic_povm(2), sic_povm(3), product_povm(sic_povm(2), sic_povm(2))):
        a = gen.normal(size=(p.dim, p.dim)) + 1j * gen.normal(size=(p.dim, p.dim))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        probs = [np.trace(op @ rho).real for op in p.operators]
        assert sum(probs) == pytest.approx(1.0, abs=1e-10)
        assert min(probs) >= -1e-12


def test_validate_povm_clean_sets():
    assert validate_povm(sic_povm(2)) == []
    assert validate_povm(product_povm(sic_povm(3), sic_povm(3))) == []


def test_validate_povm_reports_scaled_operator():
    p = sic_povm(2)
    ops = p.operators.copy()
    ops[0] = ops[0] * 1.1
    bad = type(p)(dim=2, operators=ops, sic=True)
    report = validate_povm(bad)
    names = [name for name, _ in report]
    assert "completeness" in names
    magnitude = dict(report)["completeness"]
    assert magnitude == pytest.approx(0.1 * np.max(np.abs(p.operators[0])), rel=0.05)


def test_validate_povm_reports_non_hermitian():
    p = sic_povm(2)
    ops = p.operators.copy()
    ops[1, 0, 1] += 0.05
    bad = type(p)(dim=2, operators=ops, sic=False)
    assert any("hermiticity" in name for name, _ in validate_povm(bad))
