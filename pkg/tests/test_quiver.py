import numpy as np
import pytest

from fadhm.quiver import (
    Arrow,
    FiltrationSpec,
    Quiver,
    QuiverError,
    block_mask,
    double,
    filtered_mask,
    generic_rep,
    group_dims,
)


def test_double_jordan():
    dq = double(Quiver.jordan())
    assert [(a.name, a.eps) for a in dq.arrows] == [("r", 1), ("s", -1)]
    for a in dq.arrows:
        assert dq[dq.op(a.name)].op == a.name


def test_double_a2():
    dq = double(Quiver.linear(2))
    a, aop = dq.arrows
    assert (a.tail, a.head) == ("1", "2") and (aop.tail, aop.head) == ("2", "1")


def test_invalid_quivers():
    with pytest.raises(QuiverError):
        Quiver(("1",), (Arrow("a", "1", "2"),))
    with pytest.raises(QuiverError):
        Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("a", "2", "1")))
    with pytest.raises(QuiverError):
        double(Quiver(("1",), (Arrow("a", "1", "1", "b"), Arrow("b", "1", "1"))))


def test_complete_flag_masks():
    dq = double(Quiver.jordan())
    dims = {"1": 3}
    f = FiltrationSpec.complete(dims)
    fwd = block_mask(dq, "r", dims, f)
    op = block_mask(dq, "s", dims, f)
    assert fwd.allowed == {(p, q) for p in range(3) for q in range(3) if p <= q}
    assert op.allowed == {(p, q) for p in range(3) for q in range(3) if p >= q}
    assert op == fwd.transpose()


def test_parabolic_mask_and_dims():
    dims = {"1": 3}
    f = FiltrationSpec.from_blocks({"1": (2, 1)})
    m = block_mask(double(Quiver.jordan()), "r", dims, f)
    assert len(m) == 7
    assert {(p, q) for p in range(3) for q in range(3)} - m.allowed == {(2, 0), (2, 1)}
    assert group_dims(dims, f) == ({"1": 7}, 7)
    assert group_dims({"1": 3}, FiltrationSpec.complete({"1": 3}))[1] == 6


def test_trivial_filtration_full_mask():
    assert filtered_mask(2, 3, (3,), (2,)).all()


def test_ragged_filtrations_padded():
    # tail has 3 steps, head only 1: head stays at its top
    m = filtered_mask(2, 3, (1, 2, 3), (2,))
    assert m.all()
    m = filtered_mask(2, 2, (1, 2), (0, 2))
    assert not m[:, 0].any() and m[:, 1].all()


def test_filtration_validation():
    f = FiltrationSpec({"1": (1, 3), "9": (1,)})
    paths = [p for p, _ in f.validate({"1": 2})]
    assert paths == ["filtration.1", "filtration.9"]
    with pytest.raises(QuiverError):
        filtered_mask(2, 2, (1, 3), (1, 2))


@pytest.mark.parametrize("n,blocks,count", [(2, None, 10), (1, None, 4), (3, (2, 1), 20)])
def test_variable_counts(n, blocks, count):
    dims = {"1": n}
    f = FiltrationSpec.complete(dims) if blocks is None else FiltrationSpec.from_blocks({"1": blocks})
    rep = generic_rep(double(Quiver.jordan()), dims, {"1": 1}, f)
    assert rep.nvars == count


def test_variable_names_and_pairing():
    dims = {"1": 2}
    rep = generic_rep(double(Quiver.jordan()), dims, {"1": 1}, FiltrationSpec.complete(dims))
    assert rep.ring.names == ("r11", "r12", "r22", "s11", "s21", "s22", "i1", "i2", "j1", "j2")
    tr = rep.ring.coerce(np.trace(rep.C["r"] @ rep.C["s"]))
    # trace pairing pairs r_pq with s_qp, each with coefficient 1
    assert tr.to_text() == "r11*s11 + r12*s21 + r22*s22"


def test_multi_framed_names():
    Q = Quiver.linear(2)
    dims = {"1": 1, "2": 1}
    rep = generic_rep(double(Q), dims, {"1": 1, "2": 2}, FiltrationSpec.complete(dims))
    assert "i1_1" in rep.ring.names and "i2_12" in rep.ring.names
    assert rep.nvars == 1 + 1 + 2 * 1 + 2 * 2
