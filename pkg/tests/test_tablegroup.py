import logging
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tablegrid.contours import CellBox
from tablegrid.tablegroup import NoTablesFound, containment, group_tables, orphan_cells


def outer(*c):
    return CellBox(*c, kind="outer")


def hole(*c):
    return CellBox(*c, kind="hole")


def grid_cells(x0, y0, rows, cols, size=30):
    return [hole(x0 + c * size + 1, y0 + r * size + 1, x0 + (c + 1) * size - 1, y0 + (r + 1) * size - 1)
            for r in range(rows) for c in range(cols)]


def test_containment_examples():
    big = CellBox(0, 0, 10, 10)
    assert containment(CellBox(2, 2, 8, 8), big, 0)
    assert containment(big, big, 0)
    assert not containment(CellBox(9, 9, 12, 12), big, 0)
    assert containment(CellBox(9, 9, 12, 12), big, 2)
    with pytest.raises(ValueError):
        containment(big, big, -1)


def test_two_tables():
    t1 = outer(0, 0, 150, 120)
    t2 = outer(0, 200, 90, 320)
    cells = grid_cells(0, 0, 4, 5) + grid_cells(0, 200, 4, 3)
    groups = group_tables([t2, t1], cells)
    assert [g.id for g in groups] == [1, 2]
    assert [len(g.cells) for g in groups] == [20, 12]
    assert groups[0].outline == t1


def test_empty_input():
    with pytest.raises(NoTablesFound, match="no table"):
        group_tables([], [])


def test_outline_without_cells_is_not_a_table():
    with pytest.raises(NoTablesFound):
        group_tables([outer(0, 0, 300, 1)], [])


def test_single_cell():
    groups = group_tables([outer(0, 0, 20, 20)], [hole(1, 1, 19, 19)])
    assert len(groups) == 1 and len(groups[0].cells) == 1


def test_orphans_reported(caplog):
    cells = [hole(1, 1, 19, 19), hole(100, 100, 120, 120)]
    with caplog.at_level(logging.WARNING):
        groups = group_tables([outer(0, 0, 20, 20)], cells)
    assert orphan_cells(groups, cells) == [cells[1]]
    assert "outside every table" in caplog.text


def test_nested_outline_absorbed_with_warning(caplog):
    big = outer(0, 0, 200, 200)
    inner = outer(50, 50, 100, 100)
    cells = [hole(1, 1, 199, 49), hole(51, 51, 99, 99)]
    with caplog.at_level(logging.WARNING):
        groups = group_tables([inner, big], cells)
    assert len(groups) == 1 and len(groups[0].cells) == 2
    assert "nested" in caplog.text


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 4)), min_size=1, max_size=4), st.randoms())
def test_partition_and_order_invariance(shapes, rnd):
    outers, cells = [], []
    for k, (r, c) in enumerate(shapes):
        x0 = k * 200
        outers.append(outer(x0, 0, x0 + c * 30, r * 30))
        cells += grid_cells(x0, 0, r, c)
    groups = group_tables(outers, cells)
    assert [len(g.cells) for g in groups] == [r * c for r, c in shapes]
    claimed = [id(c) for g in groups for c in g.cells]
    assert len(claimed) == len(set(claimed)) == len(cells)
    for g in groups:
        assert all(containment(c, g.outline, 2) for c in g.cells)
    o2, c2 = outers[:], cells[:]
    rnd.shuffle(o2)
    rnd.shuffle(c2)
    assert group_tables(o2, c2) == groups
    for a in groups:
        for b in groups:
            assert a is b or not containment(a.outline, b.outline, 0)
