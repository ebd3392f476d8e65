"""Tests for ADE identification and minimal-orbit vectors."""

from pathlib import Path

import pytest

from src.core.exceptions import ClassificationFailureError, NoFiniteMinimalOrbitError
from src.models.algebra import GAVector
from src.repositories.artifact_repository import canonical_json
from src.services.algebra_service import make_seifert
from src.services.root_system_service import RootSystemService, identify_type, root_count, weyl_order


def classify(*orders: int):
    return RootSystemService(make_seifert(orders)).classify_root_system()


class TestTypeTables:

    @pytest.mark.parametrize(
        "rank,roots,label",
        [(4, 20, "A4"), (4, 24, "D4"), (6, 72, "E6"), (7, 126, "E7"), (8, 240, "E8"), (3, 12, "A3")],
    )
    def test_identify(self, rank, roots, label):
        assert identify_type(rank, roots) == label
        assert root_count(label) == roots

    def test_unknown(self):
        with pytest.raises(ClassificationFailureError):
            identify_type(5, 7)

    @pytest.mark.parametrize("label,order", [("A4", 120), ("D4", 192), ("E6", 51840), ("E8", 696729600)])
    def test_weyl_order(self, label, order):
        assert weyl_order(label) == order


class TestClassifyPositive:

    @pytest.mark.parametrize(
        "orders,label,roots,order,d",
        [
            ((2, 3, 5), "E8", 240, 696_729_600, 240),
            ((2, 3, 4), "E6", 72, 51_840, 27),
            ((2, 3, 3), "D4", 24, 192, 8),
            ((2, 2, 3), "D4", 24, 192, 8),
            ((2, 2, 5), "D6", 60, 23_040, 12),
            ((2, 2, 4), "A4", 20, 120, 5),
            ((2, 2, 6), "A6", 42, 5_040, 7),
        ],
    )
    def test_rows(self, orders, label, roots, order, d):
        report = classify(*orders)
        assert report.type == label
        assert report.root_count == roots
        assert report.weyl_order == order
        assert report.minimal_orbit_order == d
        assert report.affine is None

    def test_coxeter_number_coincidence(self):
        assert classify(2, 3, 5).coxeter_matches


class TestClassifyAffine:

    @pytest.mark.parametrize(
        "orders,label,roots,d",
        [
            ((2, 2, 2, 2), "A1", 2, 2),
            ((3, 3, 3), "A2", 6, 3),
            ((2, 4, 4), "A3", 12, 4),
            ((2, 3, 6), "A5", 30, 6),
        ],
    )
    def test_rows(self, orders, label, roots, d):
        report = classify(*orders)
        assert report.type == label
        assert report.root_count == roots
        assert report.minimal_orbit_order == d
        assert report.affine == f"{label}-hat"
        assert report.chi == "0"


class TestClassifyNegative:

    def test_hyperbolic_geometry_is_infinite(self):
        report = classify(2, 3, 7)
        assert report.type == "Infinite"
        assert report.root_count is None
        assert report.chi == "-1/42"


class TestMinimalOrbitVector:

    @pytest.mark.parametrize(
        "orders,expected,d",
        [
            ((2, 3, 3), [0, 0, 0, 1, -1, 1], 8),
            ((2, 3, 4), [1, 0, 0, 0, 0, 0, 1, -1, 0, 1, 0, -1], 27),
        ],
    )
    def test_orbit_matches_expected_up_to_shift_and_sign(self, orders, expected, d):
        service = RootSystemService(make_seifert(orders))
        orbit = service.dynamics.enumerate_orbit(service.minimal_orbit_vector())
        assert orbit.size == d
        target = GAVector.of(expected)
        members = set(orbit.members)
        assert any(s * target.shift(j) in members for j in range(len(target)) for s in (1, -1))

    @pytest.mark.parametrize("p", [3, 5])
    def test_2_2_odd_seed_is_vector_node(self, p):
        service = RootSystemService(make_seifert((2, 2, p)))
        orbit = service.dynamics.enumerate_orbit(service.minimal_orbit_vector())
        assert orbit.size == 2 * (p + 1)
        target = GAVector.basis(2 * p, 0) + GAVector.basis(2 * p, p)
        assert any(target.shift(j) in set(orbit.members) for j in range(2 * p))

    def test_2_2_3_spinor_orbit_not_chosen(self):
        service = RootSystemService(make_seifert((2, 2, 3)))
        members = set(service.dynamics.enumerate_orbit(service.minimal_orbit_vector()).members)
        spinor = GAVector.of([1, 0, 1, 0, 1, 0])
        assert not any(s * spinor.shift(j) in members for j in range(6) for s in (1, -1))

    def test_2_3_5_orbit_has_240_members(self):
        service = RootSystemService(make_seifert((2, 3, 5)))
        v = service.minimal_orbit_vector()
        orbit = service.dynamics.enumerate_orbit(v)
        assert orbit.size == 240
        assert orbit.is_finite
        target = GAVector.of([1 if (l + 1) % 5 == 0 else 0 for l in range(30)])
        members = set(orbit.members)
        assert any(s * target.shift(j) in members for j in range(30) for s in (1, -1))

    @pytest.mark.parametrize("orders", [(2, 2, 2, 2), (2, 3, 7)])
    def test_needs_positive_chi(self, orders):
        with pytest.raises(NoFiniteMinimalOrbitError):
            RootSystemService(make_seifert(orders)).minimal_orbit_vector()


GOLDEN = Path(__file__).parent.parent / "golden" / "root_systems.json"
TABLE_FIELDS = ("affine", "chi", "minimal_orbit_order", "root_count", "type", "weyl_order")


@pytest.mark.golden
class TestGoldenTable:

    def test_root_system_table_bytes(self):
        """Every tabulated geometry, serialized canonically, matches the committed table byte for byte."""
        geometries = [(2, 2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5), (2, 2, 6), (2, 3, 3),
                      (2, 3, 4), (2, 3, 5), (2, 3, 6), (2, 3, 7), (2, 4, 4), (3, 3, 3)]
        table = {}
        for orders in geometries:
            report = classify(*orders).model_dump()
            table[" ".join(map(str, orders))] = {key: report[key] for key in TABLE_FIELDS}
        assert (canonical_json(table) + "\n").encode("utf-8") == GOLDEN.read_bytes()
