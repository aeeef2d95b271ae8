import pytest

from corpus import entry_by_name
from properties.retraction import ScottMap, identity_map, retract_transfer, verify_map, verify_retraction
from utils.error.errors import NotContinuous, NotMonotone, NotRetraction, PreconditionFailed

LEVELS = [3, 4, 5]


@pytest.fixture
def chain():
    return entry_by_name("omega-chain").family


@pytest.fixture
def fig3():
    return entry_by_name("fig3").family


@pytest.fixture
def section(chain, fig3):
    return ScottMap("include", chain, fig3, lambda level, x: x)


def _collapse(fig3, chain, image_of_a: str = "1") -> ScottMap:
    return ScottMap("collapse", fig3, chain, lambda level, x: image_of_a if x == "a" else x)


class TestVerify:
    def test_identity_is_a_retraction(self, chain):
        verify_retraction(identity_map(chain), identity_map(chain), LEVELS)

    def test_chain_is_a_retract_of_fig3(self, section, chain, fig3):
        verify_retraction(section, _collapse(fig3, chain), LEVELS)

    def test_non_monotone_map(self, chain):
        bad = ScottMap("flip", chain, chain, lambda level, x: "1" if x == "w" else x)
        with pytest.raises(NotMonotone):
            verify_map(bad, 3)

    def test_map_that_drops_the_limit(self, chain):
        # 链的像一直上升，极限却被送到链顶
        bad = ScottMap("truncate", chain, chain, lambda level, x: str(level) if x == "w" else x)
        with pytest.raises(NotContinuous):
            verify_map(bad, 3)

    def test_map_outside_the_target(self, chain):
        bad = ScottMap("escape", chain, chain, lambda level, x: "nowhere")
        with pytest.raises(PreconditionFailed):
            bad.table(3)

    def test_not_a_left_inverse(self, section, chain, fig3):
        shift = ScottMap("shift", fig3, chain, lambda level, x: "w" if x in ("a", "w") else x)
        verify_retraction(section, shift, LEVELS)
        wrong = ScottMap("wrong", fig3, chain, lambda level, x: "w")
        with pytest.raises(NotRetraction):
            verify_retraction(section, wrong, LEVELS)

    def test_mismatched_pair(self, section, chain):
        with pytest.raises(NotRetraction):
            verify_retraction(section, identity_map(chain), LEVELS)


class TestTransfer:
    def test_one_step_transfers_vacuously_from_fig3(self, section, chain, fig3, settings):
        result = retract_transfer(section, _collapse(fig3, chain), "one-step", LEVELS, settings=settings)
        assert result == {"property": "one-step", "space": "Fails", "retract": "Holds", "ok": True}

    def test_weak_one_step_transfers(self, section, chain, fig3, settings):
        result = retract_transfer(section, _collapse(fig3, chain), "weak-one-step", LEVELS, settings=settings)
        assert result["space"] == "Holds"
        assert result["retract"] == "Holds"
        assert result["ok"]

    def test_other_properties_are_rejected(self, section, chain, fig3, settings):
        with pytest.raises(ValueError):
            retract_transfer(section, _collapse(fig3, chain), "continuous", LEVELS, settings=settings)
