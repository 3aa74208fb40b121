import logging

import pytest

from core.piped import MonoclinicPiped

# P1 at (m, n) = (1, 4)
FIXTURE_RAW = (49504, 37128, 49920, 61880, 70304, 85272, 21672, 98600, 54040)
FIXTURE_PRIMITIVE = (6188, 4641, 6240, 7735, 8788, 10659, 2709, 12325, 6755)
FIXTURE_CANONICAL = (6188, 4641, 6240, 7735, 8788, 2709, 10659, 6755, 12325)


@pytest.fixture
def fixture_piped() -> MonoclinicPiped:
    return MonoclinicPiped(*FIXTURE_PRIMITIVE)


@pytest.fixture
def canonical_piped() -> MonoclinicPiped:
    return MonoclinicPiped(*FIXTURE_CANONICAL)


@pytest.fixture(autouse=True)
def detach_log_handlers():
    """CLI runs bind handlers to captured streams that close afterwards"""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
