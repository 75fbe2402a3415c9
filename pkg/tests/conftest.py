"""Shared sources and fixtures: the three canonical programs used throughout."""

import pytest

SQUARE_SRC = """repeat 4
  move 10
  yaw 90
end
"""

CIRCLE_SRC = """nstops = 20
for i to nstops
  proportion = i / nstops * 2 * pi
  moveto (3 * sin proportion) 0 (3 * cos proportion)
end
"""

WAVE_SRC = """length a b = (a * a + b * b) ^ 0.5
amplitude = 2
for r in 0..100
  for c in 0..100
    moveto c r (amplitude * sin(length c r))
  end
end
"""


@pytest.fixture
def square_src() -> str:
    return SQUARE_SRC


@pytest.fixture
def circle_src() -> str:
    return CIRCLE_SRC


@pytest.fixture
def wave_src() -> str:
    return WAVE_SRC
