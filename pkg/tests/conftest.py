import math

import pytest

from nvsk import DiamondSample


@pytest.fixture
def n1_sample():
    """1 ppm N_S0 and nothing else."""
    return DiamondSample.build(1.0, nv_minus_ppm=0.0, nv0_ppm=0.0, c13_ppm=0.0, t1_s=math.inf)
