import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from agegait.config import AnalysisConfig
from agegait.synth import WalkerSpec, generate


MINIMAL_BVH = """HIERARCHY
ROOT Hips
{
\tOFFSET 0.000000 0.000000 0.000000
\tCHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
\tJOINT Chest
\t{
\t\tOFFSET 0.000000 5.000000 0.000000
\t\tCHANNELS 3 Zrotation Xrotation Yrotation
\t\tEnd Site
\t\t{
\t\t\tOFFSET 0.000000 2.000000 0.000000
\t\t}
\t}
}
MOTION
Frames: 2
Frame Time: 0.033333
0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0 0.0
1.0 2.0 3.0 10.0 20.0 30.0 5.0 0.0 0.0
"""


@pytest.fixture
def minimal_bvh_text() -> str:
    return MINIMAL_BVH


@pytest.fixture(scope="session")
def default_config() -> AnalysisConfig:
    return AnalysisConfig()


@pytest.fixture(scope="session")
def clean_walker():
    """Noise-free straight walker shared by slow-ish tests."""
    return generate(WalkerSpec(seed=11))


@pytest.fixture(scope="session")
def short_walker():
    return generate(WalkerSpec(duration_s=10.0, seed=5))
