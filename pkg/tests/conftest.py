import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from crnoma.channel import SystemConfig

REF_GAMMA_P = 2**0.5 - 1
REF_GAMMA_S = 2**2.5 - 1
REF_NOISE_DBM = -70.0

REFERENCE_CONFIG_TEXT = """\
# two-user downlink reference setup
n_bs = 2
m_pu = 2
k_su = 2
d_p_m = 350
d_s_m = 250
epsilon = 3
noise_dbm = -70
gamma_p_th = 0.41421356237309515
gamma_s_th = 4.656854249492381
"""


@pytest.fixture(scope="session")
def reference_config() -> SystemConfig:
    """Reference setup: 2x2x2 antennas, 350 m / 250 m links, exponent 3."""
    return SystemConfig(
        n_bs=2,
        m_pu=2,
        k_su=2,
        omega_h=350.0**3,
        omega_g=250.0**3,
        gamma_p_th=REF_GAMMA_P,
        gamma_s_th=REF_GAMMA_S,
    )


@pytest.fixture()
def reference_config_file(tmp_path) -> Path:
    path = tmp_path / "reference.cfg"
    path.write_text(REFERENCE_CONFIG_TEXT)
    return path
