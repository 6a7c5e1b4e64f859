import pytest

from coolspec import BathSpec, SystemSpec


@pytest.fixture
def bath():
    # shipped default bath: weak coupling, unit cutoff, warm
    return BathSpec(alpha=0.01, omega_c=1.0, temperature=3.0)


@pytest.fixture
def driven_spec():
    return SystemSpec(e_man=2.0, delta=0.0, omega_rabi=1.0, gamma_rad=0.5)
