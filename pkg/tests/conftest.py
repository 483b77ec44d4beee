import numpy as np
import pytest

from irsma.channel import ChannelRealization


def random_realization(rng: np.random.Generator, m: int, scale: float = 1.0) -> ChannelRealization:
    """Unstructured complex channels for solver/kernel tests."""
    def cn(n):
        return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)

    return ChannelRealization(
        q1=cn(m), q2=cn(m), hd1=complex(cn(1)[0]), hd2=complex(cn(1)[0])
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
