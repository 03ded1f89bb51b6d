import os

# Keep test output readable; individual tests raise the level where they assert on logs
os.environ.setdefault("SHAKETAB_LOG", "quiet")

import pytest

from tests.helpers import synthetic_record, write_at2


@pytest.fixture
def at2_file(tmp_path):
    """A 10 s synthetic record at 200 Hz."""
    return write_at2(tmp_path / "SYN001.AT2", synthetic_record(), 0.005)
