"""Shared fixtures; pose builders live in helpers.py."""

import pytest

from helpers import wave_frames


@pytest.fixture
def wave_track_path(tmp_path):
    from pyrofit.track import write_track

    path = tmp_path / "wave.trk.jsonl"
    write_track(path, name="wave", fps=30.0, frames=wave_frames(10.0, 30.0))
    return path
