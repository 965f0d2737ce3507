from __future__ import annotations

import random
from pathlib import Path

import pytest

from oracles import MOOD_NAMES, random_vocab

DATA = Path(__file__).parent / "data"


@pytest.fixture
def sample_lyric() -> str:
    return (DATA / "sample_lyric.txt").read_text(encoding="utf-8")


@pytest.fixture
def screenshot_csv() -> str:
    return (DATA / "kb_screenshot.csv").read_text(encoding="utf-8")


def write_corpus(root: Path, songs: dict[str, dict[str, str]]) -> Path:
    """songs: mood -> {title: body}."""
    for mood, items in songs.items():
        d = root / mood
        d.mkdir(parents=True, exist_ok=True)
        for title, body in items.items():
            (d / f"{title}.txt").write_text(body, encoding="utf-8")
    return root


def separable_songs(rng: random.Random, per_mood: int, words_per_song: int = 12) -> dict[str, dict[str, str]]:
    """Disjoint vocabulary per mood; every song draws only from its mood's words."""
    vocab = random_vocab(rng, 40 * len(MOOD_NAMES))
    songs = {}
    for i, mood in enumerate(MOOD_NAMES):
        words = vocab[i::len(MOOD_NAMES)]
        songs[mood] = {
            f"{mood}_{j:03d}": " ".join(rng.choice(words) for _ in range(words_per_song)) + "\n"
            for j in range(per_mood)
        }
    return songs


def shared_songs(rng: random.Random, per_mood: int) -> dict[str, dict[str, str]]:
    """Overlapping vocabulary with a per-mood bias, so predictions are imperfect."""
    vocab = random_vocab(rng, 60)
    songs = {}
    for i, mood in enumerate(MOOD_NAMES):
        biased = vocab[i * 8:(i + 1) * 8]
        songs[mood] = {
            f"{mood}_{j:03d}": "\n".join(
                " ".join(rng.choice(biased if rng.random() < 0.35 else vocab) for _ in range(6))
                for _ in range(4)
            )
            for j in range(per_mood)
        }
    return songs


@pytest.fixture
def corpus_factory(tmp_path):
    def make(songs, name="corpus"):
        return write_corpus(tmp_path / name, songs)
    return make


_acceptance_results: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _acceptance_results[number] = (outcome, title)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        outcome, title = _acceptance_results[number]
        terminalreporter.write_line(f"[{outcome}] {number}. {title}")
