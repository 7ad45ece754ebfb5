import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from haken4.mcg import TwistWord, lantern_chart  # noqa: E402
from haken4.sl2z import TorusTwistWord  # noqa: E402

LANTERN = lantern_chart()


def torus_words(max_len: int = 10, max_exp: int = 5):
    letter = st.tuples(st.sampled_from("LR"), st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(letter, max_size=max_len).map(lambda ls: TorusTwistWord.of(*ls))


def single_letter_words(min_len: int = 1, max_len: int = 6):
    letter = st.tuples(st.sampled_from("LR"), st.sampled_from((1, -1)))
    words = st.lists(letter, min_size=min_len, max_size=max_len).map(lambda ls: TorusTwistWord.of(*ls))
    return words.filter(lambda w: len(w) >= min(min_len, 1))


def surface_words(chart=LANTERN, max_len: int = 12, max_exp: int = 2):
    letter = st.tuples(st.sampled_from(sorted(chart.curves)), st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(letter, max_size=max_len).map(lambda ls: TwistWord.of(*ls))
