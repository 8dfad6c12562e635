import random
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# Known class counts of the bundled fixture files (Hope, NotHope, NotLanguage).
FIXTURE_COUNTS = {
    "en_train.tsv": (20, 30, 2),
    "en_test.tsv": (10, 14, 1),
    "ta_train.tsv": (10, 12, 1),
    "ml_train.tsv": (10, 12, 1),
}

_EN_WORDS = (
    "the of and to in is you that it he was for on are as with his they at be "
    "this have from or one had by word but not what all were we when your can "
    "said there use an each which she do how their if will up other about out "
    "many then them these so some her would make like him into time has look "
    "two more write go see number no way could people my than first water been "
    "called who oil sit now find long down day did get come made may part over"
).split()

_SYLLABLE_CHARS = {
    "hi": "कखगघचछजझटठडढतथदधनपफबभमयरलवशषसह",
    "ta": "கஙசஞடணதநபமயரலவழளறன",
    "ml": "കഖഗഘചഛജഝടഠഡഢതഥദധനപഫബഭമയരലവശഷസഹ",
}
_VOWEL_SIGNS = {
    "hi": ["", "ा", "ि", "ी", "ु", "ू", "े", "ो"],
    "ta": ["", "ா", "ி", "ீ", "ு", "ூ", "ெ", "ோ"],
    "ml": ["", "ാ", "ി", "ീ", "ു", "ൂ", "െ", "ോ"],
}


def _indic_word(rng, lang):
    return "".join(
        rng.choice(_SYLLABLE_CHARS[lang]) + rng.choice(_VOWEL_SIGNS[lang])
        for _ in range(rng.randint(2, 4))
    )


def synthetic_sentences(lang: str, n: int, seed: int, holdout: bool = False):
    """n sentences in the given language; holdout uses a disjoint word pool."""
    rng = random.Random(f"{seed}-{lang}-{holdout}")
    if lang == "en":
        half = len(_EN_WORDS) // 2
        pool = _EN_WORDS[half:] if holdout else _EN_WORDS[:half]
    else:
        pool_rng = random.Random(f"{seed}-{lang}-pool-{holdout}")
        pool = [_indic_word(pool_rng, lang) for _ in range(60)]
    return [
        " ".join(rng.choice(pool) for _ in range(rng.randint(4, 10)))
        for _ in range(n)
    ]


@pytest.fixture(scope="session")
def trained_profiles():
    from hopedetect import langid

    return [
        langid.train_profile(synthetic_sentences(lang, 200, seed=11), lang)
        for lang in ("en", "hi", "ta", "ml")
    ]
