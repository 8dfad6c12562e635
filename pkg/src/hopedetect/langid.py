"""Character n-gram language detection with an Indic-script shortcut.

A pure order-n model (default trigram, add-alpha 0.5, no back-off) scores
each text per language; before scoring, if at least half of the letters sit
in one Indic script block, that block's language wins outright. Code-mixed
comments are exactly where statistical detectors fail, and native-script
presence is a near-certain signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import DatasetLang
from .errors import EmptyCorpus, EmptyText, NoProfiles

PROFILE_VERSION = "langprofile-v1"

SUPPORTED_LANGS = ("en", "hi", "ml", "ta")

# Script block -> language code used by the shortcut.
_SCRIPT_LANG = {"Tamil": "ta", "Malayalam": "ml", "Devanagari": "hi"}

_SCRIPT_RANGES = {
    "Tamil": (0x0B80, 0x0BFF),
    "Malayalam": (0x0D00, 0x0D7F),
    "Devanagari": (0x0900, 0x097F),
}


@dataclass(frozen=True)
class LanguageProfile:
    lang: str
    n: int
    logprob: dict[str, float]
    smoothing_alpha: float
    unseen_logprob: float  # mass for n-grams never observed in training


@dataclass(frozen=True)
class DetectionResult:
    best: str
    scores: dict[str, float]


def _char_ngrams(text: str, n: int):
    for i in range(len(text) - n + 1):
        yield text[i : i + n]


def train_profile(corpus, lang: str, n: int = 3, alpha: float = 0.5) -> LanguageProfile:
    """Count character n-grams over the corpus and smooth with add-alpha."""
    if not corpus:
        raise EmptyCorpus("training corpus is empty")
    if not 1 <= n <= 3:
        raise ValueError(f"n must be in 1..3, got {n}")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    counts: dict[str, int] = {}
    for text in corpus:
        for gram in _char_ngrams(text, n):
            counts[gram] = counts.get(gram, 0) + 1
    total = sum(counts.values())
    # Normalized over the observed alphabet; unseen n-grams get alpha/norm.
    norm = total + alpha * len(counts)
    logprob = {g: math.log((c + alpha) / norm) for g, c in sorted(counts.items())}
    return LanguageProfile(
        lang=lang,
        n=n,
        logprob=logprob,
        smoothing_alpha=alpha,
        unseen_logprob=math.log(alpha / norm),
    )


def script_fraction(text: str) -> dict[str, float]:
    """Fraction of the text's letters in each known Indic script block."""
    letters = [c for c in text if c.isalpha()]
    if not letters:
        return {name: 0.0 for name in _SCRIPT_RANGES}
    return {
        name: sum(1 for c in letters if lo <= ord(c) <= hi) / len(letters)
        for name, (lo, hi) in _SCRIPT_RANGES.items()
    }


def detect(text: str, profiles, script_threshold: float = 0.5) -> DetectionResult:
    """Length-normalized log-likelihood argmax, with the script shortcut."""
    if not profiles:
        raise NoProfiles("need at least one language profile")
    if not text:
        raise EmptyText("cannot detect language of empty text")

    fractions = script_fraction(text)
    for script in sorted(fractions):
        if fractions[script] >= script_threshold and fractions[script] > 0:
            lang = _SCRIPT_LANG[script]
            scores = {p.lang: float("-inf") for p in profiles}
            scores[lang] = 0.0
            return DetectionResult(best=lang, scores=scores)

    scores: dict[str, float] = {}
    for profile in profiles:
        grams = list(_char_ngrams(text, profile.n)) or [text]
        total = sum(profile.logprob.get(g, profile.unseen_logprob) for g in grams)
        scores[profile.lang] = total / len(grams)
    best_score = max(scores.values())
    best = min(lang for lang, s in scores.items() if s == best_score)
    return DetectionResult(best=best, scores=scores)


def assign_language_class(result: DetectionResult, dataset_lang: DatasetLang) -> str:
    """Dataset-specific rule for the not-in-intended-language class.

    Tamil/Malayalam datasets: only English or Hindi detections are flagged;
    everything else is assumed to belong to the dataset language. English:
    anything not detected as English is flagged.
    """
    if dataset_lang == DatasetLang.ENGLISH:
        return "InLanguage" if result.best == "en" else "NotLanguage"
    return "NotLanguage" if result.best in ("en", "hi") else "InLanguage"


def _escape(gram: str) -> str:
    return (
        gram.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unescape(safe: str) -> str:
    out, i = [], 0
    while i < len(safe):
        if safe[i] == "\\" and i + 1 < len(safe):
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}[safe[i + 1]])
            i += 2
        else:
            out.append(safe[i])
            i += 1
    return "".join(out)


def save_profile(profile: LanguageProfile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"# {PROFILE_VERSION}\tlang={profile.lang}\tn={profile.n}\t"
            f"alpha={profile.smoothing_alpha!r}\tcount={len(profile.logprob)}\t"
            f"unseen={profile.unseen_logprob!r}\n"
        )
        for gram in sorted(profile.logprob):
            fh.write(f"{_escape(gram)}\t{profile.logprob[gram]!r}\n")


def load_profile(path) -> LanguageProfile:
    with open(path, encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith(f"# {PROFILE_VERSION}"):
            raise ValueError(f"unrecognized profile header in {path}")
        meta = dict(part.split("=", 1) for part in header.split("\t")[1:])
        logprob = {}
        for line in fh:
            safe, value = line.rstrip("\n").split("\t")
            logprob[_unescape(safe)] = float(value)
    if len(logprob) != int(meta["count"]):
        raise ValueError(f"profile {path} truncated: {len(logprob)} != {meta['count']}")
    return LanguageProfile(
        lang=meta["lang"],
        n=int(meta["n"]),
        logprob=logprob,
        smoothing_alpha=float(meta["alpha"]),
        unseen_logprob=float(meta["unseen"]),
    )
