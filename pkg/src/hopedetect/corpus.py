"""Loading, validation, statistics and splitting of HopeEDI-style TSV data.

Input format: UTF-8, one comment per line, ``text<TAB>label`` (labeled mode)
or bare text (unlabeled mode). Embedded tabs are rejected rather than
guessed around, since the source files never quote fields.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    BadFraction,
    EmptyFile,
    MalformedRow,
    TooFewRows,
    UnknownLabel,
    UnlabeledInput,
)

SPLIT_PLAN_VERSION = "splitplan-v1"
# PRNG pinned to CPython's Mersenne Twister shuffle; recorded in headers so
# ensemble members stay reproducible across machines.
SPLIT_PRNG = "python-random-mt19937"


class Label(str, Enum):
    HOPE = "Hope"
    NOT_HOPE = "NotHope"
    NOT_LANGUAGE = "NotLanguage"


class DatasetLang(str, Enum):
    ENGLISH = "English"
    TAMIL = "Tamil"
    MALAYALAM = "Malayalam"


# Closed alias table (matched case-insensitively after trimming). Unknown
# strings are errors, never a fourth class.
_LABEL_ALIASES = {
    "hope_speech": Label.HOPE,
    "non_hope_speech": Label.NOT_HOPE,
    "not-english": Label.NOT_LANGUAGE,
    "not-tamil": Label.NOT_LANGUAGE,
    "not-malayalam": Label.NOT_LANGUAGE,
    "not-in-intended-language": Label.NOT_LANGUAGE,
}


def parse_label(raw: str, line_no: int | None = None) -> Label:
    key = raw.strip().lower()
    try:
        return _LABEL_ALIASES[key]
    except KeyError:
        raise UnknownLabel(raw, line_no) from None


@dataclass(frozen=True)
class LabeledComment:
    id: int
    text: str
    label: Label | None  # None == unlabeled (test data)
    dataset_lang: DatasetLang


@dataclass(frozen=True)
class DatasetStats:
    counts: dict[Label, int]
    total: int
    hope_to_nothope_ratio: Fraction | None


@dataclass(frozen=True)
class SplitPlan:
    seed: int
    fraction_train: Fraction
    assignments: dict[int, str]  # id -> "train" | "validation"

    def train_ids(self) -> list[int]:
        return sorted(i for i, p in self.assignments.items() if p == "train")

    def validation_ids(self) -> list[int]:
        return sorted(i for i, p in self.assignments.items() if p == "validation")

    def serialize(self) -> str:
        lines = [
            f"# {SPLIT_PLAN_VERSION} prng={SPLIT_PRNG} "
            f"seed={self.seed} fraction={self.fraction_train}"
        ]
        for i in sorted(self.assignments):
            lines.append(f"{i}\t{self.assignments[i]}")
        return "\n".join(lines) + "\n"


def load_tsv(path, dataset_lang: DatasetLang, labeled: bool = True) -> list[LabeledComment]:
    """Read one comment per line, in file order, ids starting at 0."""
    rows: list[LabeledComment] = []
    with open(path, encoding="utf-8", newline="") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if line == "":
                continue
            if labeled:
                fields = line.split("\t")
                if len(fields) != 2:
                    raise MalformedRow(
                        line_no, f"expected 2 tab-separated fields, got {len(fields)}"
                    )
                text, raw_label = fields
                label = parse_label(raw_label, line_no)
            else:
                if "\t" in line:
                    raise MalformedRow(line_no, "unexpected tab in unlabeled row")
                text, label = line, None
            if text.strip() == "":
                raise MalformedRow(line_no, "empty text field")
            rows.append(LabeledComment(len(rows), text, label, dataset_lang))
    if not rows:
        raise EmptyFile(f"no data lines in {path}")
    return rows


def compute_stats(data: list[LabeledComment]) -> DatasetStats:
    counts = {label: 0 for label in Label}
    for row in data:
        if row.label is None:
            raise UnlabeledInput(f"row {row.id} has no label")
        counts[row.label] += 1
    ratio = None
    if counts[Label.NOT_HOPE] > 0:
        ratio = Fraction(counts[Label.HOPE], counts[Label.NOT_HOPE])
    return DatasetStats(counts=counts, total=len(data), hope_to_nothope_ratio=ratio)


def make_split(data: list[LabeledComment], seed: int, fraction_train) -> SplitPlan:
    """Deterministic shuffled split: first ceil(fraction*n) permuted rows train."""
    fraction = Fraction(fraction_train).limit_denominator(10**9)
    if not 0 < fraction < 1:
        raise BadFraction(f"fraction_train must be in (0,1), got {fraction_train}")
    n = len(data)
    if n < 2:
        raise TooFewRows(f"need at least 2 rows, got {n}")
    ids = [row.id for row in data]
    random.Random(seed).shuffle(ids)
    n_train = math.ceil(fraction * n)
    n_train = min(max(n_train, 1), n - 1)  # both partitions non-empty
    assignments = {i: "train" for i in ids[:n_train]}
    assignments.update({i: "validation" for i in ids[n_train:]})
    return SplitPlan(seed=seed, fraction_train=fraction, assignments=assignments)
