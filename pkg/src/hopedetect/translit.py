"""Latin-to-native-script transliteration via greedy longest-match tables.

Social-media romanization is non-standard, so the mapping ships as a data
file (one ``latin<TAB>native`` entry per line) that users can refine without
code changes. Native-script characters, digits, whitespace, and unmatched
Latin characters all pass through unchanged; noisy text must never abort
the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

_BLOCKS = {
    "Tamil": (0x0B80, 0x0BFF),
    "Malayalam": (0x0D00, 0x0D7F),
    "Devanagari": (0x0900, 0x097F),
}

_BUNDLED_SCHEMES = {"ta": "tamil.tsv", "ml": "malayalam.tsv"}


def script_of(cp: str) -> str:
    """Unicode block classification: Latin, Tamil, Malayalam, Devanagari, Other."""
    o = ord(cp)
    if (0x0041 <= o <= 0x005A) or (0x0061 <= o <= 0x007A) or (0x00C0 <= o <= 0x024F):
        return "Latin"
    for name, (lo, hi) in _BLOCKS.items():
        if lo <= o <= hi:
            return name
    return "Other"


@dataclass(frozen=True)
class SchemeTable:
    lang: str
    entries: dict[str, str]
    max_key_len: int


def make_scheme_table(lang: str, entries: dict[str, str]) -> SchemeTable:
    if not entries:
        raise ValueError("scheme table has no entries")
    if any(k == "" for k in entries):
        raise ValueError("scheme table keys must be non-empty")
    return SchemeTable(
        lang=lang, entries=dict(entries), max_key_len=max(map(len, entries))
    )


def load_scheme_table(path, lang: str) -> SchemeTable:
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            latin, native = line.split("\t")
            entries[latin] = native
    return make_scheme_table(lang, entries)


def bundled_scheme_table(lang: str) -> SchemeTable:
    """Scheme table shipped with the package ('ta' or 'ml')."""
    name = _BUNDLED_SCHEMES[lang]
    ref = resources.files("hopedetect.data").joinpath(name)
    with resources.as_file(ref) as path:
        return load_scheme_table(path, lang)


def transliterate(text: str, table: SchemeTable) -> str:
    """Greedy longest-match over table keys, left to right.

    Only Latin characters are candidates for matching; everything else is
    copied through byte-identically.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        if script_of(text[i]) != "Latin":
            out.append(text[i])
            i += 1
            continue
        matched = False
        for length in range(min(table.max_key_len, n - i), 0, -1):
            candidate = text[i : i + length]
            if candidate in table.entries:
                out.append(table.entries[candidate])
                i += length
                matched = True
                break
        if not matched:
            out.append(text[i])
            i += 1
    return "".join(out)
