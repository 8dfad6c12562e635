"""Comment normalization: specials, emoji, lowercasing, whitespace.

Rule order is fixed (specials -> emoji -> lowercase -> collapse whitespace)
because the order changes outputs and pinning it keeps tests exact.
Native-script Indic characters pass through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

# Emoji blocks plus variation selectors and ZWJ. Closed, enumerable set.
_EMOJI_RANGES = (
    (0x1F600, 0x1F64F),  # Emoticons
    (0x1F300, 0x1F5FF),  # Misc Symbols and Pictographs
    (0x1F680, 0x1F6FF),  # Transport and Map
    (0x1F900, 0x1F9FF),  # Supplemental Symbols and Pictographs
    (0x2700, 0x27BF),    # Dingbats
    (0xFE00, 0xFE0F),    # Variation Selectors
    (0x200D, 0x200D),    # Zero Width Joiner
)


def is_emoji(cp: str) -> bool:
    """True iff the code point falls in the configured emoji block list."""
    o = ord(cp)
    return any(lo <= o <= hi for lo, hi in _EMOJI_RANGES)


@dataclass(frozen=True)
class NormalizationConfig:
    strip_specials: bool = True
    strip_emoji: bool = True
    lowercase: bool = True
    collapse_whitespace: bool = True


# Tamil, Malayalam and Devanagari blocks: preserved wholesale so combining
# vowel signs and viramas survive the special-character pass.
_INDIC_RANGES = ((0x0900, 0x097F), (0x0B80, 0x0BFF), (0x0D00, 0x0D7F))


def _is_special(cp: str) -> bool:
    # Anything that is not a letter (any script), digit, whitespace, or a
    # native-script Indic code point.
    if cp.isalpha() or cp.isdigit() or cp.isspace():
        return False
    o = ord(cp)
    return not any(lo <= o <= hi for lo, hi in _INDIC_RANGES)


def normalize_text(raw: str, cfg: NormalizationConfig = NormalizationConfig()) -> str:
    out = raw
    if cfg.strip_specials:
        out = "".join(c if not _is_special(c) else " " for c in out)
    if cfg.strip_emoji:
        out = "".join(c for c in out if not is_emoji(c))
    if cfg.lowercase:
        out = out.lower()
    if cfg.collapse_whitespace:
        out = " ".join(out.split())
    return out
