"""SDG identifiers and the supported input languages."""

from osdg.errors import InvalidSdg, UnsupportedLanguage

# SDG 17 exists in the goal framework but the dataset covers goals 1-16;
# 17 parses fine and is excluded from training by default.
MIN_SDG = 1
MAX_SDG = 17
TRAINABLE_SDGS = tuple(range(1, 17))

SUPPORTED_LANGUAGES = frozenset(
    ["en", "ar", "da", "nl", "fi", "fr", "de", "it", "ko", "pl", "pt", "ru", "es", "sv", "tr"]
)


def validate_sdg(value) -> int:
    """Return ``value`` as an SDG number in 1..17, or raise InvalidSdg."""
    try:
        sdg = int(value)
    except (TypeError, ValueError):
        raise InvalidSdg(f"not an integer SDG: {value!r}") from None
    if isinstance(value, float) and value != sdg:
        raise InvalidSdg(f"not an integer SDG: {value!r}")
    if not MIN_SDG <= sdg <= MAX_SDG:
        raise InvalidSdg(f"SDG out of range 1..17: {sdg}")
    return sdg


def excluded_from_training(sdg: int) -> bool:
    return sdg == 17


def validate_language(code: str) -> str:
    code = (code or "").strip().lower()
    if code not in SUPPORTED_LANGUAGES:
        raise UnsupportedLanguage(f"unsupported language: {code!r}")
    return code
