import hashlib
from pathlib import Path

from dna_codec.exceptions import DomainError

CORPUS_DIR = Path(__file__).parent
POEM_FILE = "where_the_mind_is_without_fear.txt"
DEFAULT_IMAGE_SEED = 2


def load_poem() -> bytes:
    """Returns the bundled 490-byte poem used for the text experiment."""
    return (CORPUS_DIR / POEM_FILE).read_bytes()


def generate_image(width: int = 256, height: int = 256, seed: int = DEFAULT_IMAGE_SEED) -> bytes:
    """
    Returns width x height 8-bit grayscale pixels, row major, drawn from
    SHAKE-256 keyed by the size and seed. The output is identical on every
    platform.
    """
    if width <= 0 or height <= 0:
        raise DomainError(f"image size must be positive, got {width}x{height}")
    key = f"dna-codec-corpus:{width}x{height}:{seed}".encode("ascii")
    return hashlib.shake_256(key).digest(width * height)
