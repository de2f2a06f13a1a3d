import os
import tempfile
from pathlib import Path

from dna_codec.exceptions import DomainError


def bytes_to_bits(data: bytes) -> str:
    """
    Returns the bits of the given bytes as a '0'/'1' string, most
    significant bit of every byte first.
    """
    return "".join(f"{byte:08b}" for byte in data)


def bits_to_bytes(bits: str) -> bytes:
    """
    Packs a '0'/'1' string into bytes. The bit length must be a multiple of 8.

    Raises:
        DomainError: If the length is not a whole number of bytes.
    """
    if len(bits) % 8:
        raise DomainError(f"{len(bits)} bits is not a whole number of bytes")
    return int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""


def int_to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def xor_bits(a: str, b: str) -> str:
    if len(a) != len(b):
        raise DomainError(f"cannot XOR {len(a)} bits with {len(b)} bits")
    if not a:
        return ""
    return int_to_bits(int(a, 2) ^ int(b, 2), len(a))


def hamming_distance(a: str, b: str) -> int:
    return sum(x != y for x, y in zip(a, b)) + abs(len(a) - len(b))


def check_bits(bits: str) -> str:
    if set(bits) - {"0", "1"}:
        raise DomainError("bitstring may only contain '0' and '1'")
    return bits


def get_bold_text(text):
    """
    Returns the provided text formatted to appear as bold when printed in the console.

    Args:
        text (str): The text to be formatted as bold.

    Returns:
        str: The formatted text, wrapped in ANSI escape sequences to achieve bold appearance.
    """
    return f"\033[01m{text}\033[0m"


def env_default(name: str, default, cast=str):
    """
    Returns the environment value for name converted with cast, or default
    when the variable is not set.

    Raises:
        DomainError: If the variable is set but cannot be converted.
    """
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError as error:
        raise DomainError(f"{name}={raw!r} is not valid: {error}") from error


def atomic_write(path: "str | Path", data: bytes) -> None:
    """
    Writes data next to path under a temporary name and renames it into
    place, so readers never observe a partial file.
    """
    atomic_write_many({path: data})


def atomic_write_many(files: dict) -> None:
    """
    Stages every path -> data entry as a temporary file and renames them
    into place only once all of them were written. On failure no target
    is touched and the temporaries are removed.
    """
    staged = []
    try:
        for path, data in files.items():
            path = Path(path)
            fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            staged.append((tmp_name, path))
            with os.fdopen(fd, "wb") as file:
                file.write(data)
        for tmp_name, path in staged:
            os.replace(tmp_name, path)
    except BaseException:
        for tmp_name, _ in staged:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
        raise


def format_table(headers, rows) -> str:
    """Renders rows as a left-aligned plain text table under the given headers."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
