from __future__ import annotations

import base64
import binascii
import re
import struct
from fractions import Fraction
from pathlib import Path

from dna_codec.codec import ArchiveHeader, EncodedArchive, r_from_prefix
from dna_codec.constants import (ARCHIVE_MAGIC, ARCHIVE_VERSION, BASES,
                                 FASTA_LINE_WIDTH, SIDECAR_SUFFIX,
                                 ArchiveFormat, GcScope, MappingMethod)
from dna_codec.exceptions import (CorruptArchiveError, DomainError,
                                  MissingSidecarError)
from dna_codec.huffman import Codebook
from dna_codec.sequence import DnaSequence
from dna_codec.utils import atomic_write, atomic_write_many

_RECORD_NAME = re.compile(r"^strand_(\d+) r=(\d+)$")

_METHOD_CODES = list(MappingMethod)
_SCOPE_CODES = list(GcScope)

# version, method, m, alpha num/den, n, I, k (0 = none), original bits,
# stored bits, gc scope, codebook bytes
_CONTAINER_HEADER = struct.Struct("<BBBIIIBBQQBI")
_COUNT = struct.Struct("<I")
_PATTERN_LENGTH = struct.Struct("<H")


def sidecar_path(fasta_path: "str | Path") -> Path:
    fasta_path = Path(fasta_path)
    return fasta_path.with_name(fasta_path.name + SIDECAR_SUFFIX)


def format_fasta(records: dict, width: int = FASTA_LINE_WIDTH) -> str:
    """
    Formats name -> sequence records as FASTA text, wrapping every
    sequence at width characters.
    """
    lines = []
    for name, sequence in records.items():
        lines.append(f">{name}")
        sequence = str(sequence)
        lines.extend(sequence[i:i + width] for i in range(0, len(sequence), width))
    return "\n".join(lines) + "\n"


def parse_fasta(text: str) -> dict:
    """Returns the name -> sequence records of FASTA text, in file order."""
    records = {}
    name = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            name = line[1:].strip()
            if name in records:
                raise CorruptArchiveError(f"duplicate FASTA record {name}")
            records[name] = []
        elif name is None:
            raise CorruptArchiveError("sequence data before the first FASTA header")
        else:
            records[name].append(line)
    return {name: "".join(parts) for name, parts in records.items()}


def _header_fields(header: ArchiveHeader, strand_count: int) -> dict:
    codebook = header.codebook
    return {
        "magic": ARCHIVE_MAGIC.decode("ascii"),
        "version": ARCHIVE_VERSION,
        "method": header.method.value,
        "m": header.m,
        "alpha": str(header.alpha),
        "n": header.n,
        "max_iterations": header.max_iterations,
        "k": "" if header.k is None else header.k,
        "original_bit_length": header.original_bit_length,
        "compressed_bit_length": header.compressed_bit_length,
        "gc_scope": header.gc_scope.value,
        "forbidden_patterns": ",".join(header.forbidden_patterns),
        "strands": strand_count,
        "codebook": "" if codebook is None else base64.b64encode(codebook.to_bytes()).decode("ascii"),
    }


def format_sidecar(archive: EncodedArchive) -> str:
    fields = _header_fields(archive.header, len(archive.strands))
    return "".join(f"{key}={value}\n" for key, value in fields.items())


def parse_sidecar(text: str) -> tuple[ArchiveHeader, int]:
    """
    Reads the key=value sidecar back into a header.

    Returns:
        tuple[ArchiveHeader, int]: The header and the declared strand count.
    """
    fields = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CorruptArchiveError(f"malformed sidecar line {line!r}")
        fields[key.strip()] = value.strip()

    if fields.get("magic") != ARCHIVE_MAGIC.decode("ascii"):
        raise CorruptArchiveError("sidecar magic does not match")
    try:
        if int(fields["version"]) != ARCHIVE_VERSION:
            raise CorruptArchiveError(f"unsupported archive version {fields['version']}")
        codebook = None
        if fields.get("codebook"):
            codebook = Codebook.from_bytes(base64.b64decode(fields["codebook"], validate=True))
        patterns = fields.get("forbidden_patterns", "")
        header = ArchiveHeader(
            method=MappingMethod(fields["method"]),
            m=int(fields["m"]),
            alpha=Fraction(fields["alpha"]),
            n=int(fields["n"]),
            max_iterations=int(fields["max_iterations"]),
            k=int(fields["k"]) if fields.get("k") else None,
            original_bit_length=int(fields["original_bit_length"]),
            compressed_bit_length=int(fields["compressed_bit_length"]),
            codebook=codebook,
            gc_scope=GcScope(fields.get("gc_scope", GcScope.PAYLOAD_ONLY.value)),
            forbidden_patterns=tuple(p for p in patterns.split(",") if p),
        )
        return header, int(fields["strands"])
    except KeyError as error:
        raise CorruptArchiveError(f"sidecar is missing {error.args[0]}") from error
    except (ValueError, ZeroDivisionError, binascii.Error) as error:
        raise CorruptArchiveError(f"sidecar field is invalid: {error}") from error


def _strands_from_records(records: dict) -> tuple:
    strands = []
    for position, (name, bases) in enumerate(records.items()):
        match = _RECORD_NAME.match(name)
        if not match or int(match.group(1)) != position:
            raise CorruptArchiveError(f"unexpected FASTA record {name!r} at position {position}")
        try:
            strand = DnaSequence(bases)
        except DomainError as error:
            raise CorruptArchiveError(str(error), strand_index=position) from error
        if not len(strand) or r_from_prefix(strand.bases[0]) != int(match.group(2)):
            raise CorruptArchiveError("record r does not match its prefix", strand_index=position)
        strands.append(strand)
    return tuple(strands)


def write_fasta_archive(archive: EncodedArchive, path: "str | Path") -> list[Path]:
    path = Path(path)
    records = {
        f"strand_{index} r={r}": strand
        for index, (strand, r) in enumerate(zip(archive.strands, archive.r_values))
    }
    meta = sidecar_path(path)
    atomic_write_many({
        path: format_fasta(records).encode("ascii"),
        meta: format_sidecar(archive).encode("ascii"),
    })
    return [path, meta]


def read_fasta_archive(path: "str | Path") -> EncodedArchive:
    """
    Raises:
        MissingSidecarError: If the metadata sidecar does not exist.
        CorruptArchiveError: If the records and the sidecar disagree.
    """
    path = Path(path)
    meta = sidecar_path(path)
    if not meta.exists():
        raise MissingSidecarError(f"{meta} not found; a FASTA archive needs its sidecar")
    header, count = parse_sidecar(meta.read_text(encoding="ascii"))
    strands = _strands_from_records(parse_fasta(path.read_text(encoding="ascii")))
    if len(strands) != count:
        raise CorruptArchiveError(f"sidecar declares {count} strands, FASTA has {len(strands)}")
    return EncodedArchive(header, strands)


def pack_nucleotides(bases: str) -> bytes:
    """Packs bases two bits each (A=00 ... T=11), first base in the high bits."""
    padded = bases + "A" * (-len(bases) % 4)
    value = 0
    for base in padded:
        value = (value << 2) | BASES.index(base)
    return value.to_bytes(len(padded) // 4, "big")


def unpack_nucleotides(blob: bytes, count: int) -> str:
    value = int.from_bytes(blob, "big")
    total = len(blob) * 4
    bases = [BASES[(value >> (2 * (total - 1 - i))) & 3] for i in range(total)]
    return "".join(bases[:count])


def container_bytes(archive: EncodedArchive) -> bytes:
    header = archive.header
    codebook = b"" if header.codebook is None else header.codebook.to_bytes()
    parts = [
        ARCHIVE_MAGIC,
        _CONTAINER_HEADER.pack(
            ARCHIVE_VERSION,
            _METHOD_CODES.index(header.method),
            header.m,
            header.alpha.numerator,
            header.alpha.denominator,
            header.n,
            header.max_iterations,
            header.k or 0,
            header.original_bit_length,
            header.compressed_bit_length,
            _SCOPE_CODES.index(header.gc_scope),
            len(codebook),
        ),
        codebook,
        _COUNT.pack(len(header.forbidden_patterns)),
    ]
    for pattern in header.forbidden_patterns:
        parts += [_PATTERN_LENGTH.pack(len(pattern)), pattern.encode("ascii")]
    parts.append(_COUNT.pack(len(archive.strands)))
    for strand in archive.strands:
        parts += [_COUNT.pack(len(strand)), pack_nucleotides(strand.bases)]
    return b"".join(parts)


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.blob):
            raise CorruptArchiveError(f"container truncated at byte {self.offset}")
        chunk = self.blob[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, layout: struct.Struct) -> tuple:
        return layout.unpack(self.take(layout.size))


def archive_from_container(blob: bytes) -> EncodedArchive:
    reader = _Reader(blob)
    if reader.take(len(ARCHIVE_MAGIC)) != ARCHIVE_MAGIC:
        raise CorruptArchiveError("container magic does not match")
    (version, method, m, alpha_num, alpha_den, n, iterations, k,
     original, stored, scope, codebook_size) = reader.unpack(_CONTAINER_HEADER)
    if version != ARCHIVE_VERSION:
        raise CorruptArchiveError(f"unsupported archive version {version}")
    if method >= len(_METHOD_CODES) or scope >= len(_SCOPE_CODES) or not alpha_den:
        raise CorruptArchiveError("container header holds an unknown code")
    codebook = Codebook.from_bytes(reader.take(codebook_size)) if codebook_size else None
    patterns = []
    for _ in range(reader.unpack(_COUNT)[0]):
        size = reader.unpack(_PATTERN_LENGTH)[0]
        patterns.append(reader.take(size).decode("ascii"))

    strands = []
    for _ in range(reader.unpack(_COUNT)[0]):
        count = reader.unpack(_COUNT)[0]
        strands.append(DnaSequence(unpack_nucleotides(reader.take(-(-count // 4)), count)))
    if reader.offset != len(blob):
        raise CorruptArchiveError(f"{len(blob) - reader.offset} trailing bytes after the last strand")

    header = ArchiveHeader(
        method=_METHOD_CODES[method],
        m=m,
        alpha=Fraction(alpha_num, alpha_den),
        n=n,
        max_iterations=iterations,
        k=k or None,
        original_bit_length=original,
        compressed_bit_length=stored,
        codebook=codebook,
        gc_scope=_SCOPE_CODES[scope],
        forbidden_patterns=tuple(patterns),
    )
    return EncodedArchive(header, tuple(strands))


def write_archive(
    archive: EncodedArchive, path: "str | Path", fmt: ArchiveFormat = ArchiveFormat.FASTA
) -> list[Path]:
    """Writes the archive and returns every file written."""
    if ArchiveFormat(fmt) is ArchiveFormat.CONTAINER:
        atomic_write(path, container_bytes(archive))
        return [Path(path)]
    return write_fasta_archive(archive, path)


def read_archive(path: "str | Path") -> EncodedArchive:
    """Reads either archive format, telling them apart by the container magic."""
    path = Path(path)
    with open(path, "rb") as file:
        head = file.read(len(ARCHIVE_MAGIC))
    if head == ARCHIVE_MAGIC:
        return archive_from_container(path.read_bytes())
    return read_fasta_archive(path)
