class DnaCodecError(Exception):
    """Base class for every error raised by the codec."""


class DomainError(DnaCodecError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(DomainError):
    """A value does not fit into the requested number of M-ary digits."""


class DecodeError(DnaCodecError):
    """
    A strand (or part of one) cannot be read back.

    Args:
        message (str): Human readable diagnostic.
        strand_index (int | None): Index of the offending strand, if known.
        tuple_ (str | None): Offending nucleotide tuple, if any.
    """

    def __init__(
        self,
        message: str,
        strand_index: "int | None" = None,
        tuple_: "str | None" = None,
    ):
        super().__init__(message)
        self.strand_index = strand_index
        self.tuple = tuple_

    def at_strand(self, strand_index: int) -> "DecodeError":
        self.strand_index = strand_index
        return self

    def __str__(self):
        message = super().__str__()
        if self.strand_index is not None:
            return f"strand {self.strand_index}: {message}"
        return message


class SymbolRangeError(DecodeError):
    """An 11-bit block decoded to a value of 2048 or more."""


class CorruptArchiveError(DecodeError):
    """The archive is internally inconsistent."""


class EncodingFailedError(DnaCodecError):
    def __init__(self, chunk_index: int, iterations: int):
        super().__init__(
            f"chunk {chunk_index} did not satisfy the constraints within {iterations} iterations"
        )
        self.chunk_index = chunk_index
        self.iterations = iterations


class InfeasibleError(DnaCodecError):
    """No alpha up to 0.5 reaches the requested success probability."""


class MissingSidecarError(CorruptArchiveError):
    """A FASTA archive was given without its metadata sidecar."""
