import pytest

from dna_codec import corpus
from dna_codec.utils import bytes_to_bits


@pytest.fixture
def poem_bits_fixture():
    return bytes_to_bits(corpus.load_poem())


@pytest.fixture
def poem_file_fixture(tmp_path):
    path = tmp_path / "poem.txt"
    path.write_bytes(corpus.load_poem())
    return path
